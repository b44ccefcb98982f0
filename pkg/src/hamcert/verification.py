"""Numerical verification suites for every statistical guarantee.

Each suite draws seeded random instances, checks one guarantee at its
stated tolerance, and returns a :class:`SuiteResult`.  Monte Carlo checks
use three-sigma envelopes around exact closed forms; exact inequalities
(theorems) must hold in every trial.  The command-line ``verify``
subcommand and the acceptance test module both run these functions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import certifier as cert
from .bell import (
    bell_measure_choi,
    identity_prob_spectral,
    identity_prob_trace,
    outcome_pauli_label,
)
from .dense import (
    eigenvalues,
    evolve,
    hoffman_wielandt_gap,
    normalized_frobenius,
    pauli_matrix,
    to_dense,
)
from .gaps import GapStatConfig, find_drop_time, lambda_stat, verify_stability
from .instances import random_diagonal_sum, random_hermitian, random_pauli_sum
from .moments import function_moments, verify_gap_bound, walsh_eigenvalues
from .oracle import EvolutionOracle, OracleMode
from .pauli import PauliSum, frobenius_norm, scale, subtract
from .trotter import TrotterPlan, trotter_error, trotter_evolve, twirl_conjugators
from .twirl import apply_twirl, project_effective, sample_subspace, sample_twirl_paulis

__all__ = ["SUITES", "SuiteResult", "run_suite", "suite_names"]

_AXIS_CODE = {"X": 0, "Y": 1, "Z": 2}
_MAX_RECORDED_FAILURES = 10


@dataclass
class SuiteResult:
    """Outcome of one verification suite."""

    name: str
    passed: bool = True
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        if len(self.failures) < _MAX_RECORDED_FAILURES:
            self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        body = " ".join(f"{k}={v}" for k, v in self.details.items())
        line = f"[{status}] {self.name}: {body}" if body else f"[{status}] {self.name}"
        if self.failures:
            line += " | " + "; ".join(self.failures)
        return line


def suite_bell(instances: int = 100, mc_shots: int = 100_000, seed: int = 0) -> SuiteResult:
    """Identity-outcome probability: spectral form vs trace form vs sampling.

    The spectral and trace routes must agree to 1e-10 on random local
    instances, the measured identity frequency must sit within three
    binomial sigmas of the trace value, and the full outcome histogram
    must pass a 1% chi-square test against the trace-formula weights.
    """
    rng = np.random.default_rng(seed)
    result = SuiteResult("bell")
    worst = 0.0
    for i in range(instances):
        n = 1 + i % 4
        h = random_pauli_sum(n, min(n, 2), rng)
        t = float(rng.uniform(0.0, 20.0))
        spec = eigenvalues(to_dense(h))
        u = evolve(h, t)
        dev = abs(identity_prob_spectral(spec, t) - identity_prob_trace(u))
        worst = max(worst, dev)
        if dev > 1e-10:
            result.fail(f"spectral/trace deviation {dev:.2e} at n={n}, t={t:.3f}")
    result.details["instances"] = instances
    result.details["max_route_deviation"] = f"{worst:.2e}"

    for n in (1, 2, 3):
        h = random_pauli_sum(n, min(n, 2), rng)
        t = float(rng.uniform(0.0, 20.0))
        u = evolve(h, t)
        p = identity_prob_trace(u)
        outcomes = bell_measure_choi(u, rng, shots=mc_shots)
        freq = outcomes.count("0" * (2 * n)) / mc_shots
        sigma = math.sqrt(max(p * (1.0 - p) / mc_shots, 0.0))
        if abs(freq - p) > 3.0 * sigma + 1e-9:
            result.fail(
                f"identity frequency {freq:.5f} vs p={p:.5f} "
                f"outside 3 sigma at n={n}"
            )

    n = 2
    h = random_pauli_sum(n, 2, rng)
    t = float(rng.uniform(0.0, 20.0))
    u = evolve(h, t)
    counts: dict[str, int] = {}
    for o in bell_measure_choi(u, rng, shots=mc_shots):
        label = outcome_pauli_label(o)
        counts[label] = counts.get(label, 0) + 1
    observed, expected = [], []
    pooled_obs, pooled_exp = 0.0, 0.0
    for label in ("".join(p) for p in itertools.product("IXYZ", repeat=n)):
        exp = abs(np.trace(pauli_matrix(label) @ u)) ** 2 / 4**n * mc_shots
        obs = counts.get(label, 0)
        if exp >= 5.0:
            observed.append(obs)
            expected.append(exp)
        else:
            pooled_obs += obs
            pooled_exp += exp
    if pooled_exp > 0:
        observed.append(pooled_obs)
        expected.append(pooled_exp)
    expected_arr = np.asarray(expected, dtype=float)
    observed_arr = np.asarray(observed, dtype=float)
    expected_arr *= observed_arr.sum() / expected_arr.sum()
    pvalue = float(stats.chisquare(observed_arr, expected_arr).pvalue)
    result.details["chi2_pvalue"] = f"{pvalue:.4f}"
    if pvalue < 0.01:
        result.fail(f"chi-square p-value {pvalue:.4f} below the 1% level")
    return result


def suite_gapbound(trials_per_k: int = 500, seed: int = 0) -> SuiteResult:
    """Diagonal gap guarantee: pair fraction at the norm is >= 9^-k / 4."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("gapbound")
    checked = 0
    for k in (1, 2, 3):
        for _ in range(trials_per_k):
            n = int(rng.integers(max(2, k), 9))
            h = random_diagonal_sum(n, k, rng)
            checked += 1
            if not verify_gap_bound(h, k):
                result.fail(f"gap bound violated at n={n}, k={k}: {h!r}")
    result.details["instances"] = checked
    return result


def suite_basis(draws: int = 100_000, instances_per_k: int = 5, seed: int = 0) -> SuiteResult:
    """Random subspace selection: survival rates and norm retention.

    A weight-w term survives into the subspace with probability 3^-w; the
    retained squared norm matches its closed-form mean; and the retained
    norm clears the anti-concentration threshold with probability at
    least 1/(4*3^k).  All checks at three sigma.
    """
    if draws < 100:
        raise ValueError(
            f"basis suite needs at least 100 draws for its envelopes, got {draws}."
        )
    rng = np.random.default_rng(seed)
    result = SuiteResult("basis")
    n = 4
    fixed = PauliSum(n, {"ZIII": 0.5, "XYII": 0.4, "XYZI": 0.3})
    axes_draws = rng.integers(0, 3, size=(draws, n))
    for label, _ in fixed.items():
        support = [(i, _AXIS_CODE[ch]) for i, ch in enumerate(label) if ch != "I"]
        survive = np.ones(draws, dtype=bool)
        for site, code in support:
            survive &= axes_draws[:, site] == code
        w = len(support)
        p = 3.0 ** (-w)
        sigma = math.sqrt(p * (1.0 - p) / draws)
        freq = float(survive.mean())
        if abs(freq - p) > 3.0 * sigma:
            result.fail(
                f"survival of weight-{w} term: {freq:.5f} vs 3^-{w}={p:.5f}"
            )
    min_margin = math.inf
    for k in (1, 2):
        for _ in range(instances_per_k):
            h = random_pauli_sum(n, k, rng)
            axes_draws = rng.integers(0, 3, size=(draws, n))
            retained_sq = np.zeros(draws)
            exact_mean = 0.0
            for label, coeff in h.items():
                support = [
                    (i, _AXIS_CODE[ch]) for i, ch in enumerate(label) if ch != "I"
                ]
                survive = np.ones(draws, dtype=bool)
                for site, code in support:
                    survive &= axes_draws[:, site] == code
                retained_sq += (coeff * coeff) * survive
                exact_mean += coeff * coeff * 3.0 ** (-len(support))
            sigma_mean = float(retained_sq.std(ddof=1)) / math.sqrt(draws)
            if abs(float(retained_sq.mean()) - exact_mean) > 3.0 * sigma_mean:
                result.fail(f"mean retained norm off closed form at k={k}")
            threshold_sq = frobenius_norm(h) ** 2 / (2.0 * 3.0**k)
            freq = float((retained_sq >= threshold_sq).mean())
            bound = 1.0 / (4.0 * 3.0**k)
            sigma_f = math.sqrt(max(freq * (1.0 - freq) / draws, 1e-18))
            min_margin = min(min_margin, freq - bound)
            if freq < bound - 3.0 * sigma_f - 1e-12:
                result.fail(
                    f"retention probability {freq:.5f} below bound {bound:.5f} "
                    f"at k={k}"
                )
    result.details["draws"] = draws
    result.details["min_retention_margin"] = f"{min_margin:.4f}"
    return result


def suite_twirl(transcripts: int = 20_000, max_steps: int = 6, seed: int = 0) -> SuiteResult:
    """Twirl contraction: residual norm mean and its Markov tail.

    The off-subspace squared norm surviving ``T`` steps has exact mean
    ``2^-T`` times the initial off-subspace squared norm, and stays below
    twice ``2^-T/2`` of the full initial norm with probability >= 3/4.
    """
    if transcripts < 100:
        raise ValueError(
            "twirl suite needs at least 100 transcripts for its envelopes, "
            f"got {transcripts}."
        )
    rng = np.random.default_rng(seed)
    result = SuiteResult("twirl")
    n = 3
    h1 = random_pauli_sum(n, 2, rng, num_terms=6)
    subspace = sample_subspace(n, rng)
    _, off = project_effective(h1, subspace)
    attempts = 0
    while not off and attempts < 10:
        subspace = sample_subspace(n, rng)
        _, off = project_effective(h1, subspace)
        attempts += 1
    if not off:
        result.fail("could not find a subspace with off-subspace terms")
        return result
    off_terms = [
        (
            coeff,
            np.array(
                [
                    i
                    for i, ch in enumerate(label)
                    if ch != "I" and ch != subspace.axes[i]
                ],
                dtype=int,
            ),
        )
        for label, coeff in off.items()
    ]
    off_norm_sq = frobenius_norm(off) ** 2
    h1_norm_sq = frobenius_norm(h1) ** 2
    for steps in range(1, max_steps + 1):
        bits = rng.integers(0, 2, size=(transcripts, steps, n))
        residual_sq = np.zeros(transcripts)
        for coeff, sites in off_terms:
            parity = bits[:, :, sites].sum(axis=2) % 2
            survive = ~np.any(parity, axis=1)
            residual_sq += (coeff * coeff) * survive
        exact = 2.0 ** (-steps) * off_norm_sq
        sigma = float(residual_sq.std(ddof=1)) / math.sqrt(transcripts)
        if abs(float(residual_sq.mean()) - exact) > 3.0 * sigma:
            result.fail(
                f"residual mean {residual_sq.mean():.5e} vs exact {exact:.5e} "
                f"at T={steps}"
            )
        threshold_sq = 4.0 * 2.0 ** (-steps) * h1_norm_sq
        freq = float((residual_sq <= threshold_sq).mean())
        sigma_f = math.sqrt(max(freq * (1.0 - freq) / transcripts, 1e-18))
        if freq < 0.75 - 3.0 * sigma_f - 1e-12:
            result.fail(f"Markov tail {freq:.4f} below 3/4 at T={steps}")
    result.details["transcripts"] = transcripts
    result.details["steps_checked"] = max_steps
    return result


def suite_stability(pairs: int = 1000, stability_trials: int = 500, seed: int = 0) -> SuiteResult:
    """Eigenvalue displacement bound and the gap-fraction stability bound.

    Sorted-pairing mean-square displacement never exceeds the squared
    normalized Frobenius distance, and the half-threshold pair fraction
    of a perturbed operator never falls below the quadratic degradation
    bound.  Both are exact inequalities: zero violations allowed.
    """
    rng = np.random.default_rng(seed)
    result = SuiteResult("stability")
    for _ in range(pairs):
        n = int(rng.integers(1, 5))
        a = random_hermitian(2**n, rng)
        b = random_hermitian(2**n, rng)
        gap = hoffman_wielandt_gap(a, b)
        bound = normalized_frobenius(a - b) ** 2
        if gap > bound + 1e-9:
            result.fail(f"displacement {gap:.6e} exceeds {bound:.6e} at n={n}")
    for _ in range(stability_trials):
        n = int(rng.integers(1, 5))
        a = random_pauli_sum(n, min(n, 2), rng)
        b_raw = random_pauli_sum(n, min(n, 2), rng)
        eps = frobenius_norm(a)
        target = float(rng.uniform(0.0, eps / 8.0))
        b = scale(b_raw, target / frobenius_norm(b_raw))
        if not verify_stability(a, b, eps):
            result.fail(f"stability bound violated at n={n}")
    diag_trials = max(stability_trials // 5, 1)
    for _ in range(diag_trials):
        n = int(rng.integers(2, 5))
        a = random_diagonal_sum(n, 2, rng)
        b_raw = random_pauli_sum(n, min(n, 2), rng, letters="XY")
        eps = frobenius_norm(a)
        target = float(rng.uniform(0.0, eps / 8.0))
        b = scale(b_raw, target / frobenius_norm(b_raw))
        if not verify_stability(a, b, eps):
            result.fail(f"stability bound violated on diagonal instance, n={n}")
    result.details["hermitian_pairs"] = pairs
    result.details["perturbation_trials"] = stability_trials + diag_trials
    return result


def suite_droptime(reps: int = 10_000, grid_points: int = 200_001, seed: int = 0) -> SuiteResult:
    """Drop-time search: dip measure and randomized-finder failure rate.

    Whenever the pair fraction at ``eps`` is ``d``, the times in
    ``[0, 2/eps]`` where the identity probability falls to ``1 - d/4``
    fill at least a third of the interval (grid-resolved, with a small
    grid slack), and the randomized finder misses with probability at
    most delta.
    """
    rng = np.random.default_rng(seed)
    result = SuiteResult("droptime")
    cases: list[tuple[np.ndarray, float]] = [
        (np.array([-0.5, 0.5]), 1.0),
        (np.array([-1.0, 1.0]), 1.0),
        (np.array([-2.0, -1.0, 1.0, 2.0]), 1.0),
    ]
    for n in (4, 5, 6):
        h = random_diagonal_sum(n, 2, rng)
        cases.append((walsh_eigenvalues(h), frobenius_norm(h)))
    delta = 0.1
    min_measure = math.inf
    max_fail_rate = 0.0
    for spec, eps in cases:
        d = lambda_stat(spec, eps)
        if d <= 0.0:
            result.fail(f"degenerate case: pair fraction 0 at eps={eps}")
            continue
        target = 1.0 - d / 4.0
        ts = np.linspace(0.0, 2.0 / eps, grid_points)
        hits = 0
        for start in range(0, grid_points, 20_000):
            chunk = ts[start : start + 20_000]
            amps = np.exp(1j * np.outer(chunk, spec)).sum(axis=1)
            ivals = np.abs(amps) ** 2 / spec.size**2
            hits += int((ivals <= target).sum())
        measure = hits / grid_points
        min_measure = min(min_measure, measure)
        if measure < 1.0 / 3.0 - 1e-3:
            result.fail(f"dip measure {measure:.4f} below 1/3")
        cfg = GapStatConfig(epsilon=eps, d=d, delta=delta)
        misses = sum(
            1 for _ in range(reps) if find_drop_time(spec, cfg, rng) is None
        )
        rate = misses / reps
        max_fail_rate = max(max_fail_rate, rate)
        if rate > delta + 3.0 * math.sqrt(delta * (1.0 - delta) / reps):
            result.fail(f"finder failure rate {rate:.4f} above delta={delta}")
    result.details["cases"] = len(cases)
    result.details["min_dip_measure"] = f"{min_measure:.4f}"
    result.details["max_finder_failure_rate"] = f"{max_fail_rate:.4f}"
    return result


def suite_trotter(seed: int = 0, steps_list: tuple[int, ...] = (8, 16, 32, 64), t: float = 1.0) -> SuiteResult:
    """Product-formula quality: second-order decay, exact time accounting.

    The operator-norm error must fall roughly fourfold per step doubling
    (log-log slope in [-2.4, -1.6]), the ledger charge per shot must equal
    the shot duration to 1e-12, and the trace deviation can never exceed
    the operator-norm error.
    """
    rng = np.random.default_rng(seed)
    result = SuiteResult("trotter")
    n = 3
    h0 = random_pauli_sum(n, 2, rng, num_terms=5)
    hidden = random_pauli_sum(n, 2, rng, num_terms=5)
    subspace = sample_subspace(n, rng)
    paulis = sample_twirl_paulis(subspace, 3, rng)
    transcript = apply_twirl(subtract(hidden, h0), subspace, paulis)
    sectors = twirl_conjugators(subspace, paulis)
    op_errors = []
    for steps in steps_list:
        oracle = EvolutionOracle(hidden, OracleMode.TROTTERIZED)
        plan = TrotterPlan(sectors, steps, t)
        v = trotter_evolve(oracle, h0, plan)
        charge_dev = abs(oracle.ledger.total_time - t)
        if charge_dev > 1e-12:
            result.fail(f"ledger charge off by {charge_dev:.2e} at steps={steps}")
        err = trotter_error(v, transcript.twirled, t)
        if err.bell_deviation > err.op_norm + 1e-12:
            result.fail(f"trace deviation exceeds operator norm at steps={steps}")
        op_errors.append(err.op_norm)
    for i in range(len(op_errors) - 1):
        ratio = op_errors[i] / op_errors[i + 1]
        if not 2.5 <= ratio <= 5.5:
            result.fail(
                f"error ratio {ratio:.2f} outside [2.5, 5.5] between "
                f"steps {steps_list[i]} and {steps_list[i + 1]}"
            )
    slope = float(np.polyfit(np.log(steps_list), np.log(op_errors), 1)[0])
    result.details["loglog_slope"] = f"{slope:.3f}"
    result.details["errors"] = "[" + ", ".join(f"{e:.3e}" for e in op_errors) + "]"
    if not -2.4 <= slope <= -1.6:
        result.fail(f"convergence slope {slope:.3f} outside [-2.4, -1.6]")
    return result


def suite_endtoend(runs: int = 100, seed: int = 0) -> SuiteResult:
    """Full protocol: completeness, soundness, and the ledger ceiling.

    With equal Hamiltonians every seeded run must accept with all-ones
    identity fractions; with a normalized-Frobenius separation at the
    threshold the reject rate must reach 1 - delta; and the ledger can
    never exceed rounds * shots * time_cap.
    """
    result = SuiteResult("endtoend")
    h0 = PauliSum(1, {"X": -0.1})
    same = PauliSum(1, {"X": -0.1})
    far = PauliSum(1, {"X": 0.1})
    accepts = 0
    for s in range(runs):
        cfg = cert.CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=seed + s)
        oracle = EvolutionOracle(same, OracleMode.EXACT_EFFECTIVE)
        report = cert.certify(h0, oracle, cfg)
        ceiling = cfg.rounds * cfg.shots_per_round * cfg.time_cap
        if report.ledger_total_time > ceiling * (1 + 1e-12):
            result.fail(f"ledger {report.ledger_total_time} above ceiling {ceiling}")
        if report.verdict == "ACCEPT" and all(
            rec.identity_fraction == 1.0 for rec in report.records
        ):
            accepts += 1
    rejects = 0
    for s in range(runs):
        cfg = cert.CertificationConfig(
            epsilon=0.2, delta=0.2, k=1, seed=seed + 10_000 + s
        )
        oracle = EvolutionOracle(far, OracleMode.EXACT_EFFECTIVE)
        report = cert.certify(h0, oracle, cfg)
        ceiling = cfg.rounds * cfg.shots_per_round * cfg.time_cap
        if report.ledger_total_time > ceiling * (1 + 1e-12):
            result.fail(f"ledger {report.ledger_total_time} above ceiling {ceiling}")
        if report.verdict == "REJECT":
            rejects += 1
    result.details["accept_rate"] = f"{accepts}/{runs}"
    result.details["reject_rate"] = f"{rejects}/{runs}"
    if accepts != runs:
        result.fail(f"completeness: only {accepts}/{runs} accepted")
    if rejects < math.ceil(0.8 * runs):
        result.fail(f"soundness: only {rejects}/{runs} rejected (need >= 80%)")
    return result


def suite_heisenberg(repeats: int = 8, seed: int = 0) -> SuiteResult:
    """Total-time scaling: ledger total fits a 1/epsilon power law."""
    result = SuiteResult("heisenberg")
    h0 = PauliSum(1, {"Z": 0.3})
    direction = PauliSum(1, {"X": 1.0})
    cfg = cert.CertificationConfig(epsilon=0.4, delta=0.2, k=1, seed=seed)
    eps_list = [0.4, 0.2, 0.1, 0.05]
    sweep = cert.sweep_epsilon(h0, direction, eps_list, cfg, repeats=repeats)
    result.details["loglog_slope"] = f"{sweep.loglog_slope:.4f}"
    if not -1.2 <= sweep.loglog_slope <= -0.8:
        result.fail(f"slope {sweep.loglog_slope:.4f} outside [-1.2, -0.8]")
    for eps in eps_list:
        rows = [r for r in sweep.rows if r.epsilon == eps]
        rate = sum(1 for r in rows if r.verdict == "REJECT") / len(rows)
        if rate < 0.8:
            result.fail(f"reject rate {rate:.2f} below 1-delta at eps={eps}")
    result.details["rows"] = len(sweep.rows)
    return result


def suite_bonami(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Fourth-moment bound for random low-degree multilinear functions."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("bonami")
    checked = 0
    worst_ratio = 0.0
    for i in range(trials):
        k = 1 + i % 3
        v = int(rng.integers(max(2, k), 13))
        masks: set[int] = set()
        for _ in range(int(rng.integers(1, 13))):
            w = int(rng.integers(1, k + 1))
            sites = rng.choice(v, size=w, replace=False)
            masks.add(int(sum(1 << int(s) for s in sites)))
        table = np.zeros(2**v)
        for mask in masks:
            table[mask] = rng.normal()
        m2, m4 = function_moments(table)
        if m2 <= 0.0:
            continue
        checked += 1
        ratio = m4 / (9.0**k * m2 * m2)
        worst_ratio = max(worst_ratio, ratio)
        if ratio > 1.0 + 1e-9:
            result.fail(f"fourth-moment bound violated: ratio {ratio:.4f} at k={k}")
    result.details["checked"] = checked
    result.details["worst_moment_ratio"] = f"{worst_ratio:.4f}"
    return result


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "bell": suite_bell,
    "gapbound": suite_gapbound,
    "basis": suite_basis,
    "twirl": suite_twirl,
    "stability": suite_stability,
    "droptime": suite_droptime,
    "trotter": suite_trotter,
    "endtoend": suite_endtoend,
    "heisenberg": suite_heisenberg,
    "bonami": suite_bonami,
}

_PRIMARY_KNOB: dict[str, str | None] = {
    "bell": "instances",
    "gapbound": "trials_per_k",
    "basis": "draws",
    "twirl": "transcripts",
    "stability": "pairs",
    "droptime": "reps",
    "trotter": None,
    "endtoend": "runs",
    "heisenberg": "repeats",
    "bonami": "trials",
}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> SuiteResult:
    """Run a suite by name, optionally overriding its main trial count."""
    if name not in SUITES:
        raise KeyError(f"Unknown suite {name!r}; choose from {suite_names()}.")
    kwargs: dict[str, int] = {"seed": seed}
    knob = _PRIMARY_KNOB[name]
    if trials is not None and knob is not None:
        kwargs[knob] = trials
    return SUITES[name](**kwargs)
