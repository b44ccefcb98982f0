"""Second-order product-formula implementation of the twirled evolution.

The twirl of the difference generator unrolls into an average over sector
conjugators: with draws ``P_1 .. P_T`` from an abelian subspace, the
twirled generator equals ``2^-T * sum_b Q_b (H - H0) Q_b`` where ``Q_b``
runs over products of all ``2^T`` subsets of the draws.  Each sector
splits into a forward piece (realized by a forward query to the hidden
Hamiltonian, conjugated by the Pauli ``Q_b``) and a compiled piece
(reference evolution with reversed sign, free of charge).

One symmetric (Strang) step of length ``tau`` applies every sector's
forward and compiled half-factors in a fixed order, then the same factors
in exactly reversed order.  Each forward half-factor lasts
``tau * 2^-T / 2``, so a full shot of duration ``t`` charges exactly
``t`` of forward evolution time regardless of the step count, and the
operator-norm error decays as ``O(t^3 / steps^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np

from .dense import QUBIT_CAP, evolve, operator_norm, pauli_matrix
from .oracle import EvolutionOracle, OracleMode, OracleModeError, evolve_known
from .pauli import PauliSum
from .twirl import DiagonalSubspace, TwirlTranscript

__all__ = [
    "TROTTER_STEP_CAP",
    "UNROLL_DRAW_CAP",
    "TrotterError",
    "TrotterPlan",
    "calibrate_steps",
    "steps_from_bound",
    "trotter_error",
    "trotter_evolve",
    "twirl_conjugators",
    "unroll_twirl",
]

#: Hard ceiling on product-formula steps when calibrating adaptively.
TROTTER_STEP_CAP = 2**16

#: Sector unrolling doubles per twirl draw; more than this is intractable.
UNROLL_DRAW_CAP = 8


def _sitewise_product(a: str, b: str) -> str:
    # Within one abelian subspace each site combines as I*I=I, I*Q=Q, Q*Q=I,
    # so the product is phase-free.
    out = []
    for ca, cb in zip(a, b):
        if ca == "I":
            out.append(cb)
        elif cb == "I":
            out.append(ca)
        elif ca == cb:
            out.append("I")
        else:
            raise ValueError(
                f"Labels {a!r} and {b!r} do not share a diagonal subspace."
            )
    return "".join(out)


def twirl_conjugators(
    subspace: DiagonalSubspace, paulis: tuple[str, ...]
) -> tuple[str, ...]:
    """All ``2^T`` subset products of the twirl draws, in subset-mask order.

    The coefficient-space average of conjugation by these sectors equals
    the twirl filter exactly.

    Raises:
        ValueError: If there are more than :data:`UNROLL_DRAW_CAP` draws
            or a draw lies outside the subspace.
    """
    draws = len(paulis)
    if draws > UNROLL_DRAW_CAP:
        raise ValueError(
            f"Cannot unroll {draws} twirl draws (cap {UNROLL_DRAW_CAP}): "
            f"the sector count 2^{draws} is intractable."
        )
    for p in paulis:
        if not subspace.contains(p):
            raise ValueError(f"Draw {p!r} is not in the subspace.")
    identity = "I" * subspace.n
    sectors = []
    for mask in range(2**draws):
        q = identity
        for i in range(draws):
            if mask >> i & 1:
                q = _sitewise_product(q, paulis[i])
        sectors.append(q)
    return tuple(sectors)


def unroll_twirl(transcript: TwirlTranscript) -> tuple[str, ...]:
    """Sector conjugators of a recorded twirl transcript."""
    return twirl_conjugators(transcript.subspace, transcript.paulis)


@dataclass(frozen=True)
class TrotterPlan:
    """A compiled product-formula schedule for one shot.

    ``conjugators`` are the sector Paulis, ``steps`` the number of
    symmetric steps, ``total_time`` the shot duration.  Sector weights are
    uniform and sum to one.
    """

    conjugators: tuple[str, ...]
    steps: int
    total_time: float

    def __post_init__(self) -> None:
        if not self.conjugators:
            raise ValueError("A plan needs at least one sector conjugator.")
        if self.steps < 1:
            raise ValueError(f"Step count must be positive, got {self.steps}.")
        if self.total_time < 0:
            raise ValueError(f"Shot duration must be nonnegative: {self.total_time}.")

    @property
    def sector_weight(self) -> float:
        return 1.0 / len(self.conjugators)


def steps_from_bound(num_draws: int, t: float, eps_trott: float) -> int:
    """Step-count guess ``ceil(2^T sqrt(t^3 / eps))``, clamped to the cap.

    The error constant of the bound is not pinned down, so this is only
    the starting point; :func:`calibrate_steps` refines it empirically.
    """
    if eps_trott <= 0:
        raise ValueError(f"Error target must be positive, got {eps_trott}.")
    if t < 0:
        raise ValueError(f"Duration must be nonnegative, got {t}.")
    guess = math.ceil(2**num_draws * math.sqrt(t**3 / eps_trott))
    return min(max(guess, 1), TROTTER_STEP_CAP)


def trotter_evolve(
    oracle: EvolutionOracle,
    h0: PauliSum,
    plan: TrotterPlan,
    shots: int = 1,
) -> np.ndarray:
    """Run the symmetric product formula through the forward oracle.

    Assembles one step operator from the sector factors and multiplies it
    out; each physical forward query is charged individually, so the
    ledger gains exactly ``shots * plan.total_time`` and
    ``shots * steps * 2 * num_sectors`` queries.  Repeated shots reuse the
    compiled circuit but are charged as separate runs.

    Raises:
        OracleModeError: Outside ``TROTTERIZED`` mode.
    """
    if oracle.mode is not OracleMode.TROTTERIZED:
        raise OracleModeError("trotter_evolve requires TROTTERIZED mode.")
    if shots < 1:
        raise ValueError(f"Shot count must be positive, got {shots}.")
    if h0.n != oracle.n_qubits:
        raise ValueError(
            f"Reference size {h0.n} does not match the oracle's {oracle.n_qubits}."
        )
    sectors = plan.conjugators
    weight = plan.sector_weight
    half_dur = plan.total_time * weight / (2 * plan.steps)

    forward = oracle.query_forward(half_dur)
    compiled = evolve_known(h0, -half_dur)
    pair_fwd = forward @ compiled
    pair_rev = compiled @ forward
    sector_mats = [pauli_matrix(q) for q in sectors]
    first_half = reduce(
        lambda acc, qm: acc @ (qm @ pair_fwd @ qm), sector_mats, _eye(oracle)
    )
    second_half = reduce(
        lambda acc, qm: acc @ (qm @ pair_rev @ qm), reversed(sector_mats), _eye(oracle)
    )
    step = first_half @ second_half
    out = _eye(oracle)
    for _ in range(plan.steps):
        out = out @ step
    # One forward query per sector per half-step per shot; the first was
    # issued above while fetching the cached propagator.
    remaining = shots * plan.steps * 2 * len(sectors) - 1
    for _ in range(remaining):
        oracle.query_forward(half_dur)
    return out


def _eye(oracle: EvolutionOracle) -> np.ndarray:
    return np.eye(2**oracle.n_qubits, dtype=complex)


class TrotterError(NamedTuple):
    op_norm: float
    bell_deviation: float


def trotter_error(
    v: np.ndarray, h_t: PauliSum, t: float, cap: int = QUBIT_CAP
) -> TrotterError:
    """Implementation error of ``v`` against the exact twirled evolution.

    ``op_norm`` is the spectral norm of the difference (the proxy for the
    channel distance); ``bell_deviation`` is the normalized trace
    deviation ``|Tr(exp(-i t H_T) - V)| / 2^n``, which bounds the shift of
    the identity-outcome probability and never exceeds ``op_norm``.
    """
    exact = evolve(h_t, t, cap)
    diff = exact - v
    op = operator_norm(diff)
    bell = float(abs(np.trace(diff))) / v.shape[0]
    return TrotterError(op_norm=op, bell_deviation=bell)


def calibrate_steps(
    hidden: PauliSum,
    h0: PauliSum,
    plan: TrotterPlan,
    h_t: PauliSum,
    eps_target: float,
    step_cap: int = TROTTER_STEP_CAP,
) -> tuple[int, float]:
    """Double the step count until the measured error meets the target.

    A calibration utility for verification runs, where the hidden
    Hamiltonian is known to the harness: fresh throwaway oracles are built
    per trial, so no production ledger is touched.  Starts from
    ``plan.steps`` and returns ``(steps, measured_op_norm_error)``.

    Raises:
        RuntimeError: If the cap is reached before meeting the target.
    """
    if eps_target <= 0:
        raise ValueError(f"Error target must be positive, got {eps_target}.")
    steps = plan.steps
    while True:
        trial_oracle = EvolutionOracle(hidden, OracleMode.TROTTERIZED)
        trial_plan = TrotterPlan(plan.conjugators, steps, plan.total_time)
        v = trotter_evolve(trial_oracle, h0, trial_plan)
        err = trotter_error(v, h_t, plan.total_time).op_norm
        if err <= eps_target:
            return steps, err
        if steps >= step_cap:
            raise RuntimeError(
                f"Step cap {step_cap} reached with error {err:.3e} > "
                f"target {eps_target:.3e}."
            )
        steps = min(steps * 2, step_cap)
