"""Tests for the certification protocol, its config, and the sweep harness."""

import math

import numpy as np
import pytest

from hamcert.certifier import (
    CertificationConfig,
    ConfigError,
    certify,
    run_round,
    sweep_epsilon,
)
from hamcert.oracle import EvolutionOracle, OracleMode
from hamcert.pauli import PauliSum


def make_oracle(hidden, mode=OracleMode.EXACT_EFFECTIVE):
    return EvolutionOracle(hidden, mode)


class TestConfigDerivation:
    def test_default_constants(self):
        cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1)
        assert cfg.c1 == pytest.approx(16 / 3)
        assert cfg.c2 == 17.0
        assert cfg.c3 == pytest.approx(4 * math.sqrt(2))
        assert cfg.c4 == 128.0
        assert cfg.c0 == pytest.approx(1 / 64)

    def test_derived_quantities_at_k1(self):
        cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1)
        assert cfg.rounds == 26
        assert cfg.twirl_steps == 17
        assert cfg.shots_per_round == 1152
        assert cfg.time_cap == pytest.approx(4 * math.sqrt(2) * math.sqrt(3) / 0.2)
        assert cfg.accept_threshold == pytest.approx(1 - 1 / 576)
        assert cfg.trotter_tolerance == pytest.approx(1 / 1152)

    def test_derived_quantities_at_k2(self):
        cfg = CertificationConfig(epsilon=0.1, delta=0.5, k=2)
        assert cfg.rounds == math.ceil(16 / 3 * 9 * math.log(2))
        assert cfg.twirl_steps == 34
        assert cfg.shots_per_round == 128 * 81

    def test_consistency_holds_for_defaults(self):
        for k in (1, 2, 3, 4):
            CertificationConfig(epsilon=0.3, delta=0.1, k=k).validate()

    def test_shallow_twirl_rejected(self):
        with pytest.raises(ConfigError, match="shallow"):
            CertificationConfig(epsilon=0.2, delta=0.2, k=1, c2=3.0)

    def test_shallow_twirl_allowed_when_waived(self):
        cfg = CertificationConfig(
            epsilon=0.2, delta=0.2, k=1, c2=3.0, allow_weak_constants=True
        )
        assert cfg.twirl_steps == 3

    def test_oversized_error_budget_rejected(self):
        with pytest.raises(ConfigError, match="budget"):
            CertificationConfig(epsilon=0.2, delta=0.2, k=1, eps_trott=1e-2)

    def test_trotter_mode_depth_cap(self):
        with pytest.raises(ConfigError, match="unroll"):
            CertificationConfig(
                epsilon=0.2, delta=0.2, k=1, mode=OracleMode.TROTTERIZED
            )

    def test_basic_ranges(self):
        with pytest.raises(ConfigError):
            CertificationConfig(epsilon=0.0, delta=0.2, k=1)
        with pytest.raises(ConfigError):
            CertificationConfig(epsilon=0.2, delta=1.0, k=1)
        with pytest.raises(ConfigError):
            CertificationConfig(epsilon=0.2, delta=0.2, k=0)


class TestCertifyExactMode:
    def test_equal_hamiltonians_accept_deterministically(self):
        h0 = PauliSum(1, {"X": -0.1})
        for seed in range(5):
            cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=seed)
            report = certify(h0, make_oracle(PauliSum(1, {"X": -0.1})), cfg)
            assert report.verdict == "ACCEPT"
            assert report.rounds_run == cfg.rounds
            assert all(r.identity_fraction == 1.0 for r in report.records)
            assert all(
                r.identity_fraction > cfg.accept_threshold for r in report.records
            )

    def test_separated_pair_rejects(self):
        h0 = PauliSum(1, {"X": -0.1})
        rejected = 0
        for seed in range(10):
            cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=seed)
            report = certify(h0, make_oracle(PauliSum(1, {"X": 0.1})), cfg)
            rejected += report.verdict == "REJECT"
        assert rejected >= 8

    def test_reject_fast_semantics(self):
        h0 = PauliSum(1, {"X": -0.1})
        cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=3)
        report = certify(h0, make_oracle(PauliSum(1, {"X": 0.1})), cfg)
        if report.verdict == "REJECT":
            assert report.rejecting_round == report.rounds_run
            assert report.records[-1].flagged
            assert not any(r.flagged for r in report.records[:-1])

    def test_ledger_within_global_budget(self):
        h0 = PauliSum(1, {"X": -0.1})
        for hidden in (PauliSum(1, {"X": -0.1}), PauliSum(1, {"X": 0.1})):
            cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=11)
            oracle = make_oracle(hidden)
            report = certify(h0, oracle, cfg)
            budget = cfg.rounds * cfg.shots_per_round * cfg.time_cap
            assert report.ledger_total_time <= budget * (1 + 1e-12)
            assert report.ledger_total_time == oracle.ledger.total_time

    def test_two_qubit_two_local_instance(self):
        h0 = PauliSum(2, {"XX": 0.3, "ZI": 0.2})
        cfg = CertificationConfig(epsilon=0.2, delta=0.5, k=2, seed=0)
        report = certify(h0, make_oracle(PauliSum(2, {"XX": 0.3, "ZI": 0.2})), cfg)
        assert report.verdict == "ACCEPT"
        hidden = PauliSum(2, {"XX": 0.3, "ZI": 0.2, "YY": 0.25})
        report = certify(h0, make_oracle(hidden), cfg)
        assert report.verdict == "REJECT"

    def test_locality_violation_rejected(self):
        h0 = PauliSum(3, {"XYZ": 0.5})
        cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=2, seed=0)
        with pytest.raises(ConfigError, match="k=2"):
            certify(h0, make_oracle(PauliSum(3, {"XYZ": 0.5})), cfg)

    def test_size_mismatch_rejected(self):
        cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=0)
        with pytest.raises(ConfigError, match="qubits"):
            certify(PauliSum(2, {"XI": 0.5}), make_oracle(PauliSum(1, {"X": 0.5})), cfg)

    def test_mode_mismatch_rejected(self):
        cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=0)
        oracle = make_oracle(PauliSum(1, {"X": 0.5}), OracleMode.TROTTERIZED)
        with pytest.raises(ConfigError, match="mode"):
            certify(PauliSum(1, {"X": 0.5}), oracle, cfg)


class TestDeterminism:
    def test_identical_runs_render_identically(self):
        h0 = PauliSum(1, {"X": -0.1})
        reports = []
        for _ in range(2):
            cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=9)
            reports.append(certify(h0, make_oracle(PauliSum(1, {"X": 0.1})), cfg))
        assert reports[0].render() == reports[1].render()

    def test_seed_changes_the_transcript(self):
        h0 = PauliSum(1, {"X": -0.1})
        renders = set()
        for seed in (1, 2):
            cfg = CertificationConfig(epsilon=0.2, delta=0.2, k=1, seed=seed)
            renders.add(certify(h0, make_oracle(PauliSum(1, {"X": 0.1})), cfg).render())
        assert len(renders) == 2


class TestRunRound:
    def test_record_fields(self):
        h0 = PauliSum(2, {"XX": 0.3})
        cfg = CertificationConfig(epsilon=0.5, delta=0.2, k=2, seed=0)
        rng = np.random.default_rng(0)
        rec = run_round(h0, make_oracle(PauliSum(2, {"XX": 0.3})), cfg, rng, index=4)
        assert rec.index == 4
        assert len(rec.axes) == 2 and set(rec.axes) <= set("XYZ")
        assert len(rec.transcript_digest) == 12
        assert 0.0 <= rec.time <= cfg.time_cap
        assert rec.identity_fraction == 1.0
        assert rec.flagged is False


class TestTrotterizedMode:
    def _cfg(self, seed):
        return CertificationConfig(
            epsilon=2.0,
            delta=0.3,
            k=1,
            c1=1.0,
            c2=2.0,
            c4=2.0,
            eps_trott=5e-3,
            mode=OracleMode.TROTTERIZED,
            seed=seed,
            allow_weak_constants=True,
        )

    def test_equal_hamiltonians_accept(self):
        h0 = PauliSum(1, {"X": -1.0})
        cfg = self._cfg(0)
        oracle = make_oracle(PauliSum(1, {"X": -1.0}), OracleMode.TROTTERIZED)
        report = certify(h0, oracle, cfg)
        assert report.verdict == "ACCEPT"
        assert all(r.identity_fraction == 1.0 for r in report.records)

    def test_separated_pair_rejects_often(self):
        h0 = PauliSum(1, {"X": -1.0})
        rejected = 0
        for seed in range(12):
            oracle = make_oracle(PauliSum(1, {"X": 1.0}), OracleMode.TROTTERIZED)
            report = certify(h0, oracle, self._cfg(seed))
            rejected += report.verdict == "REJECT"
        assert rejected >= 6

    def test_ledger_reflects_shot_durations(self):
        h0 = PauliSum(1, {"X": -1.0})
        cfg = self._cfg(5)
        oracle = make_oracle(PauliSum(1, {"X": 1.0}), OracleMode.TROTTERIZED)
        report = certify(h0, oracle, cfg)
        expected = cfg.shots_per_round * sum(r.time for r in report.records)
        assert report.ledger_total_time == pytest.approx(expected, rel=1e-9)


class TestSweep:
    def test_direction_must_be_unit_norm(self):
        cfg = CertificationConfig(epsilon=0.4, delta=0.2, k=1, seed=0)
        with pytest.raises(ValueError, match="unit"):
            sweep_epsilon(
                PauliSum(1, {"Z": 0.3}), PauliSum(1, {"X": 0.5}), [0.4], cfg
            )

    def test_rows_and_pairing(self):
        cfg = CertificationConfig(epsilon=0.4, delta=0.2, k=1, seed=100)
        result = sweep_epsilon(
            PauliSum(1, {"Z": 0.3}),
            PauliSum(1, {"X": 1.0}),
            [0.4, 0.2],
            cfg,
            repeats=3,
        )
        assert len(result.rows) == 6
        assert [r.seed for r in result.rows] == [100, 101, 102, 100, 101, 102]
        assert all(r.verdict == "REJECT" for r in result.rows)

    def test_slope_is_inverse_linear(self):
        cfg = CertificationConfig(epsilon=0.4, delta=0.2, k=1, seed=0)
        result = sweep_epsilon(
            PauliSum(1, {"Z": 0.3}),
            PauliSum(1, {"X": 1.0}),
            [0.4, 0.2, 0.1],
            cfg,
            repeats=4,
        )
        assert -1.2 <= result.loglog_slope <= -0.8
