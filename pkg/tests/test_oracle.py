"""Tests for the forward-only oracle and the evolution-time ledger."""

import numpy as np
import pytest

from hamcert.dense import evolve
from hamcert.oracle import (
    AccessModelError,
    EvolutionLedger,
    EvolutionOracle,
    OracleMode,
    OracleModeError,
    evolve_known,
)
from hamcert.pauli import PauliSum, subtract
from hamcert.twirl import DiagonalSubspace, run_twirl


class TestLedger:
    def test_charges_accumulate(self):
        ledger = EvolutionLedger()
        ledger.charge(0.3)
        ledger.charge(0.5, queries=2)
        assert ledger.total_time == pytest.approx(0.8)
        assert ledger.query_count == 3

    def test_negative_duration_rejected(self):
        with pytest.raises(AccessModelError):
            EvolutionLedger().charge(-0.1)

    def test_merge_is_order_independent(self):
        a = EvolutionLedger(1.5, 3)
        b = EvolutionLedger(0.25, 7)
        assert a.merge(b) == b.merge(a) == EvolutionLedger(1.75, 10)


class TestQueryForward:
    def test_zero_time_identity_and_zero_charge(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        u = oracle.query_forward(0.0)
        assert np.allclose(u, np.eye(2), atol=1e-12)
        assert oracle.ledger.total_time == 0.0
        assert oracle.ledger.query_count == 1

    def test_forward_only_contract(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.TROTTERIZED)
        with pytest.raises(AccessModelError):
            oracle.query_forward(-1.0)
        assert oracle.ledger.total_time == 0.0

    def test_charge_additivity(self):
        oracle = EvolutionOracle(PauliSum(1, {"Z": 1.0}), OracleMode.TROTTERIZED)
        oracle.query_forward(0.3)
        oracle.query_forward(0.5)
        assert oracle.ledger.total_time == pytest.approx(0.8)
        assert oracle.ledger.query_count == 2

    def test_matches_direct_evolution(self):
        hidden = PauliSum(2, {"XZ": 0.3, "YI": -0.2})
        oracle = EvolutionOracle(hidden, OracleMode.TROTTERIZED)
        assert np.max(np.abs(oracle.query_forward(1.7) - evolve(hidden, 1.7))) <= 1e-12

    def test_no_public_hidden_accessor(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        public = [name for name in dir(oracle) if not name.startswith("_")]
        assert "hidden" not in public


class TestEvolveKnown:
    def test_zero_time(self):
        assert np.allclose(evolve_known(PauliSum(1, {"Z": 2.0}), 0.0), np.eye(2))

    def test_inverse_allowed_for_reference(self):
        h0 = PauliSum(1, {"X": 0.2})
        prod = evolve_known(h0, 1.1) @ evolve_known(h0, -1.1)
        assert np.max(np.abs(prod - np.eye(2))) <= 1e-10

    def test_never_touches_the_ledger(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        before = oracle.ledger.total_time
        evolve_known(PauliSum(1, {"X": 0.4}), 5.0)
        assert oracle.ledger.total_time == before


class TestEffectiveShot:
    def test_mode_gate(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.TROTTERIZED)
        with pytest.raises(OracleModeError):
            oracle.effective_shot(PauliSum(1, {"X": 0.1}), 1.0)

    def test_zero_time_zero_charge(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        u = oracle.effective_shot(PauliSum(1, {"X": 0.1}), 0.0)
        assert np.allclose(u, np.eye(2), atol=1e-12)
        assert oracle.ledger.total_time == 0.0

    def test_zero_generator_identity_but_charged(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        u = oracle.effective_shot(PauliSum(1), 2.5)
        assert np.array_equal(u, np.eye(2))
        assert oracle.ledger.total_time == pytest.approx(2.5)

    def test_shots_multiply_the_charge(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        oracle.effective_shot(PauliSum(1, {"X": 0.1}), 0.75, shots=8)
        assert oracle.ledger.total_time == pytest.approx(6.0)
        assert oracle.ledger.query_count == 8

    def test_negative_time_rejected(self):
        oracle = EvolutionOracle(PauliSum(1, {"X": 0.4}), OracleMode.EXACT_EFFECTIVE)
        with pytest.raises(AccessModelError):
            oracle.effective_shot(PauliSum(1, {"X": 0.1}), -0.5)


def test_sample_twirl_matches_direct_twirl():
    hidden = PauliSum(2, {"XZ": 0.3, "ZZ": 0.4, "YI": -0.1})
    h0 = PauliSum(2, {"ZZ": 0.4})
    oracle = EvolutionOracle(hidden, OracleMode.EXACT_EFFECTIVE)
    subspace = DiagonalSubspace(("Z", "Z"))
    got = oracle.sample_twirl(h0, subspace, 5, np.random.default_rng(42))
    expected = run_twirl(
        subtract(hidden, h0), subspace, 5, np.random.default_rng(42)
    )
    assert got.paulis == expected.paulis
    assert got.twirled == expected.twirled
    assert got.effective == expected.effective
    assert got.residual == expected.residual
