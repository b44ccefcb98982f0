"""The forward-only evolution oracle and its evolution-time ledger.

The access model: the certifier may request forward real-time evolution
``exp(-i t H)`` of the hidden Hamiltonian for ``t >= 0`` only.  There is
no API surface for inverse evolution or controlled evolution of the
hidden Hamiltonian.  Every forward request charges its duration to a
cumulative :class:`EvolutionLedger`, the protocol's resource meter.

Evolution under the *known* reference Hamiltonian is compiled classically,
costs nothing, and both time signs are allowed (:func:`evolve_known`).

Two oracle modes exist:

* ``TROTTERIZED`` realizes shots of the twirled difference generator
  physically, through interleaved forward queries and compiled reference
  evolutions (see :mod:`hamcert.trotter`).  Feasible only for small twirl
  depth because the sector count doubles per twirl step.
* ``EXACT_EFFECTIVE`` substitutes the ideal evolution of the twirled
  difference and charges the same time per shot, which is what the
  resource accounting measures.  Used for statistical validation of the
  full protocol at its default constants, where the twirl depth makes the
  unrolled form intractable.

In ``EXACT_EFFECTIVE`` mode the oracle also performs the twirl of
``hidden - reference`` on the certifier's behalf (:meth:`EvolutionOracle.
sample_twirl`): the certifier itself never holds the hidden Hamiltonian,
only transcripts and dense unitaries handed back across this boundary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dense import QUBIT_CAP, eig_decompose, propagator, to_dense
from .pauli import PauliSum, subtract
from .twirl import DiagonalSubspace, TwirlTranscript, run_twirl

__all__ = [
    "AccessModelError",
    "EvolutionLedger",
    "EvolutionOracle",
    "OracleMode",
    "OracleModeError",
    "evolve_known",
]


class AccessModelError(RuntimeError):
    """A request violated the forward-only access contract."""


class OracleModeError(RuntimeError):
    """An operation was invoked under the wrong oracle mode."""


class OracleMode(enum.Enum):
    EXACT_EFFECTIVE = "exact"
    TROTTERIZED = "trotter"


@dataclass
class EvolutionLedger:
    """Cumulative forward evolution time and query count.

    ``total_time`` is the sum of all charged durations and is monotone
    nondecreasing.  Per-worker ledgers can be merged with :meth:`merge`;
    totals are independent of scheduling because charges only add.
    """

    total_time: float = 0.0
    query_count: int = 0

    def charge(self, duration: float, queries: int = 1) -> None:
        if duration < 0:
            raise AccessModelError(f"Cannot charge a negative duration: {duration}.")
        if queries < 0:
            raise ValueError(f"Query count increment must be nonnegative: {queries}.")
        self.total_time += duration
        self.query_count += queries

    def merge(self, other: "EvolutionLedger") -> "EvolutionLedger":
        """Combined ledger of two workers (order-independent)."""
        return EvolutionLedger(
            total_time=self.total_time + other.total_time,
            query_count=self.query_count + other.query_count,
        )


def evolve_known(h0: PauliSum, t: float, cap: int = QUBIT_CAP) -> np.ndarray:
    """Compiled evolution ``exp(-i t H0)`` of the known reference.

    Never charges any ledger; both signs of ``t`` are permitted because
    the reference is fully specified classically.
    """
    w, v = eig_decompose(to_dense(h0, cap))
    return propagator(w, v, float(t))


class EvolutionOracle:
    """Black-box forward evolution of a hidden Hamiltonian.

    The hidden Hamiltonian is injected once at construction and is not
    reachable through the public surface except via the forward queries
    and, in ``EXACT_EFFECTIVE`` mode, the effective-shot channel.

    Args:
        hidden: The unknown Hamiltonian being certified.
        mode: Fixed per run; see module docstring.
        cap: Dense-backend size limit.
    """

    def __init__(
        self, hidden: PauliSum, mode: OracleMode, cap: int = QUBIT_CAP
    ) -> None:
        if hidden.n > cap:
            raise ValueError(
                f"Hidden system size n={hidden.n} exceeds the dense cap of {cap}."
            )
        self._hidden = hidden
        self._eig = eig_decompose(to_dense(hidden, cap))
        self._propagator_cache: dict[float, np.ndarray] = {}
        self._cap = cap
        self.mode = mode
        self.ledger = EvolutionLedger()

    @property
    def n_qubits(self) -> int:
        return self._hidden.n

    def query_forward(self, t: float) -> np.ndarray:
        """Forward query ``exp(-i t H)`` of the hidden Hamiltonian.

        Charges ``t`` to the ledger and counts one query.  The returned
        matrix is shared with an internal cache and must be treated as
        read-only.

        Raises:
            AccessModelError: If ``t < 0`` (inverse evolution is not part
                of the access model).
        """
        t = float(t)
        if t < 0:
            raise AccessModelError(
                f"Forward-only access: requested t={t} < 0 is rejected."
            )
        self.ledger.charge(t, queries=1)
        cached = self._propagator_cache.get(t)
        if cached is None:
            cached = propagator(*self._eig, t)
            cached.setflags(write=False)
            self._propagator_cache[t] = cached
        return cached

    def effective_shot(
        self, h_t: PauliSum, t: float, shots: int = 1
    ) -> np.ndarray:
        """Ideal evolution of a twirled difference generator, fully charged.

        Returns ``exp(-i t H_T)`` computed exactly in the dense backend
        and charges ``shots * t`` to the ledger (one duration-``t`` charge
        per shot; the shots reuse a single computed unitary, which is
        statistically identical and exponentially cheaper).

        Raises:
            OracleModeError: Outside ``EXACT_EFFECTIVE`` mode.
            AccessModelError: If ``t < 0``.
        """
        if self.mode is not OracleMode.EXACT_EFFECTIVE:
            raise OracleModeError(
                "effective_shot is only available in EXACT_EFFECTIVE mode."
            )
        t = float(t)
        if t < 0:
            raise AccessModelError(
                f"Forward-only access: requested t={t} < 0 is rejected."
            )
        if shots < 1:
            raise ValueError(f"Shot count must be positive, got {shots}.")
        if h_t.n != self.n_qubits:
            raise ValueError(
                f"Generator size {h_t.n} does not match the oracle's {self.n_qubits}."
            )
        self.ledger.charge(shots * t, queries=shots)
        w, v = eig_decompose(to_dense(h_t, self._cap))
        return propagator(w, v, t)

    def sample_twirl(
        self,
        h0: PauliSum,
        subspace: DiagonalSubspace,
        steps: int,
        rng: np.random.Generator,
    ) -> TwirlTranscript:
        """Twirl ``hidden - h0`` with freshly drawn subspace Paulis.

        Classical bookkeeping done on the certifier's behalf so the
        difference Hamiltonian never crosses the boundary untwirled;
        charges nothing.
        """
        if h0.n != self.n_qubits:
            raise ValueError(
                f"Reference size {h0.n} does not match the oracle's {self.n_qubits}."
            )
        return run_twirl(subtract(self._hidden, h0), subspace, steps, rng)
