"""Eigenvalue-gap statistics and the randomized drop-time finder.

The central quantity is the fraction of ordered eigenvalue pairs separated
by at least a threshold.  When that fraction is bounded below, the
identity-outcome probability of Bell sampling must dip noticeably at some
time within ``[0, 2/threshold]``, and a handful of uniform random times
finds such a dip with high probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .bell import identity_prob_spectral
from .dense import QUBIT_CAP, eigenvalues, to_dense
from .pauli import PauliSum, add, frobenius_norm

__all__ = [
    "DropTime",
    "GapStatConfig",
    "find_drop_time",
    "lambda_stat",
    "stability_bound",
    "verify_stability",
]


def lambda_stat(spectrum: np.ndarray, epsilon: float) -> float:
    """Fraction of ordered eigenvalue pairs separated by at least ``epsilon``.

    Counts ordered pairs ``(j, k)`` with ``|l_j - l_k| >= epsilon`` out of
    all ``N^2`` ordered pairs, self-pairs included (they contribute gap 0
    and are never counted since ``epsilon > 0``).

    Args:
        spectrum: Real eigenvalues, any order.
        epsilon: Separation threshold, strictly positive.

    Returns:
        The exact pair fraction in [0, 1].
    """
    if epsilon <= 0:
        raise ValueError(f"Separation threshold must be positive, got {epsilon}.")
    values = np.sort(np.asarray(spectrum, dtype=float))
    if values.ndim != 1 or values.size == 0:
        raise ValueError("Spectrum must be a nonempty 1-D array of reals.")
    n = values.size
    below = np.searchsorted(values, values - epsilon, side="right")
    above = n - np.searchsorted(values, values + epsilon, side="left")
    return float((below.sum() + above.sum()) / n**2)


@dataclass(frozen=True)
class GapStatConfig:
    """Parameters of the randomized drop-time search.

    ``m_times`` defaults to the smallest draw count with miss probability
    ``(2/3)**m_times <= delta``, since each uniform draw on
    ``[0, 2/epsilon]`` lands in the dip region with probability >= 1/3
    whenever the pair fraction at ``epsilon`` is at least ``d``.
    """

    epsilon: float
    d: float
    delta: float
    m_times: int | None = None

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}.")
        if not 0 < self.d <= 1:
            raise ValueError(f"d must lie in (0, 1], got {self.d}.")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}.")
        if self.m_times is None:
            draws = math.ceil(math.log(1 / self.delta) / math.log(1.5))
            object.__setattr__(self, "m_times", max(draws, 1))
        if self.m_times < 1:
            raise ValueError(f"m_times must be positive, got {self.m_times}.")
        if (2 / 3) ** self.m_times > self.delta:
            raise ValueError(
                f"m_times={self.m_times} is too small for delta={self.delta}: "
                f"(2/3)^m = {(2 / 3) ** self.m_times:.4g} exceeds it."
            )


class DropTime(NamedTuple):
    time: float
    identity_prob: float


def find_drop_time(
    spectrum: np.ndarray, cfg: GapStatConfig, rng: np.random.Generator
) -> Optional[DropTime]:
    """Search for a time where the identity probability dips below 1 - d/4.

    Draws up to ``cfg.m_times`` times uniformly from ``[0, 2/epsilon]``
    and returns the first with ``I(t) <= 1 - d/4``, or ``None`` if every
    draw misses.  Uses exact identity probabilities (an analysis-side
    utility); nothing is charged anywhere.
    """
    target = 1.0 - cfg.d / 4.0
    horizon = 2.0 / cfg.epsilon
    for _ in range(cfg.m_times):
        t = float(rng.uniform(0.0, horizon))
        prob = identity_prob_spectral(spectrum, t)
        if prob <= target:
            return DropTime(t, prob)
    return None


def stability_bound(p: float, q: float) -> float:
    """Lower bound on the pair fraction at half threshold after perturbation.

    If the unperturbed operator has pair fraction at least ``p`` at some
    threshold and the perturbation has normalized Frobenius norm at most
    ``q`` times that threshold, the perturbed operator keeps pair fraction
    at least ``max(0, p - 32 q^2)`` at half the threshold.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}.")
    if q < 0:
        raise ValueError(f"q must be nonnegative, got {q}.")
    return max(0.0, p - 32.0 * q * q)


def verify_stability(
    a: PauliSum, b: PauliSum, epsilon: float, cap: int = QUBIT_CAP
) -> bool:
    """Numerically check the perturbation bound on one concrete pair.

    Computes the exact pair fractions of ``a`` at ``epsilon`` and of
    ``a + b`` at ``epsilon / 2`` and tests the quadratic degradation bound
    with ``q = |b|_F / epsilon``.  The inequality is a theorem, so this
    must return ``True``; a tiny float guard (1e-9, far below the
    ``1/N^2`` resolution of the statistic) absorbs eigensolver rounding.
    """
    if epsilon <= 0:
        raise ValueError(f"Separation threshold must be positive, got {epsilon}.")
    spec_a = eigenvalues(to_dense(a, cap))
    spec_ab = eigenvalues(to_dense(add(a, b), cap))
    p = lambda_stat(spec_a, epsilon)
    q = frobenius_norm(b) / epsilon
    return lambda_stat(spec_ab, epsilon / 2) + 1e-9 >= stability_bound(p, q)
