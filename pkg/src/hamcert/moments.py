"""Boolean-Fourier oracles for diagonal Hamiltonians.

The spectrum of a Hamiltonian built only from I/Z letters is the
Walsh-Hadamard transform of its coefficient table: the eigenvalue attached
to basis state ``s`` is ``f(s) = sum_p (-1)^{s.p} a_p`` with ``p`` ranging
over the Z-support bitmasks.  That makes eigenvalue-gap moments exactly
computable by enumeration, and lets the fourth-moment (hypercontractive)
bound and the Paley-Zygmund anti-concentration step be verified
numerically instead of assumed.
"""

from __future__ import annotations

import numpy as np

from .gaps import lambda_stat
from .pauli import PauliSum, frobenius_norm

__all__ = [
    "WALSH_QUBIT_CAP",
    "MOMENT_SIZE_CAP",
    "function_moments",
    "gap_moments",
    "paley_zygmund_bound",
    "verify_gap_bound",
    "walsh_eigenvalues",
    "walsh_transform",
]

WALSH_QUBIT_CAP = 20

#: Largest spectrum size for exact pairwise moment enumeration.
MOMENT_SIZE_CAP = 2**12


def walsh_transform(table: np.ndarray) -> np.ndarray:
    """Fast Walsh-Hadamard transform, unnormalized.

    ``out[s] = sum_p (-1)^{popcount(s & p)} table[p]`` for a table of
    length ``2^v``.  O(v 2^v) butterflies.
    """
    out = np.array(table, dtype=float)
    size = out.size
    if size == 0 or size & (size - 1):
        raise ValueError(f"Table length must be a power of two, got {size}.")
    h = 1
    while h < size:
        out = out.reshape(-1, 2, h)
        plus = out[:, 0, :] + out[:, 1, :]
        minus = out[:, 0, :] - out[:, 1, :]
        out = np.stack((plus, minus), axis=1)
        h *= 2
    return out.reshape(size)


def walsh_eigenvalues(h: PauliSum, cap: int = WALSH_QUBIT_CAP) -> np.ndarray:
    """Spectrum of a Hamiltonian with only I/Z letters, sorted ascending.

    Bitmask convention matches the dense backend: letter ``i`` maps to bit
    ``n - 1 - i``, so the unsorted transform equals the dense diagonal.

    Raises:
        ValueError: On non-diagonal terms or if ``n`` exceeds ``cap``.
    """
    if h.n > cap:
        raise ValueError(f"System size n={h.n} exceeds the Walsh cap of {cap}.")
    table = np.zeros(2**h.n)
    for label, coeff in h.items():
        mask = 0
        for i, ch in enumerate(label):
            if ch == "Z":
                mask |= 1 << (h.n - 1 - i)
            elif ch != "I":
                raise ValueError(
                    f"Term {label!r} is not diagonal (only I/Z letters allowed)."
                )
        table[mask] = coeff
    return np.sort(walsh_transform(table))


def gap_moments(spectrum: np.ndarray, chunk: int = 1024) -> tuple[float, float]:
    """Exact second and fourth moments of eigenvalue differences.

    Enumerates all ordered pairs ``(j, k)`` (self-pairs included) and
    returns the means of ``(l_j - l_k)^2`` and ``(l_j - l_k)^4``.

    Raises:
        ValueError: If the spectrum exceeds :data:`MOMENT_SIZE_CAP`.
    """
    values = np.asarray(spectrum, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("Spectrum must be a nonempty 1-D array of reals.")
    if values.size > MOMENT_SIZE_CAP:
        raise ValueError(
            f"Spectrum size {values.size} exceeds the enumeration cap "
            f"{MOMENT_SIZE_CAP}."
        )
    total2 = 0.0
    total4 = 0.0
    for start in range(0, values.size, chunk):
        diff = values[start : start + chunk, None] - values[None, :]
        sq = diff * diff
        total2 += float(sq.sum())
        total4 += float((sq * sq).sum())
    pairs = values.size**2
    return total2 / pairs, total4 / pairs


def function_moments(table: np.ndarray) -> tuple[float, float]:
    """Second and fourth moments of a multilinear function on the cube.

    ``table[p]`` holds the coefficient of the character with support mask
    ``p``; the function values are its Walsh transform and the moments are
    uniform averages over all inputs.
    """
    values = walsh_transform(table)
    sq = values * values
    return float(sq.mean()), float((sq * sq).mean())


def paley_zygmund_bound(m2: float, m4: float, theta: float) -> float:
    """Anti-concentration lower bound ``(1-theta)^2 m2^2 / m4``.

    For a nonnegative variable with mean ``m2`` and second moment ``m4``
    (here: the squared gap), this bounds the probability of exceeding
    ``theta`` times the mean from below.
    """
    if not 0 <= theta <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}.")
    if m4 < 0 or m2 < 0:
        raise ValueError("Moments must be nonnegative.")
    if m4 == 0:
        if m2 > 0:
            raise ValueError("Impossible moments: m4 = 0 with m2 > 0.")
        return 0.0
    return (1.0 - theta) ** 2 * m2 * m2 / m4


def verify_gap_bound(h: PauliSum, k: int) -> bool:
    """Check the diagonal eigenvalue-gap guarantee on one instance.

    For a nonzero k-local Hamiltonian with only I/Z letters, the fraction
    of ordered eigenvalue pairs separated by the normalized Frobenius norm
    is at least ``9^-k / 4``.  This is a theorem for exact arithmetic, so
    the check must pass; the spectrum comes from the Walsh transform,
    which is exact up to float rounding.
    """
    if k < 1:
        raise ValueError(f"Locality must be at least 1, got {k}.")
    if not h:
        raise ValueError("The zero Hamiltonian has no separation threshold.")
    if h.max_weight() > k:
        raise ValueError(f"Instance is not {k}-local (max weight {h.max_weight()}).")
    norm = frobenius_norm(h)
    fraction = lambda_stat(walsh_eigenvalues(h), norm)
    return fraction >= 0.25 * 9.0 ** (-k) - 1e-12
