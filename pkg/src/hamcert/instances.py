"""Random instance generators for verification suites and tests."""

from __future__ import annotations

import itertools

import numpy as np

from .pauli import PauliSum, frobenius_norm, scale

__all__ = [
    "all_k_local_labels",
    "random_diagonal_sum",
    "random_direction",
    "random_hermitian",
    "random_pauli_sum",
]


def all_k_local_labels(n: int, k: int, letters: str = "XYZ") -> list[str]:
    """Every label on ``n`` qubits with weight between 1 and ``k``."""
    if k < 1 or k > n:
        raise ValueError(f"Need 1 <= k <= n, got k={k}, n={n}.")
    labels = []
    for w in range(1, k + 1):
        for sites in itertools.combinations(range(n), w):
            for choice in itertools.product(letters, repeat=w):
                chars = ["I"] * n
                for site, ch in zip(sites, choice):
                    chars[site] = ch
                labels.append("".join(chars))
    return labels


def random_pauli_sum(
    n: int,
    k: int,
    rng: np.random.Generator,
    num_terms: int | None = None,
    letters: str = "XYZ",
) -> PauliSum:
    """A k-local sum with standard-normal coefficients on distinct labels."""
    pool = all_k_local_labels(n, k, letters)
    if num_terms is None:
        num_terms = int(rng.integers(1, min(len(pool), 3 * n) + 1))
    num_terms = min(num_terms, len(pool))
    picks = rng.choice(len(pool), size=num_terms, replace=False)
    coeffs = rng.normal(size=num_terms)
    # Retry degenerate draws: the zero sum has no norm to certify against.
    while not np.any(np.abs(coeffs) >= 1e-12):
        coeffs = rng.normal(size=num_terms)
    return PauliSum(n, [(pool[int(i)], float(c)) for i, c in zip(picks, coeffs)])


def random_diagonal_sum(
    n: int, k: int, rng: np.random.Generator, num_terms: int | None = None
) -> PauliSum:
    """A k-local sum using only I/Z letters."""
    return random_pauli_sum(n, k, rng, num_terms, letters="Z")


def random_direction(n: int, k: int, rng: np.random.Generator) -> PauliSum:
    """A unit-Frobenius-norm k-local sum."""
    h = random_pauli_sum(n, k, rng)
    return scale(h, 1.0 / frobenius_norm(h))


def random_hermitian(dim: int, rng: np.random.Generator, width: float = 1.0) -> np.ndarray:
    """A dense Hermitian matrix with Gaussian entries."""
    g = rng.normal(scale=width, size=(dim, dim)) + 1j * rng.normal(
        scale=width, size=(dim, dim)
    )
    return (g + g.conj().T) / 2.0
