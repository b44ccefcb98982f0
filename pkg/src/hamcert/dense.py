"""Dense complex-matrix backend for small systems.

Materializes Pauli sums as ``2^n x 2^n`` complex arrays, provides the
Hermitian eigendecomposition, unitary time evolution through the spectral
form, and the mean-square eigenvalue displacement used to bound spectral
perturbations.

Index convention: qubit 0 is the most significant bit of the computational
basis index, matching the Kronecker order ``letters[0] (x) ... (x)
letters[n-1]``.

Sizes above :data:`QUBIT_CAP` qubits are rejected, not approximated.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliSum, validate_label

__all__ = [
    "QUBIT_CAP",
    "PAULI_MATRICES",
    "eig_decompose",
    "eigenvalues",
    "evolve",
    "hoffman_wielandt_gap",
    "is_hermitian",
    "is_unitary",
    "normalized_frobenius",
    "operator_norm",
    "pauli_matrix",
    "propagator",
    "to_dense",
]

#: Largest system size the dense backend will materialize (1024 x 1024).
QUBIT_CAP = 10

PAULI_MATRICES: dict[str, np.ndarray] = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
for _m in PAULI_MATRICES.values():
    _m.setflags(write=False)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ValueError(f"System size n={n} exceeds the dense cap of {cap} qubits.")


def pauli_matrix(label: str, cap: int = QUBIT_CAP) -> np.ndarray:
    """Dense matrix of a Pauli string (Kronecker product of its letters)."""
    validate_label(label)
    _check_cap(len(label), cap)
    m = np.array([[1.0 + 0.0j]])
    for ch in label:
        m = np.kron(m, PAULI_MATRICES[ch])
    return m


def to_dense(h: PauliSum, cap: int = QUBIT_CAP) -> np.ndarray:
    """Materialize a Pauli sum as a dense Hermitian matrix.

    Raises:
        ValueError: If the system size exceeds ``cap``.
    """
    _check_cap(h.n, cap)
    dim = 2**h.n
    out = np.zeros((dim, dim), dtype=complex)
    for label, coeff in h.items():
        out += coeff * pauli_matrix(label, cap)
    return out


def is_hermitian(m: np.ndarray, atol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= atol) if m.size else True


def is_unitary(m: np.ndarray, atol: float = 1e-8) -> bool:
    eye = np.eye(m.shape[0])
    return bool(np.max(np.abs(m.conj().T @ m - eye)) <= atol)


def normalized_frobenius(m: np.ndarray) -> float:
    """Dimension-normalized Frobenius norm ``sqrt(Tr(M^dag M) / dim)``."""
    return float(np.sqrt(np.sum(np.abs(m) ** 2) / m.shape[0]))


def operator_norm(m: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(m, 2))


def eigenvalues(m: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, sorted ascending.

    Raises:
        ValueError: If the input is not Hermitian within ``atol``.
    """
    if not is_hermitian(m, atol):
        raise ValueError("Matrix is not Hermitian within tolerance.")
    return np.linalg.eigvalsh(m)


def eig_decompose(m: np.ndarray, atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition ``(w, V)`` with ``M = V diag(w) V^dag``."""
    if not is_hermitian(m, atol):
        raise ValueError("Matrix is not Hermitian within tolerance.")
    w, v = np.linalg.eigh(m)
    return w, v


def propagator(w: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """Unitary ``exp(-i t H)`` from the eigendecomposition of ``H``."""
    phases = np.exp(-1j * w * t)
    return (v * phases) @ v.conj().T


def evolve(h: PauliSum, t: float, cap: int = QUBIT_CAP) -> np.ndarray:
    """Unitary ``exp(-i t H)`` for a Pauli sum, via eigendecomposition.

    ``t`` may be any real number here; forward-only restrictions are
    enforced at the oracle boundary, not by this raw primitive.
    """
    w, v = eig_decompose(to_dense(h, cap))
    return propagator(w, v, float(t))


def hoffman_wielandt_gap(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> float:
    """Mean-square eigenvalue displacement under ascending-sorted pairing.

    Returns ``(1/d) * sum_i (lambda_i(A) - lambda_i(B))^2`` with both
    spectra sorted ascending.  For Hermitian ``A`` and ``B`` this pairing
    minimizes the displacement over all pairings, and the result never
    exceeds the squared normalized Frobenius norm of ``A - B``.

    Raises:
        ValueError: On dimension mismatch or non-Hermitian input.
    """
    if a.shape != b.shape:
        raise ValueError(f"Dimension mismatch: {a.shape} vs {b.shape}.")
    wa = eigenvalues(a, atol)
    wb = eigenvalues(b, atol)
    return float(np.mean((wa - wb) ** 2))
