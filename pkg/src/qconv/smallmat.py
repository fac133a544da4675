"""Dense complex matrix kernel for small (dim <= 8) Hermitian problems.

Index convention for two-qubit (dim 4) matrices: qubit A is the high-order
index, so the row index of an amplitude vector is ``2*a + b``.  The partial
transpose acts on the B side by default.
"""

import numpy as np

from .errors import DomainError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
MAX_DIM = 8

# Pauli matrices, used throughout the package.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Spin-flip operator sigma_y (x) sigma_y (real symmetric).
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y).real.astype(complex)


def _as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DomainError(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    return a


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = _as_matrix(a)
    return np.max(np.abs(a - a.conj().T)) <= tol


def check_hermitian(a, tol=HERMITIAN_TOL, what="matrix"):
    a = _as_matrix(a)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise DomainError(f"{what} is not Hermitian (deviation {dev:.3e} > {tol:.0e})")
    # symmetrize so downstream eigensolvers see an exactly Hermitian input
    return 0.5 * (a + a.conj().T)


def check_density(rho, tol=PSD_TOL, what="density matrix"):
    """Validate a density matrix: Hermitian, unit trace, PSD within tolerance."""
    rho = check_hermitian(np.asarray(rho, dtype=complex), tol=1e-10, what=what)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-8:
        raise DomainError(f"{what} has trace {tr:.12g}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -tol:
        raise DomainError(f"{what} has negative eigenvalue {lo:.3e}")
    return rho


def clamp(x, lo, hi, tol=1e-9, what="value"):
    """Clamp x into [lo, hi]; violations beyond tol are errors, not clamps."""
    if x < lo - tol or x > hi + tol:
        raise DomainError(f"{what} = {x!r} outside [{lo}, {hi}] beyond tolerance {tol:.0e}")
    return min(max(x, lo), hi)


def hermitian_eig(a, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, orthonormal eigenvector columns) with
    A @ V = V @ diag(w).
    """
    a = check_hermitian(a, tol=tol)
    w, v = np.linalg.eigh(a)
    return w, v


def psd_sqrt(a, tol=PSD_TOL):
    """Hermitian PSD square root B of a PSD matrix, B @ B = A.

    Eigenvalues in [-tol, 0) are clamped to zero; below -tol is an error.
    """
    w, v = hermitian_eig(a, tol=1e-10)
    if w[0] < -tol:
        raise DomainError(f"matrix is not PSD (eigenvalue {w[0]:.3e})")
    s = np.sqrt(np.clip(w, 0.0, None))
    b = (v * s) @ v.conj().T
    return 0.5 * (b + b.conj().T)


def fidelity(rho, sigma):
    """Uhlmann fidelity F(rho, sigma) = [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2."""
    rho = check_density(rho)
    sigma = check_density(sigma)
    sr = psd_sqrt(rho)
    mid = sr @ sigma @ sr
    mid = 0.5 * (mid + mid.conj().T)
    w = np.clip(np.linalg.eigvalsh(mid), 0.0, None)
    f = float(np.sum(np.sqrt(w)) ** 2)
    # the squared trace amplifies eigenvalue roundoff, so allow a wider band
    return clamp(f, 0.0, 1.0, tol=1e-7, what="fidelity")


def bures_angle(rho, sigma):
    """Bures angle D = arccos(sqrt(F)), a metric on density matrices."""
    f = fidelity(rho, sigma)
    return float(np.arccos(np.sqrt(f)))


def partial_transpose(a, subsystem="B"):
    """Partial transpose of a 4x4 two-qubit matrix on the given subsystem."""
    a = _as_matrix(a)
    if a.shape[0] != 4:
        raise DomainError(f"partial transpose requires dim 4, got {a.shape[0]}")
    if subsystem not in ("A", "B"):
        raise DomainError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    blocks = a.reshape(2, 2, 2, 2)  # [a, b, a', b']
    if subsystem == "B":
        out = blocks.transpose(0, 3, 2, 1)
    else:
        out = blocks.transpose(2, 1, 0, 3)
    return out.reshape(4, 4).copy()


def kron(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


# ---------------------------------------------------------------------------
# Batched helpers (stacked 4x4 matrices). Used by the Monte-Carlo harness;
# they skip per-matrix validation for speed.
# ---------------------------------------------------------------------------

def psd_sqrt_batch(mats):
    """PSD square roots of a stack of Hermitian matrices (negatives clipped)."""
    w, v = np.linalg.eigh(mats)
    s = np.sqrt(np.clip(w, 0.0, None))
    return (v * s[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def fidelity_batch(sqrt_rho, sigmas):
    """Fidelities F(rho, sigma_i) given a precomputed sqrt(rho)."""
    mid = sqrt_rho @ sigmas @ sqrt_rho
    mid = 0.5 * (mid + np.conj(np.swapaxes(mid, -1, -2)))
    w = np.clip(np.linalg.eigvalsh(mid), 0.0, None)
    return np.clip(np.sum(np.sqrt(w), axis=-1) ** 2, 0.0, 1.0)


def pure_fidelity_batch(psi, sigmas):
    """Fidelities F(|psi><psi|, sigma_i) = <psi| sigma_i |psi>."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    vals = np.einsum("i,nij,j->n", psi.conj(), sigmas, psi).real
    return np.clip(vals, 0.0, 1.0)
