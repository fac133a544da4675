"""Constructive extremal states for the geometric-entanglement continuity bounds.

* ``equal_g_decomposition``: every two-qubit state admits a pure-state
  decomposition whose terms all carry the same geometric entanglement as the
  mixture.  The construction follows the Wootters optimal-decomposition
  recipe: subnormalized eigenvectors, a Takagi diagonalization of the
  preconcurrence matrix, and a real-orthogonal rotation equalizing the
  per-term concurrences.
* ``rho_min`` / ``psi_max``: the states achieving the minimal (any input) and
  maximal (pure input) geometric entanglement inside a fidelity ball, built
  by tilting each term's Schmidt angle.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm

from . import measures, smallmat
from .errors import DomainError, SolverError
from .states import DensityMatrix, PureState, as_density, schmidt_decompose

_RANK_TOL = 1e-12


@dataclass
class EqualGDecomposition:
    """Mixture terms (p_i, psi_i) with G(psi_i) = sin^2(common_angle) for all i."""

    probabilities: list
    terms: list          # list[PureState]
    common_angle: float  # alpha = arcsin(sqrt(G(rho)))

    def reconstruct(self):
        out = np.zeros((4, 4), dtype=complex)
        for p, psi in zip(self.probabilities, self.terms):
            out += p * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return out

    def to_json(self):
        from .states import state_to_json

        return {
            "common_angle": self.common_angle,
            "terms": [
                {"probability": p, **state_to_json(psi)}
                for p, psi in zip(self.probabilities, self.terms)
            ],
        }


def _takagi(tau):
    """Takagi factorization tau = U diag(mu) U^T of a complex symmetric matrix.

    mu are the singular values (descending).  Degenerate blocks are handled by
    taking the principal square root of the symmetric unitary coupling block.
    """
    u, s, vh = np.linalg.svd(tau)
    q = u.conj().T @ vh.T  # symmetric unitary, block-diagonal over degenerate groups
    q = 0.5 * (q + q.T)  # symmetric up to roundoff
    # the principal square root of a symmetric matrix is symmetric and
    # commutes with the singular-value blocks
    sq = sqrtm(q)
    return u @ sq, s


def _zero_diagonal_rotation(m):
    """Real orthogonal O with diag(O M O^T) = 0 for real symmetric traceless M."""
    n = m.shape[0]
    m = m.copy()
    o = np.eye(n)
    for i in range(n - 1):
        if abs(m[i, i]) < 1e-14:
            continue
        # the trailing block is traceless, so an opposite-signed pivot exists
        js = [j for j in range(i + 1, n) if m[i, i] * m[j, j] < 0]
        if not js:
            js = [j for j in range(i + 1, n) if abs(m[j, j]) > 1e-14 or abs(m[i, j]) > 1e-14]
        if not js:
            raise SolverError("cannot zero diagonal: degenerate block")
        j = max(js, key=lambda j: abs(m[j, j]))
        a, b, c = m[i, i], m[j, j], m[i, j]
        # rotation angle t = tan(theta) solving a + 2 c t + b t^2 = 0
        if abs(b) > 1e-14:
            disc = np.sqrt(max(c * c - a * b, 0.0))
            t = (-c + disc) / b if b > 0 else (-c - disc) / b
            # pick the root with smaller magnitude for stability
            t2 = (-c - disc) / b if b > 0 else (-c + disc) / b
            if abs(t2) < abs(t):
                t = t2
        elif abs(c) > 1e-14:
            t = -a / (2.0 * c)
        else:
            raise SolverError("cannot zero diagonal: singular pivot")
        cs = 1.0 / np.sqrt(1.0 + t * t)
        sn = t * cs
        g = np.eye(n)
        g[i, i] = g[j, j] = cs
        g[i, j] = sn
        g[j, i] = -sn
        m = g @ m @ g.T
        o = g @ o
    return o


def _closing_phases(mu):
    """Angles phi_j with sum_j mu_j exp(i phi_j) = 0, for mu_1 <= sum(rest)."""
    mu = np.asarray(mu, dtype=float)
    n = len(mu)
    if n == 1:
        if mu[0] > 1e-9:
            raise SolverError("single-term spectrum cannot close a polygon")
        return np.zeros(1)
    if n == 2:
        if abs(mu[0] - mu[1]) > 1e-9:
            raise SolverError("two-term spectrum with unequal weights cannot close")
        return np.array([0.0, np.pi])

    def triangle_angle(a, b, c):
        # angle opposite to side c in a triangle with sides a, b, c
        arg = (a * a + b * b - c * c) / (2.0 * a * b) if a > 0 and b > 0 else 1.0
        return float(np.arccos(np.clip(arg, -1.0, 1.0)))

    if n == 3:
        a, b, c = mu
        # triangle with sides a, b, c; place side a along the negative x-axis
        gamma = triangle_angle(b, c, a)  # apex angle between sides b and c
        # vectors b and c must sum to -a (length a)
        tb = triangle_angle(a, b, c)
        return np.array([0.0, np.pi - tb, np.pi + triangle_angle(a, c, b)])
    # n == 4: collapse the two smallest into one effective segment
    a, b, c, d = mu
    lo = max(abs(a - b), c - d)
    hi = min(a + b, c + d)
    if lo > hi + 1e-12:
        raise SolverError("polygon inequality violated")
    s = 0.5 * (lo + hi)
    # segments c, d realize an effective length s
    phi_cd = triangle_angle(c, d, s)
    # now close the triangle with sides a, b, s
    phases = np.zeros(4)
    phases[0] = 0.0
    tb = triangle_angle(a, b, s)
    phases[1] = np.pi - tb
    # direction of the effective segment closing (a, b)
    vec = a * np.exp(1j * phases[0]) + b * np.exp(1j * phases[1])
    dir_s = np.angle(-vec)
    off = triangle_angle(s, c, d)
    phases[2] = dir_s + off
    phases[3] = dir_s + off - np.pi + phi_cd
    # orient d so the pair actually sums to the effective segment
    resid = (c * np.exp(1j * phases[2]) + d * np.exp(1j * phases[3])
             - s * np.exp(1j * dir_s))
    if abs(resid) > 1e-9:
        phases[3] = dir_s - off + np.pi - phi_cd
        phases[2] = dir_s - off
    return phases


def _decompose_once(rho):
    w, v = smallmat.hermitian_eig(rho, tol=1e-10)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    keep = w > _RANK_TOL
    w, v = w[keep], v[:, keep]
    n = len(w)
    sub = v * np.sqrt(w)  # columns: subnormalized eigenvectors

    tau = sub.T @ smallmat.SPIN_FLIP @ sub  # complex symmetric preconcurrence matrix
    u, mu = _takagi(tau)
    if np.linalg.norm(u @ np.diag(mu) @ u.T - tau) > 1e-8:
        raise SolverError("Takagi factorization failed (degenerate spin-flip spectrum)")
    x = sub @ u.conj()  # columns x_i with x_i^T Y x_j = mu_i delta_ij

    c = mu[0] - np.sum(mu[1:])
    if c > 1e-9:
        # phase all but the first term so preconcurrences sum to C
        y = x.copy()
        y[:, 1:] *= 1j
        d = np.concatenate([[mu[0]], -mu[1:]])
        gram = np.real(y.conj().T @ y)
        o = _zero_diagonal_rotation(np.diag(d) - c * gram)
        z = y @ o.T
    else:
        c = max(c, 0.0)
        phases = _closing_phases(mu)
        y = x * np.exp(0.5j * phases)[None, :]
        # pad to 4 slots; a flat orthogonal matrix zeroes every preconcurrence
        ypad = np.zeros((4, 4), dtype=complex)
        ypad[:, :n] = y
        h = 0.5 * np.array(
            [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]], dtype=float
        )
        z = ypad @ h.T

    probs, terms = [], []
    for col in z.T:
        p = float(np.vdot(col, col).real)
        if p < 1e-14:
            continue
        probs.append(p)
        terms.append(schmidt_decompose(col / np.sqrt(p)))
    total = sum(probs)
    probs = [p / total for p in probs]
    alpha = float(np.arcsin(np.sqrt(measures.geometric_from_concurrence(min(c, 1.0)))))
    return EqualGDecomposition(probs, terms, alpha)


def _check_decomposition(rho, dec):
    if np.linalg.norm(dec.reconstruct() - rho) > 1e-9:
        return False
    g = np.sin(dec.common_angle) ** 2
    return all(abs(t.geometric - g) <= 1e-8 for t in dec.terms)


def equal_g_decomposition(rho):
    """Decompose rho into <= 4 pure states, each with G(psi_i) = G(rho)."""
    rho = as_density(rho)
    try:
        dec = _decompose_once(rho)
        if _check_decomposition(rho, dec):
            return dec
    except SolverError:
        pass
    # near-degenerate spin-flip spectrum: perturb once and retry
    pert = (rho + 1e-12 * np.eye(4) / 4.0)
    pert /= np.trace(pert).real
    dec = _decompose_once(pert)
    if not _check_decomposition(rho, dec):
        mu = np.linalg.svd(
            smallmat.psd_sqrt(rho) @ smallmat.SPIN_FLIP @ smallmat.psd_sqrt(rho).conj(),
            compute_uv=False,
        )
        raise SolverError(
            "equal-entanglement decomposition failed; spin-flip spectrum "
            f"{np.array2string(mu, precision=6)} is ill-conditioned"
        )
    return dec


def _tilted(psi, angle):
    """Pure state cos(angle)|a1 b1> + sin(angle)|a2 b2> in psi's Schmidt bases."""
    vec = np.cos(angle) * np.kron(psi.basis_a[:, 0], psi.basis_b[:, 0])
    vec = vec + np.sin(angle) * np.kron(psi.basis_a[:, 1], psi.basis_b[:, 1])
    return vec


def rho_min(rho, f):
    """The state of minimal geometric entanglement in the fidelity ball S_{rho,f}.

    Each equal-entanglement term is tilted from the common Schmidt angle alpha
    down to max(alpha - arccos(sqrt(f)), 0), and the weights are re-biased by
    the term overlaps.
    """
    if not 0.0 < f <= 1.0:
        raise DomainError(f"fidelity radius f = {f!r} outside (0, 1]")
    rho = as_density(rho)
    k = float(np.arccos(np.sqrt(f)))
    dec = equal_g_decomposition(rho)
    beta = max(dec.common_angle - k, 0.0)
    out = np.zeros((4, 4), dtype=complex)
    weights = []
    vecs = []
    for p, psi in zip(dec.probabilities, dec.terms):
        phi = _tilted(psi, beta)
        overlap = abs(np.vdot(psi.reconstruct(), phi)) ** 2
        weights.append(p * overlap)
        vecs.append(phi)
    total = sum(weights)
    assert total > 1e-12, "weight renormalization collapsed; f > 0 should prevent this"
    for wgt, vec in zip(weights, vecs):
        out += (wgt / total) * np.outer(vec, vec.conj())
    return DensityMatrix(out)


def psi_max(psi, f):
    """The pure state of maximal geometric entanglement in S_{psi,f}."""
    if not isinstance(psi, PureState):
        raise DomainError("psi_max expects a PureState")
    if not 0.0 < f <= 1.0:
        raise DomainError(f"fidelity radius f = {f!r} outside (0, 1]")
    k = float(np.arccos(np.sqrt(f)))
    beta = min(psi.schmidt_angle + k, np.pi / 4)
    return schmidt_decompose(_tilted(psi, beta))
