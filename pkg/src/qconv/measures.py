"""Two-qubit entanglement quantifiers.

All mixed-state quantities are driven by the concurrence C, computed from the
spin-flip spectrum.  The geometric entanglement follows from
G = (1 - sqrt(1 - C^2)) / 2, the entanglement of formation from E_F = h(G)
with h the binary entropy.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import smallmat
from .errors import DomainError
from .states import as_density, schmidt_decompose

MONOTONES = ("eof", "concurrence", "geometric")


@dataclass
class MeasureReport:
    concurrence: float
    geometric: float
    eof: float
    source: str = "closed-form"

    def to_json(self):
        return {
            "concurrence": self.concurrence,
            "geometric": self.geometric,
            "eof": self.eof,
            "source": self.source,
        }


def binary_entropy(x):
    x = smallmat.clamp(x, 0.0, 1.0, what="entropy argument")
    if x in (0.0, 1.0):
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def binary_entropy_inv(y):
    """Inverse of the binary entropy on the [0, 1/2] branch."""
    y = smallmat.clamp(y, 0.0, 1.0, what="binary entropy value")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    return float(brentq(lambda x: binary_entropy(x) - y, 0.0, 0.5, xtol=1e-14))


def concurrence(rho):
    """Wootters concurrence C = max(0, mu1 - mu2 - mu3 - mu4).

    The mu_i are computed as singular values of sqrt(rho) Y conj(sqrt(rho))
    with Y the spin-flip operator; this keeps all arithmetic on Hermitian /
    unitary factors instead of the non-Hermitian product rho Y conj(rho) Y.
    """
    rho = as_density(rho)
    sr = smallmat.psd_sqrt(rho)
    mu = np.linalg.svd(sr @ smallmat.SPIN_FLIP @ sr.conj(), compute_uv=False)
    c = mu[0] - mu[1] - mu[2] - mu[3]
    return float(max(c, 0.0))


def _concurrence_batch(rhos):
    sr = smallmat.psd_sqrt_batch(rhos)
    mu = np.linalg.svd(sr @ smallmat.SPIN_FLIP @ np.conj(sr), compute_uv=False)
    return np.clip(mu[:, 0] - mu[:, 1] - mu[:, 2] - mu[:, 3], 0.0, None)


def geometric_from_concurrence(c):
    c = smallmat.clamp(float(c), 0.0, 1.0, what="concurrence")
    return float((1.0 - np.sqrt(1.0 - c * c)) / 2.0)


def concurrence_from_geometric(g):
    g = smallmat.clamp(float(g), 0.0, 0.5, what="geometric entanglement")
    return float(np.sqrt(1.0 - (1.0 - 2.0 * g) ** 2))


def geometric_entanglement(rho):
    """G(rho) in [0, 1/2]; for pure states this equals 1 - lam1."""
    return geometric_from_concurrence(concurrence(rho))


def geometric_batch(rhos):
    c = np.clip(_concurrence_batch(rhos), 0.0, 1.0)
    return (1.0 - np.sqrt(1.0 - c * c)) / 2.0


def entanglement_of_formation(rho):
    return binary_entropy(geometric_entanglement(rho))


def measure_report(rho, source="closed-form"):
    c = concurrence(rho)
    g = geometric_from_concurrence(c)
    return MeasureReport(c, g, binary_entropy(g), source)


_FID_SDP = {}


def _max_separable_fidelity(rho):
    """max_{sigma separable} F(rho, sigma) via the root-fidelity SDP.

    Uses the semidefinite characterization sqrt(F) = max Re tr(X) subject to
    [[rho, X], [X^H, sigma]] >= 0, with sigma ranging over PPT states (exact
    for two qubits).  Entirely independent of the concurrence closed form.
    """
    if "prob" not in _FID_SDP:
        import cvxpy as cp

        rho_p = cp.Parameter((4, 4), hermitian=True)
        sig = cp.Variable((4, 4), hermitian=True)
        x = cp.Variable((4, 4), complex=True)
        pt = cp.bmat(
            [
                [sig[0:2, 0:2].T, sig[0:2, 2:4].T],
                [sig[2:4, 0:2].T, sig[2:4, 2:4].T],
            ]
        )
        cons = [
            cp.bmat([[rho_p, x], [cp.conj(x.T), sig]]) >> 0,
            sig >> 0,
            pt >> 0,
            cp.trace(sig) == 1,
        ]
        prob = cp.Problem(cp.Maximize(cp.real(cp.trace(x))), cons)
        _FID_SDP.update(cp=cp, rho=rho_p, prob=prob)
    cp = _FID_SDP["cp"]
    _FID_SDP["rho"].value = rho
    _FID_SDP["prob"].solve(solver=cp.SCS, eps_abs=1e-10, eps_rel=1e-10, max_iters=200000)
    root = float(_FID_SDP["prob"].value)
    return min(max(root, 0.0), 1.0) ** 2


def _max_product_overlap(rho, restarts, rng):
    """max <ab| rho |ab> by multi-start alternating ascent.

    For a fixed |b> the optimal |a> is the top eigenvector of the conditioned
    2x2 matrix (and vice versa), so each sweep is monotone in the overlap.
    """
    r4 = rho.reshape(2, 2, 2, 2)  # [a, b, a', b']
    best = 0.0
    for _ in range(restarts):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        a /= np.linalg.norm(a)
        prev = -1.0
        for _ in range(200):
            mb = np.einsum("a,abcd,c->bd", a.conj(), r4, a)
            w, v = np.linalg.eigh(0.5 * (mb + mb.conj().T))
            b = v[:, -1]
            ma = np.einsum("b,abcd,d->ac", b.conj(), r4, b)
            w, v = np.linalg.eigh(0.5 * (ma + ma.conj().T))
            a = v[:, -1]
            val = w[-1].real
            if val - prev < 1e-14:
                break
            prev = val
        best = max(best, val)
    return float(best)


def geometric_entanglement_brute(rho, restarts=32, seed=0):
    """Independent oracle for G(rho) = 1 - max fidelity to a separable state.

    For pure inputs the maximum is attained on pure product states, and a
    multi-start ascent over local Bloch vectors finds it.  For mixed inputs
    the maximizer is a mixed separable state, so the defining maximization is
    solved directly over PPT states with the root-fidelity SDP.
    """
    if restarts < 16:
        raise DomainError(f"restarts must be >= 16, got {restarts}")
    rho = as_density(rho)
    purity = float(np.trace(rho @ rho).real)
    if purity >= 1.0 - 1e-10:
        rng = np.random.default_rng(seed)
        best = _max_product_overlap(rho, restarts, rng)
        return float(max(1.0 - best, 0.0))
    return float(max(1.0 - _max_separable_fidelity(rho), 0.0))


def generalized_geometric(rho, g):
    """Entanglement beyond budget g: 0 if G(rho) <= g, else
    sin^2(arcsin sqrt(G) - arcsin sqrt(g))."""
    g = smallmat.clamp(g, 0.0, 0.5, tol=0.0, what="entanglement budget g")
    gr = geometric_entanglement(rho)
    if gr <= g:
        return 0.0
    return float(np.sin(np.arcsin(np.sqrt(gr)) - np.arcsin(np.sqrt(g))) ** 2)


def monotone_ball_value(rho, k, monotone):
    """The generalized-geometric transform of an arbitrary monotone M = f(G):
    M_k(rho) = 0 if M(rho) <= k, else
    sin^2(arcsin sqrt(f^-1(M)) - arcsin sqrt(f^-1(k)))."""
    if monotone not in MONOTONES:
        raise DomainError(f"unknown monotone {monotone!r}; expected one of {MONOTONES}")
    if monotone == "geometric":
        return generalized_geometric(rho, k)
    if monotone == "eof":
        g_budget = binary_entropy_inv(smallmat.clamp(k, 0.0, 1.0, tol=0.0, what="E_F budget"))
    else:  # concurrence
        g_budget = geometric_from_concurrence(
            smallmat.clamp(k, 0.0, 1.0, tol=0.0, what="concurrence budget")
        )
    return generalized_geometric(rho, g_budget)


def min_distance_to_bounded_entanglement(rho, g):
    """Minimal Bures angle from rho to any state with G <= g."""
    g = smallmat.clamp(g, 0.0, 0.5, tol=0.0, what="entanglement budget g")
    gr = geometric_entanglement(rho)
    if gr <= g:
        return 0.0
    return float(np.arcsin(np.sqrt(gr)) - np.arcsin(np.sqrt(g)))


def werner_geometric(r):
    """Closed form G(rho_W(r)) = 1/2 - sqrt(3 + 6r - 9r^2)/4 for r > 1/3.

    Below r = 1/3 the Werner state is separable and G = 0; the square-root
    expression is only the entangled-branch formula (it curves back up for
    small r), so the branch split is explicit rather than a max with zero.
    """
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"Werner parameter r = {r!r} outside [0, 1]")
    if r <= 1.0 / 3.0:
        return 0.0
    return float(max(0.5 - 0.25 * np.sqrt(3.0 + 6.0 * r - 9.0 * r * r), 0.0))
