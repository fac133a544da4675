"""Generalized (resource) robustness for two-qubit states.

For 2x2 systems PPT is equivalent to separability (Horodecki criterion), so
the semidefinite program

    minimize  tr(Sigma) - 1
    s.t.      Sigma >= rho,  partial_transpose(Sigma) >= 0

computes the robustness exactly rather than as a relaxation.  This module is
the single place where that dimension-specific exactness enters.

Every returned value carries a certificate: the primal solution is checked
feasible within tolerance, and a repaired dual pair (Y, Z) with
Y + PT(Z) = I, Y >= 0, Z >= 0 gives the lower bound tr(Y rho) - 1.  Results
whose primal/dual gap exceeds 10*tol raise SolverError instead of being
silently tagged; downstream Theorem-1 bounds refuse uncertified inputs.
"""

from dataclasses import dataclass

import numpy as np

from . import measures, smallmat
from .errors import DomainError, SolverError
from .states import DensityMatrix, PureState, as_density

DEFAULT_TOL = 1e-6


@dataclass
class RobustnessResult:
    value: float
    witness_state: DensityMatrix      # the mixing state tau
    free_state: DensityMatrix         # (rho + R tau) / (1 + R), PPT
    tolerance: float
    iterations: int
    certified: bool = True
    gap: float = 0.0

    def to_json(self):
        from .states import state_to_json

        return {
            "value": self.value,
            "witness_state": state_to_json(self.witness_state),
            "free_state": state_to_json(self.free_state),
            "tolerance": self.tolerance,
            "iterations": self.iterations,
            "certified": self.certified,
            "gap": self.gap,
        }


_SDP_CACHE = {}


def _sdp():
    """Lazily built, parameter-cached SDP (compiled once, re-solved per rho)."""
    if "prob" not in _SDP_CACHE:
        import cvxpy as cp

        rho_p = cp.Parameter((4, 4), hermitian=True)
        sig = cp.Variable((4, 4), hermitian=True)
        pt = cp.bmat(
            [
                [sig[0:2, 0:2].T, sig[0:2, 2:4].T],
                [sig[2:4, 0:2].T, sig[2:4, 2:4].T],
            ]
        )
        cons = [sig - rho_p >> 0, pt >> 0]
        prob = cp.Problem(cp.Minimize(cp.real(cp.trace(sig))), cons)
        _SDP_CACHE.update(cp=cp, rho=rho_p, sigma=sig, cons=cons, prob=prob)
    return _SDP_CACHE


def _psd_clip(a):
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    w = np.clip(w, 0.0, None)
    return (v * w) @ v.conj().T


def _dual_lower_bound(y_dual, z_dual, rho):
    """Certified lower bound tr(Y rho) - 1 from a repaired dual pair.

    cvxpy scales duals of complex PSD constraints by 1/2; the scale is picked
    by the stationarity residual I - Y - PT(Z) = 0.  Any scale keeps the
    repaired pair feasible (only the tightness of the bound depends on it).
    """
    y_dual = np.asarray(y_dual)
    z_dual = np.asarray(z_dual)
    eye = np.eye(4)
    scale = min(
        (1.0, 2.0),
        key=lambda s: np.linalg.norm(
            eye - s * y_dual - s * smallmat.partial_transpose(z_dual)
        ),
    )
    z = _psd_clip(scale * z_dual)
    y = eye - smallmat.partial_transpose(z)
    lam = np.linalg.eigvalsh(0.5 * (y + y.conj().T))[0].real
    if lam < 0.0:
        # rescale so that Y stays PSD while preserving Y + PT(Z) = I
        y = (y - lam * np.eye(4)) / (1.0 - lam)
    return float(np.trace(y @ rho).real) - 1.0


def generalized_robustness(rho, tol=DEFAULT_TOL):
    """R(rho) = min { s >= 0 : (rho + s tau)/(1+s) separable for some state tau }."""
    if tol < 1e-9:
        raise DomainError(f"tol = {tol!r} below the supported minimum 1e-9")
    rho = as_density(rho)
    eye4 = np.eye(4) / 4.0

    # Free states have zero robustness; report R = 0 exactly iff PT(rho) is PSD.
    if np.linalg.eigvalsh(smallmat.partial_transpose(rho))[0] >= -tol:
        return RobustnessResult(0.0, DensityMatrix(eye4), DensityMatrix(rho),
                                tol, 0, certified=True, gap=0.0)

    sdp = _sdp()
    cp = sdp["cp"]
    sdp["rho"].value = rho
    eps = max(tol * 1e-3, 1e-10)
    try:
        sdp["prob"].solve(solver=cp.SCS, eps_abs=eps, eps_rel=eps, max_iters=200000)
    except cp.error.SolverError as exc:
        raise SolverError(f"SDP solver failed: {exc}") from exc
    if sdp["sigma"].value is None:
        raise SolverError(f"SDP returned no solution (status {sdp['prob'].status})")

    sigma = np.asarray(sdp["sigma"].value)
    sigma = 0.5 * (sigma + sigma.conj().T)
    value = float(np.trace(sigma).real) - 1.0
    iters = getattr(sdp["prob"].solver_stats, "num_iters", 0) or 0

    # Primal feasibility residuals.
    res1 = -min(np.linalg.eigvalsh(sigma - rho)[0], 0.0)
    res2 = -min(np.linalg.eigvalsh(smallmat.partial_transpose(sigma))[0], 0.0)
    if max(res1, res2) > tol:
        raise SolverError(
            f"primal residual {max(res1, res2):.3e} exceeds tol {tol:.0e}",
            best_value=value,
        )

    lower = max(
        _dual_lower_bound(sdp["cons"][0].dual_value, sdp["cons"][1].dual_value, rho),
        0.0,
    )
    gap = value - lower
    if gap > 10.0 * tol:
        raise SolverError(
            f"duality gap {gap:.3e} exceeds 10*tol {10 * tol:.0e}", best_value=value
        )

    value = max(value, 0.0)
    if value < 1e-12:
        tau = eye4  # placeholder; the mixing weight is (numerically) zero
    else:
        tau = _psd_clip((sigma - rho) / value)
        tau /= np.trace(tau).real
    free = sigma / (1.0 + value)
    free = _psd_clip(free)
    free /= np.trace(free).real
    return RobustnessResult(value, DensityMatrix(tau), DensityMatrix(free),
                            tol, iters, certified=True, gap=gap)


def robustness_pure_oracle(psi):
    """Closed form for pure bipartite states: (sqrt(l1)+sqrt(l2))^2 - 1 = 2 sqrt(l1 l2)."""
    if not isinstance(psi, PureState):
        raise DomainError("robustness_pure_oracle expects a PureState")
    return float(2.0 * np.sqrt(max(psi.lam1 * psi.lam2, 0.0)))


def robustness_lower_bound(rho):
    """R(rho) >= G(rho) / (1 - G(rho))."""
    g = measures.geometric_entanglement(rho)
    return float(g / (1.0 - g))
