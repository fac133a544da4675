"""Conversion quantities for a pure two-qubit initial state.

Closed forms implemented here:
  * exact-conversion probability  P = min(G(psi)/G(rho), 1)
  * probability at target fidelity f (branch discriminant m1)
  * fidelity at probability p
  * probability with errors on both ends (f1, f2; discriminant m2)
together with the theory-agnostic upper bounds
  F_p, P_f <= min((1 + R(initial)) (1 - G(target)) / p_or_f, 1).
"""

from dataclasses import dataclass

import numpy as np

from . import measures, smallmat
from .errors import DomainError, SolverError
from .robustness import RobustnessResult
from .states import PureState, as_density, werner

# dead-band around the branch boundary; both branches agree there, and the
# unit-value branch avoids a 0/0 in the ratio
_BRANCH_TOL = 1e-12


@dataclass
class ConversionReport:
    initial: str
    target: str
    query: str
    exact_value: float
    branch_discriminant: float = None
    thm1_bound: float = None
    gap: float = None

    def to_json(self):
        return {
            "initial": self.initial,
            "target": self.target,
            "query": self.query,
            "branch_discriminant": self.branch_discriminant,
            "exact_value": self.exact_value,
            "thm1_bound": self.thm1_bound,
            "gap": self.gap,
        }


def _check_certified(robustness):
    """Accept a certified RobustnessResult or a plain nonnegative float."""
    if robustness is None:
        return None
    if isinstance(robustness, RobustnessResult):
        if not robustness.certified:
            raise SolverError("refusing uncertified robustness value in Theorem-1 bound")
        return robustness.value
    r = float(robustness)
    if r < 0.0:
        raise DomainError(f"robustness must be nonnegative, got {r!r}")
    return r


def thm1_fidelity_bound(r_initial, g_target, p):
    """Universal bound F_p <= min((1+R)(1-G)/p, 1)."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"probability p = {p!r} outside (0, 1]")
    r = _check_certified(r_initial)
    if r is None:
        raise DomainError("Theorem-1 bound needs a certified robustness value")
    g = smallmat.clamp(g_target, 0.0, 1.0, tol=0.0, what="target geometric measure")
    return float(min((1.0 + r) * (1.0 - g) / p, 1.0))


def thm1_probability_bound(r_initial, g_target, f):
    """Universal bound P_f <= min((1+R)(1-G)/f, 1)."""
    if not 0.0 < f <= 1.0:
        raise DomainError(f"fidelity f = {f!r} outside (0, 1]")
    return thm1_fidelity_bound(r_initial, g_target, f)


def _angles(psi, rho):
    if not isinstance(psi, PureState):
        raise DomainError("the initial state must be pure")
    g_psi = psi.geometric
    g_rho = measures.geometric_entanglement(as_density(rho))
    return g_psi, g_rho


def exact_probability(psi, rho):
    """Optimal probability for exact conversion: min(G(psi)/G(rho), 1)."""
    g_psi, g_rho = _angles(psi, rho)
    if g_rho <= _BRANCH_TOL or g_psi >= g_rho:
        return 1.0
    return float(g_psi / g_rho)


def _attach_bound(report, robustness, rho, denom):
    r = _check_certified(robustness)
    if r is None:
        return report
    g_rho = measures.geometric_entanglement(as_density(rho))
    report.thm1_bound = float(min((1.0 + r) * (1.0 - g_rho) / denom, 1.0))
    report.gap = max(report.thm1_bound - report.exact_value, 0.0)
    return report


def p_f(psi, rho, f, robustness=None, initial="psi", target="rho"):
    """Maximal conversion probability at target fidelity >= f."""
    if not 0.0 < f <= 1.0:
        raise DomainError(f"fidelity f = {f!r} outside (0, 1]")
    g_psi, g_rho = _angles(psi, rho)
    k = np.arccos(np.sqrt(f))
    m1 = float(np.arcsin(np.sqrt(g_psi)) - np.arcsin(np.sqrt(g_rho)) + k)
    if m1 >= -_BRANCH_TOL:
        value = 1.0
    else:
        denom = np.sin(np.arcsin(np.sqrt(g_rho)) - k) ** 2
        value = float(min(g_psi / denom, 1.0))
    report = ConversionReport(initial, target, "probability-at-f", value,
                              branch_discriminant=m1)
    return _attach_bound(report, robustness, rho, f)


def f_p(psi, rho, p, robustness=None, initial="psi", target="rho"):
    """Maximal conversion fidelity at probability >= p."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"probability p = {p!r} outside (0, 1]")
    g_psi, g_rho = _angles(psi, rho)
    if p * g_rho <= g_psi + _BRANCH_TOL:
        value = 1.0
    else:
        ratio = smallmat.clamp(g_psi / p, 0.0, 0.5, what="G(psi)/p")
        value = float(np.cos(np.arcsin(np.sqrt(g_rho)) - np.arcsin(np.sqrt(ratio))) ** 2)
    report = ConversionReport(initial, target, "fidelity-at-p", value)
    return _attach_bound(report, robustness, rho, p)


def p_f1_f2(psi, rho, f1, f2, robustness=None, initial="psi", target="rho"):
    """Maximal probability allowing errors on both ends: true initial within
    fidelity f1 of psi, true target within fidelity f2 of rho."""
    for name, f in (("f1", f1), ("f2", f2)):
        if not 0.0 < f <= 1.0:
            raise DomainError(f"fidelity {name} = {f!r} outside (0, 1]")
    g_psi, g_rho = _angles(psi, rho)
    k1 = np.arccos(np.sqrt(f1))
    k2 = np.arccos(np.sqrt(f2))
    m2 = float(np.arcsin(np.sqrt(g_psi)) - np.arcsin(np.sqrt(g_rho)) + k1 + k2)
    if f1 == 1.0 and f2 == 1.0:
        # reduces exactly to the zero-error probability; computing it through
        # the trigonometric form would lose the identity to roundoff
        value = exact_probability(psi, rho)
    elif m2 >= -_BRANCH_TOL:
        value = 1.0
    else:
        num = np.sin(min(np.arcsin(np.sqrt(g_psi)) + k1, np.pi / 4)) ** 2
        den = np.sin(np.arcsin(np.sqrt(g_rho)) - k2) ** 2
        value = float(min(num / den, 1.0))
    report = ConversionReport(initial, target, "probability-at-(f1,f2)", value,
                              branch_discriminant=m2)
    return _attach_bound(report, robustness, rho, f2)


def exact_probability_report(psi, rho, robustness=None, initial="psi", target="rho"):
    value = exact_probability(psi, rho)
    report = ConversionReport(initial, target, "exact-probability", value)
    return _attach_bound(report, robustness, rho, 1.0)


def werner_unit_fidelity_threshold(alpha, p):
    """Largest Werner parameter r with F_p(psi(alpha) -> rho_W(r)) = 1.

    Solves G(rho_W(r)) = G(psi(alpha)) / p by bisection; bisection (rather
    than the closed quadratic) stays robust at the r = 1/3 kink.
    """
    if not 0.0 < alpha <= np.pi / 4:
        raise DomainError(f"alpha = {alpha!r} outside (0, pi/4]")
    if not 0.0 < p <= 1.0:
        raise DomainError(f"probability p = {p!r} outside (0, 1]")
    target = np.sin(alpha) ** 2 / p
    if target > 0.5 + 1e-9:
        raise DomainError(
            f"G(psi)/p = {target:.6g} exceeds the two-qubit maximum 1/2; "
            "no Werner state reaches the unit-fidelity boundary"
        )
    target = min(target, 0.5)
    lo, hi = 1.0 / 3.0, 1.0
    if measures.geometric_entanglement(werner(1.0)) <= target:
        return 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if measures.geometric_entanglement(werner(mid)) <= target:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))
