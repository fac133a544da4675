"""Two-qubit state constructors, parsers, and seeded samplers.

State-spec mini-language used by the CLI:
    pure:<alpha>   cos(a)|00> + sin(a)|11>, alpha in [0, pi/4]
    werner:<r>     r |phi+><phi+| + (1-r) I/4, r in [0, 1]
    bell:phi+      the maximally entangled state (|00>+|11>)/sqrt(2)
    haar:<seed>    seeded Haar-random pure state
    file:<path>    JSON state file (see load_state / save_state)
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import smallmat
from .errors import DomainError


@dataclass
class PureState:
    """Normalized two-qubit pure state with cached Schmidt data.

    ``basis_a`` / ``basis_b`` hold the local Schmidt vectors as columns, so
    sum_i sqrt(lam_i) basis_a[:, i] (x) basis_b[:, i] reproduces ``amplitudes``
    up to a global phase.
    """

    amplitudes: np.ndarray
    lam1: float
    lam2: float
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def schmidt_angle(self):
        """Schmidt angle alpha in [0, pi/4]: lam = (cos^2 a, sin^2 a)."""
        return float(np.arcsin(np.sqrt(smallmat.clamp(self.lam2, 0.0, 0.5, what="lam2"))))

    @property
    def geometric(self):
        """Geometric entanglement G(psi) = 1 - lam1."""
        return float(max(self.lam2, 0.0))

    def density(self):
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def reconstruct(self):
        """Schmidt-form amplitudes sum_i sqrt(lam_i) |a_i>|b_i>."""
        out = np.sqrt(self.lam1) * np.kron(self.basis_a[:, 0], self.basis_b[:, 0])
        out = out + np.sqrt(max(self.lam2, 0.0)) * np.kron(self.basis_a[:, 1], self.basis_b[:, 1])
        return out


@dataclass
class DensityMatrix:
    """4x4 Hermitian PSD unit-trace matrix; the universal mixed-state carrier."""

    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {self.matrix.shape}")
        if self.validate:
            self.matrix = smallmat.check_density(self.matrix)


def as_density(state):
    """Coerce a DensityMatrix, PureState, or raw array into a 4x4 ndarray."""
    if isinstance(state, DensityMatrix):
        return state.matrix
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    return smallmat.check_density(state)


def _phase_fix(vec):
    """Phase making the first nonzero component of vec real-positive."""
    for x in vec:
        if abs(x) > 1e-12:
            return x / abs(x)
    return 1.0


def schmidt_decompose(vec):
    """Schmidt decomposition of a normalized 4-component amplitude vector."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    if vec.shape != (4,):
        raise DomainError(f"expected 4 amplitudes, got {vec.shape}")
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise DomainError("zero vector has no Schmidt decomposition")
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"amplitudes not normalized (norm {norm:.12g})")
    vec = vec / norm
    amp = vec.reshape(2, 2)  # amp[a, b], qubit A is the high-order index
    u, s, vh = np.linalg.svd(amp)
    basis_a = u.copy()
    basis_b = vh.T.copy()  # columns b_i, not conjugated: vec = sum s_i a_i (x) b_i
    # Fix local phases: a_i first nonzero component real-positive (compensated
    # on the b side), then one global phase from b_1.
    for i in range(2):
        ph = _phase_fix(basis_a[:, i])
        basis_a[:, i] /= ph
        basis_b[:, i] *= ph
    gph = _phase_fix(basis_b[:, 0])
    basis_b /= gph
    vec = vec / gph
    lam1 = smallmat.clamp(float(s[0] ** 2), 0.0, 1.0, what="lam1")
    lam2 = max(1.0 - lam1, 0.0)
    return PureState(vec, lam1, lam2, basis_a, basis_b)


def pure_from_angle(alpha):
    """|psi> = cos(alpha)|00> + sin(alpha)|11> with alpha in [0, pi/4]."""
    if not 0.0 <= alpha <= np.pi / 4 + 1e-9:
        raise DomainError(f"alpha = {alpha!r} outside [0, pi/4]")
    alpha = min(alpha, np.pi / 4)
    vec = np.zeros(4, dtype=complex)
    vec[0] = np.cos(alpha)
    vec[3] = np.sin(alpha)
    return schmidt_decompose(vec)


def bell_phi_plus():
    return pure_from_angle(np.pi / 4)


def werner(r):
    """Werner state r |phi+><phi+| + (1-r) I/4; separable iff r <= 1/3."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"Werner parameter r = {r!r} outside [0, 1]")
    phi = bell_phi_plus().amplitudes
    mat = r * np.outer(phi, phi.conj()) + (1.0 - r) * np.eye(4) / 4.0
    return DensityMatrix(mat)


# ---------------------------------------------------------------------------
# Seeded samplers
# ---------------------------------------------------------------------------

def _haar_vector(rng, dim=4):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def sample_haar_pure(seed):
    """Haar-random two-qubit pure state, deterministic per seed."""
    rng = np.random.default_rng(seed)
    return schmidt_decompose(_haar_vector(rng))


def sample_mixed(seed, rank=4):
    """Random mixed state: partial trace of a Haar pure state on a 4 x rank ancilla."""
    if rank not in (1, 2, 3, 4):
        raise DomainError(f"rank must be 1..4, got {rank!r}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(m)


def _random_mixed_batch(rng, n, rank=4):
    g = rng.normal(size=(n, 4, rank)) + 1j * rng.normal(size=(n, 4, rank))
    m = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.trace(m, axis1=-2, axis2=-1).real
    return m / tr[:, None, None]


def _local_unitary_batch(rng, n, scale):
    """exp(i scale H_A) (x) exp(i scale H_B) for random 2x2 Hermitian H."""
    def rand_u(n):
        h = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
        h = 0.5 * (h + np.conj(np.swapaxes(h, -1, -2)))
        w, v = np.linalg.eigh(scale * h)
        return (v * np.exp(1j * w)[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))

    ua, ub = rand_u(n), rand_u(n)
    out = np.einsum("nij,nkl->nikjl", ua, ub).reshape(n, 4, 4)
    return out


def sample_fidelity_ball_array(rho, f, n, seed):
    """Stack of n density matrices with F(rho, sample) >= f - 1e-10.

    The proposal law is a heuristic hybrid (random local-unitary kicks of rho
    followed by mixing towards a random state, with the mixing weight bisected
    to stay inside the ball); coverage of the ball is not uniform in any
    measure, but every returned sample is certified to lie inside it.
    """
    rho = as_density(rho)
    if not 0.0 < f <= 1.0:
        raise DomainError(f"fidelity radius f = {f!r} outside (0, 1]")
    rng = np.random.default_rng(seed)
    if f == 1.0:
        return np.broadcast_to(rho, (n, 4, 4)).copy()

    # Pure reference states admit the cheap quadratic-form fidelity.
    w, v = np.linalg.eigh(rho)
    if w[-1] >= 1.0 - 1e-12:
        psi = v[:, -1]
        fid_fn = lambda sigmas: smallmat.pure_fidelity_batch(psi, sigmas)
    else:
        sqrt_rho = smallmat.psd_sqrt(rho)
        fid_fn = lambda sigmas: smallmat.fidelity_batch(sqrt_rho, sigmas)

    # Kicked copies of rho: shrink the kick back towards rho until in the ball.
    kick = _local_unitary_batch(rng, n, scale=0.5)
    base = kick @ rho @ np.conj(np.swapaxes(kick, -1, -2))
    base = 0.5 * (base + np.conj(np.swapaxes(base, -1, -2)))
    for _ in range(40):
        fid = fid_fn(base)
        bad = fid < f
        if not np.any(bad):
            break
        base[bad] = 0.5 * (base[bad] + rho)

    # Mix towards random states; bisect the largest admissible weight.  Eight
    # steps resolve the ball boundary to ~0.4%, enough for coverage purposes;
    # membership is certified exactly below regardless.
    target = _random_mixed_batch(rng, n)
    lo = np.zeros(n)
    hi = np.ones(n)
    for _ in range(8):
        mid = 0.5 * (lo + hi)
        cand = (1.0 - mid)[:, None, None] * base + mid[:, None, None] * target
        ok = fid_fn(cand) >= f
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    t = lo * rng.uniform(size=n)
    out = (1.0 - t)[:, None, None] * base + t[:, None, None] * target

    fid = fid_fn(out)
    bad = fid < f - 1e-10
    if np.any(bad):  # fall back to the certified base points
        out[bad] = base[bad]
    tr = np.trace(out, axis1=-2, axis2=-1).real
    return out / tr[:, None, None]


def sample_fidelity_ball(rho, f, n, seed):
    """List of n DensityMatrix samples with F(rho, sample) >= f - 1e-10."""
    arr = sample_fidelity_ball_array(rho, f, n, seed)
    return [DensityMatrix(m) for m in arr]


# ---------------------------------------------------------------------------
# JSON I/O and the state-spec mini-language
# ---------------------------------------------------------------------------

def state_to_json(state):
    if isinstance(state, PureState):
        return {"vector": [[float(x.real), float(x.imag)] for x in state.amplitudes]}
    mat = as_density(state)
    return {
        "dim": 4,
        "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in mat],
    }


def state_from_json(doc):
    if "vector" in doc:
        vec = np.array([complex(re, im) for re, im in doc["vector"]])
        return schmidt_decompose(vec)
    if "matrix" in doc:
        if doc.get("dim", 4) != 4:
            raise DomainError(f"unsupported dim {doc.get('dim')!r}")
        mat = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
        return DensityMatrix(mat)
    raise DomainError("state file needs a 'vector' or 'matrix' field")


def save_state(state, path):
    with open(path, "w") as fh:
        json.dump(state_to_json(state), fh, indent=1)


def load_state(path):
    with open(path) as fh:
        return state_from_json(json.load(fh))


def parse_state_spec(spec):
    """Parse a state spec like 'werner:0.9' into a PureState or DensityMatrix."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise DomainError(f"malformed state spec {spec!r} (expected kind:value)")
    try:
        if kind == "pure":
            return pure_from_angle(float(arg))
        if kind == "werner":
            return werner(float(arg))
        if kind == "bell":
            if arg != "phi+":
                raise DomainError(f"unknown Bell state {arg!r} (only phi+ supported)")
            return bell_phi_plus()
        if kind == "haar":
            return sample_haar_pure(int(arg))
        if kind == "file":
            return load_state(arg)
    except ValueError as exc:
        raise DomainError(f"bad argument in state spec {spec!r}: {exc}") from exc
    raise DomainError(f"unknown state spec kind {kind!r}")
