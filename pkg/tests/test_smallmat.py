import numpy as np
import pytest

from qconv import smallmat
from qconv.errors import DomainError
from qconv.states import bell_phi_plus, sample_mixed


def random_density(rng, rank=4):
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def test_pauli_constants():
    for sig in (smallmat.SIGMA_X, smallmat.SIGMA_Y, smallmat.SIGMA_Z):
        assert np.allclose(sig @ sig, np.eye(2))
        assert np.allclose(sig, sig.conj().T)
    assert np.allclose(smallmat.SPIN_FLIP, np.kron(smallmat.SIGMA_Y, smallmat.SIGMA_Y))


def test_clamp():
    assert smallmat.clamp(1.0 + 1e-12, 0.0, 1.0) == 1.0
    assert smallmat.clamp(-1e-12, 0.0, 1.0) == 0.0
    assert smallmat.clamp(0.5, 0.0, 1.0) == 0.5
    with pytest.raises(DomainError):
        smallmat.clamp(1.1, 0.0, 1.0)


def test_check_density_rejects_bad_input():
    with pytest.raises(DomainError):
        smallmat.check_density(np.eye(4))  # trace 4
    bad = np.eye(4, dtype=complex) / 4.0
    bad[0, 1] = 0.3  # not Hermitian
    with pytest.raises(DomainError):
        smallmat.check_density(bad)
    neg = np.diag([0.6, 0.5, 0.0, -0.1]).astype(complex)
    with pytest.raises(DomainError):
        smallmat.check_density(neg)


def test_hermitian_eig_reconstructs():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = 0.5 * (a + a.conj().T)
        w, v = smallmat.hermitian_eig(a)
        assert np.linalg.norm((v * w) @ v.conj().T - a) < 1e-12
        assert np.all(np.diff(w) >= 0)


def test_psd_sqrt():
    rng = np.random.default_rng(1)
    for _ in range(20):
        rho = random_density(rng)
        s = smallmat.psd_sqrt(rho)
        assert np.linalg.norm(s @ s - rho) < 1e-12
        assert np.linalg.norm(s - s.conj().T) < 1e-13
    with pytest.raises(DomainError):
        smallmat.psd_sqrt(np.diag([1.0, 1.0, 1.0, -0.5]).astype(complex))


def test_fidelity_basic():
    rng = np.random.default_rng(2)
    for _ in range(20):
        rho = random_density(rng)
        sig = random_density(rng)
        f = smallmat.fidelity(rho, sig)
        assert 0.0 <= f <= 1.0
        assert abs(f - smallmat.fidelity(sig, rho)) < 1e-10
        assert abs(smallmat.fidelity(rho, rho) - 1.0) < 1e-10


def test_fidelity_pure_overlap():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        f = smallmat.fidelity(np.outer(a, a.conj()), np.outer(b, b.conj()))
        assert abs(f - abs(np.vdot(a, b)) ** 2) < 5e-8


def test_bures_triangle_inequality():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        rho = random_density(rng, rank=int(rng.integers(1, 5)))
        sig = random_density(rng, rank=int(rng.integers(1, 5)))
        tau = random_density(rng, rank=int(rng.integers(1, 5)))
        dab = smallmat.bures_angle(rho, sig)
        dbc = smallmat.bures_angle(sig, tau)
        dac = smallmat.bures_angle(rho, tau)
        assert dac <= dab + dbc + 1e-8


def test_partial_transpose_phi_plus_spectrum():
    rho = bell_phi_plus().density().matrix
    w = np.linalg.eigvalsh(smallmat.partial_transpose(rho))
    assert np.allclose(np.sort(w), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_involution_and_sides():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rho = random_density(rng)
        ptb = smallmat.partial_transpose(rho, "B")
        pta = smallmat.partial_transpose(rho, "A")
        assert np.allclose(smallmat.partial_transpose(ptb, "B"), rho)
        # the two sides are related by a full transpose: same spectrum
        assert np.allclose(np.linalg.eigvalsh(pta), np.linalg.eigvalsh(ptb))
    with pytest.raises(DomainError):
        smallmat.partial_transpose(rho, "C")


def test_batched_helpers_match_single():
    rng = np.random.default_rng(6)
    mats = np.stack([random_density(rng) for _ in range(30)])
    sr = smallmat.psd_sqrt_batch(mats)
    for i in range(30):
        assert np.linalg.norm(sr[i] - smallmat.psd_sqrt(mats[i])) < 1e-10
    ref = random_density(rng)
    fb = smallmat.fidelity_batch(smallmat.psd_sqrt(ref), mats)
    for i in range(30):
        assert abs(fb[i] - smallmat.fidelity(ref, mats[i])) < 1e-9


def test_pure_fidelity_batch():
    rng = np.random.default_rng(7)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    mats = np.stack([random_density(rng) for _ in range(10)])
    fb = smallmat.pure_fidelity_batch(psi, mats)
    rho = np.outer(psi, psi.conj())
    for i in range(10):
        assert abs(fb[i] - smallmat.fidelity(rho, mats[i])) < 5e-8
