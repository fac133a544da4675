import json

import numpy as np
import pytest

from qconv import smallmat, states
from qconv.errors import DomainError


def test_schmidt_decompose_reconstructs():
    rng = np.random.default_rng(0)
    for _ in range(200):
        vec = rng.normal(size=4) + 1j * rng.normal(size=4)
        vec /= np.linalg.norm(vec)
        psi = states.schmidt_decompose(vec)
        assert np.linalg.norm(psi.reconstruct() - psi.amplitudes) < 1e-10
        assert abs(psi.lam1 + psi.lam2 - 1.0) < 1e-12
        assert psi.lam1 >= psi.lam2 >= 0.0
        for basis in (psi.basis_a, psi.basis_b):
            assert np.allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12)


def test_schmidt_decompose_rejects_bad_input():
    with pytest.raises(DomainError):
        states.schmidt_decompose(np.zeros(4))
    with pytest.raises(DomainError):
        states.schmidt_decompose(np.ones(4))  # norm 2
    with pytest.raises(DomainError):
        states.schmidt_decompose(np.ones(3) / np.sqrt(3))


def test_pure_from_angle():
    psi = states.pure_from_angle(0.2)
    assert abs(psi.lam2 - np.sin(0.2) ** 2) < 1e-14
    assert abs(psi.schmidt_angle - 0.2) < 1e-12
    assert abs(psi.geometric - np.sin(0.2) ** 2) < 1e-14
    bell = states.bell_phi_plus()
    assert abs(bell.lam1 - 0.5) < 1e-12
    with pytest.raises(DomainError):
        states.pure_from_angle(-0.1)
    with pytest.raises(DomainError):
        states.pure_from_angle(1.0)


def test_werner():
    w = states.werner(0.9)
    assert abs(np.trace(w.matrix).real - 1.0) < 1e-12
    assert np.linalg.eigvalsh(w.matrix)[0] >= -1e-12
    assert np.allclose(states.werner(0.0).matrix, np.eye(4) / 4.0)
    with pytest.raises(DomainError):
        states.werner(1.5)


def test_density_matrix_validation():
    with pytest.raises(DomainError):
        states.DensityMatrix(np.eye(4))
    with pytest.raises(DomainError):
        states.DensityMatrix(np.eye(3) / 3.0)


def test_samplers_deterministic():
    a = states.sample_haar_pure(11).amplitudes
    b = states.sample_haar_pure(11).amplitudes
    assert np.array_equal(a, b)
    m1 = states.sample_mixed(11, rank=2).matrix
    m2 = states.sample_mixed(11, rank=2).matrix
    assert np.array_equal(m1, m2)
    assert not np.allclose(a, states.sample_haar_pure(12).amplitudes)
    with pytest.raises(DomainError):
        states.sample_mixed(0, rank=5)


def test_sample_mixed_rank():
    for rank in (1, 2, 3, 4):
        m = states.sample_mixed(3, rank=rank).matrix
        w = np.linalg.eigvalsh(m)
        assert np.sum(w > 1e-10) == rank


def test_haar_lam1_mean():
    # E[lam1] = 7/8 for two-qubit Haar pure states (density 6(2l-1)^2 on [1/2, 1])
    n = 2000
    vals = np.array([states.sample_haar_pure(50000 + i).lam1 for i in range(n)])
    se = np.sqrt(0.009375 / n)
    assert abs(vals.mean() - 7.0 / 8.0) < 3.0 * se


def test_fidelity_ball_membership():
    for spec, f in ((states.werner(0.85), 0.9), (states.pure_from_angle(0.3).density(), 0.8)):
        arr = states.sample_fidelity_ball_array(spec, f, 500, seed=9)
        sq = smallmat.psd_sqrt(spec.matrix)
        fids = smallmat.fidelity_batch(sq, arr)
        assert fids.min() >= f - 1e-10
        tr = np.trace(arr, axis1=-2, axis2=-1).real
        assert np.allclose(tr, 1.0, atol=1e-10)
    # f = 1 returns copies of rho itself
    arr = states.sample_fidelity_ball_array(states.werner(0.5), 1.0, 5, seed=0)
    assert np.allclose(arr, states.werner(0.5).matrix)
    with pytest.raises(DomainError):
        states.sample_fidelity_ball_array(states.werner(0.5), 0.0, 5, seed=0)


def test_fidelity_ball_list_wrapper():
    out = states.sample_fidelity_ball(states.werner(0.7), 0.95, 10, seed=1)
    assert len(out) == 10
    assert all(isinstance(s, states.DensityMatrix) for s in out)


def test_json_round_trip(tmp_path):
    psi = states.sample_haar_pure(21)
    back = states.state_from_json(states.state_to_json(psi))
    assert np.linalg.norm(back.amplitudes - psi.amplitudes) < 1e-12

    rho = states.sample_mixed(21)
    back = states.state_from_json(states.state_to_json(rho))
    assert np.linalg.norm(back.matrix - rho.matrix) < 1e-12

    path = tmp_path / "state.json"
    states.save_state(rho, path)
    assert np.linalg.norm(states.load_state(path).matrix - rho.matrix) < 1e-12
    with open(path) as fh:
        doc = json.load(fh)
    assert doc["dim"] == 4


def test_state_from_json_errors():
    with pytest.raises(DomainError):
        states.state_from_json({})
    with pytest.raises(DomainError):
        states.state_from_json({"dim": 8, "matrix": []})


def test_parse_state_spec():
    assert abs(states.parse_state_spec("pure:0.2").schmidt_angle - 0.2) < 1e-12
    assert isinstance(states.parse_state_spec("werner:0.9"), states.DensityMatrix)
    assert abs(states.parse_state_spec("bell:phi+").lam1 - 0.5) < 1e-12
    assert isinstance(states.parse_state_spec("haar:5"), states.PureState)
    for bad in ("nope", "pure:x", "bell:psi-", "blah:1"):
        with pytest.raises(DomainError):
            states.parse_state_spec(bad)


def test_parse_state_spec_file(tmp_path):
    path = tmp_path / "w.json"
    states.save_state(states.werner(0.6), path)
    parsed = states.parse_state_spec(f"file:{path}")
    assert np.linalg.norm(parsed.matrix - states.werner(0.6).matrix) < 1e-12
