import numpy as np
import pytest

from qconv import measures, robustness, smallmat, states
from qconv.errors import DomainError


def test_bell_state_robustness():
    res = robustness.generalized_robustness(states.bell_phi_plus().density())
    assert abs(res.value - 1.0) < 1e-6
    assert res.certified
    assert res.gap <= 10 * res.tolerance


def test_pure_oracle_agreement():
    for seed in range(10):
        psi = states.sample_haar_pure(seed)
        res = robustness.generalized_robustness(psi.density())
        expect = robustness.robustness_pure_oracle(psi)
        assert abs(res.value - expect) < 1e-4
    with pytest.raises(DomainError):
        robustness.robustness_pure_oracle(states.werner(0.9))


def test_pure_oracle_closed_form():
    psi = states.pure_from_angle(0.01)
    # 2 sqrt(l1 l2) = 2 sin(a) cos(a) = sin(2a)
    assert abs(robustness.robustness_pure_oracle(psi) - np.sin(0.02)) < 5e-15


def test_ppt_state_is_free():
    res = robustness.generalized_robustness(states.werner(0.3))
    assert res.value == 0.0
    assert res.certified
    res = robustness.generalized_robustness(np.eye(4) / 4.0)
    assert res.value == 0.0


def test_free_state_is_ppt():
    for r in (0.5, 0.7, 0.9, 1.0):
        res = robustness.generalized_robustness(states.werner(r))
        pt = smallmat.partial_transpose(res.free_state.matrix)
        assert np.linalg.eigvalsh(pt)[0] >= -1e-6
        # the mixture identity (rho + R tau) / (1 + R) = free state
        mix = (states.werner(r).matrix + res.value * res.witness_state.matrix)
        mix /= 1.0 + res.value
        assert np.linalg.norm(mix - res.free_state.matrix) < 1e-5


def test_lower_bound_inequality():
    for i in range(30):
        rho = states.sample_mixed(i, rank=1 + i % 4)
        res = robustness.generalized_robustness(rho)
        assert res.value >= robustness.robustness_lower_bound(rho) - 1e-5


def test_lower_bound_value():
    g = measures.geometric_entanglement(states.werner(0.9))
    lb = robustness.robustness_lower_bound(states.werner(0.9))
    assert abs(lb - g / (1.0 - g)) < 1e-15
    assert abs(lb - 0.30994411725221604) < 1e-12


def test_tolerance_domain():
    with pytest.raises(DomainError):
        robustness.generalized_robustness(states.werner(0.9), tol=1e-12)


def test_result_json():
    res = robustness.generalized_robustness(states.werner(0.9))
    doc = res.to_json()
    assert set(doc) == {"value", "witness_state", "free_state", "tolerance",
                        "iterations", "certified", "gap"}
    assert doc["certified"] is True
    assert "matrix" in doc["free_state"]
