"""
Unit tests for the amplitude-damping Kraus elements and channel application
"""

import math

import numpy as np
import pytest

from core.channel import (
    ChannelParams,
    apply_channel,
    apply_kraus_map,
    check_gamma,
    damp_basis_state,
    identity_channel,
    multi_qubit_ad_kraus,
    single_qubit_ad_kraus,
    verify_trace_preserving,
)
from core.exceptions import ChannelError, DimensionMismatchError, ResourceLimitError
from core.linalg import DensityMatrix, tensor_all

pytestmark = pytest.mark.unit


@pytest.mark.parametrize("gamma", [-0.1, 1.5, float("nan")])
def test_check_gamma_rejects(gamma):
    with pytest.raises(ChannelError):
        check_gamma(gamma)


def test_channel_params():
    assert ChannelParams(0.2, 3).gamma == 0.2
    with pytest.raises(ChannelError):
        ChannelParams(0.2, 0)


def test_single_qubit_elements():
    channel = single_qubit_ad_kraus(0.36)
    e0, e1 = channel.dense_elements()
    np.testing.assert_allclose(e0, np.diag([1.0, 0.8]))
    np.testing.assert_allclose(e1, [[0.0, 0.6], [0.0, 0.0]])
    assert [e.label for e in channel.elements] == ["E0", "E1"]


@pytest.mark.parametrize("gamma", [0.0, 0.05, 0.3, 1.0])
def test_single_qubit_trace_preserving(gamma):
    assert verify_trace_preserving(single_qubit_ad_kraus(gamma))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.5, 1.0])
def test_multi_qubit_trace_preserving(n, gamma):
    channel = multi_qubit_ad_kraus(ChannelParams(gamma, n))
    assert len(channel) == 2 ** n
    assert channel.n == n
    assert verify_trace_preserving(channel)


def test_multi_qubit_matches_tensor_power():
    gamma, n = 0.2, 3
    single = single_qubit_ad_kraus(gamma).dense_elements()
    channel = multi_qubit_ad_kraus(ChannelParams(gamma, n))
    for e, element in enumerate(channel.elements):
        bits = [(e >> (n - 1 - q)) & 1 for q in range(n)]
        expected = tensor_all([single[b] for b in bits])
        np.testing.assert_allclose(element.to_dense(), expected, atol=1e-15)


def test_element_labels_name_the_decay_pattern():
    channel = multi_qubit_ad_kraus(ChannelParams(0.1, 2))
    assert [e.label for e in channel.elements] == ["E[00]", "E[01]", "E[10]", "E[11]"]


def test_multi_qubit_refuses_large_n():
    with pytest.raises(ResourceLimitError):
        multi_qubit_ad_kraus(ChannelParams(0.1, 13))
    with pytest.raises(ResourceLimitError):
        multi_qubit_ad_kraus(ChannelParams(0.1, 5), max_qubits=4)


def test_full_damping_sends_everything_to_ground():
    channel = multi_qubit_ad_kraus(ChannelParams(1.0, 2))
    rho = DensityMatrix.from_pure([0, 0, 0, 1])
    out = apply_channel(channel, rho)
    np.testing.assert_allclose(out.matrix, np.diag([1.0, 0.0, 0.0, 0.0]), atol=1e-15)


def test_single_qubit_coherence_decays():
    gamma = 0.2
    rho = DensityMatrix.from_pure(np.array([1, 1]) / math.sqrt(2))
    out = apply_channel(single_qubit_ad_kraus(gamma), rho).matrix
    assert out[1, 1].real == pytest.approx(0.5 * (1 - gamma))
    assert out[0, 0].real == pytest.approx(0.5 * (1 + gamma))
    assert abs(out[0, 1]) == pytest.approx(0.5 * math.sqrt(1 - gamma))


@pytest.mark.parametrize("u, v", [(0b011, 0b110), (0b011, 0b100), (0b111, 0b000), (0b101, 0b010)])
def test_multi_qubit_coherence_scales_with_weights(u, v):
    gamma, n = 0.2, 3
    psi = np.zeros(8)
    psi[[u, v]] = 1 / math.sqrt(2)
    out = apply_channel(multi_qubit_ad_kraus(ChannelParams(gamma, n)), DensityMatrix.from_pure(psi)).matrix
    weights = bin(u).count("1") + bin(v).count("1")
    assert out[u, v] == pytest.approx(0.5 * (1 - gamma) ** (weights / 2), abs=1e-14)
    assert out[v, u] == pytest.approx(np.conj(out[u, v]), abs=1e-14)


def test_shared_decay_carries_coherence_to_damped_pair():
    gamma = 0.2
    psi = np.zeros(8)
    psi[[0b011, 0b110]] = 1 / math.sqrt(2)
    out = apply_channel(multi_qubit_ad_kraus(ChannelParams(gamma, 3)), DensityMatrix.from_pure(psi)).matrix
    # the shared middle qubit decays on both sides: |001><100|
    assert out[0b001, 0b100] == pytest.approx(0.5 * gamma * (1 - gamma), abs=1e-14)


def test_identity_channel_leaves_state():
    rho = DensityMatrix.from_pure([1, 0, 1j, 0])
    out = apply_channel(identity_channel(2), rho)
    np.testing.assert_allclose(out.matrix, rho.matrix)


def test_apply_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply_channel(single_qubit_ad_kraus(0.1), DensityMatrix.maximally_mixed(4))


def test_apply_detects_trace_loss():
    broken = single_qubit_ad_kraus(0.3)
    broken = broken.__class__(2, broken.elements[:1])
    with pytest.raises(ChannelError):
        apply_channel(broken, DensityMatrix.from_pure([0, 1]))


def test_apply_rejects_indefinite_output():
    indefinite = DensityMatrix(np.diag([1.5, -0.5]).astype(complex))
    channel = single_qubit_ad_kraus(0.1)
    with pytest.raises(ChannelError, match="eigenvalue"):
        apply_channel(channel, indefinite)
    out = apply_channel(channel, indefinite, validate=False)
    np.testing.assert_allclose(np.diag(out.matrix).real, [1.45, -0.45], atol=1e-14)


def test_apply_accepts_rank_deficient_output():
    out = multi_qubit_ad_kraus(ChannelParams(1.0, 2)).apply(DensityMatrix.from_pure([0, 1, 0, 0]))
    assert out.eigenvalues()[0] == pytest.approx(0.0, abs=1e-14)


def test_threaded_application_matches_serial():
    channel = multi_qubit_ad_kraus(ChannelParams(0.15, 3))
    rng = np.random.default_rng(0)
    x = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    serial = apply_kraus_map(channel.elements, x, workers=1)
    threaded = apply_kraus_map(channel.elements, x, workers=3)
    np.testing.assert_allclose(threaded, serial, atol=1e-13)


def test_apply_kraus_map_needs_elements():
    with pytest.raises(ChannelError):
        apply_kraus_map([], np.eye(2))


def test_damp_basis_state_populations():
    gamma = 0.25
    populations = damp_basis_state(0b101, 3, gamma)
    assert set(populations) == {0b101, 0b100, 0b001, 0b000}
    assert populations[0b101] == pytest.approx((1 - gamma) ** 2)
    assert populations[0b000] == pytest.approx(gamma ** 2)
    assert sum(populations.values()) == pytest.approx(1.0)


def test_damp_basis_state_agrees_with_channel():
    gamma, n, x = 0.3, 3, 0b110
    channel = multi_qubit_ad_kraus(ChannelParams(gamma, n))
    psi = np.zeros(8)
    psi[x] = 1
    out = apply_channel(channel, DensityMatrix.from_pure(psi)).matrix
    for word, population in damp_basis_state(x, n, gamma).items():
        assert out[word, word].real == pytest.approx(population)
