import numpy as np
import pytest

from wmkit.channel import ChannelSpec, apply_awgn, apply_bitflip
from wmkit.fec import BitStream
from wmkit.signal_io import AudioClip


@pytest.fixture
def bits():
    return BitStream(np.random.default_rng(0).integers(0, 2, 5000))


def test_p_zero_is_identity(bits):
    assert apply_bitflip(bits, ChannelSpec("bitflip", 1, p=0.0)) == bits


def test_p_one_flips_everything(bits):
    out = apply_bitflip(bits, ChannelSpec("bitflip", 1, p=1.0))
    assert np.array_equal(out.bits, 1 - bits.bits)


def test_lossless_is_identity(bits):
    spec = ChannelSpec("lossless", 0)
    assert apply_bitflip(bits, spec) == bits
    clip = AudioClip([0.1, -0.2, 0.3], 8000)
    assert apply_awgn(clip, spec) == clip


def test_bitflip_rate_and_golden_count():
    zeros = BitStream(np.zeros(10**6, np.uint8))
    flips = int(apply_bitflip(zeros, ChannelSpec("bitflip", 1234, p=1e-3)).bits.sum())
    assert 800 <= flips <= 1200
    assert flips == 977  # PCG64, seed 1234


def test_bitflip_deterministic(bits):
    spec = ChannelSpec("bitflip", 42, p=0.1)
    assert apply_bitflip(bits, spec) == apply_bitflip(bits, spec)
    assert apply_bitflip(bits, spec) != apply_bitflip(bits, ChannelSpec("bitflip", 43, p=0.1))


def test_awgn_sigma_zero_identity():
    clip = AudioClip([0.5, -0.25], 8000)
    assert apply_awgn(clip, ChannelSpec("awgn", 3, sigma=0.0)) == clip


def test_awgn_variance():
    clip = AudioClip(np.zeros(10**6), 8000)
    out = apply_awgn(clip, ChannelSpec("awgn", 99, sigma=0.1))
    assert np.mean(out.samples ** 2) == pytest.approx(0.01, rel=0.02)


def test_awgn_deterministic_and_clamped():
    clip = AudioClip(np.full(1000, 0.99), 8000)
    spec = ChannelSpec("awgn", 7, sigma=0.5)
    a, b = apply_awgn(clip, spec), apply_awgn(clip, spec)
    assert a == b
    assert a.samples.max() <= 1.0 and a.samples.min() >= -1.0


def test_golden_awgn_prefix():
    out = apply_awgn(AudioClip(np.zeros(3), 8000), ChannelSpec("awgn", 99, sigma=0.1))
    np.testing.assert_allclose(
        out.samples, [0.008249430428370294, -0.04644184149542189, 0.005051506297463688], rtol=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(model="bitflip", seed=0, p=1.5),
    dict(model="bitflip", seed=0, p=-0.1),
    dict(model="awgn", seed=0, sigma=-1.0),
    dict(model="burst", seed=0),
    dict(model="awgn", seed=-1),
    dict(model="awgn", seed=2**64),
])
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        ChannelSpec(**kwargs)


def test_wrong_model_for_domain(bits):
    with pytest.raises(ValueError):
        apply_bitflip(bits, ChannelSpec("awgn", 0, sigma=0.1))
    with pytest.raises(ValueError):
        apply_awgn(AudioClip([0.0], 8000), ChannelSpec("bitflip", 0, p=0.1))
