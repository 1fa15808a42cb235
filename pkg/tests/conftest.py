import numpy as np
import pytest

from tlnmf.audio import Signal


def sinusoid_mixture(duration_s=5.0, sample_rate=8000, seed=0,
                     freqs=(392.4, 661.3, 883.7), amps=(1.0, 0.7, 0.5),
                     noise=0.05):
    """Sum of sinusoids plus Gaussian noise, normalized to [-1, 1].

    The frequencies deliberately avoid DCT bin centers so a fixed DCT
    spreads their energy while a learned transform can concentrate it.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(int(duration_s * sample_rate)) / sample_rate
    samples = np.zeros_like(t)
    for f, a in zip(freqs, amps):
        samples += a * np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi))
    samples += noise * rng.standard_normal(t.size)
    samples /= np.max(np.abs(samples))
    return Signal(samples=samples, sample_rate_hz=sample_rate)


@pytest.fixture(scope="session")
def music_like_signal():
    return sinusoid_mixture()
