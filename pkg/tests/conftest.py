import numpy as np
import pytest

from holonoise import CONSTANTS, HolographicSpectrum


@pytest.fixture
def spec40():
    return HolographicSpectrum(40.0)


def octave_edges(f_lo: float, f_hi: float) -> np.ndarray:
    """Octave band edges from f_lo up to (and capped at) f_hi."""
    edges = [f_lo]
    while edges[-1] * 2.0 < f_hi:
        edges.append(edges[-1] * 2.0)
    edges.append(f_hi)
    return np.asarray(edges)


def band_means(freqs, values, edges) -> np.ndarray:
    freqs = np.asarray(freqs)
    values = np.asarray(values)
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (freqs >= lo) & (freqs < hi)
        assert np.any(mask), f"empty band [{lo:g}, {hi:g})"
        out.append(values[mask].mean())
    return np.asarray(out)


def integer_boxcar_rate(L: float, width: int = 32) -> float:
    """Sample rate making the coherence time an exact number of samples."""
    return width * CONSTANTS.c / (2.0 * L)
