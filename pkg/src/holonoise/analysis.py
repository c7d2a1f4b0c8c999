"""Spectral estimation and the cross-correlation detection pipeline.

Welch-averaged PSD/CSD/coherence estimates (one-sided, density scaling),
lagged cross-correlation with analytic confidence bands, and a template-fit
detection statistic: the least-squares amplitude of the predicted spectrum
against the real part of a measured cross-spectrum, normalized so that under
the null hypothesis the reported SNR is standard normal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal as sp_signal

from .noise_model import HolographicSpectrum, one_sided_psd
from .synthesis import TimeSeries

WINDOWS = ("rectangular", "hann")


@dataclass(frozen=True)
class WelchParams:
    """Segment-averaging parameters shared by all spectral estimators.

    Hann with 50% overlap is the default; the rectangular window is kept for
    Parseval-exact checks.
    """

    segment_length: int = 4096
    overlap_fraction: float = 0.5
    window: str = "hann"

    def validate(self) -> "WelchParams":
        if self.segment_length < 16:
            raise ValueError(
                f"segment_length must be >= 16, got {self.segment_length}"
            )
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError(
                f"overlap_fraction must lie in [0, 1), got {self.overlap_fraction}"
            )
        if self.window not in WINDOWS:
            raise ValueError(f"window must be one of {WINDOWS}, got {self.window!r}")
        return self

    @property
    def noverlap(self) -> int:
        return int(self.overlap_fraction * self.segment_length)

    @property
    def scipy_window(self) -> str:
        return "boxcar" if self.window == "rectangular" else self.window


@dataclass
class SpectrumEstimate:
    """One-sided averaged spectrum on a uniform grid from 0 to Nyquist.

    `values` is real for PSDs and coherence, complex for CSDs.  `sigma` is the
    per-bin 1-sigma scale of the estimate (of the real part, for CSDs, under
    the independent-channels null); None where not defined.
    """

    frequencies: np.ndarray
    values: np.ndarray
    n_segments: int
    sample_rate: float
    params: WelchParams
    kind: str = "psd"
    sigma: Optional[np.ndarray] = None

    @property
    def df(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    def band_mask(self, f_lo: float, f_hi: float) -> np.ndarray:
        return (self.frequencies >= f_lo) & (self.frequencies <= f_hi)


def _segment_count(n: int, p: WelchParams) -> int:
    step = p.segment_length - p.noverlap
    if n < p.segment_length:
        raise ValueError(
            f"record of {n} samples is shorter than one segment "
            f"({p.segment_length})"
        )
    return 1 + (n - p.segment_length) // step


def effective_segments(n_seg: int, p: WelchParams) -> float:
    """Independent-segment equivalent of n_seg overlapped segments.

    Overlapping segments are correlated through the window; the averaged
    periodogram variance is inflated by 1 + 2 sum_d (1 - d/K) r_d^2 with r_d
    the normalized window autocorrelation at d steps.  For hann with 50%
    overlap the factor is about 1.056; it is exactly 1 without overlap.
    """
    window = sp_signal.get_window(p.scipy_window, p.segment_length,
                                  fftbins=True)
    step = p.segment_length - p.noverlap
    denom = float(window @ window)
    inflation = 1.0
    d = 1
    while d * step < p.segment_length and d < n_seg:
        shift = d * step
        r = float(window[: p.segment_length - shift] @ window[shift:]) / denom
        inflation += 2.0 * (1.0 - d / n_seg) * r * r
        d += 1
    return n_seg / inflation


def welch_psd(ts: TimeSeries, p: WelchParams = WelchParams()) -> SpectrumEstimate:
    """Averaged-periodogram one-sided PSD of a record, in m^2/Hz.

    Parameters
    ----------
    ts : TimeSeries
        Input record.
    p : WelchParams
        Segment length, overlap and window.

    Returns
    -------
    SpectrumEstimate
        With `sigma` = values / sqrt(effective segments), the chi-squared
        scale of an averaged periodogram corrected for segment overlap.
    """
    p.validate()
    n_seg = _segment_count(ts.n, p)
    f, pxx = sp_signal.welch(
        ts.values, fs=ts.sample_rate, window=p.scipy_window,
        nperseg=p.segment_length, noverlap=p.noverlap,
        detrend=False, return_onesided=True, scaling="density",
    )
    return SpectrumEstimate(
        frequencies=f, values=pxx, n_segments=n_seg,
        sample_rate=ts.sample_rate, params=p, kind="psd",
        sigma=pxx / np.sqrt(effective_segments(n_seg, p)),
    )


def _welch_pair(a: TimeSeries, b: TimeSeries, p: WelchParams):
    """Shared PSD/PSD/CSD evaluation for the two-channel estimators."""
    p.validate()
    if a.sample_rate != b.sample_rate:
        raise ValueError(
            f"sample rates differ: {a.sample_rate} vs {b.sample_rate}"
        )
    if a.n != b.n:
        raise ValueError(f"record lengths differ: {a.n} vs {b.n}")
    n_seg = _segment_count(a.n, p)
    kwargs = dict(
        fs=a.sample_rate, window=p.scipy_window, nperseg=p.segment_length,
        noverlap=p.noverlap, detrend=False, return_onesided=True,
        scaling="density",
    )
    f, pab = sp_signal.csd(a.values, b.values, **kwargs)
    _, paa = sp_signal.welch(a.values, **kwargs)
    _, pbb = sp_signal.welch(b.values, **kwargs)
    return f, paa, pbb, pab, n_seg


def welch_csd(a: TimeSeries, b: TimeSeries,
              p: WelchParams = WelchParams()) -> SpectrumEstimate:
    """Averaged one-sided cross-spectral density of two synchronous records.

    The attached `sigma` is sqrt(psd_a * psd_b / (2 K)) with K the effective
    (overlap-corrected) segment count: the standard deviation of the real
    part of each bin when the channels are independent.  It feeds the
    detection statistic's weights.
    """
    f, paa, pbb, pab, n_seg = _welch_pair(a, b, p)
    return SpectrumEstimate(
        frequencies=f, values=pab, n_segments=n_seg,
        sample_rate=a.sample_rate, params=p, kind="csd",
        sigma=np.sqrt(paa * pbb / (2.0 * effective_segments(n_seg, p))),
    )


def coherence(a: TimeSeries, b: TimeSeries,
              p: WelchParams = WelchParams()) -> SpectrumEstimate:
    """Magnitude-squared coherence |CSD|^2 / (PSD_a PSD_b), clipped to [0, 1].

    The estimator is biased upward by roughly 1/n_segments for independent
    channels; average many segments before reading small values.
    """
    f, paa, pbb, pab, n_seg = _welch_pair(a, b, p)
    coh = np.clip(np.abs(pab) ** 2 / (paa * pbb), 0.0, 1.0)
    return SpectrumEstimate(
        frequencies=f, values=coh, n_segments=n_seg,
        sample_rate=a.sample_rate, params=p, kind="coherence", sigma=None,
    )


@dataclass
class CorrelationResult:
    """Lagged covariance of two records with a null-hypothesis 1-sigma band.

    `covariance` uses the biased 1/N normalization (positive semidefinite for
    autocorrelations); `normalized` divides by the lag-zero scale so an
    autocorrelation reads 1 at zero lag.  `sigma_band` is the per-lag standard
    deviation expected if the two records were independent, from the Bartlett
    sum of their sample autocovariances.
    """

    lags: np.ndarray
    covariance: np.ndarray
    normalized: np.ndarray
    sigma_band: np.ndarray
    n_samples_effective: float


def _biased_xcov(x: np.ndarray, y: np.ndarray, max_bins: int) -> np.ndarray:
    """r[j] = (1/N) sum_t x_t y_{t+j} for j in [-max_bins, max_bins]."""
    n = x.size
    full = sp_signal.fftconvolve(y, x[::-1], mode="full")
    center = n - 1
    return full[center - max_bins:center + max_bins + 1] / n


def cross_correlation(a: TimeSeries, b: TimeSeries,
                      max_lag: float) -> CorrelationResult:
    """Lagged cross-covariance of two records out to +-max_lag seconds.

    Positive lags mean features in `a` lead those in `b`.  Means are removed.
    The returned band assumes correlations (of each record with itself) die
    out within max_lag, so choose max_lag beyond the physical coherence time.
    """
    if a.sample_rate != b.sample_rate:
        raise ValueError(
            f"sample rates differ: {a.sample_rate} vs {b.sample_rate}"
        )
    if a.n != b.n:
        raise ValueError(f"record lengths differ: {a.n} vs {b.n}")
    if not max_lag < 0.5 * a.duration:
        raise ValueError(
            f"max_lag {max_lag} s must be below half the record duration "
            f"{a.duration} s"
        )
    j_max = int(round(max_lag * a.sample_rate))
    if j_max < 1:
        raise ValueError("max_lag shorter than one sample interval")
    n = a.n
    x = a.values - a.values.mean()
    y = b.values - b.values.mean()
    cov = _biased_xcov(x, y, j_max)
    lags = np.arange(-j_max, j_max + 1) / a.sample_rate

    var_x = float(x @ x) / n
    var_y = float(y @ y) / n
    scale = np.sqrt(var_x * var_y)
    normalized = cov / scale if scale > 0 else np.zeros_like(cov)

    # Bartlett band: var(r[j]) ~ (N - |j|)/N^2 * sum_k c_xx[k] c_yy[k]
    cxx = _biased_xcov(x, x, j_max)
    cyy = _biased_xcov(y, y, j_max)
    bartlett = float(np.sum(cxx * cyy))
    counts = n - np.abs(np.arange(-j_max, j_max + 1))
    sigma_band = np.sqrt(np.clip(bartlett, 0.0, None) * counts) / n
    n_eff = n * var_x * var_y / bartlett if bartlett > 0 else float(n)
    return CorrelationResult(
        lags=lags, covariance=cov, normalized=normalized,
        sigma_band=sigma_band, n_samples_effective=n_eff,
    )


@dataclass(frozen=True)
class DetectionResult:
    amplitude_fit: float
    amplitude_se: float
    snr: float
    n_bins: int
    band: tuple[float, float]


def _bin_correlation_factor(p: WelchParams) -> float:
    """Variance inflation of band sums from window-induced bin correlation.

    Neighboring Welch bins share power through the window's spectral leakage;
    a sum over bins treated as independent understates its variance by
    sum_d |rho_w(d)|^2 = L sum(w^4) / (sum(w^2))^2 (1 for the rectangular
    window, 35/18 for hann).
    """
    window = sp_signal.get_window(p.scipy_window, p.segment_length,
                                  fftbins=True)
    return float(p.segment_length * np.sum(window**4) / np.sum(window**2) ** 2)


def detection_significance(csd: SpectrumEstimate, model: HolographicSpectrum,
                           band: tuple[float, float]) -> DetectionResult:
    """Template amplitude of the predicted spectrum in a cross-spectrum.

    Fits a single scale factor A minimizing
    sum_i (Re csd_i - A m_i)^2 / sigma_i^2 over the band, where m is the
    one-sided model spectrum and sigma the per-bin null deviation attached to
    the estimate.  A = 1 means the prediction is present at full amplitude;
    snr = A / SE(A) is standard normal when the channels are independent.
    The standard error accounts for window-induced correlation between
    neighboring bins, so it is calibrated for bands spanning many bins.

    Parameters
    ----------
    csd : SpectrumEstimate
        Cross-spectrum with `sigma` populated (as from `welch_csd`).
    model : HolographicSpectrum
        Zero-parameter spectral prediction to fit.
    band : (f_lo, f_hi)
        Frequency band of the fit, inclusive.
    """
    f_lo, f_hi = band
    if not f_lo < f_hi:
        raise ValueError(f"empty band: ({f_lo}, {f_hi})")
    mask = csd.band_mask(f_lo, f_hi)
    if not np.any(mask):
        raise ValueError(
            f"band ({f_lo}, {f_hi}) Hz contains no bins of the estimate"
        )
    freqs = csd.frequencies[mask]
    x = np.real(np.asarray(csd.values)[mask])
    template = np.asarray(one_sided_psd(model, freqs))
    if csd.sigma is not None:
        weights = 1.0 / np.asarray(csd.sigma)[mask] ** 2
    else:
        weights = np.ones_like(x)
    denom = float(np.sum(weights * template**2))
    if denom == 0.0:
        raise ValueError("template vanishes over the requested band")
    amplitude = float(np.sum(weights * template * x)) / denom
    se = float(np.sqrt(_bin_correlation_factor(csd.params) / denom))
    return DetectionResult(
        amplitude_fit=amplitude, amplitude_se=se, snr=amplitude / se,
        n_bins=int(np.sum(mask)), band=(f_lo, f_hi),
    )


def band_averages(est: SpectrumEstimate, edges) -> tuple[np.ndarray, np.ndarray]:
    """Mean of `values` between consecutive edges; returns (centers, means)."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be an increasing 1-d array of length >= 2")
    centers = np.sqrt(edges[:-1] * edges[1:])
    means = np.empty(edges.size - 1)
    for i in range(edges.size - 1):
        mask = (est.frequencies >= edges[i]) & (est.frequencies < edges[i + 1])
        if not np.any(mask):
            raise ValueError(
                f"band [{edges[i]:g}, {edges[i+1]:g}) Hz contains no bins"
            )
        means[i] = float(np.mean(np.real(est.values[mask])))
    return centers, means
