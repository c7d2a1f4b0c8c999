"""Command-line front end.

Subcommands:

* ``spectrum``  tabulate the predicted displacement spectrum for one arm length
* ``synth``     generate a noise record and write it to disk
* ``run``       simulate a correlated interferometer pair and run the full
                estimation/detection pipeline
* ``verify``    print a pass/fail report of the model's numeric identities

Exit status: 0 on success, 1 when ``verify`` finds a failing check, 2 on
usage or configuration errors.  Every command is a deterministic function of
its configuration and seed; reruns produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import (
    CONSTANTS,
    boost_matrix,
    commutator_tensor,
    covariance_residual,
    dof_counts,
    heisenberg_variance_bound,
    levi_civita4,
    random_boost,
    rest_frame_commutator,
    scale_estimates,
    uncertainty_bound,
    angular_uncertainty_bound,
    SECONDS_PER_YEAR,
)
from .analysis import (
    WelchParams,
    cross_correlation,
    coherence,
    detection_significance,
    welch_csd,
    welch_psd,
)
from .errors import ConfigurationError
from .interferometer import (
    DetectorConfig,
    DualDetectorConfig,
    default_shot_asd,
    simulate_dual,
)
from .noise_model import (
    HolographicSpectrum,
    analytic_autocorrelation,
    analytic_psd,
    envelope_high_f,
    one_sided_psd,
    time_averaged_ms_displacement,
)
from .synthesis import SynthesisConfig, synthesize
from . import io as hio

OUTDIR_ENV = "HOLONOISE_OUTDIR"


def _default_outdir() -> str:
    return os.environ.get(OUTDIR_ENV, ".")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holonoise",
        description="Planckian displacement-noise model, simulation and "
                    "cross-correlation analysis for Michelson interferometers",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="tabulate the predicted spectrum")
    p.add_argument("--arm-length", type=float, default=40.0, metavar="M")
    p.add_argument("--f-max", type=float, required=True, metavar="HZ")
    p.add_argument("--f-min", type=float, default=0.0, metavar="HZ")
    p.add_argument("--n-points", type=int, default=1000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None,
                   help="output file (default: stdout)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("synth", help="synthesize a noise record")
    p.add_argument("--arm-length", type=float, default=40.0, metavar="M")
    p.add_argument("--sample-rate", type=float, default=1.6e7, metavar="HZ")
    p.add_argument("--n-samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--method", choices=("spectral", "boxcar"),
                   default="spectral")
    p.add_argument("--format", choices=("bin", "csv"), default="bin")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="dual-detector experiment end to end")
    p.add_argument("--config", default=None, help="JSON run configuration")
    p.add_argument("--arm-length", type=float, default=None, metavar="M")
    p.add_argument("--duration", type=float, default=None, metavar="S")
    p.add_argument("--sample-rate", type=float, default=None, metavar="HZ")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rho", type=float, default=None,
                   help="geometric correlation coefficient in [0, 1]")
    p.add_argument("--shot-asd", type=float, default=None, metavar="M_RTHZ",
                   help="one-sided shot noise ASD (default: 3x plateau)")
    p.add_argument("--sens-a", action=argparse.BooleanOptionalAction,
                   default=None, help="detector A responds to geometric noise")
    p.add_argument("--sens-b", action=argparse.BooleanOptionalAction,
                   default=None, help="detector B responds to geometric noise")
    p.add_argument("--method", choices=("spectral", "boxcar"), default=None)
    p.add_argument("--segment-length", type=int, default=None)
    p.add_argument("--overlap", type=float, default=None)
    p.add_argument("--window", choices=("rectangular", "hann"), default=None)
    p.add_argument("--band-lo", type=float, default=None, metavar="HZ")
    p.add_argument("--band-hi", type=float, default=None, metavar="HZ")
    p.add_argument("--max-lag", type=float, default=None, metavar="S")
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="numeric identity report")
    p.add_argument("--boosts", type=int, default=100,
                   help="random transforms in the covariance sweep")
    p.set_defaults(func=cmd_verify)
    return parser


# ---------------------------------------------------------------- spectrum


def cmd_spectrum(args) -> int:
    if args.f_max <= 0:
        raise ConfigurationError(f"--f-max must be positive, got {args.f_max}")
    if args.f_min < 0 or args.f_min >= args.f_max:
        raise ConfigurationError(
            f"--f-min must lie in [0, f-max), got {args.f_min}"
        )
    if args.n_points < 2:
        raise ConfigurationError("--n-points must be at least 2")
    spec = HolographicSpectrum(args.arm_length)
    f = np.linspace(args.f_min, args.f_max, args.n_points)
    psd2 = np.asarray(analytic_psd(spec, f))
    envelope = np.full_like(f, np.nan)
    above = f > spec.f_c
    if np.any(above):
        envelope[above] = envelope_high_f(spec, f[above])
    zeros = [z for z in spec.zeros(max(int(args.f_max / spec.zeros(1)[0]), 1))
             if z <= args.f_max]
    meta = {
        "arm_length_m": args.arm_length,
        "f_min_hz": args.f_min,
        "f_max_hz": args.f_max,
        "n_points": args.n_points,
        "f_c_hz": spec.f_c,
        "coherence_time_s": spec.coherence_time,
        "plateau_two_sided_m2_hz": spec.plateau,
        "plateau_one_sided_m2_hz": 2.0 * spec.plateau,
        "plateau_asd_one_sided_m_rthz": float(np.sqrt(2.0 * spec.plateau)),
        "total_variance_m2": spec.total_variance,
        "zeros_hz": zeros,
        "seed": None,
        "generator": f"holonoise {__version__} spectrum",
    }
    columns = {
        "f_hz": f,
        "psd_two_sided_m2_hz": psd2,
        "psd_one_sided_m2_hz": np.where(f > 0, 2.0 * psd2, psd2),
        "envelope_two_sided_m2_hz": envelope,
    }
    if args.format == "json":
        doc = dict(meta, **{k: v.tolist() for k, v in columns.items()})
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        text = hio.format_table_csv(columns, meta)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    return 0


# ------------------------------------------------------------------- synth


def cmd_synth(args) -> int:
    cfg = SynthesisConfig(
        L=args.arm_length, sample_rate=args.sample_rate,
        n_samples=args.n_samples, seed=args.seed, method=args.method,
    ).validate()
    ts = synthesize(cfg)
    meta = {
        "arm_length_m": cfg.L,
        "sample_rate_hz": cfg.sample_rate,
        "n_samples": cfg.n_samples,
        "seed": cfg.seed,
        "method": cfg.method,
        "generator": f"holonoise {__version__} synth",
    }
    if args.format == "csv":
        hio.write_timeseries_csv(args.output, ts, seed=cfg.seed, metadata=meta)
    else:
        hio.write_timeseries_bin(args.output, ts, seed=cfg.seed, metadata=meta)
    print(f"wrote {args.output}: {ts.n} samples at {ts.sample_rate:g} Hz")
    return 0


# --------------------------------------------------------------------- run

#: key -> (types, description).  None marks optional values resolved at run
#: time from the geometry.
RUN_CONFIG_SCHEMA = {
    "arm_length": ((int, float), "arm length in meters"),
    "duration": ((int, float), "record duration in seconds"),
    "sample_rate": ((int, float), "sample rate in Hz"),
    "seed": ((int,), "master seed"),
    "rho_geom": ((int, float), "geometric correlation coefficient"),
    "shot_noise_asd": ((int, float, type(None)), "one-sided shot ASD, m/rtHz"),
    "geometric_sensitivity_a": ((bool,), "detector A geometric response"),
    "geometric_sensitivity_b": ((bool,), "detector B geometric response"),
    "method": ((str,), "synthesis method"),
    "segment_length": ((int,), "Welch segment length in samples"),
    "overlap_fraction": ((int, float), "Welch overlap fraction"),
    "window": ((str,), "Welch window"),
    "band": ((list, type(None)), "detection band [f_lo, f_hi] in Hz"),
    "max_lag": ((int, float, type(None)), "correlation lag range in seconds"),
}

RUN_CONFIG_DEFAULTS = {
    "arm_length": 40.0,
    "duration": 0.1,
    "sample_rate": 1.6e7,
    "seed": 1,
    "rho_geom": 1.0,
    "shot_noise_asd": None,
    "geometric_sensitivity_a": True,
    "geometric_sensitivity_b": True,
    "method": "spectral",
    "segment_length": 4096,
    "overlap_fraction": 0.5,
    "window": "hann",
    "band": None,
    "max_lag": None,
}

_FLAG_TO_KEY = {
    "arm_length": "arm_length",
    "duration": "duration",
    "sample_rate": "sample_rate",
    "seed": "seed",
    "rho": "rho_geom",
    "shot_asd": "shot_noise_asd",
    "sens_a": "geometric_sensitivity_a",
    "sens_b": "geometric_sensitivity_b",
    "method": "method",
    "segment_length": "segment_length",
    "overlap": "overlap_fraction",
    "window": "window",
}


def resolve_run_config(args) -> dict:
    """Defaults, then config file, then command-line overrides."""
    cfg = dict(RUN_CONFIG_DEFAULTS)
    if args.config is not None:
        path = Path(args.config)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {path} is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"config file {path} must hold a JSON object")
        _check_schema(loaded)
        cfg.update(loaded)
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag)
        if value is not None:
            cfg[key] = value
    if args.band_lo is not None or args.band_hi is not None:
        if args.band_lo is None or args.band_hi is None:
            raise ConfigurationError("--band-lo and --band-hi must both be given")
        cfg["band"] = [args.band_lo, args.band_hi]
    if args.max_lag is not None:
        cfg["max_lag"] = args.max_lag
    _check_schema(cfg, complete=True)
    return cfg


def _check_schema(cfg: dict, complete: bool = False) -> None:
    bad = []
    for key, value in cfg.items():
        if key not in RUN_CONFIG_SCHEMA:
            bad.append(f"unknown field {key!r}")
            continue
        types, description = RUN_CONFIG_SCHEMA[key]
        if not isinstance(value, types) or isinstance(value, bool) and bool not in types:
            bad.append(f"field {key!r} ({description}): bad value {value!r}")
    if complete:
        band = cfg.get("band")
        if band is not None and (
            len(band) != 2
            or not all(isinstance(v, (int, float)) for v in band)
        ):
            bad.append("field 'band': expected [f_lo, f_hi]")
    if bad:
        raise ConfigurationError("invalid configuration: " + "; ".join(bad))


def cmd_run(args) -> int:
    cfg = resolve_run_config(args)
    outdir = Path(args.outdir if args.outdir is not None else _default_outdir())
    outdir.mkdir(parents=True, exist_ok=True)

    L = float(cfg["arm_length"])
    spec = HolographicSpectrum(L)
    shot = cfg["shot_noise_asd"]
    shot = default_shot_asd(L) if shot is None else float(shot)
    det = DualDetectorConfig(
        det_a=DetectorConfig(L=L, shot_noise_asd=shot,
                             geometric_sensitivity=cfg["geometric_sensitivity_a"]),
        det_b=DetectorConfig(L=L, shot_noise_asd=shot,
                             geometric_sensitivity=cfg["geometric_sensitivity_b"]),
        rho_geom=float(cfg["rho_geom"]),
    ).validate()
    welch = WelchParams(
        segment_length=int(cfg["segment_length"]),
        overlap_fraction=float(cfg["overlap_fraction"]),
        window=cfg["window"],
    ).validate()
    band = cfg["band"]
    band = (spec.f_c / 20.0, 2.0 * spec.f_c) if band is None else tuple(band)
    max_lag = cfg["max_lag"]
    max_lag = 4.0 * spec.coherence_time if max_lag is None else float(max_lag)
    resolved = dict(cfg, shot_noise_asd=shot, band=list(band), max_lag=max_lag)

    a, b = simulate_dual(det, duration=float(cfg["duration"]),
                         sample_rate=float(cfg["sample_rate"]),
                         seed=int(cfg["seed"]), method=cfg["method"])
    psd_a = welch_psd(a, welch)
    psd_b = welch_psd(b, welch)
    csd = welch_csd(a, b, welch)
    coh = coherence(a, b, welch)
    corr = cross_correlation(a, b, max_lag)
    detect = detection_significance(csd, spec, band)

    meta = {"config": resolved, "generator": f"holonoise {__version__} run",
            "seed": cfg["seed"]}
    model_one_sided = np.asarray(one_sided_psd(spec, psd_a.frequencies))
    hio.write_table_csv(outdir / "psd_a.csv", {
        "f_hz": psd_a.frequencies, "psd_m2_hz": psd_a.values,
        "sigma_m2_hz": psd_a.sigma, "model_geometric_m2_hz": model_one_sided,
    }, dict(meta, kind="psd_a", n_segments=psd_a.n_segments))
    hio.write_table_csv(outdir / "psd_b.csv", {
        "f_hz": psd_b.frequencies, "psd_m2_hz": psd_b.values,
        "sigma_m2_hz": psd_b.sigma, "model_geometric_m2_hz": model_one_sided,
    }, dict(meta, kind="psd_b", n_segments=psd_b.n_segments))
    hio.write_table_csv(outdir / "csd.csv", {
        "f_hz": csd.frequencies, "csd_m2_hz": csd.values,
        "sigma_re_m2_hz": csd.sigma, "model_geometric_m2_hz": model_one_sided,
    }, dict(meta, kind="csd", n_segments=csd.n_segments))
    hio.write_table_csv(outdir / "coherence.csv", {
        "f_hz": coh.frequencies, "coherence": coh.values,
    }, dict(meta, kind="coherence", n_segments=coh.n_segments))
    hio.write_table_csv(outdir / "correlation.csv", {
        "lag_s": corr.lags, "covariance_m2": corr.covariance,
        "normalized": corr.normalized, "sigma_m2": corr.sigma_band,
        "model_m2": float(det.rho_geom)
        * np.asarray(analytic_autocorrelation(spec, corr.lags)),
    }, dict(meta, kind="correlation",
            n_samples_effective=corr.n_samples_effective))

    summary = {
        "config": resolved,
        "package_version": __version__,
        "f_c_hz": spec.f_c,
        "first_zero_hz": float(spec.zeros(1)[0]),
        "coherence_time_s": spec.coherence_time,
        "plateau_two_sided_m2_hz": spec.plateau,
        "band_hz": list(band),
        "n_bins": detect.n_bins,
        "n_segments": csd.n_segments,
        "amplitude_fit": detect.amplitude_fit,
        "amplitude_se": detect.amplitude_se,
        "snr": detect.snr,
        "variance_a_m2": float(np.var(a.values)),
        "variance_b_m2": float(np.var(b.values)),
        "model_variance_m2": spec.total_variance,
    }
    hio.write_summary_json(outdir / "summary.json", summary)
    print(f"amplitude_fit = {detect.amplitude_fit:.4f} "
          f"+- {detect.amplitude_se:.4f}  (snr = {detect.snr:.2f}), "
          f"outputs in {outdir}")
    return 0


# ------------------------------------------------------------------ verify


def _verify_checks(n_boosts: int) -> list[tuple[str, float, float, float, bool]]:
    """Each entry: (name, computed, expected, tolerance, passed)."""
    k = CONSTANTS
    spec = HolographicSpectrum(40.0)
    checks: list[tuple[str, float, float, float, bool]] = []

    def rel(name, computed, expected, tol):
        err = abs(computed - expected) / max(abs(expected), 1e-300)
        checks.append((name, computed, expected, tol, err <= tol))

    def absolute(name, computed, expected, tol):
        checks.append((name, computed, expected, tol,
                       abs(computed - expected) <= tol))

    rel("planck_length_time_consistency", k.c * k.t_P, k.l_P, 1e-12)
    rel("planck_units_consistency", k.m_P * k.c**2 * k.t_P, k.hbar, 1e-3)
    absolute("levi_civita_reference", levi_civita4(1, 2, 3, 0), 1.0, 0.0)
    absolute("levi_civita_transposition", levi_civita4(2, 1, 3, 0), -1.0, 0.0)
    absolute("levi_civita_repeat", levi_civita4(1, 1, 3, 0), 0.0, 0.0)

    x_lab = np.array([0.0, 0.0, 0.0, 40.0])
    u_rest = np.array([1.0, 0.0, 0.0, 0.0])
    cmat = commutator_tensor(x_lab, u_rest)
    rel("commutator_lab_12", cmat[1, 2], 40.0 * k.l_P, 1e-12)
    inactive = max(abs(cmat[m, n]) for m in range(4) for n in range(4)
                   if m in (0, 3) or n in (0, 3))
    absolute("commutator_lab_inactive_entries", inactive, 0.0, 0.0)
    absolute("commutator_antisymmetry",
             float(np.max(np.abs(cmat + cmat.T))), 0.0, 0.0)

    rng = np.random.default_rng(20260811)
    reduction = 0.0
    for _ in range(20):
        x3 = rng.normal(0.0, 50.0, 3)
        c4 = commutator_tensor(np.concatenate([[0.0], x3]), u_rest)
        c3 = rest_frame_commutator(x3)
        scale = max(float(np.max(np.abs(c3))), 1e-300)
        reduction = max(reduction, float(np.max(np.abs(c4[1:, 1:] - c3))) / scale)
    absolute("rest_frame_reduction_rel", reduction, 0.0, 1e-15)

    worst = 0.0
    for _ in range(n_boosts):
        lam = random_boost(rng)
        x4 = rng.normal(0.0, 50.0, 4)
        u4 = (lam if rng.random() < 0.5 else boost_matrix(
            rng.uniform(-0.57, 0.57, 3))) @ u_rest
        c0 = commutator_tensor(x4, u4)
        norm = max(float(np.max(np.abs(c0))), 1e-300)
        worst = max(worst, covariance_residual(x4, u4, lam) / norm)
    absolute(f"lorentz_covariance_residual_{n_boosts}_boosts", worst, 0.0, 1e-10)

    rel("uncertainty_bound_40m_12", uncertainty_bound([0, 0, 40.0], 1, 2),
        3.232e-34, 1e-6)
    rel("transverse_rms_40m",
        float(np.sqrt(uncertainty_bound([0, 0, 40.0], 1, 2))), 1.8e-17, 0.01)
    rel("angular_bound_40m", angular_uncertainty_bound(40.0), 2.02e-37, 1e-6)
    rel("heisenberg_planck_mass_1s", heisenberg_variance_bound(k.m_P, 1.0),
        2.0 * k.c**2 * k.t_P, 1e-12)
    tau = spec.coherence_time
    rel("heisenberg_crossover_at_2mP",
        heisenberg_variance_bound(2.0 * k.m_P, tau), k.c * tau * k.l_P, 1e-12)
    counts = dof_counts(40.0)
    rel("dof_holography", counts.n_total,
        counts.n_radial * counts.n_transverse, 0.0)
    rel("dof_radial_40m", counts.n_radial, 2.475e36, 1e-3)
    est = scale_estimates(5.0)
    cm_per_year = est.v_equivalent * SECONDS_PER_YEAR * 100.0
    absolute("equivalent_speed_5m_cm_per_yr_vs_1", cm_per_year, 1.0, 2.0)
    rel("excursion_rms_4m", scale_estimates(4.0).excursion_rms, 1.137e-17, 1e-3)
    rel("planck_energy_tev", est.n_tev, 1.22e16, 0.01)

    rel("critical_frequency_40m_vs_6e5", spec.f_c, 6.0e5, 0.01)
    rel("first_zero_40m_vs_3.75mhz", float(spec.zeros(1)[0]), 3.75e6, 1e-3)
    rel("plateau_40m", spec.plateau, 2.196e-40, 1e-3)
    rel("plateau_approach_1hz", float(analytic_psd(spec, 1.0)), spec.plateau,
        1e-6)
    zero_resid = max(
        float(analytic_psd(spec, float(z))) / spec.plateau
        for z in spec.zeros(3)
    )
    absolute("spectral_zeros_rel_plateau", zero_resid, 0.0, 1e-6)
    ratio = (float(envelope_high_f(spec, 2e6)) / float(envelope_high_f(spec, 1e6)))
    absolute("envelope_inverse_square", ratio, 0.25, 1e-9)
    rel("autocorrelation_peak_40m",
        float(analytic_autocorrelation(spec, 0.0)), 8.23e-34, 1e-3)
    absolute("autocorrelation_cutoff",
             float(analytic_autocorrelation(spec, spec.coherence_time)), 0.0, 0.0)
    rel("autocorrelation_midpoint",
        float(analytic_autocorrelation(spec, spec.coherence_time / 2.0)),
        spec.total_variance / 2.0, 1e-12)

    # numeric cosine transform of the triangle must reproduce the spectrum
    tau_grid = np.linspace(0.0, spec.coherence_time, 4097)
    tri = np.asarray(analytic_autocorrelation(spec, tau_grid))
    f_grid = np.linspace(0.0, 10.0 * spec.f_c, 33)
    worst_ft = 0.0
    for f in f_grid:
        numeric = 2.0 * np.trapezoid(tri * np.cos(2 * np.pi * f * tau_grid),
                                     tau_grid)
        worst_ft = max(worst_ft,
                       abs(numeric - float(analytic_psd(spec, float(f))))
                       / spec.plateau)
    absolute("fourier_pair_consistency", worst_ft, 0.0, 1e-3)

    rel("time_average_10_coherence_times",
        time_averaged_ms_displacement(spec, 10.0 * spec.coherence_time),
        spec.total_variance / 10.0, 1e-12)
    rel("time_average_1s", time_averaged_ms_displacement(spec, 1.0),
        2.196e-40, 1e-3)
    return checks


def cmd_verify(args) -> int:
    checks = _verify_checks(args.boosts)
    width = max(len(name) for name, *_ in checks)
    failures = 0
    for name, computed, expected, tol, ok in checks:
        status = "PASS" if ok else "FAIL"
        failures += not ok
        print(f"{status}  {name:<{width}}  computed={computed:.6e}  "
              f"expected={expected:.6e}  tol={tol:g}")
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return 1 if failures else 0


# -------------------------------------------------------------------- main


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
