"""Command-line entry point: simulate, sweep, oracle, pde, classify, report.

Configuration comes from a plain text file of key=value lines (``#``
starts a comment); a JSON run manifest written by a previous invocation
is accepted in its place and reproduces that run's outputs byte for
byte.  Explicit flags override file keys, file keys override the
preset, and the preset fills in everything else.  Exit codes: 0 on
success, 2 for configuration errors (the message names the key), 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import json
import multiprocessing
import sys
from pathlib import Path

from . import __version__
from .engine import _splitmix64_py, run, run_until, write_cycles_csv
from .exact import expected_cycle_observables
from .params import ContinuumParams, bridge, k_theory
from .pde import (
    GridSpec,
    convergence_study,
    robin_ratio_richardson,
    solve_alternating,
    solve_robin,
)
from .regimes import PoreGeometry, PowerLaw, ScalingFamily, classify
from .stats import (
    SWEEP_HEADER,
    EstimatorConfig,
    SweepRow,
    estimate_K,
    sweep_convergence,
    write_gnuplot_dat,
    write_sweep_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_MASK = 0xFFFFFFFFFFFFFFFF


class ConfigError(Exception):
    """Bad or missing configuration; the message names the key."""


def _r(x) -> str:
    """Stable decimal text for reported numbers, free of numpy wrappers."""
    return repr(float(x))


# key -> caster; every key a config file may contain
_FLOAT_KEYS = frozenset(
    "L0 D0 D1 mu burn_in_fraction tau sigma_tau T_final rho_eff dt "
    "eps_c eps_a sigma_eps_c sigma_eps_a sigma_tau_c sigma_tau_a "
    "D1_c D1_a measure_P0 Phi M_total".split())
_INT_KEYS = frozenset(
    "n0 sigma_bar M seed min_population cycles cycle_cap "
    "J0 m n_open halvings N".split())
_STR_KEYS = frozenset({"species"})
_LIST_KEYS = frozenset({"n0_list", "sigma_bar_list"})

_PRESETS = {
    "desk": {"M": 10_000, "cycle_cap": 2000},
    "paper": {"M": 100_000, "cycle_cap": 2000},
}


def _cast(key: str, text: str):
    try:
        if key in _INT_KEYS:
            return int(text)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _LIST_KEYS:
            return [int(p) for p in text.split(",") if p.strip()]
        return text
    except ValueError:
        raise ConfigError(f"key '{key}': cannot parse {text!r}") from None


def _check_type(key: str, value):
    """Validate a value that arrived already typed (from a manifest)."""
    if key in _INT_KEYS and isinstance(value, int):
        return value
    if key in _FLOAT_KEYS and isinstance(value, (int, float)):
        return float(value)
    if key in _LIST_KEYS and isinstance(value, list) \
            and all(isinstance(v, int) for v in value):
        return value
    if key in _STR_KEYS and isinstance(value, str):
        return value
    raise ConfigError(f"key '{key}': bad value {value!r}")


_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _LIST_KEYS


def load_config(path: str) -> dict:
    """Parse a key=value config file, or the params of a JSON manifest."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    cfg: dict = {}
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        raw = data.get("params", data)
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: manifest params must be an object")
        for k, v in raw.items():
            if k not in _ALL_KEYS:
                continue          # manifests also carry derived values
            cfg[k] = _check_type(k, v)
        return cfg
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {line!r}")
        k, v = (p.strip() for p in line.split("=", 1))
        if k not in _ALL_KEYS:
            raise ConfigError(f"{path}:{ln}: unknown key '{k}'")
        cfg[k] = _cast(k, v)
    return cfg


def _require(cfg: dict, keys: tuple, command: str) -> None:
    for k in keys:
        if k not in cfg:
            raise ConfigError(f"missing key '{k}' (required by {command})")


def _merge(args, needs_preset: bool = True) -> dict:
    """Preset defaults, then file keys, then explicit value flags."""
    cfg = dict(_PRESETS[getattr(args, "preset", None) or "desk"]) \
        if needs_preset else {}
    cfg.update(load_config(args.config))
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "cycles", None) is not None:
        cfg["cycles"] = args.cycles
    cfg.setdefault("seed", 1)
    cfg.setdefault("burn_in_fraction", 0.1)
    return cfg


def derive_seed(base: int, *parts: int) -> int:
    """Per-gridpoint seed from the base seed and grid coordinates.

    The species is deliberately not an input, so paired runs that differ
    only in the layer share their randomness.
    """
    s = base & _MASK
    for p in parts:
        _, s = _splitmix64_py((s ^ (p & _MASK)) & _MASK)
    return s


def _species(cfg: dict) -> str:
    sp = cfg.get("species", "K")
    if sp not in ("K", "Na"):
        raise ConfigError(f"key 'species': must be K or Na, got {sp!r}")
    return sp


def _build_bridge(cfg: dict, command: str):
    """Resolve the lattice for the configured species.

    The no-layer species runs with the bulk diffusivity everywhere, so
    its rows and theory values carry D1 = D0.
    """
    sp = _species(cfg)
    _require(cfg, ("L0", "D0", "mu", "n0", "sigma_bar", "M"), command)
    if sp == "K":
        _require(cfg, ("D1",), command)
    D1_eff = cfg["D0"] if sp == "Na" else cfg["D1"]
    try:
        cont = ContinuumParams(L0=cfg["L0"], D0=cfg["D0"], D1=D1_eff,
                               mu=cfg["mu"])
        br = bridge(cont, cfg["n0"], cfg["sigma_bar"], cfg["M"],
                    affinity_layer=(sp == "K"))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return br, sp, D1_eff


def _write_manifest(out_dir: Path, stem: str, command: str, params: dict,
                    outputs: list[str]) -> Path:
    man = {
        "version": __version__,
        "command": command,
        "created": datetime.datetime.now(datetime.timezone.utc)
        .isoformat(timespec="seconds"),
        "params": params,
        "outputs": outputs,
    }
    path = out_dir / f"{stem}.manifest.json"
    path.write_text(json.dumps(man, indent=2, sort_keys=True) + "\n")
    return path


def _out_dir(args) -> Path:
    out = Path(getattr(args, "out", ".") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _resolved_params(cfg: dict, br=None, species: str | None = None) -> dict:
    params = {k: cfg[k] for k in sorted(cfg)}
    if species is not None:
        params["species"] = species
    if br is not None:
        d = br.disc
        params.update(tau=br.tau, tau_bar=d.tau_bar, n1=d.n1, r=d.r,
                      ell=d.ell, s=d.s)
    return params


def cmd_simulate(args) -> int:
    cfg = _merge(args)
    br, sp, D1_eff = _build_bridge(cfg, "simulate")
    if "cycles" in cfg and cfg["cycles"] < 1:
        raise ConfigError("key 'cycles': must be >= 1")
    try:
        est_cfg = EstimatorConfig(
            burn_in_fraction=cfg["burn_in_fraction"],
            min_population=cfg.get("min_population"))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    min_pop = est_cfg.resolve_min_population(cfg["M"])
    seed = cfg["seed"]
    if "cycles" in cfg:
        res = run(br.disc, cfg["cycles"], seed)
    else:
        res = run_until(br.disc, seed, min_population=min_pop,
                        cycle_cap=cfg["cycle_cap"])
    est = estimate_K(res, est_cfg)
    out = _out_dir(args)
    csv = out / "cycles.csv"
    write_cycles_csv(csv, res)
    params = _resolved_params(cfg, br, sp)
    params["min_population"] = min_pop
    man = _write_manifest(out, "cycles", "simulate", params, [csv.name])
    kt = k_theory(cfg["mu"], cfg["D0"], D1_eff)
    print(f"species = {sp}")
    print(f"K = {_r(est.K)}")
    print(f"stderr = {_r(est.stderr)}")
    print(f"k_theory = {_r(kt)}")
    print(f"rel_dev = {_r(abs(est.K - kt) / kt)}")
    print(f"cycles_used = {est.cycles_used}")
    print(f"cycles_total = {est.cycles_total}")
    print(f"tau = {_r(br.tau)}")
    print(f"cycles_csv = {csv}")
    print(f"manifest = {man}")
    return EXIT_OK


def _sweep_point(task: tuple) -> SweepRow:
    """One (sigma_bar, n0) gridpoint; module-level so pools can pickle it."""
    (L0, D0, D1, mu, n0, sigma_bar, M, seed, species,
     burn_in, min_pop_cfg, cycle_cap) = task
    D1_eff = D0 if species == "Na" else D1
    cont = ContinuumParams(L0=L0, D0=D0, D1=D1_eff, mu=mu)
    br = bridge(cont, n0, sigma_bar, M, affinity_layer=(species == "K"))
    est_cfg = EstimatorConfig(burn_in_fraction=burn_in,
                              min_population=min_pop_cfg)
    res = run_until(br.disc, seed,
                    min_population=est_cfg.resolve_min_population(M),
                    cycle_cap=cycle_cap)
    est = estimate_K(res, est_cfg)
    return SweepRow(n0=n0, tau=br.tau, sigma_bar=sigma_bar, D1=D1_eff,
                    K=est.K, stderr=est.stderr, cycles_used=est.cycles_used)


def cmd_sweep(args) -> int:
    cfg = _merge(args)
    sp = _species(cfg)
    _require(cfg, ("L0", "D0", "mu", "M", "n0_list", "sigma_bar_list"),
             "sweep")
    if sp == "K":
        _require(cfg, ("D1",), "sweep")
    if not cfg["n0_list"] or not cfg["sigma_bar_list"]:
        raise ConfigError("keys 'n0_list'/'sigma_bar_list': must be non-empty")
    D1_cfg = cfg.get("D1", cfg["D0"])
    tasks = [
        (cfg["L0"], cfg["D0"], D1_cfg, cfg["mu"], n0, sb, cfg["M"],
         derive_seed(cfg["seed"], n0, sb), sp, cfg["burn_in_fraction"],
         cfg.get("min_population"), cfg["cycle_cap"])
        for sb in cfg["sigma_bar_list"] for n0 in cfg["n0_list"]
    ]
    jobs = max(1, getattr(args, "jobs", 1) or 1)
    if jobs > 1:
        # spawn, not fork: the parent may already hold compiled kernels
        # whose threading runtime does not survive a fork
        ctx = multiprocessing.get_context("spawn")
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=jobs, mp_context=ctx) as ex:
            rows = list(ex.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]

    out = _out_dir(args)
    csv = out / "sweep.csv"
    write_sweep_csv(csv, rows)
    outputs = [csv.name]
    for sb in cfg["sigma_bar_list"]:
        dat = out / f"sweep_s{sb}.dat"
        write_gnuplot_dat(dat, [r for r in rows if r.sigma_bar == sb])
        outputs.append(dat.name)
    man = _write_manifest(out, "sweep", "sweep",
                          _resolved_params(cfg, None, sp), outputs)

    mu, D0 = cfg["mu"], cfg["D0"]
    kt = k_theory(mu, D0, D1_cfg if sp == "K" else D0)
    print(f"species = {sp}")
    print(f"k_theory = {_r(kt)}")
    for sb in cfg["sigma_bar_list"]:
        series = [r for r in rows if r.sigma_bar == sb]
        taus = [r.tau for r in series]
        if len(set(taus)) >= 3:
            fit = sweep_convergence(taus, [r.K for r in series])
            print(f"intercept_s{sb} = {_r(fit.intercept)}")
            print(f"intercept_s{sb}_rel_dev = "
                  f"{_r(abs(fit.intercept - kt) / kt)}")
        else:
            print(f"intercept_s{sb} = n/a (need >= 3 distinct periods)")
    # reference limits of the three canonical series
    print(f"ref_D1_0.1 = {_r(k_theory(mu, D0, 0.1))}")
    print(f"ref_D1_0.25 = {_r(k_theory(mu, D0, 0.25))}")
    print(f"ref_no_layer = {_r(k_theory(mu, D0, D0))}")
    print(f"sweep_csv = {csv}")
    print(f"manifest = {man}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _merge(args)
    br, sp, _ = _build_bridge(cfg, "oracle")
    cycles = cfg.get("cycles", 20)
    if cycles < 1:
        raise ConfigError("key 'cycles': must be >= 1")
    try:
        exp = expected_cycle_observables(br.disc, cycles)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    lines = ["cycle,EF,EU"]
    for i in range(len(exp)):
        lines.append(f"{i},{float(exp.EF[i])!r},{float(exp.EU[i])!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        out = _out_dir(args)
        csv = out / "oracle.csv"
        csv.write_text(text)
        _write_manifest(out, "oracle", "oracle",
                        _resolved_params(cfg, br, sp), [csv.name])
        print(f"oracle_csv = {csv}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _write_rows(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def cmd_pde(args) -> int:
    cfg = _merge(args, needs_preset=False)
    _require(cfg, ("L0", "D0", "D1", "mu"), "pde")
    try:
        grid = GridSpec(J0=cfg.get("J0", 256), m=cfg.get("m", 8),
                        n_open=cfg.get("n_open", 8))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    T_final = cfg.get("T_final", 0.5)
    out = _out_dir(args)

    if args.mode in ("alternating", "study"):
        _require(cfg, ("tau",), "pde --mode " + args.mode)

    if args.mode == "alternating":
        _require(cfg, ("sigma_tau",), "pde --mode alternating")
        try:
            cont = ContinuumParams(L0=cfg["L0"], D0=cfg["D0"], D1=cfg["D1"],
                                   mu=cfg["mu"], tau=cfg["tau"],
                                   sigma_tau=cfg["sigma_tau"])
        except ValueError as e:
            raise ConfigError(str(e)) from None
        snaps = tuple(float(s) for s in args.snap.split(",") if s.strip())
        res = solve_alternating(cont, grid, T_final, snapshot_times=snaps)
        n_cycle = (len(res.mass) - 1) // res.n_cycles
        t = res.times
        rows = []
        for i in range(len(res.mass)):
            cyc = min((i - 1) // n_cycle, res.n_cycles - 1) if i else 0
            ratio = res.cycle_ratio[cyc] if i else 0.0
            rows.append((t[i], res.mass[i], ratio))
        csv = out / "pde_alternating.csv"
        _write_rows(csv, "t,mass,boundary_ratio", rows)
        outputs = [csv.name]
        for snap in res.snapshots:
            sp_path = out / f"snap_t{snap.t:.6f}.csv"
            xs = list(snap.x[: snap.iface + 1]) + list(snap.x[snap.iface:])
            us = list(snap.u_bulk) + list(snap.u_layer)
            _write_rows(sp_path, "x,u", zip(xs, us))
            outputs.append(sp_path.name)
        man = _write_manifest(out, "pde_alternating", "pde",
                              _resolved_params(cfg), outputs)
        print(f"cycles = {res.n_cycles}")
        print(f"mass_initial = {_r(res.mass[0])}")
        print(f"mass_final = {_r(res.mass[-1])}")
        print(f"boundary_ratio_last = {_r(res.cycle_ratio[-1])}")
        print(f"pde_csv = {csv}")
        print(f"manifest = {man}")
        return EXIT_OK

    if args.mode == "robin":
        rho_eff = cfg.get("rho_eff",
                          k_theory(cfg["mu"], cfg["D0"], cfg["D1"]))
        dt = cfg.get("dt", 5e-4)
        res = solve_robin(cfg["L0"], cfg["D0"], rho_eff, grid.J0, dt, T_final)
        rich = robin_ratio_richardson(cfg["L0"], cfg["D0"], rho_eff,
                                      grid.J0, dt, T_final)
        rows = [(res.dt * i, res.mass[i], rich) for i in range(len(res.mass))]
        csv = out / "pde_robin.csv"
        _write_rows(csv, "t,mass,boundary_ratio", rows)
        man = _write_manifest(out, "pde_robin", "pde",
                              _resolved_params(cfg), [csv.name])
        print(f"rho_eff = {_r(rho_eff)}")
        print(f"measured_ratio = {_r(res.measured_ratio)}")
        print(f"richardson_ratio = {_r(rich)}")
        print(f"rel_dev = {_r(abs(rich - rho_eff) / rho_eff)}")
        print(f"pde_csv = {csv}")
        print(f"manifest = {man}")
        return EXIT_OK

    # study
    try:
        cont = ContinuumParams(L0=cfg["L0"], D0=cfg["D0"], D1=cfg["D1"],
                               mu=cfg["mu"], tau=cfg["tau"])
    except ValueError as e:
        raise ConfigError(str(e)) from None
    study = convergence_study(cont, cfg.get("halvings", 5), grid, T_final)
    rows = list(zip(study.taus, study.distances, study.ratios))
    csv = out / "pde_study.csv"
    _write_rows(csv, "tau,distance,boundary_ratio", rows)
    man = _write_manifest(out, "pde_study", "pde",
                          _resolved_params(cfg), [csv.name])
    d = study.distances
    print(f"rho_eff = {_r(study.rho_eff)}")
    print(f"distance_first = {_r(d[0])}")
    print(f"distance_last = {_r(d[-1])}")
    print(f"decreasing_last_three = {bool(d[-1] < d[-2] < d[-3])}")
    print(f"pde_csv = {csv}")
    print(f"manifest = {man}")
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = _merge(args, needs_preset=False)
    _require(cfg, ("eps_c", "eps_a", "sigma_eps_c", "sigma_eps_a",
                   "sigma_tau_c", "sigma_tau_a", "D1_c", "D1_a", "N"),
             "classify")
    try:
        fam = ScalingFamily(
            eps=PowerLaw(cfg["eps_c"], cfg["eps_a"]),
            sigma_eps=PowerLaw(cfg["sigma_eps_c"], cfg["sigma_eps_a"]),
            sigma_tau=PowerLaw(cfg["sigma_tau_c"], cfg["sigma_tau_a"]),
            D1=PowerLaw(cfg["D1_c"], cfg["D1_a"]),
            N=cfg["N"])
    except ValueError as e:
        raise ConfigError(str(e)) from None
    geom = None
    geo_present = [k for k in ("measure_P0", "Phi", "M_total") if k in cfg]
    if geo_present:
        if len(geo_present) < 3:
            missing = set(("measure_P0", "Phi", "M_total")) - set(geo_present)
            raise ConfigError(
                f"geometry needs all of measure_P0, Phi, M_total; "
                f"missing {sorted(missing)}")
        _require(cfg, ("D0",), "classify with geometry")
        try:
            geom = PoreGeometry(measure_P0=cfg["measure_P0"], Phi=cfg["Phi"],
                                M_total=cfg["M_total"], N=cfg["N"])
        except ValueError as e:
            raise ConfigError(str(e)) from None
    species_list = [cfg["species"]] if "species" in cfg else ["K", "Na"]
    blocks = []
    for sp in species_list:
        try:
            rep = classify(fam, sp)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if geom is not None:
            rep = rep.with_rho(geom, cfg["D0"])
        blocks.append("\n".join(rep.lines()))
    print("\n\n".join(blocks))
    return EXIT_OK


def _read_sweep_rows(path: str) -> list[SweepRow]:
    """Parse a sweep CSV, pointing at the offending line on failure."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from None
    rows = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if ln == 1:
            if line != SWEEP_HEADER:
                raise ConfigError(
                    f"{path}:1: expected header {SWEEP_HEADER!r}")
            continue
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise ConfigError(f"{path}:{ln}: expected 7 fields, "
                              f"got {len(parts)}")
        try:
            rows.append(SweepRow(
                n0=int(parts[0]), tau=float(parts[1]), sigma_bar=int(parts[2]),
                D1=float(parts[3]), K=float(parts[4]), stderr=float(parts[5]),
                cycles_used=int(parts[6])))
        except ValueError as e:
            raise ConfigError(f"{path}:{ln}: {e}") from None
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return rows


def _series_context(path: str, args) -> tuple[float, float]:
    """mu and D0 for a sweep file, from its sibling manifest if present."""
    man = Path(path).parent / (Path(path).stem + ".manifest.json")
    if man.exists():
        try:
            params = json.loads(man.read_text()).get("params", {})
            return float(params.get("mu", args.mu)), \
                float(params.get("D0", args.D0))
        except (ValueError, TypeError):
            pass
    return args.mu, args.D0


def cmd_report(args) -> int:
    lines = ["file,sigma_bar,D1,points,intercept,k_theory,rel_dev"]
    for path in args.paths:
        rows = _read_sweep_rows(path)
        mu, D0 = _series_context(path, args)
        for sb in sorted({r.sigma_bar for r in rows}):
            series = sorted((r for r in rows if r.sigma_bar == sb),
                            key=lambda r: r.tau)
            D1_vals = sorted({r.D1 for r in series})
            if len(D1_vals) != 1:
                raise ConfigError(
                    f"{path}: sigma_bar={sb} mixes D1 values {D1_vals}")
            kt = k_theory(mu, D0, D1_vals[0])
            taus = [r.tau for r in series]
            if len(set(taus)) >= 3:
                fit = sweep_convergence(taus, [r.K for r in series])
                icept, dev = _r(fit.intercept), \
                    _r(abs(fit.intercept - kt) / kt)
            else:
                icept, dev = "n/a", "n/a"
            lines.append(f"{path},{sb},{_r(D1_vals[0])},{len(series)},"
                         f"{icept},{_r(kt)},{dev}")
    print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gatedpore",
        description="Monte Carlo and PDE toolkit for gated-pore transport.")
    parser.add_argument("--version", action="version",
                        version=f"gatedpore {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, preset=True, jobs=False, cycles=False):
        p.add_argument("--config", required=True,
                       help="key=value config file, or a run manifest")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        if cycles:
            p.add_argument("--cycles", type=int, default=None,
                           help="fixed cycle count instead of the "
                                "population stopping rule")
        if preset:
            p.add_argument("--preset", choices=("desk", "paper"),
                           default=None,
                           help="desk: M=10000 (default); paper: M=100000, "
                                "long-running")
        if jobs:
            p.add_argument("--jobs", type=int, default=1,
                           help="parallel gridpoint workers")

    p = sub.add_parser("simulate", help="one run: cycle records plus the "
                                        "flux-to-density estimate")
    common(p, cycles=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="grid of runs over n0 and sigma_bar")
    common(p, jobs=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="exact per-cycle expectations "
                                      "(small lattices)")
    common(p, preset=True, cycles=True)
    # default to stdout; a directory is only written when asked for
    p.set_defaults(func=cmd_oracle, out=None)

    p = sub.add_parser("pde", help="continuum solvers")
    common(p, preset=False)
    p.add_argument("--mode", required=True,
                   choices=("alternating", "robin", "study"))
    p.add_argument("--snap", default="",
                   help="comma-separated snapshot times (alternating mode)")
    p.set_defaults(func=cmd_pde)

    p = sub.add_parser("classify", help="scaling-regime report as "
                                        "key=value lines")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="consolidate sweep CSVs against the "
                                      "theory limits")
    p.add_argument("paths", nargs="+", help="sweep CSV files")
    p.add_argument("--mu", type=float, default=1.0,
                   help="opening-rate constant when no manifest is found")
    p.add_argument("--D0", type=float, default=1.0,
                   help="bulk diffusivity when no manifest is found")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, FloatingPointError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
