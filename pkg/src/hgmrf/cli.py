"""Command-line interface: plot-ready tables for every library capability.

Subcommands mirror the library operations (rates, map, oracle, mc,
network, experiment).  Output is CSV (header row, '.' decimal point, LF
line endings, shortest round-trip float representation) or JSON; every
effective parameter is echoed alongside the results, and a JSON output
file can be fed back through --config to reproduce the run.  Flags
override configuration-file values.  SNR is linear by default; --snr-db
converts at parse time.  Exit codes: 0 success, 1 validation error, 2
numerical non-convergence.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict

from .car import NoiseModel, sfcar_from_snr
from .experiments import (
    ENERGY_SCENARIOS,
    SPACING_QUADRATURE,
    exp_area_scaling,
    exp_density_scaling,
    exp_energy_scaling,
    exp_snr_limits,
    exp_spacing_convergence,
)
from .network import NetworkConfig, evaluate_network
from .oracle import LatticeSpec, MonteCarloSpec, finite_lattice_rates, sample_llr_per_node
from .physmap import PhysicalField, edge_correlation, zeta_from_rho, zeta_from_spacing
from .rates import sfcar_rates, sfcar_rates_at_spacing
from .specfun import DEFAULT_QUADRATURE, NonConvergenceError, QuadratureSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGENCE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._one_line(message))

    @staticmethod
    def _one_line(message):
        print(f"error: {message}", file=sys.stderr)
        return EXIT_VALIDATION


def _add_quad_flags(p):
    p.add_argument("--quad-points", type=int, default=None,
                   help="starting quadrature points per axis")
    p.add_argument("--quad-rtol", type=float, default=None,
                   help="quadrature relative tolerance")
    p.add_argument("--quad-max", type=int, default=None,
                   help="maximum quadrature points per axis")


def _add_output_flags(p):
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", default=None,
                   help="JSON configuration file; flags override its values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgmrf",
                     description="Information rates and energy scaling for "
                                 "sensor networks over 2-D hidden Gauss-Markov fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", parents=[], help="SFCAR per-node KLI/MI rates")
    p.add_argument("--zeta", type=float, default=None)
    p.add_argument("--snr", type=float, default=None)
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--spacing", type=float, default=None)
    _add_quad_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("map", help="spacing -> edge correlation -> edge dependence")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--spacing", type=float, default=None)
    _add_output_flags(p)

    p = sub.add_parser("oracle", help="exact finite-lattice rates")
    p.add_argument("--zeta", type=float, default=None)
    p.add_argument("--snr", type=float, default=None)
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--boundary", choices=("torus", "free"), default="torus")
    p.add_argument("--sigma2", type=float, default=1.0)
    _add_output_flags(p)

    p = sub.add_parser("mc", help="Monte Carlo log-likelihood-ratio simulation")
    p.add_argument("--zeta", type=float, default=None)
    p.add_argument("--snr", type=float, default=None)
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sigma2", type=float, default=1.0)
    _add_output_flags(p)

    p = sub.add_parser("network", help="energy/information report for one network")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--spacing", type=float, default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--es", type=float, default=1.0)
    p.add_argument("--e0", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=2.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    _add_quad_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("experiment", help="scaling-law sweep + asymptote fit")
    p.add_argument("name", choices=("area", "spacing", "density", "energy", "snr"))
    p.add_argument("--zeta", type=float, default=0.1,
                   help="edge dependence for the snr experiment")
    p.add_argument("--values", default=None,
                   help="comma-separated sweep values (n, spacings, or sensing energies)")
    p.add_argument("--scenario", choices=ENERGY_SCENARIOS, default=None,
                   help="energy experiment scenario")
    p.add_argument("--area", type=float, default=400.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--snr", type=float, default=None)
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--spacing", type=float, default=2.0)
    p.add_argument("--es", type=float, default=1.0)
    p.add_argument("--e0", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    _add_quad_flags(p)
    _add_output_flags(p)

    return parser


def _apply_config(args: argparse.Namespace, argv) -> argparse.Namespace:
    """Fill in values from --config for flags the user did not pass."""
    if not getattr(args, "config", None):
        return args
    with open(args.config, encoding="utf-8") as fh:
        obj = json.load(fh)
    params = obj.get("params", obj)
    if not isinstance(params, dict):
        raise ValueError("configuration must be a JSON object")
    passed = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
              for tok in argv if tok.startswith("--")}
    for key, value in params.items():
        attr = str(key).replace("-", "_")
        if attr in ("command", "results", "name"):
            continue
        if not hasattr(args, attr):
            raise ValueError(f"unknown configuration key {key!r}")
        if attr not in passed:
            setattr(args, attr, value)
    return args


def _resolve_snr(args) -> float:
    snr = getattr(args, "snr", None)
    snr_db = getattr(args, "snr_db", None)
    if snr is not None and snr_db is not None:
        raise ValueError("give either --snr or --snr-db, not both")
    if snr_db is not None:
        return 10.0 ** (float(snr_db) / 10.0)
    if snr is None:
        raise ValueError("an SNR is required (--snr or --snr-db)")
    snr = float(snr)
    if not snr > 0.0:
        raise ValueError("snr must be positive")
    return snr


def _resolve_quadrature(args) -> QuadratureSpec:
    points = getattr(args, "quad_points", None)
    rtol = getattr(args, "quad_rtol", None)
    maxp = getattr(args, "quad_max", None)
    if points is None and rtol is None and maxp is None:
        return DEFAULT_QUADRATURE
    base = DEFAULT_QUADRATURE
    return QuadratureSpec(
        points_per_axis=int(points) if points is not None else base.points_per_axis,
        relative_tolerance=float(rtol) if rtol is not None else base.relative_tolerance,
        max_points_per_axis=int(maxp) if maxp is not None else max(
            base.max_points_per_axis, int(points) if points is not None else 0
        ),
    )


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"--{name.replace('_', '-')} is required")


def _format_value(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv_rows(header, rows, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_value(v) for v in row])


def _emit(args, params: dict, results: dict) -> None:
    """Single-row commands: one CSV row (params + results) or a JSON object."""
    if args.format == "json":
        payload = {"command": args.command, "params": params, "results": results}
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        header = list(params) + list(results)
        values = list(params.values()) + list(results.values())
        buf = io.StringIO()
        _write_csv_rows(header, [values], buf)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_experiment(args, params: dict, sweep, fit) -> None:
    """Experiments: sweep table as CSV, fit summary (with params) as JSON."""
    keys = list(sweep.rows[0][1])
    header = [sweep.parameter_name] + keys
    table_rows = [[x] + [outputs[k] for k in keys] for x, outputs in sweep.rows]
    buf = io.StringIO()
    _write_csv_rows(header, table_rows, buf)
    table_text = buf.getvalue()
    summary = {
        "command": args.command,
        "name": args.name,
        "params": params,
        "results": {
            "model": fit.model,
            "estimates": fit.estimates,
            "r_squared": fit.r_squared,
            "window": list(fit.window),
        },
    }
    json_text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out:
        base = args.out[:-4] if args.out.endswith(".csv") else args.out
        with open(base + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(table_text)
        with open(base + ".json", "w", encoding="utf-8") as fh:
            fh.write(json_text)
    else:
        sys.stdout.write(table_text)
        sys.stdout.write(json_text)


def _cmd_rates(args) -> int:
    spec = _resolve_quadrature(args)
    snr = _resolve_snr(args)
    results = {}
    if args.zeta is not None:
        result = sfcar_rates(args.zeta, snr, spec)
        params = {"zeta": args.zeta, "snr": snr}
    elif args.alpha is not None and args.spacing is not None:
        field = PhysicalField(alpha=args.alpha, spacing=args.spacing)
        result = sfcar_rates_at_spacing(field, snr, spec)
        params = {"alpha": args.alpha, "spacing": args.spacing, "snr": snr}
        results["zeta"] = zeta_from_spacing(field)
    else:
        raise ValueError("give --zeta, or both --alpha and --spacing")
    params.update(quad_points=spec.points_per_axis, quad_rtol=spec.relative_tolerance,
                  quad_max=spec.max_points_per_axis)
    results.update(kli=result.kli_rate, mi=result.mi_rate,
                   quadrature_points=result.quadrature_points,
                   converged=result.converged)
    _emit(args, params, results)
    return EXIT_OK if result.converged else EXIT_NONCONVERGENCE


def _cmd_map(args) -> int:
    _require(args, "alpha", "spacing")
    field = PhysicalField(alpha=args.alpha, spacing=args.spacing)
    rho = edge_correlation(field)
    params = {"alpha": args.alpha, "spacing": args.spacing}
    results = {"rho": rho, "zeta": zeta_from_rho(rho)}
    _emit(args, params, results)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    _require(args, "zeta", "n")
    snr = _resolve_snr(args)
    noise = NoiseModel(sigma2=args.sigma2)
    model = sfcar_from_snr(snr, args.zeta, noise)
    result = finite_lattice_rates(model, noise, LatticeSpec(n=args.n, boundary=args.boundary))
    params = {"zeta": args.zeta, "snr": snr, "n": args.n,
              "boundary": args.boundary, "sigma2": args.sigma2}
    results = {"kli": result.kli_rate, "mi": result.mi_rate}
    _emit(args, params, results)
    return EXIT_OK


def _cmd_mc(args) -> int:
    _require(args, "zeta", "n", "replicates", "seed")
    snr = _resolve_snr(args)
    noise = NoiseModel(sigma2=args.sigma2)
    model = sfcar_from_snr(snr, args.zeta, noise)
    mean, stderr = sample_llr_per_node(
        model, noise, args.n, MonteCarloSpec(replicates=args.replicates, seed=args.seed)
    )
    exact = finite_lattice_rates(model, noise, LatticeSpec(n=args.n))
    params = {"zeta": args.zeta, "snr": snr, "n": args.n,
              "replicates": args.replicates, "seed": args.seed, "sigma2": args.sigma2}
    results = {"llr_mean": mean, "llr_stderr": stderr, "exact_kli": exact.kli_rate}
    _emit(args, params, results)
    return EXIT_OK


def _cmd_network(args) -> int:
    _require(args, "n", "spacing")
    spec = _resolve_quadrature(args)
    config = NetworkConfig(
        n=args.n, spacing=args.spacing, sensing_energy=args.es,
        comm_energy_coeff=args.e0, loss_exponent=args.nu,
        snr_per_joule=args.beta, alpha=args.alpha, noise_sigma2=args.sigma2,
    )
    report = evaluate_network(config, spec)
    params = {"n": args.n, "spacing": args.spacing, "es": args.es, "e0": args.e0,
              "nu": args.nu, "beta": args.beta, "alpha": args.alpha,
              "sigma2": args.sigma2}
    _emit(args, params, asdict(report))
    return EXIT_OK


def _default_n_sweep():
    return [32, 45, 64, 91, 128, 181, 256, 362, 512]


def _cmd_experiment(args) -> int:
    spec = _resolve_quadrature(args)
    snr = _resolve_snr(args) if (args.snr is not None or args.snr_db is not None) else 10.0
    values = None
    if args.values is not None:
        if isinstance(args.values, str):
            values = [float(v) for v in args.values.split(",") if v.strip()]
        else:
            values = [float(v) for v in args.values]
    params = {"name": args.name, "snr": snr, "alpha": args.alpha, "es": args.es,
              "e0": args.e0, "nu": args.nu, "beta": args.beta, "sigma2": args.sigma2}
    if args.name == "area":
        ns = [int(v) for v in values] if values else _default_n_sweep()
        base = NetworkConfig(n=ns[0], spacing=args.spacing, sensing_energy=args.es,
                             comm_energy_coeff=args.e0, loss_exponent=args.nu,
                             snr_per_joule=snr / args.es, alpha=args.alpha,
                             noise_sigma2=args.sigma2)
        sweep, fit = exp_area_scaling(base, ns, spec)
        params.update(spacing=args.spacing, values=ns)
    elif args.name == "spacing":
        ds = values or [v / args.alpha for v in (3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0)]
        user_quad = any(getattr(args, f) is not None
                        for f in ("quad_points", "quad_rtol", "quad_max"))
        sweep, fit = exp_spacing_convergence(args.alpha, snr, ds,
                                             spec if user_quad else SPACING_QUADRATURE)
        params.update(values=ds)
    elif args.name == "density":
        ns = [int(v) for v in values] if values else _default_n_sweep()
        sweep, fit = exp_density_scaling(args.area, args.alpha, snr, ns, spec,
                                         sensing_energy=args.es,
                                         comm_energy_coeff=args.e0)
        params.update(area=args.area, values=ns)
    elif args.name == "snr":
        sweep, fit = exp_snr_limits(args.zeta, spec, low_snr=values or ())
        params.update(zeta=args.zeta)
    else:
        scenario = args.scenario or "fixed_sensing_area_sweep"
        if scenario == "fixed_area_sensing_sweep":
            sw = values or [10.0**e for e in (2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)]
            base_n = 64
        else:
            sw = values or [float(v) for v in _default_n_sweep()]
            base_n = int(sw[0])
        base = NetworkConfig(n=base_n, spacing=args.spacing, sensing_energy=args.es,
                             comm_energy_coeff=args.e0, loss_exponent=args.nu,
                             snr_per_joule=args.beta, alpha=args.alpha,
                             noise_sigma2=args.sigma2)
        sweep, fit = exp_energy_scaling(base, scenario, sw, spec)
        params.update(scenario=scenario, spacing=args.spacing, values=sw)
    _emit_experiment(args, params, sweep, fit)
    return EXIT_OK


_COMMANDS = {
    "rates": _cmd_rates,
    "map": _cmd_map,
    "oracle": _cmd_oracle,
    "mc": _cmd_mc,
    "network": _cmd_network,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, argv)
        status = _COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse error path (status already printed)
        code = exc.code
        return code if isinstance(code, int) else EXIT_VALIDATION
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return status


if __name__ == "__main__":
    sys.exit(main())
