"""Command-line entry point: ``xxbell <command> [options]``.

Every command writes a CSV table (stdout or ``--out``) and a JSON run
record with the fully resolved parameters (``<out>.runspec.json``, or
stderr when writing to stdout). Exit codes: 0 success, 1 usage error,
2 computation error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .bell.expressions import expression_for
from .bell.families import StateFamily, maximize_bell_over_state_family
from .bell.optimize import OptimizerConfig, maximize_bell
from .errors import InvalidChainError, XXBellError
from .operators import ChainSpec, build_field_hamiltonian
from .output import RunSpec, runspec_path, write_csv, write_line_plot
from .spectral import canonical_energies_n4, canonical_eigensystem_n4, eigendecompose
from .threshold import SearchConfig, ThermalBell, field_sweep, parse_range, threshold_temperature

log = logging.getLogger("xxbell")

DEFAULTS = {
    "sites": 4,
    "field": 0.0,
    "starts": 64,
    "seed": 42,
    "tmin": None,  # per command, see below
    "tmax": 2.0,
    "steps": 100,
    "tstep": 0.02,
    "tol": 1e-3,
    "workers": 1,
}
# roundoff-level values are written as exact zeros
ZERO_CHOP = 1e-12


def _chop(value: float) -> float:
    return 0.0 if abs(value) < ZERO_CHOP else value


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, *, optimizer: bool = True) -> None:
    p.add_argument("--sites", type=int, help="chain length N (default 4)")
    p.add_argument("--field", type=float, help="uniform field B (default 0)")
    p.add_argument("--out", type=Path, help="CSV output path (default stdout)")
    p.add_argument("--spec", type=Path, help="JSON run record to take defaults from")
    if optimizer:
        p.add_argument("--starts", type=int, help="random optimizer starts (default 64)")
        p.add_argument("--seed", type=int, help="optimizer seed (default 42)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xxbell", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="eigenvalues of the chain Hamiltonian")
    _common(p, optimizer=False)

    p = sub.add_parser("bell-curve", help="maximized Bell value versus temperature")
    _common(p)
    p.add_argument("--fields", help="several fields, 'lo:hi:step' or comma list")
    p.add_argument("--tmin", type=float, help="lowest temperature (default 0.05)")
    p.add_argument("--tmax", type=float, help="highest temperature (default 2)")
    p.add_argument("--steps", type=int, help="number of temperatures (default 100)")
    p.add_argument("--plot", type=Path, help="also write an SVG line plot")

    for name, text in (("threshold", "threshold temperature at one field"),
                       ("field-sweep", "threshold temperature for many fields")):
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "field-sweep":
            p.add_argument("--fields", help="'lo:hi:step' or comma list (default 0:1.5:0.1)")
            p.add_argument("--workers", type=int, help="parallel processes (default 1)")
            p.add_argument("--plot", type=Path, help="also write an SVG plot of T0 versus B")
        p.add_argument("--tmin", type=float, help="scan start (default 0.01)")
        p.add_argument("--tmax", type=float, help="scan end (default 2)")
        p.add_argument("--tstep", type=float, help="coarse scan step (default 0.02)")
        p.add_argument("--tol", type=float, help="relative bisection tolerance (default 1e-3)")

    p = sub.add_parser("eigenstate-bell", help="Bell maxima of four-site eigenstates or state families")
    p.add_argument("--out", type=Path)
    p.add_argument("--spec", type=Path)
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--index", help="eigenstate label(s) 0..15, comma list or 'all'")
    group.add_argument("--family", help="|".join(f.value for f in StateFamily) + " or 'all'")
    return parser


class _Resolver:
    """Explicit flag, then value from ``--spec``, then built-in default."""

    def __init__(self, args: argparse.Namespace, spec: Optional[RunSpec]):
        self.args = args
        self.flat: dict[str, Any] = {}
        if spec is not None:
            self.flat.update({"sites": spec.n_sites, "field": spec.field})
            if spec.fields is not None:
                self.flat["fields"] = ",".join(str(b) for b in spec.fields)
            for group in (spec.temperatures, spec.search, spec.optimizer):
                self.flat.update(group or {})
            if spec.targets:
                self.flat["targets"] = spec.targets

    def __call__(self, name: str, default: Any = None) -> Any:
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        value = self.flat.get(name)
        if value is not None:
            return value
        return DEFAULTS.get(name) if default is None else default


def _optimizer(get: _Resolver) -> OptimizerConfig:
    starts, seed = int(get("starts")), int(get("seed"))
    if starts < 1:
        raise UsageError("--starts must be at least 1")
    return OptimizerConfig(starts=starts, seed=seed)


def _chain(get: _Resolver, field: Optional[float] = None) -> ChainSpec:
    b = float(get("field")) if field is None else field
    return ChainSpec(int(get("sites")), field=b)


def _emit(args, header, rows, run: RunSpec) -> None:
    out: Optional[Path] = getattr(args, "out", None)
    run.out = str(out) if out else None
    write_csv(header, rows, out)
    if out is None:
        sys.stderr.write(run.to_json())
    else:
        runspec_path(out).write_text(run.to_json())


def cmd_spectrum(args, get) -> None:
    spec = _chain(get)
    eig = eigendecompose(build_field_hamiltonian(spec))
    run = RunSpec("spectrum", n_sites=spec.n_sites, field=spec.field, couplings=list(spec.couplings))
    header = ["index", "eigenvalue"]
    rows = [[i, _chop(float(e))] for i, e in enumerate(eig.values)]
    if spec.n_sites == 4:
        # conventional state labels, matched level by level
        canon = canonical_energies_n4(spec.field)
        order = np.argsort(canon, kind="stable")
        if np.allclose(canon[order], eig.values, atol=1e-9):
            header.append("label")
            for row, mu in zip(rows, order):
                row.append(int(mu))
    _emit(args, header, rows, run)


def cmd_bell_curve(args, get) -> None:
    tmin = float(get("tmin", 0.05))
    tmax, steps = float(get("tmax")), int(get("steps"))
    if not (0 < tmin < tmax) or steps < 2:
        raise UsageError("need 0 < --tmin < --tmax and --steps >= 2")
    temps = np.linspace(tmin, tmax, steps)
    fields_text = get("fields", "")
    fields = parse_range(fields_text) if fields_text else [float(get("field"))]
    config = _optimizer(get)
    spec0 = _chain(get, fields[0])
    expr = expression_for(spec0.n_sites)
    header = (["field"] if len(fields) > 1 else []) + ["temperature", "bell_max", "violation"]
    rows, series = [], []
    for b in fields:
        tb = ThermalBell(spec0.with_field(b), expr)
        warm, ys = None, []
        for t in temps:
            report = tb.maximize(float(t), config, warm)
            warm = report.best_angles[None, :]
            value = _chop(report.best_value)
            ys.append(value)
            row = [float(t), value, value > expr.classical_bound + 1e-9]
            rows.append(([b] if len(fields) > 1 else []) + row)
        series.append((f"B = {b:g}", temps, ys))
    run = RunSpec(
        "bell-curve", n_sites=spec0.n_sites, couplings=list(spec0.couplings),
        field=fields[0] if len(fields) == 1 else None,
        fields=fields if len(fields) > 1 else None,
        temperatures={"tmin": tmin, "tmax": tmax, "steps": steps},
        optimizer={"starts": config.starts, "seed": config.seed},
        plot=str(args.plot) if args.plot else None,
    )
    _emit(args, header, rows, run)
    if args.plot:
        write_line_plot(args.plot, series, xlabel="temperature T", ylabel="max Bell value",
                        hline=expr.classical_bound, title=f"N = {spec0.n_sites}")


def _search(get) -> SearchConfig:
    try:
        return SearchConfig(float(get("tmin", 0.01)), float(get("tmax")),
                            float(get("tstep")), float(get("tol")))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _threshold_rows(reports):
    return [[r.field, r.threshold] for r in reports]


def cmd_threshold(args, get) -> None:
    spec = _chain(get)
    search, config = _search(get), _optimizer(get)
    report = threshold_temperature(spec, None, search, config)
    run = RunSpec(
        "threshold", n_sites=spec.n_sites, field=spec.field, couplings=list(spec.couplings),
        search=_search_dict(search), optimizer={"starts": config.starts, "seed": config.seed},
    )
    _emit(args, ["field", "threshold"], _threshold_rows([report]), run)


def _search_dict(search: SearchConfig) -> dict:
    return {"tmin": search.t_lo, "tmax": search.t_hi, "tstep": search.step, "tol": search.tol}


def cmd_field_sweep(args, get) -> None:
    fields = parse_range(get("fields", "0:1.5:0.1"))
    spec = _chain(get, 0.0)
    search, config = _search(get), _optimizer(get)
    workers = int(get("workers"))
    reports = field_sweep(spec, fields, None, search, config, workers=workers)
    run = RunSpec(
        "field-sweep", n_sites=spec.n_sites, fields=fields, couplings=list(spec.couplings),
        search=_search_dict(search), optimizer={"starts": config.starts, "seed": config.seed},
        plot=str(args.plot) if args.plot else None,
    )
    _emit(args, ["field", "threshold"], _threshold_rows(reports), run)
    if args.plot:
        found = [(r.field, r.threshold) for r in reports if r.threshold is not None]
        xs, ys = zip(*found) if found else ((), ())
        write_line_plot(args.plot, [("threshold", xs, ys)], xlabel="field B",
                        ylabel="threshold temperature T0")


def _targets(args, get) -> list[str]:
    if args.index is not None:
        text = args.index
        labels = range(16) if text == "all" else [int(t) for t in text.split(",")]
        for mu in labels:
            if not 0 <= mu <= 15:
                raise UsageError(f"eigenstate label {mu} outside 0..15")
        return [str(mu) for mu in labels]
    if args.family is not None:
        names = [f.value for f in StateFamily] if args.family == "all" else args.family.split(",")
        for name in names:
            try:
                StateFamily(name)
            except ValueError:
                raise UsageError(f"unknown family {name!r}") from None
        return names
    targets = get("targets", [])
    if not targets:
        raise UsageError("give --index or --family")
    return list(targets)


def cmd_eigenstate_bell(args, get) -> None:
    targets = _targets(args, get)
    config = _optimizer(get)
    expr = expression_for(4)
    canon = canonical_eigensystem_n4(0.0)
    max_alphas = max((StateFamily(t).n_alphas for t in targets if not t.isdigit()), default=0)
    header = ["target", "bell_max"] + [f"theta_{n}_{s}" for n in range(1, 5) for s in (1, 2)]
    header += [f"alpha_{k}" for k in range(1, max_alphas + 1)]
    rows = []
    for target in targets:
        if target.isdigit():
            report = maximize_bell(canon.projector(int(target)), expr, config)
            alphas: list = []
        else:
            report = maximize_bell_over_state_family(StateFamily(target), config)
            alphas = [float(a) for a in np.mod(report.best_alphas, 2 * np.pi)]
        angles = [float(a) for a in report.best_settings.reshape(-1)]
        rows.append([target, report.best_value] + angles + alphas + [None] * (max_alphas - len(alphas)))
    run = RunSpec("eigenstate-bell", n_sites=4, targets=targets,
                  optimizer={"starts": config.starts, "seed": config.seed})
    _emit(args, header, rows, run)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "bell-curve": cmd_bell_curve,
    "threshold": cmd_threshold,
    "field-sweep": cmd_field_sweep,
    "eigenstate-bell": cmd_eigenstate_bell,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = RunSpec.from_json(args.spec.read_text()) if getattr(args, "spec", None) else None
        get = _Resolver(args, spec)
        COMMANDS[args.command](args, get)
    except (UsageError, InvalidChainError, OSError, ValueError) as exc:
        if isinstance(exc, XXBellError) and not isinstance(exc, InvalidChainError):
            print(f"xxbell: computation error: {exc}", file=sys.stderr)
            return 2
        print(f"xxbell: error: {exc}", file=sys.stderr)
        return 1
    except XXBellError as exc:
        print(f"xxbell: computation error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
