"""Command-line front end.

    gradmetro --command table1 --n 6
    gradmetro --command table2 --n 4 --sigma2 1 --eta 0.5 --format csv
    gradmetro --command validate
    gradmetro --command sensitivity --n 8.5e6 --sigma 3e-3

Exit status: 0 on success, 1 when a comparison or property fails, 2 on bad usage.
Physical units live only in this module; the library is
unit-agnostic.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from importlib import resources

from scipy import constants

from . import bounds as B
from . import states as S
from .spatial import Bec, Chain, DoubleWell, ParametricPI
from .spin_algebra import DEFAULT_DIM_CAP, SpinSystem
from .tables import (
    DEFAULT_TOL,
    Row,
    sld_rows,
    sweep_rows,
    table1_rows,
    table2_closed_form,
    table2_rows,
    validation_suite,
)
from .validation import DimensionCapError

log = logging.getLogger("gradmetro")

COMMANDS = ("table1", "table2", "bound", "validate", "sld-check", "sweep", "sensitivity")
CSV_HEADER = ("kind", "name", "closed_form", "oracle", "rel_err", "saturable_norm", "property", "residual", "pass")

# 87Rb in the F = 1 hyperfine manifold: g_F = 1/2, spin j = 1
RB87_G_F = 0.5
RB87_GAMMA = RB87_G_F * constants.physical_constants["Bohr magneton"][0] / constants.hbar
DEFAULT_TIME = 0.5e-3
SENSITIVITY_SPIN = 1.0

SENSITIVITY_STATES = ("polarized", "separable", "singlet", "dicke", "dicke_x", "ghz")


class UsageError(ValueError):
    pass


def _particle_count(text: str) -> int:
    value = float(text)
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"particle number must be a positive integer, got {text}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gradmetro", description="Precision bounds for gradient magnetometry.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--n", type=_particle_count, default=4, help="number of particles N")
    p.add_argument("--j", type=float, default=None, help="particle spin (default 1/2; 1 for sensitivity)")
    p.add_argument("--sigma2", type=float, default=None, help="position variance")
    p.add_argument("--sigma", type=float, default=None, help="position spread, alternative to --sigma2")
    p.add_argument("--eta", type=float, default=0.0, help="pair-averaged position covariance")
    p.add_argument("--a", type=float, default=1.0, help="lattice constant / half well separation")
    p.add_argument("--gamma", type=float, default=RB87_GAMMA, help="gyromagnetic ratio in rad/(s T)")
    p.add_argument("--time", type=float, default=DEFAULT_TIME, help="evolution time in s")
    p.add_argument("--state", default=None, help="state name for bound/sensitivity")
    p.add_argument("--model", default="pi", choices=("chain", "double_well", "pi", "bec"))
    p.add_argument("--mu", type=float, default=0.0, help="mean position for pi/bec models")
    p.add_argument("--steps", type=int, default=5, help="sweep points over the eta range")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)
    p.add_argument("--max-n", type=int, default=6, help="largest N in the validation suite")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--self-test-fault", action="store_true",
                   help="flip the sign of the F01^2/F00 term to show validation catches it")
    return p


def _sigma2(args) -> float:
    if args.sigma2 is not None:
        return args.sigma2
    if args.sigma is not None:
        return args.sigma ** 2
    return 1.0


def _spin(args, default: float = 0.5) -> float:
    return default if args.j is None else args.j


def _model(args):
    n = args.n
    if args.model == "chain":
        return Chain(args.a, n)
    if args.model == "double_well":
        return DoubleWell(args.a, n)
    if args.model == "bec":
        return Bec(args.mu, _sigma2(args), n)
    return ParametricPI(args.mu, _sigma2(args), args.eta, n)


_BOUND_CLOSED_FORMS = {
    ("singlet", "pi"): "singlet",
    ("polarized_y", "pi"): "polarized",
    ("best_separable", "pi"): "separable",
    ("dicke_z", "pi"): "dicke",
    ("dicke_x", "pi"): "dicke_x",
    ("ghz", "pi"): "ghz",
}


def _bound_closed_form(state_name: str, model, j: float):
    kind = {Chain: "chain", DoubleWell: "double_well", ParametricPI: "pi", Bec: "bec"}[type(model)]
    if (state_name, kind) in _BOUND_CLOSED_FORMS:
        return table2_closed_form(_BOUND_CLOSED_FORMS[state_name, kind], model, j)
    if (state_name, kind) == ("polarized_y", "chain"):
        return B.chain_polarized_bound(model.a, model.n_particles, j)
    if (state_name, kind) == ("two_well_optimal", "double_well"):
        return B.double_well_optimal_bound(model.a, model.n_particles, j)
    if kind == "bec" and state_name in ("polarized_z", "best_separable"):
        return B.bec_bound(model, j)
    return None


def cmd_table1(args) -> tuple[list[Row], list, list[str]]:
    if args.n % 2:
        raise UsageError("table1 needs an even --n")
    return table1_rows(args.n, _spin(args), args.a, args.dim_cap, args.workers), [], []


def cmd_table2(args):
    return table2_rows(_sigma2(args), args.eta, args.n, _spin(args), args.dim_cap, args.workers), [], []


def cmd_sweep(args):
    return sweep_rows(_sigma2(args), args.n, _spin(args), args.steps, args.dim_cap), [], []


def cmd_bound(args):
    j = _spin(args)
    system = SpinSystem(args.n, j, args.dim_cap)
    zoo = S.state_zoo(system)
    name = args.state or "polarized_y"
    if name not in zoo:
        raise UsageError(f"state {name!r} is not available for N={args.n}, j={j}; choose from {sorted(zoo)}")
    model = _model(args)
    report = B.general_bound(zoo[name], model, fault=args.self_test_fault)
    closed = _bound_closed_form(name, model, j)
    rel = None if closed is None else B.relative_error(closed, report.bound)
    notes = [
        f"sensitive={report.sensitive}",
        f"F00={report.qfi_matrix.f00!r} F01={report.qfi_matrix.f01!r} F11={report.qfi_matrix.f11!r}",
        f"weak_saturable_norm={report.weak_saturable_norm!r}",
    ]
    return [Row(f"{name}|{args.model}", closed, report.bound, rel, report.saturable_norm)], [], notes


def cmd_validate(args):
    checks = validation_suite(max_n=args.max_n, tol=args.tol, fault=args.self_test_fault, dim_cap=args.dim_cap)
    notes = ["self-test fault injected: the suite is expected to fail"] if args.self_test_fault else []
    return [], checks, notes


def cmd_sld_check(args):
    notes = [
        "rows compare the strict SLD commutator norm (oracle) with 0 (closed_form)",
        "pi rows use the mean-position form mu*J_z for the gradient generator",
    ]
    return sld_rows(args.n, _spin(args), args.a, args.dim_cap), [], notes


def cmd_sensitivity(args):
    j = _spin(args, SENSITIVITY_SPIN)
    if args.time <= 0:
        raise UsageError("--time must be positive")
    sigma2 = _sigma2(args)
    name = args.state or "polarized"
    if name not in SENSITIVITY_STATES:
        raise UsageError(f"unknown state {name!r}; choose from {SENSITIVITY_STATES}")
    bound = table2_closed_form(name, (sigma2, args.eta, args.n), j)
    params = B.FieldParams(args.gamma, args.time)
    delta = B.to_field_sensitivity(bound, params)  # T per length unit of sigma (m)
    rows = [
        Row("bound[m^2]", bound),
        Row("delta_B1[T/m]", delta),
        Row("delta_B1[pT/mm]", delta * 1e12 / 1e3),
    ]
    notes = [
        f"state={name}, closed form only, N={args.n}, j={j}",
        f"sigma^2={sigma2!r} m^2, eta={args.eta!r} m^2",
        f"gamma={args.gamma!r} rad/(s T) (default: g_F mu_B / hbar with g_F={RB87_G_F}, 87Rb F=1)",
        f"t={args.time!r} s",
        "Delta B_1 = bound^(-1/2) / (gamma t)",
    ]
    return rows, [], notes


HANDLERS = {
    "table1": cmd_table1,
    "table2": cmd_table2,
    "bound": cmd_bound,
    "validate": cmd_validate,
    "sld-check": cmd_sld_check,
    "sweep": cmd_sweep,
    "sensitivity": cmd_sensitivity,
}


def _fmt(value):
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def _params(args) -> dict:
    keep = ("n", "j", "sigma2", "sigma", "eta", "a", "gamma", "time", "state", "model", "mu",
            "steps", "tol", "dim_cap", "self_test_fault")
    return {k: _fmt(getattr(args, k)) for k in keep}


def render_json(command: str, params: dict, rows, checks, notes) -> str:
    doc = {
        "command": command,
        "params": params,
        "rows": [{k: _fmt(v) for k, v in r.to_dict().items()} for r in rows],
        "suite": [{k: _fmt(v) for k, v in c.to_dict().items()} for c in checks],
    }
    if notes:
        doc["notes"] = list(notes)
    return json.dumps(doc, indent=2) + "\n"


def render_csv(rows, checks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    g = lambda v: "" if v is None else (f"{v:.12g}" if isinstance(v, float) else v)  # noqa: E731
    for r in rows:
        w.writerow(["row", r.name, g(r.closed_form), g(r.oracle), g(r.rel_err), g(r.saturable_norm), "", "", ""])
    for c in checks:
        w.writerow(["suite", "", "", "", "", "", c.property, g(c.residual), str(c.passed).lower()])
    return buf.getvalue()


def load_schema() -> dict:
    return json.loads(resources.files("gradmetro").joinpath("report.schema.json").read_text())


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, checks, notes = HANDLERS[args.command](args)
    except (UsageError, DimensionCapError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"gradmetro: error: {exc}", file=sys.stderr)
        return 2

    text = render_json(args.command, _params(args), rows, checks, notes) if args.format == "json" \
        else render_csv(rows, checks)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for line in notes:
        print(line, file=sys.stderr)

    failed = [r.name for r in rows if not r.passed(args.tol)]
    if args.command == "sensitivity":
        failed = []
    failed += [c.property for c in checks if not c.passed]
    if failed:
        print(f"gradmetro: {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
