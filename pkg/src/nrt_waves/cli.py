"""Command-line interface: ``nrt-waves {gtf-eval, solve, figure, check}``.

Exit codes: 0 when every gate passes, 2 for invalid input, 3 when a
residual gate fails, 1 for any other numerical failure.

Numbers accept ``i`` or ``j`` for the imaginary unit and ``a/b`` fractions,
e.g. ``--b -i/2 --q 7/3 --alpha 1+2i``.  Family constants are passed as
``--NAME VALUE`` and checked against the family's accepted keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from . import density as dens
from . import gtf
from . import verify
from .errors import NrtError, UnknownFamily, UnknownRelation, ValidationError, ZeroMass
from .numerics import midpoints
from .solutions import Case, build, family

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_GATE = 0, 1, 2, 3

GTF_PRESETS = {"gtf-1.2": (1.2, 1.2), "gtf-1.4-2.2": (1.4, 2.2), "gtf-3.5": (3.5, 3.5)}

_UNIT = re.compile(r"(?<![0-9.eE])([ij])")


class CliError(ValidationError):
    """Invalid command-line input."""


# ---------------------------------------------------------------------------
# number parsing


def parse_number(text: str) -> complex | float:
    """Parse a real or complex literal, with ``i``/``j`` units and ``a/b`` fractions.

    Returns a float when the value is real.

    Examples
    --------
    >>> parse_number("-i/2"), parse_number("7/3") == 7 / 3, parse_number("1+2i")
    (-0.5j, True, (1+2j))
    """
    raw = str(text).strip().replace(" ", "")
    if not raw:
        raise CliError("empty number")
    parts = raw.split("/")
    if len(parts) > 2:
        raise CliError(f"cannot parse number {text!r}")
    try:
        vals = [complex(_UNIT.sub(r"1\1", p).replace("i", "j")) for p in parts]
    except ValueError:
        raise CliError(f"cannot parse number {text!r}") from None
    if len(vals) == 2 and vals[1] == 0:
        raise CliError(f"division by zero in {text!r}")
    v = vals[0] / vals[1] if len(vals) == 2 else vals[0]
    return v.real if v.imag == 0 else v


def parse_perturb(text: str) -> tuple[str, float]:
    """``key=1.01x`` (or ``key=1.01``) into ``("key", 1.01)``."""
    if "=" not in text:
        raise CliError(f"--perturb expects key=FACTORx, got {text!r}")
    key, val = text.split("=", 1)
    val = val[:-1] if val.lower().endswith("x") else val
    factor = parse_number(val)
    if isinstance(factor, complex):
        raise CliError("the perturbation factor must be real")
    return key.strip(), float(factor)


def parse_constants(extra: list[str]) -> dict:
    """``--NAME VALUE`` pairs left over by argparse."""
    out: dict = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or len(tok) < 3:
            raise CliError(f"unexpected argument {tok!r}")
        name = tok[2:]
        if "=" in name:
            name, value = name.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra):
                raise CliError(f"missing value for {tok}")
            value = extra[i + 1]
            i += 2
        out[name] = parse_number(value)
    return out


# ---------------------------------------------------------------------------
# tables and serialisation


@dataclass
class Table:
    """Named columns of equal length; complex columns are flagged."""

    columns: dict = field(default_factory=dict)
    complex_cols: set = field(default_factory=set)

    def add(self, name: str, values, *, is_complex: bool = False):
        self.columns[name] = list(values)
        if is_complex:
            self.complex_cols.add(name)

    def __len__(self):
        return len(next(iter(self.columns.values()), []))


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return ""
    return format(float(v), ".17g")


def _clean(v):
    if v is None:
        return None
    v = complex(v)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        return None
    return v


def to_csv(table: Table) -> str:
    """Header row, ``,`` separator, 17 significant digits, empty cells for nulls."""
    header = []
    for name in table.columns:
        header += [f"{name}_re", f"{name}_im"] if name in table.complex_cols else [name]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for i in range(len(table)):
        row = []
        for name, col in table.columns.items():
            v = _clean(col[i])
            if name in table.complex_cols:
                row += ["", ""] if v is None else [_fmt(v.real), _fmt(v.imag)]
            else:
                row.append("" if v is None else _fmt(v.real))
        w.writerow(row)
    return buf.getvalue()


def _json_value(v, is_complex: bool):
    v = _clean(v)
    if v is None:
        return None
    if is_complex:
        return {"re": v.real, "im": v.imag}
    return v.real


def jsonable(obj):
    """Recursively convert numbers, complex values and arrays for JSON."""
    if isinstance(obj, Mapping):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, complex):
        if not (math.isfinite(obj.real) and math.isfinite(obj.imag)):
            return None
        return float(obj.real) if obj.imag == 0 else {"re": obj.real, "im": obj.imag}
    return obj


def to_json(table: Table, config: dict, report: dict | None = None) -> str:
    """One object ``{config, columns, report?}``."""
    cols = {name: [_json_value(v, name in table.complex_cols) for v in col]
            for name, col in table.columns.items()}
    out = {"config": jsonable(config), "columns": cols}
    if report is not None:
        out["report"] = jsonable(report)
    return json.dumps(out, indent=1, allow_nan=False)


def write_atomic(path: str, text: str):
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nrt-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, table: Table | None, config: dict, report: dict | None):
    if args.format == "csv":
        if table is None:
            text = json.dumps(jsonable(report), indent=1) + "\n"
        else:
            text = to_csv(table)
    else:
        text = to_json(table or Table(), config, report) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if report is not None and args.format == "csv" and args.out and table is not None:
        sys.stderr.write(json.dumps(jsonable(report), indent=1) + "\n")


# ---------------------------------------------------------------------------
# commands


def gtf_table(p: float, q: float, xs) -> tuple[Table, dict]:
    """``sin``, ``cos``, ``tan`` and the Pythagorean defect ``|cos|^p + |sin|^q - 1``."""
    params = gtf.GtfParams(p, q)
    sins, coss, tans, ident = [], [], [], []
    for x in xs:
        s, c = gtf.sin_cos_pq(float(x), params)
        sv, cv = s.value.real, c.value.real
        sins.append(sv)
        coss.append(cv)
        tans.append(sv / cv if cv != 0 and abs(cv) > 1e-15 else None)
        ident.append(abs(cv) ** p + abs(sv) ** q - 1.0)
    t = Table()
    t.add("x", xs)
    t.add("sin", sins)
    t.add("cos", coss)
    t.add("tan", tans)
    t.add("identity_defect", ident)
    finite = [abs(v) for v in ident if v is not None]
    report = {"p": p, "q": q, "pi_pq": gtf.pi_pq(params),
              "sin_max": max(sins), "identity_max_abs": max(finite)}
    return t, report


def cmd_gtf_eval(args) -> int:
    if args.figure:
        if args.figure not in GTF_PRESETS:
            raise CliError(f"unknown GTF preset {args.figure!r}; known: {', '.join(GTF_PRESETS)}")
        p, q = GTF_PRESETS[args.figure]
    else:
        if args.p is None or args.q is None:
            raise CliError("gtf-eval needs --p and --q, or --figure")
        p, q = float(parse_number(args.p)), float(parse_number(args.q))
    if not (p > 0 and q > 0):
        raise CliError("p and q must be positive")
    half = gtf.pi_pq(gtf.GtfParams(p, q))
    if args.x is not None:
        lo, hi = (float(parse_number(v)) for v in args.x)
    elif math.isfinite(half):
        lo, hi = 0.0, 2.0 * half
    else:
        raise CliError(f"pi_pq is infinite for p = {p:g}; pass --x LO HI")
    # odd count on a full period puts a node exactly at the quarter period
    xs = np.linspace(lo, hi, args.n)
    table, report = gtf_table(p, q, xs)
    config = {"command": "gtf-eval", "p": p, "q": q, "figure": args.figure,
              "x": [lo, hi], "n": args.n}
    emit(args, table, config, report)
    return EXIT_OK


def _x_range(solution, t: float) -> tuple[float, float]:
    """``x`` interval that maps the family window into the similarity variable at ``t``."""
    if solution.window is None:
        raise CliError(f"family {solution.family.family_id} has no default window; pass --x")
    lo, hi = solution.window
    spec = solution.spec
    if spec.case is Case.TRAVELLING_WAVE:
        c4 = (spec.c("c4") if spec.has("c4") else spec.c("alpha") * spec.b).real
        return lo + c4 * t, hi + c4 * t
    if spec.case is Case.SCALING:
        if t <= 0:
            raise CliError("scaling families need t > 0")
        s = t ** spec.c("eps").real
        return tuple(sorted((lo * s, hi * s)))
    if spec.case is Case.LOG_T:
        if t <= 0:
            raise CliError("log(t) families need t > 0")
        c4 = spec.c("c4", 0.0).real
        return lo + c4 * math.log(t), hi + c4 * math.log(t)
    c2 = spec.c("c2", 0.0).real
    if c2 == 0:
        return 0.5, 2.0
    return tuple(sorted((math.exp((t - lo) / c2), math.exp((t - hi) / c2))))


def _match_preset(family_id: str, q, t: float, constants: dict, b_given: bool):
    """Figure preset consistent with the given arguments, if any."""
    if b_given:
        return None
    for preset in dens.FIGURE_PRESETS.values():
        if preset.family_id != family_id or q is None or abs(q - preset.q) > 1e-12:
            continue
        if t != preset.t:
            continue
        if all(k in preset.constants and abs(complex(v) - complex(preset.constants[k])) < 1e-12
               for k, v in constants.items()):
            return preset
    return None


def solve_table(solution, xs, t: float, normalize: bool, breakpoints=(),
                omega=None) -> tuple[Table, dict]:
    """Sample ``z, P, Q, Psi, Phi, rho`` at fixed ``t``; ``omega`` is the normalisation window."""
    fields = solution.fields()
    zs, Ps, Qs, psis, phis = [], [], [], [], []
    for x in xs:
        try:
            z = complex(fields.similarity(float(x), t))
        except NrtError:
            z = None
        sample = fields.sample(float(x), t)
        zs.append(z)
        if sample is None or z is None:
            Ps.append(None)
            Qs.append(None)
            psis.append(None)
            phis.append(None)
            continue
        zz = z.real if z.imag == 0 else z
        try:
            Ps.append(solution.P(zz))
            Qs.append(solution.Q(zz))
        except NrtError:
            Ps.append(None)
            Qs.append(None)
        psis.append(sample[0])
        phis.append(sample[1])
    omega = omega or (float(min(xs)), float(max(xs)))
    prof = dens.density_profile(fields, t, omega, xs, breakpoints=breakpoints)
    report = {"family": solution.family.family_id, "q": solution.spec.q,
              "b": solution.spec.b, "constants": solution.spec.constants, "t": t,
              "singular_points": int(prof.singular.sum()), "im_max": prof.im_max,
              "negative": prof.negative}
    rho = prof.raw
    if normalize:
        try:
            prof = dens.normalize(prof)
            rho = prof.rho
            report["n_omega"] = prof.n_omega
        except ZeroMass as exc:
            report["n_omega"] = None
            report["zero_mass"] = str(exc)
    t_out = Table()
    t_out.add("x", xs)
    t_out.add("z", zs, is_complex=True)
    t_out.add("P", Ps, is_complex=True)
    t_out.add("Q", Qs, is_complex=True)
    t_out.add("Psi", psis, is_complex=True)
    t_out.add("Phi", phis, is_complex=True)
    t_out.add("rho", [None if math.isnan(v) else v for v in rho])
    return t_out, report


def cmd_solve(args, constants: dict) -> int:
    family(args.family)
    q = None if args.q is None else parse_number(args.q)
    t = float(parse_number(args.t))
    preset = _match_preset(args.family, q, t, constants, args.b is not None)
    breakpoints = ()
    if preset is not None:
        b = preset.b
        constants = {**preset.constants, **constants}
        breakpoints = preset.breakpoints
    else:
        b = None if args.b is None else parse_number(args.b)
    solution = build(args.family, q=q, b=b, **constants)
    if args.x is not None:
        lo, hi = (float(parse_number(v)) for v in args.x)
    elif preset is not None:
        lo, hi = preset.omega
    else:
        lo, hi = _x_range(solution, t)
    xs = midpoints(lo, hi, args.points)
    table, report = solve_table(solution, xs, t, args.normalize, breakpoints, (lo, hi))
    report["preset"] = None if preset is None else preset.name
    config = {"command": "solve", "family": args.family, "q": solution.spec.q,
              "b": solution.spec.b, "constants": solution.spec.constants, "t": t,
              "x": [lo, hi], "points": args.points, "normalize": args.normalize}
    emit(args, table, config, report)
    return EXIT_OK


def figure_table(names: list[str]) -> tuple[Table, dict]:
    """Lifted and closed normalised densities of density presets on a shared grid."""
    table = Table()
    report: dict = {}
    for name in names:
        preset = dens.figure_preset(name)
        lifted, closed = preset.lifted(), preset.closed()
        if "x" not in table.columns:
            table.add("x", lifted.x)
        diff = np.abs(lifted.raw - closed.raw)
        entry = {"q": preset.q, "b": preset.b, "t": preset.t, "omega": preset.omega,
                 "constants": preset.constants,
                 "two_path_max_abs": float(np.nanmax(diff)) if np.any(~np.isnan(diff)) else None,
                 "singular_points": int(lifted.singular.sum()), "im_max": lifted.im_max}
        rho = lifted.raw
        try:
            norm = dens.normalize(lifted)
            rho = norm.rho
            entry["n_omega"] = norm.n_omega
            entry["negative"] = norm.negative
        except ZeroMass as exc:
            entry["n_omega"] = None
            entry["zero_mass"] = str(exc)
        table.add(f"rho_{name}", [None if math.isnan(v) else v for v in rho])
        report[name] = entry
    return table, report


def cmd_figure(args) -> int:
    name = args.name
    if name in GTF_PRESETS:
        args.figure, args.p, args.q, args.x = name, None, None, None
        return cmd_gtf_eval(args)
    names = [n for n in dens.FIGURE_PRESETS if n.startswith("fig1-")] if name == "fig1" \
        else [name]
    table, report = figure_table(names)
    emit(args, table, {"command": "figure", "name": name}, report)
    return EXIT_OK


def cmd_check(args, constants: dict) -> int:
    q = None if args.q is None else parse_number(args.q)
    b = None if args.b is None else parse_number(args.b)
    solution = build(args.family, q=q, b=b, **constants)
    report: dict = {"family": args.family, "q": solution.spec.q, "b": solution.spec.b,
                    "constants": solution.spec.constants, "tolerance": verify.ODE_TOL}
    if args.perturb:
        key, factor = parse_perturb(args.perturb)
        report["perturbed"] = {"constant": key, "factor": factor}
        reps = verify.perturbed_checks(solution, key, factor, n=args.samples)
    else:
        reps = verify.run_checks(solution, n=args.samples)
    ok = True
    checks = {}
    for name, rep in reps.items():
        if rep is None:
            checks[name] = {"passed": False, "note": "perturbed curve not evaluable on window"}
            ok = False
            continue
        passed = rep.passed(verify.ODE_TOL)
        ok &= passed
        checks[name] = {**rep.to_dict(), "passed": passed}
    report["checks"] = checks
    if args.lift:
        if not solution.liftable:
            raise CliError(f"family {args.family} has no P(z), Q(z) to lift")
        pde = verify.pde_study(solution)
        lo, hi = verify.ORDER_BAND
        pde_ok = pde.conv_order is not None and lo < pde.conv_order < hi
        report["pde"] = {**pde.to_dict(), "passed": pde_ok}
        ok &= pde_ok
    report["passed"] = ok
    emit(args, None, {"command": "check", "family": args.family}, report)
    return EXIT_OK if ok else EXIT_GATE


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    # family constants arrive as unknown options, so prefixes must not match e.g. --normalize
    parser = argparse.ArgumentParser(prog="nrt-waves", description=__doc__.split("\n\n")[0],
                                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", help="output path (default stdout); written atomically")

    g = sub.add_parser("gtf-eval", allow_abbrev=False, help="sample sin_pq, cos_pq, tan_pq")
    g.add_argument("--p")
    g.add_argument("--q")
    g.add_argument("--figure", help=f"preset: {', '.join(GTF_PRESETS)}")
    g.add_argument("--x", nargs=2, metavar=("LO", "HI"))
    g.add_argument("--n", type=int, default=241)
    common(g)

    s = sub.add_parser("solve", allow_abbrev=False,
                       help="sample P, Q, Psi, Phi and rho of a family",
                       epilog="family constants: --NAME VALUE (e.g. --m 1 --n 2 for lt.sundman)")
    s.add_argument("--family", required=True)
    s.add_argument("--q")
    s.add_argument("--b")
    s.add_argument("--t", default="1")
    s.add_argument("--x", nargs=2, metavar=("LO", "HI"))
    # not --n, which is a family constant of lt.sundman
    s.add_argument("--points", type=int, default=240)
    s.add_argument("--normalize", action="store_true")
    common(s)

    f = sub.add_parser("figure", allow_abbrev=False, help="figure datasets")
    f.add_argument("name", help=f"fig1, {', '.join(dens.FIGURE_PRESETS)}, {', '.join(GTF_PRESETS)}")
    f.add_argument("--n", type=int, default=241)
    common(f)

    c = sub.add_parser("check", allow_abbrev=False, help="residual gates of a family",
                       epilog="family constants: --NAME VALUE (e.g. --m 1 --n 2 for lt.sundman)")
    c.add_argument("--family", required=True)
    c.add_argument("--q")
    c.add_argument("--b")
    c.add_argument("--lift", action="store_true", help="also run the PDE convergence study")
    c.add_argument("--perturb", help="key=FACTORx negative control, e.g. beta=1.01x")
    c.add_argument("--samples", type=int, default=20)
    common(c)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        if args.command in ("gtf-eval", "figure") and extra:
            raise CliError(f"unexpected arguments: {' '.join(extra)}")
        constants = parse_constants(extra)
        if args.command == "gtf-eval":
            return cmd_gtf_eval(args)
        if args.command == "figure":
            return cmd_figure(args)
        if args.command == "solve":
            return cmd_solve(args, constants)
        return cmd_check(args, constants)
    except (ValidationError, UnknownFamily, UnknownRelation) as exc:
        sys.stderr.write(f"nrt-waves: error: {exc}\n")
        return EXIT_INVALID
    except (NrtError, ArithmeticError) as exc:
        where = getattr(args, "family", None)
        ctx = f" (family {where})" if where else ""
        sys.stderr.write(f"nrt-waves: {type(exc).__name__}{ctx}: {exc}\n")
        return EXIT_ERROR


__all__ = ["main", "build_parser", "parse_number", "parse_perturb", "parse_constants",
           "Table", "to_csv", "to_json", "write_atomic", "gtf_table", "solve_table",
           "figure_table", "GTF_PRESETS"]
