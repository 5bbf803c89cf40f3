"""Command-line driver: check, solve, oracle.

Config files are flat, line-oriented text: `section.key = value`, one
per line, `#` comments and blank lines ignored, lists (vortex points,
dump requests) as repeated keys.  Example:

    domain.kind = plane
    domain.R = 12
    domain.n = 257
    couplings.a = 1
    couplings.b = -1
    couplings.c = 0
    couplings.d = 1
    vortices.zeros1 = 0.0468 0.0468 1
    solver.lambda = 10

All numeric output is printed with 17 significant digits so doubles
round-trip exactly; two runs of the same config produce byte-identical
summaries.  Exit codes: 0 ok, 1 config error, 2 infeasible,
3 non-convergence.
"""

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .discretization import (TORUS, PLANE, DomainSpec, ScalarField,
                             sample_bilinear)
from .model import (PhysicalCouplings, CouplingMatrix,
                    couplings_from_physical, VortexConfiguration,
                    check_torus_feasibility, decay_rates, predicted_fluxes)
from .background import (plane_background, torus_background,
                         torus_background_abstract, background_at_points)
from .solver import Problem, solve, InfeasibleConfigurationError
from .diagnostics import diagnose, reconstruct_fields
from .oracle import RadialProblem, solve_radial

DUMP_FIELDS = ("u1", "u2", "q2", "p2", "B1", "B2", "Fhat", "Ftilde",
               "f1", "f2", "u01", "u02")
_PHYSICAL_DUMPS = frozenset(("q2", "p2", "B1", "B2", "Fhat", "Ftilde"))


class ConfigError(Exception):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message)

    def __str__(self):
        msg = super().__str__()
        if self.line is not None:
            return "line %d: %s" % (self.line, msg)
        return msg


# ----------------------------------------------------------------------
# Config model and parser
# ----------------------------------------------------------------------

@dataclass
class RunConfig:
    domain: DomainSpec
    cm: CouplingMatrix
    pc: Optional[PhysicalCouplings]
    vc: VortexConfiguration
    lam: float = 10.0
    copies: int = 16
    tol: float = 1e-10
    max_iter: int = 50
    force: bool = False
    sign: str = "upper"
    background: str = "lattice"
    auto_offset: bool = False
    oracle_nodes: int = 2001
    out_dir: str = "."
    dumps: tuple = ()


_SCALAR_KEYS = {
    ("domain", "kind"): str, ("domain", "L1"): float,
    ("domain", "L2"): float, ("domain", "n1"): int,
    ("domain", "n2"): int, ("domain", "R"): float, ("domain", "n"): int,
    ("couplings", "a"): float, ("couplings", "b"): float,
    ("couplings", "c"): float, ("couplings", "d"): float,
    ("couplings", "a11"): float, ("couplings", "a12"): float,
    ("couplings", "a21"): float, ("couplings", "a22"): float,
    ("solver", "lambda"): float, ("solver", "copies"): int,
    ("solver", "tol"): float, ("solver", "max_iter"): int,
    ("solver", "force"): bool, ("solver", "sign"): str,
    ("solver", "background"): str, ("solver", "auto_offset"): bool,
    ("solver", "oracle_nodes"): int,
    ("output", "directory"): str,
}
_LIST_KEYS = frozenset((("vortices", "zeros1"), ("vortices", "poles1"),
                        ("vortices", "zeros2"), ("vortices", "poles2"),
                        ("output", "dump")))


def _convert(kind, raw, line):
    try:
        if kind is bool:
            if raw == "true":
                return True
            if raw == "false":
                return False
            raise ValueError
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError("cannot parse %r as %s" % (raw, kind.__name__),
                          line) from None


def _parse_vortex_entry(raw, line):
    toks = raw.split()
    if len(toks) != 3:
        raise ConfigError("vortex entry needs 'x y multiplicity', got %r"
                          % raw, line)
    x = _convert(float, toks[0], line)
    y = _convert(float, toks[1], line)
    m = _convert(float, toks[2], line)
    if m != int(m) or m < 1:
        raise ConfigError("multiplicity must be a positive integer, got %r"
                          % toks[2], line)
    return (x, y, int(m))


def parse_config(text):
    """Parse config text into a RunConfig; raises ConfigError with the
    offending line number."""
    scalars = {}
    lists = {k: [] for k in _LIST_KEYS}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'section.key = value'", line_no)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if "." not in key:
            raise ConfigError("key %r is missing its section prefix" % key,
                              line_no)
        sec, name = key.split(".", 1)
        pair = (sec, name)
        if pair in _LIST_KEYS:
            lists[pair].append((value, line_no))
        elif pair in _SCALAR_KEYS:
            if pair in scalars:
                raise ConfigError("duplicate key %r (first at line %d)"
                                  % (key, scalars[pair][1]), line_no)
            scalars[pair] = (value, line_no)
        else:
            raise ConfigError("unknown key %r" % key, line_no)

    def get(sec, name, default=None):
        pair = (sec, name)
        if pair not in scalars:
            if default is None:
                raise ConfigError("missing required key '%s.%s'"
                                  % (sec, name))
            return default
        raw, line = scalars[pair]
        return _convert(_SCALAR_KEYS[pair], raw, line)

    def key_line(sec, name):
        return scalars.get((sec, name), (None, None))[1]

    kind = get("domain", "kind")
    if kind == "torus":
        for bad in ("R", "n"):
            if ("domain", bad) in scalars:
                raise ConfigError("'domain.%s' is a plane key" % bad,
                                  key_line("domain", bad))
        try:
            domain = DomainSpec.torus(
                L1=get("domain", "L1", 2.0 * np.pi),
                L2=get("domain", "L2", 2.0 * np.pi),
                n1=get("domain", "n1", 256), n2=get("domain", "n2", 256))
        except ValueError as exc:
            raise ConfigError(str(exc), key_line("domain", "kind")) from None
    elif kind == "plane":
        for bad in ("L1", "L2", "n1", "n2"):
            if ("domain", bad) in scalars:
                raise ConfigError("'domain.%s' is a torus key" % bad,
                                  key_line("domain", bad))
        try:
            domain = DomainSpec.plane(R=get("domain", "R", 12.0),
                                      n=get("domain", "n", 257))
        except ValueError as exc:
            raise ConfigError(str(exc), key_line("domain", "kind")) from None
    else:
        raise ConfigError("domain.kind must be 'torus' or 'plane', got %r"
                          % kind, key_line("domain", "kind"))

    phys_present = [n for n in ("a", "b", "c", "d")
                    if ("couplings", n) in scalars]
    mat_present = [n for n in ("a11", "a12", "a21", "a22")
                   if ("couplings", n) in scalars]
    if phys_present and mat_present:
        raise ConfigError(
            "give either physical couplings (a, b, c, d) or the matrix "
            "(a11, a12, a21, a22), not both",
            key_line("couplings", mat_present[0]))
    if phys_present:
        missing = [n for n in ("a", "b", "c", "d") if n not in phys_present]
        if missing:
            raise ConfigError("physical couplings incomplete: missing %s"
                              % ", ".join("couplings." + n for n in missing))
        try:
            pc = PhysicalCouplings(get("couplings", "a"),
                                   get("couplings", "b"),
                                   get("couplings", "c"),
                                   get("couplings", "d"))
            cm = couplings_from_physical(pc)
        except ValueError as exc:
            raise ConfigError(str(exc),
                              key_line("couplings", "a")) from None
    elif mat_present:
        missing = [n for n in ("a11", "a12", "a21", "a22")
                   if n not in mat_present]
        if missing:
            raise ConfigError("coupling matrix incomplete: missing %s"
                              % ", ".join("couplings." + n for n in missing))
        pc = None
        try:
            cm = CouplingMatrix(get("couplings", "a11"),
                                get("couplings", "a12"),
                                get("couplings", "a21"),
                                get("couplings", "a22"))
        except ValueError as exc:
            raise ConfigError(str(exc),
                              key_line("couplings", "a11")) from None
    else:
        raise ConfigError("no couplings given (physical a, b, c, d or "
                          "matrix a11, a12, a21, a22)")

    groups = {}
    for name in ("zeros1", "poles1", "zeros2", "poles2"):
        groups[name] = tuple(_parse_vortex_entry(raw, line)
                             for raw, line in lists[("vortices", name)])
    vc = VortexConfiguration(**groups)

    sign = get("solver", "sign", "upper")
    if sign not in ("upper", "lower"):
        raise ConfigError("solver.sign must be 'upper' or 'lower'",
                          key_line("solver", "sign"))
    background = get("solver", "background", "lattice")
    if background not in ("lattice", "abstract"):
        raise ConfigError("solver.background must be 'lattice' or "
                          "'abstract'", key_line("solver", "background"))

    dumps = []
    for raw, line in lists[("output", "dump")]:
        for token in raw.replace(",", " ").split():
            if token not in DUMP_FIELDS:
                raise ConfigError("unknown dump field %r (choose from %s)"
                                  % (token, ", ".join(DUMP_FIELDS)), line)
            if token not in dumps:
                dumps.append(token)

    cfg = RunConfig(
        domain=domain, cm=cm, pc=pc, vc=vc,
        lam=get("solver", "lambda", 10.0),
        copies=get("solver", "copies", 16),
        tol=get("solver", "tol", 1e-10),
        max_iter=get("solver", "max_iter", 50),
        force=get("solver", "force", False),
        sign=sign, background=background,
        auto_offset=get("solver", "auto_offset", False),
        oracle_nodes=get("solver", "oracle_nodes", 2001),
        out_dir=get("output", "directory", "."),
        dumps=tuple(dumps))
    if cfg.lam <= 0.0:
        raise ConfigError("solver.lambda must be positive",
                          key_line("solver", "lambda"))
    if cfg.tol <= 0.0:
        raise ConfigError("solver.tol must be positive",
                          key_line("solver", "tol"))
    if cfg.max_iter < 1:
        raise ConfigError("solver.max_iter must be at least 1",
                          key_line("solver", "max_iter"))
    if cfg.copies < 1:
        raise ConfigError("solver.copies must be at least 1",
                          key_line("solver", "copies"))
    if cfg.oracle_nodes < 1000:
        raise ConfigError("solver.oracle_nodes must be at least 1000",
                          key_line("solver", "oracle_nodes"))
    return cfg


# ----------------------------------------------------------------------
# Canonical text forms
# ----------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return "%d" % value
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def canonical_config(cfg):
    """Full config text with every key explicit; re-parses to an equal
    RunConfig (the --echo round-trip)."""
    lines = []
    dom = cfg.domain
    lines.append("domain.kind = %s" % dom.kind)
    if dom.kind == TORUS:
        lines.append("domain.L1 = %s" % _fmt(dom.L1))
        lines.append("domain.L2 = %s" % _fmt(dom.L2))
        lines.append("domain.n1 = %s" % _fmt(dom.n1))
        lines.append("domain.n2 = %s" % _fmt(dom.n2))
    else:
        lines.append("domain.R = %s" % _fmt(dom.R))
        lines.append("domain.n = %s" % _fmt(dom.n))
    if cfg.pc is not None:
        for name in ("a", "b", "c", "d"):
            lines.append("couplings.%s = %s"
                         % (name, _fmt(getattr(cfg.pc, name))))
    else:
        for name in ("a11", "a12", "a21", "a22"):
            lines.append("couplings.%s = %s"
                         % (name, _fmt(getattr(cfg.cm, name))))
    for name in ("zeros1", "poles1", "zeros2", "poles2"):
        for (x, y, m) in getattr(cfg.vc, name):
            lines.append("vortices.%s = %s %s %d" % (name, _fmt(x),
                                                     _fmt(y), m))
    lines.append("solver.lambda = %s" % _fmt(cfg.lam))
    lines.append("solver.copies = %s" % _fmt(cfg.copies))
    lines.append("solver.tol = %s" % _fmt(cfg.tol))
    lines.append("solver.max_iter = %s" % _fmt(cfg.max_iter))
    lines.append("solver.force = %s" % _fmt(cfg.force))
    lines.append("solver.sign = %s" % cfg.sign)
    lines.append("solver.background = %s" % cfg.background)
    lines.append("solver.auto_offset = %s" % _fmt(cfg.auto_offset))
    lines.append("solver.oracle_nodes = %s" % _fmt(cfg.oracle_nodes))
    lines.append("output.directory = %s" % cfg.out_dir)
    for name in cfg.dumps:
        lines.append("output.dump = %s" % name)
    return "\n".join(lines) + "\n"


def write_dump(path, field):
    """Field map as comma-separated rows (row-major) under a
    `# nx ny x0 y0 hx hy` header."""
    dom = field.domain
    hx, hy = dom.spacing
    x0, y0 = dom.origin
    nx, ny = dom.shape
    with open(path, "w") as fh:
        fh.write("# %d %d %s %s %s %s\n"
                 % (nx, ny, _fmt(x0), _fmt(y0), _fmt(hx), _fmt(hy)))
        for row in field.values:
            fh.write(",".join("%.17g" % v for v in row))
            fh.write("\n")


def read_dump(path):
    """Inverse of write_dump: ((nx, ny, x0, y0, hx, hy), values)."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError("dump file %s lacks its header line" % path)
        toks = header[1:].split()
        nx, ny = int(toks[0]), int(toks[1])
        x0, y0, hx, hy = (float(t) for t in toks[2:6])
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    if values.shape != (nx, ny):
        raise ValueError("dump file %s has shape %s, header says %s"
                         % (path, values.shape, (nx, ny)))
    return (nx, ny, x0, y0, hx, hy), values


# ----------------------------------------------------------------------
# Problem assembly
# ----------------------------------------------------------------------

def _offset_on_node_points(vc, dom):
    """Shift any vortex point lying exactly on a grid node by half a
    cell (the auto_offset convenience)."""
    hx, hy = dom.spacing
    x0, y0 = dom.origin

    def fix(points):
        out = []
        for (x, y, m) in points:
            dx = abs(x - (x0 + round((x - x0) / hx) * hx))
            dy = abs(y - (y0 + round((y - y0) / hy) * hy))
            if dx < 1e-9 and dy < 1e-9:
                x, y = x + 0.5 * hx, y + 0.5 * hy
            out.append((x, y, m))
        return tuple(out)

    return VortexConfiguration(zeros1=fix(vc.zeros1), poles1=fix(vc.poles1),
                               zeros2=fix(vc.zeros2), poles2=fix(vc.poles2))


def build_problem(cfg, force=False):
    """RunConfig -> (Problem, effective VortexConfiguration)."""
    vc = cfg.vc
    if cfg.auto_offset:
        vc = _offset_on_node_points(vc, cfg.domain)
    if cfg.domain.kind == PLANE:
        bd = plane_background(vc, cfg.lam, cfg.domain)
    elif cfg.background == "abstract":
        bd = torus_background_abstract(vc, cfg.lam, cfg.domain)
    else:
        bd = torus_background(vc, cfg.lam, cfg.copies, cfg.domain)
    problem = Problem(cm=cfg.cm, vc=vc, domain=cfg.domain, bd=bd,
                      tol_residual=cfg.tol, max_iter=cfg.max_iter,
                      force=cfg.force or force)
    return problem, vc


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_check(cfg, echo=False, out=None):
    """Feasibility, decay constants, and flux predictions; exit 0 when
    solvable (always, on the plane), 2 when the torus condition fails."""
    out = out if out is not None else sys.stdout
    if echo:
        out.write(canonical_config(cfg))
        return 0
    lines = []
    code = 0
    if cfg.domain.kind == TORUS:
        rep = check_torus_feasibility(cfg.cm, cfg.vc, cfg.domain.area)
        lines.append(("feasible", rep.feasible))
        lines.append(("lhs1", rep.lhs1))
        lines.append(("lhs2", rep.lhs2))
        lines.append(("rhs", rep.rhs))
        if not rep.feasible:
            code = 2
    rates = decay_rates(cfg.cm, cfg.pc)
    lines.append(("lambda0", rates.lambda0))
    lines.append(("lambda1", rates.lambda1))
    if rates.sigma is not None:
        lines.append(("sigma", rates.sigma))
    pred = predicted_fluxes(cfg.cm, cfg.vc, cfg.pc)
    lines.append(("predicted_T1", pred.T1))
    lines.append(("predicted_T2", pred.T2))
    lines.append(("energy_predicted", pred.energy))
    if pred.chern1 is not None:
        lines.append(("chern1_predicted", pred.chern1))
        lines.append(("chern2_predicted", pred.chern2))
        lines.append(("charge1_predicted", pred.charge1))
        lines.append(("charge2_predicted", pred.charge2))
    for key, value in lines:
        out.write("%s = %s\n" % (key, _fmt(value)))
    return code


def _summary_lines(cfg, sol, report, pred, rates):
    lines = [("converged", sol.converged),
             ("iterations", sol.iterations),
             ("residual_sup", sol.residual_sup),
             ("J_value", sol.J_value),
             ("measured_T1", report.measured_T1),
             ("measured_T2", report.measured_T2),
             ("predicted_T1", pred.T1),
             ("predicted_T2", pred.T2)]
    if report.energy_topological is not None:
        lines.append(("energy_topological", report.energy_topological))
    lines.append(("energy_predicted", pred.energy))
    if report.chern_measured is not None:
        lines.append(("chern1", report.chern_measured[0]))
        lines.append(("chern2", report.chern_measured[1]))
    if report.decay_rate_measured is not None:
        lines.append(("decay_rate", report.decay_rate_measured))
    lines.append(("lambda0", rates.lambda0))
    lines.append(("lambda1", rates.lambda1))
    if rates.sigma is not None:
        lines.append(("sigma", rates.sigma))
    return "".join("%s = %s\n" % (k, _fmt(v)) for k, v in lines)


def cmd_solve(cfg, out_dir=None, force=False, extra_dumps=(),
              out=None):
    """Run the solver, write summary.txt and requested field dumps."""
    out = out if out is not None else sys.stdout
    dumps = list(cfg.dumps)
    for token in extra_dumps:
        for name in token.replace(",", " ").split():
            if name not in DUMP_FIELDS:
                raise ConfigError("unknown dump field %r" % name)
            if name not in dumps:
                dumps.append(name)
    if cfg.pc is None:
        bad = sorted(set(dumps) & _PHYSICAL_DUMPS)
        if bad:
            raise ConfigError("dump fields %s need physical couplings"
                              % ", ".join(bad))
    directory = out_dir if out_dir is not None else cfg.out_dir
    os.makedirs(directory, exist_ok=True)

    problem, vc = build_problem(cfg, force=force)
    sol = solve(problem)
    report = diagnose(sol, cfg.cm, vc, cfg.pc, sign=cfg.sign)
    pred = predicted_fluxes(cfg.cm, vc, cfg.pc)
    rates = decay_rates(cfg.cm, cfg.pc)
    summary = _summary_lines(cfg, sol, report, pred, rates)
    with open(os.path.join(directory, "summary.txt"), "w") as fh:
        fh.write(summary)
    out.write(summary)

    if dumps:
        fields = {"u1": sol.u1, "u2": sol.u2,
                  "u01": problem.bd.u01, "u02": problem.bd.u02,
                  "f1": problem.bd.f1, "f2": problem.bd.f2}
        if cfg.pc is not None:
            fields.update(reconstruct_fields(sol, cfg.pc, cfg.sign))
        for name in dumps:
            write_dump(os.path.join(directory, name + ".csv"), fields[name])
    return 0 if sol.converged else 3


def _coincident_center(vc):
    points = list(vc.all_points())
    if not points:
        return (0.0, 0.0)
    x0, y0 = points[0]
    for (x, y) in points[1:]:
        if abs(x - x0) > 1e-12 or abs(y - y0) > 1e-12:
            raise ConfigError("radial oracle needs all vortex points "
                              "coincident; found (%g, %g) and (%g, %g)"
                              % (x0, y0, x, y))
    return (x0, y0)


def cmd_oracle(cfg, out_dir=None, compare=None, out=None):
    """Radial ground-truth profile for coincident vortex data; with
    --compare, sup-norm difference against a 2D u1 field dump."""
    out = out if out is not None else sys.stdout
    if cfg.domain.kind != PLANE:
        raise ConfigError("radial oracle needs a plane domain")
    center = _coincident_center(cfg.vc)
    n1 = cfg.vc.N1 - cfg.vc.P1
    n2 = cfg.vc.N2 - cfg.vc.P2
    rp = RadialProblem(cm=cfg.cm, n1=n1, n2=n2, R=cfg.domain.R,
                       nodes=cfg.oracle_nodes)
    sol = solve_radial(rp, tol=cfg.tol)
    directory = out_dir if out_dir is not None else cfg.out_dir
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "profile.txt"), "w") as fh:
        for r, u1, u2 in zip(sol.r, sol.u1, sol.u2):
            fh.write("%.17g %.17g %.17g\n" % (r, u1, u2))
    out.write("converged = %s\n" % _fmt(sol.converged))
    out.write("iterations = %d\n" % sol.iterations)
    out.write("residual_sup = %s\n" % _fmt(sol.residual_sup))
    if not sol.converged:
        return 3
    if compare is not None:
        header, values = read_dump(compare)
        nx, ny, x0, y0, hx, hy = header
        if nx != ny:
            raise ConfigError("compare dump is not a square plane grid")
        dom = DomainSpec.plane(R=-x0, n=nx)
        # interpolate only the smooth part: subtract the analytic
        # background on the dump grid, add it back exactly at the
        # sample points (bilinear interpolation of the ln r spike
        # itself would swamp the comparison near the vortex)
        X, Y = dom.meshgrid()
        u01g, _, _, _ = background_at_points(cfg.vc, cfg.lam, X, Y)
        smooth = ScalarField(dom, values - u01g)
        half = -x0
        r_max = 0.8 * min(half - max(abs(center[0]), abs(center[1])),
                          rp.R)
        mask = (sol.r >= 0.1) & (sol.r <= r_max)
        radii = sol.r[mask]
        angles = np.arange(8) * (np.pi / 4.0)
        sup = 0.0
        for th in angles:
            xs = center[0] + radii * np.cos(th)
            ys = center[1] + radii * np.sin(th)
            u01s, _, _, _ = background_at_points(cfg.vc, cfg.lam, xs, ys)
            vals = u01s + sample_bilinear(smooth, xs, ys)
            sup = max(sup, float(np.abs(vals - sol.u1[mask]).max()))
        out.write("compare_sup_diff = %s\n" % _fmt(sup))
    return 0


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------

def _build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="bivortex",
        description="coupled vortex-antivortex solver on torus and plane")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="feasibility and predictions")
    p_check.add_argument("--config", required=True)
    p_check.add_argument("--echo", action="store_true",
                         help="print the canonical config and exit")

    p_solve = sub.add_parser("solve", help="run the solver")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--out", default=None,
                         help="output directory (overrides config)")
    p_solve.add_argument("--force", action="store_true",
                         help="run even when the torus condition fails")
    p_solve.add_argument("--dump", action="append", default=[],
                         metavar="FIELD[,FIELD...]",
                         help="field maps to write (%s)"
                         % ",".join(DUMP_FIELDS))

    p_oracle = sub.add_parser("oracle", help="radial ground-truth profile")
    p_oracle.add_argument("--config", required=True)
    p_oracle.add_argument("--out", default=None)
    p_oracle.add_argument("--compare", default=None, metavar="DUMP",
                          help="2D u1 dump to compare against")
    return parser


def main(argv=None):
    args = _build_arg_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text)
        if args.command == "check":
            return cmd_check(cfg, echo=args.echo)
        if args.command == "solve":
            return cmd_solve(cfg, out_dir=args.out, force=args.force,
                             extra_dumps=args.dump)
        return cmd_oracle(cfg, out_dir=args.out, compare=args.compare)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 1
    except InfeasibleConfigurationError as exc:
        print("infeasible: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        # geometric validation (points on nodes, outside the square, ...)
        print("config error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
