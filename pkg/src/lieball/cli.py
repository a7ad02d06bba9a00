"""Command-line frontend: tabulate and verify the quantities of the package.

Every subcommand writes a table (CSV or JSON) and a pass/fail summary keyed to
acceptance criteria. Exit status is 0 when every check passes, 1 on a failed
check, 2 on invalid parameters and 3 on numerical non-convergence.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, ParameterError
from .geometry import HElement, ModelParams
from .intertwiners import (
    BoundaryFunction,
    CAlphaSpace,
    discrete_embedding_check,
    minimal_constant_closed,
    minimal_rep_scan,
    sigma_unitarity_residual,
    surface_measure_residual,
    tau_unitarity_residual,
)
from .polynomials import MultiPoly, random_poly
from .spherical import p_coeff, phi_hyp, phi_quad, phi_series, plancherel_measure
from .transform import fh_general, fh_inverse_general, plancherel_check

SCHEMA_VERSION = 1

DEFAULT_TOL = {
    "spherical": 1e-8,
    "orthogonality": 1e-7,
    "roundtrip": 1e-5,
    "surface": 1e-8,
    "unitarity_tau": 1e-8,
    "unitarity_sigma": 1e-5,
    "discrete": 1e-6,
    "minimal": 1e-8,
    "mass": 1e-7,
}


@dataclass
class RunConfig:
    n: int
    nu: float
    lambda_max: float | None = None
    panels: int | None = None
    sphere_order: int = 40
    trunc: int = 6
    tol: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0

    def __post_init__(self):
        self.params = ModelParams(self.n, self.nu)

    def tolerance(self, key: str) -> float:
        return self.tol.get(key, DEFAULT_TOL[key])

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


@dataclass
class Report:
    command: str
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def check(self, name: str, value: float, tol: float, passed: bool | None = None, **extra):
        ok = bool(value < tol) if passed is None else bool(passed)
        self.summary[name] = {"value": float(value), "tol": float(tol), "passed": ok, **extra}

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.summary.values())


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.15g}"


def render(report: Report, config: RunConfig, fmt: str) -> str:
    if fmt == "json":
        obj = {
            "config": config.as_dict(),
            "rows": [dict(zip(report.columns, [float(x) for x in r])) for r in report.rows],
            "summary": report.summary,
        }
        obj["config"]["command"] = report.command
        obj["config"]["schema"] = SCHEMA_VERSION
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# lieball {report.command} schema={SCHEMA_VERSION} version={__version__}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for r in report.rows:
        w.writerow([_fmt(x) for x in r])
    for name, s in report.summary.items():
        buf.write(f"# {name}: value={s['value']:.6g} tol={s['tol']:.1g} "
                  f"{'PASS' if s['passed'] else 'FAIL'}\n")
    return buf.getvalue()


# ---------------------------------------------------------------- commands

def cmd_spherical(config: RunConfig, xs=None, lams=None) -> Report:
    p = config.params
    xs = np.linspace(0.0, 0.5, 10) if xs is None else np.asarray(xs, dtype=float)
    lams = [0.5, 1.0, 2.0, 5.0, 10.0] if lams is None else list(lams)
    rep = Report("spherical", ["x", "lambda", "phi_hyp", "phi_quad", "phi_series", "deviation"])
    worst = 0.0
    for lam in lams:
        for r in xs:
            x = np.zeros(p.n)
            x[0] = r
            vals = [complex(phi_hyp(x, lam, p)), complex(phi_quad(x, lam, p)),
                    complex(phi_series(x, lam, p))]
            dev = max(abs(a - b) for a in vals for b in vals)
            worst = max(worst, dev)
            rep.rows.append([r, lam, vals[0].real, vals[1].real, vals[2].real, dev])
    rep.check("criterion_3_three_routes", worst, config.tolerance("spherical"))
    return rep


def cmd_plancherel(config: RunConfig) -> Report:
    p = config.params
    mu = plancherel_measure(p)
    lmax = config.lambda_max or mu.cutoff()
    grid = np.linspace(0.0, lmax, (config.panels or 20) + 1)[1:]
    rep = Report("plancherel", ["lambda_re", "lambda_im", "density", "atom_mass"])
    for lam, d in zip(grid, mu.density(grid)):
        rep.rows.append([lam, 0.0, d, 0.0])
    if mu.atom is not None:
        rep.rows.append([0.0, mu.atom.lam.imag, 0.0, mu.atom_mass])
    total = mu.integrate(lambda lam: np.ones(np.shape(lam)) if np.ndim(lam) else 1.0)
    rep.check("total_mass", abs(float(np.real(total)) - 1.0), config.tolerance("mass"))
    if mu.atom is not None:
        rep.check("atom_mass_positive", -mu.atom_mass, 0.0, passed=mu.atom_mass > 0)
    return rep


def cmd_orthogonality(config: RunConfig, kmax: int | None = None) -> Report:
    p = config.params
    kmax = config.trunc if kmax is None else kmax
    mu = plancherel_measure(p)
    rule = mu.rule(degree=4 * kmax + 2, panels=config.panels,
                   cutoff=config.lambda_max)
    P = np.array([p_coeff(k, rule.nodes, p) for k in range(kmax + 1)])
    w = rule.weights * mu.density(rule.nodes)
    G = (P * w) @ P.T
    if mu.atom is not None:
        pa = np.array([float(np.real(p_coeff(k, mu.atom, p))) for k in range(kmax + 1)])
        G_cont = G.copy()
        G = G + mu.atom_mass * np.outer(pa, pa)
    rep = Report("orthogonality", ["k", "l", "gram"])
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            rep.rows.append([k, l, G[k, l]])
    err = float(np.max(np.abs(G - np.eye(kmax + 1))))
    name = "criterion_2_atom_orthogonality" if mu.atom is not None else "criterion_1_orthogonality"
    rep.check(name, err, config.tolerance("orthogonality"))
    if mu.atom is not None:
        gap = abs(G_cont[0, 0] - 1.0)
        rep.check("criterion_2_atom_necessity", gap, 1e-2, passed=gap > 1e-2)
    return rep


_NAMES = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Pow: "pow"}


def parse_polynomial(text: str, n: int) -> MultiPoly:
    """Parse expressions in z1..zn and q = zz^t, e.g. ``"1 + z1*z2 - 0.5j*q**2"``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return MultiPoly.constant(n, node.value)
        if isinstance(node, ast.Name):
            if node.id == "q":
                return MultiPoly.zzt(n)
            if node.id.startswith("z") and node.id[1:].isdigit() and 1 <= int(node.id[1:]) <= n:
                return MultiPoly.variable(n, int(node.id[1:]) - 1)
            raise ParameterError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return v * -1 if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _NAMES:
            a = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParameterError("exponents must be integer literals")
                return a ** node.right.value
            b = ev(node.right)
            return {"add": a + b, "sub": a - b, "mul": a * b}[_NAMES[type(node.op)]]
        raise ParameterError(f"unsupported syntax in polynomial: {ast.dump(node)}")

    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParameterError(f"cannot parse polynomial {text!r}") from exc
    return ev(tree)


def cmd_roundtrip(config: RunConfig, poly: str | None = None, points: int = 3) -> Report:
    p = config.params
    rng = config.rng()
    f = parse_polynomial(poly, p.n) if poly else random_poly(p.n, 3, rng)
    t = fh_general(f, p)
    rep = Report("roundtrip", ["point", "radius", "f_re", "f_im", "inverse_re", "inverse_im", "error"])
    worst = 0.0
    for i in range(points):
        x = rng.standard_normal(p.n)
        x *= rng.uniform(0.0, 0.5) / np.linalg.norm(x)
        exact = complex(f(x[None, :])[0])
        inv = fh_inverse_general(t, x)
        err = abs(inv - exact) / max(1.0, abs(exact))
        worst = max(worst, err)
        rep.rows.append([i, float(np.linalg.norm(x)), exact.real, exact.imag, inv.real, inv.imag, err])
    pc = plancherel_check(f, p)
    tol = config.tolerance("roundtrip")
    rep.check("criterion_6_inversion", worst, tol)
    rep.check("criterion_6_plancherel", pc.residual, tol)
    return rep


def _test_functions(n: int):
    return [
        lambda b: np.ones(b.shape[:-1]),
        lambda b: b[..., 0],
        lambda b: np.exp(b[..., 0] - 0.5 * b[..., 1]),
        lambda b: (b[..., 0] * b[..., -1]) ** 2 + b[..., 1],
        lambda b: np.cos(3 * b[..., 0]) * (1 + b[..., -1]),
    ]


def cmd_intertwiner(config: RunConfig, which: str) -> Report:
    p = config.params
    rng = config.rng()
    n = p.n
    if which == "surface":
        rep = Report("intertwiner-surface", ["element", "function", "residual"])
        worst = 0.0
        for i in range(10):
            g = HElement.random(n, rng, max_rapidity=1.5)
            for j, f in enumerate(_test_functions(n)):
                r = surface_measure_residual(g, f)
                worst = max(worst, r)
                rep.rows.append([i, j, r])
        rep.check("criterion_8_surface_measure", worst, config.tolerance("surface"))
        return rep
    if which == "unitarity":
        rep = Report("intertwiner-unitarity", ["element", "tau_residual", "sigma_residual"])
        alpha = min(max(p.nu, p.wallach_bound), p.rho - 0.05) / n
        space = CAlphaSpace(n, alpha)
        f = BoundaryFunction.from_polynomial(random_poly(n, 4, rng))
        wt = ws = 0.0
        for i in range(10):
            g = HElement.random(n, rng, max_rapidity=1.5)
            rt = tau_unitarity_residual(f, g, 1.3, p)
            rs = sigma_unitarity_residual(f, g, space, jmax=config.trunc * 20)
            wt, ws = max(wt, rt), max(ws, rs)
            rep.rows.append([i, rt, rs])
        rep.check("criterion_9_tau", wt, config.tolerance("unitarity_tau"))
        rep.check("criterion_9_sigma", ws, config.tolerance("unitarity_sigma"))
        return rep
    if which == "discrete":
        r = discrete_embedding_check(p, rng)
        rep = Report("intertwiner-discrete", ["route", "vacuum_norm_sq"])
        for i, key in enumerate(["gauss_sum", "series", "funk_hecke", "double_quadrature", "t_nu_blocks"]):
            rep.rows.append([i, r.vacuum[key]])
        tol = config.tolerance("discrete")
        rep.check("criterion_10_vacuum", r.vacuum["max_deviation"], tol)
        rep.check("criterion_10_intertwining", r.intertwining_residual, tol)
        rep.check("discrete_isometry", r.isometry_residual, 1e-5)
        rep.check("discrete_atom_mass", r.atom_residual, tol)
        return rep
    if which == "minimal":
        scan = minimal_rep_scan(p, mmax=4, rng=rng, order=config.sphere_order)
        rep = Report("intertwiner-minimal", ["m", "constant_re", "constant_im", "residual", "closed_form"])
        for r in scan.results:
            rep.rows.append([r.m, r.constant.real, r.constant.imag, r.residual,
                             minimal_constant_closed(r.m, n)])
        tol = config.tolerance("minimal")
        rep.check("criterion_11_proportionality", scan.max_residual, tol)
        cands = scan.results[0].candidates
        rep.check("criterion_11_m_independence", scan.spread, tol,
                  candidates={k: float(v) for k, v in cands.items()},
                  measured_c1=float(scan.results[1].constant.real))
        return rep
    raise ParameterError(f"unknown intertwiner check {which!r}")


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="dimension n >= 3")
    common.add_argument("--nu", type=float, default=2.0, help="weight nu")
    common.add_argument("--lambda-max", type=float, default=None, help="spectral cutoff")
    common.add_argument("--panels", type=int, default=None, help="quadrature panels in lambda")
    common.add_argument("--sphere-order", type=int, default=40, help="sphere rule degree")
    common.add_argument("--trunc", type=int, default=6, help="truncation order K")
    common.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE",
                        help="override a tolerance (repeatable); keys: " + ", ".join(DEFAULT_TOL))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="lieball", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("spherical", parents=[common], help="three-route spherical functions")
    sp.add_argument("--x", type=float, nargs="+", default=None, help="radii |x|")
    sp.add_argument("--lam", type=float, nargs="+", default=None, help="spectral values")
    sub.add_parser("plancherel", parents=[common], help="tabulate the Plancherel measure")
    so = sub.add_parser("orthogonality", parents=[common], help="Gram matrix of p_k")
    so.add_argument("--kmax", type=int, default=None)
    sr = sub.add_parser("roundtrip", parents=[common], help="transform, inversion and norm")
    sr.add_argument("--poly", default=None, help='polynomial in z1..zn and q, e.g. "z1 + q"')
    sr.add_argument("--points", type=int, default=3)
    si = sub.add_parser("intertwiner", parents=[common], help="boundary operator checks")
    si.add_argument("which", choices=["discrete", "minimal", "surface", "unitarity"])
    return parser


def _parse_tol(items) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or key not in DEFAULT_TOL:
            raise ParameterError(f"bad tolerance override {item!r}")
        out[key] = float(val)
    return out


def run(args) -> tuple[Report, RunConfig]:
    config = RunConfig(args.n, args.nu, args.lambda_max, args.panels, args.sphere_order,
                       args.trunc, _parse_tol(args.tol), args.out, args.fmt, args.seed)
    if args.command == "spherical":
        rep = cmd_spherical(config, args.x, args.lam)
    elif args.command == "plancherel":
        rep = cmd_plancherel(config)
    elif args.command == "orthogonality":
        rep = cmd_orthogonality(config, args.kmax)
    elif args.command == "roundtrip":
        rep = cmd_roundtrip(config, args.poly, args.points)
    else:
        rep = cmd_intertwiner(config, args.which)
    return rep, config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, config = run(args)
    except (ParameterError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 3
    text = render(rep, config, config.fmt)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for name, s in rep.summary.items():
        print(f"{'PASS' if s['passed'] else 'FAIL'} {name} value={s['value']:.3g} tol={s['tol']:.1g}",
              file=sys.stderr)
    return 0 if rep.passed else 1
