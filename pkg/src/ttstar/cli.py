"""Command-line front end.

Every subcommand except ``toda solve --out csv`` and ``coxeter plane --out
svg`` prints one JSON object ``{"inputs", "outputs", "diagnostics"}``.
``inputs`` carries the normalized argument vector, so ``--replay FILE``
re-runs a previous invocation from its own JSON output.

Exit codes: 0 success, 2 invalid input, 3 solver non-convergence.
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
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import coxeter, minimal, qring, stokesdata, toda

EXIT_OK, EXIT_INVALID, EXIT_NO_CONVERGENCE = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/3" and "-1e-3" through as values rather than unknown flags
        self._negative_number_matcher = re.compile(r"^-(\d+(/\d+)?|\d*\.?\d+([eE][-+]?\d+)?)$")


# -- argument types -----------------------------------------------------------


def _number(text: str):
    """Exact ``Fraction`` for integers and ``p/q``; ``float`` otherwise."""
    try:
        return Fraction(text) if re.fullmatch(r"[-+]?\d+(/\d+)?", text) else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


# -- serialization --------------------------------------------------------------


def plain(obj):
    """Recursively convert to JSON-ready values.

    Fractions become ``"p/q"`` strings, complex numbers ``[re, im]`` pairs.
    Floats are written by ``json`` with ``repr``, which round-trips exactly.
    """
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _envelope(argv, outputs, diagnostics=None) -> dict:
    return {"inputs": {"argv": list(argv)}, "outputs": plain(outputs), "diagnostics": plain(diagnostics or {})}


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# -- handlers ---------------------------------------------------------------------


def _qde_verify(a):
    jf = qring.JFunction(a.n, a.hbar, a.K, a.branch)
    sym = qring.semiclassical_symbol(qring.cpn_operator(a.n))
    b = qring.B
    out = {
        "residual": qring.qde_residual(jf, a.q),
        "tail_bound": qring.qde_tail_bound(jf, a.q),
        "symbol": str(sym),
        "symbol_ok": bool((sym - (b ** (a.n + 1) - qring.Q)).expand() == 0),
    }
    return out, {"K": a.K}


def _jfun_eval(a):
    jf = qring.JFunction(a.n, a.hbar, a.K, a.branch)
    val = jf(a.q)
    return {"components": list(val.coeffs)}, {"residual": qring.qde_residual(jf, a.q)}


def _gamma_class(a):
    g = qring.gamma_class(a.n)
    return {"coefficients": [c.real for c in g.coeffs]}, {}


def _stokes_from_gamma(a):
    data = stokesdata.validate_gamma(a.n, a.gamma)
    s = stokesdata.stokes_from_gamma(data)
    return (
        {"s": list(s.s), "m": list(data.m), "exponentials": stokesdata.stokes_exponentials(data)},
        {"palindromic": s.is_palindromic(), "strict": data.is_strict()},
    )


def _stokes_steinberg(a):
    if (a.s is None) == (a.gamma is None):
        raise ValueError("give exactly one of --s or --gamma")
    if a.gamma is not None:
        s = stokesdata.stokes_from_gamma(stokesdata.validate_gamma(a.n, a.gamma))
    else:
        s = stokesdata.StokesParameters(a.n, tuple(float(x) for x in a.s))
    S = stokesdata.steinberg_matrix(s)
    ev = sorted(S.eigenvalues(), key=lambda z: (round(math.atan2(z.imag, z.real), 12), abs(z)))
    return {"matrix": S.entries, "charpoly": S.charpoly(), "eigenvalues": ev}, {"det": S.det()}


def _convert_k_to_m(a):
    h = stokesdata.HiggsExponents(a.n, a.N, tuple(int(x) for x in a.k), symmetric=not a.asymmetric)
    m = stokesdata.higgs_to_m(h, a.convention)
    return {"m": list(m), "m_float": [float(x) for x in m], "gamma": [-2 * x for x in m]}, {"convention": a.convention}


def _toda_args(a):
    return dict(epsilon=a.eps, R=a.R, M=a.nodes, tol=a.tol, inner_bc=a.inner_bc, outer_bc=a.outer_bc)


def _toda_solve(a):
    sol = toda.solve_global(a.n, a.gamma, **_toda_args(a))
    if a.out == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["r"] + [f"w{i}" for i in range(a.n + 1)])
        for j, r in enumerate(sol.r):
            wr.writerow([f"{r:.17g}"] + [f"{x:.17g}" for x in sol.w[:, j]])
        return buf.getvalue()
    h = (a.n + 1) // 2
    fits = {}
    for k in range(1, h + 1):
        try:
            f = toda.extract_stokes(sol, k)
            fits[k] = {"s": f.s, "rel_spread": f.rel_spread, "window": f.window}
        except toda.SignalBelowNoise as exc:
            fits[k] = {"s": None, "error": str(exc)}
    exact = stokesdata.stokes_from_gamma(sol.data).s
    return {"stokes": fits, "exact": list(exact)}, sol.diagnostics


def _read_profile(path: str):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header[0] != "r" or header[1:] != [f"w{i}" for i in range(len(header) - 1)]:
        raise ValueError(f"{path}: header must be r,w0,...,wn")
    data = np.array(body, dtype=float)
    n = data.shape[1] - 2
    r = data[:, 0]
    grid = toda.RadialGrid(float(r[0]), float(r[-1]), r)
    return toda.RadialSolution(n, grid, data[:, 1:].T, None)


def _toda_extract(a):
    sol = _read_profile(a.input)
    f = toda.extract_stokes(sol, a.k, tuple(a.window) if a.window else None, a.profile)
    return {"k": a.k, "s": f.s}, {"rel_spread": f.rel_spread, "window": f.window, "npoints": f.npoints}


def _svg(proj: coxeter.CoxeterProjection, size: int = 400) -> str:
    pts = np.array([r.xy for r in proj.roots])
    scale = 0.42 * size / max(1e-12, float(np.max(np.hypot(pts[:, 0], pts[:, 1]))))
    c = size / 2
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<title>A_{proj.n} roots in the Coxeter plane</title>",
        f'<line x1="0" y1="{c}" x2="{size}" y2="{c}" stroke="#ccc"/>',
        f'<line x1="{c}" y1="0" x2="{c}" y2="{size}" stroke="#ccc"/>',
    ]
    for r in proj.roots:
        x, y = c + scale * r.xy[0], c - scale * r.xy[1]
        i, j = r.label
        lines.append(
            f'<circle class="orbit-{r.orbit}" data-root="x{i}-x{j}" cx="{x:.6f}" cy="{y:.6f}" r="4">'
            f"<title>x{i} - x{j} (orbit {r.orbit})</title></circle>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _coxeter_plane(a):
    proj = coxeter.coxeter_plane(a.n)
    if a.out == "svg":
        return _svg(proj)
    R = proj.rotation()
    C = coxeter.coxeter_element(a.n)
    err = max(
        float(np.max(np.abs(proj.project(C @ np.array(coxeter.RootSystemA(a.n).root(*r.label))) - R @ np.array(r.xy))))
        for r in proj.roots
    )
    return (
        {"roots": [{"root": list(r.label), "xy": list(r.xy), "orbit": r.orbit} for r in proj.roots]},
        {"orbit_sizes": {k: len(v) for k, v in sorted(proj.orbits().items())}, "equivariance_error": err},
    )


def _solitons(a):
    sp_ = coxeter.soliton_spectrum(a.n, a.rep)
    return (
        {
            "vacua": len(sp_.weights),
            "solitons": [{"vacua": list(s.vacua), "root": list(s.root), "mass": s.mass, "type": s.type} for s in sp_.solitons],
            "counts_by_mass": {f"{k:.12g}": v for k, v in sorted(sp_.counts_by_mass().items())},
            "counts_by_type": sp_.counts_by_type(),
        },
        {},
    )


def _minimal_enumerate(a):
    pts = minimal.enumerate_fixed_points(a.n, a.N)
    out = []
    for f in pts:
        c = minimal.ceff(f)
        out.append({"k": list(f.k), "c_eff": float(c.value), "c_eff_exact": c.value, "m": list(c.m)})
    return {"fixed_points": out}, {"count": len(out)}


def _minimal_ceff(a):
    f = minimal.FixedPointData(a.n, a.N, tuple(int(x) for x in a.k))
    c = minimal.ceff(f)
    w = minimal.dominant_weight(f)
    return (
        {"c_eff": float(c.value), "c_eff_exact": c.value, "m": list(c.m), "weight": list(w.coeffs)},
        {"via_weight": c.via_weight, "via_m": c.via_m, "level": w.level, "within_level": w.within_level},
    )


def _minimal_alcove(a):
    rep = minimal.alcove_identity_check(a.n, a.l)
    return (
        {"equal": rep.equal, "size": len(rep.shifted_level_weights)},
        {"symmetric_difference": sorted(rep.symmetric_difference)},
    )


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ttstar", description=__doc__.splitlines()[0])
    p.add_argument("--replay", metavar="FILE", help="re-run the invocation recorded in a JSON output")
    out_help = "write to PATH (atomically) instead of stdout"
    p.add_argument("-o", "--output", metavar="PATH", default=argparse.SUPPRESS, help=out_help)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def leaf(parent, name, handler, **kw):
        q = parent.add_parser(name, **kw)
        q.set_defaults(handler=handler)
        q.add_argument("-o", "--output", metavar="PATH", default=argparse.SUPPRESS, help=out_help)
        return q

    def jargs(q):
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--hbar", type=_complex, default=1.0)
        q.add_argument("--q", type=_complex, default=1.0)
        q.add_argument("--K", type=int, default=25)
        q.add_argument("--branch", type=int, default=0)

    qde = sub.add_parser("qde").add_subparsers(dest="action", required=True, parser_class=_Parser)
    jargs(leaf(qde, "verify", _qde_verify, help="QDE residual of the truncated J-function"))
    jf = sub.add_parser("jfun").add_subparsers(dest="action", required=True, parser_class=_Parser)
    jargs(leaf(jf, "eval", _jfun_eval, help="evaluate the J-function components"))
    leaf(sub, "gamma-class", _gamma_class).add_argument("--n", type=int, required=True)

    st = sub.add_parser("stokes").add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = leaf(st, "from-gamma", _stokes_from_gamma)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--gamma", type=_number, nargs="+", required=True)
    q = leaf(st, "steinberg", _stokes_steinberg)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--s", type=_number, nargs="+")
    q.add_argument("--gamma", type=_number, nargs="+")

    cv = sub.add_parser("convert").add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = leaf(cv, "k-to-m", _convert_k_to_m)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--k", type=int, nargs="+", required=True)
    q.add_argument("--convention", choices=["mandk", "gamma_inline"], default="mandk")
    q.add_argument("--asymmetric", action="store_true", help="do not require k_i = k_{n-i+1}")

    td = sub.add_parser("toda").add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = leaf(td, "solve", _toda_solve)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--gamma", type=_number, nargs="+", required=True)
    q.add_argument("--eps", type=float)
    q.add_argument("--R", type=float)
    q.add_argument("--nodes", type=int, default=2000)
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--inner-bc", choices=["lax", "corrected", "robin"])
    q.add_argument("--outer-bc", choices=["bessel", "robin"], default="bessel")
    q.add_argument("--out", choices=["csv", "json"], default="csv")
    q = leaf(td, "extract", _toda_extract)
    q.add_argument("--in", dest="input", required=True, metavar="CSV")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    q.add_argument("--profile", choices=["bessel", "asymptotic"], default="bessel")

    cx = sub.add_parser("coxeter").add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = leaf(cx, "plane", _coxeter_plane)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out", choices=["svg", "json"], default="json")

    q = leaf(sub, "solitons", _solitons)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--rep", type=int, default=1, help="k for the k-th exterior power")

    mn = sub.add_parser("minimal").add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = leaf(mn, "enumerate", _minimal_enumerate)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--N", type=int, required=True)
    q = leaf(mn, "ceff", _minimal_ceff)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--k", type=int, nargs="+", required=True)
    q = leaf(mn, "alcove-check", _minimal_alcove)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--l", type=int, required=True)
    return p


def _replay_argv(path: str) -> list:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        argv = doc["inputs"]["argv"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: no inputs.argv recorded") from exc
    if not isinstance(argv, list) or not all(isinstance(x, str) for x in argv):
        raise ValueError(f"{path}: inputs.argv must be a list of strings")
    return argv


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    output = getattr(args, "output", None)
    try:
        if args.replay:
            if args.command:
                parser.error("--replay takes no subcommand")
            argv = _replay_argv(args.replay)
            args = parser.parse_args(argv)
            output = output or getattr(args, "output", None)
        if not args.command or not hasattr(args, "handler"):
            parser.print_usage(sys.stderr)
            return EXIT_INVALID
        result = args.handler(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except toda.NoConvergence as exc:
        print(f"ttstar: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"ttstar: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if isinstance(result, str):
        text = result
    else:
        outputs, diagnostics = result
        recorded = [x for x in argv if x]
        text = _dump(_envelope(_strip_io(recorded), outputs, diagnostics))
    _write(text, output)
    return EXIT_OK


def _strip_io(argv: list) -> list:
    """Drop ``-o PATH`` / ``--replay FILE`` so replays write to stdout."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("-o", "--output", "--replay"):
            skip = True
            continue
        if tok.startswith(("--output=", "--replay=")):
            continue
        out.append(tok)
    return out


def main() -> int:
    return run()
