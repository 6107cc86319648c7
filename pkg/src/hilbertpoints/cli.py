"""Command-line entry point: ``hilbertpoints <subcommand> [flags]``.

Exit status is 0 on success, 2 when a verdict is numerically inconclusive and
1 on any error.  Every output carries a metadata block (tool, version, seed,
effective configuration and its hash).  Flags override values read from the
key=value file named by ``HILBERT_CONFIG``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import re
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import __version__
from .dynamics import TABLE1_START, StoppingRule, conjecture_experiment, iterate, trace_to_csv, \
    trace_to_json
from .fourier_tables import c2_closed, c2_quadrature, c3_even, c3_quadrature
from .hilbert import INCONCLUSIVE, check
from .khintchin import MAX_QUADRATURE_DIM, constants, equal_coeff_norm
from .phi import phi_bergman, phi_curve, phi_even, phi_quadrature, status_label
from .polyalg import GaussianRational, LaurentPoly
from .projection import ij_integrals, project_linear, project_linear_even
from .hilbert import lambda_expected
from .quadrature import QuadratureSpec

__all__ = ["main", "run", "parse_poly", "render", "CoefVec", "ParseError", "CliError",
           "read_config"]

TOOL = "hilbertpoints"
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class CliError(Exception):
    pass


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class CoefVec(tuple):
    """Coefficients of a 1-homogeneous polynomial ``sum c_j z_j``; compares equal
    to the matching :class:`LaurentPoly`."""

    @property
    def dim(self) -> int:
        return len(self)

    def to_poly(self) -> LaurentPoly:
        return LaurentPoly.linear(list(self))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.to_poly() == other
        return tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    __hash__ = tuple.__hash__


def _as_coefvec(f: LaurentPoly):
    """The coefficient vector of ``f`` when every term is a single ``z_j``."""
    if f.is_zero():
        return None
    for alpha, _ in f.items():
        if sorted(alpha) != [0] * (f.dim - 1) + [1]:
            return None
    out = []
    for j in range(f.dim):
        c = f.coefficient(tuple(int(k == j) for k in range(f.dim)))
        if isinstance(c, GaussianRational) and c.im == 0:
            c = c.re
        out.append(c)
    return CoefVec(out)


# ---------------------------------------------------------------------------
# polynomial syntax:  term (('+'|'-') term)*,  term = factor ('*' factor)*
# factor = integer | decimal | '(' int '/' int ')' | 'i' | 'z'k ['^' ['-'] int]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<frac>\(\s*-?\d+\s*/\s*\d+\s*\))"
    r"|(?P<var>z(?P<idx>[1-9]))"
    r"|(?P<imag>i)"
    r"|(?P<op>[-+*^]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                             pos + len(text[pos:]) - len(text[pos:].lstrip()))
        start = m.start(m.lastgroup)
        out.append((m.lastgroup if m.lastgroup != "idx" else "var", m, start))
        pos = m.end()
    return out


def parse_poly(text: str, dim: int | None = None, analytic: bool = False):
    """Parse monomial-sum syntax such as ``"z1^3 + z2^3 + z1*z2*z3"`` or
    ``"0.5*z1 + (1/2)*z2"``.

    Literals are exact rationals and the dimension is the highest variable
    index unless ``dim`` is given.  Sums of single variables come back as a
    :class:`CoefVec`, anything else as a :class:`LaurentPoly`.  With
    ``analytic=True`` negative exponents are a parse error.
    """
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial", 0)
    terms: list[tuple[GaussianRational, dict]] = []
    k = 0
    sign = 1
    expect_term = True
    max_var = 0
    while k < len(toks):
        kind, m, pos = toks[k]
        if expect_term and kind == "op" and m.group("op") in "+-":
            sign = -sign if m.group("op") == "-" else sign
            k += 1
            if k == len(toks):
                raise ParseError("expected a term", len(text))
            continue
        coef = GaussianRational(sign)
        powers: dict[int, int] = {}
        while True:
            if k >= len(toks):
                raise ParseError("expected a factor", len(text))
            kind, m, pos = toks[k]
            if kind == "num":
                coef = coef * GaussianRational(Fraction(m.group("num")))
            elif kind == "frac":
                a, b = m.group("frac").strip("() ").split("/")
                if int(b) == 0:
                    raise ParseError("zero denominator", pos)
                coef = coef * GaussianRational(Fraction(int(a), int(b)))
            elif kind == "imag":
                coef = coef * GaussianRational(0, 1)
            elif kind == "var":
                j = int(m.group("idx"))
                max_var = max(max_var, j)
                e = 1
                if k + 1 < len(toks) and toks[k + 1][0] == "op" and toks[k + 1][1].group("op") == "^":
                    k += 2
                    neg = False
                    if k < len(toks) and toks[k][0] == "op" and toks[k][1].group("op") == "-":
                        neg = True
                        k += 1
                    if k >= len(toks) or toks[k][0] != "num" or not toks[k][1].group("num").isdigit():
                        raise ParseError("expected an integer exponent",
                                         toks[k][2] if k < len(toks) else len(text))
                    if neg and analytic:
                        raise ParseError("negative exponent in an analytic polynomial", toks[k][2])
                    e = int(toks[k][1].group("num")) * (-1 if neg else 1)
                powers[j] = powers.get(j, 0) + e
            else:
                raise ParseError(f"unexpected {m.group(kind)!r}", pos)
            k += 1
            if k < len(toks) and toks[k][0] == "op" and toks[k][1].group("op") == "*":
                k += 1
                continue
            break
        terms.append((coef, powers))
        sign = 1
        if k < len(toks):
            kind, m, pos = toks[k]
            if kind != "op" or m.group("op") not in "+-":
                raise ParseError(f"expected '+' or '-' but found {m.group(0).strip()!r}", pos)
            expect_term = True
    d = dim if dim is not None else max(max_var, 1)
    if max_var > d:
        raise ParseError(f"variable z{max_var} exceeds dimension {d}", 0)
    out: dict = {}
    for coef, powers in terms:
        alpha = tuple(powers.get(j + 1, 0) for j in range(d))
        out[alpha] = out[alpha] + coef if alpha in out else coef
    f = LaurentPoly(d, out)
    vec = _as_coefvec(f)
    return vec if vec is not None else f


def _render_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _render_monomial(alpha) -> str:
    parts = []
    for j, e in enumerate(alpha):
        if e == 1:
            parts.append(f"z{j + 1}")
        elif e != 0:
            parts.append(f"z{j + 1}^{e}")
    return "*".join(parts)


def render(f) -> str:
    """Inverse of :func:`parse_poly` on exact polynomials."""
    if not isinstance(f, LaurentPoly):
        f = LaurentPoly.linear(list(f))
    pieces = []
    for alpha, c in sorted(f.items(), reverse=True):
        mono = _render_monomial(alpha)
        if isinstance(c, GaussianRational):
            parts = [(c.re, ""), (c.im, "i")]
        else:
            parts = [(Fraction(repr(c.real)), ""), (Fraction(repr(c.imag)), "i")]
        for val, unit in parts:
            if val == 0:
                continue
            neg = val < 0
            mag = _render_rational(abs(val))
            if mag == "1" and (unit or mono):
                mag = ""
            body = "*".join(x for x in (mag, unit, mono) if x)
            pieces.append(("-" if neg else "+", body))
    if not pieces:
        return "0"
    text = "".join(f" {s} {b}" for s, b in pieces).strip()
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _parse_scalar(tok: str):
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        pass
    try:
        return complex(tok.replace("i", "j"))
    except ValueError:
        raise CliError(f"cannot read coefficient {tok!r}") from None


def parse_coeffs(text: str) -> list:
    vals = [_parse_scalar(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise CliError("empty coefficient list")
    return vals


def _parse_poly_arg(text: str) -> LaurentPoly:
    f = _parse_poly_text(text)
    return f.to_poly() if isinstance(f, CoefVec) else f


def _parse_poly_text(text: str):
    s = text.strip()
    if s.startswith("{"):
        try:
            return LaurentPoly.from_json(json.loads(s))
        except (ValueError, KeyError, TypeError) as exc:
            raise CliError(f"malformed polynomial JSON: {exc}") from None
    if re.fullmatch(r"[-+0-9./eE ,ij()]+", s) and "," in s:
        return LaurentPoly.linear([_exactify(v) for v in parse_coeffs(s)])
    return parse_poly(s, analytic=True)


def _exactify(v):
    if isinstance(v, complex) and v.imag == 0:
        return Fraction(repr(v.real))
    return v


def _parse_p(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return float(Fraction(t))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid p {text!r}") from None


# ---------------------------------------------------------------------------
# configuration and output


def read_config(path: str) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{n}: expected key = value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


DEFAULTS = {
    "angular": 256,
    "radial": 64,
    "quad_tol": 1e-6,
    "max_refine": 4,
    "seed": 0,
    "format": None,
    "max_iters": 500,
    "tol": 1e-10,
    "trials": 20,
    "min": 1.0,
    "max": 8.0,
    "step": 0.1,
    "radius": 3,
}

REQUIRED = {
    "project": ("coeffs", "p"),
    "iterate": ("coeffs", "p"),
    "experiment": ("d", "p"),
    "check": ("poly", "p"),
    "phi": ("p",),
    "khintchin": ("p",),
    "fourier": ("d", "p"),
}


def _effective(args, parser: argparse.ArgumentParser) -> dict:
    cfg_path = os.environ.get("HILBERT_CONFIG")
    file_cfg = read_config(cfg_path) if cfg_path else {}
    types = {a.dest: a.type for a in parser._actions if a.dest != "help"}
    for key, raw in file_cfg.items():
        if key not in types:
            continue
        if getattr(args, key, None) is None:
            conv = types[key] or str
            try:
                setattr(args, key, conv(raw))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise CliError(f"config value {key} = {raw!r}: {exc}") from None
    for key, val in DEFAULTS.items():
        if getattr(args, key, None) is None and key in types:
            setattr(args, key, val)
    missing = [k for k in REQUIRED.get(args.command, ()) if getattr(args, k, None) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise CliError(f"{args.command}: missing {flags} (flag or config file)")
    if args.command == "fourier" and args.d not in (2, 3):
        raise CliError("fourier: --d must be 2 or 3")
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return cfg


def _spec(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(args.angular, args.radial, args.quad_tol, args.max_refine)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating,)):
        return _jsonable(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _meta(cfg: dict) -> dict:
    # where the output goes is not part of the run's identity
    cfg = {k: v for k, v in cfg.items() if k != "out"}
    canon = json.dumps(_jsonable(cfg), sort_keys=True)
    return {
        "tool": TOOL,
        "version": __version__,
        "seed": cfg.get("seed"),
        "config_hash": hashlib.sha256(canon.encode()).hexdigest()[:16],
        "config": _jsonable(cfg),
    }


def _write(text: str, out: str | None):
    if not out:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_json(cfg: dict, result, out: str | None):
    doc = {"meta": _meta(cfg), "result": _jsonable(result)}
    _write(json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n", out)


def _emit_csv(cfg: dict, header: list, rows: list, out: str | None, notes=()):
    meta = _meta(cfg)
    buf = io.StringIO()
    buf.write(f"# tool: {meta['tool']} {meta['version']}\n")
    buf.write(f"# seed: {meta['seed']}\n")
    buf.write(f"# config_hash: {meta['config_hash']}\n")
    buf.write(f"# config: {json.dumps(meta['config'], sort_keys=True)}\n")
    for n in notes:
        buf.write(f"# note: {n}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    _write(buf.getvalue(), out)


def _emit_table(header: list, rows: list, out: str | None):
    def fmt(x):
        return f"{x:.6f}" if isinstance(x, (float, np.floating)) else str(x)

    cells = [header] + [[fmt(x) for x in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    lines = ["  ".join(c[i].rjust(widths[i]) for i in range(len(header))) for c in cells]
    _write("\n".join(lines) + "\n", out)


def _emit_rows(args, cfg, header, rows, notes=(), result=None):
    fmt = args.format or "csv"
    if fmt == "json":
        _emit_json(cfg, result if result is not None else
                   {"columns": header, "rows": rows, "notes": list(notes)}, args.out)
    elif fmt == "table":
        _emit_table(header, rows, args.out)
    else:
        _emit_csv(cfg, header, rows, args.out, notes)


def _exact_str(c) -> str:
    if not isinstance(c, GaussianRational):
        return repr(complex(c))
    if c.im == 0:
        return str(c.re)
    return f"{c.re}{'+' if c.im > 0 else '-'}{abs(c.im)}i"


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# subcommands


def cmd_project(args, cfg):
    coeffs = parse_coeffs(args.coeffs)
    result = {"input": [_pair(c) for c in coeffs], "p": args.p}
    if args.even_exact:
        n = (args.p - 2) / 2
        if n != int(n) or n < 0:
            raise CliError("--even-exact needs p = 2, 4, 6, ...")
        out = project_linear_even(coeffs, int(n))
        lam = lambda_expected(coeffs, args.p)
        result.update(method="even-exact", output=[_pair(c) for c in out],
                      output_exact=[_exact_str(c) for c in out], **{"lambda": float(lam)})
    else:
        spec = _spec(args)
        ij = ij_integrals(coeffs, args.p, spec)
        out = project_linear(coeffs, args.p, spec, ij=ij)
        lam = lambda_expected(np.array([complex(c) for c in coeffs]), args.p, spec)
        result.update(method="quadrature", ij=list(ij.values), ij_errors=list(ij.error_estimates),
                      output=[_pair(c) for c in out], **{"lambda": float(lam)})
    _emit_json(cfg, result, args.out)
    return EXIT_OK


def _rule(args) -> StoppingRule:
    try:
        return StoppingRule(max_iters=args.max_iters, fixed_point_tol=args.tol)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_iterate(args, cfg):
    coeffs = [complex(c) for c in parse_coeffs(args.coeffs)]
    trace = iterate(coeffs, args.p, _rule(args), _spec(args))
    if (args.format or "json") == "json":
        _emit_json(cfg, trace_to_json(trace), args.out)
    else:
        rows = list(csv.reader(io.StringIO(trace_to_csv(trace))))
        _emit_rows(args, cfg, rows[0], [[int(r[0])] + [float(x) for x in r[1:]] for r in rows[1:]])
    return EXIT_OK


def cmd_table1(args, cfg):
    rule = StoppingRule(max_iters=8, fixed_point_tol=1e-300)
    trace = iterate(TABLE1_START, 1.0, rule, _spec(args))
    header = ["n", "a", "b", "c"]
    rows = [[n] + [float(x) for x in np.abs(v)] for n, v in enumerate(trace.iterates)]
    _emit_rows(args, cfg, header, rows)
    return EXIT_OK


def cmd_experiment(args, cfg):
    rule = _rule(args)
    report = conjecture_experiment(args.d, args.p, args.trials, args.seed, _spec(args), rule)
    _emit_json(cfg, report.to_dict(), args.out)
    return EXIT_OK


def cmd_check(args, cfg):
    f = _parse_poly_arg(args.poly)
    rep = check(f, args.p, _spec(args), exact=args.exact)
    _emit_json(cfg, {"poly": render(f) if f.exact else repr(f), **rep.to_dict()}, args.out)
    return EXIT_INCONCLUSIVE if rep.verdict == INCONCLUSIVE else EXIT_OK


def cmd_phi(args, cfg):
    spec = _spec(args)
    p = args.p
    samples = []
    q = phi_quadrature(p, spec)
    samples.append({"method": q.method, "value": q.value, "error": q.error_estimate,
                    "imag_residual": q.imag_residual})
    if p > 4:
        b = phi_bergman(p, spec)
        samples.append({"method": b.method, "value": b.value, "error": b.error_estimate})
    n = (p - 2) / 2
    if n == int(n) and n >= 0:
        samples.append({"method": "multinomial-exact", "value": float(phi_even(int(n))),
                        "exact": str(phi_even(int(n))), "error": 0.0})
    _emit_json(cfg, {"p": p, "status": status_label(p), "samples": samples}, args.out)
    return EXIT_OK


CURVE_NOTE = ("values on 1 <= p < 4 other than p = 2 are numerical evidence only "
              "(conjecture), not proved nonzero")


def _curve_rows(samples):
    return [[s.p, s.value, s.error_estimate, s.method] for s in samples]


def cmd_phi_curve(args, cfg):
    samples = phi_curve(args.min, args.max, args.step, _spec(args))
    _emit_rows(args, cfg, ["p", "value", "error", "method"], _curve_rows(samples),
               notes=[CURVE_NOTE])
    return EXIT_OK


def cmd_figure2(args, cfg):
    spec = _spec(args)
    samples = phi_curve(1.0, 4.0, args.step, spec)
    tail = [s for s in phi_curve(4.0, 8.0, args.step, spec, refine=False) if s.p > 4.0]
    _emit_rows(args, cfg, ["p", "value", "error", "method"], _curve_rows(samples + tail),
               notes=[CURVE_NOTE])
    return EXIT_OK


def cmd_khintchin(args, cfg):
    p = args.p
    even = p == int(p) and int(p) % 2 == 0
    # d = 6 is allowed at non-even p but costs minutes; the default stops at 5
    d_max = args.d_max if args.d_max is not None else (10 if even else MAX_QUADRATURE_DIM - 1)
    if d_max < 1:
        raise CliError("--d-max must be >= 1")
    if not even and d_max > MAX_QUADRATURE_DIM:
        raise CliError(f"--d-max {d_max} exceeds the quadrature budget ({MAX_QUADRATURE_DIM}) "
                       "at non-even p; use an even p for larger d")
    spec = _spec(args)
    const = constants(p)
    bound = const.b_p if p >= 2 else const.a_p
    rows = []
    for d in range(1, d_max + 1):
        v = equal_coeff_norm(d, p, spec)
        rows.append([d, v, bound, abs(bound - v)])
    notes = []
    if p > 2:
        gaps = [r[3] for r in rows]
        notes.append(f"gap to b_p decreasing in d: {all(b < a for a, b in zip(gaps, gaps[1:]))}")
    _emit_rows(args, cfg, ["d", "norm", "bound", "gap"], rows, notes)
    return EXIT_OK


def cmd_fourier(args, cfg):
    spec = _spec(args)
    p = args.p
    even_n = int(p) // 2 if p == int(p) and int(p) % 2 == 0 and p >= 2 else None
    if args.alpha:
        alpha = tuple(int(x) for x in args.alpha.split(","))
        if len(alpha) != args.d or sum(alpha) != 1:
            raise CliError(f"--alpha needs {args.d} integers summing to 1")
        if args.d == 2:
            val, err = c2_quadrature(p, alpha[0])
            result = {"alpha": alpha, "p": p, "closed_form": c2_closed(p, alpha[0]),
                      "quadrature": val, "quadrature_error": err}
        else:
            re_, im_, err = c3_quadrature(p, alpha, spec)
            result = {"alpha": alpha, "p": p, "quadrature": re_, "quadrature_error": err,
                      "imag_residual": abs(im_)}
            if even_n:
                result["exact"] = c3_even(even_n)[alpha]
        _emit_json(cfg, result, args.out)
        return EXIT_OK
    r = args.radius
    rows = []
    if args.d == 2:
        for a1 in range(-r, r + 2):
            rows.append([a1, 1 - a1, c2_closed(p, a1)])
        header = ["alpha1", "alpha2", "value"]
    else:
        exact = c3_even(even_n) if even_n else None
        for a1 in range(-r, r + 1):
            for a2 in range(-r, r + 1):
                a3 = 1 - a1 - a2
                if abs(a3) > r:
                    continue
                val = exact[(a1, a2, a3)] if exact else c3_quadrature(p, (a1, a2, a3), spec)[0]
                rows.append([a1, a2, a3, val])
        header = ["alpha1", "alpha2", "alpha3", "value"]
    _emit_rows(args, cfg, header, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, tol_is_quadrature: bool = True):
    g = p.add_argument_group("quadrature and output")
    g.add_argument("--angular", type=int, help="angular points per torus variable (256)")
    g.add_argument("--radial", type=int, help="radial Gauss order (64)")
    if tol_is_quadrature:
        g.add_argument("--tol", dest="quad_tol", type=float, help="quadrature tolerance (1e-6)")
    g.add_argument("--quad-tol", dest="quad_tol", type=float, help=argparse.SUPPRESS
                   if tol_is_quadrature else "quadrature tolerance (1e-6)")
    g.add_argument("--max-refine", type=int, help="refinement steps (4)")
    g.add_argument("--seed", type=int, help="random seed recorded in outputs (0)")
    g.add_argument("--out", help="write to this file instead of stdout")
    g.add_argument("--format", choices=["csv", "json", "table"])


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = _Parser(prog=TOOL, description="Hilbert points of Hardy spaces on the polytorus")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs = {}

    def add(name, func, help_, tol_is_quadrature=True):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        _common(sp, tol_is_quadrature)
        subs[name] = sp
        return sp

    sp = add("project", cmd_project, "nonlinear projection of a linear polynomial")
    sp.add_argument("--coeffs")
    sp.add_argument("--p", type=_parse_p)
    sp.add_argument("--even-exact", action="store_true")

    sp = add("iterate", cmd_iterate, "iterate the normalized projection", False)
    sp.add_argument("--coeffs")
    sp.add_argument("--p", type=_parse_p)
    sp.add_argument("--max-iters", type=int)
    sp.add_argument("--tol", type=float, help="fixed-point tolerance (1e-10)")

    sp = add("experiment", cmd_experiment, "random-start limit experiment for 1 <= p < 2", False)
    sp.add_argument("--d", type=int)
    sp.add_argument("--p", type=_parse_p)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--max-iters", type=int)
    sp.add_argument("--tol", type=float, help="fixed-point tolerance (1e-10)")

    sp = add("check", cmd_check, "Hilbert-point test")
    sp.add_argument("--poly", help='e.g. "z1^3+z2^3+z1*z2*z3", a csv of '
                    "linear coefficients, or polynomial JSON")
    sp.add_argument("--p", type=_parse_p)
    sp.add_argument("--exact", action="store_true")

    sp = add("phi", cmd_phi, "the obstruction coefficient at one p")
    sp.add_argument("--p", type=_parse_p)

    sp = add("phi-curve", cmd_phi_curve, "the obstruction coefficient on a grid")
    sp.add_argument("--min", type=float)
    sp.add_argument("--max", type=float)
    sp.add_argument("--step", type=float)

    sp = add("khintchin", cmd_khintchin, "equal-coefficient norms against Khintchin constants")
    sp.add_argument("--p", type=_parse_p)
    sp.add_argument("--d-max", type=int)

    sp = add("fourier", cmd_fourier, "Fourier coefficients of |psi|^(p-2) psi")
    sp.add_argument("--d", type=int, help="2 or 3")
    sp.add_argument("--p", type=_parse_p)
    sp.add_argument("--alpha")
    sp.add_argument("--radius", type=int)

    add("table1", cmd_table1, "p = 1 trajectory from the published start vector")

    sp = add("figure2", cmd_figure2, "obstruction curve on [1, 8]")
    sp.add_argument("--step", type=float)
    return parser, subs


def run(argv=None) -> int:
    parser, subs = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_ERROR
        cfg = _effective(args, subs[args.command])
        return args.func(args, cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ParseError as exc:
        print(f"error: malformed polynomial: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
