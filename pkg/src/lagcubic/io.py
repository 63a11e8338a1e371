"""JSON wire formats for series, period maps, sections, cubics and mirror fixtures.

Rationals travel as decimal strings (``"3"``, ``"-5/12"``); series use
``{"vars": n, "order": d, "terms": [{"exp": [...], "num": "...", "den": "..."}]}``.
Every loader raises :class:`SchemaError` on malformed input.
"""

import json
from fractions import Fraction

from .errors import LagcubicError, SchemaError
from .lagrangian import SectionCandidate
from .mirror import MirrorPipelineConfig, PicardFuchsOperator
from .period import AffineFrame, PeriodMap
from .series import FormalSeries, as_fraction


def rational_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def _rational(x, what):
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError("%s: not an exact rational: %r" % (what, x)) from exc


def _matrix(rows, what):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError("%s must be a list of rows" % what)
    return [[_rational(x, what) for x in r] for r in rows]


def _int_vector(v, what):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SchemaError("%s must be a list of integers" % what)
    return v


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("%s: invalid JSON: %s" % (path, exc)) from exc
    except OSError as exc:
        raise SchemaError("%s: %s" % (path, exc)) from exc


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _guard(fn):
    def wrapper(data, *args, **kwargs):
        if not isinstance(data, dict):
            raise SchemaError("%s expects a JSON object" % fn.__name__)
        try:
            return fn(data, *args, **kwargs)
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError, IndexError, LagcubicError) as exc:
            raise SchemaError("%s: %s" % (fn.__name__, exc)) from exc
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- period maps ----------------------------------------------------------

@_guard
def period_map_from_json(data):
    """``(PeriodMap, AffineFrame or None, gauge anchor or None)`` from a period-map document."""
    g, n = data["g"], data["n"]
    if not isinstance(g, int) or not isinstance(n, int):
        raise SchemaError("g and n must be integers")
    entries = data["entries"]
    if len(entries) != g or any(len(r) != g for r in entries):
        raise SchemaError("entries must be a %dx%d matrix" % (g, g))
    rows = [[FormalSeries.from_json(e) for e in r] for r in entries]
    divisors = data.get("divisors")
    if divisors is not None:
        _int_vector(divisors, "divisors")
    bpi = data.get("base_point_imag")
    bpi = _matrix(bpi, "base_point_imag") if bpi is not None else None
    p = PeriodMap(g, n, rows, divisors, bpi)
    frame = data.get("frame")
    frame = AffineFrame(_matrix(frame, "frame")) if frame is not None else None
    anchor = data.get("gauge_anchor")
    anchor = [_rational(a, "gauge_anchor") for a in anchor] if anchor is not None else None
    return p, frame, anchor


def period_map_to_json(p, frame=None, anchor=None):
    out = {
        "g": p.g,
        "n": p.n,
        "divisors": list(p.polarization_divisors),
        "entries": [[e.to_json() for e in row] for row in p.entries],
    }
    if p.base_point_imag is not None:
        out["base_point_imag"] = [[rational_str(x) for x in r] for r in p.base_point_imag]
    if frame is not None:
        out["frame"] = [[rational_str(x) for x in r] for r in frame.frame]
    if anchor is not None:
        out["gauge_anchor"] = [rational_str(a) for a in anchor]
    return out


# -- sections -------------------------------------------------------------

@_guard
def section_from_json(data):
    kind = data["kind"]
    dc = data.get("discrete_class")
    if dc is not None:
        _int_vector(dc, "discrete_class")
    if kind == "translation":
        return SectionCandidate.translation(_int_vector(data["m"], "m"), _int_vector(data["n"], "n"), dc)
    if kind == "general":
        return SectionCandidate.general([FormalSeries.from_json(x) for x in data["lift"]], dc)
    raise SchemaError("unknown section kind %r" % (kind,))


def section_to_json(s):
    out = {"kind": s.kind}
    if s.kind == "translation":
        out["m"], out["n"] = list(s.m), list(s.n)
    else:
        out["lift"] = [x.to_json() for x in s.lift]
    if s.discrete_class is not None:
        out["discrete_class"] = list(s.discrete_class)
    return out


# -- cubic forms ----------------------------------------------------------

def tensor_from_polynomial(g, terms):
    """Symmetric tensor ``c`` with ``sum c_ijk x_i x_j x_k`` equal to the given cubic form."""
    from itertools import permutations

    t = [[[Fraction(0)] * g for _ in range(g)] for _ in range(g)]
    for exp, coef in terms:
        if len(exp) != g or sum(exp) != 3 or any(e < 0 for e in exp):
            raise SchemaError("cubic term %r is not a degree-3 monomial in %d variables" % (exp, g))
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        perms = set(permutations(idx))
        for a, b, c in perms:
            t[a][b][c] += coef / len(perms)
    return t


@_guard
def cubic_file_from_json(data):
    """``{"g", "tensor" | "polynomial", "degrees"?, "quadrics"?}`` -> (tensor, degrees, quadrics)."""
    g = data["g"]
    if "tensor" in data:
        t = data["tensor"]
        if len(t) != g or any(len(pl) != g or any(len(r) != g for r in pl) for pl in t):
            raise SchemaError("tensor must be %dx%dx%d" % (g, g, g))
        tensor = [[[_rational(x, "tensor") for x in r] for r in pl] for pl in t]
    elif "polynomial" in data:
        terms = [(tuple(_int_vector(term["exp"], "exp")), _rational(term["coef"], "coef"))
                 for term in data["polynomial"]]
        tensor = tensor_from_polynomial(g, terms)
    else:
        raise SchemaError("cubic file needs 'tensor' or 'polynomial'")
    degrees = _int_vector(data.get("degrees", [2]), "degrees")
    quadrics = [_matrix(q, "quadric") for q in data.get("quadrics", [])]
    return tensor, degrees, quadrics


# -- mirror fixtures --------------------------------------------------------

@_guard
def mirror_config_from_json(data):
    op = data["operator"]
    coeffs = [[_rational(x, "operator coefficient") for x in c] for c in op["coefficients"]]
    if "order" in op and op["order"] != len(coeffs) - 1:
        raise SchemaError("operator order %r does not match %d coefficient polynomials"
                          % (op["order"], len(coeffs)))
    yk = data["algebraic_yukawa"]
    triple = data["classical_triple"]
    if not isinstance(triple, int):
        raise SchemaError("classical_triple must be an integer")
    order = data.get("truncation_order", 12)
    kmax = data.get("kmax")
    return MirrorPipelineConfig(
        operator=PicardFuchsOperator(coeffs),
        yukawa_num=[_rational(x, "yukawa num") for x in yk["num"]],
        yukawa_den=[_rational(x, "yukawa den") for x in yk["den"]],
        classical_triple=triple,
        truncation_order=order,
        kmax=kmax,
        provenance=dict(data.get("provenance", {})),
        name=data.get("name", ""),
    )
