"""Families of polarized tori given by period-matrix germs.

A :class:`PeriodMap` is the germ at ``u = 0`` of ``u -> Z(u)``, a ``g x g``
matrix of power series in ``n`` base variables.  An :class:`AffineFrame`
``alpha`` identifies ``V*`` with the tangent space of the base; the
directional derivative along frame vector ``k`` is
``D_k = sum_l alpha[l][k] d/du_l``.

The family carries a Lagrangian structure inducing ``alpha`` exactly when
``T[i][j][k] = D_k Z[i][j]`` is a totally symmetric tensor: the cubic.
Its potential ``f`` (with ``D_i D_j f = Z[i][j]``) is the prepotential and
``t_i = D_i f`` are the action variables.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Optional, Tuple

from .errors import ConditionError, PreconditionError, StructuralError
from .linalg import determinant, inverse, is_positive_definite, rref
from .series import FormalSeries, as_fraction
from .verdict import FAIL, PASS

__all__ = [
    "PeriodMap",
    "AffineFrame",
    "CubicData",
    "split_symmetric",
    "check_torus_lagrangian_condition",
    "check_cubic_condition",
    "extract_cubic",
    "integrate_prepotential",
    "action_variables",
    "polar_quadric_span",
    "hessian_period_map",
    "quadric_to_series",
]


def _frac_matrix(rows):
    return tuple(tuple(as_fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class PeriodMap:
    g: int
    n: int
    entries: Tuple[Tuple[FormalSeries, ...], ...]
    polarization_divisors: Tuple[int, ...] = None
    base_point_imag: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    def __post_init__(self):
        g, n = self.g, self.n
        if g < 1 or n < 1:
            raise StructuralError("g and n must be positive")
        entries = tuple(tuple(row) for row in self.entries)
        if len(entries) != g or any(len(row) != g for row in entries):
            raise StructuralError("entries must form a %dx%d matrix" % (g, g))
        orders = set()
        for row in entries:
            for e in row:
                if not isinstance(e, FormalSeries):
                    raise StructuralError("entries must be FormalSeries")
                if e.num_vars != n:
                    raise StructuralError("entry has %d variables, expected n=%d" % (e.num_vars, n))
                orders.add(e.order)
        if len(orders) != 1:
            raise StructuralError("entries must share a truncation order, got %s" % sorted(orders))
        object.__setattr__(self, "entries", entries)

        divisors = self.polarization_divisors
        divisors = tuple([1] * g) if divisors is None else tuple(int(d) for d in divisors)
        if len(divisors) != g or any(d < 1 for d in divisors):
            raise StructuralError("need %d positive polarization divisors" % g)
        if any(divisors[i + 1] % divisors[i] for i in range(g - 1)):
            raise StructuralError("polarization divisors must satisfy d1 | d2 | ... | dg")
        object.__setattr__(self, "polarization_divisors", divisors)

        if self.base_point_imag is not None:
            im = _frac_matrix(self.base_point_imag)
            if len(im) != g or any(len(r) != g for r in im):
                raise StructuralError("base_point_imag must be %dx%d" % (g, g))
            if any(im[i][j] != im[j][i] for i in range(g) for j in range(g)):
                raise StructuralError("base_point_imag must be symmetric")
            object.__setattr__(self, "base_point_imag", im)

    @property
    def order(self):
        return self.entries[0][0].order

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_symmetric(self):
        return all(self.entries[i][j] == self.entries[j][i]
                   for i in range(self.g) for j in range(i + 1, self.g))

    def transpose(self):
        return self.replace_entries([[self.entries[j][i] for j in range(self.g)] for i in range(self.g)])

    def replace_entries(self, entries, base_point_imag="keep"):
        bpi = self.base_point_imag if base_point_imag == "keep" else base_point_imag
        return PeriodMap(self.g, self.n, entries, self.polarization_divisors, bpi)

    def truncate(self, order):
        return self.replace_entries([[e.truncate(order) for e in row] for row in self.entries])

    def siegel_positive(self):
        """Whether the recorded ``Im Z(0)`` is positive definite; None when not recorded."""
        if self.base_point_imag is None:
            return None
        return is_positive_definite(self.base_point_imag)


@dataclass(frozen=True)
class AffineFrame:
    """``n x g`` rational matrix; column ``k`` is the base vector field paired with ``e_k*``."""

    frame: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = _frac_matrix(self.frame)
        if not m or not m[0] or any(len(r) != len(m[0]) for r in m):
            raise StructuralError("frame must be a non-empty rectangular matrix")
        object.__setattr__(self, "frame", m)

    @classmethod
    def identity(cls, g):
        return cls([[int(i == j) for j in range(g)] for i in range(g)])

    @property
    def shape(self):
        return len(self.frame), len(self.frame[0])

    def inverse(self):
        return inverse([list(r) for r in self.frame])

    def directional(self, s, k):
        """``D_k s = sum_l frame[l][k] ds/du_l``."""
        out = None
        for l, row in enumerate(self.frame):
            if row[k]:
                term = s.diff(l).scale(row[k])
                out = term if out is None else out + term
        if out is None:
            out = FormalSeries.zero(s.num_vars, max(s.order - 1, 0))
        return out


def resolve_frame(p, alpha=None):
    """Validated square frame for ``p``; identity by default (which needs ``n == g``)."""
    if alpha is None:
        if p.n != p.g:
            raise StructuralError("no affine frame given and n=%d != g=%d" % (p.n, p.g))
        return AffineFrame.identity(p.g)
    if not isinstance(alpha, AffineFrame):
        alpha = AffineFrame(alpha)
    rows, cols = alpha.shape
    if (rows, cols) != (p.n, p.g):
        raise StructuralError("frame is %dx%d, expected n x g = %dx%d" % (rows, cols, p.n, p.g))
    if rows != cols:
        raise StructuralError("non-square frame rejected: the frame must be an isomorphism")
    if determinant([list(r) for r in alpha.frame]) == 0:
        raise StructuralError("frame is not of full rank")
    return alpha


@dataclass(frozen=True)
class CubicData:
    tensor: Tuple[Tuple[Tuple[FormalSeries, ...], ...], ...]
    prepotential: Optional[FormalSeries] = None
    frame: Optional["AffineFrame"] = None

    def __post_init__(self):
        t = tuple(tuple(tuple(x) for x in plane) for plane in self.tensor)
        g = len(t)
        if any(len(plane) != g or any(len(r) != g for r in plane) for plane in t):
            raise StructuralError("cubic tensor must be g x g x g")
        object.__setattr__(self, "tensor", t)
        for i, j, k in product(range(g), repeat=3):
            for a, b, c in permutations((i, j, k)):
                if t[a][b][c] != t[i][j][k]:
                    raise StructuralError("cubic tensor is not symmetric at %s" % ((i, j, k),))
        if self.prepotential is not None:
            f = self.prepotential
            frame = self.frame or AffineFrame.identity(f.num_vars)
            for i, j, k in product(range(g), repeat=3):
                third = frame.directional(frame.directional(frame.directional(f, i), j), k)
                if not third.agrees_with(t[i][j][k]):
                    raise StructuralError("third partials of the prepotential differ from the cubic")

    @property
    def g(self):
        return len(self.tensor)

    def contract(self, covector):
        """The ``g x g`` matrix ``sum_k c[i][j][k] * covector[k]``."""
        g = self.g
        out = []
        for i in range(g):
            row = []
            for j in range(g):
                acc = None
                for k in range(g):
                    w = as_fraction(covector[k])
                    if w:
                        term = self.tensor[i][j][k].scale(w)
                        acc = term if acc is None else acc + term
                row.append(acc if acc is not None else self.tensor[i][j][0].scale(0))
            out.append(row)
        return out

    def at(self, point=None):
        """Constant rational tensor obtained by evaluating at a base point (default: origin)."""
        g = self.g
        nv = self.tensor[0][0][0].num_vars
        point = [0] * nv if point is None else point
        return [[[self.tensor[i][j][k].evaluate(point) for k in range(g)] for j in range(g)]
                for i in range(g)]


def hessian_period_map(f, divisors=None, base_point_imag=None):
    """Period map ``Z = Hessian(f)`` (identity frame)."""
    n = f.num_vars
    return PeriodMap(n, n, f.hessian(), divisors, base_point_imag)


def split_symmetric(p):
    """``(p_plus, p_minus)`` with ``p_plus`` symmetric and ``p_minus`` antisymmetric."""
    g = p.g
    half = Fraction(1, 2)
    plus = [[(p[i, j] + p[j, i]).scale(half) for j in range(g)] for i in range(g)]
    minus = [[(p[i, j] - p[j, i]).scale(half) for j in range(g)] for i in range(g)]
    return p.replace_entries(plus), p.replace_entries(minus, base_point_imag=None)


def _t_tensor(p, alpha):
    g = p.g
    return [[[alpha.directional(p[i, j], k) for k in range(g)] for j in range(g)] for i in range(g)]


def _first_difference(a, b):
    keys = set(a.coefficients) | set(b.coefficients)
    for exp in sorted(keys, key=lambda e: (sum(e), tuple(-x for x in e))):
        if a[exp] != b[exp]:
            return exp
    return None


def check_cubic_condition(p, alpha=None):
    """Total symmetry of ``T[i][j][k] = D_k p[i][j]`` as exact series.

    Raises :class:`PreconditionError` for a non-symmetric ``p``; split it
    first with :func:`split_symmetric` or use
    :func:`check_torus_lagrangian_condition`.
    """
    alpha = resolve_frame(p, alpha)
    if not p.is_symmetric():
        raise PreconditionError("period map is not symmetric; use check_torus_lagrangian_condition "
                                "(or split_symmetric) for families of complex tori")
    g = p.g
    T = _t_tensor(p, alpha)
    for i, j, k in product(range(g), repeat=3):
        for a, b, c in sorted(set(permutations((i, j, k)))):
            if T[a][b][c] != T[i][j][k]:
                exp = _first_difference(T[i][j][k], T[a][b][c])
                lhs, rhs = T[i][j][k][exp], T[a][b][c][exp]
                msg = "T%s = %s != T%s = %s at u^%s" % (
                    (i + 1, j + 1, k + 1), lhs, (a + 1, b + 1, c + 1), rhs, list(exp))
                witness = {"triple": [i, j, k], "other": [a, b, c], "exponent": list(exp),
                           "values": [str(lhs), str(rhs)]}
                return FAIL(msg, witness)
    return PASS("dp o alpha is a totally symmetric cubic")


def check_torus_lagrangian_condition(p, alpha=None):
    """Complex-torus version: ``p_minus`` locally constant and ``p_plus`` satisfies the cubic condition."""
    alpha = resolve_frame(p, alpha)
    plus, minus = split_symmetric(p)
    g = p.g
    const_witness = None
    for i in range(g):
        for j in range(g):
            if not minus[i, j].is_constant():
                exp = next(e for e, _ in minus[i, j].terms() if sum(e))
                const_witness = {"entry": [i, j], "exponent": list(exp), "value": str(minus[i, j][exp])}
                break
        if const_witness:
            break
    cubic = check_cubic_condition(plus, alpha)
    details = {"p_minus_constant": const_witness is None, "cubic": cubic.to_json()}
    if const_witness is not None:
        i, j = const_witness["entry"]
        return FAIL("p_minus nonconstant at entry (%d,%d)" % (i + 1, j + 1), const_witness, **details)
    if not cubic:
        return FAIL("p_plus fails the cubic condition: " + cubic.message, cubic.witness, **details)
    return PASS("p_minus constant and p_plus satisfies the cubic condition", **details)


def extract_cubic(p, alpha=None):
    alpha = resolve_frame(p, alpha)
    verdict = check_cubic_condition(p, alpha)
    if not verdict:
        raise ConditionError("cubic condition fails: " + verdict.message, verdict.witness)
    return CubicData(_t_tensor(p, alpha))


def _require_cubic(p, alpha):
    verdict = check_cubic_condition(p, alpha)
    if not verdict:
        raise ConditionError("cubic condition fails: " + verdict.message, verdict.witness)


def _affine_entries(p, alpha):
    # entries as series in the affine coordinates w, where u = alpha w
    m = [list(r) for r in alpha.frame]
    return [[p[i, j].substitute_linear(m) for j in range(p.g)] for i in range(p.g)]


def _to_base(series_w, alpha):
    return series_w.substitute_linear(alpha.inverse())


def integrate_prepotential(p, alpha=None):
    """Prepotential ``f`` with zero affine part and ``D_i D_j f = p[i][j]``.

    Uses Euler's identity on each homogeneous piece: the degree-``k`` part of
    ``f`` is ``sum_ij w_i w_j p_ij^(k-2) / (k (k-1))`` in affine coordinates.
    The returned series has truncation order ``p.order + 2``.
    """
    alpha = resolve_frame(p, alpha)
    _require_cubic(p, alpha)
    g, d = p.g, p.order
    pw = _affine_entries(p, alpha)
    f = FormalSeries.zero(g, d + 2)
    for i in range(g):
        for j in range(g):
            term = pw[i][j].times_variable(i).times_variable(j)
            c = {}
            for exp, v in term.coefficients.items():
                k = sum(exp)
                c[exp] = v / (k * (k - 1))
            f = f + FormalSeries(g, d + 2, c)
    f = _to_base(f, alpha)
    T = _t_tensor(p, alpha)
    return CubicData(T, f, alpha)


def action_variables(p, alpha=None):
    """Action variables ``t_i`` with zero constant term and ``D_j t_i = p[i][j]``."""
    alpha = resolve_frame(p, alpha)
    _require_cubic(p, alpha)
    g, d = p.g, p.order
    pw = _affine_entries(p, alpha)
    out = []
    for i in range(g):
        t = FormalSeries.zero(g, d + 1)
        for j in range(g):
            term = pw[i][j].times_variable(j)
            t = t + FormalSeries(g, d + 1, {e: v / sum(e) for e, v in term.coefficients.items()})
        out.append(_to_base(t, alpha))
    return out


def _sym_vector(q):
    g = len(q)
    return [as_fraction(q[i][j]) for i in range(g) for j in range(i, g)]


def _sym_matrix(vec, g):
    m = [[Fraction(0)] * g for _ in range(g)]
    it = iter(vec)
    for i in range(g):
        for j in range(i, g):
            m[i][j] = m[j][i] = next(it)
    return m


def polar_quadric_span(c, at=None):
    """Basis (reduced echelon form) of the span of the polar quadrics ``c(., ., e_k)``.

    ``c`` is a :class:`CubicData` (evaluated at ``at``, default the origin) or
    a constant nested list.
    """
    const = c.at(at) if isinstance(c, CubicData) else [[[as_fraction(x) for x in r] for r in plane]
                                                       for plane in c]
    g = len(const)
    rows = [_sym_vector([[const[i][j][k] for j in range(g)] for i in range(g)]) for k in range(g)]
    basis, _ = rref(rows)
    return [_sym_matrix(v, g) for v in basis]


def quadric_to_series(q, order=2):
    """The quadratic form ``x^T q x`` as a series."""
    g = len(q)
    coeffs = {}
    for i in range(g):
        for j in range(g):
            exp = tuple((i == a) + (j == a) for a in range(g))
            coeffs[exp] = coeffs.get(exp, 0) + as_fraction(q[i][j])
    return FormalSeries(g, order, coeffs)
