"""Isotropy of sections, the normal-function residual, and the Jacobian ring.

The vertical bundle is identified with the cotangent bundle of the base
through the affine frame, so a section with lift ``v(u)`` in ``V`` becomes
the 1-form ``xi`` with ``xi(alpha e_b*) = v_b``.  Its graph is isotropic
for the canonical symplectic form iff ``d xi = 0``.

The gauge scaling acts on the base by the Euler field
``E = sum_l (a_l + u_l) d/du_l`` (``a`` is the gauge anchor, the base point
in homogeneous action coordinates, default the origin).  On the total space
``(u, v)`` the action 1-form is ``sum v_l du_l``, the fiber-linear function
is ``f = sum (a_l + u_l) v_l`` and ``tau = sum v_l du_l - df``.  A section is
a normal function exactly when ``xi - dg`` vanishes, ``g = <xi, E>``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from typing import Optional, Tuple

from .errors import PreconditionError, StructuralError
from .linalg import reduce_vector, rref
from .period import resolve_frame
from .series import FormalSeries, as_fraction
from .verdict import FAIL, PASS

__all__ = [
    "SectionCandidate",
    "JacobianRing",
    "InvariantClass",
    "expand_lift",
    "one_form_xi",
    "is_isotropic",
    "normal_function_residual",
    "check_tau_homogeneity",
    "jacobian_ring",
    "infinitesimal_invariant",
    "lift_quadric",
]


@dataclass(frozen=True)
class SectionCandidate:
    """A section of the torus family: a lattice translate ``u -> m + p(u) n`` or a general lift.

    ``discrete_class`` is bookkeeping only (the component of the Deligne
    group the section lives in); ``None`` means the zero class.
    """

    kind: str
    m: Optional[Tuple[int, ...]] = None
    n: Optional[Tuple[int, ...]] = None
    lift: Optional[Tuple[FormalSeries, ...]] = None
    discrete_class: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind == "translation":
            if self.m is None or self.n is None or len(self.m) != len(self.n):
                raise StructuralError("translation sections need integer vectors m and n of equal length")
            object.__setattr__(self, "m", tuple(int(x) for x in self.m))
            object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        elif self.kind == "general":
            if self.lift is not None:
                lift = tuple(self.lift)
                if not lift or any(not isinstance(x, FormalSeries) for x in lift):
                    raise StructuralError("lift must be a non-empty sequence of FormalSeries")
                object.__setattr__(self, "lift", lift)
        else:
            raise StructuralError("unknown section kind %r" % (self.kind,))
        if self.discrete_class is not None:
            object.__setattr__(self, "discrete_class", tuple(int(x) for x in self.discrete_class))

    @classmethod
    def translation(cls, m, n, discrete_class=None):
        return cls("translation", m=tuple(m), n=tuple(n), discrete_class=discrete_class)

    @classmethod
    def general(cls, lift, discrete_class=None):
        return cls("general", lift=tuple(lift), discrete_class=discrete_class)

    @property
    def class_vector(self):
        return self.discrete_class if self.discrete_class is not None else (0,)


def expand_lift(p, s):
    """Lift of ``s`` in the fixed frame of ``V`` as ``g`` series."""
    g = p.g
    if s.kind == "translation":
        if len(s.m) != g:
            raise StructuralError("section vectors have length %d, expected g=%d" % (len(s.m), g))
        out = []
        for i in range(g):
            acc = FormalSeries.constant(s.m[i], p.n, p.order)
            for j in range(g):
                if s.n[j]:
                    acc = acc + p[i, j].scale(s.n[j])
            out.append(acc)
        return out
    if s.lift is None:
        raise PreconditionError("general section has no lift")
    if len(s.lift) != g:
        raise StructuralError("lift has %d components, expected g=%d" % (len(s.lift), g))
    if any(x.num_vars != p.n for x in s.lift):
        raise StructuralError("lift components must be series in the n=%d base variables" % p.n)
    return list(s.lift)


def one_form_xi(p, s, alpha=None):
    """Components ``xi_l`` of the 1-form on the base attached to ``s``."""
    alpha = resolve_frame(p, alpha)
    lift = expand_lift(p, s)
    inv = alpha.inverse()
    g = p.g
    out = []
    for l in range(p.n):
        acc = None
        for i in range(g):
            if inv[i][l]:
                term = lift[i].scale(inv[i][l])
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else lift[0].scale(0))
    return out


def _closedness(xi):
    n = len(xi)
    for j in range(n):
        for k in range(j + 1, n):
            a, b = xi[j].diff(k), xi[k].diff(j)
            if not a.agrees_with(b):
                d = min(a.order, b.order)
                diff = a - b
                exp = next(e for e, _ in diff.terms() if sum(e) <= d)
                return {"pair": [j, k], "exponent": list(exp),
                        "values": [str(a[exp]), str(b[exp])]}
    return None


def is_isotropic(p, s, alpha=None):
    """Whether the graph of ``s`` is isotropic, i.e. ``d xi = 0`` to truncation order."""
    xi = one_form_xi(p, s, alpha)
    w = _closedness(xi)
    # the graph of a section has the dimension of the base; maximality is not claimed
    if w is None:
        return PASS("d xi = 0: section is isotropic", dimension=p.n)
    j, k = w["pair"]
    return FAIL("d xi != 0 at pair (%d,%d): d_%d xi_%d = %s but d_%d xi_%d = %s at u^%s" % (
        j + 1, k + 1, k + 1, j + 1, w["values"][0], j + 1, k + 1, w["values"][1], w["exponent"]), w,
        dimension=p.n)


def _anchor(p, anchor):
    if anchor is None:
        return [Fraction(0)] * p.n
    anchor = [as_fraction(a) for a in anchor]
    if len(anchor) != p.n:
        raise StructuralError("gauge anchor needs %d coordinates" % p.n)
    return anchor


def normal_function_residual(p, s, alpha=None, anchor=None):
    """Components of ``nu^* tau = xi - dg`` with ``g = sum_l (a_l + u_l) xi_l``.

    Component ``b`` equals ``-sum_l (a_l + u_l) d xi_l / du_b``; the vector
    vanishes iff the section satisfies the normal-function equation.
    """
    xi = one_form_xi(p, s, alpha)
    a = _anchor(p, anchor)
    n = p.n
    out = []
    for b in range(n):
        acc = FormalSeries.zero(n, xi[0].order)
        for l in range(n):
            d = xi[l].diff(b)
            acc = acc - d.times_variable(l)
            if a[l]:
                acc = acc - d.scale(a[l])
        out.append(acc)
    return out


# -- the 1-forms tau~, f, tau on the total space --------------------------------

def _total_space(p, anchor):
    n = p.n
    order = max(p.order, 2) + 1
    u = [FormalSeries.variable(l, 2 * n, order) for l in range(n)]
    v = [FormalSeries.variable(n + l, 2 * n, order) for l in range(n)]
    a = _anchor(p, anchor)
    zero = FormalSeries.zero(2 * n, order)
    tau_tilde = [v[l] for l in range(n)] + [zero] * n
    f = zero
    for l in range(n):
        f = f + (u[l] + a[l]) * v[l]
    df = [f.diff(k).with_order(order) for k in range(2 * n)]
    tau = [x - y for x, y in zip(tau_tilde, df)]
    euler = [u[l] + a[l] for l in range(n)] + [zero] * n
    return {"order": order, "u": u, "v": v, "tau_tilde": tau_tilde, "df": df, "tau": tau,
            "euler": euler}


def _d(omega):
    m = len(omega)
    return [[omega[b].diff(a) - omega[a].diff(b) for b in range(m)] for a in range(m)]


def _sigma(n, order):
    # d(sum v_l du_l): component [a][b] of the 2-form
    m = 2 * n
    out = [[FormalSeries.zero(m, order) for _ in range(m)] for _ in range(m)]
    for l in range(n):
        out[n + l][l] = FormalSeries.constant(1, m, order)
        out[l][n + l] = FormalSeries.constant(-1, m, order)
    return out


def _lie(Y, omega):
    m = len(omega)
    out = []
    for b in range(m):
        acc = FormalSeries.zero(m, omega[0].order)
        for a in range(m):
            acc = acc + Y[a] * omega[b].diff(a) + omega[a] * Y[a].diff(b)
        out.append(acc)
    return out


def _contract(Y, two_form):
    m = len(Y)
    return [sum((Y[a] * two_form[a][b] for a in range(m)), FormalSeries.zero(m, Y[0].order))
            for b in range(m)]


def _first_mismatch(lhs, rhs, label):
    for idx, (x, y) in enumerate(zip(lhs, rhs)):
        if isinstance(x, list):
            w = _first_mismatch(x, y, label)
            if w is not None:
                w["component"] = [idx] + w["component"]
                return w
            continue
        if not x.agrees_with(y):
            return {"check": label, "component": [idx],
                    "lhs": x.format(big_o=False), "rhs": y.format(big_o=False)}
    return None


def _lattice_sections(g):
    out = []
    for i in range(g):
        e = [int(i == j) for j in range(g)]
        out.append(SectionCandidate.translation(e, [0] * g))
        out.append(SectionCandidate.translation([0] * g, e))
    out.append(SectionCandidate.translation([1] * g, [1] * g))
    out.append(SectionCandidate.translation([0] * g, [-1] + [1] * (g - 1)))
    return out


def check_tau_homogeneity(p, alpha=None, candidate="tau", anchor=None, sections=None):
    """Structural checks on a 1-form on the total space ``(u, v)``.

    ``candidate`` is ``"tau"`` (the corrected form), ``"tau_tilde"`` (the bare
    action form) or ``"df"``.  Four identities are tested:

    ``exact``         ``d(candidate) = sigma``;
    ``weight``        Lie derivative along the gauge scaling equals the form (weight 1);
    ``contraction``   ``iota_Y sigma = candidate`` for the scaling field ``Y``;
    ``translation``   translating by each lattice section ``s`` changes the form by
                      exactly ``pi^*(nu_s^* tau)``, the pulled-back residual of ``s``.
    """
    alpha = resolve_frame(p, alpha)
    if candidate not in ("tau", "tau_tilde", "df"):
        raise ValueError("unknown candidate %r" % (candidate,))
    n = p.n
    ts = _total_space(p, anchor)
    order = ts["order"]
    omega = ts[candidate]
    Y = ts["euler"]
    sigma = _sigma(n, order)
    checks = {}
    witness = None

    def record(name, w):
        nonlocal witness
        checks[name] = w is None
        if w is not None and witness is None:
            witness = w

    record("exact", _first_mismatch(_d(omega), sigma, "exact"))
    record("weight", _first_mismatch(_lie(Y, omega), omega, "weight"))
    record("contraction", _first_mismatch(_contract(Y, sigma), omega, "contraction"))

    positions = list(range(n))
    translation_w = None
    for s in sections if sections is not None else _lattice_sections(p.g):
        xi = [x.embed(2 * n, positions) for x in one_form_xi(p, s, alpha)]
        images = ts["u"] + [ts["v"][l] + xi[l] for l in range(n)]
        moved = [c.substitute(images) for c in omega]
        # pullback of a 1-form under (u, v) -> (u, v + xi(u))
        pulled = []
        for b in range(2 * n):
            acc = moved[b]
            if b < n:
                for l in range(n):
                    acc = acc + moved[n + l] * xi[l].diff(b)
            pulled.append(acc)
        change = [x - y for x, y in zip(pulled, omega)]
        res = [r.embed(2 * n, positions) for r in normal_function_residual(p, s, alpha, anchor)]
        expected = res + [FormalSeries.zero(2 * n, order)] * n
        w = _first_mismatch(change, expected, "translation")
        if w is not None:
            w["section"] = {"m": list(s.m), "n": list(s.n)}
            translation_w = w
            break
    record("translation", translation_w)

    if all(checks.values()):
        return PASS("%s: d = sigma, weight 1 under the gauge scaling, descends" % candidate,
                    checks=checks)
    failed = [k for k, ok in checks.items() if not ok]
    return FAIL("%s fails: %s" % (candidate, ", ".join(failed)), witness, checks=checks)


# -- Jacobian ring of a cubic ---------------------------------------------------

def _monomial_basis(g, d):
    """Degree-``d`` exponents in descending lexicographic order (x1^d first)."""
    out = []
    for combo in combinations_with_replacement(range(g), d):
        e = [0] * g
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _check_symmetric_tensor(c):
    g = len(c)
    t = [[[as_fraction(x) for x in row] for row in plane] for plane in c]
    if any(len(plane) != g or any(len(r) != g for r in plane) for plane in t):
        raise StructuralError("cubic must be a g x g x g tensor")
    for i, j, k in product(range(g), repeat=3):
        for a, b, cc in permutations((i, j, k)):
            if t[a][b][cc] != t[i][j][k]:
                raise PreconditionError("cubic tensor is not symmetric at (%d,%d,%d)" % (i + 1, j + 1, k + 1))
    return t


def cubic_partials(c):
    """The partial-derivative quadrics of ``c(x) = sum c_ijk x_i x_j x_k`` as ``{exp: coef}``."""
    g = len(c)
    out = []
    for i in range(g):
        poly = {}
        for j in range(g):
            for k in range(g):
                if c[i][j][k]:
                    e = [0] * g
                    e[j] += 1
                    e[k] += 1
                    e = tuple(e)
                    poly[e] = poly.get(e, 0) + 3 * c[i][j][k]
        out.append({e: v for e, v in poly.items() if v})
    return out


@dataclass
class GradedPiece:
    degree: int
    monomials: list
    ideal_rows: list
    ideal_pivots: list
    quotient_monomials: list

    @property
    def dim_S(self):
        return len(self.monomials)

    @property
    def dim_J(self):
        return len(self.ideal_pivots)

    @property
    def dim_R(self):
        return len(self.quotient_monomials)


@dataclass
class JacobianRing:
    g: int
    cubic: list
    pieces: dict = field(default_factory=dict)

    def piece(self, d):
        if d not in self.pieces:
            self.pieces[d] = _graded_piece(self.g, self.cubic, d)
        return self.pieces[d]

    def dims(self, d):
        pc = self.piece(d)
        return {"S": pc.dim_S, "J": pc.dim_J, "R": pc.dim_R}

    def quotient_basis(self, d):
        return list(self.piece(d).quotient_monomials)

    def reduce(self, poly, d):
        """Coordinates of the class of a degree-``d`` polynomial ``{exp: coef}`` in ``R^d``."""
        pc = self.piece(d)
        index = {m: i for i, m in enumerate(pc.monomials)}
        vec = [Fraction(0)] * len(pc.monomials)
        for e, v in poly.items():
            e = tuple(e)
            if e not in index:
                raise StructuralError("monomial %r is not of degree %d in %d variables" % (e, d, self.g))
            vec[index[e]] += as_fraction(v)
        rem = reduce_vector(pc.ideal_rows, pc.ideal_pivots, vec)
        return [rem[index[m]] for m in pc.quotient_monomials]

    def in_ideal(self, poly, d):
        return not any(self.reduce(poly, d))


def _graded_piece(g, c, d):
    monos = _monomial_basis(g, d)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    if d >= 2:
        for mult in _monomial_basis(g, d - 2):
            for q in cubic_partials(c):
                vec = [Fraction(0)] * len(monos)
                for e, v in q.items():
                    vec[index[tuple(a + b for a, b in zip(e, mult))]] += v
                if any(vec):
                    rows.append(vec)
    echelon, pivots = rref(rows) if rows else ([], [])
    pivot_set = set(pivots)
    quotient = [m for i, m in enumerate(monos) if i not in pivot_set]
    return GradedPiece(d, monos, echelon, pivots, quotient)


def jacobian_ring(c, degrees=(2,)):
    """Graded pieces ``R^d = S^d / J^d`` for the requested degrees.

    ``J`` is generated by the partials of ``c``; the quotient basis consists of
    the monomials that are not leading terms of the reduced ideal basis.
    """
    t = _check_symmetric_tensor(c)
    ring = JacobianRing(len(t), t)
    for d in degrees:
        if d < 0:
            raise ValueError("degrees must be non-negative")
        ring.piece(d)
    return ring


@dataclass(frozen=True)
class InvariantClass:
    coordinates: tuple
    basis: tuple

    @property
    def is_zero(self):
        return not any(self.coordinates)

    def to_json(self):
        return {"coordinates": [str(x) for x in self.coordinates],
                "basis": [list(m) for m in self.basis], "zero": self.is_zero}


def quadric_polynomial(q):
    g = len(q)
    poly = {}
    for i in range(g):
        for j in range(g):
            v = as_fraction(q[i][j])
            if v:
                e = [0] * g
                e[i] += 1
                e[j] += 1
                e = tuple(e)
                poly[e] = poly.get(e, 0) + v
    return poly


def infinitesimal_invariant(c, q, ring=None):
    """Class of the quadric ``x^T q x`` in ``R^2``; zero iff ``q`` lies in the span of the partials."""
    t = _check_symmetric_tensor(c)
    g = len(t)
    q = [[as_fraction(x) for x in row] for row in q]
    if len(q) != g or any(len(r) != g for r in q):
        raise StructuralError("quadric must be %dx%d" % (g, g))
    if any(q[i][j] != q[j][i] for i in range(g) for j in range(g)):
        raise PreconditionError("derivative of a normal-function lift must be symmetric "
                                "(normal functions are Lagrangian); got an asymmetric quadric")
    ring = ring or jacobian_ring(t, (2,))
    coords = ring.reduce(quadric_polynomial(q), 2)
    return InvariantClass(tuple(coords), tuple(ring.quotient_basis(2)))


def lift_quadric(p, s, alpha=None, at=None):
    """``[d xi_a / du_b]`` evaluated at a base point: the quadric fed to :func:`infinitesimal_invariant`."""
    xi = one_form_xi(p, s, alpha)
    point = [0] * p.n if at is None else at
    return [[xi[a].diff(b).evaluate(point) for b in range(p.n)] for a in range(p.n)]
