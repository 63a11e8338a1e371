"""One-parameter mirror pipeline at a maximally unipotent point.

Periods come from the Frobenius method for an operator
``sum_j a_j(z) theta^j`` (``theta = z d/dz``).  With
``omega(eps) = sum_m a_m(eps) z^(m+eps)`` and ``a_0 = 1`` the recurrence is

    P_0(m + eps) a_m = - sum_{r>=1} P_r(m - r + eps) a_{m-r}

where ``P_r(theta)`` collects the ``z^r`` coefficients.  Expanding in
``eps`` modulo ``eps^N`` gives the log solutions
``omega_k = sum_{i+j=k} A_j L^i / i!``.

Everything is exact: ``2 pi i`` never appears because ``q`` is defined
multiplicatively, ``q = z exp(omega_1^reg / omega_0)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Tuple

from .errors import NotMaximallyUnipotentError, PipelineError, PreconditionError, StructuralError
from .series import FormalSeries, LogSeries, as_fraction

__all__ = [
    "PicardFuchsOperator",
    "FrobeniusBasis",
    "MirrorMap",
    "MirrorPipelineConfig",
    "CountsResult",
    "frobenius_solve",
    "mirror_map",
    "normalized_yukawa",
    "extract_counts",
    "synthesize_yukawa",
    "action_periods",
    "period_yukawa",
    "twist_gauge",
    "run_pipeline",
]


def _poly(coeffs):
    c = [as_fraction(x) for x in coeffs]
    while len(c) > 1 and not c[-1]:
        c.pop()
    return tuple(c) if c else (Fraction(0),)


@dataclass(frozen=True)
class PicardFuchsOperator:
    """``sum_j coefficients[j](z) * theta^j``; each coefficient is an ascending list in ``z``."""

    coefficients: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        coeffs = tuple(_poly(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise StructuralError("operator must have order >= 1")
        if not any(coeffs[-1]):
            raise StructuralError("leading coefficient a_order(z) is zero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self):
        return len(self.coefficients) - 1

    def theta_polynomials(self):
        """``{r: P_r}`` with ``P_r`` ascending in theta, so the operator is ``sum_r z^r P_r(theta)``."""
        rmax = max(len(c) for c in self.coefficients)
        out = {}
        for r in range(rmax):
            p = [c[r] if r < len(c) else Fraction(0) for c in self.coefficients]
            if any(p):
                out[r] = p
        return out

    def indicial_polynomial(self):
        return [c[0] for c in self.coefficients]

    def indicial_roots(self):
        """Roots of the indicial polynomial at ``z = 0`` as strings, with multiplicity."""
        import sympy

        lam = sympy.Symbol("lambda")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                           for c in reversed(self.indicial_polynomial())], lam)
        if poly.is_zero:
            return []
        roots = sympy.roots(poly, multiple=True)
        if len(roots) < poly.degree():
            roots = [r for r in poly.all_roots()]
        return sorted(str(r) for r in roots)

    def is_maximally_unipotent(self):
        ind = self.indicial_polynomial()
        return all(c == 0 for c in ind[:-1]) and ind[-1] != 0

    def apply(self, w):
        """Apply the operator to a LogSeries (or FormalSeries)."""
        if isinstance(w, FormalSeries):
            w = LogSeries([w])
        out = None
        power = w
        for j, a in enumerate(self.coefficients):
            if j:
                power = power.theta()
            if any(a):
                term = FormalSeries.from_coefficients(a, w.order) * power
                out = term if out is None else out + term
        return out

    @classmethod
    def from_theta_polynomials(cls, polys):
        """Build from ``{r: [P_r coefficients ascending in theta]}``."""
        order = max(len(p) for p in polys.values()) - 1
        rmax = max(polys)
        padded = {r: list(p) + [0] * (order + 1 - len(p)) for r, p in polys.items()}
        zero = [0] * (order + 1)
        return cls([[padded.get(r, zero)[j] for r in range(rmax + 1)] for j in range(order + 1)])


@dataclass(frozen=True)
class FrobeniusBasis:
    """Log solutions ``omega_0, ..., omega_{N-1}``; ``omega_k`` has log degree ``k``."""

    solutions: Tuple[LogSeries, ...]
    truncation_order: int
    operator: Optional[PicardFuchsOperator] = None

    def __post_init__(self):
        sols = tuple(self.solutions)
        if not sols:
            raise StructuralError("empty Frobenius basis")
        for k, w in enumerate(sols):
            if w.log_degree != k:
                raise StructuralError("omega_%d has log degree %d" % (k, w.log_degree))
            if w[k] != sols[0][0].scale(Fraction(1, factorial(k))):
                raise StructuralError("omega_%d does not lead with omega_0 L^%d/%d!" % (k, k, k))
        object.__setattr__(self, "solutions", sols)

    def __getitem__(self, k):
        return self.solutions[k]

    def __len__(self):
        return len(self.solutions)

    @property
    def omega0(self):
        return self.solutions[0][0]


def _eval_shifted(poly, x, eps):
    """``P(x + eps)`` as a series in ``eps``; ``poly`` ascending in theta."""
    arg = eps + x
    acc = FormalSeries.zero(1, eps.order)
    for c in reversed(poly):
        acc = acc * arg + c
    return acc


def frobenius_solve(op, order):
    """Frobenius basis of ``op`` at ``z = 0`` truncated at ``z^order``.

    Raises :class:`NotMaximallyUnipotentError` (carrying the indicial roots)
    unless the indicial polynomial is a multiple of ``lambda^N``.
    """
    if not op.is_maximally_unipotent():
        roots = op.indicial_roots()
        raise NotMaximallyUnipotentError(
            "indicial equation at z=0 is not lambda^%d = 0; roots: %s" % (op.order, ", ".join(roots)), roots)
    N = op.order
    P = op.theta_polynomials()
    eps = FormalSeries.variable(0, 1, N - 1)
    a = [FormalSeries.one(1, N - 1)]
    for m in range(1, order + 1):
        rhs = FormalSeries.zero(1, N - 1)
        for r, pr in P.items():
            if r == 0 or r > m:
                continue
            rhs = rhs - _eval_shifted(pr, m - r, eps) * a[m - r]
        a.append(rhs * _eval_shifted(P[0], m, eps).invert())
    A = [FormalSeries(1, order, {(m,): a[m][(j,)] for m in range(order + 1)}) for j in range(N)]
    sols = []
    for k in range(N):
        base = [A[k - i].scale(Fraction(1, factorial(i))) for i in range(k + 1)]
        sols.append(LogSeries(base))
    return FrobeniusBasis(tuple(sols), order, op)


def twist_gauge(basis, h):
    """Multiply every period by the unit series ``h(z)`` (a change of holomorphic gauge)."""
    if h.constant_term == 0:
        raise PreconditionError("gauge twist must be a unit series")
    sols = []
    for w in basis.solutions:
        sols.append(LogSeries([b * h for b in w.base]))
    return FrobeniusBasis(tuple(sols), min(basis.truncation_order, h.order), basis.operator)


@dataclass(frozen=True)
class MirrorMap:
    t_of_z: LogSeries
    q_of_z: FormalSeries
    z_of_q: FormalSeries


def mirror_map(basis):
    """Special coordinate ``t = omega_1/omega_0`` and ``q = z exp(omega_1^reg/omega_0)`` with its reversion."""
    if len(basis) < 2:
        raise PreconditionError("mirror map needs at least two periods")
    w0 = basis[0]
    w1 = basis[1]
    if w0.log_degree != 0:
        raise PreconditionError("omega_0 must be a plain power series")
    base0 = w0[0]
    if base0.constant_term == 0:
        raise PreconditionError("omega_0 has zero constant term")
    if w1[1] != base0:
        raise PreconditionError("omega_1 must be omega_0 L + regular part")
    inv0 = base0.invert()
    reg = w1[0] * inv0
    t = LogSeries([reg, FormalSeries.one(1, reg.order)])
    z = FormalSeries.variable(0, 1, reg.order)
    q = z * reg.exp()
    return MirrorMap(t, q, q.reversion())


@dataclass
class MirrorPipelineConfig:
    operator: PicardFuchsOperator
    yukawa_num: Tuple[Fraction, ...]
    yukawa_den: Tuple[Fraction, ...]
    classical_triple: int
    truncation_order: int = 12
    kmax: Optional[int] = None
    provenance: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.yukawa_num = _poly(self.yukawa_num)
        self.yukawa_den = _poly(self.yukawa_den)
        if not self.yukawa_den[0]:
            raise StructuralError("denominator of the algebraic Yukawa coupling vanishes at z = 0")
        self.classical_triple = int(self.classical_triple)

    def yukawa_series(self, order):
        num = FormalSeries.from_coefficients(self.yukawa_num, order)
        den = FormalSeries.from_coefficients(self.yukawa_den, order)
        return num * den.invert()


def normalized_yukawa(cfg, basis, maps, yukawa=None):
    """``K(q) = Y(z(q)) omega_0(z(q))^-2 (q dz/dq / z)^3`` in the ``q`` variable.

    ``yukawa`` (a series in ``z``) overrides the configured rational function;
    it is how a rescaled gauge carries its Yukawa coupling.  The result has
    order one below the basis order since ``z/q`` is known one degree less.
    """
    order = maps.z_of_q.order
    Y = cfg.yukawa_series(order) if yukawa is None else yukawa.truncate(order)
    zq = maps.z_of_q
    y_q = Y.compose(zq)
    w0_q = basis.omega0.compose(zq)
    jac = zq.theta().shift_down() * zq.shift_down().invert()
    K = y_q * (w0_q * w0_q).invert() * jac ** 3
    K = K.truncate(order - 1)
    if K.constant_term != cfg.classical_triple:
        raise PipelineError("normalized Yukawa has constant term %s but classical_triple is %d"
                            % (K.constant_term, cfg.classical_triple))
    return K


@dataclass
class CountsResult:
    counts: list
    integral: list
    warnings: list

    def to_json(self):
        return [{"k": k + 1, "n_k": str(n), "integer": ok}
                for k, (n, ok) in enumerate(zip(self.counts, self.integral))]


def extract_counts(K, classical_triple, kmax):
    """Solve ``K - triple = sum_k n_k k^3 q^k / (1 - q^k)`` for ``n_1 .. n_kmax``.

    Non-integral ``n_k`` are flagged in ``warnings`` rather than raised.
    """
    if K.constant_term != classical_triple:
        raise PipelineError("K has constant term %s, expected %s" % (K.constant_term, classical_triple))
    if kmax > K.order:
        raise PreconditionError("kmax=%d exceeds the truncation order %d of K" % (kmax, K.order))
    counts = []
    for m in range(1, kmax + 1):
        acc = K[(m,)]
        for k in range(1, m):
            if m % k == 0:
                acc -= counts[k - 1] * k ** 3
        counts.append(acc / m ** 3)
    integral = [n.denominator == 1 for n in counts]
    warnings = ["n_%d = %s is not an integer" % (k + 1, n) for k, (n, ok) in
                enumerate(zip(counts, integral)) if not ok]
    return CountsResult(counts, integral, warnings)


def synthesize_yukawa(classical_triple, counts, order):
    """``triple + sum_k n_k k^3 q^k/(1-q^k)`` truncated at ``order``."""
    c = {(0,): classical_triple}
    for k, n in enumerate(counts, start=1):
        for d in range(1, order // k + 1):
            c[(k * d,)] = c.get((k * d,), 0) + as_fraction(n) * k ** 3
    return FormalSeries(1, order, c)


def period_yukawa(basis, maps):
    """``(q d/dq)^2 (omega_2/omega_0)`` in ``q``: the Yukawa coupling read off the periods alone.

    Writing ``omega_2/omega_0 = T^2/2 + phi(z)`` with ``T = log q`` this is
    ``1 + theta_q^2 phi(z(q))``.
    """
    if len(basis) < 3:
        raise PreconditionError("need omega_0, omega_1, omega_2")
    inv0 = basis.omega0.invert()
    rho = basis[1][0] * inv0
    b1 = basis[2][1] * inv0
    b0 = basis[2][0] * inv0
    if b1 != rho:
        raise PipelineError("omega_2 log term does not match omega_1; basis is not a Frobenius basis")
    phi = b0 - (rho * rho).scale(Fraction(1, 2))
    phi_q = phi.compose(maps.z_of_q)
    return 1 + phi_q.theta().theta()


def action_periods(basis, maps=None):
    """Periods as action coordinates plus the affine-relation consistency checks.

    ``t = omega_1/omega_0`` is the affine coordinate; ``theta t`` is computed
    both from the split ``L + reg/omega_0`` and by the quotient rule.  When a
    third period is present the dual coordinate ``omega_2/omega_0`` yields the
    period-matrix entry ``p = d(omega_2/omega_0)/dt`` and the cubic ``dp/dt``.
    """
    maps = maps or mirror_map(basis)
    w0 = basis[0]
    w1 = basis[1]
    direct = maps.t_of_z.theta()
    inv0 = basis.omega0.invert()
    quotient = (w0 * w1.theta() - w1 * w0.theta()) * LogSeries([inv0 * inv0])
    report = {
        "periods": [w.to_json() for w in basis.solutions],
        "affine_coordinate": maps.t_of_z.to_json(),
        "quotient_rule_consistent": direct == quotient,
    }
    if len(basis) >= 3:
        c = period_yukawa(basis, maps)
        report["cubic_from_periods"] = c.to_json()
    return report


@dataclass
class MirrorResult:
    config: MirrorPipelineConfig
    basis: FrobeniusBasis
    maps: MirrorMap
    K: FormalSeries
    counts: CountsResult

    def to_json(self, heads=6):
        def head(s, n=heads):
            return s.truncate(min(n, s.order)).to_json()

        return {
            "name": self.config.name,
            "truncation_order": self.basis.truncation_order,
            "omega_heads": [{"log_degree": w.log_degree, "base": [head(b) for b in w.base]}
                            for w in self.basis.solutions],
            "q_of_z": self.maps.q_of_z.to_json(),
            "z_of_q": self.maps.z_of_q.to_json(),
            "K": self.K.to_json(),
            "classical_triple": self.config.classical_triple,
            "counts": self.counts.to_json(),
            "warnings": list(self.counts.warnings),
        }


def run_pipeline(cfg, order=None, kmax=None):
    """Frobenius basis, mirror map, normalized Yukawa and curve counts for one configuration."""
    order = cfg.truncation_order if order is None else order
    basis = frobenius_solve(cfg.operator, order)
    maps = mirror_map(basis)
    K = normalized_yukawa(cfg, basis, maps)
    if kmax is None:
        kmax = cfg.kmax
    if kmax is None:
        # a constant K carries no instanton corrections, hence no counts
        kmax = 0 if K.is_constant() else K.order
    counts = extract_counts(K, cfg.classical_triple, kmax)
    return MirrorResult(cfg, basis, maps, K, counts)
