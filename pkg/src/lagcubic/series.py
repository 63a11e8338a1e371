"""Truncated multivariate power series with exact rational coefficients.

A :class:`FormalSeries` is a sparse map from exponent tuples to
:class:`fractions.Fraction`, truncated by total degree.  Binary operations
between series of different truncation orders truncate to the smaller one.

:class:`LogSeries` adds a formal symbol ``L`` standing for ``log z`` on top
of univariate series, with ``theta = z d/dz`` acting by
``theta(z^m L^k) = m z^m L^k + k z^m L^(k-1)``.
"""

from fractions import Fraction
import numbers

from .errors import DomainError, NonInvertibleError, NonUnitError, StructuralError

__all__ = [
    "FormalSeries",
    "LogSeries",
    "as_fraction",
    "series_arith",
    "series_invert",
    "series_compose_reversion",
    "series_diff",
    "series_int",
    "exp_log_series",
]


def as_fraction(x):
    """Coerce ints, Fractions and "p/q" strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError("not an exact rational: %r" % (x,))


def _monomials(nvars, degree):
    """All exponent tuples of the given total degree."""
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(nvars - 1, degree - first):
            yield (first,) + rest


def monomials_upto(nvars, order):
    out = []
    for d in range(order + 1):
        out.extend(_monomials(nvars, d))
    return out


class FormalSeries:
    """Immutable truncated power series in ``nvars`` variables.

    ``coefficients`` maps exponent tuples to rationals; absent keys are zero.
    Terms of total degree above ``order`` are discarded on construction.
    """

    __slots__ = ("_nvars", "_order", "_c", "_hash")

    def __init__(self, nvars, order, coefficients=None):
        if not isinstance(nvars, numbers.Integral) or nvars < 1:
            raise StructuralError("num_vars must be a positive integer, got %r" % (nvars,))
        if not isinstance(order, numbers.Integral) or order < 0:
            raise StructuralError("truncation order must be a non-negative integer, got %r" % (order,))
        c = {}
        for exp, val in (coefficients or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise StructuralError("exponent %r has length %d, expected %d" % (exp, len(exp), nvars))
            if any(e < 0 for e in exp):
                raise StructuralError("negative exponent in %r" % (exp,))
            if sum(exp) > order:
                continue
            val = as_fraction(val)
            if val:
                c[exp] = c.get(exp, 0) + val
        self._nvars = int(nvars)
        self._order = int(order)
        self._c = {k: v for k, v in c.items() if v}
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def _raw(cls, nvars, order, c):
        # c must already be normalized
        obj = cls.__new__(cls)
        obj._nvars = nvars
        obj._order = order
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars, order):
        return cls._raw(nvars, order, {})

    @classmethod
    def constant(cls, value, nvars, order):
        value = as_fraction(value)
        return cls._raw(nvars, order, {(0,) * nvars: value} if value else {})

    @classmethod
    def one(cls, nvars, order):
        return cls.constant(1, nvars, order)

    @classmethod
    def variable(cls, index, nvars, order, coefficient=1):
        if not 0 <= index < nvars:
            raise StructuralError("variable index %d out of range for %d variables" % (index, nvars))
        exp = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, order, {exp: coefficient})

    @classmethod
    def from_coefficients(cls, coeffs, order):
        """Univariate series from an ascending coefficient list."""
        return cls(1, order, {(i,): c for i, c in enumerate(coeffs)})

    # -- basic accessors ------------------------------------------------

    @property
    def num_vars(self):
        return self._nvars

    @property
    def order(self):
        return self._order

    @property
    def coefficients(self):
        return dict(self._c)

    def __getitem__(self, exp):
        if isinstance(exp, numbers.Integral):
            exp = (exp,)
        return self._c.get(tuple(exp), Fraction(0))

    def coefficient_list(self):
        """Univariate coefficients ``[a_0, ..., a_order]``."""
        self._require_univariate()
        return [self._c.get((i,), Fraction(0)) for i in range(self._order + 1)]

    def terms(self):
        """(exponent, coefficient) pairs in graded lexicographic order."""
        return sorted(self._c.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    @property
    def constant_term(self):
        return self._c.get((0,) * self._nvars, Fraction(0))

    def is_zero(self):
        return not self._c

    def is_constant(self):
        zero = (0,) * self._nvars
        return all(k == zero for k in self._c)

    def valuation(self):
        """Lowest total degree present, or None for the zero series."""
        if not self._c:
            return None
        return min(sum(k) for k in self._c)

    def homogeneous_part(self, degree):
        return FormalSeries._raw(self._nvars, self._order,
                                 {k: v for k, v in self._c.items() if sum(k) == degree})

    def truncate(self, order):
        order = min(order, self._order)
        return FormalSeries._raw(self._nvars, order,
                                 {k: v for k, v in self._c.items() if sum(k) <= order})

    def with_order(self, order):
        """Reinterpret with a different truncation order (no new terms appear)."""
        return FormalSeries._raw(self._nvars, order,
                                 {k: v for k, v in self._c.items() if sum(k) <= order})

    # -- comparisons ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FormalSeries):
            return (self._nvars == other._nvars and self._order == other._order
                    and self._c == other._c)
        if isinstance(other, (numbers.Rational, Fraction)):
            return self._c == ({(0,) * self._nvars: Fraction(other)} if other else {})
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, self._order, frozenset(self._c.items())))
        return self._hash

    def agrees_with(self, other, order=None):
        """Coefficientwise equality up to ``order`` (default: the common order)."""
        self._check_compatible(other)
        d = min(self._order, other._order) if order is None else order
        a = {k: v for k, v in self._c.items() if sum(k) <= d}
        b = {k: v for k, v in other._c.items() if sum(k) <= d}
        return a == b

    # -- arithmetic -----------------------------------------------------

    def _check_compatible(self, other):
        if other._nvars != self._nvars:
            raise StructuralError("num_vars mismatch: %d vs %d" % (self._nvars, other._nvars))

    def _coerce(self, other):
        if isinstance(other, FormalSeries):
            self._check_compatible(other)
            return other
        if isinstance(other, (numbers.Rational, str)) and not isinstance(other, bool):
            return FormalSeries.constant(other, self._nvars, self._order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = min(self._order, other._order)
        c = {k: v for k, v in self._c.items() if sum(k) <= d}
        for k, v in other._c.items():
            if sum(k) <= d:
                s = c.get(k, 0) + v
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        return FormalSeries._raw(self._nvars, d, c)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries._raw(self._nvars, self._order, {k: -v for k, v in self._c.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, factor):
        factor = as_fraction(factor)
        if not factor:
            return FormalSeries.zero(self._nvars, self._order)
        return FormalSeries._raw(self._nvars, self._order, {k: v * factor for k, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, (numbers.Rational, str)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        self._check_compatible(other)
        d = min(self._order, other._order)
        a = [(k, sum(k), v) for k, v in self._c.items() if sum(k) <= d]
        b = [(k, sum(k), v) for k, v in other._c.items() if sum(k) <= d]
        c = {}
        if self._nvars == 1:
            for (ka,), da, va in a:
                for (kb,), db, vb in b:
                    if da + db <= d:
                        key = (ka + kb,)
                        c[key] = c.get(key, 0) + va * vb
        else:
            for ka, da, va in a:
                for kb, db, vb in b:
                    if da + db <= d:
                        key = tuple(x + y for x, y in zip(ka, kb))
                        c[key] = c.get(key, 0) + va * vb
        return FormalSeries._raw(self._nvars, d, {k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return self * other.invert()
        if isinstance(other, (numbers.Rational, str)) and not isinstance(other, bool):
            return self.scale(1 / as_fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = FormalSeries.one(self._nvars, self._order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self):
        """Multiplicative inverse; requires a nonzero constant term."""
        a0 = self.constant_term
        if not a0:
            raise NonUnitError("series has zero constant term and is not invertible")
        inv0 = 1 / a0
        rest = self - a0
        # each pass fixes one more total degree
        b = FormalSeries.constant(inv0, self._nvars, self._order)
        for _ in range(self._order):
            b = (1 - rest * b).scale(inv0)
        return b

    # -- calculus -------------------------------------------------------

    def _check_var(self, var):
        if not isinstance(var, numbers.Integral) or not 0 <= var < self._nvars:
            raise StructuralError("variable index %r out of range for %d variables" % (var, self._nvars))

    def diff(self, var=0):
        """Partial derivative; the truncation order drops by one."""
        self._check_var(var)
        order = max(self._order - 1, 0)
        c = {}
        for k, v in self._c.items():
            e = k[var]
            if e:
                nk = k[:var] + (e - 1,) + k[var + 1:]
                if sum(nk) <= order:
                    c[nk] = v * e
        if self._order == 0:
            c = {}
        return FormalSeries._raw(self._nvars, order, c)

    def integrate(self, var=0):
        """Antiderivative with zero constant of integration; the order rises by one."""
        self._check_var(var)
        c = {}
        for k, v in self._c.items():
            e = k[var]
            c[k[:var] + (e + 1,) + k[var + 1:]] = v / (e + 1)
        return FormalSeries._raw(self._nvars, self._order + 1, c)

    def times_variable(self, var):
        """Multiply by ``u_var``, raising the truncation order by one (no information lost)."""
        self._check_var(var)
        c = {k[:var] + (k[var] + 1,) + k[var + 1:]: v for k, v in self._c.items()}
        return FormalSeries._raw(self._nvars, self._order + 1, c)

    def gradient(self):
        return [self.diff(i) for i in range(self._nvars)]

    def hessian(self):
        g = self.gradient()
        return [[gi.diff(j) for j in range(self._nvars)] for gi in g]

    def theta(self):
        """Euler operator ``sum_i u_i d/du_i`` (``z d/dz`` for one variable); order preserved."""
        return FormalSeries._raw(self._nvars, self._order,
                                 {k: v * sum(k) for k, v in self._c.items() if sum(k)})

    def shift_down(self):
        """Univariate ``a(z)/z`` for a series with zero constant term; order drops by one."""
        self._require_univariate()
        if self.constant_term:
            raise DomainError("shift_down needs a zero constant term")
        return FormalSeries._raw(1, max(self._order - 1, 0), {(k - 1,): v for (k,), v in self._c.items()})

    def exp(self):
        if self.constant_term:
            raise DomainError("exp requires a zero constant term")
        result = FormalSeries.one(self._nvars, self._order)
        term = result
        for k in range(1, self._order + 1):
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            result = result + term
        return result

    def log(self):
        if self.constant_term != 1:
            raise DomainError("log requires constant term 1, got %s" % self.constant_term)
        x = self - 1
        result = FormalSeries.zero(self._nvars, self._order)
        power = FormalSeries.one(self._nvars, self._order)
        for k in range(1, self._order + 1):
            power = power * x
            if power.is_zero():
                break
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        return result

    # -- substitution -----------------------------------------------------

    def _require_univariate(self):
        if self._nvars != 1:
            raise StructuralError("operation needs a univariate series, got %d variables" % self._nvars)

    def compose(self, inner):
        """``self(inner(t))`` for univariate series; ``inner`` must have zero constant term."""
        self._require_univariate()
        if not isinstance(inner, FormalSeries) or inner.num_vars != 1:
            raise StructuralError("inner series must be univariate")
        if inner.constant_term:
            raise DomainError("inner series must have zero constant term")
        order = min(self._order, inner.order)
        coeffs = self.coefficient_list()[:order + 1]
        inner = inner.truncate(order)
        result = FormalSeries.zero(1, order)
        for a in reversed(coeffs):
            result = result * inner + a
        return result

    def reversion(self):
        """Compositional inverse of a univariate series by Lagrange inversion.

        For ``t = f(z)`` with ``f(0) = 0`` and ``f'(0) != 0`` the coefficients
        of ``z(t)`` are ``[t^n] z = (1/n) [z^(n-1)] (z/f(z))^n``.
        """
        self._require_univariate()
        if self.constant_term:
            raise NonInvertibleError("reversion needs a zero constant term")
        if not self[(1,)]:
            raise NonInvertibleError("reversion needs a nonzero linear coefficient")
        d = self._order
        phi = self.shift_down().invert()
        c = {}
        power = FormalSeries.one(1, phi.order)
        for n in range(1, d + 1):
            power = power * phi
            v = power[(n - 1,)] / n
            if v:
                c[(n,)] = v
        return FormalSeries._raw(1, d, c)

    def substitute_linear(self, matrix):
        """Series in ``w`` obtained by substituting ``u = matrix @ w``.

        ``matrix`` is a ``nvars x m`` nested list of rationals; the result has
        ``m`` variables and the same truncation order.
        """
        rows = [[as_fraction(x) for x in row] for row in matrix]
        if len(rows) != self._nvars:
            raise StructuralError("substitution matrix needs %d rows" % self._nvars)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows) or m < 1:
            raise StructuralError("substitution matrix is ragged or empty")
        order = self._order
        images = [FormalSeries(m, order, {tuple(1 if j == col else 0 for j in range(m)): rows[i][col]
                                          for col in range(m)}) for i in range(self._nvars)]
        result = FormalSeries.zero(m, order)
        cache = {}
        for k, v in self._c.items():
            term = FormalSeries.constant(v, m, order)
            for i, e in enumerate(k):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            result = result + term
        return result

    def substitute(self, images):
        """``self(images[0], ..., images[n-1])`` for series images sharing their variable count.

        Images with nonzero constant terms are allowed since ``self`` is
        treated as the polynomial it stores; the result order is the minimum
        of ``self.order`` and the image orders.
        """
        if len(images) != self._nvars:
            raise StructuralError("need %d images, got %d" % (self._nvars, len(images)))
        m = images[0].num_vars
        if any(im.num_vars != m for im in images):
            raise StructuralError("images must share a variable count")
        order = min([self._order] + [im.order for im in images])
        result = FormalSeries.zero(m, order)
        powers = {}
        for k, v in self._c.items():
            term = FormalSeries.constant(v, m, order)
            for i, e in enumerate(k):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = images[i].truncate(order) ** e
                    term = term * powers[(i, e)]
            result = result + term
        return result

    def embed(self, nvars, positions):
        """Same series viewed in ``nvars`` variables, variable ``i`` becoming ``positions[i]``."""
        c = {}
        for k, v in self._c.items():
            nk = [0] * nvars
            for i, e in enumerate(k):
                nk[positions[i]] = e
            c[tuple(nk)] = v
        return FormalSeries._raw(nvars, self._order, c)

    def evaluate(self, point):
        """Value of the truncated polynomial at a rational point."""
        point = [as_fraction(x) for x in point]
        if len(point) != self._nvars:
            raise StructuralError("point has %d coordinates, expected %d" % (len(point), self._nvars))
        total = Fraction(0)
        for k, v in self._c.items():
            term = v
            for x, e in zip(point, k):
                if e:
                    term *= x ** e
            total += term
        return total

    # -- presentation -----------------------------------------------------

    def _names(self, names=None):
        if names is not None:
            return list(names)
        if self._nvars == 1:
            return ["u"]
        return ["u%d" % (i + 1) for i in range(self._nvars)]

    def format(self, names=None, big_o=True):
        names = self._names(names)
        parts = []
        for k, v in self.terms():
            mono = "*".join(("%s^%d" % (n, e)) if e > 1 else n for n, e in zip(names, k) if e)
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                coef = str(v)
                if "/" in coef:
                    coef = "(%s)" % coef
                parts.append("%s*%s" % (coef, mono))
        s = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        if big_o:
            s += " + O(deg %d)" % (self._order + 1)
        return s

    def __repr__(self):
        return "FormalSeries(%s)" % self.format()

    __str__ = format

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "vars": self._nvars,
            "order": self._order,
            "terms": [{"exp": list(k), "num": str(v.numerator), "den": str(v.denominator)}
                      for k, v in self.terms()],
        }

    @classmethod
    def from_json(cls, data):
        from .errors import SchemaError
        try:
            nvars = data["vars"]
            order = data["order"]
            terms = data["terms"]
            coeffs = {}
            for t in terms:
                num = int(t["num"])
                den = int(t.get("den", "1"))
                if den <= 0:
                    raise SchemaError("denominators must be positive")
                exp = tuple(t["exp"])
                if exp in coeffs:
                    raise SchemaError("duplicate exponent %r" % (exp,))
                if sum(exp) > order:
                    raise SchemaError("term %r exceeds truncation order %d" % (exp, order))
                coeffs[exp] = Fraction(num, den)
            return cls(nvars, order, coeffs)
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError, StructuralError) as exc:
            raise SchemaError("malformed series: %s" % exc) from exc


class LogSeries:
    """``sum_k base[k](z) * L^k`` where ``L`` stands for ``log z``.

    Trailing zero components are dropped, so ``log_degree`` is the highest
    power of ``L`` actually present (0 for the zero series).
    """

    __slots__ = ("base",)

    def __init__(self, base):
        base = list(base)
        if not base:
            raise StructuralError("LogSeries needs at least one component")
        for b in base:
            if not isinstance(b, FormalSeries) or b.num_vars != 1:
                raise StructuralError("LogSeries components must be univariate FormalSeries")
        order = min(b.order for b in base)
        base = [b.truncate(order) for b in base]
        while len(base) > 1 and base[-1].is_zero():
            base.pop()
        self.base = tuple(base)

    @classmethod
    def from_series(cls, s):
        return cls([s])

    @classmethod
    def log_power(cls, k, order):
        """The pure symbol ``L^k``."""
        zero = FormalSeries.zero(1, order)
        return cls([zero] * k + [FormalSeries.one(1, order)])

    @property
    def log_degree(self):
        return len(self.base) - 1

    @property
    def order(self):
        return self.base[0].order

    def __getitem__(self, k):
        if 0 <= k < len(self.base):
            return self.base[k]
        return FormalSeries.zero(1, self.order)

    def is_zero(self):
        return all(b.is_zero() for b in self.base)

    def truncate(self, order):
        return LogSeries([b.truncate(order) for b in self.base])

    def _coerce(self, other):
        if isinstance(other, LogSeries):
            return other
        if isinstance(other, FormalSeries):
            return LogSeries([other])
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            return LogSeries([FormalSeries.constant(other, 1, self.order)])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.base), len(other.base))
        return LogSeries([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return LogSeries([-b for b in self.base])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        out = [FormalSeries.zero(1, order) for _ in range(len(self.base) + len(other.base) - 1)]
        for i, a in enumerate(self.base):
            for j, b in enumerate(other.base):
                out[i + j] = out[i + j] + a * b
        return LogSeries(out)

    __rmul__ = __mul__

    def theta(self):
        """Apply ``z d/dz`` with ``theta L = 1``."""
        out = []
        n = len(self.base)
        for k in range(n):
            term = self.base[k].theta()
            if k + 1 < n:
                term = term + self.base[k + 1].scale(k + 1)
            out.append(term)
        return LogSeries(out)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.base), len(other.base))
        return all(self[k] == other[k] for k in range(n))

    def __hash__(self):
        return hash(self.base)

    def format(self, names=("z",)):
        parts = []
        for k, b in enumerate(self.base):
            if b.is_zero():
                continue
            s = b.format(names=names, big_o=False)
            if k == 0:
                parts.append(s)
            else:
                parts.append("(%s)*L%s" % (s, "^%d" % k if k > 1 else ""))
        return (" + ".join(parts) if parts else "0") + " + O(z^%d)" % (self.order + 1)

    def __repr__(self):
        return "LogSeries(%s)" % self.format()

    def to_json(self):
        return {"log_degree": self.log_degree, "base": [b.to_json() for b in self.base]}


# -- functional surface ----------------------------------------------------

def series_arith(a, b, op):
    """Exact ring arithmetic; ``op`` is one of ``add``, ``sub``, ``mul``."""
    if not isinstance(a, FormalSeries) or not isinstance(b, FormalSeries):
        raise StructuralError("series_arith expects two FormalSeries")
    if a.num_vars != b.num_vars:
        raise StructuralError("num_vars mismatch: %d vs %d" % (a.num_vars, b.num_vars))
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % (op,))


def series_invert(a):
    return a.invert()


def series_compose_reversion(t_of_z):
    return t_of_z.reversion()


def series_diff(a, var=0):
    return a.diff(var)


def series_int(a, var=0):
    return a.integrate(var)


def exp_log_series(a, op):
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise ValueError("unknown op %r" % (op,))

