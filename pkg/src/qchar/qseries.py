"""Exact truncated Laurent series on the half-integer exponent lattice.

Everything in this package lives on the lattice (1/2)Z: exponents are stored
as integers in "u-units" where u^2 = q, so the q-exponent of a stored
exponent e is e/2. Coefficients are arbitrary-precision Python ints.

A QSeries claims its coefficients exactly on the window [min_exp, order):
`order` is an honest truncation contract, never a guess. Operations compute
the largest order they can guarantee from their inputs' contracts.
"""

from bisect import bisect_left
from functools import lru_cache

from .errors import (
    InsufficientOrder,
    InvalidParameter,
    NonUnitLeadingCoefficient,
    OutOfWindow,
    ZeroSeries,
)


def half_exp_str(u_exp: int) -> str:
    """Render a u-exponent as a q-exponent: even -> integer, odd -> n/2."""
    if u_exp % 2 == 0:
        return str(u_exp // 2)
    return f"{u_exp}/2"


class QSeries:
    """Immutable truncated Laurent series in u (u^2 = q).

    coeffs[t] is the coefficient of u^(min_exp + t); len(coeffs) is exactly
    order - min_exp. Canonical form: a nonzero series has coeffs[0] != 0,
    the zero series has min_exp == order and empty coeffs.
    """

    __slots__ = ("min_exp", "order", "coeffs")

    def __init__(self, min_exp: int, order: int, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > order - min_exp:
            raise InvalidParameter("coefficients exceed the claimed window")
        coeffs.extend([0] * (order - min_exp - len(coeffs)))
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        if lead == len(coeffs):
            min_exp = order
            coeffs = []
        elif lead:
            min_exp += lead
            coeffs = coeffs[lead:]
        object.__setattr__(self, "min_exp", min_exp)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls(order, order, ())

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, u_exp: int, order: int, coeff: int = 1) -> "QSeries":
        if u_exp >= order:
            return cls.zero(order)
        return cls(u_exp, order, (coeff,))

    @classmethod
    def from_terms(cls, terms, order: int) -> "QSeries":
        """Build from {u_exp: coeff} or (u_exp, coeff) pairs; exponents at or
        beyond `order` are dropped (they are outside the claim)."""
        if isinstance(terms, dict):
            terms = terms.items()
        terms = [(e, c) for e, c in terms if c and e < order]
        if not terms:
            return cls.zero(order)
        lo = min(e for e, _ in terms)
        buf = [0] * (order - lo)
        for e, c in terms:
            buf[e - lo] += c
        return cls(lo, order, buf)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, u_exp: int) -> int:
        if u_exp >= self.order:
            raise OutOfWindow(
                f"exponent u^{u_exp} is beyond the guaranteed order u^{self.order}"
            )
        if u_exp < self.min_exp:
            return 0
        return self.coeffs[u_exp - self.min_exp]

    def q_coeff(self, n: int) -> int:
        return self.coeff(2 * n)

    def items(self):
        """Nonzero (u_exp, coeff) pairs in increasing exponent order."""
        base = self.min_exp
        return [(base + t, c) for t, c in enumerate(self.coeffs) if c]

    def first_diff(self, other: "QSeries"):
        """Smallest exponent below both orders where the two differ, or None."""
        through = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp, through)
        for e in range(lo, through):
            if self._at(e) != other._at(e):
                return e
        return None

    def _at(self, e: int) -> int:
        t = e - self.min_exp
        if t < 0 or t >= len(self.coeffs):
            return 0
        return self.coeffs[t]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(0, self.order, other) if other else QSeries.zero(self.order)
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp, order)
        buf = [0] * (order - lo)
        for t, c in enumerate(self.coeffs):
            e = self.min_exp + t
            if e < order:
                buf[e - lo] += c
        for t, c in enumerate(other.coeffs):
            e = other.min_exp + t
            if e < order:
                buf[e - lo] += c
        return QSeries(lo, order, buf)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.min_exp, self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(0, self.order, other) if other else QSeries.zero(self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return QSeries.zero(self.order)
            return QSeries(self.min_exp, self.order, [other * c for c in self.coeffs])
        lo = self.min_exp + other.min_exp
        order = min(self.min_exp + other.order, other.min_exp + self.order)
        n = order - lo
        if n <= 0:
            return QSeries.zero(order)
        a_items = [(t, c) for t, c in enumerate(self.coeffs) if c]
        b_items = [(t, c) for t, c in enumerate(other.coeffs) if c]
        if len(b_items) > len(a_items):
            a_items, b_items = b_items, a_items
        b_exps = [t for t, _ in b_items]
        b_cs = [c for _, c in b_items]
        buf = [0] * n
        for ta, ca in a_items:
            lim = n - ta
            if lim <= 0:
                break
            for i in range(bisect_left(b_exps, lim)):
                buf[ta + b_exps[i]] += ca * b_cs[i]
        return QSeries(lo, order, buf)

    __rmul__ = __mul__

    def invert(self) -> "QSeries":
        """Multiplicative inverse; needs lowest coefficient +-1.

        The result claims the same window length: min_exp flips sign and
        order becomes order - 2*min_exp.
        """
        if self.is_zero():
            raise ZeroSeries("cannot invert the zero series")
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise NonUnitLeadingCoefficient(f"lowest coefficient {c0} is not a unit")
        n = self.order - self.min_exp
        a_items = [(t, c) for t, c in enumerate(self.coeffs) if t and c]
        buf = [0] * n
        buf[0] = c0
        for t in range(1, n):
            s = 0
            for k, c in a_items:
                if k > t:
                    break
                s += c * buf[t - k]
            if s:
                buf[t] = -c0 * s
        return QSeries(-self.min_exp, self.order - 2 * self.min_exp, buf)

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            # exact 1; claim at least something renderable
            return QSeries.one(max(self.order - 2 * self.min_exp, 1))
        acc = self
        for _ in range(n - 1):
            acc = acc * self
        return acc

    def __truediv__(self, other: "QSeries") -> "QSeries":
        return self * other.invert()

    def shifted(self, du: int) -> "QSeries":
        """Multiply by u^du (exact monomial shift)."""
        out = QSeries.__new__(QSeries)
        object.__setattr__(out, "min_exp", self.min_exp + du)
        object.__setattr__(out, "order", self.order + du)
        object.__setattr__(out, "coeffs", self.coeffs)
        return out

    def restricted(self, order: int) -> "QSeries":
        """Lower the claimed order (never raises it)."""
        if order > self.order:
            raise InsufficientOrder(
                f"cannot extend claim from u^{self.order} to u^{order}"
            )
        if order == self.order:
            return self
        if order <= self.min_exp:
            return QSeries.zero(order)
        return QSeries(self.min_exp, order, self.coeffs[: order - self.min_exp])

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.min_exp == other.min_exp
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.min_exp, self.order, self.coeffs))

    def __repr__(self):
        terms = self.items()
        shown = " + ".join(f"{c}*u^{e}" for e, c in terms[:6])
        if len(terms) > 6:
            shown += " + ..."
        return f"QSeries({shown or '0'}; order u^{self.order})"

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "denom": 2,
            "min_u_exp": self.min_exp,
            "order_u": self.order,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "QSeries":
        if d.get("denom") != 2:
            raise InvalidParameter("unsupported exponent denominator")
        return cls(int(d["min_u_exp"]), int(d["order_u"]), [int(c) for c in d["coeffs"]])


def format_series(qs: QSeries) -> str:
    """One term per line, 'c · q^{e}', sorted by exponent."""
    lines = [f"{c} · q^{{{half_exp_str(e)}}}" for e, c in qs.items()]
    if not lines:
        lines = ["0"]
    return "\n".join(lines)


# -- classical building blocks ----------------------------------------------
#
# The in-place update loops below multiply an array by (1 +- u^g): iterate
# downward so each source cell is read before it is overwritten.


@lru_cache(maxsize=None)
def euler_phi(j: int, order: int) -> QSeries:
    """prod_{i>=1} (1 - q^{ji}) truncated below u^order."""
    if j < 1:
        raise InvalidParameter("euler_phi needs j >= 1")
    n = order
    if n <= 0:
        return QSeries.zero(order)
    c = [0] * n
    c[0] = 1
    i = 1
    while 2 * j * i < n:
        g = 2 * j * i
        for t in range(n - 1, g - 1, -1):
            s = c[t - g]
            if s:
                c[t] -= s
        i += 1
    return QSeries(0, n, c)


@lru_cache(maxsize=None)
def dist_product(j: int, order: int) -> QSeries:
    """prod_{i>=1} (1 + q^{ji}) truncated below u^order."""
    if j < 1:
        raise InvalidParameter("dist_product needs j >= 1")
    n = order
    if n <= 0:
        return QSeries.zero(order)
    c = [0] * n
    c[0] = 1
    i = 1
    while 2 * j * i < n:
        g = 2 * j * i
        for t in range(n - 1, g - 1, -1):
            s = c[t - g]
            if s:
                c[t] += s
        i += 1
    return QSeries(0, n, c)


def pochhammer(j: int, n_factors: int, order: int) -> QSeries:
    """Finite product prod_{i=1..n} (1 - q^{ji}) truncated below u^order."""
    if j < 1 or n_factors < 0:
        raise InvalidParameter("pochhammer needs j >= 1 and n >= 0")
    n = order
    if n <= 0:
        return QSeries.zero(order)
    c = [0] * n
    c[0] = 1
    for i in range(1, n_factors + 1):
        g = 2 * j * i
        if g >= n:
            break
        for t in range(n - 1, g - 1, -1):
            s = c[t - g]
            if s:
                c[t] -= s
    return QSeries(0, n, c)


@lru_cache(maxsize=None)
def gauss_sum(order: int) -> QSeries:
    """sum_{p>=0} q^{p(p+1)/2}: coefficient 1 at the triangular exponents."""
    terms = {}
    p = 0
    while p * (p + 1) < order:
        terms[p * (p + 1)] = 1
        p += 1
    return QSeries.from_terms(terms, order)


@lru_cache(maxsize=None)
def inv_euler_phi(j: int, order: int) -> QSeries:
    return euler_phi(j, order).invert()
