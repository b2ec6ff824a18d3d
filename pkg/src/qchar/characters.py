"""Principally specialized characters of level-1 modules over affine sl(m|1).

Everything here is exact integer arithmetic on truncated series in
u = q^(1/2); see qseries. The three families of operations:

  * sector_sum / fock_sector_char: alternating lattice sums over a
    charge/energy grid, divided by the free-field denominator.
  * quasiparticle_char: the same characters as a restricted sum over
    quadruples of mode counts, organized as a charge-bucket convolution.
  * basic_char / family_char / sector_closed_form: product closed forms
    for the irreducible characters, plus the recurrence tying sectors
    m-1 apart.

Growth estimates for the basic character live at the bottom; those are
the only floating-point computations in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .errors import InsufficientOrder, InvalidParameter
from .qseries import QSeries, dist_product, euler_phi, gauss_sum, inv_euler_phi


# ---------------------------------------------------------------------------
# domain bookkeeping


@dataclass(frozen=True)
class SpecializationTable:
    """Exponent table of the principal specialization of type (1,...,1,0).

    Records, in u-units, the image q^(e/2) assigned to e^(-beta) for each
    basis weight beta: the fundamental weights eps_1..eps_{m+1} of the
    underlying gl, the simple roots alpha_0..alpha_m, and the null root
    delta. All even simple roots go to q; the odd one goes to 1.
    """

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameter(f"need m >= 2, got {self.m}")

    def eps_u_exp(self, i: int) -> int:
        if not 1 <= i <= self.m + 1:
            raise InvalidParameter(f"eps index {i} outside 1..{self.m + 1}")
        if i == self.m + 1:
            return 0
        return 2 * (self.m - i)

    def alpha_u_exp(self, i: int) -> int:
        if not 0 <= i <= self.m:
            raise InvalidParameter(f"alpha index {i} outside 0..{self.m}")
        return 0 if i == self.m else 2

    def delta_u_exp(self) -> int:
        return 2 * self.m

    def is_consistent(self) -> bool:
        # alpha_0 = delta - eps_1 + eps_{m+1}, alpha_i = eps_i - eps_{i+1}
        if self.alpha_u_exp(0) != self.delta_u_exp() - self.eps_u_exp(1) + self.eps_u_exp(self.m + 1):
            return False
        for i in range(1, self.m + 1):
            if self.alpha_u_exp(i) != self.eps_u_exp(i) - self.eps_u_exp(i + 1):
                return False
        return True


@dataclass(frozen=True)
class ModuleLabel:
    """Highest-weight label for the level-1 modules the identities cover.

    kind is one of "basic" (the vacuum weight), "last_fundamental" (the
    weight indexed m-1, sharing its specialized character with the vacuum),
    "family" (the one-parameter family {k(m-1)+1}*vacuum - k(m-1)*top whose
    characters carry a finite theta-like bracket), and "sector" (the weight
    attached to the charge-s Fock sector).
    """

    m: int
    kind: str
    k: int = 0
    s: int = 0

    _KINDS = ("basic", "last_fundamental", "family", "sector")

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameter(f"need m >= 2, got {self.m}")
        if self.kind not in self._KINDS:
            raise InvalidParameter(f"unknown label kind {self.kind!r}")

    @classmethod
    def basic(cls, m: int) -> "ModuleLabel":
        return cls(m, "basic")

    @classmethod
    def last_fundamental(cls, m: int) -> "ModuleLabel":
        return cls(m, "last_fundamental")

    @classmethod
    def family(cls, m: int, k: int) -> "ModuleLabel":
        return cls(m, "family", k=k)

    @classmethod
    def sector(cls, m: int, s: int) -> "ModuleLabel":
        return cls(m, "sector", s=s)

    def normalized(self) -> "ModuleLabel":
        # k = 0 in the family degenerates to the vacuum label
        if self.kind == "family" and self.k == 0:
            return ModuleLabel.basic(self.m)
        return self

    def specialized_char(self, order: int) -> QSeries:
        lbl = self.normalized()
        if lbl.kind in ("basic", "last_fundamental"):
            return basic_char(lbl.m, order)
        if lbl.kind == "family":
            return family_char(lbl.m, lbl.k, order)
        return fock_sector_char(lbl.m, lbl.s, order)


@dataclass
class IdentityReport:
    """Outcome of one truncated-series identity check."""

    identity: str
    params: dict
    order_u: int
    verdict: str
    first_diff_u_exp: Optional[int] = None
    lhs_coeff: Optional[int] = None
    rhs_coeff: Optional[int] = None
    ms: float = 0.0

    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": dict(self.params),
            "order_u": self.order_u,
            "verdict": self.verdict,
            "first_diff_u_exp": self.first_diff_u_exp,
            "lhs_coeff": None if self.lhs_coeff is None else str(self.lhs_coeff),
            "rhs_coeff": None if self.rhs_coeff is None else str(self.rhs_coeff),
            "ms": self.ms,
        }


def compare_series(identity: str, params: dict, lhs: QSeries, rhs: QSeries,
                   ms: float = 0.0) -> IdentityReport:
    """Compare two series up to their common guaranteed order."""
    order = min(lhs.order, rhs.order)
    e = lhs.first_diff(rhs)
    if e is None:
        return IdentityReport(identity, params, order, "pass", ms=ms)
    return IdentityReport(identity, params, order, "fail",
                          first_diff_u_exp=e,
                          lhs_coeff=lhs.coeff(e), rhs_coeff=rhs.coeff(e),
                          ms=ms)


# ---------------------------------------------------------------------------
# alternating lattice sum over the (a, p) grid


def _lattice_u_exp(m: int, s: int, a: int, p: int) -> int:
    # u-exponent of the (a, p) lattice term: doubled q-exponent
    return (p + s) * (p + s + 1) - s * m + m * a * (a + 1) + 2 * m * a * p


def _scan_quadrant(m: int, s: int, order: int, acc: dict, upper: bool) -> None:
    # upper: a, p >= 0 with sign (-1)^a; lower: a, p <= -1 with sign -(-1)^a.
    # The exponent is a parabola in p opening upward with vertex at
    # 2p = -(2s + 1 + 2am), so each scan may walk through a dip before
    # exponents clear the truncation order.
    a = 0 if upper else -1
    step = 1 if upper else -1
    while True:
        v2 = -(2 * s + 1 + 2 * a * m)  # twice the p-vertex
        lo = v2 // 2
        best = None
        for p in (lo, lo + 1):
            p = max(p, 0) if upper else min(p, -1)
            e = _lattice_u_exp(m, s, a, p)
            best = e if best is None else min(best, e)
        if best >= order:
            # once the vertex has left the quadrant the row minimum is
            # monotone in |a|, so nothing further can re-enter the window
            settled = (v2 <= 0) if upper else (v2 >= -2)
            if settled:
                return
        else:
            sign = 1 if a % 2 == 0 else -1
            if not upper:
                sign = -sign
            p = 0 if upper else -1
            while True:
                e = _lattice_u_exp(m, s, a, p)
                if e < order:
                    acc[e] = acc.get(e, 0) + sign
                elif (2 * p >= v2) if upper else (2 * p <= v2):
                    break
                p += step
        a += step


def sector_sum(m: int, s: int, order: int) -> QSeries:
    """Alternating sum over the charge/energy lattice for sector s.

    Every lattice point whose u-exponent falls below order is included;
    the two quadrants (both coordinates >= 0, both < 0) enter with
    opposite overall sign.
    """
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    acc: dict = {}
    _scan_quadrant(m, s, order, acc, upper=True)
    _scan_quadrant(m, s, order, acc, upper=False)
    return QSeries.from_terms(acc, order)


def fock_sector_char(m: int, s: int, order: int) -> QSeries:
    """Specialized character of the charge-s Fock sector.

    The lattice sum divided by one neutral free-fermion-pair factor and
    two boson-pair factors. The result can start at a negative u-exponent
    for s > 0, so the inverse factors are built with enough extra order
    to keep the product honest down to the requested claim.
    """
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    h = sector_sum(m, s, order)
    if h.is_zero():
        return QSeries.zero(order)
    pad = max(0, -h.min_exp)
    inv1 = inv_euler_phi(1, order + pad)
    invm = inv_euler_phi(m, order + pad)
    out = ((h * inv1) * invm) * invm
    if out.order > order:
        out = out.restricted(order)
    return out


def sector_pair_product(m: int, order: int) -> QSeries:
    """Product side shared by the mirror pair of sector characters:
    2 * (dist product)^2 / phi(q^m)^2."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if order <= 0:
        return QSeries.zero(order)
    d = dist_product(1, order)
    invm = inv_euler_phi(m, order)
    return 2 * ((d * d) * (invm * invm))


def sector_closed_form(m: int, k: int, order: int) -> QSeries:
    """Closed form of the sector characters at s = (k+1)(m-1) and s = -k(m-1):
    a finite alternating theta-like bracket times (dist product)^2 / phi(q^m)^2,
    shifted by u^(k m (m-1))."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if k < 0:
        raise InvalidParameter(f"need k >= 0, got {k}")
    if order <= 0:
        return QSeries.zero(order)
    step = m * (m - 1)
    bracket = {}
    for j in range(-k, k + 1):
        e = (k * k - j * j) * step
        if e < order:
            sign = 1 if (k - j) % 2 == 0 else -1
            bracket[e] = bracket.get(e, 0) + sign
    br = QSeries.from_terms(bracket, order)
    d = dist_product(1, order)
    invm = inv_euler_phi(m, order)
    out = QSeries.monomial(k * step, order) * (br * ((d * d) * (invm * invm)))
    return out.restricted(order) if out.order > order else out


def recurrence_step(m: int, s: int, fs: QSeries, order: int) -> QSeries:
    """Advance a sector character by m-1 charge units:
    u^(sm) * (sector_pair_product - u^(sm) * fs), claimed at order."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if fs.order < order - 2 * s * m:
        raise InsufficientOrder(
            f"input order {fs.order} cannot support output order {order}")
    pair = sector_pair_product(m, order - s * m)
    diff = pair - fs.shifted(s * m)
    out = diff.shifted(s * m)
    return out.restricted(order) if out.order > order else out


# ---------------------------------------------------------------------------
# quasiparticle sum: charge buckets convolved with boson-pair sums
#
# The quadruple sum over mode counts (a, b, c, d >= 0) with net charge
# a - b + c - d = s factors through the fermionic charge g = a - b:
# collect u^(a(a+1) + b(b-1)) / ((q)_a (q)_b) into a bucket per g, then
# convolve each bucket with the boson-pair sum at complementary charge.
# Buckets live on the even-u lattice, boson pairs on the 2m-u lattice,
# so both are built as compact stride-1 arrays and widened at the end.


def _geometric_inplace(arr: list, stride: int) -> None:
    # multiply by 1/(1 - x^stride) on a compact array
    for i in range(stride, len(arr)):
        arr[i] += arr[i - stride]


def _shift_inplace(arr: list, k: int) -> None:
    if k <= 0:
        return
    n = len(arr)
    arr[k:] = arr[: n - k]
    arr[:k] = [0] * min(k, n)


@lru_cache(maxsize=64)
def _charge_buckets(nu: int):
    """Fermionic-pair generating series split by net charge, below u-order nu.

    Returns a tuple of (charge, QSeries) pairs. Pairs (a, b) enter while
    a(a+1) + b(b-1) < nu; anything omitted starts at or above nu.
    """
    L = (nu + 1) // 2  # compact slot i holds the u^(2i) coefficient
    buckets: dict = {}
    X = [0] * L
    if L > 0:
        X[0] = 1
    a = 0
    while a * (a + 1) < nu:
        if a > 0:
            # u^(a(a+1)) / (q)_a from its predecessor: shift 2a, divide by 1 - q^a
            _shift_inplace(X, a)
            _geometric_inplace(X, a)
        R = X[:]
        b = 0
        while a * (a + 1) + b * (b - 1) < nu:
            if b > 0:
                _shift_inplace(R, b - 1)
                _geometric_inplace(R, b)
            tgt = buckets.setdefault(a - b, [0] * L)
            for i in range(L):
                tgt[i] += R[i]
            b += 1
        a += 1
    out = []
    for g in sorted(buckets):
        out.append((g, QSeries.from_terms({2 * i: v for i, v in enumerate(buckets[g]) if v}, nu)))
    return tuple(out)


@lru_cache(maxsize=256)
def _boson_pair_base(m: int, k: int, nu: int) -> QSeries:
    # sum over t >= 0 of u^(2mt) / ((q^m)_t (q^m)_{t+k}), k >= 0
    span = 2 * m
    L = (nu + span - 1) // span if nu > 0 else 0
    if L <= 0:
        return QSeries.zero(nu)
    R = [0] * L
    R[0] = 1
    for j in range(1, k + 1):
        _geometric_inplace(R, j)
    total = R[:]
    for t in range(1, L):
        _shift_inplace(R, 1)
        _geometric_inplace(R, t)
        _geometric_inplace(R, t + k)
        for i in range(t, L):
            total[i] += R[i]
    return QSeries.from_terms({span * i: v for i, v in enumerate(total) if v}, nu)


def _boson_pair_sum(m: int, e: int, nu: int) -> QSeries:
    # sum over c, d >= 0 with c - d = e of u^(2mc) / ((q^m)_c (q^m)_d)
    if e <= 0:
        return _boson_pair_base(m, -e, nu)
    return _boson_pair_base(m, e, nu - 2 * m * e).shifted(2 * m * e)


def quasiparticle_char(m: int, s: int, order: int) -> QSeries:
    """Sector character as a sum over quadruples of quasiparticle counts.

    Net charge a - b + c - d is pinned to s and the whole sum carries a
    u^(-sm) prefactor. Cutoffs keep every omitted quadruple at or above
    the internal order, which is the claimed order shifted by sm.
    """
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    nu = order + s * m
    if nu <= 0:
        return QSeries.zero(order)
    total = QSeries.zero(nu)
    for g, bucket in _charge_buckets(nu):
        pair = _boson_pair_sum(m, s - g, nu)
        if pair.is_zero():
            continue
        prod = bucket * pair
        total = total + (prod.restricted(nu) if prod.order > nu else prod)
    out = total.shifted(-s * m)
    return out.restricted(order) if out.order > order else out


def vacuum_identity_sides(m: int, order: int):
    """Both sides of the vacuum-sector product identity:
    (dist product)^2 / phi(q^m)^2 versus the charge-0 quasiparticle sum."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if order <= 0:
        z = QSeries.zero(order)
        return z, z
    d = dist_product(1, order)
    invm = inv_euler_phi(m, order)
    lhs = (d * d) * (invm * invm)
    rhs = quasiparticle_char(m, 0, order)
    return lhs, rhs


# ---------------------------------------------------------------------------
# irreducible characters


def basic_char(m: int, order: int) -> QSeries:
    """Specialized character of the basic module (and of the module at the
    last fundamental weight): (dist product)^2 / phi(q^m)."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if order <= 0:
        return QSeries.zero(order)
    d = dist_product(1, order)
    return (d * d) * inv_euler_phi(m, order)


def family_char(m: int, k: int, order: int) -> QSeries:
    """Specialized character of the k-th member of the one-parameter family:
    finite alternating bracket times (dist product)^2 / phi(q^m)."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if order <= 0:
        return QSeries.zero(order)
    step = m * (m - 1)
    kk = abs(k)
    bracket = {}
    for j in range(-kk, kk + 1):
        e = (k * k - j * j) * step
        if e < order:
            sign = 1 if (k - j) % 2 == 0 else -1
            bracket[e] = bracket.get(e, 0) + sign
    br = QSeries.from_terms(bracket, order)
    d = dist_product(1, order)
    return br * ((d * d) * inv_euler_phi(m, order))


# ---------------------------------------------------------------------------
# coefficient growth


def log_coeff_estimate(m: int, n: int) -> float:
    """Natural log of the predicted n-th q-coefficient of basic_char(m):
    pi*sqrt((2/3)((m+1)/m) n) + log(sqrt(m+1)) - log(8 sqrt(3) n).

    Log-domain on purpose: the raw value overflows a double long before
    the interesting range of n.
    """
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if n < 1:
        raise InvalidParameter(f"need n >= 1, got {n}")
    return (math.pi * math.sqrt((2.0 / 3.0) * ((m + 1) / m) * n)
            + 0.5 * math.log(m + 1)
            - math.log(8.0 * math.sqrt(3.0) * n))


def growth_report(m: int, n_max: int, order: Optional[int] = None):
    """Rows (n, a_n, ratio) for n = 0..n_max, where a_n is the n-th
    q-coefficient of basic_char(m) and ratio = log(a_n) / log_coeff_estimate.
    The n = 0 row carries ratio 0.0 since the estimate starts at n = 1."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if n_max < 0:
        raise InvalidParameter(f"need n_max >= 0, got {n_max}")
    need = 2 * n_max + 1
    if order is None:
        order = need + 1
    if order < need:
        raise InsufficientOrder(f"order {order} cannot reach q^{n_max}")
    ch = basic_char(m, order)
    rows = []
    for n in range(n_max + 1):
        a_n = ch.q_coeff(n)
        if n == 0:
            rows.append((0, a_n, 0.0))
        else:
            rows.append((n, a_n, math.log(a_n) / log_coeff_estimate(m, n)))
    return rows
