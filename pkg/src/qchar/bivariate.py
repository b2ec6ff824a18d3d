"""Charge-graded series: Laurent polynomials in a charge variable z whose
coefficients are truncated q-series, plus the three graded product
identities (two-variable Fock character, triple product, inverse-pair
product).

A ChargeSeries claims coefficients only inside its z-window; the window
is a truncation contract, not a statement that anything vanishes
outside. Two soundness fields let products reason about what was NOT
stored: support_exact promises that every unstored row is zero below
the shared order, and min_floor lower-bounds the minimum u-exponent of
every row of the true object, stored or not.

The infinite products are assembled factor by factor, most expensive
factor first. Which charges can matter below the truncation order, and
how far each row can honestly be claimed, both come from exact
min-cost displacement tables over the factors' charge movers (a
fermionic pair moves charge once at a fixed cost, a bosonic pair any
number of times); soundness is the triangle inequality for those
shortest-path costs.
"""

from __future__ import annotations

from typing import Optional

from .errors import InvalidParameter, OutOfWindow, WindowUnderflow
from .qseries import QSeries, inv_euler_phi

_INF = float("inf")


class ChargeSeries:
    """Immutable window of z-rows. rows[i] is the coefficient of
    z^(zmin + i); the shared order is the minimum row order."""

    __slots__ = ("zmin", "zmax", "rows", "order", "support_exact", "min_floor")

    def __init__(self, zmin: int, rows, support_exact: bool = False,
                 min_floor: Optional[int] = None):
        rows = tuple(rows)
        if not rows:
            raise InvalidParameter("a charge series needs at least one row")
        if not all(isinstance(r, QSeries) for r in rows):
            raise InvalidParameter("rows must be QSeries")
        object.__setattr__(self, "zmin", zmin)
        object.__setattr__(self, "zmax", zmin + len(rows) - 1)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "order", min(r.order for r in rows))
        object.__setattr__(self, "support_exact", support_exact)
        object.__setattr__(self, "min_floor", min_floor)

    def __setattr__(self, name, value):
        raise AttributeError("ChargeSeries is immutable")

    def __repr__(self):
        return (f"ChargeSeries(z^{self.zmin}..z^{self.zmax}, "
                f"order u^{self.order})")

    def __eq__(self, other):
        if not isinstance(other, ChargeSeries):
            return NotImplemented
        return self.zmin == other.zmin and self.rows == other.rows

    def __hash__(self):
        return hash((self.zmin, self.rows))

    def window(self):
        return (self.zmin, self.zmax)

    def has_degree(self, d: int) -> bool:
        return self.zmin <= d <= self.zmax

    def row(self, d: int) -> QSeries:
        if not self.has_degree(d):
            raise OutOfWindow(f"z-degree {d} outside window "
                              f"[{self.zmin}, {self.zmax}]")
        return self.rows[d - self.zmin]

    def restrict_window(self, zmin: int, zmax: int,
                        order: Optional[int] = None) -> "ChargeSeries":
        """Narrow the window and optionally the claimed order. Dropping a
        row that is not zero below the surviving order forfeits the exact
        support promise."""
        if zmin < self.zmin or zmax > self.zmax or zmin > zmax:
            raise OutOfWindow(f"[{zmin}, {zmax}] is not inside "
                              f"[{self.zmin}, {self.zmax}]")
        rows = [self.row(d) for d in range(zmin, zmax + 1)]
        if order is not None:
            rows = [r.restricted(order) for r in rows]
        new_order = min(r.order for r in rows)
        flag = self.support_exact
        if flag:
            dropped = [self.row(d) for d in range(self.zmin, zmin)]
            dropped += [self.row(d) for d in range(zmax + 1, self.zmax + 1)]
            flag = all(_zero_below(r, new_order) for r in dropped)
        return ChargeSeries(zmin, rows, support_exact=flag,
                            min_floor=self.min_floor)

    def to_json_dict(self) -> dict:
        return {
            "zmin": self.zmin,
            "zmax": self.zmax,
            "order_u": self.order,
            "rows": {str(d): self.row(d).to_json_dict()
                     for d in range(self.zmin, self.zmax + 1)},
        }

    @classmethod
    def from_json_dict(cls, blob: dict) -> "ChargeSeries":
        zmin, zmax = blob["zmin"], blob["zmax"]
        rows = [QSeries.from_json_dict(blob["rows"][str(d)])
                for d in range(zmin, zmax + 1)]
        # nothing can be assumed about what a serialized window left out
        return cls(zmin, rows, support_exact=False, min_floor=None)


def _zero_below(row: QSeries, order: int) -> bool:
    return row.is_zero() or row.min_exp >= order


def coeff_z(cs: ChargeSeries, s: int) -> QSeries:
    """The z^s row with its q-order contract."""
    return cs.row(s)


def cs_unit(order: int) -> ChargeSeries:
    return ChargeSeries(0, [QSeries.one(order)], support_exact=True,
                        min_floor=0)


# ---------------------------------------------------------------------------
# general product


def cs_mul(a: ChargeSeries, b: ChargeSeries, window=None,
           require_order: Optional[int] = None) -> ChargeSeries:
    """Graded product on the given z-window (default: the full Minkowski
    sum of the input windows).

    Each requested row is the exact convolution of stored rows, claimed
    to the smallest order any contributing pair can guarantee. Pairs
    involving unstored rows contribute through the inputs' soundness
    fields; if neither field can bound such a pair the row has no honest
    claim at all and WindowUnderflow is raised, likewise when a
    require_order is given and some row falls short of it.
    """
    if window is None:
        window = (a.zmin + b.zmin, a.zmax + b.zmax)
    lo, hi = window
    if lo > hi:
        raise InvalidParameter("empty z-window")

    # bound on the min exponent of any unstored row
    alpha = a.order if a.support_exact else a.min_floor
    beta = b.order if b.support_exact else b.min_floor
    if alpha is None or beta is None:
        # splits with both degrees unstored always exist
        raise WindowUnderflow(
            "an input window has no bound on its unstored rows")

    rows = []
    for d in range(lo, hi + 1):
        claims = [alpha + beta]
        terms = None
        out_a = []
        for d1 in range(a.zmin, a.zmax + 1):
            d2 = d - d1
            ra = a.rows[d1 - a.zmin]
            if b.has_degree(d2):
                rb = b.rows[d2 - b.zmin]
                claims.append(min(ra.min_exp + rb.order,
                                  rb.min_exp + ra.order))
                prod = ra * rb
                terms = prod if terms is None else terms + prod
            elif not ra.is_zero():
                out_a.append(ra.min_exp)
        if out_a:
            claims.append(min(out_a) + beta)
        out_b = [b.rows[d2 - b.zmin].min_exp
                 for d2 in range(b.zmin, b.zmax + 1)
                 if not a.has_degree(d - d2)
                 and not b.rows[d2 - b.zmin].is_zero()]
        if out_b:
            claims.append(min(out_b) + alpha)
        od = min(claims)
        if require_order is not None and od < require_order:
            raise WindowUnderflow(
                f"row z^{d} only supports order u^{od}, "
                f"required u^{require_order}")
        rows.append(QSeries.zero(od) if terms is None else terms.restricted(od))

    out_order = min(r.order for r in rows)
    floor = None
    if a.min_floor is not None and b.min_floor is not None:
        floor = a.min_floor + b.min_floor
    flag = False
    if (a.support_exact and b.support_exact and floor is not None
            and lo <= a.zmin + b.zmin and hi >= a.zmax + b.zmax):
        # every split of an unstored result row has an unstored factor
        outside = min(a.order + b.min_floor, b.order + a.min_floor,
                      a.order + b.order)
        flag = outside >= out_order
    return ChargeSeries(lo, rows, support_exact=flag, min_floor=floor)


# ---------------------------------------------------------------------------
# factor assembly
#
# An atom is one factor of a graded product: a small exact ChargeSeries
# plus its charge movers. A mover (step, cost, once) says the factor can
# shift charge by step at u-cost >= cost, a single time if once else
# arbitrarily often.


class _Atom:
    __slots__ = ("series", "movers", "cheapest")

    def __init__(self, series: ChargeSeries, movers):
        self.series = series
        self.movers = tuple(movers)
        self.cheapest = min(c for _, c, _ in movers)


class _CostTable:
    """Exact minimum u-cost to shift net charge by r over a mover pool."""

    __slots__ = ("cap", "cost")

    def __init__(self, cap: int):
        self.cap = cap
        self.cost = [_INF] * (2 * cap + 1)
        self.cost[cap] = 0

    def copy(self) -> "_CostTable":
        t = _CostTable.__new__(_CostTable)
        t.cap = self.cap
        t.cost = self.cost[:]
        return t

    def get(self, r: int):
        if -self.cap <= r <= self.cap:
            return self.cost[r + self.cap]
        return _INF

    def add_mover(self, step: int, cost: int, once: bool) -> None:
        n = 2 * self.cap + 1
        old = self.cost
        if once:
            new = old[:]
            for i in range(n):
                j = i - step
                if 0 <= j < n and old[j] + cost < new[i]:
                    new[i] = old[j] + cost
            self.cost = new
        else:
            idx = range(step, n) if step > 0 else range(n + step - 1, -1, -1)
            for i in idx:
                j = i - step
                if old[j] + cost < old[i]:
                    old[i] = old[j] + cost


def _into_window(table: _CostTable, d: int, lo: int, hi: int):
    # cheapest cost of landing anywhere inside [lo, hi] starting from d;
    # with negative movers in play the nearest target is not always optimal
    return min(table.get(w - d) for w in range(lo, hi + 1))


def _graded_product(atoms, req_lo: int, req_hi: int, order: int,
                    pad: int) -> ChargeSeries:
    """Multiply the atoms, claiming order on the requested window.

    Atoms must be built at order + pad, pad covering the total negative
    u-cost available across all movers. A partial product keeps row z^d
    only while the cheapest way to have built charge d plus the cheapest
    way the unabsorbed factors can pull it back into the requested
    window stays below the claimed order; each kept row is claimed
    exactly as far as the unabsorbed factors can still protect it.
    """
    cap = order + pad + 8
    atoms = sorted(atoms, key=lambda at: at.cheapest)
    # pullback[i]: exact costs over movers of atoms[:i]
    pullback = []
    t = _CostTable(cap)
    for at in atoms:
        pullback.append(t.copy())
        for step, cost, once in at.movers:
            t.add_mover(step, cost, once)
    full = t

    acc = cs_unit(order + pad)
    built = _CostTable(cap)
    for i in range(len(atoms) - 1, -1, -1):
        at = atoms[i]
        for step, cost, once in at.movers:
            built.add_mover(step, cost, once)
        ret = pullback[i]
        keep = [d for d in range(-cap, cap + 1)
                if built.get(d) + _into_window(ret, d, req_lo, req_hi) < order]
        if not keep:
            acc = ChargeSeries(0, [QSeries.zero(order + pad)])
            continue
        w_lo, w_hi = min(keep), max(keep)
        src = at.series
        rows = []
        for d in range(w_lo, w_hi + 1):
            od = min(order - _into_window(ret, d, req_lo, req_hi),
                     order + pad)
            terms = None
            for d2 in range(src.zmin, src.zmax + 1):
                d1 = d - d2
                if acc.has_degree(d1):
                    prod = acc.rows[d1 - acc.zmin] * src.rows[d2 - src.zmin]
                    terms = prod if terms is None else terms + prod
            if terms is None:
                rows.append(QSeries.zero(od))
            elif terms.order < od:
                raise WindowUnderflow(
                    f"assembly row z^{d} claims u^{terms.order} < u^{od}")
            else:
                rows.append(terms.restricted(od))
        acc = ChargeSeries(w_lo, rows)

    # pad to the requested window: charges never kept are zero below order
    rows = []
    for d in range(req_lo, req_hi + 1):
        if acc.has_degree(d):
            rows.append(acc.row(d).restricted(order))
        else:
            rows.append(QSeries.zero(order))
    reachable = [r for r in range(-cap, cap + 1) if full.get(r) < order]
    flag = req_lo <= min(reachable) and max(reachable) <= req_hi
    floor = min(0, min(v for v in full.cost if v < _INF))
    out = ChargeSeries(req_lo, rows, support_exact=flag, min_floor=int(floor))
    if out.order < order:
        raise WindowUnderflow(
            f"assembled window only supports u^{out.order}, wanted u^{order}")
    return out


# ---------------------------------------------------------------------------
# the three graded products


def _neg_budget(m: int) -> int:
    return sum(max(0, m - 2 * k) for k in range(1, m + 1))


def jacobi_triple_sides(order: int, window) -> tuple:
    """Fermion-pair product against the theta sum over phi(q):
    prod_n (1 + z u^(2n-1))(1 + 1/z u^(2n-1)) and
    (sum_j z^j u^(j*j)) / phi(q)."""
    if order < 1:
        raise InvalidParameter(f"need order >= 1, got {order}")
    lo, hi = window
    atoms = []
    n = 1
    while 2 * n - 1 < order:
        w = 2 * n - 1
        rows = [
            QSeries.from_terms({w: 1}, order),
            QSeries.from_terms({0: 1, 2 * w: 1}, order),
            QSeries.from_terms({w: 1}, order),
        ]
        cs = ChargeSeries(-1, rows, support_exact=True, min_floor=0)
        atoms.append(_Atom(cs, [(1, w, True), (-1, w, True)]))
        n += 1
    lhs = _graded_product(atoms, lo, hi, order, pad=0)

    rows = []
    for j in range(lo, hi + 1):
        e = j * j
        if e >= order:
            rows.append(QSeries.zero(order))
        else:
            rows.append(inv_euler_phi(1, order - e).shifted(e))
    below = 0 if lo - 1 >= 0 else (lo - 1) ** 2
    above = 0 if hi + 1 <= 0 else (hi + 1) ** 2
    rhs = ChargeSeries(lo, rows, min_floor=0,
                       support_exact=below >= order and above >= order)
    return lhs, rhs


def inverse_product_sides(order: int, window) -> tuple:
    """Inverse fermion-pair product against its alternating double sum
    over phi(q)^2: prod_k 1/((1 + z u^(2k-1))(1 + 1/z u^(2k-1))) and
    (sum_{r,t>=0} - sum_{r,t<0}) (-1)^(r+t) z^t u^(r(r+1)+(2r+1)t)
    / phi(q)^2."""
    if order < 1:
        raise InvalidParameter(f"need order >= 1, got {order}")
    lo, hi = window
    atoms = []
    k = 1
    while 2 * k - 1 < order:
        w = 2 * k - 1
        dmax = (order - 1) // w
        rows = []
        for d in range(-dmax, dmax + 1):
            sign = 1 if d % 2 == 0 else -1
            terms = {}
            e = w * abs(d)
            while e < order:
                terms[e] = sign
                e += 2 * w
            rows.append(QSeries.from_terms(terms, order))
        cs = ChargeSeries(-dmax, rows, support_exact=True, min_floor=0)
        atoms.append(_Atom(cs, [(1, w, False), (-1, w, False)]))
        k += 1
    lhs = _graded_product(atoms, lo, hi, order, pad=0)

    inv_sq = inv_euler_phi(1, order) * inv_euler_phi(1, order)
    rows = []
    for t in range(lo, hi + 1):
        ta = abs(t)
        terms = {}
        r = 0
        while r * (r + 1) + (2 * r + 1) * ta < order:
            terms[r * (r + 1) + (2 * r + 1) * ta] = (
                1 if (r + ta) % 2 == 0 else -1)
            r += 1
        rows.append((QSeries.from_terms(terms, order) * inv_sq)
                    .restricted(order))
    rhs = ChargeSeries(lo, rows, support_exact=False, min_floor=0)
    return lhs, rhs


def fock_char_product(m: int, order: int, window) -> ChargeSeries:
    """Specialized two-variable character of the whole charged Fock space:
    product over k >= 1 of
    (1 + z u^(2k-m)) (1 + 1/z u^(2k-2+m))
    / ((1 - z u^(m(2k-1))) (1 - 1/z u^(m(2k-1)))),
    on the requested z-window. Rows can start at negative u-exponents."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if order < 1:
        raise InvalidParameter(f"need order >= 1, got {order}")
    lo, hi = window
    budget = _neg_budget(m)
    padded = order + budget
    atoms = []
    k = 1
    while 2 * k - m - budget < order:
        wp, wm = 2 * k - m, 2 * k - 2 + m
        rows = [
            QSeries.from_terms({wm: 1}, padded),
            QSeries.from_terms({0: 1, wp + wm: 1}, padded),
            QSeries.from_terms({wp: 1}, padded),
        ]
        cs = ChargeSeries(-1, rows, support_exact=True, min_floor=min(0, wp))
        atoms.append(_Atom(cs, [(1, wp, True), (-1, wm, True)]))
        wb = m * (2 * k - 1)
        if wb - budget < order:
            dmax = (padded - 1) // wb
            rows = []
            for d in range(-dmax, dmax + 1):
                terms = {}
                e = wb * abs(d)
                while e < padded:
                    terms[e] = 1
                    e += 2 * wb
                rows.append(QSeries.from_terms(terms, padded))
            cs = ChargeSeries(-dmax, rows, support_exact=True, min_floor=0)
            atoms.append(_Atom(cs, [(1, wb, False), (-1, wb, False)]))
        k += 1
    return _graded_product(atoms, lo, hi, order, pad=budget)


# ---------------------------------------------------------------------------
# comparison


def compare_charge_series(identity: str, params: dict, lhs: ChargeSeries,
                          rhs: ChargeSeries, ms: float = 0.0):
    """Row-by-row comparison over the common window, reported like a plain
    series check; a failing row records its z-degree in the parameters."""
    from .characters import IdentityReport

    lo = max(lhs.zmin, rhs.zmin)
    hi = min(lhs.zmax, rhs.zmax)
    if lo > hi:
        raise InvalidParameter("windows do not overlap")
    order = min(lhs.order, rhs.order)
    for d in range(lo, hi + 1):
        e = lhs.row(d).first_diff(rhs.row(d))
        if e is not None:
            p = dict(params)
            p["z_degree"] = d
            return IdentityReport(identity, p, order, "fail",
                                  first_diff_u_exp=e,
                                  lhs_coeff=lhs.row(d).coeff(e),
                                  rhs_coeff=rhs.row(d).coeff(e), ms=ms)
    return IdentityReport(identity, dict(params), order, "pass", ms=ms)
