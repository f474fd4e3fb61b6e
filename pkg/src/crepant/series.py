"""Dense truncated multivariate power series over complex coefficients.

Series are truncated by *total* degree: a series in ``nvars`` variables with
cap ``D`` stores one complex coefficient for every monomial of total degree
<= D, in graded-lex order.  All arithmetic is closed under the cap; products
silently drop terms above it.

The monomial bookkeeping (ordering, index lookup, multiplication table,
composition plans) lives in :class:`SeriesContext`, which is cached per
``(nvars, cap)`` so that repeated operations at the same shape reuse the
precomputed index tables.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
from scipy import special as _sp


class ShapeError(ValueError):
    """Operands live in incompatible (nvars, cap) contexts."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (e.g. nonzero constant term)."""


@lru_cache(maxsize=None)
def get_context(nvars: int, cap: int) -> "SeriesContext":
    return SeriesContext(nvars, cap)


def _monomials(nvars, cap):
    """All exponent tuples with total degree <= cap, graded-lex order."""
    out = []
    for total in range(cap + 1):
        out.extend(_monomials_of_degree(nvars, total))
    return out


def _monomials_of_degree(nvars, total):
    if nvars == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, total - first):
            out.append((first,) + rest)
    # lex within a degree block: largest first exponent first is descending;
    # flip so iteration order is ascending lex on the tuple reversed... keep
    # the conventional ordering: sort ascending lexicographically.
    out.sort()
    return out


class SeriesContext:
    """Shared monomial tables for series of a fixed shape."""

    def __init__(self, nvars: int, cap: int):
        if nvars < 0 or cap < 0:
            raise ShapeError(f"invalid shape nvars={nvars} cap={cap}")
        self.nvars = nvars
        self.cap = cap
        self.monomials = _monomials(nvars, cap)
        self.size = len(self.monomials)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.exponents = np.array(self.monomials, dtype=np.int64).reshape(self.size, nvars)
        self.degrees = self.exponents.sum(axis=1)
        self._mul_table = None

    def mul_table(self):
        """Sparse index triples (i, j, k) with monomial_i * monomial_j = monomial_k."""
        if self._mul_table is None:
            I, J, K = [], [], []
            monos = self.monomials
            degs = self.degrees
            index = self.index
            for i, mi in enumerate(monos):
                di = degs[i]
                for j, mj in enumerate(monos):
                    if di + degs[j] > self.cap:
                        continue
                    K.append(index[tuple(a + b for a, b in zip(mi, mj))])
                    I.append(i)
                    J.append(j)
            self._mul_table = (
                np.array(I, dtype=np.int64),
                np.array(J, dtype=np.int64),
                np.array(K, dtype=np.int64),
            )
        return self._mul_table

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, np.zeros(self.size, dtype=complex))

    def constant(self, value) -> "TruncatedSeries":
        c = np.zeros(self.size, dtype=complex)
        c[0] = value
        return TruncatedSeries(self, c)

    def variable(self, i: int) -> "TruncatedSeries":
        if not 0 <= i < self.nvars:
            raise ShapeError(f"variable index {i} out of range for nvars={self.nvars}")
        return self.monomial(tuple(1 if k == i else 0 for k in range(self.nvars)))

    def monomial(self, exps, coeff=1.0) -> "TruncatedSeries":
        c = np.zeros(self.size, dtype=complex)
        exps = tuple(int(e) for e in exps)
        if sum(exps) <= self.cap:
            c[self.index[exps]] = coeff
        return TruncatedSeries(self, c)


class TruncatedSeries:
    """A dense total-degree-truncated power series."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: SeriesContext, coeffs: np.ndarray):
        self.ctx = ctx
        self.c = coeffs

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def from_terms(nvars, cap, terms):
        """Build from a {exponent-tuple: coefficient} mapping."""
        ctx = get_context(nvars, cap)
        s = ctx.zero()
        for exps, val in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ShapeError(f"exponent tuple {exps} has wrong arity")
            if sum(exps) <= cap:
                s.c[ctx.index[exps]] += val
        return s

    @property
    def nvars(self):
        return self.ctx.nvars

    @property
    def cap(self):
        return self.ctx.cap

    def copy(self):
        return TruncatedSeries(self.ctx, self.c.copy())

    def coeff(self, exps) -> complex:
        exps = tuple(int(e) for e in exps)
        if sum(exps) > self.ctx.cap:
            return 0j
        return complex(self.c[self.ctx.index[exps]])

    def terms(self):
        """Yield (exponents, coefficient) for nonzero terms in graded-lex order."""
        for i in np.nonzero(self.c)[0]:
            yield self.ctx.monomials[i], complex(self.c[i])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.c))) if self.size else 0.0

    @property
    def size(self):
        return self.ctx.size

    # -- arithmetic ----------------------------------------------------------

    def _check_mate(self, other):
        if other.ctx is not self.ctx:
            if (other.nvars, other.cap) != (self.nvars, self.cap):
                raise ShapeError(
                    f"shape mismatch: ({self.nvars},{self.cap}) vs ({other.nvars},{other.cap})"
                )

    @staticmethod
    def _checked(ctx, c):
        if not np.isfinite(c).all():
            raise DomainError("non-finite coefficient produced")
        return TruncatedSeries(ctx, c)

    def __add__(self, other):
        if np.isscalar(other):
            c = self.c.copy()
            c[0] += other
            return self._checked(self.ctx, c)
        self._check_mate(other)
        return self._checked(self.ctx, self.c + other.c)

    __radd__ = __add__

    def __sub__(self, other):
        if np.isscalar(other):
            return self + (-other)
        self._check_mate(other)
        return self._checked(self.ctx, self.c - other.c)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncatedSeries(self.ctx, -self.c)

    def __mul__(self, other):
        if np.isscalar(other):
            return self._checked(self.ctx, self.c * other)
        self._check_mate(other)
        I, J, K = self.ctx.mul_table()
        out = np.zeros(self.ctx.size, dtype=complex)
        np.add.at(out, K, self.c[I] * other.c[J])
        return self._checked(self.ctx, out)

    __rmul__ = __mul__

    def mul_monomial(self, exps, coeff=1.0):
        """Multiply by coeff * x^exps, dropping terms pushed above the cap."""
        ctx = self.ctx
        shift = np.asarray(exps, dtype=np.int64)
        out = np.zeros(ctx.size, dtype=complex)
        newexp = ctx.exponents + shift
        keep = newexp.sum(axis=1) <= ctx.cap
        idx = [ctx.index[tuple(e)] for e in newexp[keep]]
        out[idx] = self.c[keep] * coeff
        return self._checked(ctx, out)

    def theta(self, i: int):
        """Logarithmic derivative x_i d/dx_i (diagonal on monomials)."""
        return TruncatedSeries(self.ctx, self.c * self.ctx.exponents[:, i])

    def theta_combo(self, weights):
        """sum_i weights[i] * x_i d/dx_i applied in one pass."""
        w = np.asarray(weights, dtype=complex)
        return TruncatedSeries(self.ctx, self.c * (self.ctx.exponents @ w))

    def exp(self):
        """exp of a series with zero constant term."""
        if abs(self.c[0]) > 0:
            raise DomainError("exp requires zero constant term")
        out = self.ctx.constant(1.0)
        power = self.ctx.constant(1.0)
        for m in range(1, self.cap + 1):
            power = power * self
            out = out + power * (1.0 / math.factorial(m))
        return out

    def evaluate(self, point) -> complex:
        """Evaluate at a numeric point (ordinary polynomial evaluation)."""
        point = np.asarray(point, dtype=complex)
        vals = np.prod(point[None, :] ** self.ctx.exponents, axis=1)
        return complex(self.c @ vals)

    def tail_bound(self, radius: float) -> float:
        """Crude tail estimate: (top-degree coefficient mass) * radius^(cap+1)
        geometric extrapolation.  Used only for error-budget reporting."""
        top = self.ctx.degrees == self.cap
        mass = float(np.sum(np.abs(self.c[top])))
        if mass == 0.0:
            sub = self.ctx.degrees == max(self.cap - 1, 0)
            mass = float(np.sum(np.abs(self.c[sub])))
        return mass * radius ** (self.cap + 1)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        terms = [
            {"exps": list(e), "re": v.real, "im": v.imag} for e, v in self.terms()
        ]
        return {"nvars": self.nvars, "degree_cap": self.cap, "terms": terms}

    @staticmethod
    def from_json_dict(d):
        return TruncatedSeries.from_terms(
            d["nvars"],
            d["degree_cap"],
            {tuple(t["exps"]): complex(t["re"], t["im"]) for t in d["terms"]},
        )

    def __repr__(self):
        head = ", ".join(f"{e}:{v:.4g}" for e, v in itertools.islice(self.terms(), 6))
        return f"TruncatedSeries(nvars={self.nvars}, cap={self.cap}, [{head}...])"


class CompositionPlan:
    """Precomputed monomial values of a fixed inner map, for fast composition.

    Substituting the same inner series into many outer series amounts to one
    matrix product per outer series once the coordinates of every monomial
    prod_j inner_j^alpha_j are known.
    """

    def __init__(self, outer_ctx: SeriesContext, inners):
        if len(inners) != outer_ctx.nvars:
            raise ShapeError("inner map arity does not match outer nvars")
        tgt = inners[0].ctx if inners else get_context(0, outer_ctx.cap)
        for s in inners:
            if s.ctx is not tgt and (s.nvars, s.cap) != (tgt.nvars, tgt.cap):
                raise ShapeError("inner series have mismatched contexts")
            if abs(s.c[0]) != 0:
                raise DomainError("inner series must have zero constant term")
        self.outer_ctx = outer_ctx
        self.target_ctx = tgt
        values = np.zeros((outer_ctx.size, tgt.size), dtype=complex)
        one = tgt.zero()
        one.c[0] = 1.0
        cache = {outer_ctx.monomials[0]: one}
        values[0] = one.c
        for idx in range(1, outer_ctx.size):
            mono = outer_ctx.monomials[idx]
            j = next(k for k, e in enumerate(mono) if e > 0)
            prev = tuple(e - 1 if k == j else e for k, e in enumerate(mono))
            val = cache[prev] * inners[j]
            cache[mono] = val
            values[idx] = val.c
        self.values = values

    def apply(self, outer: TruncatedSeries) -> TruncatedSeries:
        if outer.ctx is not self.outer_ctx and (
            outer.nvars,
            outer.cap,
        ) != (self.outer_ctx.nvars, self.outer_ctx.cap):
            raise ShapeError("outer series does not match plan context")
        return TruncatedSeries._checked(self.target_ctx, outer.c @ self.values)


def compose(outer: TruncatedSeries, inners) -> TruncatedSeries:
    """Formal composition outer(inner_1, ..., inner_m), truncated."""
    return CompositionPlan(outer.ctx, list(inners)).apply(outer)


def reverse(maps) -> list:
    """Invert a unit-triangular map u = f(x), f_i = x_i + O(x^2).

    Returns series x_i(u) with compose(f, x(u)) = u up to the cap.  Newton-free
    fixed-point iteration: x <- u - h(x) gains one correct degree per sweep.
    """
    maps = list(maps)
    if not maps:
        return []
    ctx = maps[0].ctx
    nv = ctx.nvars
    if len(maps) != nv:
        raise DomainError("need exactly nvars component maps")
    for i, f in enumerate(maps):
        lin = np.zeros(nv)
        lin[i] = 1.0
        expect = ctx.variable(i)
        low = f.c[ctx.degrees <= 1] - expect.c[ctx.degrees <= 1]
        if np.max(np.abs(low)) > 1e-13 * max(1.0, np.max(np.abs(f.c))):
            raise DomainError("map is not unit-triangular (f_i = x_i + higher order)")
    higher = [f - ctx.variable(i) for i, f in enumerate(maps)]
    current = [ctx.variable(i) for i in range(nv)]
    for _ in range(ctx.cap):
        plan = CompositionPlan(ctx, current)
        current = [ctx.variable(i) - plan.apply(higher[i]) for i in range(nv)]
    return current


def reciprocal_gamma(s) -> float:
    """1/Gamma(s): entire, exactly zero at non-positive integers."""
    s = float(s)
    if s <= 0 and s == int(s):
        return 0.0
    return float(_sp.rgamma(s))
