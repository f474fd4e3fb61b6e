"""Hypergeometric series, mirror maps, and the differential systems they solve.

Everything here lives on the B-model side: enumeration of effective classes,
the two cohomology-valued hypergeometric series (one per large-radius limit),
the flat-coordinate series read off from their z^0 rows, the coordinate
change between the two patches, and residual checks for the hypergeometric
(GKZ) system and its full equivariant lift.

Conventions:

* the orbifold-side series is built at x_0 = 0 with the exp(x_0/z) prefactor
  stripped (it factors through every operator considered here);
* the resolution-side object stored is the single-valued factor H(y, z) with
  H = sum_d F(d, z) y^d, i.e. the full series is
  z * exp(y_0/z) * prod_k y_k^(gamma_k/z) * H(y, z);
* the resolution-side flat coordinates are g_k = log y_k + S_k(y) where the
  analytic parts S_k are the gamma_k-components of the z^{-1} row of H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cohomology import FixedPointData, LambdaPair
from .series import (
    DomainError,
    SeriesContext,
    TruncatedSeries,
    get_context,
    reciprocal_gamma,
)
from .zwindow import ZSeries

# ---------------------------------------------------------------------------
# effective classes


@dataclass(frozen=True)
class EffectiveClass:
    """A nonnegative integer vector beta(1..n-1) with its derived data."""

    n: int
    beta: tuple

    @property
    def beta0(self) -> Fraction:
        return -Fraction(sum((self.n - k) * b for k, b in enumerate(self.beta, 1)), self.n)

    @property
    def betan(self) -> Fraction:
        return -Fraction(sum(k * b for k, b in enumerate(self.beta, 1)), self.n)

    @property
    def sector(self) -> int:
        # i(beta) = n * frac(-beta(n)) = sum k*beta(k) mod n
        return sum(k * b for k, b in enumerate(self.beta, 1)) % self.n

    @property
    def total(self) -> int:
        return sum(self.beta)


def enumerate_effective(n: int, D: int):
    """All effective classes with total degree <= D, graded-lex order."""
    ctx = get_context(n - 1, D)
    for mono in ctx.monomials:
        yield EffectiveClass(n, mono)


# ---------------------------------------------------------------------------
# orbifold side


def flat_coords_X(n: int, D: int) -> list:
    """The analytic flat coordinates f_1 .. f_{n-1} as series in x.

    Coefficient of x^beta in f_k:
        Gamma(1-k/n)/Gamma(1+beta(0)) * Gamma(k/n)/Gamma(1+beta(n)) / beta!
    summed over effective classes in sector k.  The reciprocal-Gamma factors
    vanish identically whenever 1+beta(0) or 1+beta(n) is a non-positive
    integer.
    """
    ctx = get_context(n - 1, D)
    out = [ctx.zero() for _ in range(n - 1)]
    gammas = [math.gamma(1 - Fraction(k, n)) * math.gamma(Fraction(k, n)) for k in range(1, n)]
    for eff in enumerate_effective(n, D):
        k = eff.sector
        if k == 0:
            continue
        coeff = (
            gammas[k - 1]
            * reciprocal_gamma(1 + eff.beta0)
            * reciprocal_gamma(1 + eff.betan)
        )
        if coeff == 0.0:
            continue
        for b in eff.beta:
            coeff /= math.factorial(b)
        out[k - 1].c[ctx.index[eff.beta]] += coeff
    return out


def _lambda_poly(lam_val: complex, shifts) -> np.ndarray:
    """Coefficients (ascending in z) of prod_r (lam_val + r*z)."""
    poly = np.array([1.0 + 0j])
    for r in shifts:
        poly = np.convolve(poly, np.array([lam_val, complex(r)]))
    return poly


def i_function_X(n: int, D: int, Z: int, lam: LambdaPair) -> ZSeries:
    """The orbifold-side hypergeometric series (x_0 = 0, prefactor stripped).

    Components are coefficients on delta_0 .. delta_{n-1}; the z-window runs
    from z^1 down to z^{-Z}.
    """
    ctx = get_context(n - 1, D)
    zs = ZSeries(n, ctx, zmax=1, vmin=-Z, rep="delta")
    for eff in enumerate_effective(n, D):
        nr = math.floor(-eff.beta0)  # r = beta0+1 .. beta0+nr, step 1, all <= 0
        ns = math.floor(-eff.betan)
        rs = [eff.beta0 + j for j in range(1, nr + 1)]
        ss = [eff.betan + j for j in range(1, ns + 1)]
        poly = np.convolve(_lambda_poly(lam.lam1, rs), _lambda_poly(lam.lam2, ss))
        base = 1 - eff.total
        amp = 1.0
        for b in eff.beta:
            amp /= math.factorial(b)
        for t, pc in enumerate(poly):
            p = base + t
            if p < -Z or pc == 0:
                continue
            zs.add(p, eff.sector, eff.beta, amp * pc)
    return zs


# ---------------------------------------------------------------------------
# resolution side


def d_vector(n: int, d) -> list:
    """D_j(beta) for j = 0..n given the curve-class vector d(1..n-1)."""
    d = list(d)
    full = [0] * (n + 1)
    full[0] = d[0]
    full[n] = d[n - 2] if n >= 2 else 0
    for j in range(1, n):
        val = -2 * d[j - 1]
        if j - 2 >= 0:
            val += d[j - 2]
        if j < n - 1:
            val += d[j]
        full[j] = val
    return full


def _hyper_factor_w(omegas, Ds, order: int) -> np.ndarray:
    """Expansion in w = 1/z of prod_j [prod_{m<=0}(w_j+mz) / prod_{m<=D_j}(w_j+mz)].

    Returns coefficients of w^0, w^1, ..., w^order.  Both products pick up
    the same number of linear factors (sum of D_j is zero), so after
    reversing each into a polynomial in w the ratio is an honest power
    series; its leading zeros count the strictly negative D_j.
    """
    num = np.array([1.0 + 0j])
    den = np.array([1.0 + 0j])
    for om, Dj in zip(omegas, Ds):
        if Dj > 0:
            for m in range(1, Dj + 1):
                den = np.convolve(den, np.array([om, float(m)]))
        elif Dj < 0:
            for m in range(Dj + 1, 1):
                num = np.convolve(num, np.array([om, float(m)]))
    ntil = num[::-1]
    dtil = den[::-1]
    inv = np.zeros(order + 1, dtype=complex)
    inv[0] = 1.0 / dtil[0]
    for m in range(1, order + 1):
        acc = 0j
        for k in range(1, min(m, len(dtil) - 1) + 1):
            acc += dtil[k] * inv[m - k]
        inv[m] = -acc / dtil[0]
    return np.convolve(ntil, inv)[: order + 1]


def i_function_Y(n: int, D: int, Z: int, lam: LambdaPair, fp: FixedPointData | None = None) -> ZSeries:
    """The single-valued factor H(y, z) in the fixed-point representation.

    Rows run from z^0 (the identity class) down to z^{-Z}; every nonzero
    curve class contributes at order z^{-1} and below.
    """
    fp = fp or FixedPointData(n, lam)
    ctx = get_context(n - 1, D)
    zs = ZSeries(n, ctx, zmax=0, vmin=-Z, rep="fixedpt")
    for c in range(n):
        zs.add(0, c, (0,) * (n - 1), 1.0)
    omat = fp.omega_restrictions  # [fixed point, j]
    for eff in enumerate_effective(n, D):
        d = eff.beta
        if eff.total == 0:
            continue
        Ds = d_vector(n, d)
        for p in range(n):
            ser = _hyper_factor_w(omat[p], Ds, Z)
            for t, val in enumerate(ser):
                if val == 0:
                    continue
                zs.add(-t, p, d, val)
    return zs


def mirror_map_Y(n: int, D: int, lam: LambdaPair | None = None):
    """Analytic parts S_1..S_{n-1} of the flat coordinates g_k = log y_k + S_k.

    Read from the z^{-1} row of H converted to the gamma basis.  The result
    is independent of the equivariant parameters; a default sample is used
    when none is supplied.
    """
    lam = lam or LambdaPair(complex(0.73, 0.21), complex(-0.41, 0.57))
    fp = FixedPointData(n, lam)
    H = i_function_Y(n, D, 1, lam, fp)
    row = H.row(-1)
    V = np.stack([s.c for s in row])
    C = np.linalg.solve(fp.gamma_restrictions, V)
    ctx = get_context(n - 1, D)
    identity_defect = float(np.max(np.abs(C[0])))
    if identity_defect > 1e-9 * max(1.0, float(np.max(np.abs(C)))):
        raise DomainError(
            f"z^-1 row has an unexpected identity component ({identity_defect:.2e})"
        )
    return [TruncatedSeries(ctx, C[k]) for k in range(1, n)]


# ---------------------------------------------------------------------------
# coordinate change


def xy_matrix(n: int) -> np.ndarray:
    """Exponent matrix A with y_i = prod_k x_k^{A[i,k]} (tridiagonal 1,-2,1)."""
    A = np.zeros((n - 1, n - 1), dtype=np.int64)
    for i in range(n - 1):
        A[i, i] = -2
        if i > 0:
            A[i, i - 1] = 1
        if i < n - 2:
            A[i, i + 1] = 1
    return A


def y_from_x(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise DomainError("coordinate change needs all x_i nonzero")
    n = len(x) + 1
    A = xy_matrix(n)
    return np.array([np.prod(x ** A[i]) for i in range(n - 1)])


def x_from_y(y) -> np.ndarray:
    """Principal-branch inverse on the torus (the x-patch is an n-fold cover)."""
    y = np.asarray(y, dtype=complex)
    if np.any(y == 0):
        raise DomainError("inverse coordinate change needs all y_i nonzero")
    n = len(y) + 1
    A = xy_matrix(n).astype(float)
    logs = np.linalg.solve(A, np.log(y))
    return np.exp(logs)


# ---------------------------------------------------------------------------
# GKZ system


def gimel_matrix(n: int) -> np.ndarray:
    """C[j,k] = coefficient of theta_k^y in the j-th log-derivative combo, j=0..n."""
    C = np.zeros((n + 1, n - 1))
    C[0, 0] = 1.0
    C[n, n - 2] = 1.0
    for j in range(1, n):
        C[j, j - 1] = -2.0
        if j - 2 >= 0:
            C[j, j - 2] = 1.0
        if j < n - 1:
            C[j, j] = 1.0
    return C


def gimel_matrix_x(n: int) -> np.ndarray:
    """The same combinations written in theta_k^x (middle rows are single thetas)."""
    C = np.zeros((n + 1, n - 1))
    ks = np.arange(1, n)
    C[0] = -(n - ks) / n
    C[n] = -ks / n
    for j in range(1, n):
        C[j, j - 1] = 1.0
    return C


@dataclass
class LogSeries:
    """series + sum_k logcoeffs[k] * log(v_k), the shape GKZ solutions take."""

    logcoeffs: np.ndarray
    series: TruncatedSeries

    @staticmethod
    def plain(series):
        return LogSeries(np.zeros(series.nvars), series)


def _apply_gimel(C_row, m, ls: LogSeries) -> LogSeries:
    """(gimel - m) applied to a LogSeries; gimel sends log v_k to the constant C_row[k]."""
    const = complex(np.dot(C_row, ls.logcoeffs))
    new = ls.series.theta_combo(C_row) + const
    if m:
        new = new - ls.series * m
    return LogSeries(-m * ls.logcoeffs, new)


def gkz_residual(sol: LogSeries, d, n: int, coords: str = "y") -> TruncatedSeries:
    """Residual of the rank-n hypergeometric system's relation for curve class d.

    LHS applies the positive-index factors, RHS the negative-index ones
    followed by multiplication with the class monomial.  In x-coordinates the
    monomial is Laurent; both sides are cleared by x^(negative part) first.
    """
    Ds = d_vector(n, d)
    C = gimel_matrix(n) if coords == "y" else gimel_matrix_x(n)
    lhs = sol
    for j in range(n + 1):
        for m in range(0, Ds[j]):
            lhs = _apply_gimel(C[j], m, lhs)
    rhs = sol
    for j in range(n + 1):
        for m in range(0, -Ds[j]):
            rhs = _apply_gimel(C[j], m, rhs)
    if np.max(np.abs(lhs.logcoeffs)) > 0 or np.max(np.abs(rhs.logcoeffs)) > 0:
        raise DomainError("unsupported log structure survives the operator")
    if coords == "y":
        mono = np.asarray(d, dtype=np.int64)
        return lhs.series - rhs.series.mul_monomial(mono)
    v = np.asarray(d) @ xy_matrix(n)
    vneg = np.where(v < 0, -v, 0)
    vpos = np.where(v > 0, v, 0)
    return lhs.series.mul_monomial(vneg) - rhs.series.mul_monomial(vpos)


def gkz_generator_residuals(n: int, D: int, side: str = "X") -> list:
    """Residual series of the flat coordinates under the n-1 generator relations.

    side "X": the analytic flat coordinates in x-coordinates;
    side "Y": log y_k + S_k(y) in y-coordinates (one log layer).
    """
    gens = [tuple(1 if i == l else 0 for i in range(n - 1)) for l in range(n - 1)]
    out = []
    if side == "X":
        fs = flat_coords_X(n, D)
        sols = [LogSeries.plain(f) for f in fs]
        coords = "x"
    else:
        Ss = mirror_map_Y(n, D)
        sols = []
        for k, S in enumerate(Ss):
            lc = np.zeros(n - 1)
            lc[k] = 1.0
            sols.append(LogSeries(lc, S))
        coords = "y"
    for sol in sols:
        for d in gens:
            out.append(gkz_residual(sol, d, n, coords))
    return out


# ---------------------------------------------------------------------------
# full equivariant residuals


def pf_residual_X(I: ZSeries, beta_hat, n: int, lam: LambdaPair) -> ZSeries:
    """Residual of the equivariant relation indexed by an integer class with
    trivial sector (beta(0) and beta(n) integral).

    Operators act on the x_0 = 0, prefactor-stripped series: the j-th factor
    is  diag_j + z*(theta combo)_j - m*z  with diag = lam1, lam2 for j = 0, n
    and zero otherwise.
    """
    beta_hat = list(beta_hat)
    if sum(k * b for k, b in enumerate(beta_hat, 1)) % n != 0:
        raise DomainError("relation classes must have trivial sector")
    b0 = -sum((n - k) * b for k, b in enumerate(beta_hat, 1)) // n
    bn = -sum(k * b for k, b in enumerate(beta_hat, 1)) // n
    full = [b0] + beta_hat + [bn]
    Cx = gimel_matrix_x(n)
    diags = [lam.lam1] + [0.0] * (n - 1) + [lam.lam2]
    lhs = I
    for j in range(n + 1):
        for m in range(0, full[j]):
            lhs = lhs.apply_factor(diags[j], Cx[j], float(m))
    rhs = I
    order = 0
    for j in range(n + 1):
        for m in range(0, -full[j]):
            rhs = rhs.apply_factor(diags[j], Cx[j], float(m))
            order += 1
    pos = np.array([max(b, 0) for b in beta_hat], dtype=np.int64)
    neg = np.array([max(-b, 0) for b in beta_hat], dtype=np.int64)
    # balance operator order on both sides before comparing windows
    lhs_order = sum(b for b in full if b > 0)
    if lhs_order != order:
        raise DomainError("unbalanced relation")
    return lhs.mul_monomial(neg) - rhs.mul_monomial(pos)


def pf_residual_Y(H: ZSeries, d, n: int, lam: LambdaPair, fp: FixedPointData | None = None) -> ZSeries:
    """Residual of the equivariant relation for a curve class, acting on H.

    Conjugation by the multivalued prefactor turns the j-th log-derivative
    operator into  omega_j + z*(theta combo)_j, with omega_j acting by
    componentwise multiplication in the fixed-point representation.
    """
    fp = fp or FixedPointData(n, lam)
    Ds = d_vector(n, d)
    C = gimel_matrix(n)
    lhs = H
    for j in range(n + 1):
        for m in range(0, Ds[j]):
            lhs = lhs.apply_factor(fp.omega_restrictions[:, j], C[j], float(m))
    rhs = H
    for j in range(n + 1):
        for m in range(0, -Ds[j]):
            rhs = rhs.apply_factor(fp.omega_restrictions[:, j], C[j], float(m))
    mono = np.asarray(d, dtype=np.int64)
    return lhs - rhs.mul_monomial(mono)


def relation_classes_X(n: int):
    """A small generating set of trivial-sector classes used for checks."""
    out = []
    for k in range(1, n):
        out.append(tuple(n if i == k - 1 else 0 for i in range(n - 1)))
    for k in range(1, n):
        if k <= n - k:
            beta = [0] * (n - 1)
            beta[k - 1] += 1
            beta[n - k - 1] += 1
            out.append(tuple(beta))
    return out
