"""Rank-n equivariant cohomology of the orbifold and of its resolution.

Two length-n coefficient spaces at a fixed numeric pair of equivariant
parameters (lam1, lam2):

* the orbifold side, basis ``delta_0 .. delta_{n-1}`` indexed by twisted
  sectors, with the orbifold Poincare pairing;
* the resolution side, basis ``gamma_0 .. gamma_{n-1}`` (identity plus the
  divisor basis), with the Bott-residue Poincare pairing computed from the
  torus fixed points.

Fixed-point tangent weights are derived once from the toric fan data: the
i-th fixed point is the origin of the cone spanned by rays (1,i), (1,i+1),
whose dual pairing against the two torus directions gives

    w_{i,1} = (i+1)*lam1 + (i+1-n)*lam2,      w_{i,2} = -i*lam1 + (n-i)*lam2.

The construction certifies itself at runtime through the residue identity
sum_i 1/(w_{i,1} w_{i,2}) = 1/(n lam1 lam2).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

RESIDUE_TOL = 1e-9


class PairingError(ValueError):
    """Degenerate equivariant parameters: localization denominators vanish."""


@dataclass(frozen=True)
class LambdaPair:
    lam1: complex
    lam2: complex

    def __post_init__(self):
        if self.lam1 == 0 or self.lam2 == 0 or self.lam1 == self.lam2:
            raise PairingError(
                f"degenerate equivariant parameters ({self.lam1}, {self.lam2})"
            )

    @staticmethod
    def sample(rng) -> "LambdaPair":
        """Random rational-ish parameters, bounded away from degeneracy."""
        while True:
            a = complex(rng.integers(1, 20), rng.integers(-9, 10)) / 7
            b = complex(rng.integers(1, 20), rng.integers(-9, 10)) / 11
            try:
                return LambdaPair(a, b)
            except PairingError:
                continue


@dataclass
class CohomologyClass:
    """A cohomology element: length-n coefficients in the delta or gamma basis."""

    space: str  # "X" (orbifold) or "Y" (resolution)
    coeffs: np.ndarray
    lam: LambdaPair

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.space not in ("X", "Y"):
            raise ValueError(f"unknown space tag {self.space!r}")


def zeta(n: int) -> complex:
    return cmath.exp(1j * cmath.pi / n)


class FixedPointData:
    """Tangent weights and restriction tables at the n torus-fixed points."""

    def __init__(self, n: int, lam: LambdaPair):
        if n < 2:
            raise ValueError("need n >= 2")
        self.n = n
        self.lam = lam
        l1, l2 = lam.lam1, lam.lam2
        i = np.arange(n)
        self.w1 = (i + 1) * l1 + (i + 1 - n) * l2
        self.w2 = -i * l1 + (n - i) * l2
        if np.any(self.w1 == 0) or np.any(self.w2 == 0):
            raise PairingError("vanishing tangent weight at a fixed point")
        self.euler = self.w1 * self.w2

        # omega_j restricts to w_{i,1} at p_i, w_{i,2} at p_{i+1}, 0 elsewhere.
        self.omega_restrictions = np.zeros((n, n + 1), dtype=complex)
        for j in range(n + 1):
            if j < n:
                self.omega_restrictions[j, j] = self.w1[j]
            if j >= 1:
                self.omega_restrictions[j - 1, j] = self.w2[j - 1]

        # gamma restrictions from the omega relations:
        #   gamma_1 = omega_0 - lam1,  gamma_2 = omega_1 + 2 gamma_1,
        #   gamma_{j+1} = omega_j + 2 gamma_j - gamma_{j-1}  (2 <= j <= n-2).
        R = np.zeros((n, n), dtype=complex)
        R[:, 0] = 1.0
        if n >= 2:
            R[:, 1] = self.omega_restrictions[:, 0] - l1
        for j in range(1, n - 1):
            prev = R[:, j - 1] if j >= 2 else 0.0
            R[:, j + 1] = self.omega_restrictions[:, j] + 2 * R[:, j] - prev
        self.gamma_restrictions = R

        # Certificates: the remaining omega relations and the residue identity.
        if n >= 3:
            resid = self.omega_restrictions[:, n - 1] - (R[:, n - 2] - 2 * R[:, n - 1])
        else:
            resid = self.omega_restrictions[:, 1] - (-2 * R[:, 1])
        resid2 = self.omega_restrictions[:, n] - (l2 + R[:, n - 1])
        scale = max(abs(l1), abs(l2))
        if np.max(np.abs(resid)) > RESIDUE_TOL * scale or np.max(
            np.abs(resid2)
        ) > RESIDUE_TOL * scale:
            raise PairingError("fixed-point table fails the omega relations")
        if abs(self.residue_defect()) > RESIDUE_TOL / abs(n * l1 * l2):
            raise PairingError("fixed-point table fails the residue identity")

    def residue_defect(self) -> complex:
        n, l1, l2 = self.n, self.lam.lam1, self.lam.lam2
        return complex(np.sum(1.0 / self.euler) - 1.0 / (n * l1 * l2))


def omega_class(n: int, j: int, lam: LambdaPair) -> CohomologyClass:
    """The toric-divisor class omega_j in the gamma basis.

    For small n the middle cases of the defining list collapse; absent basis
    terms are simply dropped (e.g. n=2 gives omega_1 = -2*gamma_1).
    """
    if not 0 <= j <= n:
        raise ValueError(f"omega index {j} out of range 0..{n}")
    c = np.zeros(n, dtype=complex)
    if j == 0:
        c[0] = lam.lam1
        c[1] = 1.0
    elif j == n:
        c[0] = lam.lam2
        c[n - 1] = 1.0
    else:
        if j - 1 >= 1:
            c[j - 1] += 1.0
        c[j] += -2.0
        if j + 1 <= n - 1:
            c[j + 1] += 1.0
    return CohomologyClass("Y", c, lam)


def restrict_to_fixed_points(c: CohomologyClass, fp: FixedPointData | None = None):
    """Length-n vector of restrictions of a resolution-side class."""
    if c.space != "Y":
        raise ValueError("restriction table only exists on the resolution side")
    fp = fp or FixedPointData(len(c.coeffs), c.lam)
    return fp.gamma_restrictions @ c.coeffs


def pair_Y(a: CohomologyClass, b: CohomologyClass, fp: FixedPointData | None = None) -> complex:
    """Bott-residue pairing sum_i a|_{p_i} b|_{p_i} / (w_{i,1} w_{i,2})."""
    if a.lam != b.lam:
        raise ValueError("classes carry different equivariant parameters")
    fp = fp or FixedPointData(len(a.coeffs), a.lam)
    ra = fp.gamma_restrictions @ a.coeffs
    rb = fp.gamma_restrictions @ b.coeffs
    return complex(np.sum(ra * rb / fp.euler))


def pairing_matrix_Y(n: int, lam: LambdaPair) -> np.ndarray:
    fp = FixedPointData(n, lam)
    R = fp.gamma_restrictions
    return R.T @ (R / fp.euler[:, None])


def pairing_matrix_X(n: int, lam: LambdaPair) -> np.ndarray:
    """Orbifold Poincare pairing in the delta basis.

    (delta_0, delta_0) = 1/(n lam1 lam2); twisted sectors pair as
    (delta_a, delta_{n-a}) = 1/n; everything else vanishes.
    """
    P = np.zeros((n, n), dtype=complex)
    P[0, 0] = 1.0 / (n * lam.lam1 * lam.lam2)
    for a in range(1, n):
        P[a, n - a] = 1.0 / n
    return P


def pair_X(a: CohomologyClass, b: CohomologyClass) -> complex:
    if a.lam != b.lam:
        raise ValueError("classes carry different equivariant parameters")
    P = pairing_matrix_X(len(a.coeffs), a.lam)
    return complex(a.coeffs @ P @ b.coeffs)


def L_matrix(n: int) -> np.ndarray:
    """The linear isomorphism delta_j -> sum_i L[i,j] gamma_i.

    L[0,0] = 1 and, for 1 <= i,j < n,  L[i,j] = zeta^{2ij}(zeta^{-j}-zeta^j)/n
    with zeta = exp(pi*sqrt(-1)/n).
    """
    z = zeta(n)
    L = np.zeros((n, n), dtype=complex)
    L[0, 0] = 1.0
    for i in range(1, n):
        for j in range(1, n):
            L[i, j] = z ** (2 * i * j) * (z ** (-j) - z**j) / n
    return L


def L_map(c: CohomologyClass) -> CohomologyClass:
    if c.space != "X":
        raise ValueError("L maps orbifold classes to resolution classes")
    return CohomologyClass("Y", L_matrix(len(c.coeffs)) @ c.coeffs, c.lam)


def L_adjoint_matrix(n: int, lam: LambdaPair) -> np.ndarray:
    """Adjoint of L w.r.t. the two pairings: Ldag = P_X^{-1} L^T P_Y."""
    PX = pairing_matrix_X(n, lam)
    PY = pairing_matrix_Y(n, lam)
    return np.linalg.solve(PX, L_matrix(n).T @ PY)


def L_adjoint(c: CohomologyClass) -> CohomologyClass:
    if c.space != "Y":
        raise ValueError("the adjoint maps resolution classes to orbifold classes")
    return CohomologyClass("X", L_adjoint_matrix(len(c.coeffs), c.lam) @ c.coeffs, c.lam)


def cartan_check(n: int, lam: LambdaPair) -> dict:
    """Pairing-preservation certificate for the adjoint map.

    Computes (Ldag omega_i, Ldag omega_j)_X for 1 <= i,j < n along with
    (Ldag 1, Ldag 1)_X and (Ldag 1, Ldag omega_i)_X, and compares against the
    expected -2 / 1 / 0 tridiagonal pattern and 1/(n lam1 lam2).
    """
    Ld = L_adjoint_matrix(n, lam)
    PX = pairing_matrix_X(n, lam)
    cols = [np.zeros(n, dtype=complex)]
    cols[0][0] = 1.0  # the identity class gamma_0
    for i in range(1, n):
        cols.append(omega_class(n, i, lam).coeffs)
    imgs = [Ld @ c for c in cols]
    G = np.array([[u @ PX @ v for v in imgs] for u in imgs])

    expected = np.zeros((n, n), dtype=complex)
    expected[0, 0] = 1.0 / (n * lam.lam1 * lam.lam2)
    for i in range(1, n):
        expected[i, i] = -2.0
        if i + 1 < n:
            expected[i, i + 1] = expected[i + 1, i] = 1.0
    resid = np.abs(G - expected)
    worst = np.unravel_index(int(np.argmax(resid)), resid.shape)
    return {
        "n": n,
        "lambda": [lam.lam1, lam.lam2],
        "cartan_matrix": G[1:, 1:],
        "unit_pairing": G[0, 0],
        "unit_cross": G[0, 1:],
        "max_residual": float(resid.max()),
        "worst_entry": [int(worst[0]), int(worst[1])],
        "passed": bool(resid.max() < 1e-10 * max(1.0, abs(expected[0, 0]))),
    }
