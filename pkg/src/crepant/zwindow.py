"""Cohomology-valued Laurent windows in the auxiliary variable z.

An :class:`ZSeries` stores finitely many rows, one per power of z, each row a
length-n vector of truncated power series (one per cohomology component).
Components are interpreted either in a linear basis ("delta" on the orbifold
side, "gamma" on the resolution side) or as fixed-point restrictions
("fixedpt"), where cup products act componentwise.

Differential operators of the shape  diag + z * (theta combination) - m*z
act row by row and raise powers of z; ``vmin`` tracks the lowest row that is
still complete (rows below the stored window are unknown, so every z-raising
factor application moves the reliable floor up by one).
"""

from __future__ import annotations

import numpy as np

from .series import SeriesContext, TruncatedSeries


class WindowError(ValueError):
    """The stored z-window is too small for the requested operation."""


class ZSeries:
    def __init__(self, ncomp: int, ctx: SeriesContext, zmax: int, vmin: int, rep: str):
        self.ncomp = ncomp
        self.ctx = ctx
        self.zmax = zmax  # hard top: no rows exist above this power
        self.vmin = vmin  # lowest complete row
        self.rep = rep
        self.rows: dict[int, list[TruncatedSeries]] = {}

    def zero_row(self):
        return [self.ctx.zero() for _ in range(self.ncomp)]

    def row(self, p: int):
        return self.rows.get(p) or self.zero_row()

    def add(self, p: int, comp: int, exps, coeff):
        """Accumulate coeff * x^exps into component comp of the z^p row."""
        if p > self.zmax:
            raise WindowError(f"row z^{p} above hard top z^{self.zmax}")
        if p < self.vmin:
            return
        if p not in self.rows:
            self.rows[p] = self.zero_row()
        s = self.rows[p][comp]
        if sum(exps) <= self.ctx.cap:
            s.c[self.ctx.index[tuple(int(e) for e in exps)]] += coeff

    def copy(self):
        out = ZSeries(self.ncomp, self.ctx, self.zmax, self.vmin, self.rep)
        out.rows = {p: [s.copy() for s in r] for p, r in self.rows.items()}
        return out

    def __sub__(self, other):
        if (self.ncomp, self.rep) != (other.ncomp, other.rep):
            raise ValueError("incompatible ZSeries")
        out = ZSeries(
            self.ncomp,
            self.ctx,
            max(self.zmax, other.zmax),
            max(self.vmin, other.vmin),
            self.rep,
        )
        for p in set(self.rows) | set(other.rows):
            a, b = self.row(p), other.row(p)
            out.rows[p] = [x - y for x, y in zip(a, b)]
        return out

    def max_abs(self, pmin: int | None = None, pmax: int | None = None) -> float:
        """Largest coefficient magnitude over the reliable window."""
        lo = self.vmin if pmin is None else max(pmin, self.vmin)
        hi = self.zmax if pmax is None else min(pmax, self.zmax)
        worst = 0.0
        for p, r in self.rows.items():
            if lo <= p <= hi:
                worst = max(worst, max(s.max_abs() for s in r))
        return worst

    def apply_factor(self, diag, theta_weights, mshift: float):
        """Apply  diag + z*(sum_k w_k theta_k) - mshift*z  to every row.

        ``diag`` is a scalar or a per-component vector (acts within a row);
        the theta/mshift part raises the z power by one, so both the top of
        the window and the reliable floor rise by one.
        """
        out = ZSeries(self.ncomp, self.ctx, self.zmax + 1, self.vmin + 1, self.rep)
        diag = np.broadcast_to(np.asarray(diag, dtype=complex), (self.ncomp,))
        w = np.asarray(theta_weights, dtype=complex)
        for p, r in self.rows.items():
            if np.any(diag != 0):
                tgt = out.rows.setdefault(p, out.zero_row())
                for c in range(self.ncomp):
                    if diag[c] != 0:
                        tgt[c] = tgt[c] + r[c] * diag[c]
            tgt = out.rows.setdefault(p + 1, out.zero_row())
            for c in range(self.ncomp):
                term = r[c].theta_combo(w)
                if mshift != 0:
                    term = term - r[c] * mshift
                tgt[c] = tgt[c] + term
        return out

    def mul_monomial(self, exps, coeff=1.0):
        out = ZSeries(self.ncomp, self.ctx, self.zmax, self.vmin, self.rep)
        for p, r in self.rows.items():
            out.rows[p] = [s.mul_monomial(exps, coeff) for s in r]
        return out

    def scale_components(self, vec):
        """Componentwise scalar multiplication (cup product in fixedpt rep)."""
        vec = np.asarray(vec, dtype=complex)
        out = ZSeries(self.ncomp, self.ctx, self.zmax, self.vmin, self.rep)
        for p, r in self.rows.items():
            out.rows[p] = [s * vec[c] for c, s in enumerate(r)]
        return out

    def convert(self, matrix, rep: str):
        """Apply an invertible change of component representation.

        ``matrix`` maps new coordinates to stored ones (v_stored = M @ v_new),
        so conversion solves a linear system per row.
        """
        M = np.asarray(matrix, dtype=complex)
        out = ZSeries(self.ncomp, self.ctx, self.zmax, self.vmin, rep)
        for p, r in self.rows.items():
            V = np.stack([s.c for s in r])  # ncomp x ctx.size
            C = np.linalg.solve(M, V)
            out.rows[p] = [TruncatedSeries(self.ctx, C[c]) for c in range(self.ncomp)]
        return out

    def map_rows(self, fn):
        """Apply fn(series) -> series to every component of every row."""
        out = ZSeries(self.ncomp, self.ctx, self.zmax, self.vmin, self.rep)
        for p, r in self.rows.items():
            out.rows[p] = [fn(s) for s in r]
        return out

    def to_json_dict(self, extra=None):
        d = {
            "ncomp": self.ncomp,
            "nvars": self.ctx.nvars,
            "degree_cap": self.ctx.cap,
            "zmax": self.zmax,
            "vmin": self.vmin,
            "rep": self.rep,
            "rows": [
                {
                    "zpower": p,
                    "components": [s.to_json_dict() for s in self.rows[p]],
                }
                for p in sorted(self.rows, reverse=True)
            ],
        }
        if extra:
            d.update(extra)
        return d
