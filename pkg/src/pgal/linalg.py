"""Dense GF(p) linear algebra on numpy arrays, sized for desk-scale cohomology.

Matrices are kept in reduced row echelon form (RREF) so that reducing a
block of incoming rows is a single exact float64 matmul (all intermediate
values stay far below 2**53).
"""

from __future__ import annotations

import numpy as np


class GFMatrix:
    """Incrementally built RREF over GF(p) with a fixed number of columns."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, block: np.ndarray) -> np.ndarray:
        """Return block reduced modulo the current row space (RREF trick)."""
        block = np.asarray(block, dtype=np.int64) % self.p
        if not self.pivots or not block.size:
            return block
        coeff = block[:, self.pivots]
        if not coeff.any():
            return block
        red = block - (coeff.astype(np.float64) @ self.rows.astype(np.float64)).astype(np.int64)
        return red % self.p

    def _inv(self, a: int) -> int:
        return pow(int(a), self.p - 2, self.p)

    def add_rows(self, block: np.ndarray) -> int:
        """Reduce a block against the RREF and absorb any new pivot rows.

        Returns the number of pivots added.
        """
        red = self.reduce(block)
        if not red.size:
            return 0
        nz = np.flatnonzero(red.any(axis=1))
        new_rows: list[np.ndarray] = []
        new_piv: list[int] = []
        for i in nz:
            v = red[i].copy()
            for r, c in zip(new_rows, new_piv):
                f = v[c]
                if f:
                    v = (v - f * r) % self.p
            j = int(np.flatnonzero(v)[0]) if v.any() else -1
            if j < 0:
                continue
            v = v * self._inv(v[j]) % self.p
            for r in new_rows:
                f = r[j]
                if f:
                    r -= f * v
                    r %= self.p
            new_rows.append(v)
            new_piv.append(j)
        if not new_rows:
            return 0
        npmat = np.stack(new_rows)
        if self.pivots:
            coeff = self.rows[:, new_piv]
            if coeff.any():
                self.rows = (self.rows - coeff.astype(np.float64) @ npmat.astype(np.float64)).astype(np.int64) % self.p
        self.rows = np.vstack([self.rows, npmat])
        self.pivots.extend(new_piv)
        order = np.argsort(self.pivots)
        self.rows = self.rows[order]
        self.pivots = [self.pivots[k] for k in order]
        return len(new_piv)

    def nullspace(self) -> np.ndarray:
        """Basis of {v : R v = 0} for the row space R, one vector per row."""
        free = [j for j in range(self.ncols) if j not in set(self.pivots)]
        basis = np.zeros((len(free), self.ncols), dtype=np.int64)
        for k, j in enumerate(free):
            basis[k, j] = 1
            for r, c in zip(self.rows, self.pivots):
                basis[k, c] = (-r[j]) % self.p
        return basis
