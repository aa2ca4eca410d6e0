"""Vectorized exact kernels for the point scans over small finite fields.

Field elements are encoded as integers (the field's canonical integer
encoding); prime fields compute with modular arithmetic, extension fields of
order <= 256 go through precomputed addition/multiplication tables.  These
kernels only ever see encoded data, so no floating point is involved.
"""

from __future__ import annotations

import numpy as np

from .fields import ExtensionField, Field, PrimeField

__all__ = ["FieldKernel", "projective_chunks", "projective_count"]

_kernel_cache: dict = {}


def projective_count(q: int, dim: int = 9) -> int:
    return (q ** dim - 1) // (q - 1)


class FieldKernel:
    """Batched arithmetic over one finite field, codes in [0, q)."""

    def __init__(self, field: Field):
        self.field = field
        self.q = field.order
        if isinstance(field, PrimeField):
            self.prime = field.p if field.p <= np.iinfo(np.int64).max else None
            if self.prime is None:
                raise ValueError("prime too large for the scan kernel")
            self.table = None
            q = field.p
            self.inv_vec = np.array([0] + [pow(a, -1, q) for a in range(1, q)],
                                    dtype=np.int64)
        elif isinstance(field, ExtensionField):
            if field.order > 256:
                raise ValueError("table kernel limited to order <= 256")
            self.prime = None
            q = field.order
            els = [field.from_int(v) for v in range(q)]
            add = np.zeros((q, q), dtype=np.int16)
            mul = np.zeros((q, q), dtype=np.int16)
            for a in range(q):
                for b in range(q):
                    add[a, b] = field.to_int(els[a] + els[b])
                    mul[a, b] = field.to_int(els[a] * els[b])
            neg = np.array([field.to_int(-els[a]) for a in range(q)],
                           dtype=np.int16)
            inv = np.zeros(q, dtype=np.int16)
            for a in range(1, q):
                inv[a] = field.to_int(els[a].inv())
            self.table = (add, mul, neg, inv)
        else:
            raise ValueError("scan kernels need a finite field")

    # elementwise coded ops -------------------------------------------------
    def add(self, a, b):
        if self.prime:
            return (a + b) % self.prime
        return self.table[0][a, b]

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.prime
        return self.table[0][a, self.table[2][b]]

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.prime
        return self.table[1][a, b]

    def inv(self, a):
        if self.prime:
            return self.inv_vec[a]
        return self.table[3][a]

    def encode(self, el) -> int:
        return self.field.to_int(el)

    def decode(self, code: int):
        return self.field.from_int(int(code))

    # batched structure -----------------------------------------------------
    def build_skew(self, points, tensor):
        """points: (N, 9) codes; tensor: (9, 9, 9) codes with
        M[a,b] = sum_k tensor[a,b,k] * x_k; returns (N, 9, 9) codes."""
        n = points.shape[0]
        if self.prime:
            t2 = tensor.reshape(81, 9).T.astype(np.int64)  # (9, 81)
            flat = (points.astype(np.int64) @ t2) % self.prime
            return flat.reshape(n, 9, 9)
        add, mul = self.table[0], self.table[1]
        acc = np.zeros((n, 81), dtype=np.int16)
        t2 = tensor.reshape(81, 9)
        for k in range(9):
            col = t2[:, k]
            if not col.any():
                continue
            acc = add[acc, mul[col[None, :], points[:, k, None]]]
        return acc.reshape(n, 9, 9)

    def batched_rank(self, mats):
        """Ranks of a batch of 9x9 coded matrices (destroys mats)."""
        n, rows, _ = mats.shape
        ranks = np.zeros(n, dtype=np.int64)
        rowidx = np.arange(rows)
        sel = np.arange(n)
        for col in range(rows):
            colvals = mats[:, :, col]
            avail = (rowidx[None, :] >= ranks[:, None]) & (colvals != 0)
            piv = np.argmax(avail, axis=1)
            has = avail[sel, piv]
            idx = np.nonzero(has)[0]
            if idx.size == 0:
                continue
            pr, rr = piv[idx], ranks[idx]
            tmp = mats[idx, pr, :].copy()
            mats[idx, pr, :] = mats[idx, rr, :]
            mats[idx, rr, :] = tmp
            pivvals = mats[idx, rr, col]
            invs = self.inv(pivvals)
            mats[idx, rr, :] = self.mul(mats[idx, rr, :], invs[:, None])
            below = rowidx[None, :] > rr[:, None]
            factors = np.where(below, mats[idx, :, col], 0)
            prod = self.mul(factors[:, :, None], mats[idx, rr, :][:, None, :])
            mats[idx] = self.sub(mats[idx], prod)
            ranks[idx] += 1
        return ranks

    def rref(self, mat):
        """Exact reduced row echelon form of a single coded matrix;
        returns (rank, pivots, reduced copy)."""
        m = mat.copy()
        nrows, ncols = m.shape
        pivots = []
        r = 0
        for c in range(ncols):
            col = m[r:, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            p = r + nz[0]
            if p != r:
                m[[r, p]] = m[[p, r]]
            m[r] = self.mul(m[r], self.inv(m[r, c]))
            others = np.nonzero(m[:, c])[0]
            others = others[others != r]
            if others.size:
                factors = m[others, c]
                m[others] = self.sub(m[others],
                                     self.mul(factors[:, None], m[r][None, :]))
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        return r, pivots, m

    def kernel_basis(self, mat):
        """Reduced-echelon right-kernel basis of a coded matrix."""
        rank, pivots, red = self.rref(mat)
        ncols = mat.shape[1]
        free = [c for c in range(ncols) if c not in pivots]
        out = np.zeros((len(free), ncols), dtype=mat.dtype)
        neg = (lambda v: (-v) % self.prime) if self.prime \
            else (lambda v: self.table[2][v])
        for i, fc in enumerate(free):
            out[i, fc] = 1
            for rr, pc in enumerate(pivots):
                out[i, pc] = neg(red[rr, fc])
        if len(free) > 1:
            _, _, out = self.rref(out)
        return out


def field_kernel(field: Field) -> FieldKernel:
    key = field
    if key not in _kernel_cache:
        _kernel_cache[key] = FieldKernel(field)
    return _kernel_cache[key]


def projective_chunks(q: int, chunk_size: int = 1 << 17):
    """Canonical representatives of P^8(F_q) (first nonzero coordinate is 1),
    yielded as (N, 9) integer-code arrays in lexicographic order."""
    for lead in range(9):
        tail = 8 - lead
        total = q ** tail
        start = 0
        while start < total:
            n = min(chunk_size, total - start)
            idx = np.arange(start, start + n, dtype=np.int64)
            pts = np.zeros((n, 9), dtype=np.int16)
            pts[:, lead] = 1
            for pos in range(tail):
                power = q ** (tail - 1 - pos)
                pts[:, lead + 1 + pos] = (idx // power) % q
            yield pts
            start += n
