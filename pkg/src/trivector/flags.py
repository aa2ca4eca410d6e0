"""Compatible flags F1 < F3 < F6 < F8 for a trivector: the 31 vanishing
conditions, the point-anchored flag search, and the Chow-ring degree
certificate for the compatibility bundle."""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass

from .errors import Disagreement, NonStableInput
from .fields import Field
from .linalg import Matrix, kernel_matrix
from .loci import rank_locus_codes, DEFAULT_POINT_BUDGET
from .polys import embed_map, extension_of
from .trivector import Trivector, gl_act, phi_at

__all__ = [
    "FLAG_MONOMIALS", "Flag1368", "CompatibilityReport", "flag_compatible",
    "standard_flag", "flag_search", "FlagSearchReport", "chern_top_class",
    "flags_at_point", "reduce_mod_symmetric",
]


def _flag_monomials():
    """The 31 coefficient-vanishing conditions for the standard flag, listed
    family by family."""
    out = []
    for i in range(4, 9):
        for j in range(i + 1, 9):
            out.append((i, j, 9))
    for i in (2, 3):
        for j in range(4, 9):
            out.append((i, j, 9))
    for i in range(2, 7):
        out.append((i, 7, 8))
    for i in range(4, 7):
        for j in range(i + 1, 7):
            out.append((i, j, 7))
            out.append((i, j, 8))
    return tuple(out)


FLAG_MONOMIALS = _flag_monomials()
assert len(FLAG_MONOMIALS) == 31


class Flag1368:
    """Nested subspaces of dimensions 1, 3, 6, 8 given by row-reduced bases."""

    __slots__ = ("field", "mats")

    DIMS = (1, 3, 6, 8)

    def __init__(self, field: Field, f1, f3, f6, f8):
        self.field = field
        self.mats = {}
        prev = None
        for dim, rows in zip(self.DIMS, (f1, f3, f6, f8)):
            m = rows if isinstance(rows, Matrix) else Matrix(field, rows)
            if m.nrows != dim or m.ncols != 9:
                raise ValueError("F%d needs a %d x 9 basis" % (dim, dim))
            red, piv = m.rref()
            if len(piv) != dim:
                raise ValueError("F%d basis is not of rank %d" % (dim, dim))
            self.mats[dim] = red
            if prev is not None and prev.stack(red).rank() != dim:
                raise ValueError("containment F%d < F%d fails"
                                 % (prev.nrows, dim))
            prev = red

    def __getitem__(self, dim):
        return self.mats[dim]

    def __eq__(self, other):
        return isinstance(other, Flag1368) and all(
            self.mats[d] == other.mats[d] for d in self.DIMS)

    def key(self):
        f = self.field
        return tuple(tuple(f.to_str(x) for x in row)
                     for d in self.DIMS for row in self.mats[d].rows)

    def to_json(self):
        f = self.field
        return {"F%d" % d: [[f.to_str(x) for x in row]
                            for row in self.mats[d].rows]
                for d in self.DIMS}


def standard_flag(field: Field) -> Flag1368:
    rows = [[field.one if i == j else field.zero for j in range(9)]
            for i in range(8)]
    return Flag1368(field, rows[:1], rows[:3], rows[:6], rows[:8])


@dataclass
class CompatibilityReport:
    compatible: bool
    violated: list   # (triple, coefficient) pairs

    def to_json(self):
        return {"compatible": self.compatible,
                "violated": [{"ijk": list(t), "c": repr(c)}
                             for t, c in self.violated]}


def _adapted_matrix(flag: Flag1368) -> Matrix:
    """An invertible matrix whose first 1, 3, 6, 8 columns span the flag."""
    field = flag.field
    basis = []
    basis_mat = None
    for dim in Flag1368.DIMS + (9,):
        cands = (flag[dim].rows if dim != 9 else
                 Matrix.identity(field, 9).rows)
        for row in cands:
            if len(basis) == dim:
                break
            trial = Matrix(field, basis + [list(row)])
            if trial.rank() == len(basis) + 1:
                basis.append(list(row))
                basis_mat = trial
    if len(basis) != 9:
        raise ValueError("flag does not extend to a basis")
    return basis_mat.transpose()


def flag_compatible(t: Trivector, flag: Flag1368) -> CompatibilityReport:
    """Change basis so the flag becomes standard and test the 31 vanishing
    conditions; the verdict is independent of the chosen transporter."""
    g = _adapted_matrix(flag)
    adapted = gl_act(g.inverse(), t)
    violated = []
    for trip in FLAG_MONOMIALS:
        c = adapted.coeff(trip)
        if not c.is_zero():
            violated.append((trip, c))
    return CompatibilityReport(not violated, violated)


# ---------------------------------------------------------------------------
# flag search through the rank-4 locus

def _span_of_trivector(v: Trivector) -> Matrix:
    """Support of a trivector: span of all double contractions (one pass
    over the terms: each term feeds its three pair-contractions)."""
    field = v.field
    z = field.zero
    rows_by_pair = {}
    for (i, j, k), c in v.coeffs.items():
        for pair, other, flip in (((i, j), k, False),
                                  ((i, k), j, True),
                                  ((j, k), i, False)):
            vec = rows_by_pair.get(pair)
            if vec is None:
                vec = [z] * 9
                rows_by_pair[pair] = vec
            vec[other - 1] = vec[other - 1] - c if flip else vec[other - 1] + c
    rows = [r for r in rows_by_pair.values()
            if any(not x.is_zero() for x in r)]
    if not rows:
        return Matrix(field, [])
    red, piv = Matrix(field, rows).rref()
    return Matrix(field, red.rows[:len(piv)])


def _wedge_u_bivector(field, u, m: Matrix) -> Trivector:
    """u ^ (the bivector with matrix m) as a trivector."""
    coeffs = {}
    for a in range(9):
        for b in range(a + 1, 9):
            c = m.rows[a][b]
            if c.is_zero():
                continue
            for pos, uc in enumerate(u):
                if uc.is_zero() or pos == a or pos == b:
                    continue
                trip = tuple(sorted((pos + 1, a + 1, b + 1)))
                # sign of sorting (pos, a, b) with u in front
                if pos < a:
                    sgn = 1
                elif pos < b:
                    sgn = -1
                else:
                    sgn = 1
                v = uc * c if sgn > 0 else -(uc * c)
                s = coeffs.get(trip)
                s = v if s is None else s + v
                if s.is_zero():
                    coeffs.pop(trip, None)
                else:
                    coeffs[trip] = s
    return Trivector(field, coeffs)


def _wedge6_support(field, w6) -> Matrix | None:
    """For a pure six-vector: its 6-dimensional support; None if not pure."""
    from .e8 import EPS
    # dual three-form on V*; the contraction formula is index-label agnostic,
    # so reuse the trivector machinery on the dual side
    dual = Trivector(field, {trip: (c if EPS[trip] > 0 else -c)
                             for trip, c in w6.coeffs.items()})
    if dual.is_zero():
        return None
    star_basis = _span_of_trivector(dual)
    if star_basis.nrows != 3:
        return None
    support = kernel_matrix(star_basis)
    return support if support.nrows == 6 else None


def flags_at_point(t: Trivector, x_coords, early_exit: bool = False) -> list:
    """All compatible flags whose top space is the annihilator of x.

    Candidates for the line F1 run over the image of the pencil at x; the
    chain F3, F6 is then forced and the Eq-class compatibility test is the
    final filter.  With early_exit the scan stops at the first hit (a stable
    trivector has at most one compatible flag per rank-4 point)."""
    from .e8 import wedge33
    field = t.field
    m = phi_at(t, list(x_coords))
    red, piv = m.rref()
    if len(piv) != 4:
        return []
    s4 = Matrix(field, red.rows[:4])
    f8 = kernel_matrix(Matrix(field, [list(x_coords)]))
    out = []
    els = list(field.elements())
    for lead in range(4):
        for tail in itertools.product(els, repeat=3 - lead):
            coeffs = ([field.zero] * lead + [field.one] + list(tail))
            u = [field.zero] * 9
            for cf, row in zip(coeffs, s4.rows):
                if not cf.is_zero():
                    u = [a + cf * b for a, b in zip(u, row)]
            v1 = _wedge_u_bivector(field, u, m)
            if v1.is_zero():
                continue
            v2 = wedge33(v1, t)
            if v2.is_zero():
                continue
            f6 = _wedge6_support(field, v2)
            if f6 is None:
                continue
            f3 = _span_of_trivector(v1)
            if f3.nrows != 3:
                continue
            try:
                flag = Flag1368(field, Matrix(field, [u]), f3, f6, f8)
            except ValueError:
                continue
            if flag_compatible(t, flag).compatible:
                out.append(flag)
                if early_exit:
                    return out
    keys = {f.key() for f in out}
    if len(keys) != len(out):
        raise Disagreement("duplicate flags from one rank-4 point")
    return out


@dataclass
class FlagSearchReport:
    flags: list          # (Flag1368, degree) with the flag over the extension
    weighted_count: int
    complete: bool
    searched_degrees: list
    skipped_degrees: list
    elapsed: float

    def to_json(self):
        return {"weighted_count": self.weighted_count,
                "complete": self.complete,
                "searched_degrees": self.searched_degrees,
                "skipped_degrees": self.skipped_degrees,
                "flags": [{"degree": d, **f.to_json()} for f, d in self.flags],
                "elapsed_s": round(self.elapsed, 3)}


def _frobenius_orbit_key(base_order, coords):
    """Smallest encoding among the Frobenius conjugates of a projective
    point (canonical representatives compared by coordinate encodings)."""
    field = coords[0].field

    def encode(cs):
        lead = next(c for c in cs if not c.is_zero())
        inv = lead.inv()
        return tuple(field.to_int(c * inv) for c in cs)

    best = cur = list(coords)
    best_key = encode(cur)
    while True:
        cur = [c ** base_order for c in cur]
        key = encode(cur)
        if key == encode(coords):
            break
        if key < best_key:
            best_key = key
    return best_key, encode(coords)


def flag_search(t: Trivector, max_ext_degree: int = 1,
                point_budget: int = DEFAULT_POINT_BUDGET,
                scan_cutoff: int = 30_000_000,
                verify_stable: bool = False) -> FlagSearchReport:
    """Enumerate compatible flags degree by degree through the rank-4 locus.

    The weighted count (each Frobenius orbit weighs its field-of-definition
    degree) can never exceed 81; the report is marked complete exactly when
    it reaches 81 within the searched degrees.  Non-stable inputs are refused
    when a rank <= 2 point shows up in a scan, or up front with
    verify_stable (which runs the degree-1 destabilizer search).
    """
    base = t.field
    if verify_stable:
        from .stability import destabilizer_search
        if destabilizer_search(t, 1).status != "stable":
            raise NonStableInput("destabilizer search found a witness")
    t0 = time.time()
    found = []
    weighted = 0
    searched, skipped = [], []
    from .scan import projective_count
    for d in range(1, max_ext_degree + 1):
        ext = extension_of(base, d)
        if projective_count(ext.order) > min(point_budget, scan_cutoff):
            skipped.append(d)
            continue
        emb = embed_map(base, ext)
        te = t.map_coeffs(ext, emb) if d > 1 else t
        kern, rep, codes, ranks = rank_locus_codes(te, max_rank=4,
                                                   budget=point_budget)
        if rep.counts.get(0, 0) or rep.counts.get(2, 0):
            raise NonStableInput("rank <= 2 point found: input is not stable")
        searched.append(d)
        for row in codes:
            coords = [kern.decode(c) for c in row]
            orbit_key, self_key = _frobenius_orbit_key(base.order, coords)
            if orbit_key != self_key:
                continue            # one representative per orbit
            # minimal field of definition must be exactly d
            from .polys import element_degree
            deg = 1
            for c in coords:
                e = element_degree(c, base)
                deg = deg * e // _gcd(deg, e)
            if deg != d:
                continue
            for flag in flags_at_point(te, coords, early_exit=True):
                found.append((flag, d))
                weighted += d
    if weighted > 81:
        raise Disagreement("weighted flag count %d exceeds 81" % weighted)
    return FlagSearchReport(found, weighted, weighted == 81,
                            searched, skipped, time.time() - t0)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# the Chow-ring certificate: product of the 31 condition classes

def _h_tail(i: int):
    """Monomials of h_i(x_i, ..., x_9) other than the leading x_i^i."""
    out = []
    for combo in itertools.combinations_with_replacement(range(i - 1, 9), i):
        e = [0] * 9
        for v in combo:
            e[v] += 1
        e = tuple(e)
        if e[i - 1] == i:
            continue
        out.append(e)
    return tuple(out)


_H_TAILS = {i: _h_tail(i) for i in range(1, 10)}


def reduce_mod_symmetric(poly: dict) -> dict:
    """Normal form of an integer-coefficient polynomial modulo the ideal of
    positive-degree symmetric polynomials in 9 variables.

    Divides by the classical lex Groebner basis whose i-th element is the
    complete homogeneous polynomial of degree i in the last 10-i variables
    (leading term x_i^i); normal forms have exponent i-1 at most in x_i.
    """
    poly = {e: c for e, c in poly.items() if c}
    heap = [tuple(-v for v in e) for e in poly]
    heapq.heapify(heap)
    seen = set(heap)
    while heap:
        neg = heapq.heappop(heap)
        seen.discard(neg)
        e = tuple(-v for v in neg)
        c = poly.get(e)
        if not c:
            continue
        i = next((k for k in range(1, 10) if e[k - 1] >= k), None)
        if i is None:
            continue
        del poly[e]
        rest = list(e)
        rest[i - 1] -= i
        for tail in _H_TAILS[i]:
            ne = tuple(r + s for r, s in zip(rest, tail))
            poly[ne] = poly.get(ne, 0) - c
            if poly[ne] == 0:
                del poly[ne]
                continue
            nneg = tuple(-v for v in ne)
            if nneg not in seen:
                heapq.heappush(heap, nneg)
                seen.add(nneg)
    return poly


def chern_top_class():
    """The product of the 31 linear forms x_i + x_j + x_k over the condition
    monomials, reduced modulo the symmetric ideal; returns
    (coefficient, exponent_vector) of the single surviving monomial."""
    poly = {(0,) * 9: 1}
    for (i, j, k) in FLAG_MONOMIALS:
        out = {}
        for e, c in poly.items():
            for var in (i, j, k):
                ne = list(e)
                ne[var - 1] += 1
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + c
        poly = reduce_mod_symmetric(out)
    if len(poly) != 1:
        raise Disagreement("top-class reduction left %d monomials" % len(poly))
    (exps, coeff), = poly.items()
    return coeff, exps
