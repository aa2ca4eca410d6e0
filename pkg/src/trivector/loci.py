"""Rank strata of the skew pencil over finite fields, the interpolated cubic
hypersurface, genus-2 point counts and Jacobian orders, the explicit curve
embedding certificate, and reconstruction of a trivector from its pencil."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

import numpy as np

from .errors import (BudgetExceeded, CertificateFailure,
                     DegenerateConfiguration, KernelDimNotOne, SingularCurve,
                     WeilViolation)
from .fields import Field
from .linalg import Matrix, rank_and_kernel
from .polys import MultiPoly, Poly, embed_map, extension_of, roots_in_field
from .scan import field_kernel, projective_chunks, projective_count
from .stability import curve_is_smooth
from .trivector import CurveCoeffs, Trivector, build_gamma_c, phi_at

__all__ = [
    "RankLocusReport", "enumerate_rank_locus", "rank_locus_codes",
    "batch_eval", "CubicForm", "cubic_of_Y", "DEGREE3_EXPONENTS",
    "jacobian_order_from_counts", "curve_point_counts", "curve_affine_points",
    "verify_curve_embedding", "embedding_point", "embedding_kernel_rows",
    "reconstruct_from_pencil", "pencil_basis",
    "DEFAULT_POINT_BUDGET", "isqrt_weil_bound", "EmbeddingCertificate",
]

DEFAULT_POINT_BUDGET = 250_000_000   # nominally allows q = 11
DEFAULT_POINT_CAP = 300_000


@dataclass
class RankLocusReport:
    q: int
    counts: dict
    elapsed: float

    def total(self):
        return sum(self.counts.values())

    def count_le(self, r):
        return sum(v for k, v in self.counts.items() if k <= r)

    def to_json(self):
        return {"q": self.q,
                "counts": {str(k): v for k, v in sorted(self.counts.items())},
                "elapsed_s": round(self.elapsed, 3)}


def _structure_tensor_codes(t: Trivector, kern):
    codes = np.zeros((9, 9, 9), dtype=np.int16)

    def add(a, b, k, el):
        codes[a - 1, b - 1, k - 1] = kern.encode(
            kern.decode(codes[a - 1, b - 1, k - 1]) + el)
        codes[b - 1, a - 1, k - 1] = kern.encode(
            kern.decode(codes[b - 1, a - 1, k - 1]) + (-el))

    for (i, j, k), c in t.coeffs.items():
        add(j, k, i, c)
        add(i, k, j, -c)
        add(i, j, k, c)
    return codes


def _scan_lead_block(args):
    """One lead-position block of the projective scan (parallel worker)."""
    field_spec, coeff_data, q, lead, max_rank = args
    from .fields import parse_field
    field = parse_field(field_spec)
    kern = field_kernel(field)
    t = Trivector(field, {trip: field.from_str(s) for trip, s in coeff_data})
    tensor = _structure_tensor_codes(t, kern)
    counts = {0: 0, 2: 0, 4: 0, 6: 0, 8: 0}
    kept_codes, kept_ranks = [], []
    tail = 8 - lead
    total = q ** tail
    start = 0
    chunk_size = 1 << 17
    while start < total:
        n = min(chunk_size, total - start)
        idx = np.arange(start, start + n, dtype=np.int64)
        pts = np.zeros((n, 9), dtype=np.int16)
        pts[:, lead] = 1
        for pos in range(tail):
            power = q ** (tail - 1 - pos)
            pts[:, lead + 1 + pos] = (idx // power) % q
        mats = kern.build_skew(pts, tensor)
        ranks = kern.batched_rank(mats)
        vals, cnts = np.unique(ranks, return_counts=True)
        for v, nn in zip(vals, cnts):
            counts[int(v)] = counts.get(int(v), 0) + int(nn)
        if max_rank is not None:
            keep = np.nonzero(ranks <= max_rank)[0]
            if keep.size:
                kept_codes.append(pts[keep].copy())
                kept_ranks.append(ranks[keep])
        start += n
    codes = np.concatenate(kept_codes) if kept_codes else \
        np.zeros((0, 9), np.int16)
    rks = np.concatenate(kept_ranks) if kept_ranks else np.zeros(0, np.int64)
    return counts, codes, rks


def rank_locus_codes(t: Trivector, max_rank: int | None = None,
                     budget: int = DEFAULT_POINT_BUDGET,
                     point_cap: int = DEFAULT_POINT_CAP,
                     threads: int = 1):
    """Scan engine: returns (kern, report, codes, ranks) where codes/ranks
    hold the canonical representatives with rank <= max_rank.

    The scan is data-parallel over lead-position blocks with an associative
    count merge, so the report is independent of the thread count."""
    field = t.field
    if field.order is None:
        raise BudgetExceeded("rank-locus enumeration needs a finite field")
    q = field.order
    total = projective_count(q)
    if total > budget:
        raise BudgetExceeded("P^8(F_%d) has %d points (budget %d)"
                             % (q, total, budget), count=total)
    kern = field_kernel(field)
    t0 = time.time()
    counts = {0: 0, 2: 0, 4: 0, 6: 0, 8: 0}
    kept_codes = []
    kept_ranks = []
    kept = 0
    if threads > 1:
        import multiprocessing as mp
        spec = field.spec_str()
        coeff_data = [(trip, field.to_str(c)) for trip, c in sorted(t.coeffs.items())]
        jobs = [(spec, coeff_data, q, lead, max_rank) for lead in range(9)]
        with mp.Pool(min(threads, 9)) as pool:
            parts = pool.map(_scan_lead_block, jobs)
        for cpart, codes_part, ranks_part in parts:   # lead order: deterministic
            for k, v in cpart.items():
                counts[k] = counts.get(k, 0) + v
            if codes_part.shape[0]:
                kept += codes_part.shape[0]
                if kept > point_cap:
                    raise BudgetExceeded(
                        "rank-locus point list exceeds cap %d" % point_cap,
                        count=kept)
                kept_codes.append(codes_part)
                kept_ranks.append(ranks_part)
        report = RankLocusReport(q, counts, time.time() - t0)
        if report.total() != total:
            raise AssertionError("rank stratification lost points")
        codes = np.concatenate(kept_codes) if kept_codes else \
            np.zeros((0, 9), np.int16)
        rks = np.concatenate(kept_ranks) if kept_ranks else np.zeros(0, np.int64)
        return kern, report, codes, rks
    tensor = _structure_tensor_codes(t, kern)
    for chunk in projective_chunks(q):
        mats = kern.build_skew(chunk, tensor)
        ranks = kern.batched_rank(mats)
        vals, cnts = np.unique(ranks, return_counts=True)
        for v, n in zip(vals, cnts):
            counts[int(v)] = counts.get(int(v), 0) + int(n)
        if max_rank is not None:
            keep = np.nonzero(ranks <= max_rank)[0]
            if keep.size:
                kept += int(keep.size)
                if kept > point_cap:
                    raise BudgetExceeded(
                        "rank-locus point list exceeds cap %d" % point_cap,
                        count=kept)
                kept_codes.append(chunk[keep].copy())
                kept_ranks.append(ranks[keep])
    report = RankLocusReport(q, counts, time.time() - t0)
    if report.total() != total:
        raise AssertionError("rank stratification lost points: %d != %d"
                             % (report.total(), total))
    if any(k % 2 for k in counts if counts[k]):
        raise AssertionError("odd rank in a skew pencil")
    codes = np.concatenate(kept_codes) if kept_codes else np.zeros((0, 9), np.int16)
    rks = np.concatenate(kept_ranks) if kept_ranks else np.zeros(0, np.int64)
    return kern, report, codes, rks


def enumerate_rank_locus(t: Trivector, max_rank: int | None = None,
                         with_points: bool = False,
                         budget: int = DEFAULT_POINT_BUDGET,
                         point_cap: int = DEFAULT_POINT_CAP,
                         threads: int = 1) -> tuple:
    """Exact rank stratification of the pencil over P^8 of t's base field.

    Returns (report, points) where points lists (coords, rank) for canonical
    representatives with rank <= max_rank (empty unless requested)."""
    kern, report, codes, ranks = rank_locus_codes(
        t, max_rank if with_points else None, budget, point_cap, threads)
    points = []
    if with_points and max_rank is not None:
        for row, r in zip(codes, ranks):
            points.append((tuple(kern.decode(c) for c in row), int(r)))
    return report, points


def batch_eval(kern, mp: MultiPoly, codes):
    """Evaluate a sparse multivariate polynomial at coded points (N, nvars)."""
    n = codes.shape[0]
    acc = np.zeros(n, dtype=codes.dtype)
    for e, c in mp.terms.items():
        term = np.full(n, kern.encode(c), dtype=codes.dtype)
        for i, k in enumerate(e):
            for _ in range(k):
                term = kern.mul(term, codes[:, i])
        acc = kern.add(acc, term)
    return acc


# ---------------------------------------------------------------------------
# the cubic hypersurface through the rank <= 6 locus

DEGREE3_EXPONENTS = tuple(sorted(
    (tuple(sum(1 for c in combo if c == v) for v in range(9))
     for combo in itertools.combinations_with_replacement(range(9), 3)),
    reverse=True))          # lexicographic, x1^3 first


class CubicForm:
    """Cubic in 9 variables: 165 coefficients over the degree-3 exponents,
    normalized so the lexicographically first nonzero coefficient is 1."""

    def __init__(self, field: Field, coeffs):
        self.field = field
        self.coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}
        if not self.coeffs:
            raise ValueError("cubic form must be nonzero")

    def as_multipoly(self) -> MultiPoly:
        return MultiPoly(self.field, 9, self.coeffs)

    def evaluate(self, coords):
        acc = self.field.zero
        for e, c in self.coeffs.items():
            term = c
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * coords[i]
            acc = acc + term
        return acc

    def partials(self):
        mp = self.as_multipoly()
        return [mp.derivative(i) for i in range(9)]

    def map_coeffs(self, target_field, fn):
        return CubicForm(target_field,
                         {e: fn(c) for e, c in self.coeffs.items()})


def _monomial_matrix(kern, codes):
    """Evaluation matrix of the 165 degree-3 monomials at coded points."""
    n = codes.shape[0]
    cols = np.zeros((n, len(DEGREE3_EXPONENTS)), dtype=codes.dtype)
    for idx, e in enumerate(DEGREE3_EXPONENTS):
        vs = [i for i in range(9) for _ in range(e[i])]
        col = kern.mul(codes[:, vs[0]], codes[:, vs[1]])
        cols[:, idx] = kern.mul(col, codes[:, vs[2]])
    return cols


def _interpolate_cubic_over(t: Trivector, sample_cap, budget):
    field = t.field
    kern, report, codes, ranks = rank_locus_codes(t, max_rank=6, budget=budget)
    if codes.shape[0] == 0:
        raise KernelDimNotOne("rank <= 6 locus is empty over F_%d" % field.order)
    stride = max(1, codes.shape[0] // sample_cap)
    rows = _monomial_matrix(kern, codes[::stride])
    kb = kern.kernel_basis(rows)
    if kb.shape[0] != 1 and stride > 1:
        rows = _monomial_matrix(kern, codes)
        kb = kern.kernel_basis(rows)
    if kb.shape[0] != 1:
        raise KernelDimNotOne("evaluation kernel has dimension %d" % kb.shape[0])
    coeffs = {}
    for e, code in zip(DEGREE3_EXPONENTS, kb[0]):
        if code:
            coeffs[e] = kern.decode(int(code))
    cubic = CubicForm(field, coeffs)
    lead = next(e for e in DEGREE3_EXPONENTS if e in cubic.coeffs)
    inv = cubic.coeffs[lead].inv()
    cubic = CubicForm(field, {e: c * inv for e, c in cubic.coeffs.items()})
    values = batch_eval(kern, cubic.as_multipoly(), codes)
    if np.any(values != 0):
        raise KernelDimNotOne("interpolated cubic misses an enumerated point")
    return cubic


def cubic_of_Y(t: Trivector, sample_cap: int = 400,
               budget: int = DEFAULT_POINT_BUDGET) -> CubicForm:
    """Interpolate the unique cubic through the rank <= 6 locus.

    The kernel of the evaluation matrix on the 165-dimensional cubic space
    must be exactly one-dimensional.  Very small base fields cannot separate
    all cubic monomials as point functions (over F_2 the kernel picks up the
    Frobenius function identities), so the interpolation moves to a quadratic
    extension when needed; the normalized result is Galois-fixed and descends
    back to base-field coefficients.
    """
    field = t.field
    try:
        return _interpolate_cubic_over(t, sample_cap, budget)
    except KernelDimNotOne:
        if field.order is None or field.order > 3:
            raise
    ext = extension_of(field, 2)
    emb = embed_map(field, ext)
    cubic = _interpolate_cubic_over(t.map_coeffs(ext, emb), sample_cap, budget)
    down = {}
    for e, c in cubic.coeffs.items():
        match = next((b for b in field.elements() if emb(b) == c), None)
        if match is None:
            return cubic      # honest answer over the extension
        down[e] = match
    return CubicForm(field, down)


# ---------------------------------------------------------------------------
# genus-2 counts and the Jacobian order

def isqrt_weil_bound(q: int) -> int:
    """floor(4 sqrt(q)) computed exactly."""
    lo, hi = 0, 4 * q
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid * mid <= 16 * q:
            lo = mid
        else:
            hi = mid - 1
    return lo


def jacobian_order_from_counts(n1: int, n2: int, q: int) -> int:
    """Order of the Jacobian of a genus-2 curve from its point counts over
    F_q and F_{q^2}, through the standard L-polynomial normalization."""
    e1 = q + 1 - n1
    p2 = q * q + 1 - n2
    if abs(e1) > isqrt_weil_bound(q):
        raise WeilViolation("|q+1-N1| = %d exceeds 4*sqrt(q)" % abs(e1))
    if abs(p2) > 4 * q:
        raise WeilViolation("|q^2+1-N2| = %d exceeds 4q" % abs(p2))
    if (e1 * e1 - p2) % 2 != 0:
        raise WeilViolation("parity of the power sums is impossible")
    e2 = (e1 * e1 - p2) // 2
    order = 1 - e1 + e2 - q * e1 + q * q
    if order <= 0:
        raise WeilViolation("computed Jacobian order %d is not positive" % order)
    return order


def _quadratic_root_count(field, a, b):
    """Number of roots of x^2 + a x + b over the (finite) field."""
    if field.char == 2:
        if a.is_zero():
            return 1          # Frobenius is bijective
        # 2 roots iff Tr(b / a^2) = 0
        u = b * (a * a).inv()
        tr = u
        cur = u
        m = field.order.bit_length() - 1
        for _ in range(m - 1):
            cur = cur * cur
            tr = tr + cur
        return 2 if tr.is_zero() else 0
    disc = a * a - field.el(4) * b
    if disc.is_zero():
        return 1
    chi = disc ** ((field.order - 1) // 2)
    return 2 if chi == field.one else 0


def curve_point_counts(c: CurveCoeffs, degrees,
                       check_smooth: bool = True) -> dict:
    """N_d = 1 + #affine points over the degree-d extension (the point at
    infinity of the normal form counts once)."""
    if check_smooth and not curve_is_smooth(c):
        raise SingularCurve("point counts require a smooth curve")
    base = c.field
    out = {}
    for d in degrees:
        ext = extension_of(base, d)
        emb = embed_map(base, ext)
        ce = c.map_coeffs(ext, emb)
        az = Poly(ext, [ce[15], ce[9], ce[3]])
        bz = Poly(ext, [ce[30], ce[24], ce[18], ce[12], ce[6], ext.one])
        n = 1
        for z in ext.elements():
            n += _quadratic_root_count(ext, az(z), bz(z))
        out[d] = n
    return out


def curve_affine_points(c: CurveCoeffs):
    """All affine points (x, z) over the base field."""
    field = c.field
    az = Poly(field, [c[15], c[9], c[3]])
    bz = Poly(field, [c[30], c[24], c[18], c[12], c[6], field.one])
    pts = []
    for z in field.elements():
        quad = Poly(field, [bz(z), az(z), field.one])
        for x in roots_in_field(quad):
            pts.append((x, z))
    return pts


# ---------------------------------------------------------------------------
# the explicit embedding and its kernel certificate

def embedding_point(field, x, z):
    """f(x, z) = [0 : 0 : -1 : 0 : z : 0 : -z^2 : x : z^3] in P(V9*)."""
    zero = field.zero
    return [zero, zero, -field.one, zero, z, zero, -(z * z), x, z * z * z]


def embedding_kernel_rows(c: CurveCoeffs, x, z):
    """The five covectors that must annihilate the pencil at f(x, z)."""
    f = c.field
    one, zero = f.one, f.zero
    z2 = z * z
    return [
        [one, zero, zero, z2, x, -(c[12] * z) - c[18], zero,
         -(c[9] * x) - c[24], zero],
        [zero, one, c[3], -z, zero, -z2 - (c[6] * z), -x - c[15],
         -(c[3] * x), zero],
        [zero, zero, one, zero, -z, zero, z2, -x, zero],
        [zero, zero, zero, zero, zero, one, zero, -z, zero],
        [zero, zero, zero, zero, zero, zero, zero, zero, one],
    ]


@dataclass
class EmbeddingCertificate:
    q: int
    points_checked: int
    ranks: dict
    weierstrass_rank: int

    def to_json(self):
        return {"q": self.q, "points_checked": self.points_checked,
                "weierstrass_rank": self.weierstrass_rank}


def verify_curve_embedding(c: CurveCoeffs) -> EmbeddingCertificate:
    """Checks, at every affine point of the curve: the pencil at the embedded
    point has rank <= 4 and all five kernel rows annihilate it; plus the
    rank <= 4 membership of the Weierstrass point at infinity."""
    field = c.field
    if not curve_is_smooth(c):
        raise SingularCurve("embedding certificate requires a smooth curve")
    t = build_gamma_c(c)
    ranks = {}
    pts = curve_affine_points(c)
    for (x, z) in pts:
        m = phi_at(t, embedding_point(field, x, z))
        r = m.rank()
        if r > 4:
            raise CertificateFailure("rank %d > 4 at point (%r, %r)" % (r, x, z))
        ranks[r] = ranks.get(r, 0) + 1
        for ridx, row in enumerate(embedding_kernel_rows(c, x, z)):
            if any(not v.is_zero() for v in m.apply(row)):
                raise CertificateFailure(
                    "kernel row %d fails at point (%r, %r)" % (ridx + 1, x, z))
    pinf = [field.zero] * 8 + [field.one]
    rinf = phi_at(t, pinf).rank()
    if rinf > 4:
        raise CertificateFailure("Weierstrass point at infinity has rank %d"
                                 % rinf)
    return EmbeddingCertificate(field.order, len(pts), ranks, rinf)


# ---------------------------------------------------------------------------
# recovering the trivector from its pencil of bilinear forms

def pencil_basis(t: Trivector):
    """The nine skew matrices phi_at(t, e_k*): the bilinear-form space."""
    field = t.field
    out = []
    for k in range(9):
        x = [field.zero] * 9
        x[k] = field.one
        out.append(phi_at(t, x))
    return out


def _independent(mats):
    field = mats[0].field
    flat = Matrix(field, [[m.rows[i][j] for i in range(9) for j in range(9)]
                          for m in mats])
    return flat.rank() == len(mats)


def reconstruct_from_pencil(w_mats, seed: int = 0, tries: int = 4000) -> Trivector:
    """Rebuild the trivector (up to scalar) from a basis of its space of
    bilinear forms.

    Ten rank-8 elements in general position pin the kernel-line map; the
    tenth element fixes the relative scales.
    """
    if len(w_mats) != 9:
        raise ValueError("need exactly 9 matrices")
    field = w_mats[0].field
    for m in w_mats:
        if m.nrows != 9 or m.ncols != 9:
            raise ValueError("matrices must be 9x9")
    if not _independent(w_mats):
        raise DegenerateConfiguration("the nine matrices are not independent")
    rng = random.Random(seed)

    def combo(coeffs):
        acc = Matrix.zero(field, 9, 9)
        for a, m in zip(coeffs, w_mats):
            if not a.is_zero():
                acc = acc + m.scale(a)
        return acc

    # nine rank-8 elements with independent coefficient vectors
    chosen = []
    chosen_mat = None
    for _ in range(tries):
        if len(chosen) == 9:
            break
        vec = [field.random(rng) for _ in range(9)]
        m = combo(vec)
        if m.rank() != 8:
            continue
        cand = Matrix(field, [c for c, _ in chosen] + [vec]) if chosen else \
            Matrix(field, [vec])
        if cand.rank() == len(chosen) + 1:
            chosen.append((vec, m))
            chosen_mat = cand
    if len(chosen) < 9:
        raise DegenerateConfiguration(
            "could not find nine independent rank-8 elements")
    # tenth rank-8 element with all coordinates nonzero in the chosen basis
    basis_inv = chosen_mat.transpose().inverse()
    lam = None
    tenth = None
    for _ in range(tries):
        vec = [field.random(rng) for _ in range(9)]
        m = combo(vec)
        if m.rank() != 8:
            continue
        coords = basis_inv.apply(vec)
        if all(not a.is_zero() for a in coords):
            lam = coords
            tenth = m
            break
    if lam is None:
        raise DegenerateConfiguration("no tenth rank-8 element in general position")

    # rescale so the tenth element is the sum of the nine
    scaled = [m.scale(a) for (vec, m), a in zip(chosen, lam)]
    kernels = []
    for m in scaled:
        _, kb = rank_and_kernel(m)
        if len(kb) != 1:
            raise DegenerateConfiguration("rank-8 element with fat kernel")
        kernels.append(kb[0])
    _, kb = rank_and_kernel(tenth)
    if len(kb) != 1:
        raise DegenerateConfiguration("tenth element with fat kernel")
    x0 = kb[0]
    # solve sum mu_i x_i = nu x0
    cols = [[k[i] for k in kernels] + [x0[i]] for i in range(9)]
    sysm = Matrix(field, cols)    # 9 x 10
    _, null = rank_and_kernel(sysm)
    sol = None
    for v in null:
        if all(not a.is_zero() for a in v):
            sol = v
            break
    if sol is None:
        raise DegenerateConfiguration("scale-fixing system has no generic solution")
    mu = sol[:9]

    # phi sends the scaled basis element i to mu_i x_i; transport that to the
    # original basis w_k through the coefficient matrix S (columns lam_i vec_i)
    s_mat = Matrix(field, [[lam[i] * chosen[i][0][k] for i in range(9)]
                           for k in range(9)])
    s_inv = s_mat.inverse()
    phi_rows = []
    for row in range(9):
        phi_rows.append([sum((s_inv.rows[i][k] * mu[i] * kernels[i][row]
                              for i in range(9) if not s_inv.rows[i][k].is_zero()),
                             field.zero) for k in range(9)])
    phi_mat = Matrix(field, phi_rows)   # column k = phi(w_k) in V9* coords
    try:
        psi = phi_mat.inverse()
    except Exception as exc:
        raise DegenerateConfiguration("kernel-line map is singular: %s" % exc)
    # column k of psi expresses iota_{e_k*}(gamma) in the w-basis
    coeffs = {}
    bivs = []
    for k in range(9):
        col = [psi.rows[i][k] for i in range(9)]
        bivs.append(combo(col))
    for (a, b, c) in itertools.combinations(range(1, 10), 3):
        v = bivs[c - 1].rows[a - 1][b - 1]
        if (bivs[b - 1].rows[a - 1][c - 1] != -v
                or bivs[a - 1].rows[b - 1][c - 1] != v):
            raise DegenerateConfiguration(
                "contraction data is not alternating; not a trivector pencil")
        if not v.is_zero():
            coeffs[(a, b, c)] = v
    out = Trivector(field, coeffs)
    if out.is_zero():
        raise DegenerateConfiguration("reconstruction collapsed to zero")
    return out
