"""The Z/3-graded 248-dimensional Lie algebra gl9-mod-scalars + wedge^3 +
wedge^6, its bracket, restricted cubing in characteristic 3, and the
3-rank classifier for the normal-form curves.

The degree-0 component is gl9 modulo scalar matrices (canonical
representative: (9,9) entry zero).  In characteristic 3 scalars act as zero
on both wedge powers, so classes act through any representative; away from
characteristic 3 the class action is the traceless-representative action,
which the uniform trace-correction constants below encode.  All remaining
normalization constants are pinned by the Jacobi identity (the test suite
re-derives them); they were fitted once by exact computation and frozen.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import Disagreement, FieldMismatch, NoSolution, NotCharThree, SingularCurve
from .fields import Field
from .linalg import Matrix, is_semisimple
from .scan import field_kernel
from .stability import curve_is_smooth
from .trivector import TRIPLES, TRIPLE_INDEX, CurveCoeffs, Trivector, build_gamma_c

__all__ = [
    "Wedge6", "GradedE8Element", "bracket", "e8_constants", "ad_matrix",
    "restricted_power", "three_rank", "act3", "act6", "wedge33", "dual_wedge",
    "pairing_gl", "canonical_deg0", "deg0_basis_coords", "ThreeRankReport",
]

SIXES = tuple(itertools.combinations(range(1, 10), 6))
COMP = {t: tuple(sorted(set(range(1, 10)) - set(t))) for t in TRIPLES}
COMP6 = {s: tuple(sorted(set(range(1, 10)) - set(s))) for s in SIXES}


def _shuffle_sign(a, b):
    """Sign of the permutation sorting the concatenation of two disjoint
    sorted tuples."""
    inv = sum(1 for x in a for y in b if x > y)
    return -1 if inv % 2 else 1


EPS = {t: _shuffle_sign(t, COMP[t]) for t in TRIPLES}   # e_T ^ e_comp(T) = EPS vol


def _insert_sign(tup, val):
    """(sorted tuple with val inserted, sign) or None if val is present."""
    if val in tup:
        return None
    pos = sum(1 for x in tup if x < val)
    out = tup[:pos] + (val,) + tup[pos:]
    return out, (-1 if pos % 2 else 1)


class Wedge6:
    """Element of the sixth wedge power, stored by the complementary triple:
    coefficient at triple T multiplies e_{comp(T)} (indices ascending)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=None):
        self.field = field
        clean = {}
        for t, c in (coeffs or {}).items():
            c = field.el(c) if isinstance(c, int) else c
            if not c.is_zero():
                clean[tuple(t)] = c
        self.coeffs = clean

    @classmethod
    def from_six_subsets(cls, field, six_coeffs):
        return cls(field, {COMP6[s]: c for s, c in six_coeffs.items()})

    def six_subsets(self):
        return {COMP[t]: c for t, c in self.coeffs.items()}

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Wedge6) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for t, c in other.coeffs.items():
            s = out.get(t)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(t, None)
            else:
                out[t] = s
        return Wedge6(self.field, out)

    def __neg__(self):
        return Wedge6(self.field, {t: -c for t, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        a = self.field.el(a) if isinstance(a, int) else a
        return Wedge6(self.field, {t: c * a for t, c in self.coeffs.items()})

    def to_vector(self):
        z = self.field.zero
        return [self.coeffs.get(t, z) for t in TRIPLES]

    @classmethod
    def from_vector(cls, field, vec):
        return cls(field, dict(zip(TRIPLES, vec)))

    def __repr__(self):
        return " + ".join("(%r)e%s" % (c, "".join(map(str, COMP[t])))
                          for t, c in sorted(self.coeffs.items())) or "0"


def act3(a: Matrix, t: Trivector, tr_coeff=None) -> Trivector:
    """Derivation action of a matrix on the third wedge power, plus an
    optional multiple of the trace acting as a scalar."""
    field = t.field
    out = {}

    def bump(key, val):
        s = out.get(key)
        s = val if s is None else s + val
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s

    for trip, c in t.coeffs.items():
        for slot in range(3):
            i = trip[slot]
            rest = trip[:slot] + trip[slot + 1:]
            sign0 = -1 if slot % 2 else 1
            for row in range(1, 10):
                aval = a.rows[row - 1][i - 1]
                if aval.is_zero():
                    continue
                ins = _insert_sign(rest, row)
                if ins is None:
                    continue
                key, sgn = ins
                v = c * aval
                if sign0 * sgn < 0:
                    v = -v
                bump(key, v)
    result = Trivector(field, out)
    if tr_coeff is not None and not tr_coeff.is_zero():
        tr = field.zero
        for d in range(9):
            tr = tr + a.rows[d][d]
        if not tr.is_zero():
            result = result + t.scale(tr * tr_coeff)
    return result


def act6(a: Matrix, w: Wedge6, tr_coeff=None) -> Wedge6:
    """Derivation action on the sixth wedge power (same conventions)."""
    field = w.field
    out = {}

    def bump(six, val):
        s = out.get(six)
        s = val if s is None else s + val
        if s.is_zero():
            out.pop(six, None)
        else:
            out[six] = s

    for six, c in w.six_subsets().items():
        for slot in range(6):
            i = six[slot]
            rest = six[:slot] + six[slot + 1:]
            sign0 = -1 if slot % 2 else 1
            for row in range(1, 10):
                aval = a.rows[row - 1][i - 1]
                if aval.is_zero():
                    continue
                ins = _insert_sign(rest, row)
                if ins is None:
                    continue
                key, sgn = ins
                v = c * aval
                if sign0 * sgn < 0:
                    v = -v
                bump(key, v)
    result = Wedge6.from_six_subsets(field, out)
    if tr_coeff is not None and not tr_coeff.is_zero():
        tr = field.zero
        for d in range(9):
            tr = tr + a.rows[d][d]
        if not tr.is_zero():
            result = result + w.scale(tr * tr_coeff)
    return result


def wedge33(t: Trivector, u: Trivector) -> Wedge6:
    """Wedge of two trivectors."""
    field = t.field
    out = {}
    for t1, c1 in t.coeffs.items():
        set1 = set(t1)
        for t2, c2 in u.coeffs.items():
            if set1 & set(t2):
                continue
            sgn = _shuffle_sign(t1, t2)
            six = tuple(sorted(t1 + t2))
            v = c1 * c2
            if sgn < 0:
                v = -v
            s = out.get(six)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(six, None)
            else:
                out[six] = s
    return Wedge6.from_six_subsets(field, out)


def dual_wedge(w1: Wedge6, w2: Wedge6) -> Trivector:
    """Wedge through the volume-form duality: both six-vectors become
    three-forms on the dual side, are wedged there, and the resulting
    dual six-form comes back as a trivector."""
    field = w1.field
    # dual three-form coefficients live on the stored complement triples
    out = {}
    for t1, c1 in w1.coeffs.items():
        d1 = c1 if EPS[t1] > 0 else -c1
        set1 = set(t1)
        for t2, c2 in w2.coeffs.items():
            if set1 & set(t2):
                continue
            d2 = c2 if EPS[t2] > 0 else -c2
            sgn = _shuffle_sign(t1, t2)
            six = tuple(sorted(t1 + t2))
            tout = COMP6[six]
            v = d1 * d2
            if sgn * EPS[tout] < 0:
                v = -v
            s = out.get(tout)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(tout, None)
            else:
                out[tout] = s
    return Trivector(field, out)


def _elementary_act3(j: int, i: int, t: Trivector) -> Trivector:
    """Action of the elementary matrix sending e_i to e_j."""
    field = t.field
    out = {}
    for trip, c in t.coeffs.items():
        if i not in trip:
            continue
        slot = trip.index(i)
        rest = trip[:slot] + trip[slot + 1:]
        sign0 = -1 if slot % 2 else 1
        ins = _insert_sign(rest, j)
        if ins is None:
            continue
        key, sgn = ins
        v = c if sign0 * sgn > 0 else -c
        s = out.get(key)
        s = v if s is None else s + v
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return Trivector(field, out)


def _vol_pairing(t: Trivector, w: Wedge6):
    """Coefficient of the volume form in t ^ w."""
    field = t.field
    acc = field.zero
    for trip, c in t.coeffs.items():
        d = w.coeffs.get(trip)
        if d is None:
            continue
        v = c * d
        acc = acc + (v if EPS[trip] > 0 else -v)
    return acc


def pairing_gl(t: Trivector, w: Wedge6) -> Matrix:
    """The gl9 element adjoint to the derivation action:
    entry (i, j) is the volume coefficient of (E_ji . t) ^ w."""
    field = t.field
    rows = [[field.zero] * 9 for _ in range(9)]
    for i in range(1, 10):
        for j in range(1, 10):
            moved = _elementary_act3(j, i, t)
            rows[i - 1][j - 1] = _vol_pairing(moved, w)
    return Matrix(field, rows)


def canonical_deg0(a: Matrix) -> Matrix:
    """Representative of the class of a modulo scalars: (9,9) entry zero."""
    c = a.rows[8][8]
    if c.is_zero():
        return a
    field = a.field
    return Matrix(field, [[a.rows[i][j] - (c if i == j else field.zero)
                           for j in range(9)] for i in range(9)])


@dataclass(frozen=True)
class E8Constants:
    a: object        # [deg1, deg2] pairing multiple
    b: object        # [deg2, deg2] dual-wedge multiple
    s1: object       # trace coefficient of the class action on deg1
    s2: object       # trace coefficient of the class action on deg2
    tau: object      # trace-line component of the [deg1, deg2] bracket
    h_model: bool    # char 3: route the trace through the h-direction

    def act1(self, a_mat: Matrix, t: Trivector) -> Trivector:
        return self._act(a_mat, t, act3, self.s1)

    def act2(self, a_mat: Matrix, w: Wedge6) -> Wedge6:
        return self._act(a_mat, w, act6, self.s2)

    def _act(self, a_mat, obj, act, weight):
        field = a_mat.field
        tr = field.zero
        for d in range(9):
            tr = tr + a_mat.rows[d][d]
        if not self.h_model:
            out = act(a_mat, obj)
            if not tr.is_zero() and not weight.is_zero():
                out = out + obj.scale(tr * weight)
            return out
        # trace classes act through the extra direction of Lie(SL9/mu3):
        # strip the trace onto E99, then add the h-weight as a scalar
        if tr.is_zero():
            return act(a_mat, obj)
        adj = Matrix(field, [[a_mat.rows[i][j] - (tr if i == j == 8 else field.zero)
                              for j in range(9)] for i in range(9)])
        out = act(adj, obj)
        if not weight.is_zero():
            out = out + obj.scale(tr * weight)
        return out


# fitted once by the Jacobi gate (the test suite re-derives both sets)
_FITTED_RATIONAL = {"a": Fraction(1), "b": Fraction(-1),
                    "s1": Fraction(-1, 3), "s2": Fraction(-2, 3), "tau": Fraction(0)}
_FITTED_CHAR3 = {"a": 1, "b": 2, "s1": 1, "s2": 2, "tau": 2}

_constants_cache: dict = {}


def e8_constants(field: Field) -> E8Constants:
    if field in _constants_cache:
        return _constants_cache[field]
    if field.char == 3:
        vals = {k: field.el(v) for k, v in _FITTED_CHAR3.items()}
        consts = E8Constants(h_model=True, **vals)
    else:
        vals = {}
        for k, fr in _FITTED_RATIONAL.items():
            fr = Fraction(fr)
            if field.order is None:
                vals[k] = field.el(fr)
            else:
                num = field.el(fr.numerator)
                den = field.el(fr.denominator)
                vals[k] = num * den.inv()
        consts = E8Constants(h_model=False, **vals)
    _constants_cache[field] = consts
    return consts


class GradedE8Element:
    """Triple (deg0 class, trivector, six-vector); deg0 is canonicalized."""

    __slots__ = ("field", "deg0", "deg1", "deg2")

    def __init__(self, field, deg0=None, deg1=None, deg2=None):
        self.field = field
        self.deg0 = canonical_deg0(deg0) if deg0 is not None \
            else Matrix.zero(field, 9, 9)
        self.deg1 = deg1 if deg1 is not None else Trivector(field)
        self.deg2 = deg2 if deg2 is not None else Wedge6(field)

    def is_zero(self):
        return (all(c.is_zero() for row in self.deg0.rows for c in row)
                and self.deg1.is_zero() and self.deg2.is_zero())

    def __eq__(self, other):
        return (isinstance(other, GradedE8Element)
                and self.deg0 == other.deg0 and self.deg1 == other.deg1
                and self.deg2 == other.deg2)

    def __add__(self, other):
        return GradedE8Element(self.field, self.deg0 + other.deg0,
                               self.deg1 + other.deg1, self.deg2 + other.deg2)

    def __sub__(self, other):
        return GradedE8Element(self.field, self.deg0 - other.deg0,
                               self.deg1 - other.deg1, self.deg2 - other.deg2)

    def scale(self, c):
        c = self.field.el(c) if isinstance(c, int) else c
        return GradedE8Element(self.field, self.deg0.scale(c),
                               self.deg1.scale(c), self.deg2.scale(c))

    def __repr__(self):
        return "GradedE8Element(deg0=%r, deg1=%r, deg2=%r)" % (
            self.deg0, self.deg1, self.deg2)


def _pair_deg0(k: E8Constants, t: Trivector, w: Wedge6, field) -> Matrix:
    out = pairing_gl(t, w).scale(k.a)
    if not k.tau.is_zero():
        v = _vol_pairing(t, w)
        if not v.is_zero():
            out.rows[8][8] = out.rows[8][8] + k.a * k.tau * v
    return out


def _strip_trace(a: Matrix) -> Matrix:
    """Subtract tr(a) at the (9,9) slot: the trace lives on the central
    h-direction in the characteristic-3 model."""
    field = a.field
    tr = field.zero
    for d in range(9):
        tr = tr + a.rows[d][d]
    if tr.is_zero():
        return a
    return Matrix(field, [[a.rows[i][j] - (tr if i == j == 8 else field.zero)
                           for j in range(9)] for i in range(9)])


def _commutator_deg0(k: E8Constants, a: Matrix, b: Matrix) -> Matrix:
    if k.h_model:
        a, b = _strip_trace(a), _strip_trace(b)
    return a * b - b * a


def bracket(x: GradedE8Element, y: GradedE8Element) -> GradedE8Element:
    """Graded bracket; antisymmetric, satisfies the Jacobi identity
    (property-gated by the test suite)."""
    if x.field != y.field:
        raise FieldMismatch("bracket needs matching fields")
    field = x.field
    k = e8_constants(field)
    d0 = _commutator_deg0(k, x.deg0, y.deg0)
    d0 = d0 + _pair_deg0(k, x.deg1, y.deg2, field)
    d0 = d0 - _pair_deg0(k, y.deg1, x.deg2, field)
    d1 = k.act1(x.deg0, y.deg1) - k.act1(y.deg0, x.deg1)
    d1 = d1 + dual_wedge(x.deg2, y.deg2).scale(k.b)
    d2 = k.act2(x.deg0, y.deg2) - k.act2(y.deg0, x.deg2)
    d2 = d2 + wedge33(x.deg1, y.deg1)
    return GradedE8Element(field, d0, d1, d2)


def cube_class(a: Matrix) -> Matrix:
    """Restricted cube of a deg0 class in characteristic 3: matrix cube of
    the trace-stripped part plus the Frobenius of the trace on the central
    direction."""
    field = a.field
    if field.char != 3:
        raise NotCharThree("cube_class is the characteristic-3 operation")
    tr = field.zero
    for d in range(9):
        tr = tr + a.rows[d][d]
    bar = _strip_trace(a)
    cube = bar * bar * bar
    t3 = tr * tr * tr
    if not t3.is_zero():
        cube = Matrix(field, [[cube.rows[i][j] + (t3 if i == j == 8 else field.zero)
                               for j in range(9)] for i in range(9)])
    return canonical_deg0(cube)


# ---------------------------------------------------------------------------
# coordinates and the 248 x 248 adjoint matrix

def deg0_basis_coords(a: Matrix):
    """80 coordinates of a canonical deg0 representative: row-major entries
    skipping the (9,9) slot."""
    out = []
    for i in range(9):
        for j in range(9):
            if i == j == 8:
                continue
            out.append(a.rows[i][j])
    return out


def deg0_from_coords(field, coords):
    rows = []
    it = iter(coords)
    for i in range(9):
        row = []
        for j in range(9):
            if i == j == 8:
                row.append(field.zero)
            else:
                row.append(next(it))
        rows.append(row)
    return Matrix(field, rows)


def element_coords(x: GradedE8Element):
    return (deg0_basis_coords(x.deg0) + x.deg1.to_vector() + x.deg2.to_vector())


def basis_element(field, idx: int) -> GradedE8Element:
    z = [field.zero] * 248
    z[idx] = field.one
    return element_from_coords(field, z)


def element_from_coords(field, coords):
    return GradedE8Element(
        field,
        deg0_from_coords(field, coords[:80]),
        Trivector.from_vector(field, coords[80:164]),
        Wedge6.from_vector(field, coords[164:248]))


def ad_matrix(x: GradedE8Element):
    """The 248 x 248 matrix of bracketing with x (columns are images of the
    basis elements)."""
    field = x.field
    cols = []
    for idx in range(248):
        img = bracket(x, basis_element(field, idx))
        cols.append(element_coords(img))
    return Matrix(field, cols).transpose()


# ---------------------------------------------------------------------------
# restricted powers in characteristic 3

def _act3_structure_codes(field, kern):
    """Coded matrix of the linear map gl9-canonical -> End(wedge^3):
    rows indexed by (out_triple, in_triple) pairs, columns by the 80
    canonical coordinates; cached per field."""
    consts = e8_constants(field)
    cols = 80
    rows = 84 * 84
    mat = np.zeros((rows, cols), dtype=np.int16)
    col = 0
    for i in range(9):
        for j in range(9):
            if i == j == 8:
                continue
            a = Matrix(field, [[field.one if (r, c) == (i, j) else field.zero
                                for c in range(9)] for r in range(9)])
            image_by_triple = {}
            for t_idx, trip in enumerate(TRIPLES):
                img = consts.act1(a, Trivector(field, {trip: field.one}))
                for otrip, cval in img.coeffs.items():
                    image_by_triple[(TRIPLE_INDEX[otrip], t_idx)] = cval
            for (o, t), cval in image_by_triple.items():
                mat[o * 84 + t, col] = kern.encode(cval)
            col += 1
    return mat


_act3_structure_cache: dict = {}


def _solve_deg0_from_action(field, action_codes):
    """Find the canonical deg0 class whose deg1 action matches the given
    84 x 84 coded matrix; NoSolution if the linear system is inconsistent."""
    kern = field_kernel(field)
    key = field
    if key not in _act3_structure_cache:
        _act3_structure_cache[key] = _act3_structure_codes(field, kern)
    struct = _act3_structure_cache[key]
    rhs = action_codes.reshape(84 * 84, 1)
    aug = np.concatenate([struct, rhs], axis=1)
    rank_aug, pivots, red = kern.rref(aug)
    if 80 in pivots:
        raise NoSolution("no deg0 class acts as the requested operator")
    coords = [field.zero] * 80
    for r, pc in enumerate(pivots):
        coords[pc] = kern.decode(int(red[r, 80]))
    # the solution is unique: the action is faithful on classes
    return deg0_from_coords(field, coords)


def _ad_codes(x: GradedE8Element, kern):
    m = ad_matrix(x)
    out = np.zeros((248, 248), dtype=np.int16)
    for i in range(248):
        row = m.rows[i]
        for j in range(248):
            if not row[j].is_zero():
                out[i, j] = kern.encode(row[j])
    return out


def _coded_matmul(kern, a, b):
    if kern.prime:
        return (a.astype(np.int64) @ b.astype(np.int64)) % kern.prime
    # table-based: expand through the additive structure of the field
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int16)
    for k in range(a.shape[1]):
        colk = a[:, k]
        rowk = b[k, :]
        prod = kern.mul(colk[:, None], rowk[None, :])
        out = kern.add(out, prod)
    return out


def restricted_power(t: Trivector, e: int = 3) -> Matrix:
    """The canonical deg0 class with ad-cube action (ad t)^3 on the
    trivector block; e = 9 and 27 are matrix powers of the e = 3 result
    (well-defined modulo scalars in characteristic 3)."""
    field = t.field
    if field.char != 3:
        raise NotCharThree("restricted powers need characteristic 3")
    if e not in (3, 9, 27):
        raise ValueError("supported exponents: 3, 9, 27")
    kern = field_kernel(field)
    x = GradedE8Element(field, deg1=t)
    ad = _ad_codes(x, kern)
    ad2 = _coded_matmul(kern, ad, ad)
    ad3 = _coded_matmul(kern, ad2, ad)
    block = ad3[80:164, 80:164].astype(np.int16)
    a3 = _solve_deg0_from_action(field, block)
    if e == 3:
        return a3
    a9 = cube_class(a3)
    if e == 9:
        return a9
    return cube_class(a9)


def class_is_semisimple(a: Matrix) -> bool:
    """Semisimplicity of a deg0 class (invariant under adding scalars)."""
    return is_semisimple(a)


@dataclass
class ThreeRankReport:
    lie_rank: int
    coeff_rank: int
    scalar_residue: object   # the scalar lambda with a27 = c24 a3 - c18 a9 + lambda I

    def to_json(self):
        return {"lie": self.lie_rank, "coeff": self.coeff_rank,
                "scalar_residue": repr(self.scalar_residue)}


def three_rank(c: CurveCoeffs) -> ThreeRankReport:
    """3-rank of the normal-form curve in characteristic 3, computed on the
    Lie side (semisimplicity of the restricted powers) and on the coefficient
    side (vanishing pattern of c24, c18); the two must agree."""
    field = c.field
    if field.char != 3:
        raise NotCharThree("3-rank classifier needs characteristic 3")
    for d in (3, 6, 9, 15):
        if not c[d].is_zero():
            raise ValueError("three_rank expects Weierstrass form "
                             "(c3 = c6 = c9 = c15 = 0)")
    if not curve_is_smooth(c):
        raise SingularCurve("3-rank of a singular curve is undefined here")
    t = build_gamma_c(c)
    a3 = restricted_power(t, 3)
    a9 = cube_class(a3)
    a27 = cube_class(a9)
    if class_is_semisimple(a3):
        lie = 2
    elif class_is_semisimple(a9):
        lie = 1
    else:
        lie = 0
    if not c[24].is_zero():
        coeff = 2
    elif not c[18].is_zero():
        coeff = 1
    else:
        coeff = 0
    if lie != coeff:
        raise Disagreement("Lie-side rank %d but coefficient-side rank %d"
                           % (lie, coeff))
    combo = canonical_deg0(a3.scale(c[24]) - a9.scale(c[18]))
    diff = a27 - combo
    resid = diff.rows[0][0]
    for i in range(9):
        for j in range(9):
            expect = resid if i == j else field.zero
            if diff.rows[i][j] != expect:
                raise Disagreement("a27 is not a scalar shift of "
                                   "c24*a3 - c18*a9")
    return ThreeRankReport(lie, coeff, resid)
