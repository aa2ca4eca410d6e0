"""JSON formats for the value types the command-line tools exchange.

Field elements serialize as decimal strings (rationals as "a/b", extension
elements as comma-separated coefficient vectors, constant first).
"""

from __future__ import annotations

import json

from .fields import Field, parse_field
from .linalg import Matrix
from .loci import CubicForm, DEGREE3_EXPONENTS
from .trivector import CURVE_DEGREES, CurveCoeffs, Trivector
from .flags import Flag1368

__all__ = [
    "trivector_to_json", "trivector_from_json", "curve_to_json",
    "curve_from_json", "flag_from_json", "matrix_to_json", "matrix_from_json",
    "pencil_from_json", "cubic_to_json", "cubic_from_json",
    "load_json", "dump_json",
]


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path: str):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def trivector_to_json(t: Trivector) -> dict:
    f = t.field
    return {"field": f.spec_str(),
            "terms": [{"ijk": list(trip), "c": f.to_str(c)}
                      for trip, c in sorted(t.coeffs.items())]}


def trivector_from_json(data: dict) -> Trivector:
    field = parse_field(data["field"])
    coeffs = {}
    for item in data["terms"]:
        i, j, k = item["ijk"]
        if not (1 <= i < j < k <= 9):
            raise ValueError("triple %r is not strictly increasing in 1..9"
                             % (item["ijk"],))
        coeffs[(i, j, k)] = field.from_str(str(item["c"]))
    return Trivector(field, coeffs)


def curve_to_json(c: CurveCoeffs) -> dict:
    f = c.field
    return {"field": f.spec_str(),
            "c": {str(d): f.to_str(c[d]) for d in CURVE_DEGREES
                  if not c[d].is_zero()}}


def curve_from_json(data: dict) -> CurveCoeffs:
    field = parse_field(data["field"])
    cmap = {}
    for key, val in data.get("c", {}).items():
        d = int(key)
        if d not in CURVE_DEGREES:
            raise ValueError("unknown curve coefficient degree %d" % d)
        cmap[d] = field.from_str(str(val))
    return CurveCoeffs(field, cmap)


def matrix_to_json(m: Matrix) -> list:
    f = m.field
    return [[f.to_str(x) for x in row] for row in m.rows]


def matrix_from_json(field: Field, rows: list) -> Matrix:
    return Matrix(field, [[field.from_str(str(x)) for x in row]
                          for row in rows])


def flag_from_json(data: dict) -> Flag1368:
    field = parse_field(data["field"])
    mats = [matrix_from_json(field, data[key])
            for key in ("F1", "F3", "F6", "F8")]
    return Flag1368(field, *mats)


def pencil_from_json(data: dict) -> list:
    field = parse_field(data["field"])
    mats = [matrix_from_json(field, rows) for rows in data["matrices"]]
    if len(mats) != 9:
        raise ValueError("a pencil file needs exactly 9 matrices")
    return mats


def pencil_to_json(field: Field, mats) -> dict:
    return {"field": field.spec_str(),
            "matrices": [matrix_to_json(m) for m in mats]}


def cubic_to_json(c: CubicForm) -> dict:
    f = c.field
    return {"field": f.spec_str(),
            "monomials": [{"exp": list(e), "c": f.to_str(v)}
                          for e, v in sorted(c.coeffs.items(), reverse=True)]}


def cubic_from_json(data: dict) -> CubicForm:
    field = parse_field(data["field"])
    coeffs = {}
    for item in data["monomials"]:
        e = tuple(item["exp"])
        if len(e) != 9 or sum(e) != 3 or e not in DEGREE3_EXPONENTS:
            raise ValueError("bad cubic exponent vector %r" % (e,))
        coeffs[e] = field.from_str(str(item["c"]))
    return CubicForm(field, coeffs)
