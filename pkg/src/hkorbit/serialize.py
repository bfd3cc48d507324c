"""JSON wire formats.

Complex matrices are encoded as nested row-major lists of [re, im]
pairs.  Every container carries a "type" field so point files are
self-describing.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import AlgebraContext, Element
from .mostow import FiberedPoint, fiber_point
from .orbit import OrbitPointC, SubspacePair, orbit_point
from .tangent import TangentBundlePoint, tb_point


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("matrix payload must be rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def element_to_json(e: Element) -> dict:
    return {"type": "element", "space_tag": e.space_tag,
            "mat": matrix_to_json(e.mat)}


def element_from_json(data) -> Element:
    _expect(data, "element")
    return Element(matrix_from_json(data["mat"]), data["space_tag"])


def orbit_point_to_json(p: OrbitPointC) -> dict:
    return {"type": "orbit_point", "mat": matrix_to_json(p.y)}


def orbit_point_from_json(ctx: AlgebraContext, data) -> OrbitPointC:
    _expect(data, "orbit_point")
    return orbit_point(ctx, matrix_from_json(data["mat"]))


def subspace_pair_to_json(sp: SubspacePair) -> dict:
    return {"type": "subspace_pair", "P": matrix_to_json(sp.P),
            "Q": matrix_to_json(sp.Q)}


def subspace_pair_from_json(data) -> SubspacePair:
    _expect(data, "subspace_pair")
    return SubspacePair(P=matrix_from_json(data["P"]),
                        Q=matrix_from_json(data["Q"]))


def fibered_point_to_json(fp: FiberedPoint) -> dict:
    return {"type": "fibered_point", "x": matrix_to_json(fp.x),
            "a": matrix_to_json(fp.a)}


def fibered_point_from_json(ctx: AlgebraContext, data) -> FiberedPoint:
    _expect(data, "fibered_point")
    return fiber_point(ctx, matrix_from_json(data["x"]),
                       matrix_from_json(data["a"]))


def tb_point_to_json(p: TangentBundlePoint) -> dict:
    return {"type": "tangent_bundle_point", "x": matrix_to_json(p.x),
            "V": matrix_to_json(p.V)}


def tb_point_from_json(ctx: AlgebraContext, data) -> TangentBundlePoint:
    _expect(data, "tangent_bundle_point")
    return tb_point(ctx, matrix_from_json(data["x"]),
                    matrix_from_json(data["V"]))


def load_point(ctx: AlgebraContext, path: str):
    """Load a self-describing point file (orbit or tangent-bundle point)."""
    with open(path) as f:
        data = json.load(f)
    kind = data.get("type")
    if kind == "orbit_point":
        return orbit_point_from_json(ctx, data)
    if kind == "tangent_bundle_point":
        return tb_point_from_json(ctx, data)
    if kind == "fibered_point":
        return fibered_point_from_json(ctx, data)
    raise ValueError(f"unsupported point type {kind!r}")


def _expect(data, kind: str):
    if not isinstance(data, dict) or data.get("type") != kind:
        raise ValueError(f"payload is not a serialized {kind}")
