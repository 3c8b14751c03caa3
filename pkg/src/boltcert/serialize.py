"""JSON and CSV interchange for spaces, functions, bolts, measures, results.

Numbers are emitted as decimal doubles with 17 significant digits so that
every serialized value round-trips to the identical bit pattern.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .bolts import Bolt, ClosedBolt, is_closed, validate_bolt
from .errors import InputFormatError
from .measures import SignedMeasure, SingerReport
from .solvers import ApproximationResult, Certificate, Verdict
from .space import (
    FunctionOnX,
    Side,
    SumElement,
    TwoAlgebraSpace,
    build_from_partitions,
    build_grid,
    sum_element,
)


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj: Any, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data with 17-digit floats."""
    out = io.StringIO()
    _write(obj, out, indent, 0)
    return out.getvalue()


def _write(obj: Any, out: io.StringIO, indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1)) if indent else ""
    end_pad = " " * (indent * level) if indent else ""
    sep = ",\n" if indent else ", "
    nl = "\n" if indent else ""
    if obj is None:
        out.write("null")
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(format_float(obj))
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{" + nl)
        for i, (k, v) in enumerate(obj.items()):
            out.write(pad + json.dumps(str(k)) + ": ")
            _write(v, out, indent, level + 1)
            out.write(sep if i < len(obj) - 1 else nl)
        out.write(end_pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.write("[]")
            return
        out.write("[" + nl)
        for i, v in enumerate(items):
            out.write(pad)
            _write(v, out, indent, level + 1)
            out.write(sep if i < len(items) - 1 else nl)
        out.write(end_pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- schema converters -------------------------------------------------------


def space_to_jsonable(space: TwoAlgebraSpace) -> dict:
    out: dict[str, Any] = {
        "n_points": space.n_points,
        "s_class": space.s_class.tolist(),
        "p_class": space.p_class.tolist(),
    }
    if space.labels is not None:
        out["labels"] = list(space.labels)
    if space.coords is not None:
        out["coords"] = [[float(a), float(b)] for a, b in space.coords]
    return out


def _require(obj: dict, field: str, context: str):
    if field not in obj:
        raise InputFormatError(
            f"{context} is missing required field {field!r}", field=field
        )
    return obj[field]


def space_from_jsonable(obj: dict) -> TwoAlgebraSpace:
    if not isinstance(obj, dict):
        raise InputFormatError("space must be a JSON object", field="space")
    n = _require(obj, "n_points", "space")
    s = _require(obj, "s_class", "space")
    p = _require(obj, "p_class", "space")
    return build_from_partitions(
        int(n), s, p,
        labels=obj.get("labels"),
        coords=obj.get("coords"),
    )


def function_to_jsonable(f: FunctionOnX) -> dict:
    return {"values": f.values.tolist()}


def function_from_jsonable(obj: dict, name: str = "f") -> FunctionOnX:
    if not isinstance(obj, dict):
        raise InputFormatError(f"{name} must be a JSON object", field=name)
    return FunctionOnX(np.asarray(_require(obj, "values", name), dtype=np.float64))


def sum_element_to_jsonable(u: SumElement) -> dict:
    return {"g": u.g.class_values.tolist(), "h": u.h.class_values.tolist()}


def sum_element_from_jsonable(obj: dict) -> SumElement:
    if not isinstance(obj, dict):
        raise InputFormatError("u0 must be a JSON object", field="u0")
    return sum_element(_require(obj, "g", "u0"), _require(obj, "h", "u0"))


def measure_to_jsonable(mu: SignedMeasure) -> dict:
    return {"weights": mu.weights.tolist()}


def measure_from_jsonable(obj: dict) -> SignedMeasure:
    if not isinstance(obj, dict):
        raise InputFormatError("measure must be a JSON object", field="measure")
    return SignedMeasure(np.asarray(_require(obj, "weights", "measure"), dtype=np.float64))


def bolt_to_jsonable(space: TwoAlgebraSpace, bolt: Bolt) -> dict:
    return {
        "points": list(bolt.points),
        "first_link": bolt.first_link.value,
        "closed": is_closed(space, bolt),
    }


def bolt_from_jsonable(space: TwoAlgebraSpace, obj: dict) -> Bolt:
    if not isinstance(obj, dict):
        raise InputFormatError("bolt must be a JSON object", field="bolt")
    points = _require(obj, "points", "bolt")
    link = _require(obj, "first_link", "bolt")
    try:
        side = Side(link)
    except ValueError:
        raise InputFormatError(
            f"first_link must be 'S' or 'P', got {link!r}", field="first_link"
        ) from None
    return validate_bolt(space, points, side)


def singer_report_to_jsonable(report: SingerReport) -> dict:
    return {
        "total_variation_ok": report.total_variation_ok,
        "orthogonal_ok": report.orthogonal_ok,
        "sign_condition_ok": report.sign_condition_ok,
        "violations": {
            "total_variation": report.total_variation_violation,
            "orthogonality": report.orthogonality_violation,
            "sign_condition": report.sign_violation,
        },
        "passed": report.passed,
    }


def result_to_jsonable(result: ApproximationResult) -> dict:
    out = {
        "method": result.method.value,
        "error": result.error,
        "u": sum_element_to_jsonable(result.u),
        "residual": result.residual.values.tolist(),
        "iterations": result.iterations,
    }
    if result.history is not None:
        out["history"] = list(result.history)
    return out


def certificate_to_jsonable(space: TwoAlgebraSpace, cert: Certificate) -> dict:
    out: dict[str, Any] = {
        "verdict": cert.verdict.value,
        "error": cert.error,
        "gap": cert.gap,
    }
    if cert.bolt is not None:
        out["bolt"] = bolt_to_jsonable(space, cert.bolt)
    if cert.dual is not None:
        out["measure"] = cert.dual.weights.tolist()
    if cert.singer is not None:
        out["singer"] = singer_report_to_jsonable(cert.singer)
    if cert.improvement is not None:
        out["improvement"] = sum_element_to_jsonable(cert.improvement)
        out["improved_error"] = cert.improved_error
    return out


# --- problem files -----------------------------------------------------------


def problem_from_jsonable(obj: dict) -> tuple[TwoAlgebraSpace, FunctionOnX, SumElement | None]:
    if not isinstance(obj, dict):
        raise InputFormatError("problem file must be a JSON object", field="problem")
    space = space_from_jsonable(_require(obj, "space", "problem"))
    f = function_from_jsonable(_require(obj, "f", "problem"))
    if len(f) != space.n_points:
        raise InputFormatError(
            f"f has {len(f)} values but the space has {space.n_points} points",
            field="f",
        )
    u0 = None
    if obj.get("u0") is not None:
        u0 = sum_element_from_jsonable(obj["u0"])
        if u0.g.class_values.shape[0] != space.n_s:
            raise InputFormatError(
                f"u0.g has {u0.g.class_values.shape[0]} values but the space "
                f"has {space.n_s} s-classes",
                field="u0",
            )
        if u0.h.class_values.shape[0] != space.n_p:
            raise InputFormatError(
                f"u0.h has {u0.h.class_values.shape[0]} values but the space "
                f"has {space.n_p} p-classes",
                field="u0",
            )
    return space, f, u0


def problem_from_grid_csv(text: str) -> tuple[TwoAlgebraSpace, FunctionOnX, None]:
    """Grid shorthand: cell (row i, column j) is the value at s-class j, p-class i."""
    rows: list[list[float]] = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row if c.strip() != ""]
        if not cells:
            continue
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise InputFormatError(
                f"line {lineno}: {exc}", field=f"line {lineno}"
            ) from None
        if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
            raise InputFormatError(
                f"line {lineno}: expected {len(rows[0])} columns, got {len(rows[-1])}",
                field=f"line {lineno}",
            )
    if not rows:
        raise InputFormatError("grid CSV contains no values", field="csv")
    ny, nx = len(rows), len(rows[0])
    space = build_grid(nx, ny)
    values = np.asarray(rows, dtype=np.float64).ravel()  # row-major matches point order
    return space, FunctionOnX(values), None


def load_problem(path: str) -> tuple[TwoAlgebraSpace, FunctionOnX, SumElement | None]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}", field="path") from None
    if path.lower().endswith(".csv"):
        return problem_from_grid_csv(text)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"{path}: line {exc.lineno}: {exc.msg}", field="json"
        ) from None
    return problem_from_jsonable(obj)
