"""JSON interchange for POVMs and dual frames.

Matrix entries are encoded as [re, im] pairs so documents stay valid JSON;
floats go through Python's shortest-repr serializer, which round-trips
bit-identically. Parse errors carry the JSON path of the offending entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dual import DualFrame
from .errors import DocumentError
from .model import Povm


def matrix_to_pairs(mat: np.ndarray) -> list[list[list[float]]]:
    """Encode a complex matrix as nested [re, im] pairs."""
    arr = np.asarray(mat, dtype=complex)
    return [
        [[float(entry.real), float(entry.imag)] for entry in row]
        for row in arr
    ]


def pairs_to_matrix(obj, where: str, dim: int) -> np.ndarray:
    """Decode one dim x dim matrix, raising DocumentError with locations."""
    if not isinstance(obj, list) or len(obj) != dim:
        raise DocumentError(f"{where}: expected {dim} rows")
    out = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(f"{where}[{i}]: expected {dim} entries")
        for j, entry in enumerate(row):
            spot = f"{where}[{i}][{j}]"
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in entry)):
                raise DocumentError(f"{spot}: expected a [re, im] pair of reals")
            out[i, j] = complex(float(entry[0]), float(entry[1]))
    return out


@dataclass(frozen=True)
class PovmDocument:
    """A parsed POVM file: the POVM plus its optional annotations."""

    povm: Povm
    b: float | None = None
    k: int | None = None
    metadata: dict = field(default_factory=dict)


def povm_document(povm: Povm, b: float | None = None, k: int | None = None,
                  metadata: dict | None = None) -> dict:
    """JSON-ready dict for a POVM."""
    doc = {
        "dim": int(povm.dim),
        "elements": [matrix_to_pairs(e) for e in povm.elements],
        "metadata": dict(metadata or {}),
    }
    if b is not None:
        doc["b"] = float(b)
    if k is not None:
        doc["k"] = int(k)
    return doc


def parse_povm_document(doc) -> PovmDocument:
    """Validate and decode a POVM document.

    Raises DocumentError for malformed documents; structural POVM defects
    (wrong sums, negativity) surface as MalformedPovm from the container.
    """
    if not isinstance(doc, dict):
        raise DocumentError(f"document root must be an object, got {type(doc).__name__}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise DocumentError(f"dim: expected an integer >= 2, got {dim!r}")
    elements = doc.get("elements")
    if not isinstance(elements, list) or len(elements) != dim * dim:
        raise DocumentError(
            f"elements: expected a list of {dim * dim} matrices, got "
            f"{len(elements) if isinstance(elements, list) else type(elements).__name__}"
        )
    stack = np.stack(
        [pairs_to_matrix(e, f"elements[{x}]", dim) for x, e in enumerate(elements)]
    )

    b = doc.get("b")
    if b is not None and (not isinstance(b, (int, float)) or isinstance(b, bool)):
        raise DocumentError(f"b: expected a real number, got {b!r}")
    k = doc.get("k")
    if k is not None and (not isinstance(k, int) or isinstance(k, bool)):
        raise DocumentError(f"k: expected an integer, got {k!r}")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError(f"metadata: expected an object, got {type(metadata).__name__}")

    return PovmDocument(
        povm=Povm(dim=dim, elements=stack),
        b=None if b is None else float(b),
        k=None if k is None else int(k),
        metadata=metadata,
    )


def save_povm(path, povm: Povm, b: float | None = None, k: int | None = None,
              metadata: dict | None = None) -> None:
    doc = povm_document(povm, b=b, k=k, metadata=metadata)
    if hasattr(path, "write"):
        json.dump(doc, path, indent=2)
        path.write("\n")
    else:
        with open(path, "w") as handle:
            json.dump(doc, handle, indent=2)
            handle.write("\n")


def load_povm(path) -> PovmDocument:
    try:
        if hasattr(path, "read"):
            doc = json.load(path)
        else:
            with open(path) as handle:
                doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return parse_povm_document(doc)


def dual_frame_document(frame: DualFrame, metadata: dict | None = None) -> dict:
    """JSON-ready dict for a dual frame (same element encoding as POVMs)."""
    meta = {"kind": "dual-frame", "permutation": list(frame.permutation)}
    meta.update(metadata or {})
    return {
        "dim": int(frame.dim),
        "k": int(frame.source_k),
        "elements": [matrix_to_pairs(f) for f in frame.duals],
        "metadata": meta,
    }


def save_dual_frame(path, frame: DualFrame, metadata: dict | None = None) -> None:
    doc = dual_frame_document(frame, metadata=metadata)
    if hasattr(path, "write"):
        json.dump(doc, path, indent=2)
        path.write("\n")
    else:
        with open(path, "w") as handle:
            json.dump(doc, handle, indent=2)
            handle.write("\n")
