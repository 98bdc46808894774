"""The complete one-parameter family of qubit semi-SICs.

For d = 2 a strict semi-SIC exists exactly for overlaps b in (1/16, 1/12],
and up to a global unitary it is unique for each b. The canonical member is
built from four kets

    psi_1 = |0>
    psi_2 = r |0> + sqrt(1 - r^2) |1>
    psi_3 = (1/sqrt(3)) |0> - sqrt(2/3) e^{+i theta} |1>
    psi_4 = (1/sqrt(3)) |0> - sqrt(2/3) e^{-i theta} |1>

with the first two weighted by the small trace a- and the last two by a+:

    r     = 2 sqrt(b) / (1 - sqrt(1 - 12 b))
    theta = arccos( sqrt(1 - 8 b - sqrt(1 - 12 b)) / (4 sqrt(b)) )

Both r(b) and theta(b) decrease on the interval; the closed endpoint
b = 1/12 gives r = 1/sqrt(3), theta = pi/3 and collapses the family to the
SIC (all traces 1/2), while b -> 1/16 degenerates (psi_2 -> psi_1, theta ->
pi/2) and is excluded. Note theta therefore spans [pi/3, pi/2), closed at
the SIC end and open at the degenerate one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousCanonicalization,
    BOutOfFamilyRange,
    BOutOfRange,
    NotQubitSemiSic,
)
from .linalg import DEFAULT_TOL, Tolerances, eig_hermitian
from .model import NOT_SEMI_SIC, Povm, SemiSicParams, trace_values, verify

B_MIN = 1.0 / 16.0   # open: the family degenerates here
B_MAX = 1.0 / 12.0   # closed: the SIC point

# Matching gate for canonicalize on clean inputs; scaled up for noisy ones.
CANON_TOL = 1e-9


@dataclass(frozen=True)
class QubitFamilyPoint:
    """Family coordinates (b, r, theta) plus the validated parameter bundle."""

    b: float
    r: float
    theta: float
    params: SemiSicParams


def family_point(b: float) -> QubitFamilyPoint:
    """Resolve an overlap b to its family coordinates.

    Raises BOutOfFamilyRange outside (1/16, 1/12]; values within one
    discriminant snap width of 1/12 collapse to the SIC endpoint (see
    model.trace_values).
    """
    b = float(b)
    if not np.isfinite(b) or b <= B_MIN:
        raise BOutOfFamilyRange(
            f"b must exceed 1/16 = {B_MIN!r} for a qubit semi-SIC, got {b!r}"
        )
    try:
        lo, hi = trace_values(2, b)
    except BOutOfRange as exc:
        raise BOutOfFamilyRange(
            f"b must be at most 1/12 = {B_MAX!r} for a qubit semi-SIC, got {b!r}"
        ) from exc
    s = hi - lo  # sqrt(1 - 12 b), exactly zero at the (snapped) SIC endpoint
    k = 4 if s == 0.0 else 2
    params = SemiSicParams(d=2, b=b, k=k, a_minus=lo, a_plus=hi)
    r = 2.0 * np.sqrt(b) / (1.0 - s)
    cos_theta = np.sqrt(max(0.0, 1.0 - 8.0 * b - s)) / (4.0 * np.sqrt(b))
    theta = float(np.arccos(min(1.0, cos_theta)))
    return QubitFamilyPoint(b=b, r=float(r), theta=theta, params=params)


def family_kets(point: QubitFamilyPoint) -> np.ndarray:
    """The four canonical kets as rows of a (4, 2) array."""
    r, theta = point.r, point.theta
    w = np.sqrt(2.0 / 3.0) * np.exp(1j * theta)
    return np.array(
        [
            [1.0, 0.0],
            [r, np.sqrt(max(0.0, 1.0 - r * r))],
            [1.0 / np.sqrt(3.0), -w],
            [1.0 / np.sqrt(3.0), -w.conjugate()],
        ],
        dtype=complex,
    )


def construct(b: float) -> Povm:
    """Canonical qubit semi-SIC with overlap b, ordered (a-, a-, a+, a+)."""
    point = family_point(b)
    kets = family_kets(point)
    weights = np.array(
        [point.params.a_minus, point.params.a_minus, point.params.a_plus, point.params.a_plus]
    )
    elements = np.einsum("x,xi,xj->xij", weights, kets, kets.conj())
    return Povm(dim=2, elements=elements)


def _completion_unitary(ket: np.ndarray) -> np.ndarray:
    """Unitary W with W ket = e_0 (first row is ket^dagger)."""
    a, c = ket[0], ket[1]
    return np.array([[a.conjugate(), c.conjugate()], [-c, a]], dtype=complex)


def canonicalize(
    povm: Povm, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, Povm, float]:
    """Rotate and reorder a verified qubit semi-SIC into the family form.

    Returns (u, canonical, b) where canonical is the reordered, rotated
    POVM and u undoes the rotation: u @ canonical[x] @ u^dagger equals the
    input element that canonical slot x came from, to machine precision.

    Anchor pairs (which input elements play psi_1, psi_2) are tried in index
    order over the small-trace class (every ordered pair for a SIC, where
    the classes merge), and the first assignment matching the family form
    within the gate wins. Valid assignments agree on the canonical form up
    to the gate, so this is a deterministic tie-break.
    """
    if not isinstance(povm, Povm) or povm.dim != 2:
        raise NotQubitSemiSic("canonicalization is defined for qubit POVMs only")
    report = verify(povm, tol)
    if report.classification == NOT_SEMI_SIC:
        raise NotQubitSemiSic(
            f"verification failed (max violation {report.max_violation:.3e})"
        )

    b = min(report.fitted_b, B_MAX)  # guard roundoff just above the SIC endpoint
    try:
        target = construct(b).elements
    except BOutOfFamilyRange as exc:
        raise NotQubitSemiSic(f"fitted overlap {b!r} is outside the family") from exc
    gate = max(CANON_TOL, 1e3 * report.max_violation)

    traces = povm.traces()
    if len(report.trace_classes) == 2:
        low_mean, high_mean = report.trace_classes[0][0], report.trace_classes[1][0]
        lows = [x for x in range(4) if abs(traces[x] - low_mean) < abs(traces[x] - high_mean)]
    else:
        lows = list(range(4))
    pairs = [(i, j) for i in lows for j in lows if i != j]

    for i1, i2 in pairs:
        rest = [x for x in range(4) if x not in (i1, i2)]
        _, vecs = eig_hermitian(povm[i1], tol)
        w1 = _completion_unitary(vecs[:, -1])
        z = (w1 @ povm[i2] @ w1.conj().T)[0, 1]
        if abs(z) < 1e-14:
            continue  # psi_2 parallel or orthogonal to psi_1: wrong anchor
        w = np.diag([1.0, z / abs(z)]) @ w1
        for i3, i4 in ((0, 1), (1, 0)):
            order = [i1, i2, rest[i3], rest[i4]]
            mapped = np.einsum("ij,xjk,lk->xil", w, povm.elements[order], w.conj())
            if float(np.max(np.abs(mapped - target))) <= gate:
                return w.conj().T, Povm(dim=2, elements=mapped), b

    raise AmbiguousCanonicalization(
        "no anchor assignment reproduces the family form within tolerance"
    )
