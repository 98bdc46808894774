"""Dual frames, state reconstruction, and the qubit feasibility region.

A semi-SIC is an operator-space frame, so every density matrix rho is
recovered linearly from its outcome probabilities p_y = Tr[E_y rho] via the
dual frame: rho = sum_y p_y F_y. For a semi-SIC the dual has a two-block
closed form. Writing S for the sum of the k small-trace elements, T for the
sum of the rest, and m = d^2 - d - 1, an element E_y with trace a (partner
trace a', own block sum P in {S, T}, other block sum Q) has

    F_y = E_y / (a^2 - b)  -  P * (a'^2 - b) / ((a^2 - b) m)  -  Q / m.

The coefficients follow from solving Tr[E_x F_y] = delta_xy on the span of
{E_y, S, T}. At d = 2 (m = 1, S + T = I) this collapses to the familiar
F_y = E_y/(a^2 - b) + P (a'^2 - a^2)/((a^2 - b)(1 - d)) + I/(1 - d); that
shorter form does not satisfy duality for d >= 3, so the block form is used
throughout. At a SIC the two branches coincide; this is checked numerically
rather than special-cased.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCoefficients,
    DimensionMismatch,
    LengthMismatch,
    NotAState,
    NotSemiSic,
)
from .linalg import DEFAULT_TOL, Tolerances, as_hermitian
from .model import NOT_SEMI_SIC, Povm, SemiSicParams, verify

# Denominators a^2 - b smaller than this are refused outright.
_DEGENERACY_GATE = 1e-12

# Feasibility slack: determinant values above -1e-12 count as reconstructible.
FEASIBILITY_SLACK = 1e-12


@dataclass(frozen=True)
class DualFrame:
    """Dual elements aligned with the source POVM's ordering.

    source_k records how many source elements sat on the small trace;
    permutation lists source indices with the small-trace block first
    (the order the block sums were accumulated in).
    """

    dim: int
    duals: np.ndarray
    source_k: int
    permutation: tuple[int, ...]

    def __len__(self) -> int:
        return self.duals.shape[0]

    def __getitem__(self, idx: int) -> np.ndarray:
        return self.duals[idx]


def dual_basis(povm: Povm, params: SemiSicParams, tol: Tolerances = DEFAULT_TOL) -> DualFrame:
    """Closed-form dual frame of a verified semi-SIC.

    params must agree with the POVM (same d, and a trace split of exactly
    params.k small-trace elements). Verifies duality Tr[E_x F_y] = delta_xy
    before returning.
    """
    report = verify(povm, tol)
    if report.classification == NOT_SEMI_SIC:
        raise NotSemiSic(f"verification failed (max violation {report.max_violation:.3e})")
    d = povm.dim
    n = d * d
    if params.d != d:
        raise DimensionMismatch(f"params are for d = {params.d}, POVM has d = {d}")

    a_lo, a_hi = params.a_minus, params.a_plus
    den_lo = a_lo * a_lo - params.b
    den_hi = a_hi * a_hi - params.b
    if min(abs(den_lo), abs(den_hi)) < _DEGENERACY_GATE:
        raise DegenerateCoefficients(
            f"dual denominators a^2 - b = ({den_lo:.3e}, {den_hi:.3e}) vanish"
        )

    traces = povm.traces()
    order = np.argsort(traces, kind="stable")
    low = order[: params.k]
    high = order[params.k :]
    # cross-check the split against the parameter bundle
    split_gate = max(1e-8, 1e2 * report.max_violation)
    if (np.max(np.abs(traces[low] - a_lo)) > split_gate
            or (high.size and np.max(np.abs(traces[high] - a_hi)) > split_gate)):
        raise NotSemiSic(
            f"element traces do not split into {params.k} near {a_lo!r} "
            f"and {n - params.k} near {a_hi!r}"
        )

    zero = np.zeros((d, d), dtype=complex)
    block_low = povm.elements[low].sum(axis=0)
    block_high = povm.elements[high].sum(axis=0) if high.size else zero
    m = float(n - d - 1)

    def branch(e, den_own: float, own: np.ndarray, den_other: float, other: np.ndarray):
        return e / den_own - own * (den_other / (den_own * m)) - other / m

    duals = np.empty_like(povm.elements)
    for y in low:
        duals[y] = branch(povm[y], den_lo, block_low, den_hi, block_high)
    for y in high:
        duals[y] = branch(povm[y], den_hi, block_high, den_lo, block_low)

    if abs(a_hi - a_lo) < 1e-9 and high.size:
        # SIC regime: both branch forms must agree instead of being special-cased
        for y in low:
            alt = branch(povm[y], den_hi, block_high, den_lo, block_low)
            if float(np.max(np.abs(alt - duals[y]))) > 1e-12:
                raise DegenerateCoefficients(
                    "dual branches disagree at a near-degenerate trace split"
                )

    products = np.einsum("xij,yji->xy", povm.elements, duals)
    duality_dev = float(np.max(np.abs(products - np.eye(n))))
    if duality_dev > max(1e-10, 1e3 * report.max_violation):
        raise NotSemiSic(f"dual frame fails duality check (deviation {duality_dev:.3e})")

    return DualFrame(
        dim=d,
        duals=duals,
        source_k=int(params.k),
        permutation=tuple(int(x) for x in np.concatenate([low, high])),
    )


def probabilities(rho, povm: Povm, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Outcome probabilities p_y = Tr[E_y rho] of a density matrix."""
    mat = as_hermitian(rho, tol)
    if mat.shape != (povm.dim, povm.dim):
        raise DimensionMismatch(f"state shape {mat.shape} does not match d = {povm.dim}")
    eigs = np.linalg.eigvalsh(mat)
    if eigs[0] < -tol.tol_psd:
        raise NotAState(f"state has negative eigenvalue {eigs[0]:.3e}")
    tr = float(np.trace(mat).real)
    if abs(tr - 1.0) > 1e2 * tol.tol_norm:
        raise NotAState(f"state has trace {tr!r}, expected 1")
    p = np.einsum("yij,ji->y", povm.elements, mat).real
    # roundoff can leave tiny negatives on boundary states
    p[(p < 0) & (p > -tol.tol_psd)] = 0.0
    if np.any(p < 0):
        raise NotAState(f"negative outcome probability {float(p.min()):.3e}")
    return p


def reconstruct(p, frame: DualFrame) -> np.ndarray:
    """Linear reconstruction sum_y p_y F_y (assumes sum(p) = 1 for unit trace)."""
    probs = np.asarray(p, dtype=float)
    if probs.ndim != 1 or probs.size != len(frame):
        raise LengthMismatch(f"expected {len(frame)} probabilities, got shape {probs.shape}")
    if not np.all(np.isfinite(probs)):
        raise ValueError("probabilities contain non-finite entries")
    return np.tensordot(probs, frame.duals, axes=1)


def feasibility_poly(p, frame: DualFrame) -> float:
    """det(sum_y p_y F_y): nonnegative iff the reconstruction is a state (d = 2).

    The determinant test characterizes positivity only for qubits, so any
    other dimension is refused.
    """
    if frame.dim != 2:
        raise DimensionMismatch(
            f"the determinant feasibility test is qubit-only, got d = {frame.dim}"
        )
    m = reconstruct(p, frame)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return float(det.real)


@dataclass(frozen=True)
class RegionSample:
    """One simplex grid point with its feasibility value."""

    p1: float
    p2: float
    p3: float
    f: float
    feasible: bool


def region_grid(frame: DualFrame, resolution: int) -> list[RegionSample]:
    """Feasibility over the lattice {i/N} on the probability simplex (d = 2).

    Scans all (p1, p2, p3) with p_i = i/resolution and p1+p2+p3 <= 1;
    p4 is the slack. feasible means f >= -1e-12.
    """
    if frame.dim != 2:
        raise DimensionMismatch(f"region scan is qubit-only, got d = {frame.dim}")
    if not isinstance(resolution, (int, np.integer)) or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")

    npts = resolution
    idx = [
        (i, j, l)
        for i in range(npts + 1)
        for j in range(npts + 1 - i)
        for l in range(npts + 1 - i - j)
    ]
    pts = np.array(idx, dtype=float) / npts
    p4 = 1.0 - pts.sum(axis=1)
    probs = np.column_stack([pts, p4])

    # vectorized 2x2 determinant of sum_y p_y F_y
    f00 = probs @ frame.duals[:, 0, 0].real
    f11 = probs @ frame.duals[:, 1, 1].real
    f01 = probs @ frame.duals[:, 0, 1]
    fvals = f00 * f11 - np.abs(f01) ** 2

    return [
        RegionSample(
            p1=float(pts[i, 0]),
            p2=float(pts[i, 1]),
            p3=float(pts[i, 2]),
            f=float(fvals[i]),
            feasible=bool(fvals[i] >= -FEASIBILITY_SLACK),
        )
        for i in range(len(idx))
    ]


def write_region_csv(samples: list[RegionSample], path) -> None:
    """Write samples as CSV with header p1,p2,p3,f,feasible (17 sig digits)."""
    def rows():
        for s in samples:
            yield (
                "%.17g" % s.p1,
                "%.17g" % s.p2,
                "%.17g" % s.p3,
                "%.17g" % s.f,
                "1" if s.feasible else "0",
            )

    if hasattr(path, "write"):
        writer = csv.writer(path, lineterminator="\n")
        writer.writerow(["p1", "p2", "p3", "f", "feasible"])
        writer.writerows(rows())
    else:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["p1", "p2", "p3", "f", "feasible"])
            writer.writerows(rows())
