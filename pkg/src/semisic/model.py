"""POVM container, trace-value arithmetic, and semi-SIC verification.

A semi-SIC here is an informationally complete POVM of d^2 rank-one
elements whose pairwise Hilbert-Schmidt overlaps all equal one constant b.
Dropping the constant-trace requirement of a SIC leaves the element traces
free, but completeness forces them to take at most two values a- <= a+,
the roots of a^2 - a + (d^2 - 1) b = 0. With k elements on the small trace,
counting gives k a- + (d^2 - k) a+ = d, and for d >= 3 the overlap is pinned
to a rational function of (d, k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BOutOfRange,
    DimensionTooSmall,
    KOutOfRange,
    MalformedPovm,
)
from .linalg import DEFAULT_TOL, Tolerances

# Classification labels used by verify() and the CLI.
SIC = "SIC"
STRICT_SEMI_SIC = "StrictSemiSIC"
NOT_SEMI_SIC = "NotSemiSIC"

# Coarse structural gates. Deliberately loose: mildly broken inputs should
# reach verify() and come back NotSemiSIC with the violation quantified,
# not explode at construction.
COMPLETENESS_GATE = 1e-2
PSD_GATE = 1e-4

# Discriminants this close to zero are snapped to the degenerate (SIC) root.
# The endpoint b = 1/(4(d^2-1)) is irrational in binary, so exact-endpoint
# inputs arrive as floats with discriminant ~1e-16; without the snap the
# square-root singularity would spread the two trace values by ~1e-8.
DISC_SNAP = 1e-13

_COUNTING_TOL = 1e-12
# Trace gap (in units of tol_norm) above which elements split into two classes.
_GAP_FACTOR = 100.0


def trace_values(d: int, b: float) -> tuple[float, float]:
    """The two admissible element traces (a-, a+) for overlap b in dimension d.

    Roots of a^2 - a + (d^2 - 1) b = 0; real iff b <= 1/(4(d^2-1)).
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    b = float(b)
    if not np.isfinite(b) or b <= 0.0:
        raise BOutOfRange(f"overlap b must be positive, got {b!r}")
    disc = 1.0 - 4.0 * b * (d * d - 1)
    if abs(disc) <= DISC_SNAP:
        disc = 0.0
    if disc < 0.0:
        raise BOutOfRange(
            f"b = {b!r} exceeds the maximum 1/(4(d^2-1)) = {1.0 / (4 * (d * d - 1))!r} "
            f"for d = {d} (negative discriminant)"
        )
    root = np.sqrt(disc)
    return (0.5 * (1.0 - root), 0.5 * (1.0 + root))


def b_from_k(d: int, k: int) -> float:
    """Overlap forced by a trace split of k small-trace elements, d >= 3."""
    return float(b_from_k_exact(d, k))


def b_from_k_exact(d: int, k: int) -> Fraction:
    """Exact rational value of b_from_k."""
    _check_dk(d, k)
    n = d * d
    return Fraction((k - d) * (k + d - n), (n - 1) * (n - 2 * k) ** 2)


def trace_values_exact(d: int, k: int) -> tuple[Fraction, Fraction]:
    """Exact (a-, a+) for an admissible (d, k), d >= 3.

    For admissible k the discriminant is the square of (d^2 - 2d)/(2k - d^2),
    so both roots are rational.
    """
    _check_dk(d, k)
    n = d * d
    half = Fraction(1, 2)
    root = Fraction(n - 2 * d, 2 * k - n)
    return (half * (1 - root), half * (1 + root))


def admissible_k(d: int) -> list[int]:
    """All k permitted by the counting bound d^2 - d < k <= d^2 (d >= 3)."""
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise DimensionTooSmall(f"trace-split enumeration needs d >= 3, got {d!r}")
    n = d * d
    return list(range(n - d + 1, n + 1))


def _check_dk(d: int, k: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise DimensionTooSmall(f"k-parametrized overlap needs d >= 3, got {d!r}")
    n = d * d
    if not isinstance(k, (int, np.integer)) or not (n - d < k <= n):
        raise KOutOfRange(f"k must satisfy {n - d} < k <= {n} for d = {d}, got {k!r}")


@dataclass(frozen=True)
class SemiSicParams:
    """Validated parameter bundle (d, b, k, a-, a+).

    The counting identity k a- + (d^2 - k) a+ = d must hold within 1e-12;
    for d >= 3 that is equivalent to the admissible-k bound, and for d = 2
    it admits exactly k = 2 (the strict family) and k = 4 (the SIC point).
    """

    d: int
    b: float
    k: int
    a_minus: float
    a_plus: float

    def __post_init__(self) -> None:
        lo, hi = trace_values(self.d, self.b)
        if abs(self.a_minus - lo) > _COUNTING_TOL or abs(self.a_plus - hi) > _COUNTING_TOL:
            raise ValueError(
                f"trace values ({self.a_minus!r}, {self.a_plus!r}) are not the roots "
                f"({lo!r}, {hi!r}) for d = {self.d}, b = {self.b!r}"
            )
        n = self.d * self.d
        if not isinstance(self.k, (int, np.integer)) or not 0 < self.k <= n:
            raise KOutOfRange(f"k must lie in 1..{n}, got {self.k!r}")
        counted = self.k * self.a_minus + (n - self.k) * self.a_plus
        if abs(counted - self.d) > _COUNTING_TOL:
            raise KOutOfRange(
                f"counting identity fails: k a- + (d^2-k) a+ = {counted!r} != {self.d}"
            )

    @classmethod
    def from_b(cls, d: int, b: float, k: int) -> "SemiSicParams":
        lo, hi = trace_values(d, b)
        return cls(d=int(d), b=float(b), k=int(k), a_minus=lo, a_plus=hi)

    @classmethod
    def from_k(cls, d: int, k: int) -> "SemiSicParams":
        return cls.from_b(d, b_from_k(d, k), k)


def _validate_povm_stack(dim: int, elements: np.ndarray, tol: Tolerances) -> None:
    n = dim * dim
    if elements.shape != (n, dim, dim):
        raise MalformedPovm(
            f"expected {n} elements of shape ({dim}, {dim}), got array shape {elements.shape}"
        )
    if not (np.all(np.isfinite(elements.real)) and np.all(np.isfinite(elements.imag))):
        raise MalformedPovm("elements contain non-finite entries")
    herm_dev = float(np.max(np.abs(elements - elements.conj().transpose(0, 2, 1))))
    if herm_dev > 1e-8:
        raise MalformedPovm(f"elements are not Hermitian (max deviation {herm_dev:.3e})")
    total = elements.sum(axis=0)
    comp_dev = float(np.max(np.abs(total - np.eye(dim))))
    if comp_dev > COMPLETENESS_GATE:
        raise MalformedPovm(f"elements do not sum to the identity (defect {comp_dev:.3e})")
    for x in range(n):
        low = float(np.linalg.eigvalsh(elements[x])[0])
        if low < -PSD_GATE:
            raise MalformedPovm(f"element {x} has negative eigenvalue {low:.3e}")


@dataclass(frozen=True)
class Povm:
    """Ordered stack of d^2 Hermitian effects summing to the identity.

    elements has shape (d^2, d, d). Structural junk (wrong count, badly
    non-Hermitian, grossly incomplete or negative) raises MalformedPovm at
    construction; finer defects are verify()'s job.
    """

    dim: int
    elements: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise MalformedPovm(f"dimension must be an integer >= 2, got {self.dim!r}")
        stack = np.asarray(self.elements, dtype=complex)
        _validate_povm_stack(int(self.dim), stack, DEFAULT_TOL)
        stack = 0.5 * (stack + stack.conj().transpose(0, 2, 1))
        stack.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "elements", stack)

    @classmethod
    def from_vectors(cls, vectors) -> "Povm":
        """Rank-one POVM E_x = |v_x><v_x| from unnormalized vectors (rows)."""
        rows = np.asarray(vectors, dtype=complex)
        if rows.ndim != 2:
            raise MalformedPovm(f"expected a 2-D array of row vectors, got shape {rows.shape}")
        n, d = rows.shape
        if n != d * d:
            raise MalformedPovm(f"expected {d * d} vectors of length {d}, got {n}")
        stack = np.einsum("xi,xj->xij", rows, rows.conj())
        return cls(dim=d, elements=stack)

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, idx: int) -> np.ndarray:
        return self.elements[idx]

    def traces(self) -> np.ndarray:
        return np.real(np.trace(self.elements, axis1=1, axis2=2))


@dataclass(frozen=True)
class VerificationReport:
    """Everything verify() measured, plus the resulting classification."""

    is_ic: bool
    all_rank_one: bool
    equiangular: bool
    fitted_b: float
    trace_classes: tuple[tuple[float, int], ...]
    k: int
    classification: str
    max_violation: float


def _split_traces(traces: np.ndarray, gap_gate: float) -> tuple[np.ndarray, np.ndarray]:
    """Cluster traces into one or two classes at the largest gap.

    Returns (class index per element, class means ascending).
    """
    order = np.argsort(traces, kind="stable")
    sorted_t = traces[order]
    gaps = np.diff(sorted_t)
    if gaps.size and float(np.max(gaps)) > gap_gate:
        cut = int(np.argmax(gaps)) + 1
        labels = np.zeros(traces.size, dtype=int)
        labels[order[cut:]] = 1
        means = np.array([sorted_t[:cut].mean(), sorted_t[cut:].mean()])
        return labels, means
    return np.zeros(traces.size, dtype=int), np.array([float(sorted_t.mean())])


def verify(povm: Povm, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Measure how far a POVM is from the defining semi-SIC conditions.

    Checks, in order: rank-one elements, informational completeness (the
    elements span the full operator space), equal pairwise overlaps, trace
    values consistent with the overlap, completeness defect, and positivity.
    The largest deviation drives the classification: at most tol_cond means
    SIC (one trace class) or StrictSemiSIC (two), anything more NotSemiSIC.
    """
    if not isinstance(povm, Povm):
        raise MalformedPovm(f"expected a Povm, got {type(povm).__name__}")
    _validate_povm_stack(povm.dim, povm.elements, tol)
    d = povm.dim
    n = d * d
    stack = povm.elements

    gram = np.einsum("aij,bji->ab", stack, stack)
    imag_dev = float(np.max(np.abs(gram.imag)))
    gram = gram.real

    off = gram[~np.eye(n, dtype=bool)]
    fitted_b = float(off.mean())
    equi_dev = float(np.max(np.abs(off - fitted_b)))

    comp_dev = float(np.max(np.abs(stack.sum(axis=0) - np.eye(d))))

    eig_stack = np.linalg.eigvalsh(stack)
    psd_dev = float(max(0.0, -np.min(eig_stack)))
    scale = np.maximum(1.0, np.max(np.abs(eig_stack), axis=1))
    ranks = (np.abs(eig_stack) > tol.tol_rank * scale[:, None]).sum(axis=1)
    all_rank_one = bool(np.all(ranks == 1))

    gram_eigs = np.linalg.eigvalsh(gram)
    ic_scale = max(1.0, float(np.max(np.abs(gram_eigs))))
    is_ic = bool(np.min(gram_eigs) > tol.tol_rank * ic_scale)

    traces = povm.traces()
    labels, means = _split_traces(traces, _GAP_FACTOR * tol.tol_norm)
    spread = float(np.max(np.abs(traces - means[labels])))

    trace_match = np.inf
    try:
        lo, hi = trace_values(d, fitted_b)
        if means.size == 2:
            trace_match = max(abs(means[0] - lo), abs(means[1] - hi))
        else:
            trace_match = min(abs(means[0] - lo), abs(means[0] - hi))
    except (BOutOfRange, ValueError):
        pass  # overlaps incompatible with any trace solution

    if means.size == 2:
        k = int(np.count_nonzero(labels == 0))
        classes = ((float(means[0]), k), (float(means[1]), n - k))
    else:
        # single trace class: the constant-trace (SIC) convention is k = d^2
        k = n
        classes = ((float(means[0]), n),)

    max_violation = max(equi_dev, comp_dev, psd_dev, spread, imag_dev,
                        trace_match if np.isfinite(trace_match) else 1.0)
    equiangular = equi_dev <= tol.tol_cond

    if is_ic and all_rank_one and max_violation <= tol.tol_cond:
        classification = SIC if means.size == 1 else STRICT_SEMI_SIC
    else:
        classification = NOT_SEMI_SIC

    return VerificationReport(
        is_ic=is_ic,
        all_rank_one=all_rank_one,
        equiangular=equiangular,
        fitted_b=fitted_b,
        trace_classes=classes,
        k=k,
        classification=classification,
        max_violation=max_violation,
    )
