"""Bloch-ball coordinates for the qubit family's outcome probabilities.

A qubit state rho = (I + r . sigma)/2 hits the four family elements with
probabilities that are affine in the Bloch vector r:

    q_x = (a_x / 2) * (1 + n_x . r)

where a_x is the element's trace and n_x the Bloch vector of its ket:

    n_1 = (0, 0, 1)
    n_2 = (2 r sqrt(1 - r^2), 0, 2 r^2 - 1)
    n_3 = (-(2 sqrt(2)/3) cos t, -(2 sqrt(2)/3) sin t, -1/3)
    n_4 = n_3 with the sign of the y component flipped

(r, t) = (point.r, point.theta). The inverse map solves the affine system
by least squares and reports a residual; the residual is measured against
the closest point of the closed unit ball, so probability vectors that are
only realizable by "states" outside the ball are rejected too.
"""

from __future__ import annotations

import numpy as np

from .errors import InconsistentProbabilities, LengthMismatch, OutsideBlochBall
from .linalg import pauli_compose
from .qubit import QubitFamilyPoint

_BALL_SLACK = 1e-9
_RESIDUAL_GATE = 1e-8


def _as_bloch(r) -> np.ndarray:
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,):
        raise LengthMismatch(f"Bloch vector must have shape (3,), got {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("Bloch vector has non-finite entries")
    norm = float(np.linalg.norm(vec))
    if norm > 1.0 + _BALL_SLACK:
        raise OutsideBlochBall(f"Bloch vector norm {norm!r} exceeds 1")
    return vec


def bloch_to_state(r) -> np.ndarray:
    """Density matrix (I + r . sigma)/2 of a Bloch vector."""
    vec = _as_bloch(r)
    return pauli_compose(0.5, 0.5 * vec[0], 0.5 * vec[1], 0.5 * vec[2])


def _directions(point: QubitFamilyPoint) -> tuple[np.ndarray, np.ndarray]:
    """Per-element trace weights a_x/2 and Bloch directions n_x (rows)."""
    rr, th = point.r, point.theta
    c = 2.0 * np.sqrt(2.0) / 3.0
    dirs = np.array(
        [
            [0.0, 0.0, 1.0],
            [2.0 * rr * np.sqrt(max(0.0, 1.0 - rr * rr)), 0.0, 2.0 * rr * rr - 1.0],
            [-c * np.cos(th), -c * np.sin(th), -1.0 / 3.0],
            [-c * np.cos(th), +c * np.sin(th), -1.0 / 3.0],
        ]
    )
    a = point.params
    weights = 0.5 * np.array([a.a_minus, a.a_minus, a.a_plus, a.a_plus])
    return weights, dirs


def bloch_to_probs(r, point: QubitFamilyPoint) -> np.ndarray:
    """Outcome probabilities of the Bloch vector r under the family POVM."""
    vec = _as_bloch(r)
    weights, dirs = _directions(point)
    return weights * (1.0 + dirs @ vec)


def _ball_residual(m: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """min ||M r - rhs|| over ||r|| <= 1, via the trust-region subproblem."""
    gram = m.T @ m
    g = m.T @ rhs
    vals, vecs = np.linalg.eigh(gram)
    gh = vecs.T @ g

    def norm_at(lam: float) -> float:
        return float(np.linalg.norm(gh / (vals + lam)))

    lo, hi = 0.0, float(np.linalg.norm(g)) + float(vals[-1]) + 1.0
    while norm_at(hi) > 1.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if norm_at(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    lam = hi
    r = vecs @ (gh / (vals + lam))
    return r, float(np.linalg.norm(m @ r - rhs))


def probs_to_bloch(q, point: QubitFamilyPoint) -> np.ndarray:
    """Invert bloch_to_probs, rejecting vectors no qubit state can produce.

    Solves the 4x3 affine system by least squares. If the residual exceeds
    1e-8, or the solution lies outside the closed unit ball (in which case
    the residual is re-measured at the nearest ball point), raises
    InconsistentProbabilities.
    """
    probs = np.asarray(q, dtype=float)
    if probs.shape != (4,):
        raise LengthMismatch(f"expected 4 probabilities, got shape {probs.shape}")
    if not np.all(np.isfinite(probs)):
        raise ValueError("probabilities contain non-finite entries")
    weights, dirs = _directions(point)
    m = weights[:, None] * dirs
    rhs = probs - weights
    sol, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = float(np.linalg.norm(m @ sol - rhs))
    if residual > _RESIDUAL_GATE:
        raise InconsistentProbabilities(
            f"no Bloch vector reproduces these probabilities (residual {residual:.3e})"
        )
    norm = float(np.linalg.norm(sol))
    if norm > 1.0 + _BALL_SLACK:
        sol, ball_res = _ball_residual(m, rhs)
        if ball_res > _RESIDUAL_GATE:
            raise InconsistentProbabilities(
                f"probabilities require a Bloch vector of norm {norm:.6g}; "
                f"nearest state leaves residual {ball_res:.3e}"
            )
    return sol
