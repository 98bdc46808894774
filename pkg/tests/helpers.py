"""Shared oracles and random-object generators for the test suite."""

import numpy as np

from semisic.model import Povm


def hesse_sic() -> Povm:
    """d = 3 SIC from the shift/clock orbit of a known fiducial vector.

    Serves as the independent oracle for everything d = 3: verification,
    dual frames, and the k = 9 search regression.
    """
    w = np.exp(2j * np.pi / 3.0)
    shift = np.roll(np.eye(3), 1, axis=0)
    clock = np.diag([1.0, w, w * w])
    fid = np.array([0.0, 1.0, -1.0]) / np.sqrt(2.0)
    kets = [
        np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, m) @ fid
        for j in range(3)
        for m in range(3)
    ]
    stack = np.array([np.outer(v, v.conj()) / 3.0 for v in kets])
    return Povm(dim=3, elements=stack)


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    # fix column phases so the distribution is Haar, not QR-biased
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_density(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = z @ z.conj().T
    return m / float(np.trace(m).real)
