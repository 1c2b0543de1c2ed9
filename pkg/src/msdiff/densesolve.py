"""Small dense linear solves by Gauss elimination with row pivoting.

The flux systems are (S-1) x (S-1) per half-node and the deviator systems
S x S per node, so k stays tiny; ``solve_dense_batch`` eliminates a whole
stack of systems at once with vectorized pivoting, which is what the steppers
use in their per-step hot path.  A pivot of magnitude <= singular_tol * max|A|
raises SingularSystemError carrying the elimination column (and batch index).
"""

import numpy as np

from .errors import InvalidParameterError, SingularSystemError

__all__ = ["DenseSystem", "solve_dense", "solve_dense_batch", "MAX_SIZE"]

MAX_SIZE = 16
DEFAULT_SINGULAR_TOL = 1e-12


class DenseSystem:
    """A k x k system A x = b, k <= 16."""

    def __init__(self, a, b):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        if self.a.ndim != 2 or self.a.shape[0] != self.a.shape[1]:
            raise InvalidParameterError(f"matrix must be square, got shape {self.a.shape}")
        if self.b.shape != (self.a.shape[0],):
            raise InvalidParameterError(
                f"right side shape {self.b.shape} does not match matrix {self.a.shape}"
            )
        if self.a.shape[0] > MAX_SIZE:
            raise InvalidParameterError(f"system size {self.a.shape[0]} exceeds {MAX_SIZE}")

    def solve(self, singular_tol=DEFAULT_SINGULAR_TOL):
        return solve_dense(self.a, self.b, singular_tol)


def solve_dense(a, b, singular_tol=DEFAULT_SINGULAR_TOL, context=None):
    """Solve one small dense system; see solve_dense_batch."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return solve_dense_batch(a[None, :, :], b[None, :], singular_tol, context)[0]


def solve_dense_batch(a, b, singular_tol=DEFAULT_SINGULAR_TOL, context=None):
    """Solve a stack of k x k systems a[m] x[m] = b[m] for all m at once.

    Partial (row) pivoting on the largest column magnitude, vectorized over
    the batch axis; deterministic for identical inputs.
    """
    u = np.array(a, dtype=float)
    y = np.array(b, dtype=float)
    if u.ndim != 3 or u.shape[1] != u.shape[2]:
        raise InvalidParameterError(f"expected (m, k, k) matrix stack, got shape {u.shape}")
    m, k, _ = u.shape
    if y.shape != (m, k):
        raise InvalidParameterError(
            f"right-side stack shape {y.shape} does not match matrices {u.shape}"
        )
    if k > MAX_SIZE:
        raise InvalidParameterError(f"system size {k} exceeds {MAX_SIZE}")

    rows = np.arange(m)
    scale = np.abs(u).max(axis=(1, 2))
    for col in range(k):
        piv = col + np.argmax(np.abs(u[:, col:, col]), axis=1)
        pivmag = np.abs(u[rows, piv, col])
        bad = pivmag <= singular_tol * scale
        if np.any(bad):
            sys_idx = int(np.argmax(bad))
            raise SingularSystemError(
                f"singular system: pivot {pivmag[sys_idx]:.3e} at column {col}",
                pivot_index=col,
                system_index=sys_idx,
                context=context,
            )
        swap = piv != col
        if np.any(swap):
            w = rows[swap]
            u[w, col], u[w, piv[swap]] = u[w, piv[swap]].copy(), u[w, col].copy()
            y[w, col], y[w, piv[swap]] = y[w, piv[swap]].copy(), y[w, col].copy()
        if col + 1 < k:
            factors = u[:, col + 1:, col] / u[:, col, col][:, None]
            u[:, col + 1:, col:] -= factors[:, :, None] * u[:, col, col:][:, None, :]
            y[:, col + 1:] -= factors * y[:, col][:, None]

    # fixed-order accumulation keeps results identical for any batch size
    x = np.empty_like(y)
    for col in range(k - 1, -1, -1):
        acc = y[:, col].copy()
        for jj in range(col + 1, k):
            acc -= u[:, col, jj] * x[:, jj]
        x[:, col] = acc / u[:, col, col]
    return x
