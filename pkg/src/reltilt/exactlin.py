"""Exact linear algebra over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays whose entries are kept reduced
mod p.  Every routine here is deterministic: row reduction always takes the
leftmost available pivot, so kernels and images come out the same way on
every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DEFAULT_PRIME = 101
# keeps every dot product of length <= 10**6 inside int64
_MAX_PRIME = 3037


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """The prime field F_p."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")
        if self.p > _MAX_PRIME:
            raise ValueError(f"prime {self.p} too large for int64 accumulation (max {_MAX_PRIME})")

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def mat(self, rows, cols=None) -> np.ndarray:
        """Build a reduced matrix from nested lists (or zeros of a given shape)."""
        if cols is not None:
            return np.zeros((rows, cols), dtype=np.int64)
        a = np.array(rows, dtype=np.int64)
        return a % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
        if a.shape[1] == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        return (a @ b) % self.p

    def random(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)


@dataclass(frozen=True)
class Factorization:
    rank: int
    rref: np.ndarray
    pivots: tuple
    kernel: np.ndarray  # columns span the null space
    image: np.ndarray  # columns of A at pivot positions


def rref(F: Field, A: np.ndarray) -> tuple[np.ndarray, tuple]:
    """Reduced row echelon form and pivot columns (leftmost pivoting)."""
    p = F.p
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * F.inv(R[r, c])) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
        pivots.append(c)
        r += 1
    return R, tuple(pivots)


def solve_and_factor(F: Field, A: np.ndarray) -> Factorization:
    A = np.asarray(A, dtype=np.int64) % F.p
    rows, cols = A.shape
    R, piv = rref(F, A)
    rank = len(piv)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        K[fc, j] = 1
        for i, pc in enumerate(piv):
            K[pc, j] = (-R[i, fc]) % F.p
    image = A[:, list(piv)] if rank else np.zeros((rows, 0), dtype=np.int64)
    return Factorization(rank, R, piv, K, image)


def rank(F: Field, A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def kernel(F: Field, A: np.ndarray) -> np.ndarray:
    return solve_and_factor(F, A).kernel


def solve_linear(F: Field, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """A particular solution x of A x = b, or None when b is not in the column space.

    ``b`` may be a vector or a matrix (solved column by column jointly).
    """
    A = np.asarray(A, dtype=np.int64) % F.p
    b = np.asarray(b, dtype=np.int64) % F.p
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: A has {A.shape[0]} rows, b has {b.shape[0]}")
    rows, cols = A.shape
    R, piv = rref(F, np.hstack([A, b]))
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        if c >= cols:
            return None
        x[c] = R[i, cols:]
    return x[:, 0] if vec else x


def column_space(F: Field, A: np.ndarray) -> np.ndarray:
    """Independent columns spanning col(A), in rref-normalized form (basis as columns)."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0 or A.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    R, piv = rref(F, A.T)
    return R[: len(piv)].T.copy()


def complement_basis(F: Field, sub: np.ndarray, n: int) -> np.ndarray:
    """Standard basis vectors completing the column span of ``sub`` to F^n."""
    sub = np.asarray(sub, dtype=np.int64)
    sub = np.zeros((n, 0), dtype=np.int64) if sub.size == 0 else sub.reshape(n, -1)
    M = np.hstack([sub, np.eye(n, dtype=np.int64)])
    _, piv = rref(F, M)
    k = sub.shape[1]
    chosen = [c - k for c in piv if c >= k]
    return np.eye(n, dtype=np.int64)[:, chosen]


def in_span(F: Field, A: np.ndarray, v: np.ndarray) -> bool:
    return solve_linear(F, A, v) is not None


def inverse(F: Field, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of non-square matrix")
    x = solve_linear(F, A, np.eye(n, dtype=np.int64))
    if x is None or rank(F, A) < n:
        raise ValueError("matrix is singular")
    return x


def is_invertible(F: Field, A: np.ndarray) -> bool:
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def char_poly(F: Field, A: np.ndarray) -> list[int]:
    """Coefficients [c_0, ..., c_n] of det(t - A), monic (Faddeev-LeVerrier, needs n < p)."""
    n = A.shape[0]
    if n >= F.p:
        raise ValueError("Faddeev-LeVerrier needs n < p")
    p = F.p
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = np.zeros_like(A)
    I = np.eye(n, dtype=np.int64)
    for k in range(1, n + 1):
        M = (F.mul(A, M) + coeffs[n - k + 1] * I) % p
        AM = F.mul(A, M)
        coeffs[n - k] = (-int(np.trace(AM) % p) * F.inv(k)) % p
    return coeffs


def char_poly_roots(F: Field, A: np.ndarray) -> list[int]:
    """Eigenvalues of A lying in F_p."""
    if A.shape[0] == 0:
        return []
    c = char_poly(F, A)
    t = np.arange(F.p, dtype=np.int64)
    val = np.zeros(F.p, dtype=np.int64)
    for coef in reversed(c):
        val = (val * t + coef) % F.p
    return [int(x) for x in np.nonzero(val == 0)[0]]
