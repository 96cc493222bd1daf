"""Dense linear algebra over a prime field, on int64 numpy arrays.

Everything is deterministic (first-nonzero pivoting, fixed elimination
order) so that downstream table construction is bit-reproducible.
Moduli stay small enough that products fit comfortably in int64.
"""

from __future__ import annotations

import numpy as np


def mod_inv(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    return (A @ B) % p


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot column list."""
    M = np.array(A, dtype=np.int64) % p
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        M[r] = (M[r] * mod_inv(int(M[r, c]), p)) % p
        factors = M[:, c].copy()
        factors[r] = 0
        M -= np.outer(factors, M[r])
        M %= p
        pivots.append(c)
        r += 1
    return M, pivots


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns form the standard free-variable basis of the kernel."""
    R, pivots = rref(A, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for r, pc in enumerate(pivots):
            basis[pc, j] = (-int(R[r, fc])) % p
    return basis


def solve_matrix(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Solve A X = B for full-column-rank A with consistent B."""
    n = A.shape[1]
    R, pivots = rref(np.concatenate([A % p, B % p], axis=1), p)
    if pivots[: n if len(pivots) >= n else len(pivots)] != list(range(n)):
        raise ArithmeticError("coefficient matrix is rank deficient")
    if any(c >= n for c in pivots[n:]):
        raise ArithmeticError("inconsistent system")
    return R[:n, n:].copy()


def _hessenberg(A: np.ndarray, p: int) -> np.ndarray:
    H = np.array(A, dtype=np.int64) % p
    n = H.shape[0]
    for c in range(n - 2):
        nz = np.nonzero(H[c + 1 :, c])[0]
        if nz.size == 0:
            continue
        pr = c + 1 + int(nz[0])
        if pr != c + 1:
            H[[c + 1, pr]] = H[[pr, c + 1]]
            H[:, [c + 1, pr]] = H[:, [pr, c + 1]]
        inv = mod_inv(int(H[c + 1, c]), p)
        factors = (H[c + 2 :, c] * inv) % p
        H[c + 2 :] = (H[c + 2 :] - np.outer(factors, H[c + 1])) % p
        H[:, c + 1] = (H[:, c + 1] + H[:, c + 2 :] @ factors) % p
    return H


def charpoly(A: np.ndarray, p: int) -> np.ndarray:
    """Coefficients (ascending) of det(x I - A) mod p."""
    n = A.shape[0]
    if n == 0:
        return np.array([1], dtype=np.int64)
    H = _hessenberg(A, p)
    # d[m] = charpoly of leading m x m block, via last-column expansion
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        shifted = np.roll(polys[m - 1], 1)
        shifted[0] = 0
        acc = (shifted - H[m - 1, m - 1] * polys[m - 1]) % p
        prod = 1
        for k in range(m - 1, 0, -1):
            prod = (prod * H[k, k - 1]) % p
            coeff = (H[k - 1, m - 1] * prod) % p
            if coeff:
                acc = (acc - coeff * polys[k - 1]) % p
        polys[m] = acc
    return polys[n].copy()


def poly_eval_all(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Evaluate the polynomial at every field element (index = point)."""
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        vals = (vals * xs + int(c)) % p
    return vals


def poly_roots(coeffs: np.ndarray, p: int) -> list[int]:
    vals = poly_eval_all(coeffs, p)
    return [int(x) for x in np.nonzero(vals == 0)[0]]
