"""Exact integer characteristic polynomials of symmetric 0/1 matrices.

Strategy: compute the characteristic polynomial modulo enough word-size primes
(Hessenberg reduction + the standard Hessenberg recurrence, vectorized with
numpy int64) and reconstruct the integer coefficients by the Chinese remainder
theorem.  The prime product is chosen to exceed twice a Hadamard-style bound
on the coefficients, so the result is provably exact; no floating point is
involved anywhere.
"""

from __future__ import annotations

from math import comb, isqrt

import numpy as np

from .errors import ParameterError

# Primes stay below 2^25 so that a dot product of up to 2^12 terms of
# (p-1)^2 < 2^50 products fits comfortably in int64.
_PRIME_CEILING = 1 << 25
_MAX_DIM = 1 << 12


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _primes_with_product_exceeding(bound: int) -> list[int]:
    primes = []
    prod = 1
    p = _PRIME_CEILING - 1
    while prod <= bound:
        while not _is_prime(p):
            p -= 1
        primes.append(p)
        prod *= p
        p -= 1
    return primes


def coefficient_bound(n: int) -> int:
    """Upper bound on |c_k| for the char poly of an n x n 0/1 symmetric matrix.

    c_k is (up to sign) a sum of C(n,k) principal k x k minors, each bounded
    by Hadamard's inequality by k^(k/2).
    """
    best = 1
    for k in range(n + 1):
        hadamard = isqrt(k**k) + 1
        best = max(best, comb(n, k) * hadamard)
    return best


def _charpoly_mod(A: np.ndarray, p: int) -> np.ndarray:
    """char poly of integer matrix A modulo prime p; ascending coefficients, length n+1."""
    H = (A % p).astype(np.int64)
    n = H.shape[0]
    if n == 0:
        return np.array([1], dtype=np.int64)
    # Hessenberg reduction by similarity transforms over GF(p)
    for j in range(n - 2):
        col = H[j + 1 :, j]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            H[[j + 1, piv]] = H[[piv, j + 1]]
            H[:, [j + 1, piv]] = H[:, [piv, j + 1]]
        inv = pow(int(H[j + 1, j]), p - 2, p)
        mults = (H[j + 2 :, j] * inv) % p
        H[j + 2 :] = (H[j + 2 :] - mults[:, None] * H[j + 1][None, :]) % p
        H[:, j + 1] = (H[:, j + 1] + H[:, j + 2 :] @ mults) % p
    # recurrence over leading principal minors of the Hessenberg matrix
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[0, 0] = 1
    sub = np.diagonal(H, -1).copy()  # sub[t] = H[t+1, t]
    for m in range(1, n + 1):
        pm = np.zeros(n + 1, dtype=np.int64)
        pm[1 : m + 1] = P[m - 1, 0:m]  # x * p_{m-1}
        pm = (pm - int(H[m - 1, m - 1]) * P[m - 1]) % p
        if m >= 2:
            weights = np.zeros(m - 1, dtype=np.int64)
            running = 1
            for i in range(1, m):
                running = (running * int(sub[m - i - 1])) % p
                if running == 0:
                    break
                weights[i - 1] = (int(H[m - i - 1, m - 1]) * running) % p
            # pm -= sum_i weights[i-1] * p_{m-i-1}
            rows = P[m - 2 :: -1][: m - 1]  # p_{m-2}, p_{m-3}, ..., p_0
            pm = (pm - (weights @ rows)) % p
        P[m] = pm
    return P[n]


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    inv = pow(m1, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def char_poly_exact(adj_rows: list[int], n: int) -> tuple[int, ...]:
    """Exact char poly det(xI - A) of an adjacency matrix given as row bitmasks.

    Returns ascending integer coefficients (c_0, ..., c_n) with c_n = 1.
    """
    if n >= _MAX_DIM:
        raise ParameterError(f"matrix dimension {n} exceeds charpoly limit {_MAX_DIM}")
    A = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(adj_rows):
        m = row
        j = 0
        while m:
            if m & 1:
                A[i, j] = 1
            m >>= 1
            j += 1
    bound = coefficient_bound(n)
    primes = _primes_with_product_exceeding(2 * bound + 1)
    residues = [_charpoly_mod(A, p) for p in primes]
    coeffs = []
    for k in range(n + 1):
        r, m = int(residues[0][k]), primes[0]
        for resvec, p in zip(residues[1:], primes[1:]):
            r, m = _crt_pair(r, m, int(resvec[k]), p)
        if r > m // 2:
            r -= m
        coeffs.append(r)
    assert coeffs[n] == 1
    return tuple(coeffs)
