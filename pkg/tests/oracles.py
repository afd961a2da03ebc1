"""Slow, obviously-correct reference routines used only by the tests.

They share no code with the package: determinants by permutation
expansion, rank as the largest nonvanishing minor, matchings by
trying every injective assignment.
"""

from fractions import Fraction
from itertools import combinations, permutations, product


def _sign(perm):
    sign, seen = 1, set()
    for start in range(len(perm)):
        if start in seen:
            continue
        k, length = start, 0
        while k not in seen:
            seen.add(k)
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows, p=None):
    n = len(rows)
    total = 0 if p else Fraction(0)
    for perm in permutations(range(n)):
        term = _sign(perm)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total % p if p else total


def minor_rank(rows, p=None):
    """Largest k with a nonzero k x k minor."""
    if not rows or not rows[0]:
        return 0
    r, c = len(rows), len(rows[0])
    for k in range(min(r, c), 0, -1):
        for ri in combinations(range(r), k):
            for ci in combinations(range(c), k):
                if leibniz_det([[rows[i][j] for j in ci] for i in ri], p) != 0:
                    return k
    return 0


def brute_matching(bits):
    """Maximum matching size by trying every partial row -> column assignment."""
    rows = len(bits)
    cols = len(bits[0]) if rows else 0
    best = 0
    for k in range(min(rows, cols), 0, -1):
        for ri in combinations(range(rows), k):
            for cj in permutations(range(cols), k):
                if all(bits[a][b] for a, b in zip(ri, cj)):
                    return k
    return best


def all_matrices(rows, cols, p):
    for flat in product(range(p), repeat=rows * cols):
        yield [list(flat[r * cols:(r + 1) * cols]) for r in range(rows)]


def matmul_mod(a, b, p):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) % p for j in range(len(b[0]))]
            for i in range(len(a))]


def gf2_invertible(n):
    return [m for m in all_matrices(n, n, 2) if leibniz_det(m, 2) == 1]
