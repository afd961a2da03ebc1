"""Exact linear algebra over prime fields and the rationals.

Elements of GF(p) are plain ``int`` in ``[0, p)``; rationals are
:class:`fractions.Fraction`, which is always gcd-reduced with a positive
denominator.  Generic ("almost all gains") rank of a 0/1 support pattern is
the size of a maximum bipartite matching between its rows and columns.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, NonSquare, Singular

MERSENNE_31 = 2**31 - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either GF(p) for a prime ``p`` or the rationals."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise ValueError(f"GF(p) needs a prime p, got {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("prime", p)

    @classmethod
    def rational(cls) -> FieldSpec:
        return cls("rational")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    def coerce(self, x):
        """Map an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "rational":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def mul(self, a, b):
        return a * b % self.p if self.is_prime else a * b

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime else a - b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.is_prime else 1 / a

    def random_nonzero(self, rng: random.Random):
        if self.is_prime:
            return rng.randrange(1, self.p)
        return Fraction(rng.randint(1, 997), rng.randint(1, 997))

    def __str__(self):
        return f"GF({self.p})" if self.is_prime else "Q"


GF2 = FieldSpec.prime(2)
QQ = FieldSpec.rational()


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable dense matrix over a :class:`FieldSpec`, stored row-major."""

    rows: int
    cols: int
    entries: tuple
    field: FieldSpec

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        object.__setattr__(
            self, "entries", tuple(self.field.coerce(e) for e in self.entries)
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: FieldSpec, cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec):
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec):
        return cls(n, n, tuple(field.one if i == j else field.zero
                               for i in range(n) for j in range(n)), field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows,
                           tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
                           self.field)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> ExactMatrix:
        rows, cols = list(rows), list(cols)
        return ExactMatrix(len(rows), len(cols),
                           tuple(self[i, j] for i in rows for j in cols), self.field)

    def vstack(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.cols or self.field != other.field:
            raise ValueError("vstack needs equal column counts and fields")
        return ExactMatrix(self.rows + other.rows, self.cols,
                           self.entries + other.entries, self.field)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows or self.field != other.field:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                s = sum(r[k] * other[k, j] for k in range(self.cols))
                out.append(s % f.p if f.is_prime else s)
        return ExactMatrix(self.rows, other.cols, tuple(out), f)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.rows, self.field) if self.is_square else False

    def nonzero_pattern(self) -> SupportPattern:
        return SupportPattern.from_rows(
            [[1 if self[i, j] != 0 else 0 for j in range(self.cols)] for i in range(self.rows)],
            cols=self.cols,
        )


def _rank_gf2(m: ExactMatrix) -> int:
    basis: list[int] = []
    for i in range(m.rows):
        v = 0
        for e in m.row(i):
            v = (v << 1) | e
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def _rank_mod_p(m: ExactMatrix) -> int:
    p = m.field.p
    a = m.to_lists()
    rank, rows, cols = 0, m.rows, m.cols
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        pr = [x * inv % p for x in a[rank]]
        a[rank] = pr
        for r in range(rank + 1, rows):
            f = a[r][c]
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], pr)]
        rank += 1
        if rank == rows:
            break
    return rank


def _integer_rows(m: ExactMatrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns rows and the product of scales."""
    out, scale = [], Fraction(1)
    for i in range(m.rows):
        r = m.row(i)
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
        scale *= den
    return out, scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place; returns (rank, sign*det-if-square)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    prev, rank, sign = 1, 0, 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            sign = -sign
        pr = a[rank]
        for r in range(rank + 1, rows):
            ar = a[r]
            a[r] = [(pr[c] * ar[k] - ar[c] * pr[k]) // prev for k in range(cols)]
        prev = pr[c]
        rank += 1
        if rank == rows:
            break
    return rank, sign * prev


def rank(m: ExactMatrix) -> int:
    """Rank of ``m``; zero for any matrix with no rows or no columns."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.is_prime:
        return _rank_gf2(m) if m.field.p == 2 else _rank_mod_p(m)
    a, _ = _integer_rows(m)
    return _bareiss(a)[0]


def determinant(m: ExactMatrix):
    if not m.is_square:
        raise NonSquare(f"determinant of {m.rows}x{m.cols} matrix")
    f = m.field
    if m.rows == 0:
        return f.one
    if f.is_prime:
        p = f.p
        a = m.to_lists()
        n, det = m.rows, 1
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det = det * a[c][c] % p
            inv = pow(a[c][c], -1, p)
            for r in range(c + 1, n):
                g = a[r][c] * inv % p
                if g:
                    a[r] = [(x - g * y) % p for x, y in zip(a[r], a[c])]
        return det % p
    a, scale = _integer_rows(m)
    r, d = _bareiss(a)
    if r < m.rows:
        return Fraction(0)
    return Fraction(d) / scale


def inverse(m: ExactMatrix) -> ExactMatrix:
    """Gauss-Jordan inverse; raises :class:`Singular` when det is zero."""
    if not m.is_square:
        raise NonSquare(f"inverse of {m.rows}x{m.cols} matrix")
    f, n = m.field, m.rows
    a = [list(m.row(i)) + [f.one if i == j else f.zero for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise Singular("matrix is not invertible")
        a[c], a[piv] = a[piv], a[c]
        inv = f.inv(a[c][c])
        a[c] = [f.mul(x, inv) for x in a[c]]
        for r in range(n):
            g = a[r][c]
            if r != c and g != 0:
                a[r] = [f.sub(x, f.mul(g, y)) for x, y in zip(a[r], a[c])]
    return ExactMatrix.from_rows([row[n:] for row in a], f, cols=n)


def cofactor_submatrix(m: ExactMatrix, drop_row: int, drop_col: int) -> ExactMatrix:
    """``m`` with one row and one column deleted (the minor's matrix)."""
    if not m.is_square:
        raise NonSquare("cofactor submatrix of a non-square matrix")
    if not (0 <= drop_row < m.rows and 0 <= drop_col < m.cols):
        raise IndexOutOfRange(f"({drop_row}, {drop_col}) outside {m.rows}x{m.cols}")
    return m.submatrix([i for i in range(m.rows) if i != drop_row],
                       [j for j in range(m.cols) if j != drop_col])


def min_cofactor_rank(m: ExactMatrix) -> int:
    """Smallest rank over every one-row, one-column deletion of ``m``.

    For an invertible n x n matrix this is always at least n - 2.
    """
    if m.rows == 0:
        raise IndexOutOfRange("empty matrix has no cofactors")
    return min(rank(cofactor_submatrix(m, i, j)) for i in range(m.rows) for j in range(m.cols))


@dataclass(frozen=True)
class SupportPattern:
    """0/1 incidence matrix of a hop: ``bits[i][j] == 1`` iff the gain may be nonzero."""

    rows: int
    cols: int
    bits: tuple

    def __post_init__(self):
        bits = tuple(tuple(int(b) for b in r) for r in self.bits)
        if len(bits) != self.rows or any(len(r) != self.cols for r in bits):
            raise ValueError("pattern shape does not match rows/cols")
        if any(b not in (0, 1) for r in bits for b in r):
            raise ValueError("pattern entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None):
        rows = [tuple(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def full(cls, rows: int, cols: int | None = None):
        cols = rows if cols is None else cols
        return cls.from_rows([[1] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None):
        cols = rows if cols is None else cols
        return cls.from_rows([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def banded(cls, n: int, width: int = 1):
        """``|i - j| <= width``; width 1 is the tridiagonal pattern."""
        return cls.from_rows([[int(abs(i - j) <= width) for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.bits[i][j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def ones(self) -> int:
        return sum(map(sum, self.bits))

    def transpose(self) -> SupportPattern:
        return SupportPattern.from_rows(
            [[self.bits[i][j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> SupportPattern:
        rows, cols = list(rows), list(cols)
        return SupportPattern.from_rows([[self.bits[i][j] for j in cols] for i in rows], cols=len(cols))

    def drop(self, row: int, col: int) -> SupportPattern:
        return self.submatrix([i for i in range(self.rows) if i != row],
                              [j for j in range(self.cols) if j != col])

    def instantiate(self, field: FieldSpec, rng: random.Random) -> ExactMatrix:
        """Random nonzero field values on the support, zeros elsewhere."""
        return ExactMatrix.from_rows(
            [[field.random_nonzero(rng) if b else field.zero for b in r] for r in self.bits],
            field, cols=self.cols,
        )


def max_matching(p: SupportPattern) -> dict[int, int]:
    """Hopcroft-Karp maximum matching, rows to columns.

    Rows and candidate columns are scanned in ascending index order so the
    returned matching is reproducible.
    """
    adj = [[j for j in range(p.cols) if p.bits[i][j]] for i in range(p.rows)]
    match_row: list[int | None] = [None] * p.rows
    match_col: list[int | None] = [None] * p.cols
    inf = p.rows + p.cols + 1

    while True:
        dist = [inf] * p.rows
        queue = deque()
        for i in range(p.rows):
            if match_row[i] is None:
                dist[i] = 0
                queue.append(i)
        found = False
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                k = match_col[j]
                if k is None:
                    found = True
                elif dist[k] == inf:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        if not found:
            break

        def augment(i: int) -> bool:
            for j in adj[i]:
                k = match_col[j]
                if k is None or (dist[k] == dist[i] + 1 and augment(k)):
                    match_row[i], match_col[j] = j, i
                    return True
            dist[i] = inf
            return False

        for i in range(p.rows):
            if match_row[i] is None:
                augment(i)

    return {i: j for i, j in enumerate(match_row) if j is not None}


def generic_rank(p: SupportPattern) -> int:
    """Rank for almost all gain values on the support (maximum matching size)."""
    if p.rows == 0 or p.cols == 0:
        return 0
    return len(max_matching(p))


def has_perfect_matching(p: SupportPattern) -> bool:
    return p.is_square and generic_rank(p) == p.rows


def schwartz_zippel_rank(p: SupportPattern, trials: int = 8,
                         prime: int = MERSENNE_31, seed: int = 0) -> int:
    """Randomized lower estimate of :func:`generic_rank`.

    Substitutes uniform nonzero GF(prime) values on the support and keeps the
    largest rank seen.  Never exceeds the generic rank.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if prime <= 2**20 or not is_prime(prime):
        raise ValueError("prime must be a prime above 2**20")
    field = FieldSpec.prime(prime)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        best = max(best, rank(p.instantiate(field, rng)))
        if best == min(p.rows, p.cols):
            break
    return best
