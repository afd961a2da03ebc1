"""Exact Shannon entropies of tiny discrete distributions by enumeration."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import TooLarge
from .exactalg import ExactMatrix, rank
from .netmodel import TinyJointDistribution

MAX_STATES = 2**16
PRECISION = 60


@dataclass(frozen=True)
class EntropyValue:
    """An entropy in bits.

    ``exact`` is set when every probability involved is a power of 1/2, in
    which case the entropy is rational; ``decimal`` always holds a
    60-significant-digit value.
    """

    decimal: Decimal
    exact: Fraction | None = None

    def __float__(self):
        return float(self.decimal)

    def __sub__(self, other: EntropyValue) -> EntropyValue:
        with localcontext() as ctx:
            ctx.prec = PRECISION
            d = self.decimal - other.decimal
        ex = self.exact - other.exact if self.exact is not None and other.exact is not None else None
        return EntropyValue(d, ex)

    def to_str(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return format(self.decimal, ".20g")


def _power_of_two(n: int) -> int | None:
    return n.bit_length() - 1 if n > 0 and n & (n - 1) == 0 else None


def entropy_of(pmf: Iterable[Fraction]) -> EntropyValue:
    """H(p) in bits for a list of probabilities."""
    exact: Fraction | None = Fraction(0)
    with localcontext() as ctx:
        ctx.prec = PRECISION
        ln2 = Decimal(2).ln()
        total = Decimal(0)
        for p in pmf:
            if p == 0:
                continue
            total -= Decimal(p.numerator) / Decimal(p.denominator) * (
                (Decimal(p.numerator).ln() - Decimal(p.denominator).ln()) / ln2)
            k = _power_of_two(p.denominator) if p.numerator == 1 else None
            exact = None if exact is None or k is None else exact + p * k
    return EntropyValue(+total if total != 0 else Decimal(0), exact)


def exhaustive_entropy(dist: TinyJointDistribution, target: Iterable[str],
                       given: Iterable[str] = (),
                       derive: Callable[[Mapping[str, int]], Mapping[str, object]] | None = None,
                       ) -> EntropyValue:
    """H(target | given) by summing over every outcome of ``dist``.

    Variable names refer to ``dist.names`` or to keys produced by ``derive``,
    which maps an outcome (as a name -> value dict) to further deterministic
    variables.
    """
    if dist.state_count > MAX_STATES:
        raise TooLarge(f"{dist.state_count} joint states exceed the {MAX_STATES} limit")
    target, given = list(target), list(given)
    joint: dict = defaultdict(Fraction)
    cond: dict = defaultdict(Fraction)
    for outcome, p in dist.table.items():
        env = dict(zip(dist.names, outcome))
        if derive is not None:
            env.update(derive(env))
        g = tuple(env[v] for v in given)
        joint[(tuple(env[v] for v in target), g)] += p
        cond[g] += p
    return entropy_of(joint.values()) - entropy_of(cond.values())


def linear_conditional_entropy(A: ExactMatrix, B: ExactMatrix,
                               dist: TinyJointDistribution) -> EntropyValue:
    """H(Ax | Bx) in bits for ``x`` distributed as ``dist`` over GF(p)^cols."""
    f = A.field
    if not f.is_prime or B.field != f or A.cols != B.cols or len(dist.names) != A.cols:
        raise ValueError("A and B must act on the same GF(p) vector that dist describes")

    def apply(M: ExactMatrix, x) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(M.row(r), x)) % f.p for r in range(M.rows))

    def derive(env):
        x = [env[n] for n in dist.names]
        return {"Ax": apply(A, x), "Bx": apply(B, x)}

    return exhaustive_entropy(dist, ["Ax"], ["Bx"], derive)


def linear_entropy_bound(A: ExactMatrix, B: ExactMatrix) -> int:
    """``rank [A; B] - rank B``, the log|F|-unit ceiling on H(Ax | Bx)."""
    return rank(A.vstack(B)) - rank(B)
