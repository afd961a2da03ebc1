"""Noise-free exact simulation of aligned network diagonalization (AND).

Sources send integer symbols along monomial directions
``T_m = prod F(s_i,u_j)^m(e)`` over first-hop edges ``e``.  Relay ``u_j``
sees each stream shifted by one power of its incoming gain, reads off the
integer coefficients ``q_{j,m}`` of its received directions, and re-emits
them on ``T~_m = prod B(s_i,u_j)^m(e)`` with ``B = F(U,D)⁻¹``.  For a
diagonalizable network every destination then receives only its own
streams.  Power scaling constants are fixed to 1.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import (
    DirectionCollision,
    IndexOutOfBox,
    NotDiagonalizable,
    Singular,
    SingularPattern,
    WrongField,
    ZeroGainOnSupport,
)
from .exactalg import QQ, ExactMatrix, SupportPattern, inverse
from .kkk import check_diagonalizable
from .netmodel import EXPLICIT, KkkNetwork

Index = tuple[int, ...]


@dataclass(frozen=True)
class DirectionSet:
    """Directions of one AND configuration.

    ``edges[e] = (i, j)`` is the first-hop edge ``(s_i, u_j)`` (0-based);
    ``T`` and ``T_tilde`` are indexed by the box ``{0..N}^|E1|``.
    """

    N: int
    edges: tuple[tuple[int, int], ...]
    gains: tuple[Fraction, ...]
    b_entries: tuple[Fraction, ...]
    B: ExactMatrix
    T: dict[Index, Fraction] = field(repr=False)
    T_tilde: dict[Index, Fraction] = field(repr=False)

    @property
    def transmit(self) -> dict[Index, Fraction]:
        """Source directions over ``{0..N-1}^|E1|``."""
        return {m: v for m, v in self.T.items() if max(m, default=0) < self.N}

    @property
    def relay(self) -> dict[Index, Fraction]:
        return self.T_tilde

    def in_box(self, m: Index, size: int) -> bool:
        return len(m) == len(self.edges) and all(0 <= x < size for x in m)


def _monomials(bases: Sequence[Fraction], size: int) -> dict[Index, Fraction]:
    powers = [[b**k for k in range(size)] for b in bases]
    out = {}
    for m in product(range(size), repeat=len(bases)):
        v = Fraction(1)
        for e, k in enumerate(m):
            if k:
                v *= powers[e][k]
        out[m] = v
    return out


def first_hop_edges(support1: SupportPattern) -> tuple[tuple[int, int], ...]:
    K = support1.rows
    return tuple((i, j) for i in range(K) for j in range(K) if support1[j, i])


def _require_rational(net: KkkNetwork) -> None:
    if net.mode != EXPLICIT or net.field.kind != "rational":
        raise WrongField("AND simulation needs explicit rational gains")


def build_directions(net: KkkNetwork, N: int) -> DirectionSet:
    """Evaluate every transmit and relay direction exactly."""
    _require_rational(net)
    if N < 1:
        raise ValueError("N must be >= 1")
    try:
        diag = check_diagonalizable(net.support1, net.support2)
    except SingularPattern as exc:
        raise NotDiagonalizable(str(exc)) from None
    if not diag:
        raise NotDiagonalizable(f"support patterns are not diagonalizable: {diag.mismatches}")
    edges = first_hop_edges(net.support1)
    gains = tuple(net.F1[j, i] for i, j in edges)
    if any(g == 0 for g in gains):
        raise ZeroGainOnSupport("a first-hop edge has zero gain")
    try:
        B = inverse(net.F2)
    except Singular:
        raise NotDiagonalizable("F(U,D) is singular for these gains") from None
    # B[j, i] = B(s_i, u_j); it must vanish exactly off the first-hop support
    edge_set = set(edges)
    for j in range(net.K):
        for i in range(net.K):
            if (B[j, i] != 0) != ((i, j) in edge_set):
                raise NotDiagonalizable(
                    f"B(s{i + 1},u{j + 1}) = {B[j, i]} disagrees with the first-hop support")
    b_entries = tuple(B[j, i] for i, j in edges)
    T = _monomials(gains, N + 1)
    T_tilde = _monomials(b_entries, N + 1)
    for name, table in (("transmit", T), ("relay", T_tilde)):
        if len(set(table.values())) != len(table):
            raise DirectionCollision(f"two {name} directions coincide; re-sample the gains")
    return DirectionSet(N, edges, gains, b_entries, B, T, T_tilde)


def source_signals(dirs: DirectionSet, symbols: Sequence[dict[Index, int]]) -> list[Fraction]:
    """``X_{s_i} = sum_m T_m c_{i,m}`` over ``m`` in ``{0..N-1}^|E1|``."""
    out = []
    for streams in symbols:
        total = Fraction(0)
        for m, c in streams.items():
            if not dirs.in_box(m, dirs.N):
                raise IndexOutOfBox(f"transmit index {m} outside {{0..{dirs.N - 1}}}")
            total += dirs.T[m] * c
        out.append(total)
    return out


def relay_received(dirs: DirectionSet, K: int,
                   symbols: Sequence[dict[Index, int]]) -> list[dict[Index, int]]:
    """Integer coefficients ``q_{j,m}`` of each relay's received directions.

    Multiplying stream ``T_m`` by ``F(s_i,u_j)`` raises the exponent of edge
    ``(s_i,u_j)`` by one, so ``q_{j,m} = sum_i c_{i,m_ij}``.
    """
    q: list[dict[Index, int]] = [defaultdict(int) for _ in range(K)]
    for e, (i, j) in enumerate(dirs.edges):
        for m, c in symbols[i].items():
            if not dirs.in_box(m, dirs.N):
                raise IndexOutOfBox(f"transmit index {m} outside {{0..{dirs.N - 1}}}")
            shifted = m[:e] + (m[e] + 1,) + m[e + 1:]
            q[j][shifted] += c
    return [{m: v for m, v in sorted(qj.items()) if v} for qj in q]


def relay_map(dirs: DirectionSet, received: Sequence[dict[Index, int]]) -> list[Fraction]:
    """Relay ``u_j`` transmits ``sum_m T~_m q_{j,m}`` over ``{0..N}^|E1|``."""
    out = []
    for qj in received:
        total = Fraction(0)
        for m, q in qj.items():
            if not dirs.in_box(m, dirs.N + 1):
                raise IndexOutOfBox(f"relay index {m} outside {{0..{dirs.N}}}")
            total += dirs.T_tilde[m] * q
        out.append(total)
    return out


def relay_map_matrix_form(dirs: DirectionSet, K: int,
                          symbols: Sequence[dict[Index, int]]) -> list[Fraction]:
    """Relay transmit vector as ``sum_m T~_m B(S,U) c_m`` over ``m`` in ``{0..N-1}``."""
    out = [Fraction(0)] * K
    for m in product(range(dirs.N), repeat=len(dirs.edges)):
        c = [symbols[i].get(m, 0) for i in range(K)]
        if not any(c):
            continue
        for j in range(K):
            out[j] += dirs.T_tilde[m] * sum(dirs.B[j, i] * c[i] for i in range(K))
    return out


def boundary_audit(dirs: DirectionSet, K: int, symbols: Sequence[dict[Index, int]]) -> bool:
    """Recompute every ``q_{j,m}`` from the index-shift formula, with
    ``c_{i,m} = 0`` whenever a component of ``m`` is -1 or N, and compare."""
    received = relay_received(dirs, K, symbols)

    def c(i: int, m: Index) -> int:
        if any(x < 0 or x >= dirs.N for x in m):
            return 0
        return symbols[i].get(m, 0)

    for j in range(K):
        for m in product(range(dirs.N + 1), repeat=len(dirs.edges)):
            q = 0
            for e, (i, jj) in enumerate(dirs.edges):
                if jj == j:
                    q += c(i, m[:e] + (m[e] - 1,) + m[e + 1:])
            if q != received[j].get(m, 0):
                return False
    return True


@dataclass
class EndToEndResult:
    """Per-destination decomposition of one AND time step.

    ``transfer[m][k][i]`` is the coefficient on ``T~_m`` at ``d_k`` per unit
    of symbol ``c_{i,m}``; ``coefficients[k][m]`` is the total coefficient of
    ``T~_m`` at ``d_k`` for the simulated symbols.
    """

    K: int
    N: int
    directions: int
    relay_directions: int
    coefficients: list[dict[Index, Fraction]]
    transfer: dict[Index, list[list[Fraction]]]
    received: list[Fraction]
    zero_interference: bool
    identity: bool
    own_streams_exact: bool
    consistent: bool

    @property
    def ok(self) -> bool:
        return self.zero_interference and self.identity and self.own_streams_exact and self.consistent

    def to_dict(self) -> dict:
        return {"K": self.K, "N": self.N, "directions": self.directions,
                "relay_directions": self.relay_directions,
                "zero_interference": self.zero_interference, "identity": self.identity,
                "own_streams_exact": self.own_streams_exact, "consistent": self.consistent,
                "received": [str(y) for y in self.received]}


def end_to_end_check(net: KkkNetwork, N: int, symbols: Sequence[dict[Index, int]],
                     dirs: DirectionSet | None = None) -> EndToEndResult:
    """Simulate sources -> relays -> destinations exactly and decompose the
    destination signals along the relay directions."""
    dirs = dirs or build_directions(net, N)
    K = net.K
    x_s = source_signals(dirs, symbols)
    q = relay_received(dirs, K, symbols)
    for j in range(K):
        direct = sum((net.F1[j, i] * x_s[i] for i in range(K)), Fraction(0))
        if direct != sum((dirs.T[m] * v for m, v in q[j].items()), Fraction(0)):
            raise DirectionCollision(f"relay u{j + 1} coefficients do not reproduce its signal")
    x_u = relay_map(dirs, q)
    y_d = [sum((net.F2[k, j] * x_u[j] for j in range(K)), Fraction(0)) for k in range(K)]

    # unit impulse per stream (i, m): linearity gives the per-direction map
    transfer: dict[Index, list[list[Fraction]]] = {}
    for m in product(range(N), repeat=len(dirs.edges)):
        mat = [[Fraction(0)] * K for _ in range(K)]
        for e, (i, j) in enumerate(dirs.edges):
            shifted = m[:e] + (m[e] + 1,) + m[e + 1:]
            tx = dirs.T_tilde[shifted]
            for k in range(K):
                mat[k][i] += net.F2[k, j] * tx
        base = dirs.T_tilde[m]
        transfer[m] = [[v / base for v in row] for row in mat]

    coefficients = []
    zero_interference = identity = own_exact = True
    for k in range(K):
        coeff = {}
        for m, mat in transfer.items():
            for i in range(K):
                if i != k and mat[k][i] != 0:
                    zero_interference = False
                if mat[k][i] != (1 if i == k else 0):
                    identity = False
            v = sum((mat[k][i] * symbols[i].get(m, 0) for i in range(K)), Fraction(0))
            if v != symbols[k].get(m, 0):
                own_exact = False
            coeff[m] = v
        coefficients.append(coeff)
    consistent = all(
        sum((dirs.T_tilde[m] * v for m, v in coefficients[k].items()), Fraction(0)) == y_d[k]
        for k in range(K))
    return EndToEndResult(K, N, N ** len(dirs.edges), (N + 1) ** len(dirs.edges),
                          coefficients, transfer, y_d, zero_interference, identity,
                          own_exact, consistent)


# ------------------------------------------------------------------ sampling

def sample_gains(support1: SupportPattern, support2: SupportPattern, seed: int) -> KkkNetwork:
    """Rational gains with numerator and denominator uniform in [1, 997]."""
    rng = random.Random(seed)
    F1 = support1.instantiate(QQ, rng)
    F2 = support2.instantiate(QQ, rng)
    return KkkNetwork(support1.rows, F1, F2, support1, support2, EXPLICIT)


def sample_instance(support1: SupportPattern, support2: SupportPattern, N: int,
                    seed: int = 0, max_tries: int = 50) -> tuple[KkkNetwork, DirectionSet, int]:
    """Draw gains until the directions are distinct and ``B`` has the right
    zeros, bumping the seed by one on each failure."""
    diag = check_diagonalizable(support1, support2)
    if not diag:
        raise NotDiagonalizable(f"support patterns are not diagonalizable: {diag.mismatches}")
    for s in range(seed, seed + max_tries):
        net = sample_gains(support1, support2, s)
        try:
            return net, build_directions(net, N), s
        except (DirectionCollision, NotDiagonalizable):
            continue
    raise DirectionCollision(f"no collision-free gains within {max_tries} seeds from {seed}")


def random_symbols(K: int, N: int, n_edges: int, rng: random.Random,
                   high: int = 4) -> list[dict[Index, int]]:
    """Codeword symbols ``c_{i,m}`` uniform in ``{0..high}``."""
    return [{m: rng.randint(0, high) for m in product(range(N), repeat=n_edges)} for _ in range(K)]


def trace_lines(dirs: DirectionSet, result: EndToEndResult) -> list[str]:
    lines = [f"edges (s_i,u_j): {[(i + 1, j + 1) for i, j in dirs.edges]}"]
    for m, v in dirs.transmit.items():
        lines.append(f"T{list(m)} = {v}    T~{list(m)} = {dirs.T_tilde[m]}")
    for k, coeff in enumerate(result.coefficients):
        parts = ", ".join(f"{list(m)}:{v}" for m, v in coeff.items())
        lines.append(f"d{k + 1}: {parts}")
    return lines
