"""Brute-force ground truth for small instances.

Nothing here shares search code with :mod:`netbound.bounds` or
:mod:`netbound.kkk`; the routes are meant to be compared against each other.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any

from .entropy import exhaustive_entropy
from .errors import TooLarge, WrongField
from .exactalg import ExactMatrix
from .netmodel import EXPLICIT, KkkNetwork, LayeredNetwork
from .reports import LABEL_CAPACITY, LABEL_DOF, UNITS_CAPACITY, UNITS_DOF, BoundReport, LayerTerm

MAX_LINEAR_K = 3
MAX_PAIR_NODES = 12


@dataclass
class OracleResult:
    value: Any
    enumerated: int
    expected_count: int
    elapsed: float = 0.0
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"oracle_value": self.value, "enumerated": self.enumerated,
                "expected_count": self.expected_count, "witness": self.witness}


def exhaustive_linear_kkk(net: KkkNetwork, relay_local: bool = True) -> OracleResult:
    """Search every K x K GF(2) relay matrix G for ``F2 G F1 = I``.

    Each relay only sees its own received symbol, so with ``relay_local`` the
    admissible maps are diagonal and the rest are counted but skipped.  With
    ``relay_local=False`` any G is allowed, which models relays that share
    their observations.
    """
    if net.mode != EXPLICIT or not net.field.is_prime or net.field.p != 2:
        raise WrongField("exhaustive_linear_kkk needs an explicit GF(2) network")
    K = net.K
    if K > MAX_LINEAR_K:
        raise TooLarge(f"K={K}: 2^{K * K} relay maps exceed the oracle limit")
    start = time.perf_counter()
    count, found = 0, None
    for bits in product((0, 1), repeat=K * K):
        count += 1
        if found is not None:
            continue
        rows = [bits[r * K:(r + 1) * K] for r in range(K)]
        if relay_local and any(rows[r][c] for r in range(K) for c in range(K) if r != c):
            continue
        G = ExactMatrix.from_rows(rows, net.field, cols=K)
        if (net.F2 @ G @ net.F1).is_identity():
            found = G
    witness = {"G": found.to_lists()} if found is not None else {}
    return OracleResult(found is not None, count, 2 ** (K * K), time.perf_counter() - start, witness)


def exhaustive_pair_search(net: LayeredNetwork) -> BoundReport:
    """Minimum two-cut bound by enumerating every Ω ⊇ S and Θ ⊆ Ω ∖ D."""
    nodes = list(net.nodes)
    if len(nodes) > MAX_PAIR_NODES:
        raise TooLarge(f"|V|={len(nodes)} exceeds {MAX_PAIR_NODES} for exhaustive search")
    S, D = set(net.sources), set(net.destinations)
    partner = {d: s for s, d in zip(net.sources, net.destinations)}
    free = [v for v in nodes if v not in S]
    layer_of = {v: j for j, layer in enumerate(net.layers) for v in layer}

    @lru_cache(maxsize=None)
    def hop(j: int, tx: frozenset, rx: frozenset) -> int:
        return net.hop_rank(j, net.layer_mask(tx, j), net.layer_mask(rx, j + 1))

    def value(omega: frozenset, theta: frozenset) -> tuple[int, list[LayerTerm]]:
        terms = []
        for j in range(len(net.hops)):
            nxt = frozenset(net.layers[j + 1])
            om = frozenset(v for v in omega if layer_of[v] == j)
            th = frozenset(v for v in theta if layer_of[v] == j)
            terms.append(LayerTerm(j + 1, hop(j, om, nxt - omega), hop(j, th, nxt - theta),
                                   hop(j, th, nxt - omega)))
        return sum(t.value for t in terms), terms

    best = None
    pairs = 0
    for obits in product((0, 1), repeat=len(free)):
        omega = frozenset(S | {v for v, b in zip(free, obits) if b})
        # d_i ∈ Ω fixes s_i ∈ Θ; the remaining Θ members are free
        forced = {partner[d] for d in D if d in omega}
        optional = [v for v in nodes if v in omega and v not in D and v not in S]
        for tbits in product((0, 1), repeat=len(optional)):
            theta = frozenset(forced | {v for v, b in zip(optional, tbits) if b})
            pairs += 1
            total, terms = value(omega, theta)
            if best is None or total < best[0]:
                best = (total, omega, theta, terms)
    total, omega, theta, terms = best
    order = {v: k for k, v in enumerate(nodes)}
    explicit = net.mode == EXPLICIT
    return BoundReport(total, UNITS_CAPACITY if explicit else UNITS_DOF,
                       LABEL_CAPACITY if explicit else LABEL_DOF, "oracle-pair",
                       {"omega": sorted(omega, key=order.get), "theta": sorted(theta, key=order.get)},
                       terms, {"pairs_enumerated": pairs})


__all__ = ["OracleResult", "exhaustive_entropy", "exhaustive_linear_kkk", "exhaustive_pair_search"]
