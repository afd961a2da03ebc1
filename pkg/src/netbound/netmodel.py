"""Layered K-unicast networks, wireline DAGs, cuts and serialization.

Layer 1 holds the sources ``s_1..s_K`` and the last layer the destinations
``d_1..d_K`` in index order.  Hop ``j`` is the ``|V_{j+1}| x |V_j|`` transfer
matrix, so rows are receivers and columns are transmitters.  Sources never
receive and destinations never transmit.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InvalidChain, ParseError, SchemaError, UnknownNode
from .exactalg import ExactMatrix, FieldSpec, SupportPattern, generic_rank, rank

EXPLICIT = "explicit"
GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class LayeredNetwork:
    field: FieldSpec
    layers: tuple[tuple[str, ...], ...]
    hops: tuple[ExactMatrix, ...]
    mode: str = EXPLICIT
    supports: tuple[SupportPattern, ...] = ()

    def __post_init__(self):
        layers = tuple(tuple(l) for l in self.layers)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "hops", tuple(self.hops))
        if self.mode not in (EXPLICIT, GENERIC):
            raise SchemaError(f"mode must be 'explicit' or 'generic', got {self.mode!r}")
        if len(layers) < 2:
            raise SchemaError("a layered network needs at least two layers")
        if len(layers[0]) != len(layers[-1]) or not layers[0]:
            raise SchemaError("first and last layers must both hold the K sources/destinations")
        names = [v for l in layers for v in l]
        if len(set(names)) != len(names):
            raise SchemaError("node names must be globally unique")
        if len(self.hops) != len(layers) - 1:
            raise SchemaError(f"expected {len(layers) - 1} hops, got {len(self.hops)}")
        for j, h in enumerate(self.hops):
            if (h.rows, h.cols) != (len(layers[j + 1]), len(layers[j])):
                raise SchemaError(
                    f"hop {j + 1} must be {len(layers[j + 1])}x{len(layers[j])}, "
                    f"got {h.rows}x{h.cols}")
            if h.field != self.field:
                raise SchemaError(f"hop {j + 1} is over {h.field}, network over {self.field}")
        sup = tuple(self.supports) or tuple(h.nonzero_pattern() for h in self.hops)
        if len(sup) != len(self.hops):
            raise SchemaError("one support pattern per hop is required")
        for j, (h, s) in enumerate(zip(self.hops, sup)):
            if (s.rows, s.cols) != (h.rows, h.cols):
                raise SchemaError(f"support {j + 1} has the wrong shape")
            if self.mode == EXPLICIT and any(
                    h[a, b] != 0 and not s[a, b] for a in range(h.rows) for b in range(h.cols)):
                raise SchemaError(f"hop {j + 1} has a nonzero gain outside its support")
        object.__setattr__(self, "supports", sup)

    @classmethod
    def from_supports(cls, layers, supports: Sequence[SupportPattern],
                      field: FieldSpec | None = None) -> LayeredNetwork:
        """Generic-mode network: only the support of each hop matters."""
        field = field or FieldSpec.rational()
        hops = [ExactMatrix.from_rows(s.bits, field, cols=s.cols) for s in supports]
        return cls(field, layers, hops, GENERIC, tuple(supports))

    def __eq__(self, other):
        if not isinstance(other, LayeredNetwork):
            return NotImplemented
        return (self.field, self.layers, self.mode, self.supports) == (
            other.field, other.layers, other.mode, other.supports) and (
            self.mode == GENERIC or self.hops == other.hops)

    def __hash__(self):
        return hash((self.field, self.layers, self.mode, self.supports))

    @property
    def K(self) -> int:
        return len(self.layers[0])

    @property
    def sources(self) -> tuple[str, ...]:
        return self.layers[0]

    @property
    def destinations(self) -> tuple[str, ...]:
        return self.layers[-1]

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(v for l in self.layers for v in l)

    @cached_property
    def position(self) -> dict[str, tuple[int, int]]:
        """node -> (layer index, index within layer), both 0-based."""
        return {v: (j, k) for j, l in enumerate(self.layers) for k, v in enumerate(l)}

    def check_nodes(self, names: Iterable[str]) -> frozenset[str]:
        names = frozenset(names)
        unknown = sorted(names - self.position.keys())
        if unknown:
            raise UnknownNode(f"unknown node(s): {', '.join(unknown)}")
        return names

    def layer_mask(self, subset: Iterable[str], j: int) -> int:
        """Bitmask of ``subset ∩ V_j`` (bit k is node k of layer j)."""
        mask = 0
        for v in subset:
            lj, k = self.position[v]
            if lj == j:
                mask |= 1 << k
        return mask

    def hop_rank(self, j: int, tx_mask: int, rx_mask: int) -> int:
        """rank(tx ⊆ V_j ; rx ⊆ V_{j+1}), generic in generic mode."""
        if not tx_mask or not rx_mask:
            return 0
        rows = [k for k in range(len(self.layers[j + 1])) if rx_mask >> k & 1]
        cols = [k for k in range(len(self.layers[j])) if tx_mask >> k & 1]
        if self.mode == GENERIC:
            return generic_rank(self.supports[j].submatrix(rows, cols))
        return rank(self.hops[j].submatrix(rows, cols))

    @property
    def is_kkk(self) -> bool:
        return len(self.layers) == 3 and len(self.layers[1]) == self.K


@dataclass(frozen=True)
class KkkNetwork:
    """Two-hop K x K x K network.

    ``F1 = F(S,U)`` has ``F1[j, i] = F(s_i, u_j)`` and ``F2 = F(U,D)`` has
    ``F2[i, j] = F(u_j, d_i)``.
    """

    K: int
    F1: ExactMatrix
    F2: ExactMatrix
    support1: SupportPattern
    support2: SupportPattern
    mode: str = EXPLICIT

    def __post_init__(self):
        for name in ("F1", "F2", "support1", "support2"):
            m = getattr(self, name)
            if (m.rows, m.cols) != (self.K, self.K):
                raise SchemaError(f"{name} must be {self.K}x{self.K}")
        if self.mode == EXPLICIT:
            for F, S in ((self.F1, self.support1), (self.F2, self.support2)):
                if any(F[a, b] != 0 and not S[a, b] for a in range(self.K) for b in range(self.K)):
                    raise SchemaError("nonzero gain outside the support")

    @property
    def field(self) -> FieldSpec:
        return self.F1.field

    @classmethod
    def from_matrices(cls, F1: ExactMatrix, F2: ExactMatrix) -> KkkNetwork:
        return cls(F1.rows, F1, F2, F1.nonzero_pattern(), F2.nonzero_pattern())

    @classmethod
    def from_supports(cls, support1: SupportPattern, support2: SupportPattern,
                      field: FieldSpec | None = None) -> KkkNetwork:
        field = field or FieldSpec.rational()
        F1 = ExactMatrix.from_rows(support1.bits, field, cols=support1.cols)
        F2 = ExactMatrix.from_rows(support2.bits, field, cols=support2.cols)
        return cls(support1.rows, F1, F2, support1, support2, GENERIC)

    @classmethod
    def from_layered(cls, net: LayeredNetwork) -> KkkNetwork:
        if not net.is_kkk:
            raise SchemaError("network is not K x K x K")
        return cls(net.K, net.hops[0], net.hops[1], net.supports[0], net.supports[1], net.mode)

    def to_layered(self) -> LayeredNetwork:
        K = self.K
        layers = ([f"s{i}" for i in range(1, K + 1)], [f"u{i}" for i in range(1, K + 1)],
                  [f"d{i}" for i in range(1, K + 1)])
        return LayeredNetwork(self.field, layers, (self.F1, self.F2), self.mode,
                              (self.support1, self.support2))


@dataclass(frozen=True)
class WirelineNetwork:
    """Directed acyclic graph with unit-capacity edges and K unicast pairs."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise SchemaError("node names must be unique")
        for u, v in self.edges:
            if u not in known or v not in known:
                raise SchemaError(f"edge ({u}, {v}) references an unknown node")
        for s, d in self.pairs:
            if s not in known or d not in known:
                raise SchemaError(f"pair ({s}, {d}) references an unknown node")
        srcs = {s for s, _ in self.pairs}
        dsts = {d for _, d in self.pairs}
        for u, v in self.edges:
            if v in srcs:
                raise SchemaError(f"source {v} has an incoming edge")
            if u in dsts:
                raise SchemaError(f"destination {u} has an outgoing edge")
        self.topological_order()

    @property
    def K(self) -> int:
        return len(self.pairs)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.pairs)

    @property
    def destinations(self) -> tuple[str, ...]:
        return tuple(d for _, d in self.pairs)

    def topological_order(self) -> list[str]:
        indeg = {v: 0 for v in self.nodes}
        out = defaultdict(list)
        for u, v in self.edges:
            out[u].append(v)
            indeg[v] += 1
        ready = [v for v in self.nodes if indeg[v] == 0]
        order = []
        while ready:
            u = ready.pop(0)
            order.append(u)
            for v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(order) != len(self.nodes):
            raise SchemaError("wireline graph has a directed cycle")
        return order

    def reachable(self, start: Iterable[str], removed: Iterable[int] = ()) -> set[str]:
        """Nodes reachable from ``start`` avoiding the edges at indices ``removed``."""
        removed = set(removed)
        out = defaultdict(list)
        for k, (u, v) in enumerate(self.edges):
            if k not in removed:
                out[u].append(v)
        seen = set(start)
        stack = list(seen)
        while stack:
            u = stack.pop()
            for v in out[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


@dataclass(frozen=True)
class CutPair:
    omega: frozenset[str]
    theta: frozenset[str]

    def __init__(self, omega: Iterable[str], theta: Iterable[str]):
        object.__setattr__(self, "omega", frozenset(omega))
        object.__setattr__(self, "theta", frozenset(theta))

    def as_chain(self) -> CutChain:
        return CutChain([self.omega, self.theta])


@dataclass(frozen=True)
class CutChain:
    cuts: tuple[frozenset[str], ...]

    def __init__(self, cuts: Iterable[Iterable[str]]):
        object.__setattr__(self, "cuts", tuple(frozenset(c) for c in cuts))


def _pair_index(net) -> list[tuple[str, str]]:
    return list(zip(net.sources, net.destinations))


def cut_chain_violations(net: LayeredNetwork, chain: CutChain) -> list[str]:
    """Every violated clause of the nested-cut conditions, in reading order."""
    cuts = [net.check_nodes(c) for c in chain.cuts]
    if not cuts:
        return ["chain must hold at least one cut"]
    out = []
    for j in range(1, len(cuts)):
        extra = sorted(cuts[j] - cuts[j - 1])
        if extra:
            out.append(f"cut {j + 1} is not inside cut {j}: {', '.join(extra)}")
    padded = [frozenset(net.nodes)] + cuts + [frozenset()]
    for j in range(len(cuts) + 1):
        for i, (s, d) in enumerate(_pair_index(net), start=1):
            if (d in padded[j]) != (s in padded[j + 1]):
                if j == 0:
                    out.append(f"source {s} must lie in cut 1")
                elif j == len(cuts):
                    out.append(f"destination {d} must not lie in the last cut")
                else:
                    out.append(f"{d} in cut {j} must match {s} in cut {j + 1} (pair {i})")
    return out


def validate_cut_chain(net: LayeredNetwork, chain: CutChain) -> tuple[bool, list[str]]:
    v = cut_chain_violations(net, chain)
    return not v, v


def validate_cut_pair(net: LayeredNetwork, c: CutPair) -> tuple[bool, list[str]]:
    """Check ``S ⊆ Ω``, ``Θ ⊆ Ω \\ D`` and ``d_i ∈ Ω ⇔ s_i ∈ Θ``."""
    omega, theta = net.check_nodes(c.omega), net.check_nodes(c.theta)
    out = []
    missing = [s for s in net.sources if s not in omega]
    if missing:
        out.append(f"sources missing from omega: {', '.join(missing)}")
    outside = sorted(theta - omega)
    if outside:
        out.append(f"theta not inside omega: {', '.join(outside)}")
    dests = sorted(theta & set(net.destinations))
    if dests:
        out.append(f"theta contains destinations: {', '.join(dests)}")
    for i, (s, d) in enumerate(_pair_index(net), start=1):
        if (d in omega) != (s in theta):
            out.append(f"{d} in omega must match {s} in theta (pair {i})")
    return not out, out


@dataclass(frozen=True)
class TinyJointDistribution:
    """Exact joint pmf over a handful of discrete variables.

    ``table`` maps value tuples (ordered like ``names``) to probabilities;
    missing tuples have probability zero.
    """

    names: tuple[str, ...]
    sizes: tuple[int, ...]
    table: Mapping[tuple[int, ...], Fraction] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "sizes", tuple(self.sizes))
        table = {tuple(k): Fraction(v) for k, v in dict(self.table).items() if v != 0}
        if len(self.names) != len(self.sizes):
            raise ValueError("one alphabet size per variable")
        for k, v in table.items():
            if v < 0:
                raise ValueError("probabilities must be nonnegative")
            if len(k) != len(self.names) or any(not 0 <= x < n for x, n in zip(k, self.sizes)):
                raise ValueError(f"outcome {k} outside the alphabets")
        if sum(table.values()) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        object.__setattr__(self, "table", table)

    @classmethod
    def uniform(cls, names: Sequence[str], sizes: Sequence[int]) -> TinyJointDistribution:
        outcomes = list(product(*(range(n) for n in sizes)))
        p = Fraction(1, len(outcomes))
        return cls(names, sizes, {o: p for o in outcomes})

    @classmethod
    def from_weights(cls, names, sizes, weights: Mapping[tuple[int, ...], int]):
        total = sum(weights.values())
        return cls(names, sizes, {k: Fraction(w, total) for k, w in weights.items()})

    @property
    def state_count(self) -> int:
        n = 1
        for s in self.sizes:
            n *= s
        return n


def _copy_name(name: str, copy: int) -> str:
    return f"{name}@{copy}"


def concatenate(net, ell: int):
    """Glue ``ell`` copies, identifying copy c's ``d_k`` with copy c+1's ``s_k``.

    Nodes are renamed ``<name>@<copy>`` with copies numbered from 1; a glued
    node keeps the name of the source it becomes.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if isinstance(net, LayeredNetwork):
        return _concat_layered(net, ell)
    if isinstance(net, WirelineNetwork):
        return _concat_wireline(net, ell)
    raise TypeError(f"cannot concatenate {type(net).__name__}")


def _concat_layered(net: LayeredNetwork, ell: int) -> LayeredNetwork:
    layers = [[_copy_name(v, 1) for v in net.layers[0]]]
    hops, sups = [], []
    for c in range(1, ell + 1):
        for j in range(1, len(net.layers)):
            if j == len(net.layers) - 1 and c < ell:
                layers.append([_copy_name(s, c + 1) for s in net.sources])
            else:
                layers.append([_copy_name(v, c) for v in net.layers[j]])
        hops.extend(net.hops)
        sups.extend(net.supports)
    return LayeredNetwork(net.field, layers, hops, net.mode, tuple(sups))


def _concat_wireline(net: WirelineNetwork, ell: int) -> WirelineNetwork:
    glue = dict(zip(net.destinations, net.sources))

    def name(v: str, c: int) -> str:
        if v in glue and c < ell:
            return _copy_name(glue[v], c + 1)
        return _copy_name(v, c)

    nodes: list[str] = []
    for c in range(1, ell + 1):
        for v in net.nodes:
            n = name(v, c)
            if n not in nodes:
                nodes.append(n)
    edges = [(name(u, c), name(v, c)) for c in range(1, ell + 1) for u, v in net.edges]
    pairs = [(_copy_name(s, 1), name(d, ell)) for s, d in net.pairs]
    return WirelineNetwork(nodes, edges, pairs)


# ---------------------------------------------------------------- serialization

def _entry_to_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def _entry_from_json(x, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"{where}: entry must be an integer or an 'a/b' string, got {x!r}")
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot parse {x!r} as a rational") from None
    return x


def network_to_dict(net) -> dict:
    if isinstance(net, WirelineNetwork):
        return {"kind": "wireline", "nodes": list(net.nodes),
                "edges": [list(e) for e in net.edges], "pairs": [list(p) for p in net.pairs]}
    if isinstance(net, KkkNetwork):
        net = net.to_layered()
    f = net.field
    out = {
        "kind": "layered",
        "field": {"type": "prime", "p": f.p} if f.is_prime else {"type": "rational"},
        "layers": [list(l) for l in net.layers],
        "pairs": net.K,
        "mode": net.mode,
    }
    if net.mode == GENERIC:
        out["supports"] = [[list(r) for r in s.bits] for s in net.supports]
    else:
        out["hops"] = [[[_entry_to_json(x) for x in row] for row in h.to_lists()] for h in net.hops]
        if any(s != h.nonzero_pattern() for s, h in zip(net.supports, net.hops)):
            out["supports"] = [[list(r) for r in s.bits] for s in net.supports]
    return out


def _require(d: Mapping, key: str, kind, where: str):
    if key not in d:
        raise SchemaError(f"{where}: missing required field {key!r}")
    if not isinstance(d[key], kind):
        raise SchemaError(f"{where}: field {key!r} has the wrong type")
    return d[key]


def network_from_dict(d: Mapping):
    if not isinstance(d, Mapping):
        raise SchemaError("top level must be a JSON object")
    kind = _require(d, "kind", str, "network")
    if kind == "wireline":
        nodes = _require(d, "nodes", list, "wireline")
        edges = _require(d, "edges", list, "wireline")
        pairs = _require(d, "pairs", list, "wireline")
        for e in edges + pairs:
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
                raise SchemaError(f"wireline: edges and pairs must be [u, v] name pairs, got {e!r}")
        return WirelineNetwork(nodes, edges, pairs)
    if kind != "layered":
        raise SchemaError(f"kind must be 'layered' or 'wireline', got {kind!r}")

    fd = _require(d, "field", dict, "layered")
    try:
        field = FieldSpec.prime(fd["p"]) if fd.get("type") == "prime" else (
            FieldSpec.rational() if fd.get("type") == "rational" else None)
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"field: {exc}") from None
    if field is None:
        raise SchemaError(f"field.type must be 'prime' or 'rational', got {fd.get('type')!r}")
    layers = _require(d, "layers", list, "layered")
    mode = d.get("mode", EXPLICIT)
    K = d.get("pairs")
    if K is not None and (not isinstance(K, int) or K != len(layers[0] if layers else [])):
        raise SchemaError(f"pairs={K!r} does not match the {len(layers[0]) if layers else 0} sources")

    supports = None
    if "supports" in d:
        supports = []
        for j, s in enumerate(d["supports"], start=1):
            try:
                supports.append(SupportPattern.from_rows(s, cols=len(s[0]) if s else 0))
            except (ValueError, TypeError, IndexError) as exc:
                raise SchemaError(f"supports[{j}]: {exc}") from None

    if "hops" in d:
        hops = []
        for j, h in enumerate(d["hops"], start=1):
            if not isinstance(h, list):
                raise SchemaError(f"hops[{j}] must be a list of rows")
            rows = [[_entry_from_json(x, f"hops[{j}][{r}][{c}]") for c, x in enumerate(row)]
                    for r, row in enumerate(h)]
            if field.is_prime:
                for r, row in enumerate(rows):
                    for c, x in enumerate(row):
                        if not isinstance(x, int) or not 0 <= x < field.p:
                            raise SchemaError(f"hops[{j}][{r}][{c}]={x} is not an element of {field}")
            cols = len(layers[j - 1]) if j - 1 < len(layers) else 0
            try:
                hops.append(ExactMatrix.from_rows(rows, field, cols=cols))
            except ValueError as exc:
                raise SchemaError(f"hops[{j}]: {exc}") from None
        return LayeredNetwork(field, layers, hops, mode, tuple(supports or ()))
    if supports is None:
        raise SchemaError("layered network needs 'hops' or 'supports'")
    if mode != GENERIC:
        raise SchemaError("a network given only by 'supports' must use mode 'generic'")
    return LayeredNetwork.from_supports(layers, supports, field)


def load_network(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return network_from_dict(d)


def save_network(net, path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(net), indent=1) + "\n", encoding="utf-8")


__all__ = [
    "CutChain", "CutPair", "EXPLICIT", "GENERIC", "InvalidChain", "KkkNetwork",
    "LayeredNetwork", "TinyJointDistribution", "WirelineNetwork", "concatenate",
    "cut_chain_violations", "load_network", "network_from_dict", "network_to_dict",
    "save_network", "validate_cut_chain", "validate_cut_pair",
]
