"""Cut-set and generalized two-cut bounds, the GNS edge-cut search and
entropy evaluation of cut chains on tiny networks.

Pair bounds are searched by a dynamic program over layers.  The bound for a
pair (Ω, Θ) is a sum of per-hop terms, each depending only on the
memberships of two consecutive layers, so after fixing ``Ω ∩ D`` (which also
fixes ``Θ ∩ S``) a shortest-path recursion over states ``(Ω[j], Θ[j])``
finds the exact minimum.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .entropy import MAX_STATES, EntropyValue, exhaustive_entropy
from .errors import InvalidChain, InvalidCut, TooLarge, WrongField
from .netmodel import (
    GENERIC,
    CutChain,
    CutPair,
    LayeredNetwork,
    TinyJointDistribution,
    WirelineNetwork,
    concatenate,
    cut_chain_violations,
    validate_cut_pair,
)
from .reports import (
    LABEL_CAPACITY,
    LABEL_DOF,
    UNITS_CAPACITY,
    UNITS_DOF,
    BoundReport,
    LayerTerm,
)


@dataclass(frozen=True)
class SearchLimits:
    max_width: int = 12         # nodes per layer for the pair DP
    max_nodes: int = 12         # |V| for exhaustive oracles
    max_work: int = 2 * 10**9   # DP transitions (state pairs) over all outer choices
    max_states: int = MAX_STATES

    @classmethod
    def from_env(cls, var: str = "NETBOUND_LIMITS") -> SearchLimits:
        """Parse overrides such as ``max_width=10,max_work=1e8``."""
        raw = os.environ.get(var, "").strip()
        if not raw:
            return cls()
        kw = {}
        for item in raw.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"{var}: unknown limit {key!r}")
            kw[key] = int(float(val))
        return cls(**kw)


def _labels(net: LayeredNetwork) -> tuple[str, str]:
    if net.mode == GENERIC:
        return UNITS_DOF, LABEL_DOF
    return UNITS_CAPACITY, LABEL_CAPACITY


def _ordered(net: LayeredNetwork, subset) -> list[str]:
    return [v for v in net.nodes if v in subset]


def pair_terms(net: LayeredNetwork, omega, theta) -> list[LayerTerm]:
    """Per-hop terms of the two-cut rank bound, computed directly from ranks."""
    terms = []
    for j in range(len(net.hops)):
        w_next = len(net.layers[j + 1])
        full = (1 << w_next) - 1
        om, th = net.layer_mask(omega, j), net.layer_mask(theta, j)
        om_c = full & ~net.layer_mask(omega, j + 1)
        th_c = full & ~net.layer_mask(theta, j + 1)
        terms.append(LayerTerm(j + 1, net.hop_rank(j, om, om_c), net.hop_rank(j, th, th_c),
                               net.hop_rank(j, th, om_c)))
    return terms


def classic_cut_value(net: LayeredNetwork, omega) -> int:
    return sum(t.value for t in pair_terms(net, omega, ()))


def eval_pair_bound(net: LayeredNetwork, c: CutPair) -> BoundReport:
    ok, violations = validate_cut_pair(net, c)
    if not ok:
        raise InvalidCut(violations)
    terms = pair_terms(net, c.omega, c.theta)
    units, label = _labels(net)
    return BoundReport(sum(t.value for t in terms), units, label, "pair-eval",
                       {"omega": _ordered(net, c.omega), "theta": _ordered(net, c.theta)}, terms)


# ------------------------------------------------------------------ layer DP

def _rank_table(net: LayeredNetwork, j: int) -> np.ndarray:
    """``table[tx_mask, rx_mask]`` = rank of hop ``j`` restricted to the masks."""
    a, b = len(net.layers[j]), len(net.layers[j + 1])
    table = np.zeros((1 << a, 1 << b), dtype=np.int32)
    if net.mode == GENERIC:
        sup = net.supports[j]
        adj = [sum(1 << c for c in range(a) if sup[r, c]) for r in range(b)]
        for tx in range(1, 1 << a):
            row_adj = [m & tx for m in adj]
            for rx in range(1, 1 << b):
                table[tx, rx] = _kuhn_matching(row_adj, rx)
    elif net.field.p == 2:
        h = net.hops[j]
        rows = [sum(1 << c for c in range(a) if h[r, c]) for r in range(b)]
        for tx in range(1, 1 << a):
            masked = [m & tx for m in rows]
            for rx in range(1, 1 << b):
                table[tx, rx] = _xor_rank(masked, rx)
    else:
        for tx in range(1, 1 << a):
            for rx in range(1, 1 << b):
                table[tx, rx] = net.hop_rank(j, tx, rx)
    return table


def _kuhn_matching(adj: list[int], rows: int) -> int:
    """Maximum matching of the rows in bitmask ``rows``; adj[r] is a column bitmask."""
    match: dict[int, int] = {}

    def try_row(r: int, seen: int) -> tuple[bool, int]:
        cand = adj[r] & ~seen
        while cand:
            c = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            seen |= 1 << c
            if c not in match:
                match[c] = r
                return True, seen
            ok, seen = try_row(match[c], seen)
            if ok:
                match[c] = r
                return True, seen
        return False, seen

    size = 0
    r, m = 0, rows
    while m:
        if m & 1 and try_row(r, 0)[0]:
            size += 1
        m >>= 1
        r += 1
    return size


def _xor_rank(rows: list[int], mask: int) -> int:
    basis: list[int] = []
    r = 0
    while mask:
        if mask & 1:
            v = rows[r]
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
                basis.sort(reverse=True)
        mask >>= 1
        r += 1
    return len(basis)


def _layer_states(width: int, with_theta: bool) -> tuple[np.ndarray, np.ndarray]:
    om, th = [], []
    for o in range(1 << width):
        if not with_theta:
            om.append(o)
            th.append(0)
            continue
        sub = 0
        while True:
            om.append(o)
            th.append(sub)
            if sub == o:
                break
            sub = (sub - o) & o
    return np.array(om, dtype=np.int64), np.array(th, dtype=np.int64)


def _layer_dp(net: LayeredNetwork, with_theta: bool, limits: SearchLimits):
    widths = [len(l) for l in net.layers]
    if max(widths) > limits.max_width:
        raise TooLarge(f"layer width {max(widths)} exceeds limit {limits.max_width}; "
                       "use generic mode on a smaller network or evaluate a manual cut")
    for j in range(len(net.hops)):
        if widths[j] + widths[j + 1] > 22:
            raise TooLarge(f"hop {j + 1} rank table would have 2^{widths[j] + widths[j + 1]} entries")
    K, r = net.K, len(net.layers)
    inner = [_layer_states(w, with_theta) for w in widths[1:-1]]
    outer = range(1 << K) if with_theta else (0,)
    sizes = [1] + [len(st[0]) for st in inner] + [1]
    work = len(outer) * sum(sizes[j] * sizes[j + 1] for j in range(r - 1))
    if work > limits.max_work:
        raise TooLarge(f"pair search needs ~{work} transitions (limit {limits.max_work})")

    tables = [_rank_table(net, j) for j in range(r - 1)]
    full = [(1 << w) - 1 for w in widths]
    best = None
    transitions = 0
    for T in outer:
        states = [(np.array([full[0]]), np.array([T]))]
        states += inner
        states.append((np.array([T]), np.array([0])))
        value = np.zeros(1, dtype=np.int64)
        backs = []
        for j in range(r - 1):
            om1, th1 = states[j]
            om2, th2 = states[j + 1]
            om_c = full[j + 1] ^ om2
            th_c = full[j + 1] ^ th2
            R = tables[j]
            n1, n2 = len(om1), len(om2)
            new_val = np.full(n2, np.iinfo(np.int64).max, dtype=np.int64)
            new_back = np.zeros(n2, dtype=np.int64)
            step = max(1, 4_000_000 // n2)
            for lo in range(0, n1, step):
                hi = min(n1, lo + step)
                o, t = om1[lo:hi, None], th1[lo:hi, None]
                cost = R[o, om_c[None, :]] + R[t, th_c[None, :]] - R[t, om_c[None, :]]
                tot = value[lo:hi, None] + cost
                arg = np.argmin(tot, axis=0)
                cand = tot[arg, np.arange(n2)]
                better = cand < new_val
                new_val[better] = cand[better]
                new_back[better] = arg[better] + lo
                transitions += (hi - lo) * n2
            value = new_val
            backs.append(new_back)
        total = int(value[0])
        if best is None or total < best[0]:
            idx = [0]
            for back in reversed(backs):
                idx.append(int(back[idx[-1]]))
            idx.reverse()
            chosen = [(int(states[j][0][idx[j]]), int(states[j][1][idx[j]])) for j in range(r)]
            best = (total, chosen)

    total, chosen = best
    omega = {v for j, (o, _) in enumerate(chosen) for k, v in enumerate(net.layers[j]) if o >> k & 1}
    theta = {v for j, (_, t) in enumerate(chosen) for k, v in enumerate(net.layers[j]) if t >> k & 1}
    stats = {"outer_choices": len(outer), "states": int(sum(sizes)), "transitions": transitions}
    return total, omega, theta, stats


def classic_cutset(net: LayeredNetwork, limits: SearchLimits | None = None) -> BoundReport:
    """Single-cut bound: min over S ⊆ Ω ⊆ V \\ D of the summed hop ranks."""
    total, omega, _, stats = _layer_dp(net, False, limits or SearchLimits())
    terms = pair_terms(net, omega, ())
    units, label = _labels(net)
    return BoundReport(total, units, label, "classic", {"omega": _ordered(net, omega), "theta": []},
                       terms, stats)


def search_pair_bound(net: LayeredNetwork, limits: SearchLimits | None = None) -> BoundReport:
    """Minimum of the two-cut rank bound over every valid (Ω, Θ)."""
    total, omega, theta, stats = _layer_dp(net, True, limits or SearchLimits())
    terms = pair_terms(net, omega, theta)
    units, label = _labels(net)
    return BoundReport(total, units, label, "pair",
                       {"omega": _ordered(net, omega), "theta": _ordered(net, theta)}, terms, stats)


# ------------------------------------------------------------------ GNS

def _copy_edge_indices(net: WirelineNetwork, edge_ids, ell: int) -> list[int]:
    E = len(net.edges)
    return [c * E + k for c in range(ell) for k in edge_ids]


def gns_reachable(net: WirelineNetwork, edge_ids, ell: int) -> tuple[WirelineNetwork, set[str]]:
    """Concatenate ``ell`` copies, drop every copy of the edges, and return
    the nodes reachable from the first copy's sources."""
    cat = concatenate(net, ell)
    return cat, cat.reachable(cat.sources, _copy_edge_indices(net, edge_ids, ell))


def gns_disconnects(net: WirelineNetwork, edge_ids, ell: int) -> bool:
    cat, reach = gns_reachable(net, edge_ids, ell)
    return not reach & set(cat.destinations)


def gns_bound(net: WirelineNetwork, ell: int, max_set_size: int) -> BoundReport:
    """Smallest edge set M whose removal from every copy of the ``ell``-fold
    concatenation disconnects all sources from all final destinations."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    examined = 0
    for size in range(0, max_set_size + 1):
        for ids in combinations(range(len(net.edges)), size):
            examined += 1
            # larger ell only shrinks the reachable sets, so test the largest first
            if not gns_disconnects(net, ids, ell):
                continue
            used = next(l for l in range(1, ell + 1) if gns_disconnects(net, ids, l))
            return _gns_report(net, ids, used, ell, examined)
    return BoundReport(None, UNITS_CAPACITY, LABEL_CAPACITY, "gns",
                       {"edges": [], "ell": None},
                       stats={"subsets_examined": examined, "max_ell": ell,
                              "max_set_size": max_set_size, "status": "NoneFound"})


def _gns_report(net: WirelineNetwork, ids, used: int, ell: int, examined: int) -> BoundReport:
    cat, reach = gns_reachable(net, ids, used)
    E = len(net.edges)
    terms = []
    for c in range(used):
        crossing = [list(net.edges[k]) for k in ids
                    if cat.edges[c * E + k][0] in reach and cat.edges[c * E + k][1] not in reach]
        terms.append({"copy": c + 1, "cut_edges": crossing, "value": len(crossing)})
    return BoundReport(len(ids), UNITS_CAPACITY, LABEL_CAPACITY, "gns",
                       {"edges": [list(net.edges[k]) for k in ids], "edge_ids": list(ids),
                        "ell": used},
                       terms,
                       {"subsets_examined": examined, "max_ell": ell, "status": "found"})


# ------------------------------------------------------------------ entropy

def entropy_bound_terms(net: LayeredNetwork, chain: CutChain,
                        dist: TinyJointDistribution) -> list[EntropyValue]:
    """``H(Y_{Ω_jᶜ} | X_{Ω_jᶜ}, Y_{Ω_{j-1}ᶜ})`` for each cut of the chain, with Ω_0 = V."""
    violations = cut_chain_violations(net, chain)
    if violations:
        raise InvalidChain(violations)
    if net.mode == GENERIC or not net.field.is_prime:
        raise WrongField("entropy terms need an explicit network over a prime field")
    if dist.state_count > MAX_STATES:
        raise TooLarge(f"{dist.state_count} input states exceed {MAX_STATES}")
    transmitters = [v for l in net.layers[:-1] for v in l]
    if sorted(dist.names) != sorted(transmitters):
        raise ValueError(f"distribution must range over the transmitters {transmitters}")
    if any(s != net.field.p for s in dist.sizes):
        raise ValueError(f"every transmit alphabet must have size {net.field.p}")

    p = net.field.p
    dests, srcs = set(net.destinations), set(net.sources)

    def derive(env):
        out = {f"X:{v}": env[v] for v in transmitters}
        for j, h in enumerate(net.hops):
            x = [env[v] for v in net.layers[j]]
            for r, v in enumerate(net.layers[j + 1]):
                out[f"Y:{v}"] = sum(a * b for a, b in zip(h.row(r), x)) % p
        return out

    V = frozenset(net.nodes)
    cuts = [V] + [frozenset(c) for c in chain.cuts]
    terms = []
    for j in range(1, len(cuts)):
        comp = _ordered(net, V - cuts[j])
        prev = _ordered(net, V - cuts[j - 1])
        target = [f"Y:{v}" for v in comp if v not in srcs]
        given = [f"X:{v}" for v in comp if v not in dests] + [f"Y:{v}" for v in prev if v not in srcs]
        terms.append(exhaustive_entropy(dist, target, given, derive))
    return terms


# ------------------------------------------------------------------ certification

def verify_report(net, report: BoundReport) -> bool:
    """Recompute a report's value from its witness alone."""
    if report.method == "gns":
        if not report.found:
            return True
        ids = report.witness["edge_ids"]
        return (len(ids) == report.value
                and gns_disconnects(net, ids, report.witness["ell"])
                and [list(net.edges[k]) for k in ids] == report.witness["edges"])
    omega, theta = report.witness["omega"], report.witness["theta"]
    if report.method == "classic":
        if set(omega) & set(net.destinations) or not set(net.sources) <= set(omega):
            return False
        return classic_cut_value(net, omega) == report.value == report.terms_total()
    recomputed = eval_pair_bound(net, CutPair(omega, theta))
    return recomputed.value == report.value == report.terms_total()


def report_to_dot(net, report: BoundReport) -> str:
    """Graphviz rendering of a witness: fill colour marks Ω \\ Θ, Θ or Ωᶜ,
    and edges crossing a cut are dashed."""
    lines = ["digraph witness {", "  rankdir=LR;", "  node [style=filled];"]
    if isinstance(net, WirelineNetwork):
        cut = {tuple(e) for e in report.witness.get("edges", [])}
        for v in net.nodes:
            lines.append(f'  "{v}" [fillcolor="white"];')
        for u, v in net.edges:
            style = ' [style=dashed, color="red"]' if (u, v) in cut else ""
            lines.append(f'  "{u}" -> "{v}"{style};')
        lines.append("}")
        return "\n".join(lines) + "\n"
    omega, theta = set(report.witness["omega"]), set(report.witness["theta"])
    for j, layer in enumerate(net.layers):
        lines.append(f"  subgraph layer{j + 1} {{ rank=same;")
        for v in layer:
            colour = "lightblue" if v in theta else "lightgreen" if v in omega else "lightgrey"
            lines.append(f'    "{v}" [fillcolor="{colour}"];')
        lines.append("  }")
    for j, sup in enumerate(net.supports):
        for r, rx in enumerate(net.layers[j + 1]):
            for c, tx in enumerate(net.layers[j]):
                if not sup[r, c]:
                    continue
                crossing = (tx in omega and rx not in omega) or (tx in theta and rx not in theta)
                style = " [style=dashed]" if crossing else ""
                lines.append(f'  "{tx}" -> "{rx}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "SearchLimits", "classic_cut_value", "classic_cutset", "entropy_bound_terms",
    "eval_pair_bound", "gns_bound", "gns_disconnects", "gns_reachable", "pair_terms",
    "report_to_dot", "search_pair_bound", "verify_report",
]
