"""``netbound`` command line.

Exit codes: 0 on success, 1 for input errors, 2 when a search exceeds its
limits.  JSON output is sorted and carries no timing, so identical
arguments give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import andsim, bounds, kkk, oracle
from .errors import NetboundError, TooLarge
from .netmodel import (
    EXPLICIT,
    GENERIC,
    CutPair,
    KkkNetwork,
    LayeredNetwork,
    WirelineNetwork,
    load_network,
)
from .reports import BoundReport

FORMATS = ("json", "text", "dot")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple[str, ...] = ()
    method: str = "pair"
    omega: tuple[str, ...] | None = None
    theta: tuple[str, ...] | None = None
    ell: int = 2
    max_size: int = 3
    k: int | None = None
    n_directions: int = 2
    seed: int = 0
    fmt: str = "json"
    oracle: bool = False
    limits: bounds.SearchLimits = bounds.SearchLimits()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _names(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="netbound", description=__doc__.split("\n")[0],
                epilog="NETBOUND_LIMITS=max_width=..,max_nodes=..,max_work=..,max_states=.. "
                       "overrides the search limits.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, with_file=True):
        if with_file:
            sp.add_argument("file", help="network JSON (examples/<name>.json resolves to the shipped corpus)")
        sp.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized steps (64-bit)")
        sp.add_argument("--oracle", action="store_true", help="cross-check against brute force")

    b = sub.add_parser("bound", help="cut-set or two-cut bound of a layered network")
    b.add_argument("--method", choices=("classic", "pair"), default="pair")
    b.add_argument("--omega", type=_names, help="comma-separated Ω to evaluate instead of searching")
    b.add_argument("--theta", type=_names, help="comma-separated Θ (with --omega)")
    common(b)

    common(sub.add_parser("kkk-check", help="sum-rate-K / K-DoF conditions of a K x K x K network"))

    g = sub.add_parser("gns", help="GNS edge-cut bound of a wireline network")
    g.add_argument("--ell", type=int, default=2, help="number of concatenated copies")
    g.add_argument("--max-size", type=int, default=3, help="largest edge set to try")
    common(g)

    a = sub.add_parser("and-sim", help="exact aligned network diagonalization simulation")
    a.add_argument("--n-directions", type=int, default=2, help="box size N per edge exponent")
    common(a)

    ad = sub.add_parser("adjacent", help="DoF bound of the K-user adjacent-cell network")
    ad.add_argument("--k", type=int, required=True)
    common(ad, with_file=False)

    common(sub.add_parser("oracle", help="brute-force pair search or GF(2) linear relaying search"))
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if not -(2**63) <= args.seed < 2**64:
        raise ValueError("--seed must fit in 64 bits")
    return RunConfig(
        subcommand=args.subcommand,
        inputs=(args.file,) if getattr(args, "file", None) else (),
        method=getattr(args, "method", "pair"),
        omega=getattr(args, "omega", None),
        theta=getattr(args, "theta", None),
        ell=getattr(args, "ell", 2),
        max_size=getattr(args, "max_size", 3),
        k=getattr(args, "k", None),
        n_directions=getattr(args, "n_directions", 2),
        seed=args.seed,
        fmt=args.fmt,
        oracle=args.oracle,
        limits=bounds.SearchLimits.from_env(),
    )


def resolve_path(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    shipped = resources.files("netbound") / "data" / path.name
    if path.parts[:1] == ("examples",) and shipped.is_file():
        return Path(str(shipped))
    raise FileNotFoundError(f"no such network file: {name}")


def _load(cfg: RunConfig):
    return load_network(resolve_path(cfg.inputs[0]))


def _layered(net) -> LayeredNetwork:
    if isinstance(net, KkkNetwork):
        return net.to_layered()
    if not isinstance(net, LayeredNetwork):
        raise ValueError("this subcommand needs a layered network")
    return net


def _kkk(net) -> KkkNetwork:
    return KkkNetwork.from_layered(_layered(net))


# ------------------------------------------------------------------ subcommands

def cmd_bound(cfg: RunConfig):
    net = _layered(_load(cfg))
    if cfg.method == "classic" and cfg.theta:
        raise ValueError("--theta is not used by the classic bound")
    if cfg.omega is not None:
        report = bounds.eval_pair_bound(net, CutPair(cfg.omega, cfg.theta or ()))
    elif cfg.theta is not None:
        raise ValueError("--theta needs --omega")
    elif cfg.method == "classic":
        report = bounds.classic_cutset(net, cfg.limits)
    else:
        report = bounds.search_pair_bound(net, cfg.limits)
    if cfg.oracle:
        ref = oracle.exhaustive_pair_search(net)
        agrees = ref.value == report.value if cfg.method == "pair" and cfg.omega is None \
            else ref.value <= report.value
        report.stats = {**report.stats, "oracle": {"bound": ref.value, "agrees": agrees}}
    return net, report


def cmd_kkk_check(cfg: RunConfig):
    net = _kkk(_load(cfg))
    if net.mode == GENERIC:
        verdict = kkk.check_theorem2(net.support1, net.support2)
        out = verdict.to_dict()
        try:
            out["diagonalizable"] = kkk.check_diagonalizable(net.support1, net.support2).to_dict()
        except NetboundError:
            pass
    elif net.field.is_prime and net.field.p == 2:
        out = kkk.check_corollary3_gf2(net).to_dict()
    else:
        out = kkk.check_corollary2(net).to_dict()
    if cfg.oracle:
        out["oracle"] = oracle.exhaustive_linear_kkk(net).to_dict()
    return None, out


def cmd_gns(cfg: RunConfig):
    net = _load(cfg)
    if not isinstance(net, WirelineNetwork):
        raise ValueError("gns needs a wireline network")
    return net, bounds.gns_bound(net, cfg.ell, cfg.max_size)


def cmd_and_sim(cfg: RunConfig):
    net = _kkk(_load(cfg))
    N = cfg.n_directions
    gain_seed = None
    if net.mode == GENERIC or net.field.kind != "rational":
        net, dirs, gain_seed = andsim.sample_instance(net.support1, net.support2, N, cfg.seed)
    else:
        dirs = andsim.build_directions(net, N)
    rng = random.Random(cfg.seed)
    symbols = andsim.random_symbols(net.K, N, len(dirs.edges), rng)
    result = andsim.end_to_end_check(net, N, symbols, dirs)
    out = {**result.to_dict(), "seed": cfg.seed, "gain_seed": gain_seed}
    return None, out, andsim.trace_lines(dirs, result)


def cmd_adjacent(cfg: RunConfig):
    if cfg.k is None or cfg.k < 1:
        raise ValueError("--k must be a positive integer")
    report = kkk.adjacent_cell_dof(cfg.k)
    if cfg.oracle:
        ref = bounds.search_pair_bound(kkk.adjacent_cell_network(cfg.k).to_layered(), cfg.limits)
        report.stats = {**report.stats, "oracle": {"bound": ref.value, "agrees": ref.value == report.value}}
    return kkk.adjacent_cell_network(cfg.k).to_layered(), report


def cmd_oracle(cfg: RunConfig):
    net = _load(cfg)
    if isinstance(net, LayeredNetwork) and net.is_kkk and net.mode == EXPLICIT \
            and net.field.is_prime and net.field.p == 2:
        return None, oracle.exhaustive_linear_kkk(KkkNetwork.from_layered(net)).to_dict()
    layered = _layered(net)
    return layered, oracle.exhaustive_pair_search(layered)


COMMANDS = {
    "bound": cmd_bound,
    "kkk-check": cmd_kkk_check,
    "gns": cmd_gns,
    "and-sim": cmd_and_sim,
    "adjacent": cmd_adjacent,
    "oracle": cmd_oracle,
}


def render(cfg: RunConfig, outcome) -> str:
    net, result = outcome[0], outcome[1]
    if cfg.fmt == "dot":
        if not isinstance(result, BoundReport):
            raise ValueError(f"--format dot is not available for {cfg.subcommand}")
        return bounds.report_to_dot(net, result)
    if cfg.fmt == "text":
        if isinstance(result, BoundReport):
            return result.to_text() + "\n"
        if len(outcome) > 2:
            return "\n".join(outcome[2]) + "\n" + json.dumps(result, sort_keys=True) + "\n"
        return json.dumps(result, sort_keys=True) + "\n"
    data = result.to_dict() if isinstance(result, BoundReport) else result
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def run(cfg: RunConfig) -> str:
    return render(cfg, COMMANDS[cfg.subcommand](cfg))


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    try:
        cfg = config_from_args(args)
        sys.stdout.write(run(cfg))
    except TooLarge as exc:
        print(f"netbound: too large: {exc}", file=sys.stderr)
        return 2
    except (NetboundError, ValueError, OSError) as exc:
        print(f"netbound: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
