"""Exact AND runs on a few diagonalizable topologies, plus the direction
efficiency (N / (N+1))^|E1| as N grows."""

import argparse
import random

from netbound.andsim import end_to_end_check, random_symbols, sample_instance
from netbound.exactalg import SupportPattern

TOPOLOGIES = {
    "full K=2": (SupportPattern.full(2), SupportPattern.full(2)),
    "full K=3": (SupportPattern.full(3), SupportPattern.full(3)),
    "upper K=3": (SupportPattern.from_rows([[1, 1, 1], [0, 1, 1], [0, 0, 1]]),) * 2,
    "parallel K=3": (SupportPattern.identity(3), SupportPattern.identity(3)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()
    for name, (s1, s2) in TOPOLOGIES.items():
        net, dirs, used = sample_instance(s1, s2, args.n, seed=args.seed)
        symbols = random_symbols(net.K, args.n, len(dirs.edges), random.Random(args.seed))
        r = end_to_end_check(net, args.n, symbols, dirs)
        print(f"{name:>13}: |E1|={len(dirs.edges)} directions={r.directions}/{r.relay_directions} "
              f"zero_interference={r.zero_interference} identity={r.identity} gain_seed={used}")
    s = SupportPattern.full(2)
    for N in range(1, 9):
        net, dirs, _ = sample_instance(s, s, N, seed=args.seed)
        print(f"N={N}: efficiency {len(dirs.transmit)}/{len(dirs.relay)} = "
              f"{len(dirs.transmit) / len(dirs.relay):.4f}")


if __name__ == "__main__":
    main()
