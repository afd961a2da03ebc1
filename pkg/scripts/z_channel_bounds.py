"""Classic vs two-cut bound on the binary Z-channel, with entropy terms."""

from importlib import resources

from netbound import (
    CutChain,
    TinyJointDistribution,
    classic_cutset,
    entropy_bound_terms,
    load_network,
    search_pair_bound,
)


def main():
    net = load_network(resources.files("netbound") / "data" / "z_channel.json")
    print(classic_cutset(net).to_text())
    best = search_pair_bound(net)
    print(best.to_text())
    chain = CutChain([best.witness["omega"], best.witness["theta"]])
    for name, dist in [
        ("uniform", TinyJointDistribution.uniform(["s1", "s2"], [2, 2])),
        ("copies", TinyJointDistribution.from_weights(["s1", "s2"], [2, 2], {(0, 0): 1, (1, 1): 1})),
    ]:
        terms = entropy_bound_terms(net, chain, dist)
        print(f"entropy terms ({name}): {[t.to_str() for t in terms]}")


if __name__ == "__main__":
    main()
