"""GNS bound of the shipped wireline examples for 1..3 concatenated copies."""

from importlib import resources

from netbound import gns_bound, load_network


def main():
    for name in ("gns_bottleneck.json", "parallel_pipes_k3.json"):
        net = load_network(resources.files("netbound") / "data" / name)
        for ell in (1, 2, 3):
            r = gns_bound(net, ell, 3)
            print(f"{name} ell<={ell}: |M|={r.value} edges={r.witness['edges']} copies={r.witness['ell']}")


if __name__ == "__main__":
    main()
