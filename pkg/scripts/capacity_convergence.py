"""Homogeneous capacity of the real unit circle against the exact 1/sqrt(2)."""
import argparse
import math

from siciak_support.extremal import SolverConfig, capacity_homog, real_sphere_directions


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degrees", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--samples", type=int, default=256)
    ap.add_argument("--sphere-samples", type=int, default=64)
    args = ap.parse_args()

    E = real_sphere_directions(2, args.samples)
    exact = 1 / math.sqrt(2)
    print(" K   capacity   rel.err")
    for K in args.degrees:
        est = capacity_homog(E, SolverConfig(max_degree=K), args.sphere_samples)
        print(f"{K:2d}   {est.value:.6f}   {est.value / exact - 1:+.2e}")


if __name__ == "__main__":
    main()
