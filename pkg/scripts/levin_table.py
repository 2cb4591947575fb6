"""Order and type recovered from comparison coefficients for growing K."""
import argparse

from siciak_support.entire import estimate_order, estimate_type, levin_comparison_coefficients


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--K", type=int, nargs="+", default=[50, 100, 200, 400])
    args = ap.parse_args()
    print(" rho  sigma     K   order   raw order   type")
    for rho in (0.5, 1.0, 2.0):
        for sigma in (0.5, 1.0, 2.0):
            for K in args.K:
                c = levin_comparison_coefficients(sigma, rho, K)
                o = estimate_order(c)
                t = estimate_type(c, o.value)
                print(f"{rho:4.1f}  {sigma:5.1f}  {K:4d}  {o.value:6.4f}  {o.raw_limsup:9.4f}  "
                      f"{t.value:6.4f}")


if __name__ == "__main__":
    main()
