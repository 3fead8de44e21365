"""Aligned squeezing parameter of the m=0 atomic squeezed state versus eta."""
import argparse

import numpy as np

from mustates.hilbert import SpinSpace
from mustates.io import write_table_csv
from mustates.spin import AtomicSqueezedSpec, SpinDirectionFrame, atomic_squeezed, squeezing_xi


def scan(S, etas):
    space, frame = SpinSpace(2 * S), SpinDirectionFrame(0, 0)
    return np.array([squeezing_xi(atomic_squeezed(space, AtomicSqueezedSpec(frame, e, 0)))
                     for e in etas])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spins", type=int, nargs="+", default=[2, 5, 10, 20])
    ap.add_argument("--points", type=int, default=60)
    ap.add_argument("--out", default="out/spin_squeezing.csv")
    args = ap.parse_args()

    etas = np.geomspace(1e-4, 0.99, args.points)
    cols = {"eta": etas}
    for S in args.spins:
        xi = scan(S, etas)
        cols[f"xi_S{S}"] = xi
        print(f"S={S:3d}  min xi {xi.min():.6f}  (1/sqrt(S+1) = {1 / np.sqrt(S + 1):.6f})")
    write_table_csv(args.out, cols)


if __name__ == "__main__":
    main()
