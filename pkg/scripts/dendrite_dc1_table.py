"""Closeness counts of the top orbit to both base corners, block by block."""
import sys

from chaoslab import dendrite_d as dd


def main(levels=(1, 2, 3)):
    g = dd.build_grid()
    print("n  corner  horizon  far(<1/2)  near(<w_n)  parity")
    for r in dd.dc1_blocks(levels, g):
        print(f"{r.n}  {r.corner}  {r.horizon:7d}  {r.far_count:9d}  {r.near_count:10d}  {r.parity}")
    for n in range(3):
        w = dd.wn_certificate(n, g)
        print(f"w_{n} = {w.w}: max distance {w.max_dist} to {w.target}, {'ok' if w.passed else 'violated'}")


if __name__ == "__main__":
    main(tuple(int(a) for a in sys.argv[1:]) or (1, 2, 3))
