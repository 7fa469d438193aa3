"""phi tables per level and least mixing gaps for short words of the tower."""
from chaoslab.mixing_tower import Tower, mixing_check, phi_table, seed


def main(max_n=10, levels=3):
    T = Tower(seed())
    for l in range(levels + 1):
        print(f"level {l}: phi = {phi_table(T, max_n, l)[1:]}, beta_min = {T.beta_min(l)}")
    for u, v in (("1", "1"), ("1", "01"), ("101", "101"), ("11", "1")):
        c = mixing_check(T, u, v)
        print(f"{u} 0^n {v}: {c.status}, N = {c.N}")


if __name__ == "__main__":
    main()
