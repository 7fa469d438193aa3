"""Language sizes, weak mixing gaps and a thick decomposition for N and P*."""
from chaoslab.core_words import naturals, p_star
from chaoslab.spacing import language, thick_decompose, weak_mixing_check


def main():
    for name, P in (("N", naturals()), ("P*", p_star())):
        sizes = [len(language(P, n)) for n in range(1, 11)]
        wm = weak_mixing_check(P, 2, 10 ** 4)
        print(f"{name}: |L_n| = {sizes}; weak mixing at m=2: {wm.status}, largest least gap {wm.max_gap}")
    D = thick_decompose(p_star(), 3, 10 ** 5)
    for j in (1, 2, 3):
        print(f"P*_{j}: runs {D.runs_of_part(j)}")


if __name__ == "__main__":
    main()
