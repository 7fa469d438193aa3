"""Run every experiment with the default configuration and write reports to ./reports."""
import sys

from chaoslab.experiments import ExperimentConfig, budget_from_env, emit, run


def main(out="reports"):
    cfg = ExperimentConfig(budget=budget_from_env())
    rep = run(cfg)
    for p in emit(rep, out):
        print(p)
    for c in rep.checks:
        print(f"{c.status:12s} {c.name}")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
