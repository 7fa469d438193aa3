"""Deterministic experiment pipelines with exact, serializable reports.

Each experiment returns a list of ``Check`` records.  Rationals are written as
"num/den" strings, keys are sorted and newlines are line feeds, so the same
config always yields byte-identical files.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from . import dendrite_d as dd
from .chaos_metrics import classify_shift_pair, dc3_density_criterion
from .core_words import SymbolStream, naturals, p_star
from .gehman import EndPoint, Root, conjugacy_check, dist as gdist, eventually_fixed, ArcPoint, apply_g
from .mixing_tower import Tower, is_subadditive, mixing_check, phi_table, powers_of_two_stream, seed
from .omega_factory import build_gamma, certifiable_patterns, members_in_shift, scramble_certificate
from .spacing import (language, language_brute_force, thick_decompose, transitive_point,
                      weak_mixing_check)

EXPERIMENTS = ("spacing-wm", "thick-decomp", "omega-certificate", "no-dc3-spacing", "mixing-tower",
               "gehman-conjugacy", "dendrite-dc1", "dendrite-asymptotic", "no-ly-triple")

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str = "all"
    seed: int = 20240601
    # spacing
    wm_bound: int = 10 ** 4
    lang_n: int = 10
    parts: int = 3
    decomp_bound: int = 10 ** 5
    # omega family
    N: int = 3
    word_len: int = 2
    word_budget: int = 3
    prefix: int = 10 ** 5
    tail_start: int = 1000
    # shift pairs
    pairs: int = 20
    cap: int = 10 ** 5
    k_max: int = 10
    # mixing tower
    tower_n: int = 10
    tower_levels: int = 3
    mix_pairs: int = 10
    mix_window: int = 16
    # gehman
    codes: int = 20
    gehman_steps: int = 64
    # dendrite
    scale: int = 1
    dc1_levels: str = "2,3"
    eps: str = "1/2,1/4"
    asym_steps: int = 12000
    triples: int = 100
    triple_steps: int = 4096
    budget: int | None = None

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name: f for f in fields(cls)}
        kw = {}
        for k, v in data.items():
            if k not in known:
                raise ConfigError(f"unknown config key {k!r}")
            default = getattr(cls, k, None)
            try:
                if isinstance(default, str):
                    kw[k] = str(v).strip()
                elif default is None or isinstance(default, int):
                    kw[k] = int(str(v).replace("_", "").strip())
                else:
                    kw[k] = v
            except ValueError as e:
                raise ConfigError(f"bad value for {k}: {v!r}") from e
        cfg = cls(**kw)
        if cfg.experiment not in EXPERIMENTS + ("all",):
            raise ConfigError(f"unknown experiment {cfg.experiment!r}")
        return cfg

    def fractions(self, key: str) -> list[Fraction]:
        try:
            return [Fraction(s.strip()) for s in getattr(self, key).split(",") if s.strip()]
        except ValueError as e:
            raise ConfigError(f"bad fraction list for {key}") from e


@dataclass
class Check:
    name: str
    status: str
    value: object = None
    witnesses: dict = field(default_factory=dict)
    horizons: list = field(default_factory=list)


@dataclass
class Report:
    config: dict
    checks: list

    @property
    def summary(self) -> dict:
        out = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        s = self.summary
        if s[FAIL]:
            return 1
        if s[INCONCLUSIVE]:
            return 3
        return 0


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# ---------------------------------------------------------------- pipelines

def exp_spacing_wm(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    out = []
    for name, P in (("N", naturals()), ("P*", p_star())):
        r = weak_mixing_check(P, 2, cfg.wm_bound)
        st = {"certificate": PASS, "fails": FAIL}.get(r.status, INCONCLUSIVE)
        out.append(Check(f"weak-mixing[{name}]", st, r.max_gap,
                         {"failing": r.failing, "max_gap": r.max_gap}, [cfg.wm_bound]))
        sizes = []
        ok = True
        for n in range(1, cfg.lang_n + 1):
            a, b = language(P, n), language_brute_force(P, n)
            sizes.append(len(a))
            ok &= a == b
        out.append(Check(f"language-vs-brute[{name}]", _status(ok), sizes[-1],
                         {"sizes": sizes}, [cfg.lang_n]))
    return out


def exp_thick_decomp(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    out = []
    for name, P, bound in (("N", naturals(), 2000), ("P*", p_star(), cfg.decomp_bound)):
        D = thick_decompose(P, cfg.parts, bound)
        members = P.enumerate_upto(D.horizon)
        covered = all(1 <= D.part_index(m) <= cfg.parts for m in members)
        runs = {j: D.runs_of_part(j) for j in range(1, cfg.parts + 1)}
        longest = {j: max((ln for _, ln in r), default=0) for j, r in runs.items()}
        grows = all(v >= 2 for v in longest.values())
        out.append(Check(f"thick-decomp[{name}]", _status(covered and grows), D.horizon,
                         {"longest_run": longest, "blocks": len(D.blocks)}, [D.horizon]))
    return out


def exp_omega(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    G = build_gamma(cfg.N, p_star(), cfg.parts, cfg.word_budget, cfg.prefix)
    out = [Check("gamma-members-in-shift", _status(all(members_in_shift(G, cfg.prefix))),
                 len(G.members), {}, [cfg.prefix])]
    for S in certifiable_patterns(G):
        c = scramble_certificate(G, S, cfg.word_len, cfg.prefix, cfg.tail_start)
        wit = {cl.name: {"passed": cl.passed} for cl in c.clauses}
        wit["a"]["words"] = sorted({w for d in c.clauses[0].detail.values() for w in d["words"]})
        wit["c"]["rho"] = c.clauses[2].detail
        out.append(Check(f"omega-pattern[{','.join(map(str, S))}]", _status(c.passed), c.column,
                         wit, [cfg.prefix, cfg.tail_start]))
    return out


def _shift_pairs(cfg: ExperimentConfig, rng: random.Random) -> list[tuple[str, SymbolStream, SymbolStream]]:
    W = powers_of_two_stream()
    Z = SymbolStream.constant("0")
    pool = {"0^inf": Z, "W": W}
    z = transitive_point(p_star(), 3, cfg.cap + cfg.k_max + 64)
    pool["z[P*]"] = z
    for _ in range(4):
        s = rng.randrange(1, 64)
        pool[f"W shifted {s}"] = W.shift(s)
    names = sorted(pool)
    out = []
    for _ in range(cfg.pairs):
        a, b = rng.sample(names, 2)
        out.append((f"{a}|{b}", pool[a], pool[b]))
    return out


def exp_no_dc3(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    rng = random.Random(cfg.seed)
    out = []
    for label, x, y in _shift_pairs(cfg, rng):
        budget.charge(cfg.cap)
        v = classify_shift_pair(x, y, cfg.k_max, cfg.cap)
        chain = dc3_density_criterion(x, y, cfg.cap)
        ok = chain.holds and v.classification != "DC3-evidence"
        out.append(Check(f"no-dc3[{label}]", _status(ok), v.classification,
                         {"max_gap": v.witness["max_gap"], "agreement": chain.agreement_density},
                         list(v.horizons)))
    return out


def exp_mixing_tower(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    T = Tower(seed())
    base = phi_table(T, cfg.tower_n, 0)
    out = []
    for l in range(1, cfg.tower_levels + 1):
        t = phi_table(T, cfg.tower_n, l)
        out.append(Check(f"phi-stable[level {l}]", _status(t == base), t[-1], {"phi": t},
                         [cfg.tower_n]))
    out.append(Check("phi-subadditive", _status(is_subadditive(base)), base[-1], {"phi": base},
                     [cfg.tower_n]))
    rng = random.Random(cfg.seed)
    words = sorted(T.language(3, 3) | T.language(2, 3))
    words = [w for w in words if "1" in w]
    for _ in range(cfg.mix_pairs):
        u, v = rng.choice(words), rng.choice(words)
        c = mixing_check(T, u, v, cfg.mix_window)
        st = PASS if c.status == "certificate" else INCONCLUSIVE
        out.append(Check(f"mixing[{u},{v}]", st, c.N, {"levels": c.levels}, [cfg.mix_window]))
    return out


def exp_gehman(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    rng = random.Random(cfg.seed)
    P = p_star()
    codes = []
    gaps = P.enumerate_upto(200)
    while len(codes) < cfg.codes:
        # one or two ones at a distance in P*, early enough to tell codes apart
        a = rng.randrange(1, 40)
        ones = [a] if rng.random() < 0.3 else [a, a + rng.choice(gaps)]
        w = ["0"] * (ones[-1])
        for p in ones:
            w[p - 1] = "1"
        c = SymbolStream.from_prefix("".join(w), "0", name=f"ones at {ones}")
        if all(c.prefix(256) != d.prefix(256) for d in codes):
            codes.append(c)
    budget.charge(cfg.codes * cfg.gehman_steps)
    rep = conjugacy_check(codes, cfg.gehman_steps)
    out = [Check("gehman-conjugacy", _status(rep.passed), rep.checked_triples,
                 {"first_failure": rep.first_failure}, [cfg.gehman_steps])]
    d = [gdist(Root(), EndPoint(c)) for c in codes]
    out.append(Check("gehman-root-endpoint", _status(all(v == 1 for v in d)), Fraction(1), {}, []))
    ok = True
    for _ in range(cfg.codes):
        depth = rng.randrange(1, 12)
        addr = "".join(rng.choice("01") for _ in range(depth))
        p = ArcPoint(addr, Fraction(rng.randrange(1, 9), 8))
        for _ in range(depth):
            p = apply_g(p)
        ok &= isinstance(p, Root) and eventually_fixed(ArcPoint(addr, Fraction(1))) == depth
    out.append(Check("gehman-root-in-depth-steps", _status(ok), cfg.codes, {}, []))
    return out


def _grid(cfg: ExperimentConfig) -> dd.Grid:
    return dd.build_grid(3, dd.GridParams(scale=cfg.scale))


def exp_dendrite_dc1(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    g = _grid(cfg)
    out = []
    ls = [g.l(i) for i in range(4)]
    out.append(Check("grid-l", _status(cfg.scale != 1 or ls == [1, 3, 27, 3051]), ls[-1],
                     {"l": ls, "L": [g.L(i) for i in range(4)]}, []))
    fin = dd.level_finish_steps(3, g, budget)
    out.append(Check("top-orbit-level-finish", _status(fin == ls), fin[-1], {"steps": fin}, []))
    for n in range(3):
        r = dd.wn_certificate(n, g, budget=budget)
        out.append(Check(f"wn[{n}]", _status(r.passed), r.max_dist,
                         {"target": r.target, "w": r.w, "per_corner_max": r.per_corner_max},
                         [g.l(n) + g.m(n + 1)]))
    ns = [int(s) for s in cfg.dc1_levels.split(",")]
    for corner in ("(0,0)", "(1,0)"):
        v = dd.dc1_certificate(ns, g, corner, budget)
        tag = "" if corner == "(0,0)" else f"[{corner}]"
        for b in v.witness["blocks"]:
            if b.parity == "far":
                out.append(Check(f"dc1-far-frac{tag}", PASS, f"{b.far_count}/{b.horizon}",
                                 {"bound": f"{g.l(b.n)}/{b.horizon}", "n": b.n,
                                  "count": b.far_count, "corner": corner}, [b.horizon]))
            elif b.parity == "near":
                out.append(Check(f"dc1-close-frac{tag}", PASS, f"{b.near_count}/{b.horizon}",
                                 {"bound": 1 - b.far_bound, "n": b.n, "w": b.w, "corner": corner},
                                 [b.horizon]))
        out.append(Check(f"dc1-verdict{tag}", _status(v.classification == "DC1-evidence"),
                         v.classification, {"corner": corner}, list(v.horizons)))
    return out


def exp_dendrite_asym(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    g = _grid(cfg)
    out = []
    x = dd.START
    y = dd.apply_f(x, g)
    for eps in cfg.fractions("eps"):
        r = dd.asymptotics_check(x, y, eps, cfg.asym_steps, g, budget=budget)
        st = {"asymptotic": PASS, "inconclusive": INCONCLUSIVE}.get(r.status, FAIL)
        out.append(Check(f"asymptotic[eps={eps}]", st, r.s,
                         {"last_distance": r.last_distance}, [cfg.asym_steps]))
    return out


def exp_no_ly(cfg: ExperimentConfig, budget: dd.Budget) -> list[Check]:
    g = _grid(cfg)
    tri = dd.sample_triples(cfg.triples, g, cfg.seed)
    reps = dd.no_infinite_ly_certificate(tri, g, cfg.triple_steps, budget)
    rel = {}
    for r in reps:
        rel[r.relation] = rel.get(r.relation, 0) + 1
    bad = [i for i, r in enumerate(reps) if not r.passed]
    return [Check("no-ly-triple", _status(not bad), Fraction(len(reps) - len(bad), len(reps)),
                  {"relations": rel, "failing": bad}, [cfg.triple_steps])]


PIPELINES = {
    "spacing-wm": exp_spacing_wm,
    "thick-decomp": exp_thick_decomp,
    "omega-certificate": exp_omega,
    "no-dc3-spacing": exp_no_dc3,
    "mixing-tower": exp_mixing_tower,
    "gehman-conjugacy": exp_gehman,
    "dendrite-dc1": exp_dendrite_dc1,
    "dendrite-asymptotic": exp_dendrite_asym,
    "no-ly-triple": exp_no_ly,
}


def run(cfg: ExperimentConfig) -> Report:
    budget = dd.Budget(cfg.budget)
    names = EXPERIMENTS if cfg.experiment == "all" else (cfg.experiment,)
    checks = []
    for name in names:
        try:
            got = PIPELINES[name](cfg, budget)
        except dd.BudgetExceeded as e:
            got = [Check(f"{name}:budget", INCONCLUSIVE, None, {"reason": str(e)},
                         [cfg.budget])]
        if cfg.experiment == "all":
            for c in got:
                c.name = f"{name}/{c.name}"
        checks.extend(got)
    return Report(asdict(cfg), checks)


# ---------------------------------------------------------------- serialization

def _plain(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = [_plain(x) for x in v]
        return sorted(items, key=repr) if isinstance(v, (set, frozenset)) else items
    if hasattr(v, "__dataclass_fields__"):
        return _plain(asdict(v))
    return str(v)


def report_dict(rep: Report) -> dict:
    return {"config": _plain(rep.config),
            "checks": [_plain(asdict(c)) for c in rep.checks],
            "summary": rep.summary,
            "exit_code": rep.exit_code}


def to_text(rep: Report) -> str:
    return json.dumps(report_dict(rep), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_table(rep: Report) -> str:
    """One ``name, value, status`` row per check; commas inside fields become semicolons."""
    def cell(v):
        v = _plain(v)
        return "" if v is None else str(v).replace(",", ";")
    lines = ["name, value, status"]
    lines += [", ".join((cell(c.name), cell(c.value), c.status)) for c in rep.checks]
    return "\n".join(lines) + "\n"


FORMATS = {"structured-text": ("report.json", to_text), "comma-separated-table": ("report.csv", to_table)}


def emit(rep: Report, out_dir, formats=("structured-text", "comma-separated-table")) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for f in formats:
        fname, fn = FORMATS[f]
        p = out / fname
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(fn(rep))
        paths.append(p)
    return paths


def budget_from_env(default: int | None = None) -> int | None:
    raw = os.environ.get("CHAOSLAB_BUDGET")
    if raw is None or not raw.strip():
        return default
    try:
        val = int(raw)
    except ValueError as e:
        raise ConfigError(f"CHAOSLAB_BUDGET must be an integer, got {raw!r}") from e
    if val < 0:
        raise ConfigError("CHAOSLAB_BUDGET must be nonnegative")
    return val
