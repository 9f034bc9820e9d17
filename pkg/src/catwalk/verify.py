"""Self-check suite: the library's headline guarantees as runnable checks.

Four properties, each over a graph family and a replayable seed:
restoration (the tape comes back bit-exact), only-V (a forward run
touches nothing but the output block), seed-invariance (counts do not
depend on the catalyst), and oracle agreement (counts match the DP
reference).  A fault mode sabotages the uncompute pass to demonstrate
the restoration check has teeth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import random_family, standard_family
from .engine import FORWARD, blocks_needed, run_program
from .errors import InvariantViolation
from .extract import RunConfig, count_walks_mod
from .graph import DirectedGraph, slots_per_residue
from .oracle import count_walks_exact
from .primes import primes_stream
from .tape import CatalyticTape


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str


def _default_family(base_seed: int) -> list[tuple[str, DirectedGraph]]:
    named = list(standard_family().items())
    named += [(f"er{i}", g) for i, g in enumerate(random_family(10, seed=base_seed))]
    return named


def _configs(g: DirectedGraph, rng: random.Random, count: int) -> list[RunConfig]:
    qs = primes_stream(6)
    out = []
    for _ in range(count):
        out.append(
            RunConfig(
                s=rng.randrange(g.n),
                t=rng.randrange(g.n),
                length=rng.randrange(1, g.n + 1),
                k=rng.randrange(1, g.n + 1),
                q=rng.choice(qs),
                seed=rng.randrange(1 << 30),
            )
        )
    return out


def check_restoration(
    family: list[tuple[str, DirectedGraph]],
    seeds: int,
    base_seed: int,
    fault: str | None = None,
    packed: bool = False,
) -> CheckResult:
    """count_walks_mod must leave every tape bit-identical; the call
    raises if not, so a pass here means every restoration verified."""
    rng = random.Random(base_seed)
    cases = 0
    for name, g in family:
        for cfg in _configs(g, rng, 2):
            for s in range(seeds):
                seed = 0 if s == 0 else rng.randrange(1 << 30)
                cfg_s = RunConfig(cfg.s, cfg.t, cfg.length, cfg.k, cfg.q, seed=seed)
                try:
                    count_walks_mod(g, cfg_s, fault=fault, packed=packed)
                except InvariantViolation as exc:
                    return CheckResult(
                        "restoration",
                        False,
                        cases,
                        f"graph {name}, cfg {cfg_s}: {exc}",
                    )
                cases += 1
    return CheckResult("restoration", True, cases, f"replay base_seed={base_seed}")


def check_only_v(
    family: list[tuple[str, DirectedGraph]], base_seed: int, count: int = 60
) -> CheckResult:
    """Forward runs may change block V (index 1) and nothing else."""
    rng = random.Random(base_seed)
    graphs = [g for _, g in family]
    for case in range(count):
        g = rng.choice(graphs)
        length = rng.randrange(1, g.n + 1)
        k = rng.randrange(1, g.n + 1)
        i, j = rng.randrange(k), rng.randrange(k)
        q = rng.choice(primes_stream(6))
        regs = slots_per_residue(g.n, k)
        tape = CatalyticTape(blocks_needed(length), regs, q, rng.randrange(1, 1 << 30))
        before = tape.snapshot()
        run_program(tape, g, length, i, j, k, FORWARD)
        after = tape.snapshot()
        for idx, (a, b) in enumerate(zip(before, after)):
            block = idx // regs
            if a != b and block != 1:
                return CheckResult(
                    "only-V",
                    False,
                    case,
                    f"block {block} changed on n={g.n} l={length} k={k} "
                    f"(replay base_seed={base_seed})",
                )
    return CheckResult("only-V", True, count, f"replay base_seed={base_seed}")


def check_seed_invariance(
    family: list[tuple[str, DirectedGraph]], seeds: int, base_seed: int
) -> CheckResult:
    """The returned residue must not depend on the catalyst content."""
    rng = random.Random(base_seed)
    cases = 0
    for name, g in family:
        for cfg in _configs(g, rng, 1):
            got = set()
            for s in range(seeds):
                cfg_s = RunConfig(cfg.s, cfg.t, cfg.length, cfg.k, cfg.q, seed=0 if s == 0 else rng.randrange(1 << 30))
                got.add(count_walks_mod(g, cfg_s))
            if len(got) != 1:
                return CheckResult(
                    "seed-invariance",
                    False,
                    cases,
                    f"graph {name}, cfg {cfg}: residues {sorted(got)} "
                    f"(replay base_seed={base_seed})",
                )
            cases += seeds
    return CheckResult(
        "seed-invariance", True, cases, f"{seeds} seeds per config, replay base_seed={base_seed}"
    )


def check_oracle_agreement(
    family: list[tuple[str, DirectedGraph]], base_seed: int
) -> CheckResult:
    """count_walks_mod equals the DP count reduced mod q."""
    rng = random.Random(base_seed)
    cases = 0
    for name, g in family:
        for cfg in _configs(g, rng, 3):
            got = count_walks_mod(g, cfg)
            want = count_walks_exact(g, cfg.s, cfg.t, cfg.length) % cfg.q
            if got != want:
                return CheckResult(
                    "oracle-agreement",
                    False,
                    cases,
                    f"graph {name}, cfg {cfg}: got {got}, oracle {want} "
                    f"(replay base_seed={base_seed})",
                )
            cases += 1
    return CheckResult("oracle-agreement", True, cases, f"replay base_seed={base_seed}")


def run_verify_suite(
    graph: DirectedGraph | None = None,
    seeds: int = 10,
    fault: str | None = None,
    base_seed: int = 20240,
    packed: bool = False,
) -> list[CheckResult]:
    """All four checks over the given graph, or the bundled family."""
    if seeds < 1:
        seeds = 1
    if graph is not None:
        family = [("given", graph)]
    else:
        family = _default_family(base_seed)
    return [
        check_restoration(family, seeds, base_seed, fault=fault, packed=packed),
        check_only_v(family, base_seed),
        check_seed_invariance(family, seeds, base_seed),
        check_oracle_agreement(family, base_seed),
    ]
