"""From per-prime residues to exact counts, and the reachability decision.

A length-l walk count is below n^l, so collecting N_l(s,t) mod p over
primes whose product exceeds n^l pins down the exact integer; Garner's
mixed-radix combination reconstructs it.  Reachability reduces to
counting: add a self-loop at the target so any short witness path pads
to length n-1, then test whether N_{n-1}(s,t) is nonzero.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .engine import SpaceMeter
from .errors import InputError, InvariantViolation
from .extract import RunConfig, count_walks_mod
from .graph import DirectedGraph, add_self_loop
from .primes import next_prime_after, primes_stream

MAX_MODULUS = 1 << 62  # fits a machine word; asserted at selection


def choose_moduli(n: int, length: int, strict_paper: bool = False) -> list[int]:
    """Primes whose product strictly exceeds n^length, the walk-count bound.

    Default: the minimal prime prefix, which never needs more than 2n
    primes.  strict_paper instead takes exactly the first 2n primes (the
    worst-case allocation for any length up to n) and checks that their
    product still clears n^n.
    """
    if n < 1:
        raise InputError(f"vertex count must be >= 1, got {n}")
    if not (1 <= length <= n):
        raise InputError(f"length must be in 1..{n}, got {length}")
    bound = n**length
    if strict_paper:
        moduli = primes_stream(2 * n)
        product = math.prod(moduli)
        if product <= n**n:
            raise InvariantViolation(
                f"first {2 * n} primes multiply to {product}, not above {n}^{n}"
            )
    else:
        moduli = []
        product = 1
        candidate = 1
        while product <= bound:
            candidate = next_prime_after(candidate)
            moduli.append(candidate)
            product *= candidate
        if len(moduli) > 2 * n:
            raise InvariantViolation(
                f"needed {len(moduli)} primes for n={n}, length={length}; bound is 2n"
            )
    if moduli[-1] >= MAX_MODULUS:
        raise InvariantViolation(f"modulus {moduli[-1]} exceeds the word-size cap")
    return moduli


def crt_reconstruct(moduli: list[int], residues: list[int]) -> int:
    """The unique x in [0, prod moduli) with x = residues[i] mod moduli[i],
    by mixed-radix combination: fold one modulus in at a time, solving
    for the next mixed-radix digit with a modular inverse."""
    if len(moduli) != len(residues):
        raise InputError(
            f"{len(moduli)} moduli but {len(residues)} residues"
        )
    if not moduli:
        raise InputError("need at least one modulus")
    for a in range(len(moduli)):
        if not (0 <= residues[a] < moduli[a]):
            raise InputError(
                f"residue {residues[a]} out of range for modulus {moduli[a]}"
            )
        for b in range(a + 1, len(moduli)):
            if math.gcd(moduli[a], moduli[b]) != 1:
                raise InputError(
                    f"moduli {moduli[a]} and {moduli[b]} are not coprime"
                )
    x = 0
    partial = 1
    for m, r in zip(moduli, residues):
        digit = (r - x) * pow(partial, -1, m) % m
        x += partial * digit
        partial *= m
    return x


@dataclass(frozen=True)
class CrtWitness:
    """Receipt for a reconstructed count: the primes, the per-prime
    residues the runs produced, the value, and the product bound."""

    moduli: tuple[int, ...]
    residues: tuple[int, ...]
    value: int
    bound: int

    def __post_init__(self) -> None:
        if self.value < 0 or self.value >= self.bound:
            raise InvariantViolation(
                f"witness value {self.value} outside [0, {self.bound})"
            )
        for m, r in zip(self.moduli, self.residues):
            if self.value % m != r:
                raise InvariantViolation(
                    f"witness value {self.value} is {self.value % m} mod {m}, "
                    f"recorded residue is {r}"
                )

    def as_record(self) -> dict:
        return {
            "moduli": list(self.moduli),
            "residues": list(self.residues),
            "value": str(self.value),
        }


@dataclass
class RunStats:
    """Aggregated accounting for one counting or decision request."""

    n: int
    k: int
    length: int
    moduli: list[int] = field(default_factory=list)
    catalyst_bits: int = 0
    peak_workspace_bits: int = 0
    peak_stack_depth: int = 0
    runs: int = 0
    seed: int = 0
    wall_time_s: float = 0.0


def count_walks_exact_catalytic(
    g: DirectedGraph,
    s: int,
    t: int,
    length: int,
    k: int = 1,
    seed: int = 0,
    strict_paper: bool = False,
    packed: bool = False,
    executor: str = "auto",
    parallel: bool = False,
    trace=None,
) -> tuple[int, CrtWitness, RunStats]:
    """Exact N_length(s,t) assembled from one restored-tape run per prime.

    Each modulus gets a tape allocated from the same seed (register width
    depends on the modulus, so the tapes are per-prime), run sequentially
    in ascending prime order by default; parallel=True gives every
    modulus its own tape and thread.
    """
    started = time.perf_counter()
    moduli = choose_moduli(g.n, length, strict_paper)
    stats = RunStats(n=g.n, k=k, length=length, moduli=list(moduli), seed=seed)
    meter = SpaceMeter()

    def one(q: int) -> int:
        cfg = RunConfig(s=s, t=t, length=length, k=k, q=q, seed=seed)
        return count_walks_mod(
            g, cfg, meter=meter, packed=packed, executor=executor, trace=trace
        )

    if parallel and trace is None and len(moduli) > 1:
        # one meter per thread; fold the peaks afterwards
        meters = [SpaceMeter() for _ in moduli]

        def one_with(q: int, m: SpaceMeter) -> int:
            cfg = RunConfig(s=s, t=t, length=length, k=k, q=q, seed=seed)
            return count_walks_mod(g, cfg, meter=m, packed=packed, executor=executor)

        with ThreadPoolExecutor(max_workers=min(8, len(moduli))) as pool:
            residues = list(pool.map(one_with, moduli, meters))
        meter.catalyst_bits = max(m.catalyst_bits for m in meters)
        meter.peak_workspace_bits = max(m.peak_workspace_bits for m in meters)
        meter.peak_stack_depth = max(m.peak_stack_depth for m in meters)
    else:
        residues = [one(q) for q in moduli]

    value = crt_reconstruct(moduli, residues)
    witness = CrtWitness(
        moduli=tuple(moduli),
        residues=tuple(residues),
        value=value,
        bound=math.prod(moduli),
    )
    stats.catalyst_bits = meter.catalyst_bits
    stats.peak_workspace_bits = meter.peak_workspace_bits
    stats.peak_stack_depth = meter.peak_stack_depth
    stats.runs = 4 * len(moduli)
    stats.wall_time_s = time.perf_counter() - started
    return value, witness, stats


def decide_stcon(
    g: DirectedGraph,
    s: int,
    t: int,
    k: int = 1,
    seed: int = 0,
    strict_paper: bool = False,
    packed: bool = False,
    executor: str = "auto",
    parallel: bool = False,
) -> tuple[bool, RunStats]:
    """Is there a directed path (any length, including 0) from s to t?

    With a self-loop added at t, any witness path of length below n pads
    to exactly n-1 loop steps, so reachability is N_{n-1}(s,t) != 0.
    """
    for name, v in (("source", s), ("target", t)):
        if not (0 <= v < g.n):
            raise InputError(f"{name} vertex {v} out of range for n={g.n}")
    if g.n == 1:
        # no length-(n-1) program exists for n=1; a vertex reaches itself
        return True, RunStats(n=g.n, k=k, length=0, seed=seed)
    looped = add_self_loop(g, t)
    value, _, stats = count_walks_exact_catalytic(
        looped,
        s,
        t,
        looped.n - 1,
        k=k,
        seed=seed,
        strict_paper=strict_paper,
        packed=packed,
        executor=executor,
        parallel=parallel,
    )
    return value != 0, stats
