"""Two-run differencing driver: walk counts modulo a single prime.

The propagation engine adds, into each output register, a value that is
linear in the initial input registers, whatever junk the catalytic tape
started with.  Running the whole (forward, read, inverse) cycle twice,
once as-is and once with the source register bumped by 1, and
subtracting the two readings cancels the junk and leaves exactly
N_l(s,t) mod q.  After each cycle the inverse run has restored the tape,
which is verified, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import (
    FORWARD,
    INVERSE,
    SpaceMeter,
    TraceSink,
    blocks_needed,
    expected_run_peak_bits,
    run_program,
)
from .errors import ConfigError, InputError, RestorationError, SpaceFormulaError
from .graph import DirectedGraph, slots_per_residue
from .primes import is_prime
from .tape import CatalyticTape, PackedRegisterFile, TapeLike, value_bits

FAULT_MODES = ("skip-uncompute",)


@dataclass(frozen=True)
class RunConfig:
    """One counting problem: endpoints, walk length, partition parameter,
    modulus, and the tape-initialization seed (0 means an all-zero tape)."""

    s: int
    t: int
    length: int
    k: int = 1
    q: int = 2
    seed: int = 0

    def validate(self, g: DirectedGraph) -> None:
        for name, v in (("source", self.s), ("target", self.t)):
            if not (0 <= v < g.n):
                raise InputError(f"{name} vertex {v} out of range for n={g.n}")
        if not (1 <= self.length <= g.n):
            raise InputError(
                f"walk length must be in 1..{g.n} (the vertex count), got {self.length}"
            )
        if not (1 <= self.k <= g.n):
            raise InputError(
                f"partition parameter must be in 1..{g.n}, got {self.k}"
            )
        if self.q < 2 or not is_prime(self.q):
            raise ConfigError(f"modulus must be prime, got {self.q}")


def allocate_tape_for(
    g: DirectedGraph, cfg: RunConfig, packed: bool = False
) -> TapeLike:
    """Tape shaped for cfg: ceil(log2 l)+2 blocks of ceil(n/k) registers."""
    blocks = blocks_needed(cfg.length)
    regs = slots_per_residue(g.n, cfg.k)
    cls = PackedRegisterFile if packed else CatalyticTape
    return cls(blocks, regs, cfg.q, cfg.seed)


def protocol_peak_workspace_bits(
    g: DirectedGraph, length: int, k: int, q: int, packed_flag_bits: int = 0
) -> int:
    """Exact peak for one count_walks_mod call: the engine-run peak plus
    the two reading accumulators and the differencing flag bit, all held
    across the runs (plus sanitize flags when the packed backend is in
    use)."""
    return (
        expected_run_peak_bits(g, length, k, q)
        + 2 * value_bits(q)
        + 1
        + packed_flag_bits
    )


def count_walks_mod(
    g: DirectedGraph,
    cfg: RunConfig,
    meter: SpaceMeter | None = None,
    packed: bool = False,
    executor: str = "auto",
    trace: TraceSink | None = None,
    fault: str | None = None,
) -> int:
    """N_length(s,t) mod q, independent of the tape's initial content.

    The tape is verified bit-restored before returning; a divergence
    raises RestorationError.  The metered peak must equal the documented
    workspace formula exactly, else SpaceFormulaError.  fault enables
    deliberate sabotage for the verification tooling: "skip-uncompute"
    drops the inverse runs, which must trip the restoration check.
    """
    cfg.validate(g)
    if fault is not None and fault not in FAULT_MODES:
        raise InputError(f"unknown fault mode {fault!r}; known: {FAULT_MODES}")
    tape = allocate_tape_for(g, cfg, packed)
    if meter is None:
        meter = SpaceMeter()
    meter.catalyst_bits = tape.bit_size
    flag_bits = tape.flag_bits if isinstance(tape, PackedRegisterFile) else 0

    src_slot, src_res = cfg.s // cfg.k, cfg.s % cfg.k
    dst_slot, dst_res = cfg.t // cfg.k, cfg.t % cfg.k

    # held across all four runs: two readings, the differencing bit, and
    # (packed only) the per-block sanitize flags
    meter.charge("scratch", 2 * tape.value_bits + 1 + flag_bits)
    readings = []
    for c in (0, 1):
        tape.add_into(0, src_slot, c, 1)
        run_program(
            tape, g, cfg.length, src_res, dst_res, cfg.k, FORWARD, meter, trace, executor
        )
        readings.append(tape.get(1, dst_slot))
        if fault != "skip-uncompute":
            run_program(
                tape,
                g,
                cfg.length,
                src_res,
                dst_res,
                cfg.k,
                INVERSE,
                meter,
                trace,
                executor,
            )
        tape.add_into(0, src_slot, c, -1)
    meter.release("scratch", 2 * tape.value_bits + 1 + flag_bits)
    meter.assert_balanced()

    report = tape.verify_restored()
    if not report.ok:
        raise RestorationError(f"catalyst not restored: {report.describe()}")
    if fault is None:
        expect = protocol_peak_workspace_bits(g, cfg.length, cfg.k, cfg.q, flag_bits)
        if meter.peak_workspace_bits != expect:
            raise SpaceFormulaError(
                f"peak workspace {meter.peak_workspace_bits} != expected {expect} "
                f"for n={g.n} l={cfg.length} k={cfg.k} q={cfg.q}"
            )
    return (readings[1] - readings[0]) % cfg.q
