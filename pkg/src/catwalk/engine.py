"""Iterative executor for the reversible walk-propagation programs.

A propagation program of length l from residue class i to class j either
sweeps the qualifying edges once (l = 1) or, for each midpoint class m,
propagates half-length walks into a scratch block, propagates them on to
the output block, then uncomputes the scratch block by running the first
half in reverse.  Recursion is replaced by an explicit stack of
(stage, midpoint, direction) frames so the workspace cost is visible: a
frame is 2 stage bits + 1 direction bit + ceil(log2 k) midpoint bits.

Frame lengths, residues and block roles are never stored; they are
recomputed by replaying the stage path from the root whenever a frame is
popped.  The replay costs time, not metered space.

Block layout on the tape: block 0 is the input U, block 1 the output V,
blocks 2..r+1 are scratch W_1..W_r with r = ceil(log2 l).  A frame at
depth d uses W_(r-d+1) as scratch, so the deepest frame uses W_1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Literal, Sequence, Union

from .errors import ConfigError, InputError, MeterImbalanceError
from .graph import DirectedGraph, edges_between_residues, slots_per_residue
from .tape import CatalyticTape, TapeLike, value_bits

log = logging.getLogger(__name__)

Direction = Literal["forward", "inverse"]
FORWARD: Direction = "forward"
INVERSE: Direction = "inverse"

TraceSink = Callable[[str], None]

METER_CATEGORIES = ("stack", "scratch", "cursor")


def ceil_log2(x: int) -> int:
    if x < 1:
        raise InputError(f"ceil_log2 needs a positive argument, got {x}")
    return (x - 1).bit_length()


def frame_bits(k: int) -> int:
    """Stack cost of one control frame: 2 stage bits + 1 direction bit +
    ceil(log2 k) midpoint bits."""
    if k < 1:
        raise InputError(f"partition parameter must be >= 1, got {k}")
    return 3 + ceil_log2(k)


def blocks_needed(length: int) -> int:
    """U, V, and one scratch block per halving level."""
    return ceil_log2(length) + 2


def catalyst_bits(length: int, n: int, k: int, q: int) -> int:
    """Exact catalyst allocation: (ceil(log2 l)+2) * ceil(n/k) * ceil(log2 q)."""
    return blocks_needed(length) * slots_per_residue(n, k) * value_bits(q)


def block_name(index: int) -> str:
    if index == 0:
        return "U"
    if index == 1:
        return "V"
    return f"W{index - 1}"


@dataclass
class ControlFrame:
    """One stack entry: which of the three child calls is running, at
    which midpoint class, and whether this frame executes inverted."""

    stage: int
    midpoint: int
    inverse: bool

    def __post_init__(self) -> None:
        if self.stage not in (1, 2, 3):
            raise InputError(f"stage must be 1, 2 or 3, got {self.stage}")
        if self.midpoint < 0:
            raise InputError(f"midpoint must be >= 0, got {self.midpoint}")


class SpaceMeter:
    """Peak workspace accounting by category, plus the fixed catalyst size.

    Charges and releases must balance by the end of a run; the peak of
    the category sum and the peak frame depth are monotone high-water
    marks.  The catalyst figure never changes mid-run.
    """

    __slots__ = (
        "catalyst_bits",
        "peak_workspace_bits",
        "peak_stack_depth",
        "peak_by_category",
        "_current",
        "_depth",
    )

    def __init__(self, catalyst_bits: int = 0):
        self.catalyst_bits = catalyst_bits
        self.peak_workspace_bits = 0
        self.peak_stack_depth = 0
        self.peak_by_category = {c: 0 for c in METER_CATEGORIES}
        self._current = {c: 0 for c in METER_CATEGORIES}
        self._depth = 0

    @property
    def workspace_now(self) -> int:
        return sum(self._current.values())

    def charge(self, category: str, bits: int) -> None:
        if category not in self._current:
            raise InputError(f"unknown meter category {category!r}")
        if bits < 0:
            raise InputError(f"charge must be nonnegative, got {bits}")
        level = self._current[category] + bits
        self._current[category] = level
        if level > self.peak_by_category[category]:
            self.peak_by_category[category] = level
        now = self.workspace_now
        if now > self.peak_workspace_bits:
            self.peak_workspace_bits = now

    def release(self, category: str, bits: int) -> None:
        if category not in self._current:
            raise InputError(f"unknown meter category {category!r}")
        if bits < 0:
            raise InputError(f"release must be nonnegative, got {bits}")
        level = self._current[category] - bits
        if level < 0:
            raise MeterImbalanceError(
                f"released {bits} {category} bits with only {self._current[category]} charged"
            )
        self._current[category] = level

    def push_frame(self, bits: int) -> None:
        self.charge("stack", bits)
        self._depth += 1
        if self._depth > self.peak_stack_depth:
            self.peak_stack_depth = self._depth

    def pop_frame(self, bits: int) -> None:
        self.release("stack", bits)
        self._depth -= 1

    def assert_balanced(self) -> None:
        leftover = {c: b for c, b in self._current.items() if b}
        if leftover or self._depth:
            raise MeterImbalanceError(
                f"meter unbalanced at run end: {leftover}, depth={self._depth}"
            )

    def record_run(
        self, peak_frames: int, bits_per_frame: int, cursor_bits: int, temp_bits: int
    ) -> None:
        """Replay the charge profile of a completed run (used by the
        compiled fast path, whose inner loop cannot call back here).
        Produces the same peaks as charging live would have."""
        self.charge("cursor", cursor_bits)
        self.charge("scratch", temp_bits)
        for _ in range(peak_frames):
            self.push_frame(bits_per_frame)
        for _ in range(peak_frames):
            self.pop_frame(bits_per_frame)
        self.release("scratch", temp_bits)
        self.release("cursor", cursor_bits)


def meter_charge(meter: SpaceMeter, category: str, bits: int) -> None:
    meter.charge(category, bits)


def meter_release(meter: SpaceMeter, category: str, bits: int) -> None:
    meter.release(category, bits)


def run_scoped_charges(g: DirectedGraph, q: int) -> tuple[int, int]:
    """(cursor bits, value-temp bits) held for the duration of one run:
    the edge cursor spans positions 0..m, and one residue read buffer."""
    return ceil_log2(len(g.edges) + 1), value_bits(q)


def expected_run_peak_bits(g: DirectedGraph, length: int, k: int, q: int) -> int:
    """Exact peak workspace of one metered run_program call.  The frame
    stack peaks at ceil(log2 l) on every run (the leftmost descent always
    reaches it) while the run-scoped charges are held."""
    cursor, temp = run_scoped_charges(g, q)
    return cursor + temp + frame_bits(k) * ceil_log2(length)


def run_base(
    tape: TapeLike,
    in_block: int,
    out_block: int,
    g: DirectedGraph,
    i: int,
    j: int,
    k: int,
    direction: Direction = FORWARD,
    trace: TraceSink | None = None,
) -> None:
    """One edge sweep: for each edge (u,v) with u in class i and v in
    class j, add (or subtract) the input register for u into the output
    register for v.  Inverse sweeps run in exact reverse edge order, so
    a forward sweep's updates are undone last-to-first."""
    if in_block == out_block:
        raise ConfigError(f"base sweep needs distinct blocks, got {in_block} twice")
    for b in (in_block, out_block):
        if not (0 <= b < tape.blocks):
            raise InputError(f"block {b} out of range 0..{tape.blocks - 1}")
    if direction not in (FORWARD, INVERSE):
        raise InputError(f"direction must be forward or inverse, got {direction!r}")
    sign = 1 if direction == FORWARD else -1
    mark = "+" if sign > 0 else "-"
    for u, v in edges_between_residues(g, i, j, k, reverse=direction == INVERSE):
        val = tape.get(in_block, u // k)
        tape.add_into(out_block, v // k, val, sign)
        if trace is not None:
            trace(f"{mark}U[{u // k}]→V[{v // k}] (edge {u},{v})")


def block_roles(
    stack: Sequence[Union[ControlFrame, int]], blocks: int
) -> tuple[int, int, int | None]:
    """Blocks the next frame would use, given its ancestors' stages.

    Stage 1 and 3 children write the parent's scratch block; stage 2
    children read it and write the parent's output.  Scratch descends one
    W block per level and is None once exhausted (only reachable for
    stacks deeper than any real run produces).
    """
    if blocks < 2:
        raise InputError(f"need at least 2 blocks, got {blocks}")
    inp, out = 0, 1
    scr: int | None = blocks - 1 if blocks >= 3 else None
    for entry in stack:
        stage = entry.stage if isinstance(entry, ControlFrame) else int(entry)
        if stage not in (1, 2, 3):
            raise InputError(f"malformed stack: stage {stage}")
        if scr is None:
            raise InputError("stack deeper than available scratch blocks")
        if stage == 2:
            inp = scr
        else:
            out = scr
        scr = scr - 1 if scr - 1 >= 2 else None
    return inp, out, scr


def _replay_locals(
    stack: list[ControlFrame], root_len: int, root_i: int, root_j: int, blocks: int
) -> tuple[int, int, int, int, int, int]:
    """Recompute the top frame's (length, residues, blocks) from the
    stage path; nothing below the stage/midpoint pairs is stored."""
    ln, fi, fj = root_len, root_i, root_j
    inp, out, scr = 0, 1, blocks - 1
    for f in stack[:-1]:
        if f.stage == 2:
            ln = ln // 2
            fi = f.midpoint
            inp = scr
        else:
            ln = (ln + 1) // 2
            fj = f.midpoint
            out = scr
        scr -= 1
    return ln, fi, fj, inp, out, scr


def _validate_run(tape: TapeLike, g: DirectedGraph, length: int, i: int, j: int, k: int) -> None:
    if length < 1:
        raise InputError(f"walk length must be >= 1, got {length}")
    if k < 1:
        raise InputError(f"partition parameter must be >= 1, got {k}")
    if not (0 <= i < k) or not (0 <= j < k):
        raise InputError(f"residues ({i},{j}) out of range for k={k}")
    need = blocks_needed(length)
    if tape.blocks != need:
        raise InputError(
            f"length {length} needs exactly {need} blocks, tape has {tape.blocks}"
        )
    slots = slots_per_residue(g.n, k)
    if tape.regs_per_block != slots:
        raise InputError(
            f"n={g.n}, k={k} needs {slots} regs per block, tape has {tape.regs_per_block}"
        )


def _run_reference(
    tape: TapeLike,
    g: DirectedGraph,
    length: int,
    i: int,
    j: int,
    k: int,
    direction: Direction,
    meter: SpaceMeter | None,
    trace: TraceSink | None,
) -> None:
    root_inv = direction == INVERSE
    fb = frame_bits(k)
    stack: list[ControlFrame] = [
        ControlFrame(stage=1, midpoint=k - 1 if root_inv else 0, inverse=root_inv)
    ]
    if meter is not None:
        meter.push_frame(fb)
    # carried locals describing the top frame; replayed on pop, never stored
    cur_len, cur_i, cur_j = length, i, j
    cur_in, cur_out, cur_scr = 0, 1, tape.blocks - 1
    while stack:
        f = stack[-1]
        if f.stage == 2:
            clen = cur_len // 2
            ci, cj = f.midpoint, cur_j
            cin, cout = cur_scr, cur_out
            cinv = f.inverse
        else:
            clen = (cur_len + 1) // 2
            ci, cj = cur_i, f.midpoint
            cin, cout = cur_in, cur_scr
            cinv = f.stage == 3
        if clen > 1:
            stack.append(
                ControlFrame(stage=1, midpoint=k - 1 if cinv else 0, inverse=cinv)
            )
            if meter is not None:
                meter.push_frame(fb)
            cur_len, cur_i, cur_j = clen, ci, cj
            cur_in, cur_out, cur_scr = cin, cout, cur_scr - 1
            continue
        run_base(tape, cin, cout, g, ci, cj, k, INVERSE if cinv else FORWARD, trace)
        # advance: bump the stage, step the midpoint, pop completed frames
        while stack:
            f = stack[-1]
            if f.stage < 3:
                f.stage += 1
                break
            nm = f.midpoint + (-1 if f.inverse else 1)
            if 0 <= nm < k:
                f.midpoint = nm
                f.stage = 1
                break
            stack.pop()
            if meter is not None:
                meter.pop_frame(fb)
            if stack:
                cur_len, cur_i, cur_j, cur_in, cur_out, cur_scr = _replay_locals(
                    stack, length, i, j, tape.blocks
                )


def _kernel_usable(tape: TapeLike, trace: TraceSink | None) -> bool:
    if trace is not None or not isinstance(tape, CatalyticTape):
        return False
    from . import _kernel

    return _kernel.available()


def run_program(
    tape: TapeLike,
    g: DirectedGraph,
    length: int,
    i: int,
    j: int,
    k: int,
    direction: Direction = FORWARD,
    meter: SpaceMeter | None = None,
    trace: TraceSink | None = None,
    executor: str = "auto",
) -> None:
    """Propagate length-`length` walk counts from class-i input registers
    into class-j output registers (or undo exactly that, when inverse).

    Only block V (index 1) differs afterwards; U and all W blocks are
    bit-identical to their pre-call contents.  Forward then inverse
    restores the whole tape.

    executor: "reference" forces the pure-Python machine, "fast" the
    compiled kernel, "auto" picks the kernel when usable (plain tape, no
    trace).  Both produce identical tape contents and meter readings.
    """
    _validate_run(tape, g, length, i, j, k)
    if direction not in (FORWARD, INVERSE):
        raise InputError(f"direction must be forward or inverse, got {direction!r}")
    if executor not in ("auto", "reference", "fast"):
        raise InputError(f"unknown executor {executor!r}")
    use_fast = False
    if executor == "fast":
        if not _kernel_usable(tape, trace):
            raise ConfigError("fast executor unavailable for this configuration")
        use_fast = True
    elif executor == "auto":
        use_fast = _kernel_usable(tape, trace)

    cursor, temp = run_scoped_charges(g, tape.q)
    if use_fast:
        from . import _kernel

        peak = _kernel.run_fast(tape, g, length, i, j, k, direction == INVERSE)
        if meter is not None:
            meter.record_run(peak, frame_bits(k), cursor, temp)
        return
    if meter is not None:
        meter.charge("cursor", cursor)
        meter.charge("scratch", temp)
    if length == 1:
        run_base(tape, 0, 1, g, i, j, k, direction, trace)
    else:
        _run_reference(tape, g, length, i, j, k, direction, meter, trace)
    if meter is not None:
        meter.release("scratch", temp)
        meter.release("cursor", cursor)
