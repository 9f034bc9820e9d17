"""Catalytic register tape over Z_q, with restoration checking.

Two storage backends share one access surface (get / add_into /
verify_restored / dump):

* CatalyticTape keeps each register as a plain residue.  Values are valid
  by construction, which is the assumption the propagation engine makes.
* PackedRegisterFile keeps each block as a single integer
  x = r_1 + r_2*q + ... + r_m*q^(m-1) and performs carry-corrected
  updates without unpacking.  Arbitrary initial bit patterns are made
  valid by clearing the top bit when x >= q^m; one flag bit per block
  records the repair so teardown can restore the original bits exactly.

The adapter exists to show the packed encoding carries a full computation,
not for speed; the engine treats both backends identically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import ConfigError, InputError
from .primes import is_prime

Initializer = Union[int, Sequence[int], None]


def value_bits(q: int) -> int:
    """Bits to hold one residue: ceil(log2 q)."""
    return (q - 1).bit_length()


@dataclass(frozen=True)
class RestorationReport:
    """Outcome of comparing a tape against its creation-time snapshot.

    divergence is None when restored, else the first mismatch as
    (block, reg, expected, found).  reg is None for backends that can
    only localize to a block.
    """

    ok: bool
    divergence: tuple[int, int | None, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "restored"
        b, r, exp, got = self.divergence  # type: ignore[misc]
        where = f"block {b}" if r is None else f"block {b} reg {r}"
        return f"divergence at {where}: expected {exp}, found {got}"


def _check_modulus(q: int) -> None:
    if q < 2:
        raise ConfigError(f"modulus must be >= 2, got {q}")
    if not is_prime(q):
        raise ConfigError(f"modulus must be prime, got {q}")


def _draw_values(count: int, q: int, init: Initializer) -> list[int]:
    """Initial residues: None or 0 means all zeros, an int seeds a PRNG,
    a sequence is taken verbatim (and range-checked)."""
    if init is None or init == 0:
        return [0] * count
    if isinstance(init, int):
        rng = random.Random(init)
        return [rng.randrange(q) for _ in range(count)]
    values = [int(v) for v in init]
    if len(values) != count:
        raise InputError(f"explicit init needs {count} values, got {len(values)}")
    for pos, v in enumerate(values):
        if not (0 <= v < q):
            raise InputError(f"init value {v} at position {pos} outside 0..{q - 1}")
    return values


class CatalyticTape:
    """blocks x regs_per_block registers over Z_q with a frozen snapshot.

    The snapshot is taken once at creation; verify_restored compares
    against it.  bit_size is the catalyst charge: every register costs
    ceil(log2 q) bits regardless of its current value.
    """

    __slots__ = ("q", "blocks", "regs_per_block", "values", "_snapshot")

    def __init__(self, block_count: int, regs_per_block: int, q: int, init: Initializer = None):
        _check_modulus(q)
        if block_count < 1 or regs_per_block < 1:
            raise InputError(
                f"tape shape must be positive, got {block_count}x{regs_per_block}"
            )
        self.q = q
        self.blocks = block_count
        self.regs_per_block = regs_per_block
        self.values = _draw_values(block_count * regs_per_block, q, init)
        self._snapshot = tuple(self.values)

    @property
    def value_bits(self) -> int:
        return value_bits(self.q)

    @property
    def bit_size(self) -> int:
        return self.blocks * self.regs_per_block * self.value_bits

    def _index(self, block: int, reg: int) -> int:
        if not (0 <= block < self.blocks):
            raise InputError(f"block {block} out of range 0..{self.blocks - 1}")
        if not (0 <= reg < self.regs_per_block):
            raise InputError(f"reg {reg} out of range 0..{self.regs_per_block - 1}")
        return block * self.regs_per_block + reg

    def get(self, block: int, reg: int) -> int:
        return self.values[self._index(block, reg)]

    def add_into(self, block: int, reg: int, delta: int, sign: int = 1) -> None:
        """value <- value + sign*delta mod q; touches no other register."""
        if sign not in (1, -1):
            raise InputError(f"sign must be +1 or -1, got {sign}")
        if not (0 <= delta < self.q):
            raise InputError(f"delta {delta} outside 0..{self.q - 1}")
        idx = self._index(block, reg)
        self.values[idx] = (self.values[idx] + sign * delta) % self.q

    def snapshot(self) -> tuple[int, ...]:
        """Current values, frozen (not the creation snapshot)."""
        return tuple(self.values)

    def initial_snapshot(self) -> tuple[int, ...]:
        return self._snapshot

    def verify_restored(self) -> RestorationReport:
        for idx, (want, got) in enumerate(zip(self._snapshot, self.values)):
            if want != got:
                block, reg = divmod(idx, self.regs_per_block)
                return RestorationReport(False, (block, reg, want, got))
        return RestorationReport(True)

    def dump(self) -> str:
        lines = [f"q={self.q} blocks={self.blocks} regs={self.regs_per_block}"]
        for b in range(self.blocks):
            row = self.values[b * self.regs_per_block : (b + 1) * self.regs_per_block]
            lines.append(" ".join(str(v) for v in row))
        return "\n".join(lines) + "\n"


def allocate_tape(
    block_count: int, regs_per_block: int, q: int, init: Initializer = None
) -> CatalyticTape:
    """Allocate and snapshot a tape.  init: None/0 zeros, int seed, or
    explicit residue list."""
    return CatalyticTape(block_count, regs_per_block, q, init)


# ---------------------------------------------------------------------------
# Packed single-integer encoding.


@dataclass
class PackedTape:
    """m registers over Z_q folded into one integer x = sum r_i * q^(i-1).

    Registers are 1-indexed here (and only here) so the extraction rule
    reads exactly floor(x / q^(i-1)) mod q.  capacity_bits is the raw
    width ceil(m*log2 q); x may initially be any value below 2^capacity_bits.
    """

    q: int
    m: int
    x: int
    msb_flipped: bool = False

    def __post_init__(self) -> None:
        _check_modulus(self.q)
        if self.m < 1:
            raise InputError(f"register count must be >= 1, got {self.m}")
        if not (0 <= self.x < 1 << self.capacity_bits):
            raise InputError(
                f"raw value {self.x} does not fit {self.capacity_bits} bits"
            )

    @property
    def capacity_bits(self) -> int:
        return (self.q**self.m - 1).bit_length()

    @property
    def sanitized(self) -> bool:
        return self.x < self.q**self.m


def pack(values: Sequence[int], q: int) -> PackedTape:
    """Fold residues into the single-integer form; flag starts clear."""
    _check_modulus(q)
    if not values:
        raise InputError("cannot pack an empty register list")
    x = 0
    for i, v in enumerate(values):
        if not (0 <= v < q):
            raise InputError(f"value {v} at position {i} outside 0..{q - 1}")
        x += v * q**i
    return PackedTape(q=q, m=len(values), x=x)


def unpack_register(p: PackedTape, i: int) -> int:
    """r_i = floor(x / q^(i-1)) mod q, 1-indexed; requires a sanitized x."""
    if not (1 <= i <= p.m):
        raise InputError(f"register index {i} out of range 1..{p.m}")
    if not p.sanitized:
        raise InputError(f"packed value {p.x} >= q^m={p.q**p.m}; sanitize first")
    return (p.x // p.q ** (i - 1)) % p.q


def unpack_all(p: PackedTape) -> tuple[int, ...]:
    return tuple(unpack_register(p, i) for i in range(1, p.m + 1))


def packed_update(p: PackedTape, i: int, u: int, sign: int = 1) -> None:
    """r_i <- r_i + sign*u mod q without unpacking the other registers.

    Raw step x +- u*q^(i-1) mod q^m is exact unless digit i wraps; the
    wrap hits digit i+1 by exactly one, undone by the q^i correction.
    For i = m the correction is q^m = 0 mod q^m, so the rule is uniform.
    The current r_i is read into workspace first to detect the wrap.
    """
    if sign not in (1, -1):
        raise InputError(f"sign must be +1 or -1, got {sign}")
    if not (0 <= u < p.q):
        raise InputError(f"update value {u} outside 0..{p.q - 1}")
    r_i = unpack_register(p, i)
    modulus = p.q**p.m
    step = u * p.q ** (i - 1)
    if sign == 1:
        x = (p.x + step) % modulus
        if r_i + u >= p.q:
            x = (x - p.q**i) % modulus
    else:
        x = (p.x - step) % modulus
        if r_i - u < 0:
            x = (x + p.q**i) % modulus
    p.x = x


def sanitize_invalid(p: PackedTape) -> None:
    """Make x a valid encoding: clear the top raw bit when x >= q^m.

    Sound because 2^(capacity_bits-1) <= q^m, so any out-of-range x has
    that bit set and landing below 2^(capacity_bits-1) lands below q^m.
    """
    top = 1 << (p.capacity_bits - 1)
    if top > p.q**p.m:
        raise ConfigError(
            f"packed layout broken: 2^{p.capacity_bits - 1} > {p.q}^{p.m}"
        )
    if not p.sanitized:
        p.x -= top
        p.msb_flipped = True


def desanitize(p: PackedTape) -> None:
    """Undo sanitize_invalid bit-for-bit."""
    if p.msb_flipped:
        p.x += 1 << (p.capacity_bits - 1)
        p.msb_flipped = False


class PackedRegisterFile:
    """Tape backend storing each block as one PackedTape.

    Presents the same get/add_into surface as CatalyticTape with 0-based
    register indices (shifted to the packed form's 1-based internally).
    Initial content is an arbitrary capacity_bits-wide integer per block;
    sanitize flags count as workspace, one bit per block, reported via
    flag_bits for the space meter.
    """

    __slots__ = ("q", "blocks", "regs_per_block", "_tapes", "_initial_raw")

    def __init__(self, block_count: int, regs_per_block: int, q: int, init: Initializer = None):
        _check_modulus(q)
        if block_count < 1 or regs_per_block < 1:
            raise InputError(
                f"tape shape must be positive, got {block_count}x{regs_per_block}"
            )
        self.q = q
        self.blocks = block_count
        self.regs_per_block = regs_per_block
        width = (q**regs_per_block - 1).bit_length()
        if init is None or init == 0:
            raws = [0] * block_count
        elif isinstance(init, int):
            rng = random.Random(init)
            raws = [rng.getrandbits(width) for _ in range(block_count)]
        else:
            raise InputError("packed backend accepts only zero or seeded init")
        self._initial_raw = tuple(raws)
        self._tapes = [PackedTape(q=q, m=regs_per_block, x=x) for x in raws]
        for p in self._tapes:
            sanitize_invalid(p)

    @property
    def value_bits(self) -> int:
        return value_bits(self.q)

    @property
    def capacity_bits(self) -> int:
        return self._tapes[0].capacity_bits

    @property
    def bit_size(self) -> int:
        """Catalyst bits: raw width times block count."""
        return self.blocks * self.capacity_bits

    @property
    def flag_bits(self) -> int:
        """Workspace cost of the sanitize flags."""
        return self.blocks

    def _tape(self, block: int) -> PackedTape:
        if not (0 <= block < self.blocks):
            raise InputError(f"block {block} out of range 0..{self.blocks - 1}")
        return self._tapes[block]

    def get(self, block: int, reg: int) -> int:
        if not (0 <= reg < self.regs_per_block):
            raise InputError(f"reg {reg} out of range 0..{self.regs_per_block - 1}")
        return unpack_register(self._tape(block), reg + 1)

    def add_into(self, block: int, reg: int, delta: int, sign: int = 1) -> None:
        if not (0 <= reg < self.regs_per_block):
            raise InputError(f"reg {reg} out of range 0..{self.regs_per_block - 1}")
        packed_update(self._tape(block), reg + 1, delta, sign)

    def current_raw(self, block: int) -> int:
        """Block content with the sanitize repair undone (non-mutating)."""
        p = self._tape(block)
        return p.x + (1 << (p.capacity_bits - 1) if p.msb_flipped else 0)

    def verify_restored(self) -> RestorationReport:
        for b in range(self.blocks):
            want = self._initial_raw[b]
            got = self.current_raw(b)
            if want != got:
                return RestorationReport(False, (b, None, want, got))
        return RestorationReport(True)

    def release(self) -> None:
        """Teardown: restore raw bits, dropping the flag workspace."""
        for p in self._tapes:
            desanitize(p)

    def dump(self) -> str:
        lines = [f"q={self.q} blocks={self.blocks} regs={self.regs_per_block}"]
        for b in range(self.blocks):
            lines.append(" ".join(str(v) for v in unpack_all(self._tapes[b])))
        return "\n".join(lines) + "\n"


TapeLike = Union[CatalyticTape, PackedRegisterFile]
