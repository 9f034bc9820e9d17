"""Exact graph-walk counting on a verified catalytic tape.

The counting engine runs reversible register programs over Z_q on a tape
whose arbitrary initial content is restored bit-for-bit, with workspace
and catalyst bits accounted exactly.  Per-prime residues are recombined
to exact counts, which also decides directed reachability.
"""

from .crt import (
    CrtWitness,
    RunStats,
    choose_moduli,
    count_walks_exact_catalytic,
    crt_reconstruct,
    decide_stcon,
)
from .engine import (
    FORWARD,
    INVERSE,
    ControlFrame,
    SpaceMeter,
    block_roles,
    blocks_needed,
    catalyst_bits,
    ceil_log2,
    frame_bits,
    run_base,
    run_program,
)
from .errors import (
    CatwalkError,
    ConfigError,
    GraphFormatError,
    InputError,
    InvariantViolation,
    MeterImbalanceError,
    RestorationError,
    SpaceFormulaError,
)
from .extract import RunConfig, allocate_tape_for, count_walks_mod
from .graph import DirectedGraph, parse_graph, random_digraph, serialize_graph
from .oracle import WalkTable, count_walks_exact, reachable, verify_concatenation, walk_table
from .primes import primes_stream
from .tape import (
    CatalyticTape,
    PackedRegisterFile,
    PackedTape,
    RestorationReport,
    allocate_tape,
    pack,
    packed_update,
    sanitize_invalid,
    unpack_register,
)
from .verify import CheckResult, run_verify_suite

__version__ = "0.1.0"

__all__ = [
    "CatalyticTape",
    "CatwalkError",
    "CheckResult",
    "ConfigError",
    "ControlFrame",
    "CrtWitness",
    "DirectedGraph",
    "FORWARD",
    "GraphFormatError",
    "INVERSE",
    "InputError",
    "InvariantViolation",
    "MeterImbalanceError",
    "PackedRegisterFile",
    "PackedTape",
    "RestorationError",
    "RestorationReport",
    "RunConfig",
    "RunStats",
    "SpaceFormulaError",
    "SpaceMeter",
    "WalkTable",
    "allocate_tape",
    "allocate_tape_for",
    "block_roles",
    "blocks_needed",
    "catalyst_bits",
    "ceil_log2",
    "choose_moduli",
    "count_walks_exact",
    "count_walks_exact_catalytic",
    "count_walks_mod",
    "crt_reconstruct",
    "decide_stcon",
    "frame_bits",
    "pack",
    "packed_update",
    "parse_graph",
    "primes_stream",
    "random_digraph",
    "reachable",
    "run_base",
    "run_program",
    "run_verify_suite",
    "sanitize_invalid",
    "serialize_graph",
    "unpack_register",
    "verify_concatenation",
    "walk_table",
    "__version__",
]
