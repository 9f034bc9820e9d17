from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from catwalk.errors import ConfigError, InputError
from catwalk.tape import (
    CatalyticTape,
    PackedRegisterFile,
    PackedTape,
    allocate_tape,
    desanitize,
    pack,
    packed_update,
    sanitize_invalid,
    unpack_all,
    unpack_register,
    value_bits,
)


class TestPlainTape:
    def test_zero_allocation_and_bit_size(self):
        tape = allocate_tape(2, 3, 5)
        assert all(tape.get(b, r) == 0 for b in range(2) for r in range(3))
        assert tape.bit_size == 2 * 3 * 3  # ceil(log2 5) = 3

    def test_explicit_values(self):
        tape = allocate_tape(1, 1, 2, [1])
        assert tape.get(0, 0) == 1

    def test_nonprime_modulus_rejected(self):
        with pytest.raises(ConfigError):
            allocate_tape(1, 1, 4)

    def test_explicit_value_out_of_range_rejected(self):
        with pytest.raises(InputError):
            allocate_tape(1, 2, 3, [1, 3])

    def test_add_into_wraps(self):
        tape = allocate_tape(1, 1, 5, [1])
        tape.add_into(0, 0, 3, 1)
        assert tape.get(0, 0) == 4
        tape.add_into(0, 0, 3, 1)
        assert tape.get(0, 0) == 2

    def test_add_then_subtract_restores(self):
        tape = allocate_tape(1, 2, 7, [3, 5])
        tape.add_into(0, 1, 6, 1)
        tape.add_into(0, 1, 6, -1)
        assert tape.verify_restored().ok

    def test_divergence_report_names_first_register(self):
        tape = allocate_tape(2, 2, 5, 42)
        before = tape.get(1, 0)
        tape.add_into(1, 0, 2, 1)
        report = tape.verify_restored()
        assert not report
        assert report.divergence == (1, 0, before, (before + 2) % 5)
        assert "block 1 reg 0" in report.describe()

    def test_seeded_init_is_deterministic(self):
        a = allocate_tape(3, 4, 11, 9)
        b = allocate_tape(3, 4, 11, 9)
        assert a.snapshot() == b.snapshot()
        assert a.snapshot() != allocate_tape(3, 4, 11, 10).snapshot()

    def test_index_validation(self):
        tape = allocate_tape(1, 1, 3)
        with pytest.raises(InputError):
            tape.get(1, 0)
        with pytest.raises(InputError):
            tape.add_into(0, 1, 1, 1)
        with pytest.raises(InputError):
            tape.add_into(0, 0, 3, 1)
        with pytest.raises(InputError):
            tape.add_into(0, 0, 1, 2)

    def test_dump_format(self):
        tape = allocate_tape(2, 3, 5, [0, 1, 2, 3, 4, 0])
        lines = tape.dump().splitlines()
        assert lines[0] == "q=5 blocks=2 regs=3"
        assert lines[1] == "0 1 2"
        assert lines[2] == "3 4 0"


class TestPackedForm:
    def test_pack_examples(self):
        assert pack((3, 4), 5).x == 23
        assert pack((0, 0, 0), 7).x == 0
        assert pack((4, 4, 4), 5).x == 5**3 - 1

    def test_unpack_examples(self):
        p = PackedTape(q=5, m=2, x=23)
        assert unpack_register(p, 1) == 3
        assert unpack_register(p, 2) == 4
        with pytest.raises(InputError):
            unpack_register(p, 3)

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
    def test_pack_unpack_roundtrip(self, values):
        assert unpack_all(pack(values, 5)) == tuple(values)

    def test_update_carry_example(self):
        p = PackedTape(q=5, m=2, x=14)  # encodes (4, 2)
        packed_update(p, 1, 3, 1)
        assert p.x == 12
        assert unpack_all(p) == (2, 2)

    def test_update_identity(self):
        p = PackedTape(q=5, m=2, x=14)
        packed_update(p, 1, 0, 1)
        assert p.x == 14

    @given(
        st.tuples(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5)).flatmap(
            lambda qm: st.tuples(
                st.just(qm[0]),
                st.just(qm[1]),
                st.lists(
                    st.integers(0, qm[0] - 1), min_size=qm[1], max_size=qm[1]
                ),
                st.integers(1, qm[1]),
                st.integers(0, qm[0] - 1),
            )
        )
    )
    def test_update_then_inverse_update_restores(self, case):
        q, m, values, i, u = case
        p = pack(values, q)
        x0 = p.x
        packed_update(p, i, u, 1)
        packed_update(p, i, u, -1)
        assert p.x == x0

    def test_update_validates(self):
        p = PackedTape(q=5, m=2, x=14)
        with pytest.raises(InputError):
            packed_update(p, 0, 1, 1)
        with pytest.raises(InputError):
            packed_update(p, 1, 5, 1)

    def test_sanitize_example(self):
        p = PackedTape(q=3, m=2, x=12)  # q^m = 9, 4-bit raw space
        sanitize_invalid(p)
        assert p.x == 4 and p.msb_flipped
        desanitize(p)
        assert p.x == 12 and not p.msb_flipped

    def test_sanitize_valid_value_untouched(self):
        p = PackedTape(q=3, m=2, x=5)
        sanitize_invalid(p)
        assert p.x == 5 and not p.msb_flipped

    @pytest.mark.parametrize("q,m", [(3, 2), (5, 3), (7, 4)])
    def test_sanitize_roundtrip_exhaustive(self, q, m):
        width = (q**m - 1).bit_length()
        for x in range(1 << width):
            p = PackedTape(q=q, m=m, x=x)
            sanitize_invalid(p)
            assert p.x < q**m
            desanitize(p)
            assert p.x == x and not p.msb_flipped


@given(
    st.tuples(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 5)).flatmap(
        lambda qm: st.tuples(
            st.just(qm[0]),
            st.lists(st.integers(0, qm[0] - 1), min_size=qm[1], max_size=qm[1]),
            st.lists(
                st.tuples(
                    st.integers(1, qm[1]),
                    st.integers(0, qm[0] - 1),
                    st.sampled_from([1, -1]),
                ),
                max_size=25,
            ),
        )
    )
)
def test_packed_tracks_plain_semantics(case):
    q, init, updates = case
    p = pack(init, q)
    plain = list(init)
    for i, u, sign in updates:
        packed_update(p, i, u, sign)
        plain[i - 1] = (plain[i - 1] + sign * u) % q
        assert unpack_all(p) == tuple(plain)


class TestPackedRegisterFile:
    def test_seeded_blocks_verify_restored_untouched(self):
        rf = PackedRegisterFile(3, 4, 5, 77)
        assert rf.verify_restored().ok

    def test_update_and_undo_restores_raw_bits(self):
        rf = PackedRegisterFile(2, 3, 5, 123)
        rf.add_into(1, 2, 4, 1)
        assert not rf.verify_restored().ok
        rf.add_into(1, 2, 4, -1)
        assert rf.verify_restored().ok

    def test_matches_plain_backend_register_level(self):
        rng = random.Random(5)
        rf = PackedRegisterFile(2, 3, 7, 0)
        plain = CatalyticTape(2, 3, 7, 0)
        for _ in range(200):
            b, r = rng.randrange(2), rng.randrange(3)
            u, sign = rng.randrange(7), rng.choice([1, -1])
            rf.add_into(b, r, u, sign)
            plain.add_into(b, r, u, sign)
            assert rf.get(b, r) == plain.get(b, r)

    def test_bit_size_counts_raw_width(self):
        rf = PackedRegisterFile(4, 3, 5, 0)
        assert rf.capacity_bits == (5**3 - 1).bit_length()
        assert rf.bit_size == 4 * rf.capacity_bits
        assert rf.flag_bits == 4

    def test_release_desanitizes(self):
        rf = PackedRegisterFile(3, 2, 3, 999)
        rf.release()
        for b in range(3):
            assert rf._tapes[b].x == rf._initial_raw[b]

    def test_dump_shows_decoded_registers(self):
        rf = PackedRegisterFile(1, 2, 5, 0)
        rf.add_into(0, 1, 3, 1)
        assert rf.dump() == "q=5 blocks=1 regs=2\n0 3\n"

    def test_rejects_explicit_init(self):
        with pytest.raises(InputError):
            PackedRegisterFile(1, 2, 5, [1, 2])


def test_value_bits():
    assert value_bits(2) == 1
    assert value_bits(5) == 3
    assert value_bits(8) == 3
    assert value_bits(9) == 4
