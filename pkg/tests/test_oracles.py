"""Independent reference implementations and golden-trace plumbing."""

import functools
import itertools
import random

import pytest

from gca.oracles import (
    bit_reversed_indices,
    compare_golden,
    discover_output_permutation,
    load_golden,
    oracle_dft,
    oracle_fft_recurrence,
    oracle_is_bitonic,
    oracle_reduce,
    oracle_sort,
    oracle_scan,
    oracle_xor_linear_check,
    plain_xor_evolution,
    xor_evolution,
)


# ---------------------------------------------------------------------------
# folds and scans

def test_reduce_frozen_values():
    v = [5, 3, 8, 1, 4, 4, 2, 9]
    assert oracle_reduce(v, "sum") == 36
    assert oracle_reduce(v, "max") == 9
    assert oracle_reduce(v, "min") == 1
    assert oracle_reduce(v, "and") == 0
    assert oracle_reduce(v, "or") == 15
    assert oracle_reduce(v, "avg") == 4.5
    assert oracle_reduce([7], "and") == 7


def test_reduce_matches_functools():
    rng = random.Random(2)
    ops = {
        "sum": lambda a, b: a + b,
        "max": max,
        "min": min,
        "and": lambda a, b: a & b,
        "or": lambda a, b: a | b,
    }
    for _ in range(200):
        v = [rng.randint(0, 255) for _ in range(rng.randint(1, 20))]
        for name, fn in ops.items():
            assert oracle_reduce(v, name) == functools.reduce(fn, v)


def test_reduce_rejects():
    with pytest.raises(ValueError):
        oracle_reduce([], "sum")
    with pytest.raises(ValueError):
        oracle_reduce([1, 2], "median")


def test_scan_matches_accumulate():
    assert oracle_scan([3, 1, 4, 1, 5]) == [3, 4, 8, 9, 14]
    rng = random.Random(4)
    for _ in range(100):
        v = [rng.randint(-9, 9) for _ in range(rng.randint(1, 30))]
        assert oracle_scan(v) == list(itertools.accumulate(v))
    assert oracle_scan([]) == []


def test_sort():
    assert oracle_sort([3, 1, 2]) == [1, 2, 3]


# ---------------------------------------------------------------------------
# bitonic predicate

def test_is_bitonic_examples():
    assert oracle_is_bitonic([1, 3, 7, 6, 4, 2])
    assert oracle_is_bitonic([6, 4, 2, 1, 3, 7])  # rotation stays bitonic
    assert oracle_is_bitonic([5, 5, 5, 5])
    assert oracle_is_bitonic(list(range(8)))
    assert not oracle_is_bitonic([1, 5, 2, 6, 3, 7, 4, 8])


def test_is_bitonic_rotation_invariant():
    rng = random.Random(6)
    for _ in range(100):
        n = rng.randint(2, 12)
        up = sorted(rng.sample(range(100), n))
        cut = rng.randint(0, n)
        seq = up[:cut] + list(reversed(up[cut:]))
        for r in range(n):
            assert oracle_is_bitonic(seq[r:] + seq[:r])


# ---------------------------------------------------------------------------
# transforms

def test_dft_hand_values():
    out = oracle_dft([1, 0, 0, 0])
    assert all(abs(c - 1) < 1e-12 for c in out)
    out = oracle_dft([1, 1, 1, 1])
    assert abs(out[0] - 4) < 1e-12
    assert all(abs(c) < 1e-12 for c in out[1:])


def test_dft_parseval():
    rng = random.Random(8)
    x = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(16)]
    y = oracle_dft(x)
    assert abs(sum(abs(v) ** 2 for v in y) - 16 * sum(abs(v) ** 2 for v in x)) < 1e-9


def test_recurrence_is_dft_of_bit_reversed_input():
    rng = random.Random(9)
    for k in range(1, 6):
        n = 1 << k
        rev = bit_reversed_indices(k)
        for _ in range(10):
            x = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
            rec = oracle_fft_recurrence([x[r] for r in rev], k)
            dft = oracle_dft(x)
            assert all(abs(a - b) < 1e-9 for a, b in zip(rec, dft))


def test_recurrence_size_guard():
    with pytest.raises(ValueError):
        oracle_fft_recurrence([1, 2, 3], 2)


def test_bit_reversed_indices():
    assert bit_reversed_indices(0) == [0]
    assert bit_reversed_indices(1) == [0, 1]
    assert bit_reversed_indices(3) == [0, 4, 2, 6, 1, 5, 3, 7]
    for k in range(1, 8):
        rev = bit_reversed_indices(k)
        assert [rev[r] for r in rev] == list(range(1 << k))  # involution


def test_discover_permutation_identity():
    rng = random.Random(10)
    refs = [[complex(rng.uniform(-1, 1), 0) for _ in range(8)] for _ in range(6)]
    assert discover_output_permutation(refs, refs) == list(range(8))


def test_discover_permutation_shuffled():
    rng = random.Random(11)
    perm = list(range(8))
    rng.shuffle(perm)
    refs = [
        [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(8)]
        for _ in range(6)
    ]
    outs = [[None] * 8 for _ in refs]
    for r, ref in enumerate(refs):
        for key in range(8):
            outs[r][perm[key]] = ref[key]
    assert discover_output_permutation(outs, refs) == perm


def test_discover_permutation_none():
    refs = [[complex(v, 0) for v in (1, 2, 3, 4)], [complex(v, 0) for v in (5, 6, 7, 8)]]
    outs = [[complex(v, 0) for v in (1, 2, 3, 4)], [complex(v, 0) for v in (6, 5, 7, 8)]]
    assert discover_output_permutation(outs, refs) is None


# ---------------------------------------------------------------------------
# XOR evolvers

def blank(n):
    return [[0] * n for _ in range(n)]


def test_xor_evolution_single_seed():
    grid = blank(9)
    grid[4][4] = 1
    hist = xor_evolution(
        9, 9, grid, lambda t, x, y: ((0, -1), (1, 0), (0, 1), (-1, 0)), 1
    )
    lit = {(x, y) for y in range(9) for x in range(9) if hist[1][y][x]}
    assert lit == {(4, 3), (5, 4), (4, 5), (3, 4)}


def test_xor_evolution_is_linear():
    rng = random.Random(13)
    n = 16
    g1 = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
    g2 = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]

    def evolve(grid, steps):
        return xor_evolution(
            n, n, grid, lambda t, x, y: ((0, -3), (3, 0), (0, 3), (-3, 0)), steps
        )

    assert oracle_xor_linear_check(evolve, g1, g2, 8)
    with pytest.raises(ValueError):
        oracle_xor_linear_check(evolve, g1, g2, 8, data_independent=False)


def test_plain_evolution_equals_fixed_when_a_is_b():
    rng = random.Random(14)
    n = 12
    grid = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
    got = plain_xor_evolution(n, grid, 2, 2, 6)
    want = xor_evolution(
        n, n, grid, lambda t, x, y: ((0, -2), (2, 0), (0, 2), (-2, 0)), 6
    )
    assert got == want


def test_plain_evolution_state_dependent():
    n = 8
    grid = blank(n)
    grid[0][0] = 1
    hist = plain_xor_evolution(n, grid, 3, 1, 1)
    # the lone 1-cell reads at distance 1, everyone else at 3
    lit = {(x, y) for y in range(n) for x in range(n) if hist[1][y][x]}
    assert (3, 0) in lit and (0, 3) in lit  # zero-cells seeing the 1 at dist 3
    assert (1, 0) not in lit  # its dist-3 arms miss the seed


# ---------------------------------------------------------------------------
# golden traces

def test_load_golden_fields():
    g = load_golden("out-c-basic")
    assert g.name == "out-c-basic"
    assert g.source in ("paper-appendix", "paper-table", "derived-oracle")
    assert g.params["n"] == 31
    assert len(g.rows) == 6


def test_load_golden_unknown():
    with pytest.raises(FileNotFoundError):
        load_golden("no-such-trace")


def test_compare_golden_exact_and_diff():
    g = load_golden("jump1-n8")
    assert compare_golden(list(g.rows), g) is None
    mutated = list(g.rows)
    mutated[2] = mutated[2].replace("4", "5", 1)
    msg = compare_golden(mutated, g)
    assert msg is not None and "row 2" in msg


def test_compare_golden_row_count():
    g = load_golden("jump1-n8")
    msg = compare_golden(list(g.rows)[:-1], g)
    assert msg is not None and "row" in msg
