import json

import pytest

import ktdeque


def test_cadeque_basic_ops():
    c = ktdeque.Cadeque().push(2).push(1).inject(3)
    assert c.to_list() == [1, 2, 3]
    assert len(c) == 3
    x, rest = c.pop()
    assert x == 1 and rest.to_list() == [2, 3]
    rest2, y = c.eject()
    assert y == 3 and rest2.to_list() == [1, 2]
    assert c.to_list() == [1, 2, 3]
    assert ktdeque.Cadeque().pop() is None
    assert c.validate() == []


def test_cadeque_concat_and_persistence():
    a = ktdeque.Cadeque.from_iterable(range(500))
    b = ktdeque.Cadeque.from_iterable(["x", ("t", 1), None])
    ab = a + b
    assert ab.to_list() == list(range(500)) + ["x", ("t", 1), None]
    assert ab.validate() == []
    assert len(a) == 500 and len(b) == 3
    big = ab
    for _ in range(6):
        big = ktdeque.Cadeque.concat(big, big)
    assert len(big) == 503 * 64
    assert big.validate() == []


def test_deque():
    d = ktdeque.Deque()
    for i in range(100):
        d = d.inject(i)
    assert list(d) == list(range(100))
    assert d.pop()[0] == 0
    assert d.eject()[1] == 99
    assert d.validate() == []


def test_redundant_binary_counter():
    n = ktdeque.RNumber.from_digits("011112")
    assert n.value == 94
    assert n.succ().digits() == "1111101"
    assert n.succ().succ().digits() == "0211101"
    z = ktdeque.RNumber()
    for _ in range(1000):
        z = z.succ()
    assert int(z) == 1000 and z.validate() == []
    with pytest.raises(ValueError):
        ktdeque.RNumber.from_digits("2")


def test_colors():
    assert [ktdeque.size_to_color(n) for n in (5, 6, 7, 8, 20)] == ["red", "orange", "yellow", "green", "green"]
    with pytest.raises(ValueError):
        ktdeque.size_to_color(4)


def test_fuzz_and_scenarios():
    s = ktdeque.gen_scenario(42, steps=100, concat_fraction=0.1)
    assert s == ktdeque.gen_scenario(42, steps=100, concat_fraction=0.1)
    assert sum(1 for op, *_ in s if op == "concat") == 14
    with pytest.raises(ValueError):
        ktdeque.gen_scenario(1, concat_fraction=2.0)
    rep = ktdeque.run_fuzz(seeds=20, steps=100)
    assert rep["rng"] == "splitmix64"
    assert rep["discrepancy_count"] == 0 and rep["validator_failures"] == 0
    assert set(rep["max_work_counters"]) == {"push", "pop", "inject", "eject", "concat"}
    json.dumps(rep)


def test_bench_helpers():
    assert [ktdeque.bin_of(n) for n in (0, 1, 2, 3, 2**19)] == [0, 1, 2, 2, 20]
    assert ktdeque.plan_operations(40, 50) == 2050
    csv = ktdeque.run_bench(max_log2=5, per_bin=3, replays=3, structures=["cadeque", "list"])
    lines = csv.splitlines()
    assert lines[0] == ktdeque.CSV_HEADER == "structure,op,bin,length,nanos_per_op,work_counter"
    assert len(lines) == 1 + 2 * (5 * 6 - 2)
