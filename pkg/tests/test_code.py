import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lrcodes.code import (
    build_code,
    build_qudit_code,
    check_commutation,
    check_parity_identity,
    degeneracy,
    degeneracy_by_double_cosets,
    qubit_index,
    qudit_degeneracy,
    symplectic_pairings,
)
from lrcodes.errors import SpecError
from lrcodes.groups import AbelianGroup, DihedralGroup, make_group, subset


def _code(spec, s1, s2):
    G = make_group(spec)
    return build_code(G, subset(G, s1), subset(G, s2))


def test_stabilizers_match_oracle_dihedral():
    G = DihedralGroup(4)
    s1, s2 = ["1", "r", "s"], ["1", "r3", "sr"]
    code = build_code(G, subset(G, s1), subset(G, s2))
    ref = oracles.lr_stabilizer_rows(
        oracles.dihedral_table(4), [G.parse(x) for x in s1], [G.parse(x) for x in s2]
    )
    assert code.stabilizers.to_dense().tolist() == ref


def test_site_conventions():
    code = _code("dihedral:3", ["1", "r", "s"], ["1", "r2", "s"])
    G = code.group
    r = G.parse("r")
    # Z_r touches (r v, +) for v in S1 and (w^-1 r, -) for w in S2
    plus = {G.mul(r, v) for v in code.S1}
    minus = {G.mul(G.inv(w), r) for w in code.S2}
    assert code.z_support(r) == {(g, "+") for g in plus} | {(g, "-") for g in minus}
    assert code.stabilizer_label(0) == "X_1"
    assert code.stabilizer_label(G.order + r) == "Z_r"
    assert qubit_index(G, 2, "-") == G.order + 2
    with pytest.raises(SpecError):
        qubit_index(G, 0, "0")


def test_cyclic_gcd_example():
    assert degeneracy(_code("cyclic:8", [0, 1], [0, 3])).log2_degeneracy == 2
    rep = degeneracy(_code("cyclic:12", [0, 4], [0, 6]))
    assert rep.log2_degeneracy == 4
    assert rep.degeneracy_str == "2^4"
    assert rep.degeneracy == 16


@pytest.mark.parametrize(
    "n,s1,log2",
    [(7, [0, 1, 3], 6), (15, [0, 1, 3, 7], 14), (31, [0, 1, 3, 7, 15], 30)],
)
def test_fractal_cyclic_examples(n, s1, log2):
    s2 = sorted((-x) % n for x in s1)
    rep = degeneracy(_code(f"cyclic:{n}", s1, s2))
    assert rep.log2_degeneracy == log2
    assert rep.rank_k == 2 * n - log2


def test_dihedral_example_degeneracy():
    assert degeneracy(_code("dihedral:3", ["1", "r", "s"], ["1", "r2", "s"])).log2_degeneracy == 2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_degeneracy_against_oracle(data):
    kind = data.draw(st.sampled_from(["cyclic", "dihedral", "abelian"]))
    if kind == "cyclic":
        n = data.draw(st.integers(1, 14))
        G = AbelianGroup([n])
        table = oracles.cyclic_table(n)
    elif kind == "dihedral":
        n = data.draw(st.integers(1, 7))
        G = DihedralGroup(n)
        table = oracles.dihedral_table(n)
    else:
        mods = data.draw(st.lists(st.integers(2, 3), min_size=2, max_size=3))
        G = AbelianGroup(mods)
        table, _ = oracles.abelian_table(mods)
    elems = st.lists(st.integers(0, G.order - 1), min_size=1, max_size=min(4, G.order), unique=True)
    s1, s2 = data.draw(elems), data.draw(elems)
    code = build_code(G, subset(G, s1), subset(G, s2))
    assert degeneracy(code).log2_degeneracy == oracles.lr_log2_degeneracy(table, s1, s2)
    assert check_commutation(code)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 10), data=st.data())
def test_double_coset_path_matches_rank(n, data):
    G = DihedralGroup(n)
    s = data.draw(st.integers(1, G.order - 1))
    t = data.draw(st.integers(1, G.order - 1))
    code = build_code(G, subset(G, [0, s]), subset(G, [0, t]))
    assert degeneracy(code).log2_degeneracy == degeneracy_by_double_cosets(G, s, t)


def test_double_coset_rejects_identity():
    with pytest.raises(SpecError):
        degeneracy_by_double_cosets(make_group("cyclic:4"), 0, 1)


def test_parity_identity():
    code = _code("cyclic:6", [0, 1], [0, 2])
    assert check_parity_identity(code)
    with pytest.raises(SpecError):
        check_parity_identity(_code("cyclic:6", [0, 1, 2], [0, 2]))


def test_toric_code_stabilizer_weights():
    G = make_group("abelian:3,4")
    code = build_code(G, subset(G, ["(0,0)", "(1,0)"]), subset(G, ["(0,0)", "(0,-1)"]))
    assert set(code.stabilizers.row_weights().tolist()) == {4}
    assert degeneracy(code).log2_degeneracy == 2


def test_build_rejects_bad_subsets():
    G = make_group("cyclic:4")
    H = make_group("cyclic:5")
    with pytest.raises(SpecError):
        build_code(G, subset(G, []), subset(G, [0]))
    with pytest.raises(SpecError):
        build_code(G, subset(H, [0]), subset(G, [0]))


def test_qudit_code_commutes_and_matches_qubit_case():
    G = make_group("dihedral:3")
    S1, S2 = subset(G, ["1", "r", "s"]), subset(G, ["1", "r2", "s"])
    q2 = build_qudit_code(G, S1, S2, 2, {g: 1 for g in S1}, {g: 1 for g in S2})
    assert check_commutation(q2)
    assert qudit_degeneracy(q2) == degeneracy(build_code(G, S1, S2)).log2_degeneracy
    rng = random.Random(3)
    for d in (3, 5, 7):
        m1 = {g: rng.randint(1, d - 1) for g in S1}
        m2 = {g: rng.randint(1, d - 1) for g in S2}
        q = build_qudit_code(G, S1, S2, d, m1, m2)
        assert not symplectic_pairings(q).any()


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_qudit_degeneracy_against_minor_oracle(data):
    n = data.draw(st.integers(2, 4))
    d = data.draw(st.sampled_from([3, 5]))
    G = AbelianGroup([n])
    elems = st.lists(st.integers(0, n - 1), min_size=1, max_size=2, unique=True)
    S1, S2 = subset(G, data.draw(elems)), subset(G, data.draw(elems))
    m1 = {g: data.draw(st.integers(1, d - 1)) for g in S1}
    m2 = {g: data.draw(st.integers(1, d - 1)) for g in S2}
    q = build_qudit_code(G, S1, S2, d, m1, m2)
    expected = 2 * n - oracles.rank_mod_p_by_minors(q.stabilizers.tolist(), d)
    assert qudit_degeneracy(q) == expected


def test_qudit_validation():
    G = make_group("cyclic:3")
    S = subset(G, [0, 1])
    with pytest.raises(SpecError):
        build_qudit_code(G, S, S, 4, {0: 1, 1: 1}, {0: 1, 1: 1})
    with pytest.raises(SpecError):
        build_qudit_code(G, S, S, 3, {0: 1, 1: 3}, {0: 1, 1: 1})
    with pytest.raises(SpecError):
        build_qudit_code(G, S, S, 3, {0: 1}, {0: 1, 1: 1})


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 20), a=st.integers(1, 19), b=st.integers(1, 19))
def test_cyclic_gcd_law(n, a, b):
    a, b = a % n, b % n
    if a == 0 or b == 0:
        return
    code = _code(f"cyclic:{n}", [0, a], [0, b])
    assert degeneracy(code).log2_degeneracy == 2 * math.gcd(a, b, n)


def test_rank_even_on_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = int(rng.integers(2, 9))
        G = DihedralGroup(n)
        s1 = rng.choice(G.order, size=int(rng.integers(1, 4)), replace=False).tolist()
        s2 = rng.choice(G.order, size=int(rng.integers(1, 4)), replace=False).tolist()
        assert degeneracy(build_code(G, subset(G, s1), subset(G, s2))).rank_k % 2 == 0
