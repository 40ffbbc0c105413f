import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lrcodes.errors import CapExceededError, SpecError
from lrcodes.groups import (
    AbelianGroup,
    DihedralGroup,
    TableGroup,
    coset_quotient,
    dihedral_word,
    double_cosets,
    invert_set,
    is_normal,
    load_table,
    make_group,
    normal_subgroups,
    subgroup_generated,
    subset,
    translate_set,
    write_table,
)


def test_cyclic_basics():
    G = make_group("cyclic:8")
    assert G.order == 8
    assert G.identity == 0
    assert G.mul(5, 6) == 3
    assert G.inv(3) == 5
    assert G.parse("-1") == 7


def test_abelian_mixed_radix_and_monomials():
    G = make_group("abelian:2,3")
    assert G.order == 6
    assert G.parse("(1,2)") == G.from_coords([1, 2])
    assert G.label(G.parse("(1,2)")) == "(1,2)"
    H = make_group("abelian:4,4,4")
    assert H.to_coords(H.parse("xy2z-1")) == (1, 2, 3)
    assert H.parse("1") == H.identity


def test_dihedral_labels_and_relations():
    G = make_group("dihedral:3")
    assert G.order == 6
    assert [G.label(x) for x in G.elements()] == ["1", "r", "r2", "s", "sr", "sr2"]
    r, s = G.parse("r"), G.parse("s")
    assert G.element_order(r) == 3
    assert G.element_order(s) == 2
    # s r s = r^-1
    assert G.mul(G.mul(s, r), s) == G.inv(r)
    assert G.parse("r s") == G.parse("sr2")
    assert dihedral_word("sr-1", None) == (1, -1)


def test_dihedral_matches_oracle_table():
    for n in range(1, 8):
        assert np.array_equal(DihedralGroup(n).table, np.array(oracles.dihedral_table(n)))


@pytest.mark.parametrize("spec", ["cyclic:0", "abelian:", "dihedral:0", "quaternion:8", "cyclic8"])
def test_bad_specs(spec):
    with pytest.raises(SpecError):
        make_group(spec)


def test_order_cap():
    with pytest.raises(CapExceededError):
        make_group("dihedral:100", max_order=64)


def test_table_rejects_non_group(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2\n0 1\n0 1\n")
    with pytest.raises(SpecError):
        load_table(p)
    # associative but no inverses: a semigroup
    with pytest.raises(SpecError):
        TableGroup([[0, 0], [0, 1]])


def test_table_roundtrip(tmp_path):
    G = DihedralGroup(4)
    write_table(G, tmp_path / "d4.txt")
    H = make_group(f"table:{tmp_path / 'd4.txt'}")
    assert np.array_equal(G.table, H.table)


def test_quaternion_table(table_dir):
    Q = make_group(f"table:{table_dir / 'q8.txt'}")
    assert not Q.is_abelian
    assert sorted(Q.element_order(g) for g in Q.elements()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert len(normal_subgroups(Q)) == 6


def test_subset_rejects_duplicates():
    G = make_group("cyclic:5")
    with pytest.raises(SpecError):
        subset(G, [0, 5])


def test_translate_and_invert():
    G = make_group("dihedral:4")
    S = subset(G, ["1", "r", "s"])
    r = G.parse("r")
    assert translate_set(S, r, "left").labels() == ["r", "r2", "sr3"]
    assert translate_set(S, r, "right").labels() == ["r", "r2", "sr"]
    assert invert_set(S).labels() == ["1", "r3", "s"]


def test_double_cosets_cyclic_example():
    # <6> g <4> in Z/12 is the subgroup <2> and its coset
    G = make_group("cyclic:12")
    classes = double_cosets(G, 6, 4)
    assert len(classes) == 2
    assert classes[0] == (0, 2, 4, 6, 8, 10)


@given(n=st.integers(2, 30), a=st.integers(1, 29), b=st.integers(1, 29))
def test_cyclic_double_cosets_are_gcd(n, a, b):
    import math

    a, b = a % n or 1, b % n or 1
    G = make_group(f"cyclic:{n}")
    assert len(double_cosets(G, a, b)) == math.gcd(a, b, n)


@settings(max_examples=40)
@given(n=st.integers(2, 9), t=st.integers(0, 17), s=st.integers(0, 17))
def test_double_cosets_dihedral_against_oracle(n, t, s):
    G = DihedralGroup(n)
    t, s = t % G.order, s % G.order
    classes = double_cosets(G, t, s)
    assert len(classes) == oracles.double_coset_count(oracles.dihedral_table(n), t, s)
    assert sorted(itertools.chain.from_iterable(classes)) == list(G.elements())


def test_normal_subgroups_dihedral():
    # D_4 has 6 normal subgroups, D_5 has 3
    assert len(normal_subgroups(DihedralGroup(4))) == 6
    assert len(normal_subgroups(DihedralGroup(5))) == 3
    G = DihedralGroup(3)
    rot = subgroup_generated(G, [G.parse("r")])
    assert is_normal(G, rot)
    assert not is_normal(G, subgroup_generated(G, [G.parse("s")]))


def test_coset_quotient_is_homomorphism():
    G = DihedralGroup(6)
    N = subgroup_generated(G, [G.parse("r3")])
    Q, proj = coset_quotient(G, N)
    assert Q.order == 6
    for a in G.elements():
        for b in G.elements():
            assert proj[G.mul(a, b)] == Q.mul(proj[a], proj[b])


def test_coset_quotient_rejects_non_normal():
    G = DihedralGroup(3)
    with pytest.raises(SpecError):
        coset_quotient(G, [0, G.parse("s")])


@settings(max_examples=30)
@given(moduli=st.lists(st.integers(1, 5), min_size=1, max_size=3), data=st.data())
def test_abelian_group_axioms(moduli, data):
    G = AbelianGroup(moduli)
    idx = st.integers(0, G.order - 1)
    a, b, c = data.draw(idx), data.draw(idx), data.draw(idx)
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, b) == G.mul(b, a)
    assert G.mul(a, G.inv(a)) == G.identity
    assert G.left_map(a)[b] == G.mul(a, b)
