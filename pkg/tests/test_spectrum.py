import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcodes.code import build_code
from lrcodes.errors import CapExceededError, SpecError
from lrcodes.groups import AbelianGroup, DihedralGroup, make_group, subset
from lrcodes.spectrum import (
    abelian_pair_spectrum,
    apply_error,
    error_vector,
    describe_error,
    min_excitation_energy,
    spectrum,
    syndrome_matrix,
    syndrome_space,
)


def _code(spec, s1, s2):
    G = make_group(spec)
    return build_code(G, subset(G, s1), subset(G, s2))


def _brute_syndromes(code):
    """Every syndrome reached by some error, by enumerating all Pauli errors."""
    L = syndrome_matrix(code).to_dense().astype(np.int64)
    q = L.shape[1]
    out = set()
    for bits in itertools.product([0, 1], repeat=q):
        out.add(tuple((L @ np.array(bits)) % 2))
    return out


def test_small_cyclic_spectrum():
    table = spectrum(_code("cyclic:3", [0, 1], [0, 2]))
    assert [(e.energy, e.dimension) for e in table.entries if e.dimension] == [(0, 4), (2, 24), (4, 36)]
    assert table.total_dimension() == 4 ** 3
    assert table.dimension(1) == 0


def test_achievable_syndromes_brute_force():
    code = _code("cyclic:2", [0, 1], [0])
    space = syndrome_space(code)
    brute = _brute_syndromes(code)
    assert len(brute) == 2 ** space.k
    for s in itertools.product([0, 1], repeat=2 * code.n):
        assert space.is_achievable(s) == (s in brute)
        w = space.witness(s)
        assert (w is not None) == (s in brute)


@pytest.mark.parametrize("n,s,t", [(4, 1, 1), (6, 1, 2), (8, 3, 2), (12, 1, 5)])
def test_abelian_pair_spectrum_formula(n, s, t):
    table = spectrum(_code(f"cyclic:{n}", [0, s], [0, t]))
    for e in table.entries:
        assert e.dimension == abelian_pair_spectrum(n, e.energy)
    assert table.total_dimension() == 4 ** n


def test_truncated_spectrum_prefix():
    code = _code("abelian:2,4", ["(0,0)", "(1,0)"], ["(0,0)", "(0,1)"])
    full = spectrum(code)
    part = spectrum(code, "truncated", max_energy=4)
    assert not part.exact
    assert [e.dimension for e in part.entries] == [full.dimension(E) for E in range(5)]
    with pytest.raises(SpecError):
        spectrum(code, "truncated")
    with pytest.raises(SpecError):
        spectrum(code, "approximate")


def test_spectrum_cap():
    code = _code("cyclic:30", [0, 1], [0, 7])
    with pytest.raises(CapExceededError):
        spectrum(code, cap=10)


def test_dihedral_three_site_error():
    code = _code("dihedral:3", ["1", "r", "s"], ["1", "r2", "s"])
    effect = apply_error(code, [("sr", "+", "X"), ("sr", "-", "X"), ("sr2", "-", "X")])
    assert effect.energy == 1
    assert effect.violated == ["Z_r"]


def test_error_vector_roundtrip_and_composition():
    code = _code("dihedral:3", ["1", "r", "s"], ["1", "r2", "s"])
    v = error_vector(code, [("r", "+", "X"), ("r", "+", "Z"), ("s", "-", "Z")])
    assert describe_error(code, v) == [("r", "+", "Y"), ("s", "-", "Z")]
    # X twice on one site cancels
    assert not error_vector(code, [("r", "+", "X"), ("r", "+", "X")]).any()
    with pytest.raises(SpecError):
        error_vector(code, [("r", "+", "W")])
    with pytest.raises(SpecError):
        error_vector(code, [("r", "+")])


def test_min_excitation_examples():
    d3 = _code("dihedral:3", ["1", "r", "s"], ["1", "r2", "s"])
    z12 = _code("cyclic:12", [0, 1], [0, 5])
    for strategy in ("syndrome-enum", "error-bfs"):
        assert min_excitation_energy(d3, strategy).energy == 1
        ex = min_excitation_energy(z12, strategy)
        assert ex.energy == 2 and ex.exact


def test_bfs_witness_realizes_energy():
    code = _code("cyclic:10", [0, 3], [0, 4])
    ex = min_excitation_energy(code, "error-bfs")
    assert apply_error(code, ex.witness).energy == ex.energy


def test_enum_falls_back_past_cap():
    code = _code("cyclic:12", [0, 1], [0, 5])
    ex = min_excitation_energy(code, "syndrome-enum", cap=4)
    assert ex.strategy == "error-bfs"
    assert ex.energy == 2
    assert "fell back" in ex.notes[0]


def test_unknown_strategy():
    with pytest.raises(SpecError):
        min_excitation_energy(_code("cyclic:3", [0, 1], [0, 1]), "annealing")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_strategies_agree(data):
    if data.draw(st.booleans()):
        G = DihedralGroup(data.draw(st.integers(2, 6)))
    else:
        G = AbelianGroup([data.draw(st.integers(2, 12))])
    elems = st.lists(st.integers(0, G.order - 1), min_size=1, max_size=3, unique=True)
    code = build_code(G, subset(G, data.draw(elems)), subset(G, data.draw(elems)))
    a = min_excitation_energy(code, "syndrome-enum")
    b = min_excitation_energy(code, "error-bfs")
    assert b.exact
    assert a.energy == b.energy
