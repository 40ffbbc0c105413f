import math

import pytest

import oracles
from lrcodes.code import build_code, degeneracy
from lrcodes.errors import SpecError
from lrcodes.quotients import lattice_contains, make_family
from lrcodes.tower import (
    ScanOptions,
    TowerSpec,
    composite_agrees,
    enumerate_sublattices,
    project_subsets,
    tower_scan,
    verify_chain,
)

HAAH_S1 = ["1", "x", "y", "z"]
HAAH_S2 = ["1", "xy", "yz", "zx"]


def _points_mod_n(H, n):
    """Lattice points of ``H`` inside the box [0, n)^2."""
    return frozenset((a, b) for a in range(n) for b in range(n) if lattice_contains(H, (a, b)))


def test_enumerate_examples():
    assert enumerate_sublattices(1, 8) == [((8,),)]
    assert len(enumerate_sublattices(2, 2)) == 3
    assert len(enumerate_sublattices(2, 4)) == 7
    with pytest.raises(SpecError):
        enumerate_sublattices(4, 2)
    with pytest.raises(SpecError):
        enumerate_sublattices(2, 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_sublattices_match_subgroup_brute_force(n):
    found = {_points_mod_n(H, n) for H in enumerate_sublattices(2, n)}
    assert found == oracles.index_n_sublattices_z2(n)


@pytest.mark.parametrize("n", [1, 6, 12, 30])
def test_three_dim_counts(n):
    # number of index-n sublattices of Z^3 is sum over d | n of d * sigma(d)
    expected = sum(d * oracles.divisor_sum(d) for d in range(1, n + 1) if n % d == 0)
    Hs = enumerate_sublattices(3, n)
    assert len(Hs) == expected
    assert len(set(Hs)) == expected


def test_project_subsets_collapse():
    p = project_subsets("Z", [0, 3], [0, 1], 3)
    assert p.S1.members == (0,)
    assert p.warnings and "S1" in p.warnings[0]


def test_project_haah_sets_mod_two():
    p = project_subsets("Z^3", HAAH_S1, HAAH_S2, 2)
    assert p.group.order == 8
    assert len(p.S1) == 4 and len(p.S2) == 4
    assert p.warnings == []


def test_chain_verification():
    rep = verify_chain(TowerSpec.build("Z", "chain", [2, 4, 8]))
    assert rep.nested and rep.indices == [2, 4, 8] and rep.index_increasing
    with pytest.raises(SpecError):
        TowerSpec.build("Z", "chain", [2, 3])
    rep3 = verify_chain(TowerSpec.build("Z^3", "chain", [2, 4]))
    assert rep3.indices == [8, 64]


def test_all_mode_lists_every_kernel():
    spec = TowerSpec.build("Z^2", "all", max_index=6)
    assert len(spec.nodes) == sum(oracles.divisor_sum(n) for n in range(1, 7))
    with pytest.raises(SpecError):
        TowerSpec.build("Z^2", "all")
    with pytest.raises(SpecError):
        TowerSpec.build("Z", "sideways", [2])


def test_scan_cyclic_chain_gcd():
    a, b = 2, 3
    spec = TowerSpec.build("Z", "explicit", list(range(4, 21)))
    rows = tower_scan(spec, [0, a], [0, b], ScanOptions(timing=False))
    assert [r.log2_degeneracy for r in rows] == [2 * math.gcd(a, b, n) for n in range(4, 21)]
    rows = tower_scan(TowerSpec.build("Z", "explicit", range(3, 25)), [0, 4], [0, 6])
    for n, r in zip(range(3, 25), rows):
        if 4 % n and 6 % n:
            assert r.log2_degeneracy == 2 * math.gcd(4, 6, n)


def test_scan_row_matches_direct_code():
    spec = TowerSpec.build("Z^2", "explicit", [[[3, 1], [0, 4]]])
    (row,) = tower_scan(spec, ["(0,0)", "(1,0)"], ["(0,0)", "(0,1)"], ScanOptions(timing=False))
    p = project_subsets("Z^2", ["(0,0)", "(1,0)"], ["(0,0)", "(0,1)"], [[3, 1], [0, 4]])
    rep = degeneracy(build_code(p.group, p.S1, p.S2))
    assert (row.rank, row.log2_degeneracy) == (rep.rank_k, rep.log2_degeneracy)


def test_haah_scan_values():
    spec = TowerSpec.build("Z^3", "explicit", [2, 3, 4])
    rows = tower_scan(spec, HAAH_S1, HAAH_S2, ScanOptions(timing=False))
    assert [r.log2_degeneracy for r in rows] == [6, 2, 14]


def test_scan_threads_and_cache_are_deterministic(tmp_path):
    spec = TowerSpec.build("Z", "explicit", list(range(2, 15)))
    opts = ScanOptions(min_excitation=True, timing=False)
    serial = tower_scan(spec, [0, 1], [0, 3], opts)
    threaded = tower_scan(spec, [0, 1], [0, 3], ScanOptions(min_excitation=True, timing=False, threads=4))
    assert serial == threaded
    cached = ScanOptions(min_excitation=True, timing=False, cache_dir=str(tmp_path))
    first = tower_scan(spec, [0, 1], [0, 3], cached)
    assert len(list(tmp_path.iterdir())) == len(spec.nodes)
    second = tower_scan(spec, [0, 1], [0, 3], cached)
    assert first == second == serial


def test_per_node_failure_recorded():
    # a qudit exponent that cancels in the quotient makes that node invalid
    spec = TowerSpec.build("Z", "explicit", [2, 5])
    opts = ScanOptions(timing=False, qudit={"d": 3, "m1": [1, 2], "m2": [1, 1]})
    rows = tower_scan(spec, [0, 2], [0, 1], opts)
    assert rows[0].error is not None
    assert rows[1].error is None and rows[1].log2_degeneracy is not None


def test_empty_scan_rejected():
    with pytest.raises(SpecError):
        tower_scan(TowerSpec.build("Z", "explicit", []), [0], [0])


@pytest.mark.parametrize(
    "family,big,small",
    [
        ("Z", 3, 12),
        ("Z^2", [[2, 1], [0, 2]], [[4, 2], [0, 4]]),
        ("Z^2", 2, [[2, 0], [0, 6]]),
        ("Z^3", 2, 4),
        ("Z^3", [1, 2, 3], [2, 4, 9]),
    ],
)
def test_composite_quotient_maps(family, big, small):
    fam = make_family(family)
    d = fam.d
    pts = [tuple((7 * i + 3 * j) % 23 - 11 for j in range(d)) for i in range(40)]
    assert composite_agrees(fam, big, small, pts)


def test_composite_rejects_non_nested():
    with pytest.raises(SpecError):
        composite_agrees(make_family("Z"), 3, 4, [(1,)])
