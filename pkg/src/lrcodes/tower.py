"""Scans of LR-code invariants over finite quotients of a group family."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Hashable, Sequence

from .code import build_code, build_qudit_code, degeneracy, qudit_degeneracy
from .errors import LRCodesError, SpecError
from .groups import FiniteGroup, GroupSubset
from .quotients import Family, IntMatrix, QuotientMap, make_family
from .spectrum import min_excitation_energy

log = logging.getLogger(__name__)

CACHE_ENV = "LRCODES_CACHE_DIR"
MODES = ("chain", "all", "explicit")


def enumerate_sublattices(d: int, index: int) -> list[IntMatrix]:
    """Every index-``index`` sublattice of ``Z^d``, as canonical HNF row matrices.

    Upper triangular with positive diagonal whose product is ``index``; the
    entries above each diagonal entry range over ``[0, diagonal)``.
    """
    if d not in (1, 2, 3):
        raise SpecError(f"unsupported dimension {d}")
    if index < 1:
        raise SpecError("index must be positive")
    out = []
    for diag in _ordered_factorizations(index, d):
        # free entries: (i, j) with i < j, each ranging over range(diag[j])
        slots = [(i, j) for j in range(d) for i in range(j)]
        ranges = [range(diag[j]) for _, j in slots]
        for values in _product(ranges):
            H = [[0] * d for _ in range(d)]
            for i in range(d):
                H[i][i] = diag[i]
            for (i, j), v in zip(slots, values):
                H[i][j] = v
            out.append(tuple(tuple(r) for r in H))
    return out


def _ordered_factorizations(n: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(n,)]
    out = []
    for a in range(1, n + 1):
        if n % a == 0:
            out.extend((a, *rest) for rest in _ordered_factorizations(n // a, parts - 1))
    return out


def _product(ranges: Sequence[range]):
    if not ranges:
        yield ()
        return
    for v in ranges[0]:
        for rest in _product(ranges[1:]):
            yield (v, *rest)


# -- specs ------------------------------------------------------------------------


@dataclass
class TowerSpec:
    """A finite list of kernels of one family.

    In ``chain`` mode consecutive kernels must be nested (each contains the
    next). ``all`` mode lists every supported kernel up to ``max_index``.
    """

    family: Family
    nodes: list[Hashable]
    mode: str = "explicit"
    max_index: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise SpecError(f"tower mode must be one of {MODES}")

    @classmethod
    def build(cls, family: Family | str, mode: str = "explicit", nodes: Sequence[Any] = (),
              max_index: int | None = None) -> "TowerSpec":
        fam = make_family(family) if isinstance(family, str) else family
        if mode == "all":
            if max_index is None or max_index < 1:
                raise SpecError("mode 'all' needs a positive max_index")
            kernels = fam.kernels_up_to(max_index)
        else:
            kernels = [fam.parse_kernel(k) for k in nodes]
        spec = cls(fam, list(kernels), mode, max_index)
        if mode == "chain":
            verify_chain(spec)
        return spec

    def labels(self) -> list[str]:
        return [self.family.kernel_label(k) for k in self.nodes]


@dataclass(frozen=True)
class ChainReport:
    nested: bool
    indices: list[int]
    index_increasing: bool


def verify_chain(spec: TowerSpec) -> ChainReport:
    """Check that each kernel contains the next and report the index sequence.

    Strictly increasing indices are the computable stand-in for the chain's
    intersection shrinking towards the trivial group.
    """
    fam = spec.family
    for a, b in zip(spec.nodes, spec.nodes[1:]):
        if not fam.contains(a, b):
            raise SpecError(f"chain is not nested: {fam.kernel_label(b)} is not inside {fam.kernel_label(a)}")
    indices = [fam.kernel_index(k) for k in spec.nodes]
    increasing = all(x < y for x, y in zip(indices, indices[1:]))
    return ChainReport(True, indices, increasing)


# -- projection ---------------------------------------------------------------------


@dataclass
class Projection:
    qmap: QuotientMap
    S1: GroupSubset
    S2: GroupSubset
    warnings: list[str] = field(default_factory=list)

    @property
    def group(self) -> FiniteGroup:
        return self.qmap.target


def project_subsets(family: Family | str, S1: Sequence[Any], S2: Sequence[Any], kernel: Any) -> Projection:
    """Images of ``S1``, ``S2`` (family elements or labels) in the quotient by ``kernel``."""
    fam = make_family(family) if isinstance(family, str) else family
    qmap = fam.quotient(kernel)
    G = qmap.target
    warnings = []
    images = []
    for name, S in (("S1", S1), ("S2", S2)):
        elems = [fam.parse_element(x) for x in S]
        img = qmap.image(elems)
        if len(img) < len(set(elems)):
            warnings.append(f"{name} collapses from {len(set(elems))} to {len(img)} elements in {fam.kernel_label(qmap.fiber)}")
        images.append(GroupSubset(G, tuple(img)))
    return Projection(qmap, images[0], images[1], warnings)


# -- scans ------------------------------------------------------------------------------


@dataclass
class ScanOptions:
    min_excitation: bool = False
    threads: int = 1
    cache_dir: str | None = None
    timing: bool = False
    qudit: dict | None = None  # {"d": p, "m1": {label: exp}, "m2": {label: exp}}
    enum_cap: int = 24


@dataclass
class ScanRow:
    kernel: str
    index: int
    rank: int | None = None
    log2_degeneracy: int | None = None
    min_excitation: int | None = None
    seconds: float | None = None
    error: str | None = None
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


SCAN_COLUMNS = ["kernel", "index", "rank", "log2_degeneracy", "min_excitation", "seconds"]


def _cache_key(fam: Family, kernel: Hashable, S1, S2, options: ScanOptions) -> str:
    payload = json.dumps(
        [fam.spec, fam.kernel_label(kernel), [str(x) for x in S1], [str(x) for x in S2],
         options.qudit, options.min_excitation, options.enum_cap],
        sort_keys=True,
        default=str,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _scan_node(fam: Family, kernel: Hashable, S1, S2, options: ScanOptions) -> ScanRow:
    row = ScanRow(fam.kernel_label(kernel), fam.kernel_index(kernel))
    start = time.perf_counter()
    try:
        proj = project_subsets(fam, S1, S2, kernel)
        row.warnings = proj.warnings
        G = proj.group
        if options.qudit:
            d = int(options.qudit["d"])
            m1 = _project_exponents(fam, proj, options.qudit.get("m1"), S1, d)
            m2 = _project_exponents(fam, proj, options.qudit.get("m2"), S2, d)
            qcode = build_qudit_code(G, proj.S1, proj.S2, d, m1, m2)
            log_deg = qudit_degeneracy(qcode)
            row.rank = 2 * G.order - log_deg
            row.log2_degeneracy = log_deg
            if d != 2:
                row.warnings.append(f"log2_degeneracy column holds log_{d} of the degeneracy")
        else:
            code = build_code(G, proj.S1, proj.S2)
            rep = degeneracy(code)
            row.rank = rep.rank_k
            row.log2_degeneracy = rep.log2_degeneracy
            if options.min_excitation:
                ex = min_excitation_energy(code, cap=options.enum_cap)
                row.min_excitation = ex.energy
                if not ex.exact:
                    row.warnings.append("min_excitation is an upper bound")
    except LRCodesError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    row.seconds = round(time.perf_counter() - start, 6) if options.timing else None
    return row


def _project_exponents(fam: Family, proj: Projection, m: Any, S: Sequence[Any], d: int) -> dict[int, int]:
    """Push exponents forward to the quotient; collisions add mod ``d``."""
    if m is None:
        m = {x: 1 for x in S}
    if isinstance(m, (list, tuple)):
        m = dict(zip(S, m))
    out: dict[int, int] = {}
    for label, e in m.items():
        g = proj.qmap(fam.parse_element(label))
        out[g] = (out.get(g, 0) + int(e)) % d
    return out


def tower_scan(spec: TowerSpec, S1: Sequence[Any], S2: Sequence[Any], options: ScanOptions | None = None) -> list[ScanRow]:
    """One row per kernel, in spec order. Per-node failures are recorded, not raised."""
    options = options or ScanOptions()
    if not spec.nodes:
        raise SpecError("tower has no nodes")
    cache_dir = options.cache_dir or os.environ.get(CACHE_ENV)
    fam = spec.family
    keys = [_cache_key(fam, k, S1, S2, options) for k in spec.nodes]
    rows: list[ScanRow | None] = [None] * len(spec.nodes)
    if cache_dir:
        for i, key in enumerate(keys):
            path = Path(cache_dir) / f"{key}.json"
            if path.exists():
                rows[i] = ScanRow(**json.loads(path.read_text()))
                if not options.timing:
                    rows[i].seconds = None
    todo = [i for i, r in enumerate(rows) if r is None]

    def work(i: int) -> ScanRow:
        return _scan_node(fam, spec.nodes[i], S1, S2, options)

    if options.threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=options.threads) as pool:
            computed = list(pool.map(work, todo))
    else:
        computed = [work(i) for i in todo]
    # single writer: cache files are written here, after all workers finish
    for i, row in zip(todo, computed):
        rows[i] = row
        if cache_dir and row.error is None:
            Path(cache_dir).mkdir(parents=True, exist_ok=True)
            (Path(cache_dir) / f"{keys[i]}.json").write_text(json.dumps(row.as_dict(), sort_keys=True))
    return [r for r in rows if r is not None]


def composite_agrees(family: Family, big: Any, small: Any, elements: Sequence[Any]) -> bool:
    """Whether projecting to ``G_small`` then to ``G_big`` equals projecting straight to ``G_big``.

    Checked on ``elements`` of the source family. ``big`` must contain
    ``small``; the middle arrow is induced by lifting.
    """
    N, M = family.parse_kernel(big), family.parse_kernel(small)
    if not family.contains(N, M):
        raise SpecError("kernels are not nested")
    to_big = family.quotient(N)
    to_small = family.quotient(M)
    for x in elements:
        via = to_big(to_small.lift(to_small(x)))
        if via != to_big(x):
            return False
    return True
