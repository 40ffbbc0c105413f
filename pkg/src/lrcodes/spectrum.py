"""Energy spectrum and minimal excitations of LR Hamiltonians.

Every stabilizer term contributes energy 1 when violated, so an eigenspace is
labelled by a syndrome (the set of violated terms) and its energy is the
syndrome weight. Syndromes are GF(2) vectors of length ``2|G|`` indexed like
the stabilizer rows (``X_g`` first, then ``Z_g``).

The achievable syndromes form the row space of ``M_G``: row ``(q, X)`` lists
the stabilizers with an X on qubit ``q``, which is exactly the syndrome of a
single Z error on ``q`` (and vice versa). Each achievable syndrome labels an
eigenspace of dimension ``2^(2|G|-k)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import f2
from .code import LRCode, assemble_MG, qubit_index, qubit_site
from .errors import SpecError
from .f2 import BitMatrix

DEFAULT_BFS_RADIUS = 6
DEFAULT_BFS_STATES = 2_000_000
DEFAULT_CERTIFY_BUDGET = 2_000_000


def syndrome_matrix(code: LRCode) -> BitMatrix:
    """``2|G| x 4|G|`` matrix ``L`` with ``L e`` the syndrome of error ``e``.

    Row ``j`` is stabilizer ``j`` with its X and Z halves swapped.
    """
    q = code.num_qubits
    dense = code.stabilizers.to_dense()
    return BitMatrix.from_dense(np.hstack([dense[:, q:], dense[:, :q]]))


@dataclass(frozen=True)
class SyndromeSpace:
    code: LRCode
    k: int
    dependency_basis: BitMatrix
    achievable_basis: BitMatrix
    witnesses: BitMatrix

    def is_achievable(self, syndrome: Sequence[int] | np.ndarray) -> bool:
        s = np.asarray(syndrome, dtype=np.uint8)
        if self.dependency_basis.rows == 0:
            return True
        return not self.dependency_basis.matvec(s).any()

    def witness(self, syndrome: Sequence[int] | np.ndarray) -> np.ndarray | None:
        """An error vector producing ``syndrome``, or None if it is not achievable."""
        return f2.solve(syndrome_matrix(self.code), syndrome)


def syndrome_space(code: LRCode) -> SyndromeSpace:
    M = assemble_MG(code)
    basis = f2.row_space_basis(M)
    deps = f2.nullspace(M)
    L = syndrome_matrix(code)
    witnesses = []
    for r in range(basis.rows):
        e = f2.solve(L, basis.to_dense_row(r))
        if e is None:
            # row space of M_G is the image of L by construction
            raise AssertionError("achievable basis vector without a witness")
        witnesses.append(e)
    wit = BitMatrix.from_dense(np.array(witnesses, dtype=np.uint8).reshape(-1, L.cols), cols=L.cols)
    return SyndromeSpace(code, basis.rows, deps, basis, wit)


# -- spectrum ---------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumEntry:
    energy: int
    syndrome_count: int
    log2_multiplier: int

    @property
    def dimension(self) -> int:
        return self.syndrome_count << self.log2_multiplier


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenspace dimensions by energy.

    The dimension at energy ``E`` is ``syndrome_count * 2**log2_multiplier``.
    In truncated mode only energies ``<= max_energy`` are listed and exact.
    """

    entries: list[SpectrumEntry]
    exact: bool
    group_order: int
    rank_k: int
    max_energy: int

    def dimension(self, energy: int) -> int:
        for e in self.entries:
            if e.energy == energy:
                return e.dimension
        return 0

    def total_dimension(self) -> int:
        return sum(e.dimension for e in self.entries)

    def as_rows(self) -> list[dict]:
        return [
            {
                "energy": e.energy,
                "syndrome_count": e.syndrome_count,
                "log2_eigenspace_dim": e.log2_multiplier,
                "eigenspace_dim": str(e.dimension),
            }
            for e in self.entries
        ]


def spectrum(
    code: LRCode,
    mode: str = "exact",
    max_energy: int | None = None,
    cap: int = f2.DEFAULT_ENUM_CAP,
) -> SpectrumTable:
    M = assemble_MG(code)
    basis = f2.row_space_basis(M)
    k = basis.rows
    n_terms = 2 * code.n
    if mode == "exact":
        dist = f2.weight_distribution(basis, "exact", cap=cap)
        top = n_terms
    elif mode == "truncated":
        if max_energy is None:
            raise SpecError("truncated spectrum needs max_energy")
        dist = f2.weight_distribution(basis, "truncated", max_weight=max_energy, cap=cap)
        top = min(max_energy, n_terms)
    else:
        raise SpecError(f"unknown spectrum mode {mode!r}")
    mult = n_terms - k
    entries = [SpectrumEntry(E, dist[E], mult) for E in range(top + 1)]
    return SpectrumTable(entries, mode == "exact", code.n, k, top)


def abelian_pair_spectrum(order: int, energy: int) -> int:
    """Closed-form eigenspace dimension for abelian ``S1={0,s}, S2={0,t}`` generating ``G``.

    ``order`` is ``|G|``. The formula is evaluated over the full range
    ``0 <= energy <= 2|G|``; it is nonzero beyond ``energy = |G|`` and only the
    full range sums to ``4^|G|``.
    """
    if energy % 2:
        return 0
    i = energy // 2
    return 4 * sum(math.comb(order, 2 * a) * math.comb(order, 2 * (i - a)) for a in range(i + 1))


# -- errors and excitations --------------------------------------------------------


@dataclass(frozen=True)
class ErrorEffect:
    syndrome: np.ndarray
    energy: int
    violated: list[str]


def error_vector(code: LRCode, error: Iterable[tuple]) -> np.ndarray:
    """Symplectic vector of a Pauli error given as ``(element, layer, pauli)`` triples.

    Elements may be indices or labels. Repeated sites compose.
    """
    q = code.num_qubits
    vec = np.zeros(2 * q, dtype=np.uint8)
    for item in error:
        try:
            element, layer, pauli = item
        except (TypeError, ValueError):
            raise SpecError(f"error entry {item!r} must be (site, layer, pauli)") from None
        g = code.group.parse(element)
        idx = qubit_index(code.group, g, str(layer))
        p = str(pauli).upper()
        if p not in ("X", "Y", "Z"):
            raise SpecError(f"unknown Pauli {pauli!r}")
        if p in ("X", "Y"):
            vec[idx] ^= 1
        if p in ("Z", "Y"):
            vec[q + idx] ^= 1
    return vec


def apply_error(code: LRCode, error: Iterable[tuple] | np.ndarray) -> ErrorEffect:
    if isinstance(error, np.ndarray):
        vec = error.astype(np.uint8)
    else:
        vec = error_vector(code, error)
    syn = syndrome_matrix(code).matvec(vec)
    violated = [code.stabilizer_label(j) for j in np.flatnonzero(syn)]
    return ErrorEffect(syn, int(syn.sum()), violated)


def describe_error(code: LRCode, vec: np.ndarray) -> list[tuple[str, str, str]]:
    """Inverse of :func:`error_vector`: list of ``(label, layer, pauli)``."""
    q = code.num_qubits
    out = []
    for i in range(q):
        x, z = int(vec[i]), int(vec[q + i])
        if not (x or z):
            continue
        g, layer = qubit_site(code.group, i)
        out.append((code.group.label(g), layer, "Y" if x and z else ("X" if x else "Z")))
    return out


@dataclass(frozen=True)
class Excitation:
    """Result of a minimal-excitation search.

    ``exact`` is set only when the energy is proven minimal; otherwise it is
    an upper bound. ``witness`` is an error achieving it when one is known.
    """

    energy: int | None
    exact: bool
    strategy: str
    witness: list[tuple[str, str, str]] | None = None
    notes: list[str] = field(default_factory=list)


def min_excitation_energy(
    code: LRCode,
    strategy: str = "syndrome-enum",
    cap: int = f2.DEFAULT_ENUM_CAP,
    max_radius: int = DEFAULT_BFS_RADIUS,
    max_states: int = DEFAULT_BFS_STATES,
) -> Excitation:
    if strategy == "syndrome-enum":
        basis = f2.row_space_basis(assemble_MG(code))
        if basis.rows <= cap:
            dist = f2.weight_distribution(basis, "exact", cap=cap)
            return Excitation(dist.min_nonzero_weight(), True, "syndrome-enum")
        ex = _error_bfs(code, max_radius, max_states)
        note = f"k={basis.rows} exceeds enumeration cap {cap}; fell back to error-bfs"
        return Excitation(ex.energy, ex.exact, ex.strategy, ex.witness, [note, *ex.notes])
    if strategy == "error-bfs":
        return _error_bfs(code, max_radius, max_states)
    raise SpecError(f"unknown strategy {strategy!r}")


def _error_bfs(code: LRCode, max_radius: int, max_states: int) -> Excitation:
    """Breadth-first search over syndromes reachable by adding single-qubit Paulis.

    Level ``r`` holds syndromes first reached by an error built from ``r``
    single-qubit terms. The minimum is exact when it is 1, when the search
    exhausts the achievable space, or when every lighter syndrome is shown
    unachievable against the dependency basis.
    """
    L = syndrome_matrix(code)
    q = code.num_qubits
    cols = L.to_dense().T  # column i: syndrome of the unit error e_i
    gens: list[tuple[int, int]] = []  # (syndrome bits, error bits)
    for i in range(q):
        sx = _bits_to_int(cols[i])
        sz = _bits_to_int(cols[q + i])
        gens.append((sx, 1 << i))
        gens.append((sz, 1 << (q + i)))
        gens.append((sx ^ sz, (1 << i) | (1 << (q + i))))
    gens = [g for g in gens if g[0]]
    seen: dict[int, int] = {0: 0}
    frontier = [0]
    best: tuple[int, int] | None = None
    notes: list[str] = []
    exact = False
    certified_for: int | None = None
    for radius in range(1, max_radius + 1):
        nxt = []
        for s in frontier:
            err = seen[s]
            for gs, ge in gens:
                t = s ^ gs
                if t in seen:
                    continue
                seen[t] = err ^ ge
                nxt.append(t)
                w = t.bit_count()
                if best is None or w < best[0]:
                    best = (w, t)
        frontier = nxt
        if not frontier:
            exact = True
            break
        if best is not None and best[0] == 1:
            exact = True
            break
        if best is not None and best[0] != certified_for:
            certified_for = best[0]
            if _certify_lower_bound(code, best[0]):
                exact = True
                notes.append(f"no achievable syndrome of weight < {best[0]}")
                break
        if len(seen) > max_states:
            notes.append(f"state budget {max_states} reached at radius {radius}")
            break
    if best is None:
        return Excitation(None, exact, "error-bfs", None, notes)
    if not exact:
        notes.append("upper bound only")
    energy, syn = best
    witness = describe_error(code, _int_to_bits(seen[syn], 2 * q))
    return Excitation(energy, exact, "error-bfs", witness, notes)


def _certify_lower_bound(code: LRCode, energy: int, budget: int = DEFAULT_CERTIFY_BUDGET) -> bool:
    """True if no nonzero syndrome of weight below ``energy`` is achievable.

    A syndrome is achievable iff it is orthogonal to every dependency, i.e.
    iff the XOR of the dependency-matrix columns at its support vanishes.
    """
    deps = f2.nullspace(assemble_MG(code))
    m = 2 * code.n
    if deps.rows == 0:
        return energy <= 1
    cols = [_bits_to_int(c) for c in deps.to_dense().T]
    if sum(math.comb(m, w) for w in range(1, energy)) > budget:
        return False
    for w in range(1, energy):
        for combo in itertools.combinations(cols, w):
            acc = 0
            for c in combo:
                acc ^= c
            if acc == 0:
                return False
    return True


def _bits_to_int(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes(), "little")


def _int_to_bits(value: int, length: int) -> np.ndarray:
    return np.array([(value >> i) & 1 for i in range(length)], dtype=np.uint8)
