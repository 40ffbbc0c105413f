"""LR stabilizer codes on finite groups.

Each group element ``g`` carries two qubits, sites ``(g, +)`` and ``(g, -)``.
Site ``(g, +)`` has qubit index ``g`` and ``(g, -)`` has ``|G| + g``.
A Pauli operator is a GF(2) vector of length ``4|G|``: the X-part on the
``2|G|`` qubits followed by the Z-part.

For subsets ``S1``, ``S2`` the stabilizers are

* ``Z_g``: Z on ``(g v, +)`` for ``v`` in ``S1`` and on ``(w^-1 g, -)`` for ``w`` in ``S2``;
* ``X_g``: X on ``(w g, +)`` for ``w`` in ``S2`` and on ``(g v^-1, -)`` for ``v`` in ``S1``.

Stabilizers are stored as rows, ``X_g`` for ``g = 0..|G|-1`` first and then
``Z_g``; the matrix ``M_G`` is the transpose, so its columns are stabilizers
and its rows run over (site, +, X), (site, -, X), (site, +, Z), (site, -, Z).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import f2
from .errors import SpecError
from .f2 import BitMatrix, PrimeMatrix
from .groups import FiniteGroup, GroupSubset, double_cosets

PLUS, MINUS = "+", "-"


def qubit_index(group: FiniteGroup, g: int, layer: str) -> int:
    if layer == PLUS:
        return g
    if layer == MINUS:
        return group.order + g
    raise SpecError(f"layer must be '+' or '-', not {layer!r}")


def qubit_site(group: FiniteGroup, q: int) -> tuple[int, str]:
    n = group.order
    return (q, PLUS) if q < n else (q - n, MINUS)


def _layer_supports(G: FiniteGroup, S1: GroupSubset, S2: GroupSubset) -> dict[str, list[np.ndarray]]:
    """Per-stabilizer-type lists of index arrays; entry ``[g]`` of each array is one site."""
    inv = G.inverse_map
    return {
        "z_plus": [G.right_map(v) for v in S1],  # g v
        "z_minus": [G.left_map(int(inv[w])) for w in S2],  # w^-1 g
        "x_plus": [G.left_map(w) for w in S2],  # w g
        "x_minus": [G.right_map(int(inv[v])) for v in S1],  # g v^-1
    }


@dataclass(frozen=True)
class LRCode:
    group: FiniteGroup
    S1: GroupSubset
    S2: GroupSubset
    stabilizers: BitMatrix

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def num_qubits(self) -> int:
        return 2 * self.group.order

    @property
    def x_stabilizers(self) -> BitMatrix:
        return self.stabilizers.select_rows(slice(0, self.n))

    @property
    def z_stabilizers(self) -> BitMatrix:
        return self.stabilizers.select_rows(slice(self.n, 2 * self.n))

    def stabilizer_label(self, j: int) -> str:
        kind = "X" if j < self.n else "Z"
        return f"{kind}_{self.group.label(j % self.n)}"

    def support(self, j: int) -> list[tuple[int, str, str]]:
        """Sites ``(element, layer, pauli)`` acted on by stabilizer row ``j``."""
        out = []
        for c in self.stabilizers.row_support(j):
            pauli = "X" if c < self.num_qubits else "Z"
            g, layer = qubit_site(self.group, c % self.num_qubits)
            out.append((g, layer, pauli))
        return out

    def z_support(self, g: int) -> set[tuple[int, str]]:
        return {(h, layer) for h, layer, _ in self.support(self.n + g)}

    def x_support(self, g: int) -> set[tuple[int, str]]:
        return {(h, layer) for h, layer, _ in self.support(g)}


def build_code(G: FiniteGroup, S1: GroupSubset, S2: GroupSubset) -> LRCode:
    if len(S1) == 0 or len(S2) == 0:
        raise SpecError("S1 and S2 must be nonempty")
    if S1.parent != G or S2.parent != G:
        raise SpecError("subsets do not belong to the given group")
    n = G.order
    supp = _layer_supports(G, S1, S2)
    words = np.zeros((2 * n, f2._nwords(4 * n)), dtype=np.uint64)
    rows = np.arange(n)

    def put(row_offset: int, col_offset: int, targets: list[np.ndarray]) -> None:
        for t in targets:
            cols = col_offset + np.asarray(t, dtype=np.int64)
            np.bitwise_or.at(
                words,
                (row_offset + rows, cols // f2.WORD),
                np.left_shift(np.uint64(1), (cols % f2.WORD).astype(np.uint64)),
            )

    # X_g rows: X-part columns [0, 2n)
    put(0, 0, supp["x_plus"])
    put(0, n, supp["x_minus"])
    # Z_g rows: Z-part columns [2n, 4n)
    put(n, 2 * n, supp["z_plus"])
    put(n, 3 * n, supp["z_minus"])
    return LRCode(G, S1, S2, BitMatrix(words, 2 * n, 4 * n))


def assemble_MG(code: LRCode) -> BitMatrix:
    """The ``4|G| x 2|G|`` matrix whose columns are ``X_g`` then ``Z_g``."""
    return code.stabilizers.transpose()


@dataclass(frozen=True)
class DegeneracyReport:
    group_order: int
    rank_k: int
    log2_degeneracy: int

    @property
    def logical_qubits(self) -> int:
        return self.log2_degeneracy

    @property
    def degeneracy(self) -> int:
        return 1 << self.log2_degeneracy

    @property
    def degeneracy_str(self) -> str:
        return f"2^{self.log2_degeneracy}"

    def as_dict(self) -> dict:
        return {
            "group_order": self.group_order,
            "rank": self.rank_k,
            "log2_degeneracy": self.log2_degeneracy,
            "logical_qubits": self.logical_qubits,
            "degeneracy": self.degeneracy_str,
        }


def degeneracy(code: LRCode) -> DegeneracyReport:
    k = f2.rank(assemble_MG(code))
    return DegeneracyReport(code.n, k, 2 * code.n - k)


def degeneracy_by_double_cosets(G: FiniteGroup, s: int, t: int) -> int:
    """log2 degeneracy of ``S1 = {1, s}``, ``S2 = {1, t}`` from the double-coset count."""
    if s == G.identity or t == G.identity:
        raise SpecError("s and t must be nontrivial")
    return 2 * len(double_cosets(G, t, s))


def symplectic_pairings(code: "LRCode | QuditLRCode") -> np.ndarray:
    """Matrix of symplectic inner products between all stabilizer pairs."""
    if isinstance(code, QuditLRCode):
        d = code.d
        V = code.stabilizers.astype(np.int64)
        q = V.shape[1] // 2
        X, Z = V[:, :q], V[:, q:]
        return (X @ Z.T - Z @ X.T) % d
    dense = code.stabilizers.to_dense().astype(np.float64)
    q = dense.shape[1] // 2
    P = dense[:, :q] @ dense[:, q:].T
    return ((P + P.T) % 2).astype(np.int64)


def check_commutation(code: "LRCode | QuditLRCode") -> bool:
    return not symplectic_pairings(code).any()


def check_parity_identity(code: LRCode) -> bool:
    """Whether the products of all ``Z_g`` and of all ``X_g`` are the identity."""
    if len(code.S1) % 2 or len(code.S2) % 2:
        raise SpecError("parity identity needs |S1| and |S2| even")
    xs = np.bitwise_xor.reduce(code.x_stabilizers.words, axis=0)
    zs = np.bitwise_xor.reduce(code.z_stabilizers.words, axis=0)
    return not xs.any() and not zs.any()


# -- qudits ---------------------------------------------------------------------


@dataclass(frozen=True)
class QuditLRCode:
    """Prime-dimension generalization; stabilizer rows are vectors over GF(d).

    Rows ``0..|G|-1`` are ``B_g`` (X-type), rows ``|G|..2|G|-1`` are ``A_g``
    (Z-type), in the same layout as the qubit code.
    """

    group: FiniteGroup
    S1: GroupSubset
    S2: GroupSubset
    d: int
    m1: Mapping[int, int]
    m2: Mapping[int, int]
    stabilizers: np.ndarray

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def b_stabilizers(self) -> np.ndarray:
        return self.stabilizers[: self.n]

    @property
    def a_stabilizers(self) -> np.ndarray:
        return self.stabilizers[self.n:]


def build_qudit_code(
    G: FiniteGroup,
    S1: GroupSubset,
    S2: GroupSubset,
    d: int,
    m1: Mapping[int, int],
    m2: Mapping[int, int],
) -> QuditLRCode:
    if not f2.is_prime(d):
        raise SpecError(f"qudit dimension {d} is not prime")
    if len(S1) == 0 or len(S2) == 0:
        raise SpecError("S1 and S2 must be nonempty")
    for S, m, name in ((S1, m1, "m1"), (S2, m2, "m2")):
        if set(m) != set(S.members):
            raise SpecError(f"{name} must be defined exactly on its subset")
        bad = [v for v in m.values() if not 1 <= int(v) <= d - 1]
        if bad:
            raise SpecError(f"{name} values must lie in 1..{d - 1}; got {bad}")
    n = G.order
    inv = G.inverse_map
    vecs = np.zeros((2 * n, 4 * n), dtype=np.int64)
    g = np.arange(n)
    for v in S1:
        e = int(m1[v])
        np.add.at(vecs, (n + g, 2 * n + G.right_map(v)), e)  # A_g: (g v, +)
        np.add.at(vecs, (g, n + G.right_map(int(inv[v]))), -e)  # B_g: (g v^-1, -)
    for w in S2:
        e = int(m2[w])
        np.add.at(vecs, (n + g, 3 * n + G.left_map(int(inv[w]))), e)  # A_g: (w^-1 g, -)
        np.add.at(vecs, (g, G.left_map(w)), e)  # B_g: (w g, +)
    vecs %= d
    vecs.setflags(write=False)
    return QuditLRCode(G, S1, S2, d, dict(m1), dict(m2), vecs)


def qudit_degeneracy(code: QuditLRCode) -> int:
    """log_d of the ground-state degeneracy: ``2|G| - rank`` over GF(d)."""
    k = f2.rank_mod_p(PrimeMatrix(code.d, code.stabilizers.T))
    return 2 * code.n - k
