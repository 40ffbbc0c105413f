"""Exact linear algebra over GF(2) on bit-packed rows, and over GF(p).

Rows of a :class:`BitMatrix` are packed little-endian into ``uint64`` words:
column ``j`` is bit ``j % 64`` of word ``j // 64``. Padding bits past the last
column are always zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, SpecError

WORD = 64
DEFAULT_ENUM_CAP = 24
# rows of the inner lookup table used by exact weight enumeration
_INNER_BITS = 16


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = dense != 0
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(rows, nw).astype(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8).reshape(rows, -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :cols]


class BitMatrix:
    """Immutable matrix over GF(2) with bit-packed rows."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (rows, _nwords(cols)):
            raise ValueError(f"storage shape {words.shape} does not match {rows}x{cols}")
        tail = cols % WORD
        if tail and rows and (words[:, -1] >> np.uint64(tail)).any():
            raise ValueError("padding bits beyond the last column must be zero")
        words = words.copy()
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words

    @classmethod
    def from_dense(cls, dense: np.ndarray | Sequence[Sequence[int]], cols: int | None = None) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.size == 0:
            ncols = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
            return cls.zeros(arr.shape[0] if arr.ndim == 2 else 0, ncols)
        arr = arr % 2
        return cls(_pack(arr), arr.shape[0], arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, _nwords(cols)), dtype=np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8), cols=n)

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], cols: int) -> "BitMatrix":
        """One row per support set (column indices); repeated indices cancel."""
        supports = [list(s) for s in supports]
        words = np.zeros((len(supports), _nwords(cols)), dtype=np.uint64)
        for r, supp in enumerate(supports):
            for c in supp:
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range")
                words[r, c // WORD] ^= np.uint64(1) << np.uint64(c % WORD)
        return cls(words, len(supports), cols)

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return _unpack(self.words, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(idx)
        return int((int(self.words[r, c // WORD]) >> (c % WORD)) & 1)

    def row(self, r: int) -> "BitMatrix":
        return BitMatrix(self.words[r:r + 1], 1, self.cols)

    def select_rows(self, idx: Sequence[int] | slice) -> "BitMatrix":
        w = self.words[idx]
        return BitMatrix(w, w.shape[0], self.cols)

    def row_support(self, r: int) -> list[int]:
        return np.flatnonzero(self.to_dense_row(r)).tolist()

    def to_dense_row(self, r: int) -> np.ndarray:
        return _unpack(self.words[r:r + 1], self.cols)[0]

    def row_as_int(self, r: int) -> int:
        return int.from_bytes(self.words[r].astype("<u8").tobytes(), "little")

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T, cols=self.rows)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0).astype(np.int64)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return BitMatrix.from_dense(np.hstack([self.to_dense(), other.to_dense()]))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        w = np.vstack([self.words, other.words])
        return BitMatrix(w, w.shape[0], self.cols)

    def matvec(self, x: Sequence[int] | np.ndarray) -> np.ndarray:
        """``M x`` over GF(2) for a 0/1 vector of length ``cols``."""
        xw = _pack(np.asarray(x, dtype=np.uint8).reshape(1, -1))[0]
        return (np.bitwise_count(self.words & xw).sum(axis=1) % 2).astype(np.uint8)

    def is_zero(self) -> bool:
        return not self.words.any()

    def dump(self) -> str:
        """Rows of ``0``/``1`` characters."""
        return "\n".join("".join(map(str, row)) for row in self.to_dense())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.shape == other.shape
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _bit(col: int) -> tuple[int, np.uint64]:
    return col // WORD, np.uint64(1) << np.uint64(col % WORD)


def rank(M: BitMatrix) -> int:
    """Rank over GF(2). Forward elimination on a private copy."""
    work = M.words.copy()
    r = 0
    for col in range(M.cols):
        if r == M.rows:
            break
        w, mask = _bit(col)
        hits = np.flatnonzero(work[r:, w] & mask)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        below = r + 1 + np.flatnonzero(work[r + 1:, w] & mask)
        if below.size:
            # columns left of `col` are already zero in rows >= r
            work[below, w:] ^= work[r, w:]
        r += 1
    return r


def rref(M: BitMatrix, pivot_cols: int | None = None) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are searched left to right among the first ``pivot_cols`` columns
    (all by default); remaining columns are carried along, which is how
    augmented systems are solved.
    """
    limit = M.cols if pivot_cols is None else pivot_cols
    work = M.words.copy()
    pivots: list[int] = []
    r = 0
    for col in range(limit):
        if r == M.rows:
            break
        w, mask = _bit(col)
        hits = np.flatnonzero(work[r:, w] & mask)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        others = np.flatnonzero(work[:, w] & mask)
        others = others[others != r]
        if others.size:
            work[others] ^= work[r]
        pivots.append(col)
        r += 1
    return BitMatrix(work, M.rows, M.cols), pivots


def nullspace(M: BitMatrix) -> BitMatrix:
    """Basis (as rows) of ``{x : M x = 0}``; ``cols - rank`` rows."""
    R, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    if not free:
        return BitMatrix.zeros(0, M.cols)
    dense = R.to_dense()[: len(pivots)]
    basis = np.zeros((len(free), M.cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            basis[i, p] = dense[r, f]
    return BitMatrix.from_dense(basis, cols=M.cols)


def solve(A: BitMatrix, b: Sequence[int] | np.ndarray) -> np.ndarray | None:
    """A 0/1 vector ``x`` with ``A x = b``, or ``None`` if the system is inconsistent."""
    b = np.asarray(b, dtype=np.uint8).reshape(-1, 1)
    if b.shape[0] != A.rows:
        raise ValueError("right-hand side has the wrong length")
    aug = BitMatrix.from_dense(np.hstack([A.to_dense(), b]))
    R, pivots = rref(aug, pivot_cols=A.cols)
    dense = R.to_dense()
    if dense[len(pivots):, A.cols].any():
        return None
    x = np.zeros(A.cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x[p] = dense[r, A.cols]
    return x


def row_space_basis(M: BitMatrix) -> BitMatrix:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    R, pivots = rref(M)
    return R.select_rows(slice(0, len(pivots)))


# -- weight enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class WeightDistribution:
    """Codeword counts by Hamming weight.

    ``exact_through`` is the largest weight whose count is guaranteed; it is
    the code length in exact mode.
    """

    counts: dict[int, int]
    exact: bool
    exact_through: int

    def __getitem__(self, w: int) -> int:
        return self.counts.get(w, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def min_nonzero_weight(self) -> int | None:
        weights = [w for w, c in self.counts.items() if w > 0 and c > 0 and w <= self.exact_through]
        return min(weights) if weights else None


def weight_distribution(
    basis: BitMatrix,
    mode: str = "exact",
    max_weight: int | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> WeightDistribution:
    """Weight distribution of the code spanned by ``basis`` (independent rows).

    ``mode='exact'`` enumerates all ``2**rows`` codewords and refuses bases
    longer than ``cap``. ``mode='truncated'`` reports exact counts for weights
    up to ``max_weight`` only: in reduced echelon form every codeword built
    from ``c`` basis rows has weight at least ``c``, so combinations of at most
    ``max_weight`` rows find every codeword that light.
    """
    if mode == "exact":
        if basis.rows > cap:
            raise CapExceededError(
                f"exact enumeration of 2^{basis.rows} codewords exceeds cap 2^{cap}"
            )
        return WeightDistribution(_enumerate_all(basis), True, basis.cols)
    if mode != "truncated":
        raise SpecError(f"unknown enumeration mode {mode!r}")
    if max_weight is None or max_weight < 0:
        raise SpecError("truncated mode needs a non-negative max_weight")
    combos = sum(math.comb(basis.rows, c) for c in range(min(max_weight, basis.rows) + 1))
    if combos > 1 << cap:
        raise CapExceededError(
            f"truncated enumeration needs {combos} combinations, more than cap 2^{cap}"
        )
    return WeightDistribution(_enumerate_light(basis, max_weight), False, max_weight)


def _enumerate_all(basis: BitMatrix) -> dict[int, int]:
    k, n = basis.rows, basis.cols
    if k == 0:
        return {0: 1}
    rows = basis.words
    inner = min(k, _INNER_BITS)
    table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for i in range(inner):
        table = np.vstack([table, table ^ rows[i]])
    hist = np.zeros(n + 1, dtype=np.int64)
    offset = np.zeros(rows.shape[1], dtype=np.uint64)
    outer = k - inner
    # Gray-code walk over the remaining rows
    for step in range(1 << outer):
        if step:
            flip = (step & -step).bit_length() - 1
            offset = offset ^ rows[inner + flip]
        weights = np.bitwise_count(table ^ offset).sum(axis=1)
        hist += np.bincount(weights, minlength=n + 1)
    return {w: int(c) for w, c in enumerate(hist) if c}


def _enumerate_light(basis: BitMatrix, max_weight: int) -> dict[int, int]:
    R, pivots = rref(basis)
    rows = [R.row_as_int(i) for i in range(len(pivots))]
    counts: dict[int, int] = {0: 1}
    for c in range(1, min(max_weight, len(rows)) + 1):
        for combo in itertools.combinations(rows, c):
            acc = 0
            for v in combo:
                acc ^= v
            w = acc.bit_count()
            if w <= max_weight:
                counts[w] = counts.get(w, 0) + 1
    return counts


# -- prime fields -------------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PrimeMatrix:
    """Dense matrix over GF(p) with entries in ``[0, p)``."""

    modulus: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise SpecError(f"modulus {self.modulus} is not prime")
        arr = np.asarray(self.entries, dtype=np.int64) % self.modulus
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def rank_mod_p(M: PrimeMatrix) -> int:
    p = M.modulus
    work = M.entries.copy()
    rows, cols = work.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(work[r:, c])
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        work[r] = (work[r] * pow(int(work[r, c]), -1, p)) % p
        below = r + 1 + np.flatnonzero(work[r + 1:, c])
        if below.size:
            work[below] = (work[below] - np.outer(work[below, c], work[r])) % p
        r += 1
    return r
