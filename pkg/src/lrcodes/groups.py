"""Finite groups with integer-indexed elements.

Canonical element indexing, per family:

* ``cyclic:n`` -- residues ``0..n-1``; element ``i`` has index ``i``.
* ``abelian:n1,...,nd`` -- coordinate tuples ``(c1, ..., cd)`` with
  ``0 <= ci < ni``, indexed in mixed radix with the first coordinate most
  significant (``numpy.ravel_multi_index`` order).
* ``dihedral:n`` -- words ``s^a r^b`` with ``a in {0, 1}``, ``0 <= b < n``,
  indexed as ``a*n + b``. Labels are ``1, r, r2, ..., s, sr, sr2, ...``.
* ``table:<path>`` -- indices as given in the file.

Abelian groups compute products from coordinates and never build a
multiplication table, so they are not bound by the table cap.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, SpecError

DEFAULT_MAX_ORDER = 4096
ABELIAN_MAX_ORDER = 1 << 22
# exhaustive associativity check up to this order, random triples above it
ASSOCIATIVITY_EXHAUSTIVE_CAP = 128
ASSOCIATIVITY_SAMPLES = 20000


class FiniteGroup:
    """A finite group on the element indices ``0..order-1``.

    Subclasses provide ``mul`` and ``inv`` plus the vectorised translation maps
    used when building codes.
    """

    order: int
    identity: int
    family: str

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def left_map(self, h: int) -> np.ndarray:
        """Array whose entry ``g`` is ``h*g``."""
        return np.array([self.mul(h, g) for g in range(self.order)], dtype=np.int64)

    def right_map(self, h: int) -> np.ndarray:
        """Array whose entry ``g`` is ``g*h``."""
        return np.array([self.mul(g, h) for g in range(self.order)], dtype=np.int64)

    def label(self, a: int) -> str:
        return str(a)

    def parse(self, label: str | int) -> int:
        """Element index from a canonical label."""
        try:
            idx = int(label)
        except (TypeError, ValueError):
            raise SpecError(f"cannot parse element {label!r} of {self.family}") from None
        self._check(idx)
        return idx

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def is_abelian(self) -> bool:
        table = self.table
        return bool(np.array_equal(table, table.T))

    @cached_property
    def table(self) -> np.ndarray:
        rows = [self.left_map(h) for h in range(self.order)]
        out = np.stack(rows) if rows else np.zeros((0, 0), dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def inverse_map(self) -> np.ndarray:
        out = np.array([self.inv(g) for g in range(self.order)], dtype=np.int64)
        out.setflags(write=False)
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def _check(self, a: int) -> None:
        if not 0 <= a < self.order:
            raise SpecError(f"element index {a} out of range for {self.family}")

    # identity of groups is by family and structure, not by object
    @property
    def key(self) -> tuple:
        return (self.family,)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.family} order={self.order}>"


class AbelianGroup(FiniteGroup):
    """Product of cyclic groups, written additively."""

    def __init__(self, moduli: Sequence[int], family: str | None = None):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise SpecError(f"invalid cyclic factors {moduli}")
        self.moduli = moduli
        self.order = int(np.prod(moduli, dtype=object))
        if self.order > ABELIAN_MAX_ORDER:
            raise CapExceededError(f"abelian group order {self.order} exceeds cap {ABELIAN_MAX_ORDER}")
        self.identity = 0
        if family is None:
            if len(moduli) == 1:
                family = f"cyclic:{moduli[0]}"
            else:
                family = "abelian:" + ",".join(map(str, moduli))
        self.family = family

    @property
    def key(self) -> tuple:
        return ("abelian", self.moduli)

    @cached_property
    def coords(self) -> np.ndarray:
        """``(order, d)`` array of coordinates of every element."""
        grids = np.unravel_index(np.arange(self.order), self.moduli)
        out = np.stack(grids, axis=1).astype(np.int64)
        out.setflags(write=False)
        return out

    def to_coords(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(a, self.moduli))

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.moduli):
            raise SpecError(f"expected {len(self.moduli)} coordinates, got {len(coords)}")
        reduced = [int(c) % m for c, m in zip(coords, self.moduli)]
        return int(np.ravel_multi_index(reduced, self.moduli))

    def _index_of(self, coords: np.ndarray) -> np.ndarray:
        return np.ravel_multi_index(tuple((coords % self.moduli).T), self.moduli).astype(np.int64)

    def mul(self, a: int, b: int) -> int:
        ca, cb = self.to_coords(a), self.to_coords(b)
        return self.from_coords([x + y for x, y in zip(ca, cb)])

    def inv(self, a: int) -> int:
        return self.from_coords([-x for x in self.to_coords(a)])

    def left_map(self, h: int) -> np.ndarray:
        return self._index_of(self.coords + np.array(self.to_coords(h)))

    right_map = left_map

    @cached_property
    def inverse_map(self) -> np.ndarray:
        out = self._index_of(-self.coords)
        out.setflags(write=False)
        return out

    @property
    def is_abelian(self) -> bool:
        return True

    def label(self, a: int) -> str:
        if len(self.moduli) == 1:
            return str(a)
        return "(" + ",".join(map(str, self.to_coords(a))) + ")"

    def parse(self, label: str | int | Sequence[int]) -> int:
        if isinstance(label, (list, tuple)):
            return self.from_coords([int(x) for x in label])
        if isinstance(label, (int, np.integer)):
            if len(self.moduli) == 1:
                return int(label) % self.moduli[0]
            # plain integers are element indices
            self._check(int(label))
            return int(label)
        text = str(label).strip()
        if len(self.moduli) == 1 and re.fullmatch(r"-?\d+", text):
            return int(text) % self.moduli[0]
        if text.startswith("(") and text.endswith(")"):
            parts = [p for p in text[1:-1].split(",") if p.strip()]
            try:
                return self.from_coords([int(p) for p in parts])
            except ValueError:
                raise SpecError(f"bad coordinate tuple {label!r}") from None
        return self.from_coords(parse_monomial(text, len(self.moduli)))


_MONOMIAL_VARS = "xyzw"


def parse_monomial(text: str, rank: int) -> list[int]:
    """Exponent vector of a word like ``1``, ``x``, ``xy``, ``x2z-1``."""
    if text in ("1", "e", "0"):
        return [0] * rank
    exps = [0] * rank
    pos = 0
    for m in re.finditer(r"([a-z])(-?\d+)?", text):
        if m.start() != pos:
            break
        var = m.group(1)
        i = _MONOMIAL_VARS.find(var)
        if i < 0 or i >= rank:
            raise SpecError(f"unknown generator {var!r} in {text!r}")
        exps[i] += int(m.group(2)) if m.group(2) else 1
        pos = m.end()
    if pos != len(text) or not text:
        raise SpecError(f"cannot parse element {text!r}")
    return exps


class TableGroup(FiniteGroup):
    """Group given by an explicit multiplication table."""

    def __init__(
        self,
        table: np.ndarray | Sequence[Sequence[int]],
        family: str = "table",
        labels: Sequence[str] | None = None,
        validate: bool = True,
        max_order: int = DEFAULT_MAX_ORDER,
    ):
        tab = np.asarray(table, dtype=np.int64)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1] or tab.shape[0] == 0:
            raise SpecError("multiplication table must be a non-empty square array")
        if tab.shape[0] > max_order:
            raise CapExceededError(f"group order {tab.shape[0]} exceeds cap {max_order}")
        tab = tab.copy()
        tab.setflags(write=False)
        self.order = tab.shape[0]
        self.family = family
        self._labels = list(labels) if labels is not None else None
        if self._labels is not None and len(self._labels) != self.order:
            raise SpecError("label count does not match group order")
        self.__dict__["table"] = tab
        if validate:
            self.identity = _validate_table(tab)
        else:
            self.identity = int(np.flatnonzero((tab == np.arange(self.order)).all(axis=1))[0])
        inv = np.argmax(tab == self.identity, axis=1).astype(np.int64)
        inv.setflags(write=False)
        self.__dict__["inverse_map"] = inv
        self._digest = hashlib.sha1(tab.tobytes()).hexdigest()

    @property
    def key(self) -> tuple:
        return ("table", self.order, self._digest)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse_map[a])

    def left_map(self, h: int) -> np.ndarray:
        return self.table[h, :]

    def right_map(self, h: int) -> np.ndarray:
        return self.table[:, h]

    def label(self, a: int) -> str:
        if self._labels is not None:
            return self._labels[a]
        return str(a)

    def parse(self, label: str | int) -> int:
        if self._labels is not None and isinstance(label, str) and label in self._labels:
            return self._labels.index(label)
        return super().parse(label)


def _validate_table(tab: np.ndarray) -> int:
    n = tab.shape[0]
    if tab.min() < 0 or tab.max() >= n:
        raise SpecError("table entries out of range")
    ident = np.flatnonzero((tab == np.arange(n)).all(axis=1) & (tab.T == np.arange(n)).all(axis=1))
    if ident.size != 1:
        raise SpecError("table has no two-sided identity")
    e = int(ident[0])
    # every row must be a permutation (Latin square) for inverses to exist
    if not (np.sort(tab, axis=1) == np.arange(n)).all():
        raise SpecError("table is not a group: some element has no inverse")
    if not ((tab == e).sum(axis=0) == 1).all():
        raise SpecError("table is not a group: some element has no inverse")
    inv = np.argmax(tab == e, axis=1)
    if not (tab[inv, np.arange(n)] == e).all():
        raise SpecError("table is not a group: left and right inverses differ")
    if n <= ASSOCIATIVITY_EXHAUSTIVE_CAP:
        ab_c = tab[tab[:, :, None], np.arange(n)[None, None, :]]
        a_bc = tab[np.arange(n)[:, None, None], tab[None, :, :]]
        ok = np.array_equal(ab_c, a_bc)
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, ASSOCIATIVITY_SAMPLES))
        ok = np.array_equal(tab[tab[a, b], c], tab[a, tab[b, c]])
    if not ok:
        raise SpecError("table is not a group: multiplication is not associative")
    return e


class DihedralGroup(TableGroup):
    """Dihedral group of order ``2n``, elements ``s^a r^b``."""

    def __init__(self, n: int, max_order: int = DEFAULT_MAX_ORDER):
        if n < 1:
            raise SpecError(f"dihedral:{n} needs n >= 1")
        if 2 * n > max_order:
            raise CapExceededError(f"group order {2 * n} exceeds cap {max_order}")
        self.n = n
        a = np.arange(2 * n) // n
        b = np.arange(2 * n) % n
        # (s^a r^b)(s^c r^d) = s^(a+c) r^((-1)^c b + d)
        sign = np.where(a == 1, -1, 1)
        prod_a = (a[:, None] + a[None, :]) % 2
        prod_b = (sign[None, :] * b[:, None] + b[None, :]) % n
        table = prod_a * n + prod_b
        labels = [_dihedral_label(x, n) for x in range(2 * n)]
        super().__init__(table, family=f"dihedral:{n}", labels=labels, validate=False)

    @property
    def key(self) -> tuple:
        return ("dihedral", self.n)

    def parse(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            return super().parse(label)
        return dihedral_word(str(label), self.n)


def _dihedral_label(x: int, n: int) -> str:
    a, b = divmod(x, n)
    if a == 0:
        return "1" if b == 0 else ("r" if b == 1 else f"r{b}")
    return "s" if b == 0 else ("sr" if b == 1 else f"sr{b}")


def dihedral_word(text: str, n: int | None) -> int | tuple[int, int]:
    """Evaluate a word in ``r`` and ``s`` (e.g. ``sr2``, ``r^-1 s``, ``1``).

    Returns the index in ``D_n``, or the pair ``(a, b)`` meaning ``s^a r^b`` in
    the infinite dihedral group when ``n`` is None.
    """
    word = text.replace("^", "").replace("*", "").replace(" ", "")
    if word in ("1", "e", ""):
        a, b = 0, 0
    else:
        a, b = 0, 0
        pos = 0
        for m in re.finditer(r"([rs])(-?\d+)?", word):
            if m.start() != pos:
                break
            k = int(m.group(2)) if m.group(2) else 1
            if m.group(1) == "r":
                b += k
            elif k % 2:
                # s^a r^b s = s^(a+1) r^(-b)
                a, b = (a + 1) % 2, -b
            pos = m.end()
        if pos != len(word):
            raise SpecError(f"cannot parse dihedral element {text!r}")
    if n is None:
        return a, b
    return a * n + b % n


def make_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build a group from ``cyclic:n``, ``abelian:n1,...``, ``dihedral:n`` or ``table:path``."""
    if not isinstance(spec, str) or ":" not in spec:
        raise SpecError(f"malformed group spec {spec!r}")
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    arg = arg.strip()
    if kind == "table":
        return load_table(arg, max_order=max_order)
    try:
        nums = [int(x) for x in arg.split(",")]
    except ValueError:
        raise SpecError(f"malformed group spec {spec!r}") from None
    if kind == "cyclic":
        if len(nums) != 1:
            raise SpecError(f"malformed group spec {spec!r}")
        return AbelianGroup(nums)
    if kind == "abelian":
        return AbelianGroup(nums)
    if kind == "dihedral":
        if len(nums) != 1:
            raise SpecError(f"malformed group spec {spec!r}")
        return DihedralGroup(nums[0], max_order=max_order)
    raise SpecError(f"unknown group family {kind!r}")


def load_table(path: str | Path, max_order: int = DEFAULT_MAX_ORDER) -> TableGroup:
    """Read a table file: first line the order, then ``order`` rows of indices."""
    try:
        tokens = Path(path).read_text().split()
    except OSError as exc:
        raise SpecError(f"cannot read group table {path}: {exc}") from None
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise SpecError(f"group table {path} contains non-integer entries") from None
    if not values:
        raise SpecError(f"group table {path} is empty")
    n = values[0]
    if n < 1:
        raise SpecError(f"group table {path}: bad order {n}")
    if n > max_order:
        raise CapExceededError(f"group order {n} exceeds cap {max_order}")
    if len(values) != 1 + n * n:
        raise SpecError(f"group table {path}: expected {n * n} entries, got {len(values) - 1}")
    table = np.array(values[1:], dtype=np.int64).reshape(n, n)
    return TableGroup(table, family="table", max_order=max_order)


def write_table(group: FiniteGroup, path: str | Path) -> None:
    lines = [str(group.order)]
    lines += [" ".join(map(str, row)) for row in group.table]
    Path(path).write_text("\n".join(lines) + "\n")


# -- subsets ---------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSubset:
    """A set of elements of ``parent``, stored sorted."""

    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(int(m) for m in self.members)
        if len(set(members)) != len(members):
            raise SpecError(f"duplicate elements in subset {list(members)}")
        for m in members:
            self.parent._check(m)
        object.__setattr__(self, "members", tuple(sorted(members)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    def labels(self) -> list[str]:
        return [self.parent.label(m) for m in self.members]


def subset(group: FiniteGroup, elements: Iterable[int | str]) -> GroupSubset:
    """Build a subset from indices or labels; duplicates are an error."""
    return GroupSubset(group, tuple(group.parse(e) for e in elements))


def _same_parent(S: GroupSubset, group: FiniteGroup) -> None:
    if S.parent != group:
        raise SpecError("subset and element belong to different groups")


def translate_set(S: GroupSubset, g: int, side: str = "left") -> GroupSubset:
    """``gS`` for ``side='left'``, ``Sg`` for ``side='right'``."""
    G = S.parent
    G._check(g)
    if side == "left":
        members = [G.mul(g, h) for h in S]
    elif side == "right":
        members = [G.mul(h, g) for h in S]
    else:
        raise SpecError(f"side must be 'left' or 'right', not {side!r}")
    return GroupSubset(G, tuple(members))


def invert_set(S: GroupSubset) -> GroupSubset:
    return GroupSubset(S.parent, tuple(S.parent.inv(h) for h in S))


def double_cosets(G: FiniteGroup, t: int, s: int) -> list[tuple[int, ...]]:
    """Partition of ``G`` into double cosets ``<t> g <s>``, ordered by least element."""
    G._check(t)
    G._check(s)
    left = G.left_map(t)
    right = G.right_map(s)
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        seen[g] = True
        members = [g]
        stack = [g]
        while stack:
            x = stack.pop()
            for y in (int(left[x]), int(right[x])):
                if not seen[y]:
                    seen[y] = True
                    members.append(y)
                    stack.append(y)
        classes.append(tuple(sorted(members)))
    return classes


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> GroupSubset:
    gens = [int(g) for g in gens]
    if not gens:
        raise SpecError("subgroup_generated needs at least one generator")
    for g in gens:
        G._check(g)
    maps = [G.right_map(g) for g in gens]
    seen = {G.identity}
    frontier = [G.identity]
    # finite group: closure under right multiplication by gens is a subgroup
    while frontier:
        nxt = []
        for x in frontier:
            for m in maps:
                y = int(m[x])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return GroupSubset(G, tuple(seen))


def is_normal(G: FiniteGroup, members: Iterable[int]) -> bool:
    """Whether ``members`` is a normal subgroup of ``G``."""
    H = set(int(m) for m in members)
    if G.identity not in H:
        return False
    table = G.table
    Harr = np.array(sorted(H))
    if not set(table[np.ix_(Harr, Harr)].ravel().tolist()) <= H:
        return False
    inv = G.inverse_map
    # g h g^-1 in H for all g, h
    conj = table[table[:, Harr], inv[:, None]]
    return set(conj.ravel().tolist()) <= H


def normal_closure(G: FiniteGroup, gens: Iterable[int]) -> frozenset[int]:
    table, inv = G.table, G.inverse_map
    current = set(subgroup_generated(G, list(gens) or [G.identity]))
    while True:
        arr = np.array(sorted(current))
        conj = set(table[table[:, arr], inv[:, None]].ravel().tolist())
        if conj <= current:
            return frozenset(current)
        current = set(subgroup_generated(G, sorted(current | conj)))


def normal_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """All normal subgroups, by closing joins of normal closures of single elements."""
    minimal = {normal_closure(G, [g]) for g in range(G.order)}
    found = set(minimal)
    frontier = set(minimal)
    while frontier:
        nxt = set()
        for A, B in itertools.product(frontier, minimal):
            if B <= A:
                continue
            J = frozenset(subgroup_generated(G, sorted(A | B)))
            if J not in found:
                found.add(J)
                nxt.add(J)
        frontier = nxt
    return sorted(found, key=lambda N: (len(N), sorted(N)))


def coset_quotient(G: FiniteGroup, normal: Iterable[int]) -> tuple[TableGroup, np.ndarray]:
    """Quotient ``G/N`` as a table group plus the projection array ``G -> G/N``.

    Cosets are numbered by their least element.
    """
    N = sorted(set(int(x) for x in normal))
    if not is_normal(G, N):
        raise SpecError("kernel is not a normal subgroup")
    table = G.table
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if proj[g] >= 0:
            continue
        proj[table[g, N]] = len(reps)
        reps.append(g)
    reps_arr = np.array(reps)
    qtable = proj[table[np.ix_(reps_arr, reps_arr)]]
    labels = ["{" + G.label(r) + "}" for r in reps]
    Q = TableGroup(qtable, family="quotient", labels=labels, validate=False)
    proj.setflags(write=False)
    return Q, proj
