"""Group families with finite-index normal subgroups, and their finite quotients.

Supported families:

* ``Z^d`` (``d = 1, 2, 3``; ``Z`` is ``Z^1``). Elements are integer tuples,
  kernels are full-rank sublattices given by an integer matrix whose rows
  generate them. Kernels are stored in canonical Hermite normal form.
* ``Dinf``, the infinite dihedral group ``<r, s | s^2, srs = r^-1>``. Elements
  are words in ``r`` and ``s``; the supported kernels are the rotation
  subgroups ``<r^n>`` with quotient ``D_n``.
* ``finite:<group-spec>``, a fixed finite group whose kernels are explicit
  normal subgroups.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

import numpy as np

from .errors import SpecError
from .groups import (
    AbelianGroup,
    DihedralGroup,
    FiniteGroup,
    coset_quotient,
    dihedral_word,
    make_group,
    normal_subgroups,
    parse_monomial,
)

IntMatrix = tuple[tuple[int, ...], ...]


# -- integer matrices ------------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style HNF of a nonsingular square integer matrix.

    Upper triangular, positive diagonal, and every entry above a pivot reduced
    into ``[0, pivot)``. Two matrices generate the same lattice iff their HNFs
    are equal.
    """
    A = [[int(x) for x in r] for r in rows]
    d = len(A)
    if any(len(r) != d for r in A):
        raise SpecError("kernel matrix must be square")
    for c in range(d):
        # Euclid on column c among rows c..d-1
        while True:
            nz = [r for r in range(c, d) if A[r][c] != 0]
            if not nz:
                raise SpecError("kernel matrix is singular")
            p = min(nz, key=lambda r: abs(A[r][c]))
            A[c], A[p] = A[p], A[c]
            done = True
            for r in range(c + 1, d):
                q = A[r][c] // A[c][c]
                if q:
                    A[r] = [x - q * y for x, y in zip(A[r], A[c])]
                if A[r][c] != 0:
                    done = False
            if done:
                break
        if A[c][c] < 0:
            A[c] = [-x for x in A[c]]
    for c in range(d):
        for r in range(c):
            q = A[r][c] // A[c][c]
            if q:
                A[r] = [x - q * y for x, y in zip(A[r], A[c])]
    return tuple(tuple(r) for r in A)


def smith_normal_form(rows: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonal ``D`` and unimodular ``V`` with ``U A V = diag(D)``.

    Only ``V`` is returned since the quotient map needs just the column
    transform: ``x`` lies in the row lattice of ``A`` iff ``(x V)_i`` is
    divisible by ``D_i`` for every ``i``.
    """
    A = [[int(x) for x in r] for r in rows]
    d = len(A)
    V = [[int(i == j) for j in range(d)] for i in range(d)]

    def col_op(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src, on A and V
        for M in (A, V):
            for r in range(d):
                M[r][dst] -= q * M[r][src]

    def swap_cols(i: int, j: int) -> None:
        for M in (A, V):
            for r in range(d):
                M[r][i], M[r][j] = M[r][j], M[r][i]

    for t in range(d):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, d) for j in range(t, d) if A[i][j]]
            if not entries:
                raise SpecError("kernel matrix is singular")
            _, i, j = min(entries)
            A[t], A[i] = A[i], A[t]
            swap_cols(t, j)
            clean = True
            for r in range(t + 1, d):
                q = A[r][t] // A[t][t]
                A[r] = [x - q * y for x, y in zip(A[r], A[t])]
                clean &= A[r][t] == 0
            for c in range(t + 1, d):
                q = A[t][c] // A[t][t]
                col_op(c, t, q)
                clean &= A[t][c] == 0
            if not clean:
                continue
            # divisibility: pivot must divide the remaining block
            bad = [(r, c) for r in range(t + 1, d) for c in range(t + 1, d) if A[r][c] % A[t][t]]
            if not bad:
                break
            r, _ = bad[0]
            A[t] = [x + y for x, y in zip(A[t], A[r])]
        if A[t][t] < 0:
            for r in range(d):
                V[r][t] = -V[r][t]
            A[t][t] = -A[t][t]
    return [A[i][i] for i in range(d)], V


def invert_unimodular(V: Sequence[Sequence[int]]) -> list[list[int]]:
    from fractions import Fraction

    d = len(V)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(V)]
    for c in range(d):
        p = next(r for r in range(c, d) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(d):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = [[M[i][d + j] for j in range(d)] for i in range(d)]
    if any(x.denominator != 1 for row in out for x in row):
        raise SpecError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def lattice_contains(hnf: IntMatrix, x: Sequence[int]) -> bool:
    """Whether ``x`` lies in the lattice spanned by the rows of an upper-triangular HNF."""
    x = [int(v) for v in x]
    for i, row in enumerate(hnf):
        if x[i] % row[i]:
            return False
        q = x[i] // row[i]
        x = [a - q * b for a, b in zip(x, row)]
    return not any(x)


# -- quotient maps ---------------------------------------------------------------


@dataclass
class QuotientMap:
    """Surjection from a family onto the finite group ``target``.

    ``fiber`` is the kernel in the family's canonical form: an HNF matrix for
    ``Z^d``, the rotation modulus for ``Dinf``, a frozenset of indices for
    finite groups.
    """

    source: "Family"
    target: FiniteGroup
    fiber: Hashable
    _project: Callable[[Any], int] = field(repr=False)
    _lift: Callable[[int], Any] = field(repr=False)

    def __call__(self, x: Any) -> int:
        return self._project(x)

    def lift(self, g: int) -> Any:
        """A representative in the source of the target element ``g``."""
        return self._lift(g)

    def image(self, elements: Sequence[Any]) -> list[int]:
        return sorted({self(x) for x in elements})

    @property
    def index(self) -> int:
        return self.target.order


class Family:
    """A (possibly infinite) group given by a family spec string."""

    spec: str

    def parse_element(self, label: Any) -> Any:
        raise NotImplementedError

    def element_label(self, x: Any) -> str:
        raise NotImplementedError

    def mul(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    def random_element(self, rng: random.Random) -> Any:
        raise NotImplementedError

    def parse_kernel(self, spec: Any) -> Hashable:
        raise NotImplementedError

    def kernel_label(self, kernel: Hashable) -> str:
        raise NotImplementedError

    def kernel_index(self, kernel: Hashable) -> int:
        raise NotImplementedError

    def contains(self, big: Hashable, small: Hashable) -> bool:
        """Whether kernel ``big`` contains kernel ``small``."""
        raise NotImplementedError

    def quotient(self, kernel: Hashable) -> QuotientMap:
        raise NotImplementedError

    def kernels_up_to(self, max_index: int) -> list[Hashable]:
        raise NotImplementedError

    def leq(self, N: Hashable, M: Hashable) -> bool:
        """Directed-set order: ``N <= M`` iff ``N`` contains ``M``."""
        return self.contains(N, M)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"


class LatticeFamily(Family):
    """The free abelian group ``Z^d``."""

    def __init__(self, d: int):
        if d not in (1, 2, 3):
            raise SpecError(f"unsupported lattice dimension {d}; use 1, 2 or 3")
        self.d = d
        self.spec = "Z" if d == 1 else f"Z^{d}"

    def parse_element(self, label: Any) -> tuple[int, ...]:
        if isinstance(label, (int, np.integer)) and self.d == 1:
            return (int(label),)
        if isinstance(label, (list, tuple)):
            if len(label) != self.d:
                raise SpecError(f"element {label!r} needs {self.d} coordinates")
            return tuple(int(v) for v in label)
        text = str(label).strip()
        if text.startswith("(") and text.endswith(")"):
            try:
                return self.parse_element([int(p) for p in text[1:-1].split(",") if p.strip()])
            except ValueError:
                raise SpecError(f"bad coordinate tuple {label!r}") from None
        if self.d == 1:
            try:
                return (int(text),)
            except ValueError:
                pass
        return tuple(parse_monomial(text, self.d))

    def element_label(self, x: Sequence[int]) -> str:
        if self.d == 1:
            return str(x[0])
        return "(" + ",".join(map(str, x)) + ")"

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def random_element(self, rng: random.Random):
        return tuple(rng.randint(-50, 50) for _ in range(self.d))

    def parse_kernel(self, spec: Any) -> IntMatrix:
        """Accept an HNF-able ``d x d`` matrix, a list of ``d`` diagonal entries, or a scalar ``L`` meaning ``L*I``."""
        if isinstance(spec, (int, np.integer)) or (isinstance(spec, str) and spec.strip().lstrip("-").isdigit()):
            L = int(spec)
            rows = [[L if i == j else 0 for j in range(self.d)] for i in range(self.d)]
        elif isinstance(spec, (list, tuple)) and all(isinstance(v, (int, np.integer)) for v in spec):
            if len(spec) != self.d:
                raise SpecError(f"diagonal kernel {spec!r} needs {self.d} entries")
            rows = [[int(spec[i]) if i == j else 0 for j in range(self.d)] for i in range(self.d)]
        elif isinstance(spec, (list, tuple)):
            rows = [list(r) for r in spec]
            if len(rows) != self.d or any(len(r) != self.d for r in rows):
                raise SpecError(f"kernel matrix for {self.spec} must be {self.d}x{self.d}")
        else:
            raise SpecError(f"cannot parse kernel {spec!r} for {self.spec}")
        return hermite_normal_form(rows)

    def kernel_label(self, kernel: IntMatrix) -> str:
        if self.d == 1:
            return f"{kernel[0][0]}Z"
        if all(kernel[i][j] == 0 for i in range(self.d) for j in range(self.d) if i != j):
            return "diag(" + ",".join(str(kernel[i][i]) for i in range(self.d)) + ")"
        return "[" + ";".join(",".join(map(str, r)) for r in kernel) + "]"

    def kernel_index(self, kernel: IntMatrix) -> int:
        out = 1
        for i in range(self.d):
            out *= kernel[i][i]
        return out

    def contains(self, big: IntMatrix, small: IntMatrix) -> bool:
        return all(lattice_contains(big, row) for row in small)

    def quotient(self, kernel: Any) -> QuotientMap:
        H = kernel if _is_hnf(kernel, self.d) else self.parse_kernel(kernel)
        diagonal = all(H[i][j] == 0 for i in range(self.d) for j in range(self.d) if i != j)
        if diagonal:
            moduli = [H[i][i] for i in range(self.d)]
            V = [[int(i == j) for j in range(self.d)] for i in range(self.d)]
        else:
            moduli, V = smith_normal_form(H)
        keep = [i for i, m in enumerate(moduli) if m != 1] or [0]
        target = AbelianGroup([moduli[i] for i in keep])
        Vinv = invert_unimodular(V)
        d = self.d

        def project(x: Sequence[int]) -> int:
            x = self.parse_element(x) if not isinstance(x, tuple) else x
            y = [sum(x[k] * V[k][i] for k in range(d)) for i in range(d)]
            return target.from_coords([y[i] for i in keep])

        def lift(g: int) -> tuple[int, ...]:
            coords = target.to_coords(g)
            y = [0] * d
            for i, c in zip(keep, coords):
                y[i] = c
            return tuple(sum(y[k] * Vinv[k][i] for k in range(d)) for i in range(d))

        return QuotientMap(self, target, H, project, lift)

    def kernels_up_to(self, max_index: int) -> list[IntMatrix]:
        from .tower import enumerate_sublattices

        out = []
        for n in range(1, max_index + 1):
            out.extend(enumerate_sublattices(self.d, n))
        return out


def _is_hnf(kernel: Any, d: int) -> bool:
    return (
        isinstance(kernel, tuple)
        and len(kernel) == d
        and all(isinstance(r, tuple) and len(r) == d for r in kernel)
        and hermite_normal_form(kernel) == kernel
    )


class InfiniteDihedralFamily(Family):
    """``Dinf``; elements are pairs ``(a, b)`` meaning ``s^a r^b``."""

    spec = "Dinf"

    def parse_element(self, label: Any) -> tuple[int, int]:
        if isinstance(label, (list, tuple)) and len(label) == 2:
            return int(label[0]) % 2, int(label[1])
        return dihedral_word(str(label), None)

    def element_label(self, x: tuple[int, int]) -> str:
        a, b = x
        rot = "" if b == 0 else ("r" if b == 1 else f"r{b}")
        if a == 0:
            return rot or "1"
        return "s" + rot

    def mul(self, x, y):
        a, b = x
        c, d = y
        return ((a + c) % 2, (-b if c else b) + d)

    def random_element(self, rng: random.Random):
        return (rng.randint(0, 1), rng.randint(-50, 50))

    def parse_kernel(self, spec: Any) -> int:
        if isinstance(spec, str):
            text = spec.strip().replace("<", "").replace(">", "").replace("^", "")
            if text.startswith("r") and text[1:].isdigit():
                text = text[1:]
            spec = text
        try:
            n = int(spec)
        except (TypeError, ValueError):
            raise SpecError(f"Dinf kernels are rotation subgroups r^n; got {spec!r}") from None
        if n < 1:
            raise SpecError(f"rotation modulus must be positive, got {n}")
        return n

    def kernel_label(self, kernel: int) -> str:
        return f"<r^{kernel}>"

    def kernel_index(self, kernel: int) -> int:
        return 2 * kernel

    def contains(self, big: int, small: int) -> bool:
        return small % big == 0

    def quotient(self, kernel: Any) -> QuotientMap:
        n = self.parse_kernel(kernel)
        target = DihedralGroup(n)

        def project(x) -> int:
            a, b = x if isinstance(x, tuple) else self.parse_element(x)
            return a * n + b % n

        def lift(g: int) -> tuple[int, int]:
            return divmod(g, n)

        return QuotientMap(self, target, n, project, lift)

    def kernels_up_to(self, max_index: int) -> list[int]:
        return list(range(1, max_index // 2 + 1))


class FiniteFamily(Family):
    """A fixed finite group; kernels are its normal subgroups."""

    def __init__(self, group: FiniteGroup, spec: str):
        self.group = group
        self.spec = f"finite:{spec}"

    def parse_element(self, label: Any) -> int:
        return self.group.parse(label)

    def element_label(self, x: int) -> str:
        return self.group.label(x)

    def mul(self, x, y):
        return self.group.mul(x, y)

    def random_element(self, rng: random.Random):
        return rng.randrange(self.group.order)

    def parse_kernel(self, spec: Any) -> frozenset[int]:
        if not isinstance(spec, (list, tuple, set, frozenset)):
            raise SpecError(f"finite kernels are element lists; got {spec!r}")
        return frozenset(self.group.parse(e) for e in spec)

    def kernel_label(self, kernel: frozenset[int]) -> str:
        return "{" + ",".join(self.group.label(x) for x in sorted(kernel)) + "}"

    def kernel_index(self, kernel: frozenset[int]) -> int:
        return self.group.order // len(kernel)

    def contains(self, big, small) -> bool:
        return set(small) <= set(big)

    def quotient(self, kernel: Any) -> QuotientMap:
        N = kernel if isinstance(kernel, frozenset) else self.parse_kernel(kernel)
        target, proj = coset_quotient(self.group, N)
        reps = {}
        for g in range(self.group.order):
            reps.setdefault(int(proj[g]), g)

        def project(x) -> int:
            return int(proj[x if isinstance(x, (int, np.integer)) else self.parse_element(x)])

        return QuotientMap(self, target, frozenset(N), project, reps.__getitem__)

    def kernels_up_to(self, max_index: int) -> list[frozenset[int]]:
        return [N for N in normal_subgroups(self.group) if self.kernel_index(N) <= max_index]


def make_family(spec: str) -> Family:
    """``Z``, ``Z^2``, ``Z^3``, ``Dinf`` or ``finite:<group-spec>``."""
    text = str(spec).strip()
    if text in ("Z", "Z^1", "Z1"):
        return LatticeFamily(1)
    if text in ("Z^2", "Z2"):
        return LatticeFamily(2)
    if text in ("Z^3", "Z3"):
        return LatticeFamily(3)
    if text in ("Dinf", "D_inf", "dihedral"):
        return InfiniteDihedralFamily()
    if text.startswith("finite:"):
        inner = text[len("finite:"):]
        return FiniteFamily(make_group(inner), inner)
    raise SpecError(f"unsupported group family {spec!r}")


def quotient(source: Family | str, kernel: Any) -> QuotientMap:
    """Finite quotient of a family by a kernel given in any accepted form."""
    fam = make_family(source) if isinstance(source, str) else source
    return fam.quotient(kernel)


def verify_homomorphism(qmap: QuotientMap, samples: int = 1000, seed: int = 0) -> bool:
    """Check ``q(xy) = q(x) q(y)`` on random pairs, or on all pairs for finite sources."""
    fam, G = qmap.source, qmap.target
    if isinstance(fam, FiniteFamily) and fam.group.order ** 2 <= max(samples, 1) * 16:
        pairs = ((x, y) for x in range(fam.group.order) for y in range(fam.group.order))
    else:
        rng = random.Random(seed)
        pairs = ((fam.random_element(rng), fam.random_element(rng)) for _ in range(samples))
    return all(qmap(fam.mul(x, y)) == G.mul(qmap(x), qmap(y)) for x, y in pairs)
