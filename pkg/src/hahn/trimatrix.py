"""Finitely supported triangular matrices of component homomorphisms.

Index convention: entry ``(a, b)`` is a homomorphism ``A_a -> A_b`` and an
element acts as a row vector multiplied on the left, so

    apply(x, M)_b = sum over a in supp(x) of M[a, b] * x_a.

Triangularity means every explicit entry has ``b >= a``: contributions from a
position only land at the same or larger positions, which is what keeps the
valuation from dropping.  With this convention ``apply(x, M @ N)`` equals
``apply(apply(x, M), N)``; the matrix product reads left to right in order
of application.

Off-diagonal entries are stored explicitly (finitely many).  The diagonal is a
default multiplier plus finitely many explicit overrides.  On a finite chain
the default is folded into the overrides so that equality is structural.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping

from .element import HahnElement
from .errors import NotInU, NotInvertible, NotTriangular, InadmissibleHom
from .skeleton import (
    ComponentHom,
    Skeleton,
    SkeletonAut,
    Tag,
    as_rational,
    hom_admissible,
    iso_admissible,
    lex_concat,
    require_same,
    unit_admissible,
)


class TriMatrix:
    __slots__ = ("skeleton", "default_diag", "_diag", "_off", "_rows", "_hash")

    def __init__(self, skeleton: Skeleton, entries: Mapping | None = None,
                 default_diag=1):
        default = as_rational(default_diag)
        diag: dict[int, Fraction] = {}
        off: dict[tuple[int, int], Fraction] = {}
        for (row, col), q in (entries or {}).items():
            q = as_rational(q)
            dom, cod = skeleton.component(row), skeleton.component(col)
            if col < row:
                raise NotTriangular(
                    f"entry ({row},{col}) lies below the diagonal", row=row, col=col)
            if not hom_admissible(dom, cod, q):
                raise InadmissibleHom(
                    f"entry ({row},{col}) = {q} is not a homomorphism {dom}->{cod}",
                    row=row, col=col, q=str(q))
            if row == col:
                diag[row] = q
            elif q:
                off[row, col] = q

        if skeleton.is_finite:
            for g in skeleton.positions():
                q = diag.get(g, default)
                tag = skeleton.component(g)
                if not hom_admissible(tag, tag, q):
                    raise InadmissibleHom(
                        f"diagonal {q} at {g} is not an endomorphism of {tag}", pos=g)
                diag[g] = q
            default = Fraction(1)
        else:
            for tag in set(skeleton.tags):
                if not hom_admissible(tag, tag, default):
                    raise InadmissibleHom(
                        f"default diagonal {default} is not an endomorphism of {tag}")
        self.skeleton = skeleton
        self.default_diag = default
        self._diag = {g: q for g, q in diag.items() if q != default}
        self._off = off
        rows: dict[int, list[tuple[int, Fraction]]] = defaultdict(list)
        for (row, col), q in sorted(off.items()):
            rows[row].append((col, q))
        self._rows = dict(rows)
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, skeleton: Skeleton) -> TriMatrix:
        return cls(skeleton)

    @classmethod
    def zero(cls, skeleton: Skeleton) -> TriMatrix:
        return cls(skeleton, default_diag=0)

    @classmethod
    def diagonal(cls, skeleton: Skeleton, diag: Mapping[int, object],
                 default=1) -> TriMatrix:
        return cls(skeleton, {(g, g): q for g, q in diag.items()}, default)

    # -- access -------------------------------------------------------------

    def diag(self, pos: int) -> Fraction:
        return self._diag.get(pos, self.default_diag)

    def entry(self, row: int, col: int) -> Fraction:
        if row == col:
            return self.diag(row)
        return self._off.get((row, col), Fraction(0))

    def hom(self, row: int, col: int) -> ComponentHom:
        sk = self.skeleton
        return ComponentHom(sk.component(row), sk.component(col), self.entry(row, col))

    def row(self, pos: int) -> list[tuple[int, Fraction]]:
        """Explicit off-diagonal entries ``(col, q)`` of row ``pos``."""
        return self._rows.get(pos, [])

    def offdiag_items(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self._off.items())

    def diag_items(self) -> list[tuple[int, Fraction]]:
        return sorted(self._diag.items())

    def explicit_positions(self) -> set[int]:
        out = set(self._diag)
        for row, col in self._off:
            out.update((row, col))
        return out

    def _diagonal_values(self) -> Iterable[tuple[Tag, Fraction]]:
        sk = self.skeleton
        for g, q in self._diag.items():
            yield sk.component(g), q
        if not sk.is_finite:
            for tag in set(sk.tags):
                yield tag, self.default_diag

    # -- membership ----------------------------------------------------------

    @property
    def is_diagonal(self) -> bool:
        return not self._off

    @property
    def in_T(self) -> bool:
        """Every diagonal entry is an order automorphism of its component."""
        return all(iso_admissible(tag, tag, q) for tag, q in self._diagonal_values())

    @property
    def in_U(self) -> bool:
        # every member of T is a unit here: the diagonal is invertible and the
        # strictly triangular part is nilpotent on finitely many positions
        return self.in_T

    @property
    def in_U1(self) -> bool:
        return self.default_diag == 1 and not self._diag

    @property
    def in_Ud(self) -> bool:
        return self.is_diagonal and self.in_T

    # -- dunder ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriMatrix):
            return NotImplemented
        return (self.skeleton == other.skeleton
                and self.default_diag == other.default_diag
                and self._diag == other._diag and self._off == other._off)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.skeleton, self.default_diag,
                               frozenset(self._diag.items()),
                               frozenset(self._off.items())))
        return self._hash

    def __matmul__(self, other: TriMatrix) -> TriMatrix:
        return multiply(self, other)

    def __add__(self, other: TriMatrix) -> TriMatrix:
        return add_matrices(self, other)

    def __repr__(self) -> str:
        parts = [f"({g},{g})={q}" for g, q in self.diag_items()]
        parts += [f"({r},{c})={q}" for (r, c), q in self.offdiag_items()]
        return f"TriMatrix(default_diag={self.default_diag}, {', '.join(parts)})"


def _entries_of(M: TriMatrix) -> dict:
    out = {(g, g): q for g, q in M._diag.items()}
    out.update(M._off)
    return out


def apply(a: HahnElement, M: TriMatrix) -> HahnElement:
    """The endomorphism induced by ``M`` evaluated at ``a`` (row vector times ``M``)."""
    sk = require_same(a.skeleton, M.skeleton)
    out: dict[int, Fraction] = defaultdict(Fraction)
    for alpha, x in a.coeffs.items():
        out[alpha] += M.diag(alpha) * x
        for beta, q in M.row(alpha):
            out[beta] += q * x
    return HahnElement(sk, out)


def multiply(M: TriMatrix, N: TriMatrix) -> TriMatrix:
    """Matrix product; as maps, ``M`` is applied first, then ``N``."""
    sk = require_same(M.skeleton, N.skeleton)
    entries: dict = {}
    for g in set(M._diag) | set(N._diag):
        entries[g, g] = M.diag(g) * N.diag(g)
    off: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for (alpha, gamma), q in N._off.items():
        off[alpha, gamma] += M.diag(alpha) * q
    for (alpha, gamma), q in M._off.items():
        off[alpha, gamma] += q * N.diag(gamma)
    for (alpha, beta), q in M._off.items():
        for gamma, r in N.row(beta):
            off[alpha, gamma] += q * r
    entries.update(off)
    return TriMatrix(sk, entries, M.default_diag * N.default_diag)


def add_matrices(M: TriMatrix, N: TriMatrix) -> TriMatrix:
    sk = require_same(M.skeleton, N.skeleton)
    entries: dict = {}
    for g in set(M._diag) | set(N._diag):
        entries[g, g] = M.diag(g) + N.diag(g)
    for key in set(M._off) | set(N._off):
        entries[key] = M._off.get(key, 0) + N._off.get(key, 0)
    return TriMatrix(sk, entries, M.default_diag + N.default_diag)


def invert(M: TriMatrix) -> TriMatrix:
    """Two-sided inverse by back-substitution.

    Requires every diagonal entry to be a unit of its endomorphism ring
    (``+-1`` on ``Z``, nonzero on ``Q``).  Off-diagonal entries of the inverse
    can only appear between positions already touched by off-diagonal
    entries of ``M``, so the substitution runs over that finite set.
    """
    sk = M.skeleton
    for tag, q in M._diagonal_values():
        if not unit_admissible(tag, q):
            raise NotInvertible(f"diagonal entry {q} is not invertible on {tag}",
                                q=str(q))
    inv_diag = {g: 1 / q for g, q in M._diag.items()}
    touched = sorted({p for key in M._off for p in key})
    inv_off: dict[tuple[int, int], Fraction] = {}
    for i, alpha in enumerate(touched):
        n_aa = 1 / M.diag(alpha)
        for j in range(i + 1, len(touched)):
            gamma = touched[j]
            s = n_aa * M._off.get((alpha, gamma), 0)
            for beta in touched[i + 1:j]:
                n_ab = inv_off.get((alpha, beta))
                if n_ab:
                    s += n_ab * M._off.get((beta, gamma), 0)
            if s:
                inv_off[alpha, gamma] = -s / M.diag(gamma)
    entries = {(g, g): q for g, q in inv_diag.items()}
    entries.update(inv_off)
    return TriMatrix(sk, entries, 1 / M.default_diag)


def is_order_preserving(M: TriMatrix) -> bool:
    """Triangular with every diagonal entry an order automorphism."""
    return M.in_T


def diagonal_part(M: TriMatrix) -> TriMatrix:
    return TriMatrix(M.skeleton, {(g, g): q for g, q in M._diag.items()}, M.default_diag)


def factor_U1_Ud(M: TriMatrix) -> tuple[TriMatrix, TriMatrix]:
    """Split ``M = M1 @ Md`` with ``M1`` unitriangular and ``Md`` diagonal.

    ``M1`` is ``M @ Md^-1``: each column of ``M`` is rescaled by the inverse of
    its diagonal entry.  Simply overwriting the diagonal of ``M`` with ones
    does not recompose to ``M`` once off-diagonal entries are present.
    """
    if not M.in_U:
        raise NotInU("matrix is not an order preserving unit")
    Md = diagonal_part(M)
    return multiply(M, invert(Md)), Md


def conjugate_by_lift(M: TriMatrix, t: SkeletonAut) -> TriMatrix:
    """The matrix of ``lift(t) o M o lift(t)^-1``.

    Entry ``(a, b)`` moves to ``(a + k, b + k)`` for the shift ``k`` of ``t``
    and is rescaled by ``t_b / t_a``.
    """
    sk = require_same(M.skeleton, t.skeleton)
    k = t.shift
    entries = {(g + k, g + k): q for g, q in M._diag.items()}
    for (alpha, beta), q in M._off.items():
        entries[alpha + k, beta + k] = t.multiplier(beta) * q / t.multiplier(alpha)
    return TriMatrix(sk, entries, M.default_diag)


def restrict_tail(M: TriMatrix, start: int) -> TriMatrix:
    """Restriction of ``M`` to positions ``>= start`` over the relabelled tail."""
    tail = M.skeleton.tail(start)
    entries = {(r - start, c - start): q for (r, c), q in _entries_of(M).items()
               if r >= start}
    return TriMatrix(tail, entries)


def block_sum(M1: TriMatrix, M2: TriMatrix) -> TriMatrix:
    """``M1`` and ``M2`` side by side over the lexicographic sum of their skeletons."""
    sk = lex_concat(M1.skeleton, M2.skeleton)
    n1 = M1.skeleton.chain.n
    entries = _entries_of(M1)
    entries.update({(r + n1, c + n1): q for (r, c), q in _entries_of(M2).items()})
    return TriMatrix(sk, entries)


def first_difference(M: TriMatrix, N: TriMatrix):
    """The first ``(row, col)`` where two matrices over one skeleton differ, or None."""
    require_same(M.skeleton, N.skeleton)
    if M.default_diag != N.default_diag:
        return ("default", "default")
    keys = set(_entries_of(M)) | set(_entries_of(N))
    for row, col in sorted(keys):
        if M.entry(row, col) != N.entry(row, col):
            return (row, col)
    return None
