"""Seeded random generators for every object type.

All draws come from one :class:`random.Random` seeded from the config, so a
seed and a config reproduce the same stream of cases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..autdecomp import VAut
from ..element import HahnElement, leading_coefficient, negate
from ..rayner import GroupFamily
from ..skeleton import (
    FiniteChain,
    IntegerChain,
    Skeleton,
    SkeletonAut,
    Tag,
)
from ..trimatrix import TriMatrix

MATRIX_CLASSES = ("Delta", "T", "U", "U1", "Ud")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_chain: int = 6
    max_support: int = 8
    coeff_bound: int = 50
    shift_window: int = 3

    def __post_init__(self):
        for name, cap in (("max_chain", 6), ("max_support", 8),
                          ("coeff_bound", 50), ("shift_window", 3)):
            value = getattr(self, name)
            if not 1 <= value <= cap:
                raise ValueError(f"{name} must lie in [1, {cap}], got {value}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class Generator:
    def __init__(self, cfg: GenConfig = GenConfig()):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    def split(self) -> Generator:
        """An independent generator for one case, seeded from this stream."""
        return Generator(GenConfig(self.rng.getrandbits(64), self.cfg.max_chain,
                                   self.cfg.max_support, self.cfg.coeff_bound,
                                   self.cfg.shift_window))

    # -- scalars ------------------------------------------------------------

    def rational(self, *, integer: bool = False, positive: bool = False,
                 nonzero: bool = False) -> Fraction:
        rng = self.rng
        # mostly small values so exact products stay small
        bound = self.cfg.coeff_bound if rng.random() < 0.2 else min(5, self.cfg.coeff_bound)
        lo = 1 if positive else -bound
        while True:
            num = rng.randint(lo, bound)
            if num or not (nonzero or positive):
                break
        den = 1 if integer else rng.randint(1, bound)
        return Fraction(num, den)

    def positions(self, sk: Skeleton) -> list[int]:
        if sk.is_finite:
            return list(sk.positions())
        w = self.cfg.max_chain
        return list(range(-w, w + 1))

    # -- skeletons ------------------------------------------------------------

    def tags(self, n: int) -> list[Tag]:
        return [self.rng.choice((Tag.Z, Tag.Q, Tag.Q)) for _ in range(n)]

    def finite_skeleton(self, n: int | None = None) -> Skeleton:
        n = n or self.rng.randint(1, self.cfg.max_chain)
        return Skeleton(FiniteChain(n), tuple(self.tags(n)))

    def integer_skeleton(self) -> Skeleton:
        return Skeleton(IntegerChain(), tuple(self.tags(self.rng.randint(1, 3))))

    def skeleton(self) -> Skeleton:
        if self.rng.random() < 0.6:
            return self.finite_skeleton()
        return self.integer_skeleton()

    # -- elements -------------------------------------------------------------

    def element(self, sk: Skeleton, *, nonzero: bool = False) -> HahnElement:
        pool = self.positions(sk)
        size = self.rng.randint(1 if nonzero else 0, min(self.cfg.max_support, len(pool)))
        coeffs = {g: self.rational(integer=sk.component(g) is Tag.Z, nonzero=True)
                  for g in self.rng.sample(pool, size)}
        return HahnElement(sk, coeffs)

    def positive_element(self, sk: Skeleton) -> HahnElement:
        a = self.element(sk, nonzero=True)
        return a if leading_coefficient(a) > 0 else negate(a)

    # -- matrices -------------------------------------------------------------

    def _diag_value(self, tag: Tag, cls: str) -> Fraction:
        if cls == "U1":
            return Fraction(1)
        if cls == "Delta":
            if tag is Tag.Z:
                return Fraction(self.rng.randint(-3, 3))
            return self.rational()
        return Fraction(1) if tag is Tag.Z else self.rational(positive=True)

    def trimatrix(self, sk: Skeleton, cls: str = "U") -> TriMatrix:
        if cls not in MATRIX_CLASSES:
            raise ValueError(f"unknown matrix class {cls!r}")
        rng = self.rng
        pool = self.positions(sk)
        entries: dict = {}
        if sk.is_finite:
            for g in pool:
                entries[g, g] = self._diag_value(sk.component(g), cls)
            default = Fraction(1)
        else:
            for g in rng.sample(pool, rng.randint(0, min(3, len(pool)))):
                entries[g, g] = self._diag_value(sk.component(g), cls)
            default = self._diag_value(Tag.Z if sk.has_tag(Tag.Z) else Tag.Q, cls)
        if cls != "Ud" and len(pool) > 1:
            for _ in range(rng.randint(0, self.cfg.max_support)):
                a, b = sorted(rng.sample(pool, 2))
                dom, cod = sk.component(a), sk.component(b)
                if dom is Tag.Q and cod is Tag.Z:
                    continue
                entries[a, b] = self.rational(integer=dom is Tag.Z and cod is Tag.Z,
                                              nonzero=True)
        M = TriMatrix(sk, entries, default)
        assert cls == "Delta" or M.in_T
        assert cls != "U1" or M.in_U1
        assert cls != "Ud" or M.in_Ud
        return M

    # -- automorphisms --------------------------------------------------------

    def skeleton_aut(self, sk: Skeleton, *, shift: int | None = None) -> SkeletonAut:
        rng = self.rng
        if shift is None:
            shift = 0 if sk.is_finite else sk.period * rng.randint(
                -self.cfg.shift_window, self.cfg.shift_window)
        q_positions = [g for g in self.positions(sk) if sk.component(g) is Tag.Q]
        exc = {g: self.rational(positive=True)
               for g in rng.sample(q_positions, rng.randint(0, min(3, len(q_positions))))}
        default = self.rational(positive=True) if rng.random() < 0.5 else Fraction(1)
        return SkeletonAut(sk, shift, default, exc)

    def vaut(self, sk: Skeleton) -> VAut:
        cls = "U1" if self.rng.random() < 0.5 else "U"
        return VAut(self.trimatrix(sk, cls), self.skeleton_aut(sk))

    # -- families -------------------------------------------------------------

    def family(self, sk: Skeleton) -> GroupFamily:
        rng = self.rng
        if sk.is_finite:
            pool = list(sk.positions())
            gens = [rng.sample(pool, rng.randint(0, len(pool)))
                    for _ in range(rng.randint(0, 3))]
            return GroupFamily.explicit(sk, gens)
        if rng.random() < 0.3:
            return GroupFamily.all_finite(sk)
        bound = rng.randint(-3, 3) if rng.random() < 0.8 else None
        if rng.random() < 0.5:
            period = rng.randint(1, 3)
            residues = rng.sample(range(period), rng.randint(0, period))
            return GroupFamily.finite_within(sk, bound, period, residues)
        return GroupFamily.finite_within(sk, bound)
