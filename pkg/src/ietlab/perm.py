"""Permutations in one-line notation and the classifications used by the
constructions: irreducibility, degeneracy, standardness and the (4321)
proxy / quasi-proxy patterns.

A permutation ``p`` of ``{1, ..., d}`` is stored by its images, so
``Permutation.parse("4321")`` sends interval 1 to position 4 and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Iterator, Optional, Tuple

__all__ = [
    "Permutation",
    "PermClass",
    "ProxyKind",
    "is_irreducible",
    "is_standard",
    "is_degenerate",
    "degeneracy_witnesses",
    "proxy_kind",
    "classify",
    "all_permutations",
]


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{1, ..., d}``; ``image[j-1]`` is ``pi(j)``."""

    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", image)
        d = len(image)
        if d < 2:
            raise ValueError("a permutation needs at least two letters")
        if sorted(image) != list(range(1, d + 1)):
            raise ValueError(f"{image} is not a bijection of 1..{d}")

    @classmethod
    def parse(cls, text) -> "Permutation":
        """Accept ``"4321"``, ``"(4321)"``, ``"10,3,2,..."`` or a sequence."""
        if isinstance(text, Permutation):
            return text
        if not isinstance(text, str):
            return cls(tuple(text))
        s = text.strip().strip("()[]").replace(" ", "")
        if "," in s:
            return cls(tuple(int(x) for x in s.split(",") if x))
        if not s.isdigit():
            raise ValueError(f"cannot parse permutation {text!r}")
        return cls(tuple(int(c) for c in s))

    @property
    def d(self) -> int:
        return len(self.image)

    def __call__(self, j: int) -> int:
        return self.image[j - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.d
        for j, pj in enumerate(self.image, start=1):
            inv[pj - 1] = j
        return Permutation(tuple(inv))

    def index_of(self, value: int) -> int:
        """``pi^{-1}(value)``."""
        return self.image.index(value) + 1

    def __str__(self):
        if self.d <= 9:
            return "(" + "".join(map(str, self.image)) + ")"
        return "(" + ",".join(map(str, self.image)) + ")"

    def __repr__(self):
        return f"Permutation({str(self)})"

    def compact(self) -> str:
        return str(self).strip("()")

    def to_json(self) -> dict:
        return {"d": self.d, "image": list(self.image)}

    @classmethod
    def from_json(cls, data) -> "Permutation":
        p = cls(tuple(data["image"]))
        if "d" in data and data["d"] != p.d:
            raise ValueError("'d' does not match the image length")
        return p


class ProxyKind(str, Enum):
    PROXY = "Proxy4321"
    QUASI = "QuasiProxy4321"


@dataclass(frozen=True)
class PermClass:
    irreducible: bool
    degenerate: bool
    standard: bool
    proxy_kind: Optional[ProxyKind]

    def to_json(self) -> dict:
        return {
            "irreducible": self.irreducible,
            "degenerate": self.degenerate,
            "standard": self.standard,
            "proxy_kind": self.proxy_kind.value if self.proxy_kind else None,
        }


def is_irreducible(p: Permutation) -> bool:
    """True iff no proper prefix ``{1..k}`` is mapped onto itself."""
    running_max = 0
    for k, pk in enumerate(p.image[:-1], start=1):
        running_max = max(running_max, pk)
        if running_max == k:
            return False
    return True


def is_standard(p: Permutation) -> bool:
    return p(1) == p.d and p(p.d) == 1


def degeneracy_witnesses(p: Permutation) -> list:
    """All ``(bullet, j)`` pairs, in bullet then index order, for which one
    of the four degeneracy conditions holds (``1 <= j < d``)."""
    d = p.d
    out = []
    conditions = (
        lambda j: p(j + 1) == p(j) + 1,
        lambda j: p(j) == d and p(j + 1) == 1 and p(1) == p(d) + 1,
        lambda j: p(j + 1) == 1 and p(1) == p(j) + 1,
        lambda j: p(j + 1) == p(d) + 1 and p(j) == d,
    )
    for bullet, cond in enumerate(conditions, start=1):
        for j in range(1, d):
            if cond(j):
                out.append((bullet, j))
    return out


def is_degenerate(p: Permutation):
    """Return ``(True, (bullet, j))`` for the first witness, else ``(False, None)``."""
    witnesses = degeneracy_witnesses(p)
    if witnesses:
        return True, witnesses[0]
    return False, None


def proxy_kind(p: Permutation) -> Optional[ProxyKind]:
    d = p.d
    if d < 4 or not is_irreducible(p):
        return None
    tail = p(d - 2) == d - 1 and p(d - 1) == d - 2 and p(d) == 1
    if not tail:
        return None
    # at d = 4 both patterns describe (4321); report it as a proxy
    if p(d - 3) == d:
        return ProxyKind.PROXY
    if p(1) == d:
        return ProxyKind.QUASI
    return None


def classify(p: Permutation) -> PermClass:
    return PermClass(
        irreducible=is_irreducible(p),
        degenerate=is_degenerate(p)[0],
        standard=is_standard(p),
        proxy_kind=proxy_kind(p),
    )


def all_permutations(d: int) -> Iterator[Permutation]:
    """Every permutation of ``d`` letters in lexicographic one-line order."""
    for image in permutations(range(1, d + 1)):
        yield Permutation(image)


def as_permutation(p) -> Permutation:
    return p if isinstance(p, Permutation) else Permutation.parse(p)

