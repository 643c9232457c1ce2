# core/abgroup.py
import itertools
import logging
from math import prod
from typing import Iterable, Iterator, Sequence

import numpy as np
from attrs import field, frozen

from core.errors import GroupMismatch, IllDefined, InfiniteGroup

log = logging.getLogger(__name__)


def _int_tuple(values: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in values)


def _check_orders(instance, attribute, value):
    for i, n in enumerate(value):
        if n < 0 or n == 1:
            raise IllDefined(f"generator {i}: order {n} must be 0 (free) or at least 2")


@frozen
class FgAbGroup:
    """
    A finitely generated abelian group Z/n_1 + ... + Z/n_r, kept in the
    presentation it was given (no invariant-factor normalization).

    An order of 0 marks a free generator. Order 1 is rejected so that
    element reduction stays unambiguous.
    """
    orders: tuple[int, ...] = field(converter=_int_tuple, validator=_check_orders)

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        return cls((n,))

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls((0,) * rank)

    # ------------------------------------------------------------------ #
    # Shape
    # ------------------------------------------------------------------ #
    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def is_finite(self) -> bool:
        return all(n != 0 for n in self.orders)

    @property
    def is_free(self) -> bool:
        return all(n == 0 for n in self.orders)

    @property
    def cardinality(self) -> int:
        self.require_finite("cardinality")
        return prod(self.orders)

    def require_finite(self, what: str) -> None:
        if not self.is_finite:
            raise InfiniteGroup(f"{what} needs a finite group, got {self}")

    def __str__(self) -> str:
        if not self.orders:
            return "0"
        return " + ".join("Z" if n == 0 else f"Z/{n}" for n in self.orders)

    # ------------------------------------------------------------------ #
    # Elements
    # ------------------------------------------------------------------ #
    def reduce_coeffs(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        if len(coeffs) != self.rank:
            raise GroupMismatch(f"{len(coeffs)} coefficients for a group of rank {self.rank}")
        return tuple(a % n if n else int(a) for a, n in zip(coeffs, self.orders))

    def element(self, coeffs: Sequence[int]) -> "Element":
        return Element(self, coeffs)

    def zero(self) -> "Element":
        return Element(self, (0,) * self.rank)

    def generator(self, i: int) -> "Element":
        coeffs = [0] * self.rank
        coeffs[i] = 1
        return Element(self, coeffs)

    def generators(self) -> list["Element"]:
        return [self.generator(i) for i in range(self.rank)]

    # ------------------------------------------------------------------ #
    # Enumeration and sampling
    # ------------------------------------------------------------------ #
    def enumerate(self) -> Iterator["Element"]:
        """Every element once, in lexicographic coefficient order."""
        self.require_finite("enumerate")
        for coeffs in itertools.product(*(range(n) for n in self.orders)):
            yield Element(self, coeffs)

    def sample_box(self, bound: int) -> Iterator["Element"]:
        """All reduced elements whose free coefficients lie in [-bound, bound]."""
        if bound < 1:
            raise ValueError(f"box bound must be positive, got {bound}")
        ranges = [range(n) if n else range(-bound, bound + 1) for n in self.orders]
        for coeffs in itertools.product(*ranges):
            yield Element(self, coeffs)

    def points(self, box: int) -> list["Element"]:
        """enumerate() on finite groups, sample_box(box) otherwise."""
        return list(self.enumerate() if self.is_finite else self.sample_box(box))

    def index(self, x: "Element") -> int:
        """Position of x in enumerate() order (mixed radix, first coordinate most significant)."""
        self.require_finite("index")
        pos = 0
        for a, n in zip(x.coeffs, self.orders):
            pos = pos * n + a
        return pos

    def element_at(self, pos: int) -> "Element":
        self.require_finite("element_at")
        coeffs = []
        for n in reversed(self.orders):
            pos, a = divmod(pos, n)
            coeffs.append(a)
        return Element(self, reversed(coeffs))

    def torsion_elements(self, n: int) -> list["Element"]:
        """The subgroup {m : n*m = 0}; free coordinates are forced to 0."""
        if n < 1:
            raise ValueError(f"torsion exponent must be positive, got {n}")
        ranges = [[a for a in range(k) if (n * a) % k == 0] if k else [0] for k in self.orders]
        return [Element(self, coeffs) for coeffs in itertools.product(*ranges)]

    def killed_by(self, *exponents: int) -> list["Element"]:
        """Elements m with e*m = 0 for every non-zero exponent e; all of the group when none."""
        exps = [e for e in exponents if e]
        if not exps:
            self.require_finite("unconstrained entry domain")
            return list(self.enumerate())
        keep = set(self.torsion_elements(exps[0]))
        for e in exps[1:]:
            keep &= set(self.torsion_elements(e))
        return sorted(keep, key=lambda m: m.coeffs)

    def mod2_basis(self) -> "Mod2Basis":
        return Mod2Basis.standard(self)


@frozen
class Element:
    """An element of an FgAbGroup, always held in reduced form."""
    group: FgAbGroup
    coeffs: tuple[int, ...] = field(converter=_int_tuple)

    def __attrs_post_init__(self):
        object.__setattr__(self, "coeffs", self.group.reduce_coeffs(self.coeffs))

    def _same_group(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.group != self.group:
            other_group = getattr(other, "group", type(other).__name__)
            raise GroupMismatch(f"cannot combine elements of {self.group} and {other_group}")

    def __add__(self, other: "Element") -> "Element":
        self._same_group(other)
        return Element(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Element") -> "Element":
        self._same_group(other)
        return Element(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Element":
        return Element(self.group, [-a for a in self.coeffs])

    def __mul__(self, n: int) -> "Element":
        if not isinstance(n, int):
            return NotImplemented
        return Element(self.group, [n * a for a in self.coeffs])

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.coeffs)


def reduce(group: FgAbGroup, coeffs: Sequence[int]) -> Element:
    """Reduced element represented by an arbitrary integer coefficient vector."""
    return Element(group, coeffs)


def total(group: FgAbGroup, terms: Iterable[Element]) -> Element:
    acc = [0] * group.rank
    for t in terms:
        for i, a in enumerate(t.coeffs):
            acc[i] += a
    return Element(group, acc)


@frozen
class Homomorphism:
    """A group homomorphism given by the images of the source generators."""
    source: FgAbGroup
    target: FgAbGroup
    images: tuple[Element, ...] = field(converter=tuple)

    def __attrs_post_init__(self):
        if len(self.images) != self.source.rank:
            raise GroupMismatch(f"{len(self.images)} images for {self.source.rank} source generators")
        for j, (img, n) in enumerate(zip(self.images, self.source.orders)):
            if img.group != self.target:
                raise GroupMismatch(f"image {j} lives in {img.group}, expected {self.target}")
            if n and not (n * img).is_zero:
                raise IllDefined(f"generator {j} has order {n} but {n} * image = {n * img}")

    @classmethod
    def generator_matching(cls, source: FgAbGroup, target: FgAbGroup) -> "Homomorphism":
        """The map sending the i-th generator of source to the i-th generator of target."""
        if source.rank != target.rank:
            raise GroupMismatch(f"rank {source.rank} vs rank {target.rank}")
        return cls(source, target, target.generators())

    def __call__(self, x: Element) -> Element:
        if x.group != self.source:
            raise GroupMismatch(f"{x} is not in {self.source}")
        acc = [0] * self.target.rank
        for a, img in zip(x.coeffs, self.images):
            for i, b in enumerate(img.coeffs):
                acc[i] += a * b
        return Element(self.target, acc)

    def kernel_size(self) -> int:
        return sum(1 for x in self.source.enumerate() if self(x).is_zero)

    def is_surjective(self) -> bool:
        """Closure of the images inside a finite target."""
        self.target.require_finite("is_surjective")
        seen = {self.target.zero()}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for img in self.images:
                    y = x + img
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen) == self.target.cardinality


# ---------------------------------------------------------------------- #
# G/2G
# ---------------------------------------------------------------------- #
def _f2_inverse(rows: Sequence[Sequence[int]]) -> np.ndarray:
    """Inverse of a square 0/1 matrix over F2 by Gauss-Jordan elimination."""
    a = np.array(rows, dtype=np.int64).reshape(len(rows), len(rows)) % 2
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise IllDefined("basis vectors are linearly dependent over F2")
        p = col + pivots[0]
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] ^= aug[col]
    return aug[:, n:]


@frozen
class Mod2Basis:
    """
    A basis of the F2-vector space G/2G.

    Coordinates are taken over basis_indices, the generators of even or zero
    order (odd-order generators die in G/2G). `vectors` lists the chosen basis
    in those standard coordinates; the standard basis is the identity.
    """
    group: FgAbGroup
    basis_indices: tuple[int, ...] = field(converter=tuple)
    vectors: tuple[tuple[int, ...], ...] = field(converter=lambda vs: tuple(_int_tuple(v) for v in vs))
    _inverse: tuple[tuple[int, ...], ...] = field(init=False, eq=False, repr=False)

    def __attrs_post_init__(self):
        d = len(self.basis_indices)
        if len(self.vectors) != d or any(len(v) != d for v in self.vectors):
            raise IllDefined(f"G/2G has dimension {d}; need {d} vectors of length {d}")
        inv = _f2_inverse(self.vectors) if d else np.zeros((0, 0), dtype=np.int64)
        object.__setattr__(self, "_inverse", tuple(tuple(int(v) for v in row) for row in inv))

    @classmethod
    def standard(cls, group: FgAbGroup) -> "Mod2Basis":
        idx = tuple(i for i, n in enumerate(group.orders) if n % 2 == 0)
        eye = [[int(r == c) for c in range(len(idx))] for r in range(len(idx))]
        return cls(group, idx, eye)

    def with_vectors(self, vectors: Sequence[Sequence[int]]) -> "Mod2Basis":
        return Mod2Basis(self.group, self.basis_indices, vectors)

    @property
    def dimension(self) -> int:
        return len(self.basis_indices)

    @property
    def is_standard(self) -> bool:
        return self == Mod2Basis.standard(self.group)

    def reduction(self, x: Element) -> tuple[int, ...]:
        """Image of x in G/2G, in standard coordinates."""
        if x.group != self.group:
            raise GroupMismatch(f"{x} is not in {self.group}")
        return tuple(x.coeffs[i] % 2 for i in self.basis_indices)

    def coordinates(self, x: Element) -> tuple[int, ...]:
        """x-bar spelled out in this basis."""
        red = self.reduction(x)
        d = self.dimension
        return tuple(sum(red[j] * self._inverse[j][k] for j in range(d)) % 2 for k in range(d))

    def lift(self, k: int) -> Element:
        """A representative in G of the k-th basis vector."""
        coeffs = [0] * self.group.rank
        for j, bit in zip(self.basis_indices, self.vectors[k]):
            coeffs[j] = bit
        return Element(self.group, coeffs)
