# core/model.py
import itertools
import logging
from typing import Iterator

from attrs import frozen

from core.abgroup import Element, FgAbGroup
from core.cocycle import AbelianCocycle3, TableCocycle, is_symmetric, tabulate, trace, validate
from core.errors import InvalidCocycle
from core.forms import QuadraticForm
from core.search import partitioned

log = logging.getLogger(__name__)


@frozen
class SkeletalModel:
    """
    The skeletal braided categorical group of an abelian 3-cocycle: objects
    are the elements of G, every object has automorphism group M and there
    are no other arrows. Tensor is addition, the associator is h, the
    braiding is c and the inverse contraction is fixed to 0.

    Construct through build() unless the cocycle is meant to be broken.
    """
    kappa: AbelianCocycle3

    @classmethod
    def build(cls, kappa: AbelianCocycle3, box: int = 3, parallel: int = 1) -> "SkeletalModel":
        report = validate(kappa, box, parallel)
        if not report.valid:
            raise InvalidCocycle(report)
        return cls(kappa)

    @property
    def group(self) -> FgAbGroup:
        return self.kappa.group

    @property
    def module(self) -> FgAbGroup:
        return self.kappa.module

    def objects(self, box: int = 3) -> list[Element]:
        return self.group.points(box)

    def hom(self, X: Element, Y: Element) -> FgAbGroup | None:
        return self.module if X == Y else None

    # ------------------------------------------------------------------ #
    # Structure
    # ------------------------------------------------------------------ #
    def tensor(self, X: Element, Y: Element) -> Element:
        return X + Y

    def tensor_morphisms(self, a: Element, b: Element) -> Element:
        return a + b

    def identity(self, X: Element) -> Element:
        return self.module.zero()

    def unit(self) -> Element:
        return self.group.zero()

    def left_unitor(self, X: Element) -> Element:
        return self.module.zero()

    def right_unitor(self, X: Element) -> Element:
        return self.module.zero()

    def associator(self, X: Element, Y: Element, Z: Element) -> Element:
        return self.kappa.h(X, Y, Z)

    def braiding(self, X: Element, Y: Element) -> Element:
        return self.kappa.c(X, Y)

    def inverse(self, X: Element) -> Element:
        return -X

    def contraction(self, X: Element) -> Element:
        return self.module.zero()

    # ------------------------------------------------------------------ #
    # Invariants
    # ------------------------------------------------------------------ #
    def signature(self, X: Element) -> Element:
        """Self-braiding of X contracted against X^-1 twice."""
        return self.braiding(X, X) - self.contraction(X) - self.contraction(X)

    def signature_form(self) -> QuadraticForm:
        return trace(self.kappa)

    def signature_table(self, box: int = 3) -> dict[Element, Element]:
        return {X: self.signature(X) for X in self.objects(box)}

    def is_picard(self, box: int = 3) -> bool:
        return is_symmetric(self.kappa, box)

    def pi0(self) -> FgAbGroup:
        return self.group

    def pi1(self) -> FgAbGroup:
        return self.module


# ---------------------------------------------------------------------- #
# Coherence checks
# ---------------------------------------------------------------------- #
@frozen
class CoherenceReport:
    name: str
    passed: bool
    counterexample: tuple[Element, ...] | None = None
    exhaustive: bool = True
    box: int | None = None


def _report(name: str, m: SkeletalModel, box: int, found: list) -> CoherenceReport:
    first = next((c for c in found if c is not None), None)
    finite = m.group.is_finite
    if first is not None:
        log.debug("%s fails at %s", name, ", ".join(str(x) for x in first))
    return CoherenceReport(name, first is None, first, finite, None if finite else box)


def _pentagon_from(X: Element, m: SkeletalModel, objs: list[Element]):
    a, t = m.associator, m.tensor
    for Y, Z, W in itertools.product(objs, repeat=3):
        lhs = a(X, Y, Z) + a(X, t(Y, Z), W) + a(Y, Z, W)
        rhs = a(t(X, Y), Z, W) + a(X, Y, t(Z, W))
        if lhs != rhs:
            return (X, Y, Z, W)
    return None


def _hexagon_from(X: Element, m: SkeletalModel, objs: list[Element], inverse: bool):
    a, s, t = m.associator, m.braiding, m.tensor
    for Y, Z in itertools.product(objs, repeat=2):
        if inverse:
            lhs = -a(Z, X, Y) + s(t(X, Y), Z) - a(X, Y, Z)
            rhs = s(X, Z) - a(X, Z, Y) + s(Y, Z)
        else:
            lhs = a(Y, Z, X) + s(X, t(Y, Z)) + a(X, Y, Z)
            rhs = s(X, Z) + a(Y, X, Z) + s(X, Y)
        if lhs != rhs:
            return (X, Y, Z)
    return None


def _units_from(X: Element, m: SkeletalModel, objs: list[Element], arrows: list[Element]):
    """Triangles for the unitors against h, and f (x) id_1 = f = id_1 (x) f on Aut(X)."""
    one = m.unit()
    a, s, t = m.associator, m.braiding, m.tensor
    idm, lam, rho = m.identity, m.left_unitor, m.right_unitor
    if t(X, m.inverse(X)) != one or t(X, one) != X or t(one, X) != X:
        return (X,)
    if not (s(X, one).is_zero and s(one, X).is_zero):
        return (X, one)
    for f in arrows:
        if m.tensor_morphisms(f, idm(one)) != f or m.tensor_morphisms(idm(one), f) != f:
            return (X, f)
    for Y in objs:
        if m.tensor_morphisms(idm(X), lam(Y)) + a(X, one, Y) != m.tensor_morphisms(rho(X), idm(Y)):
            return (X, one, Y)
        if a(one, X, Y) + lam(t(X, Y)) != m.tensor_morphisms(lam(X), idm(Y)):
            return (one, X, Y)
        if m.tensor_morphisms(idm(X), rho(Y)) + a(X, Y, one) != rho(t(X, Y)):
            return (X, Y, one)
    return None


def check_pentagon(m: SkeletalModel, box: int = 3, parallel: int = 1) -> CoherenceReport:
    objs = m.objects(box)
    return _report("pentagon", m, box, partitioned(_pentagon_from, objs, parallel, m, objs))


def check_hexagons(m: SkeletalModel, box: int = 3, parallel: int = 1) -> tuple[CoherenceReport, CoherenceReport]:
    objs = m.objects(box)
    return (
        _report("hexagon_A", m, box, partitioned(_hexagon_from, objs, parallel, m, objs, False)),
        _report("hexagon_A_prime", m, box, partitioned(_hexagon_from, objs, parallel, m, objs, True)),
    )


def check_units(m: SkeletalModel, box: int = 3, parallel: int = 1) -> CoherenceReport:
    objs = m.objects(box)
    arrows = m.module.points(box)
    return _report("units", m, box, partitioned(_units_from, objs, parallel, m, objs, arrows))


def check_all(m: SkeletalModel, box: int = 3, parallel: int = 1) -> list[CoherenceReport]:
    return [check_pentagon(m, box, parallel), *check_hexagons(m, box, parallel), check_units(m, box, parallel)]


# ---------------------------------------------------------------------- #
# Mutation sweep
# ---------------------------------------------------------------------- #
@frozen
class Perturbation:
    component: str
    args: tuple[Element, ...]
    delta: Element
    model: SkeletalModel


def perturbations(m: SkeletalModel) -> Iterator[Perturbation]:
    """
    Every single-entry change of h or c by a generator of M at an argument
    tuple with no zero entry. The perturbed models are not validated.
    """
    table: TableCocycle = tabulate(m.kappa)
    nonzero = [x for x in m.group.enumerate() if not x.is_zero]
    for component, arity in (("h", 3), ("c", 2)):
        for args in itertools.product(nonzero, repeat=arity):
            for delta in m.module.generators():
                yield Perturbation(component, args, delta, SkeletalModel(table.perturbed(component, args, delta)))


def rejected(p: Perturbation, parallel: int = 1) -> list[str]:
    """Names of the checks that the perturbed model fails."""
    return [r.name for r in check_all(p.model, parallel=parallel) if not r.passed]
