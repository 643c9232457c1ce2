import itertools

import pytest

from core import catalog
from core.abgroup import FgAbGroup
from core.cocycle import CoboundaryWitness, TableCocycle, coboundary, trace
from core.errors import InvalidCocycle
from core.model import (SkeletalModel, check_all, check_hexagons, check_pentagon, check_units, perturbations,
                        rejected)


def test_build_nonpolar(nonpolar):
    m = SkeletalModel.build(nonpolar)
    assert len(m.objects()) == 2
    assert all(m.hom(x, x) == FgAbGroup.cyclic(4) for x in m.objects())
    assert m.hom(m.unit(), m.group.generator(0)) is None


def test_build_rejects_plain_product(z2, z4):
    one = z2.generator(0)
    kappa = TableCocycle.from_entries(z2, z4, c={(one, one): z4.element([1])})
    with pytest.raises(InvalidCocycle) as info:
        SkeletalModel.build(kappa)
    assert "identity_A" in info.value.report.failures()


def test_zero_model_is_strict_and_symmetric():
    G = M = FgAbGroup.cyclic(3)
    m = SkeletalModel.build(TableCocycle.zero(G, M))
    assert m.is_picard()
    assert all(r.passed for r in check_all(m))


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_builtins_are_coherent(name):
    m = SkeletalModel.build(catalog.example(name))
    pentagon = check_pentagon(m)
    hex_a, hex_a_prime = check_hexagons(m)
    units = check_units(m)
    assert pentagon.passed and hex_a.passed and hex_a_prime.passed and units.passed
    assert pentagon.exhaustive == m.group.is_finite
    assert m.signature_form() == trace(m.kappa)
    for x in m.objects():
        assert m.signature(x) == m.signature_form()(x)
        assert m.tensor(x, m.inverse(x)) == m.unit()


def test_pentagon_catches_associator_change(nonpolar):
    one = nonpolar.group.generator(0)
    broken = SkeletalModel(nonpolar.perturbed("h", (one, one, one), nonpolar.module.element([1])))
    report = check_pentagon(broken)
    assert not report.passed
    assert len(report.counterexample) == 4


def test_hexagon_catches_braiding_change(nonpolar):
    one = nonpolar.group.generator(0)
    broken = SkeletalModel(nonpolar.perturbed("c", (one, one), nonpolar.module.element([1])))
    assert not all(r.passed for r in check_hexagons(broken))


def test_units_catch_unnormalized_associator(z2, z4):
    one = z2.generator(0)
    broken = SkeletalModel(TableCocycle.from_entries(z2, z4, h={(one, z2.zero(), one): z4.element([1])}))
    report = check_units(broken)
    assert not report.passed
    assert report.counterexample == (one, z2.zero(), one)
    left = SkeletalModel(TableCocycle.from_entries(z2, z4, h={(z2.zero(), one, one): z4.element([2])}))
    assert check_units(left).counterexample == (z2.zero(), one, one)


def test_tensoring_with_the_unit_identity(picard):
    m = SkeletalModel.build(picard)
    one = m.unit()
    for f in m.module.enumerate():
        assert m.tensor_morphisms(f, m.identity(one)) == f == m.tensor_morphisms(m.identity(one), f)
    assert check_units(m).passed


def test_coboundary_model_is_picard():
    G = M = FgAbGroup.cyclic(3)
    k = CoboundaryWitness.from_entries(G, M, {(G.element([1]), G.element([2])): M.element([1])})
    m = SkeletalModel.build(coboundary(k))
    assert m.is_picard()
    assert all(r.passed for r in check_all(m))


def test_invariants(nonpolar, koszul):
    m = SkeletalModel.build(nonpolar)
    assert not m.is_picard()
    assert m.pi0() == FgAbGroup.cyclic(2) and m.pi1() == FgAbGroup.cyclic(4)
    assert m.signature(m.group.generator(0)).coeffs == (1,)
    assert m.signature(m.unit()).is_zero
    k = SkeletalModel.build(koszul)
    for x in k.objects(5):
        assert k.signature(x).coeffs == (x.coeffs[0] % 2,)


@pytest.mark.parametrize("name", ["nonpolar", "picard"])
def test_every_unit_perturbation_is_rejected(name):
    m = SkeletalModel.build(catalog.example(name))
    swept = list(perturbations(m))
    nonzero = m.group.cardinality - 1
    assert len(swept) == (nonzero ** 3 + nonzero ** 2) * m.module.rank
    for p in swept:
        assert rejected(p), f"{p.component}{tuple(str(x) for x in p.args)} + {p.delta} passed every check"


def test_checks_are_independent_of_parallelism(picard):
    m = SkeletalModel.build(picard)
    assert check_all(m, parallel=2) == check_all(m)
