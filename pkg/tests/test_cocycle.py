import itertools

import pytest
from hypothesis import given, settings, strategies as st

from core import catalog
from core.abgroup import FgAbGroup, Homomorphism
from core.cocycle import (CarryCocycle, CoboundaryWitness, TableCocycle, alternating_sum, classify, coboundary,
                          cohomologous, difference, enumerate_cocycles, find_coboundary_witness, is_symmetric,
                          square_polarization_defect, pullback, realize, tabulate, trace, trace_table, validate, w_form)
from core.errors import GroupMismatch, InfiniteGroup, NotNormalized, SearchSpaceTooLarge
from core.forms import QuadraticForm, enumerate_quadratic_forms, polarization, validate_quadratic_table

DESK = [(FgAbGroup.cyclic(2), FgAbGroup.cyclic(2)), (FgAbGroup.cyclic(2), FgAbGroup.cyclic(4))]
ENUMERATED = [kappa for G, M in DESK for kappa in enumerate_cocycles(G, M)]


def bilinear_table(z2, z4):
    one = z2.generator(0)
    return TableCocycle.from_entries(z2, z4, c={(one, one): z4.element([1])})


def shifted(kappa: TableCocycle, k: CoboundaryWitness) -> TableCocycle:
    d = coboundary(k)
    return TableCocycle(kappa.group, kappa.module,
                        [a + b for a, b in zip(kappa.h_values, d.h_values)],
                        [a + b for a, b in zip(kappa.c_values, d.c_values)])


def test_nonpolar_example_is_valid(nonpolar):
    report = validate(nonpolar)
    assert report.valid
    assert report.exhaustive and report.box is None


def test_zero_cocycle_is_valid(z2, z4):
    assert validate(TableCocycle.zero(z2, z4)).valid


def test_plain_product_is_not_a_cocycle(z2, z4):
    report = validate(bilinear_table(z2, z4))
    assert not report.identity_A
    assert report.group_cocycle and report.normalized
    assert report.counterexample("identity_A") is not None
    assert "identity_A" in report.failures()


def test_structured_validation_is_boxed(koszul):
    report = validate(koszul, box=2)
    assert report.valid
    assert not report.exhaustive and report.box == 2


def test_symmetry(nonpolar, koszul, z2, z4):
    assert is_symmetric(TableCocycle.zero(z2, z4))
    assert is_symmetric(koszul)
    assert not is_symmetric(nonpolar)


def test_trace_of_nonpolar(nonpolar):
    q = trace(nonpolar)
    assert [v.coeffs for v in trace_table(nonpolar).values()] == [(0,), (1,)]
    assert q.diag[0].coeffs == (1,)


def test_w_form(nonpolar, koszul):
    W = w_form(nonpolar)
    assert W.matrix[0][0].coeffs == (2,)
    assert W == polarization(trace(nonpolar))
    with pytest.raises(InfiniteGroup):
        w_form(koszul)


def test_coboundary(z2, z4):
    one = z2.generator(0)
    assert coboundary(CoboundaryWitness.from_entries(z2, z4)) == TableCocycle.zero(z2, z4)
    d = coboundary(CoboundaryWitness.from_entries(z2, z4, {(one, one): z4.element([1])}))
    assert validate(d).valid
    assert is_symmetric(d)
    assert trace(d).is_zero


def normalized_witnesses(G, M):
    nonzero = [x for x in G.enumerate() if not x.is_zero]
    cells = list(itertools.product(nonzero, repeat=2))
    for values in itertools.product(M.enumerate(), repeat=len(cells)):
        yield CoboundaryWitness.from_entries(G, M, dict(zip(cells, values)))


@pytest.mark.parametrize("G,M", [(FgAbGroup.cyclic(3), FgAbGroup.cyclic(3)), (FgAbGroup.cyclic(4), FgAbGroup.cyclic(2))])
def test_every_coboundary_is_a_symmetric_cocycle(G, M):
    for k in normalized_witnesses(G, M):
        d = coboundary(k)
        assert validate(d).valid, k.entries()
        assert is_symmetric(d) and trace(d).is_zero


def test_coboundary_braiding_sign():
    G = M = FgAbGroup.cyclic(3)
    one, two = G.element([1]), G.element([2])
    d = coboundary(CoboundaryWitness.from_entries(G, M, {(one, two): M.element([1])}))
    assert d.c(one, two) == M.element([2]) and d.c(two, one) == M.element([1])


def test_coboundary_needs_normalized_k(z2, z4):
    k = CoboundaryWitness.from_entries(z2, z4, {(z2.zero(), z2.generator(0)): z4.element([1])})
    assert not k.is_normalized
    with pytest.raises(NotNormalized):
        coboundary(k)


def test_cohomologous(nonpolar, z2, z4):
    assert cohomologous(nonpolar, nonpolar)
    assert not cohomologous(nonpolar, TableCocycle.zero(z2, z4))
    with pytest.raises(GroupMismatch):
        cohomologous(nonpolar, TableCocycle.zero(z2, z2))


def test_shift_by_coboundary_keeps_the_class():
    G = M = FgAbGroup.cyclic(3)
    k0 = CoboundaryWitness.from_entries(G, M, {(G.element([1]), G.element([2])): M.element([1])})
    zero = TableCocycle.zero(G, M)
    moved = shifted(zero, k0)
    assert moved != zero
    assert validate(moved).valid
    assert cohomologous(moved, zero)
    found = find_coboundary_witness(moved, zero)
    assert found is not None
    assert difference(moved, zero) == coboundary(found)


def test_witness_search(nonpolar, z2, z4):
    assert find_coboundary_witness(nonpolar, nonpolar) == CoboundaryWitness.from_entries(z2, z4)
    assert find_coboundary_witness(nonpolar, TableCocycle.zero(z2, z4)) is None


def test_witness_search_guard(z4):
    G = FgAbGroup.cyclic(4)
    with pytest.raises(SearchSpaceTooLarge) as info:
        find_coboundary_witness(TableCocycle.zero(G, z4), TableCocycle.zero(G, z4), max_candidates=1000)
    assert info.value.limit == 1000


def test_enumeration_counts(z2, z4, nonpolar):
    assert len(enumerate_cocycles(z2, z2)) == 2
    cocycles = enumerate_cocycles(z2, z4)
    assert len(cocycles) == 4
    assert nonpolar in cocycles
    classes = classify(z2, z4)
    assert len(classes) == 4
    assert all(len(members) == 1 for members in classes.values())
    assert len(classify(z2, z2)) == 2


def test_enumeration_is_independent_of_parallelism(z2, z4):
    assert enumerate_cocycles(z2, z4, parallel=2) == enumerate_cocycles(z2, z4)


def test_enumeration_hits_every_form(z2, z4):
    traces = {trace(k) for k in enumerate_cocycles(z2, z4)}
    assert traces == set(enumerate_quadratic_forms(z2, z4))


@pytest.mark.parametrize("kappa", ENUMERATED, ids=lambda k: f"{k.group}->{k.module}")
def test_trace_identities_on_enumerated_cocycles(kappa):
    pts = list(kappa.group.enumerate())
    for x, y, z in itertools.product(pts, repeat=3):
        assert alternating_sum(kappa, x, y, z).is_zero
    for y, z in itertools.product(pts, repeat=2):
        assert square_polarization_defect(kappa, y, z).is_zero
    W = w_form(kappa)
    assert W.is_symmetric and W == polarization(trace(kappa))
    assert validate_quadratic_table(kappa.group, trace_table(kappa))
    if is_symmetric(kappa):
        assert all((2 * v).is_zero for v in trace_table(kappa).values())
        assert polarization(trace(kappa)).is_zero


@pytest.mark.parametrize("a,b", list(itertools.product(ENUMERATED, repeat=2)))
def test_trace_agrees_with_witness_search(a, b):
    if (a.group, a.module) != (b.group, b.module):
        return
    assert cohomologous(a, b) == (find_coboundary_witness(a, b) is not None)


def test_carry_realizes_nonpolar_example(z2, z4, nonpolar):
    q = QuadraticForm.from_data(z2, z4, [z4.element([1])])
    kappa = realize(q)
    assert isinstance(kappa, CarryCocycle)
    assert tabulate(kappa) == nonpolar


CARRY_FORMS = [q for G, M in itertools.product(
    [FgAbGroup.cyclic(3), FgAbGroup.cyclic(4), FgAbGroup((2, 2)), FgAbGroup((2, 0))],
    [FgAbGroup.cyclic(4), FgAbGroup((2, 2))]) for q in enumerate_quadratic_forms(G, M)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CARRY_FORMS))
def test_carry_cocycle_has_the_right_trace(q):
    kappa = realize(q)
    assert validate(kappa, box=2).valid
    assert trace(kappa) == q
    for x in q.source.points(2):
        assert kappa.c(x, x) == q(x)


def test_pullback_and_difference(nonpolar, z2):
    z4 = FgAbGroup.cyclic(4)
    f = Homomorphism.generator_matching(z4, z2)
    pulled = pullback(nonpolar, f)
    assert validate(pulled).valid
    assert trace(pulled) == trace(nonpolar).compose(f)
    assert all(v.is_zero for v in difference(nonpolar, nonpolar).c_values)


def test_table_shape_checked(z2, z4):
    with pytest.raises(GroupMismatch):
        TableCocycle(z2, z4, [z4.zero()] * 7, [z4.zero()] * 4)


def test_catalog_examples_validate():
    for name in catalog.EXAMPLES:
        assert validate(catalog.example(name)).valid


def test_classes_on_z3_are_linked_exactly_by_witnesses():
    G = M = FgAbGroup.cyclic(3)
    classes = classify(G, M)
    assert len(classes) == 3
    distinct = {coboundary(k) for k in normalized_witnesses(G, M)}
    assert all(len(members) == len(distinct) for members in classes.values())
    assert set(classes[QuadraticForm.zero(G, M)]) == distinct
    for (qa, ka), (qb, kb) in itertools.product(classes.items(), repeat=2):
        for a, b in itertools.product(ka, kb):
            found = find_coboundary_witness(a, b)
            assert (found is not None) == (qa == qb) == cohomologous(a, b)
            if found is not None:
                assert difference(a, b) == coboundary(found)
