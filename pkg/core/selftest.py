# core/selftest.py
"""
The acceptance suite behind `selftest`. Each check returns a
CriterionResult; nothing here raises on a failed property.
"""
import itertools
import logging
import time
from typing import Callable

from attrs import frozen

from core import catalog
from core.abgroup import FgAbGroup
from core.cocycle import (alternating_sum, classify, coboundary, cohomologous,
                          CoboundaryWitness, enumerate_cocycles, find_coboundary_witness, is_symmetric,
                          square_polarization_defect, realize, trace, trace_table, validate, w_form)
from core.forms import (brute_force_is_polar, diag, enumerate_bilinear_forms, enumerate_mod2_homs,
                        enumerate_quadratic_forms, is_polar, phi, polarization, psi, psi_preimage,
                        quadratic_tables, sym, validate_quadratic_table)
from core.model import SkeletalModel, check_all, perturbations, rejected
from core.strictify import can_strictify, polar_cover, strictify_cocycle

log = logging.getLogger(__name__)

SOURCES = [FgAbGroup.cyclic(2), FgAbGroup.cyclic(3), FgAbGroup.cyclic(4), FgAbGroup((2, 2))]
TARGETS = [FgAbGroup.cyclic(2), FgAbGroup.cyclic(4), FgAbGroup((2, 2))]
DESK_PAIRS = [(FgAbGroup.cyclic(2), FgAbGroup.cyclic(2)), (FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)),
              (FgAbGroup.cyclic(3), FgAbGroup.cyclic(3))]


@frozen
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0


def corpus():
    """Every quadratic form on the test sources into the test targets."""
    for G, M in itertools.product(SOURCES, TARGETS):
        yield from enumerate_quadratic_forms(G, M)


def nonpolar_example(settings: dict) -> tuple[bool, str]:
    kappa = catalog.nonpolar()
    report = validate(kappa)
    q = trace(kappa)
    G, M = kappa.group, kappa.module
    x2 = {x: M.element([x.coeffs[0] ** 2]) for x in G.enumerate()}
    ok = (report.valid and q.table() == x2 and is_polar(q) is None
          and not brute_force_is_polar(q, settings["max_candidates"]))
    return ok, f"valid={report.valid} trace={[str(v) for v in q.table().values()]} polar={is_polar(q) is not None}"


def em_bijectivity(settings: dict) -> tuple[bool, str]:
    details, ok = [], True
    for G, M in DESK_PAIRS:
        classes = classify(G, M, settings["enumerate_max_candidates"], settings["parallel"])
        tables = quadratic_tables(G, M, settings["max_candidates"], settings["parallel"])
        hit = {tuple(q.table()[x] for x in G.enumerate()) for q in classes}
        every = {tuple(t[x] for x in G.enumerate()) for t in tables}
        injective = True
        members = list(classes.items())
        for (qa, ka), (qb, kb) in itertools.product(members, repeat=2):
            for a, b in itertools.product(ka, kb):
                linked = find_coboundary_witness(a, b, settings["max_candidates"], settings["parallel"]) is not None
                if linked != (qa == qb):
                    injective = False
        ok &= hit == every and injective
        details.append(f"({G}, {M}): {len(classes)} classes, {len(every)} tables, injective={injective}")
    return ok, "; ".join(details)


def strictification_round_trip(settings: dict) -> tuple[bool, str]:
    count, bad = 0, []
    for q in corpus():
        t = is_polar(q)
        if t is None:
            continue
        count += 1
        kappa = strictify_cocycle(q, t)
        if not (kappa.h_is_zero and validate(kappa).valid and trace(kappa) == q):
            bad.append(q)
    return not bad, f"{count} polar forms, {len(bad)} failures"


def strictify_iff_polar(settings: dict) -> tuple[bool, str]:
    count, bad = 0, 0
    for q in corpus():
        count += 1
        decision = can_strictify(realize(q))
        if decision.polar != brute_force_is_polar(q, settings["max_candidates"]):
            bad += 1
    return bad == 0, f"{count} forms, {bad} disagreements"


def identity_suites(settings: dict) -> tuple[bool, str]:
    failures = 0
    checked = 0
    for G, M in DESK_PAIRS:
        pts = list(G.enumerate())
        for kappa in enumerate_cocycles(G, M, settings["enumerate_max_candidates"], settings["parallel"]):
            checked += 1
            W = w_form(kappa)
            q = trace(kappa)
            failures += sum(1 for x, y, z in itertools.product(pts, repeat=3)
                            if not alternating_sum(kappa, x, y, z).is_zero)
            failures += sum(1 for y, z in itertools.product(pts, repeat=2)
                            if not square_polarization_defect(kappa, y, z).is_zero)
            failures += int(not W.is_symmetric or W != polarization(q))
            failures += int(not validate_quadratic_table(G, trace_table(kappa)))
        for values in itertools.product(M.enumerate(), repeat=(len(pts) - 1) ** 2):
            nonzero = [x for x in pts if not x.is_zero]
            k = CoboundaryWitness.from_entries(G, M, dict(zip(itertools.product(nonzero, repeat=2), values)))
            d = coboundary(k)
            failures += int(not (validate(d).valid and is_symmetric(d) and trace(d).is_zero))
    return failures == 0, f"{checked} cocycles, {failures} failures"


def whitehead_exactness(settings: dict) -> tuple[bool, str]:
    failures = 0
    for G, M in itertools.product(SOURCES, TARGETS):
        for f in enumerate_mod2_homs(G.mod2_basis(), M):
            failures += int(not phi(psi(f)).is_zero)
        for q in enumerate_quadratic_forms(G, M):
            if phi(q).is_zero:
                failures += int(psi(psi_preimage(q)) != q)
        for B in enumerate_bilinear_forms(G, M):
            failures += int(sym(B) != phi(diag(B)))
    return failures == 0, f"{failures} failures"


def polar_cover_example(settings: dict) -> tuple[bool, str]:
    kappa = catalog.nonpolar()
    cover = polar_cover(kappa, settings["max_candidates"], settings["parallel"])
    M = kappa.module
    points = list(cover.P.sample_box(5))
    strict = cover.strict_cocycle
    bilinear = all(strict.c(m, n) == M.element([m.coeffs[0] * n.coeffs[0]]) for m in points for n in points)
    traced = all(strict.c(n, n) == trace(kappa)(cover.surjection(n)) for n in points)
    ok = cover.P == FgAbGroup.free(1) and bilinear and traced and cover.pi1 == M
    return ok, f"P={cover.P} c=mn:{bilinear} trace=q.f:{traced} cells={cover.cells_status}"


def coherence(settings: dict) -> tuple[bool, str]:
    details, ok = [], True
    for name in catalog.EXAMPLES:
        m = SkeletalModel.build(catalog.example(name), settings["box"])
        passed = all(r.passed for r in check_all(m, settings["box"], settings["parallel"]))
        signature = all(m.signature(x) == m.signature_form()(x) for x in m.objects(settings["box"]))
        swept = unrejected = 0
        if m.group.is_finite:
            for p in perturbations(m):
                swept += 1
                unrejected += int(not rejected(p))
        ok &= passed and signature and unrejected == 0
        details.append(f"{name}: coherent={passed} signature={signature} perturbations={swept} missed={unrejected}")
    koszul = SkeletalModel.build(catalog.koszul())
    parity = all(koszul.signature(x).coeffs[0] == x.coeffs[0] % 2 for x in koszul.objects(5))
    ok &= parity
    details.append(f"koszul parity={parity}")
    return ok, "; ".join(details)


def oracle_agreement(settings: dict) -> tuple[bool, str]:
    pairs = disagreements = 0
    for G, M in DESK_PAIRS:
        cocycles = enumerate_cocycles(G, M, settings["enumerate_max_candidates"], settings["parallel"])
        for a, b in itertools.product(cocycles, repeat=2):
            pairs += 1
            found = find_coboundary_witness(a, b, settings["max_candidates"], settings["parallel"]) is not None
            disagreements += int(found != cohomologous(a, b))
    return disagreements == 0, f"{pairs} pairs, {disagreements} disagreements"


CRITERIA: list[tuple[str, Callable[[dict], tuple[bool, str]]]] = [
    ("non-polar example reproduction", nonpolar_example),
    ("trace bijectivity at desk scale", em_bijectivity),
    ("strictification round trip", strictification_round_trip),
    ("strictifiable iff polar", strictify_iff_polar),
    ("cocycle identity suites", identity_suites),
    ("Whitehead exactness", whitehead_exactness),
    ("polar cover of the non-polar example", polar_cover_example),
    ("coherence checker", coherence),
    ("oracle agreement", oracle_agreement),
]


def run(settings: dict) -> list[CriterionResult]:
    results = []
    for number, (title, check) in enumerate(CRITERIA, start=1):
        start = time.perf_counter()
        try:
            passed, detail = check(settings)
        except Exception as e:
            log.exception("criterion %d crashed", number)
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(CriterionResult(number, title, passed, detail, round(time.perf_counter() - start, 3)))
        log.info("criterion %d %s: %s", number, "passed" if passed else "FAILED", detail)
    return results
