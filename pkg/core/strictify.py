# core/strictify.py
import logging

from attrs import frozen

from core.abgroup import FgAbGroup, Homomorphism, Mod2Basis
from core.cocycle import (AbelianCocycle3, CoboundaryWitness, StructuredCocycle,
                          find_coboundary_witness, pullback, trace)
from core.errors import NotFree, SearchSpaceTooLarge
from core.forms import BilinearForm, QuadraticForm, decompose_polar, is_polar

log = logging.getLogger(__name__)


def free_polarizing_t(q: QuadraticForm) -> BilinearForm:
    """t_ii = q_i, t_ij = b_ij above the diagonal, 0 below."""
    G, M = q.source, q.target
    if not G.is_free:
        raise NotFree(f"free_polarizing_t needs a free source, got {G}")
    z = M.zero()
    r = G.rank
    rows = [[q.diag[i] if i == j else (q.cross[i][j] if i < j else z) for j in range(r)] for i in range(r)]
    return BilinearForm(G, M, rows)


def strictify_cocycle(q: QuadraticForm, t: BilinearForm, basis: Mod2Basis | None = None) -> StructuredCocycle:
    """
    h = 0, c(x,y) = t(x,y) + sum_k xbar_k ybar_k qbar(beta_k), where
    qbar = q - t(x,x) is additive and factors through G/2G.
    Raises NotAWitness when t + t^T is not the polarization of q.
    """
    correction = decompose_polar(q, t, basis)
    return StructuredCocycle(t, correction)


@frozen
class StrictifyDecision:
    polar: bool
    form: QuadraticForm
    witness_t: BilinearForm | None = None
    strict_cocycle: StructuredCocycle | None = None


def can_strictify(kappa: AbelianCocycle3) -> StrictifyDecision:
    q = trace(kappa)
    t = is_polar(q)
    if t is None:
        log.info("trace on %s -> %s is not polar", q.source, q.target)
        return StrictifyDecision(False, q)
    return StrictifyDecision(True, q, t, strictify_cocycle(q, t))


# ---------------------------------------------------------------------- #
# Polar cover
# ---------------------------------------------------------------------- #
@frozen
class PolarCoverResult:
    """
    P free on the generators of G, f the generator-matched surjection,
    the strict cocycle on P with trace q o f, and (when found) the cells
    comparing it with kappa through the finite quotient of P.
    """
    P: FgAbGroup
    surjection: Homomorphism
    lifted_form: QuadraticForm
    witness_t: BilinearForm
    strict_cocycle: StructuredCocycle
    pi1: FgAbGroup
    quotient: FgAbGroup | None = None
    fiber_size: int | None = None
    comparison_cells: CoboundaryWitness | None = None
    cells_status: str = "absent"
    full: bool | None = None


def cover_quotient(group: FgAbGroup) -> FgAbGroup:
    """Z/(2 n_i) on every generator; the lifted strict data descends to it."""
    group.require_finite("cover_quotient")
    return FgAbGroup(tuple(2 * n for n in group.orders))


def polar_cover(kappa: AbelianCocycle3, max_candidates: int = 10 ** 6, parallel: int = 1) -> PolarCoverResult:
    G, M = kappa.group, kappa.module
    P = FgAbGroup.free(G.rank)
    f = Homomorphism.generator_matching(P, G)
    lifted = trace(kappa).compose(f)
    t = free_polarizing_t(lifted)
    strict = strictify_cocycle(lifted, t)

    if not (G.is_finite and M.is_finite):
        log.info("polar cover of %s: no comparison cells for an infinite group", G)
        return PolarCoverResult(P, f, lifted, t, strict, M, cells_status="infinite")

    Q = cover_quotient(G)
    fq = Homomorphism.generator_matching(Q, G)
    fiber = fq.kernel_size()
    descended = StructuredCocycle.bilinear_only(BilinearForm(Q, M, t.matrix))
    try:
        cells = find_coboundary_witness(descended, pullback(kappa, fq), max_candidates, parallel)
    except SearchSpaceTooLarge as e:
        log.warning("polar cover of %s: comparison cells skipped (%s)", G, e)
        return PolarCoverResult(P, f, lifted, t, strict, M, Q, fiber, cells_status="guard")
    status = "found" if cells is not None else "absent"
    return PolarCoverResult(P, f, lifted, t, strict, M, Q, fiber, cells, status)
