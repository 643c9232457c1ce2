# core/catalog.py
from typing import Callable

from core.abgroup import FgAbGroup
from core.cocycle import AbelianCocycle3, StructuredCocycle, TableCocycle
from core.forms import BilinearForm, Mod2Hom


def nonpolar() -> TableCocycle:
    """G = Z/2, M = Z/4, h(1,1,1) = 2, c(x,y) = xy. Trace x^2 is not polar."""
    G, M = FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    one = G.generator(0)
    return TableCocycle.from_entries(G, M, h={(one, one, one): M.element([2])}, c={(one, one): M.element([1])})


def koszul() -> StructuredCocycle:
    """G = Z, M = Z/2, h = 0, c(x,y) = xbar ybar: the sign rule (-1)^{xy}."""
    G, M = FgAbGroup.free(1), FgAbGroup.cyclic(2)
    return StructuredCocycle(BilinearForm.zero(G, M), Mod2Hom(G.mod2_basis(), M, [M.element([1])]))


def picard() -> StructuredCocycle:
    """G = Z/2 + Z/2, M = Z/2, t = 0, qbar = (1, 0). Symmetric, strict."""
    G, M = FgAbGroup((2, 2)), FgAbGroup.cyclic(2)
    return StructuredCocycle(BilinearForm.zero(G, M), Mod2Hom(G.mod2_basis(), M, [M.element([1]), M.zero()]))


EXAMPLES: dict[str, Callable[[], AbelianCocycle3]] = {
    "nonpolar": nonpolar,
    "koszul": koszul,
    "picard": picard,
}


def example(name: str) -> AbelianCocycle3:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(f"unknown example '{name}', choose from {', '.join(EXAMPLES)}") from None
