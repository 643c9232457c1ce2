# core/cocycle.py
import itertools
import logging
from abc import ABC, abstractmethod
from typing import ClassVar, Mapping

from attrs import field, frozen

from core.abgroup import Element, FgAbGroup, Homomorphism, total
from core.errors import GroupMismatch, NotNormalized
from core.forms import BilinearForm, Mod2Hom, QuadraticForm
from core.search import LinearSearch, partitioned

log = logging.getLogger(__name__)


class AbelianCocycle3(ABC):
    """
    A pair (h, c) of maps G^3 -> M and G^2 -> M.

    Subclasses decide how the values are stored; everything else in this
    module only talks to h() and c(). Validity is not enforced at
    construction, use validate().
    """
    backing: ClassVar[str]
    group: FgAbGroup
    module: FgAbGroup

    @abstractmethod
    def h(self, x: Element, y: Element, z: Element) -> Element:
        pass

    @abstractmethod
    def c(self, x: Element, y: Element) -> Element:
        pass

    @property
    def h_is_zero(self) -> bool:
        """True when h vanishes by construction, not by inspection."""
        return False


def _elements(values) -> tuple[Element, ...]:
    return tuple(values)


@frozen
class TableCocycle(AbelianCocycle3):
    """
    Full value tables on a finite group. Entry (x, y, z) of h sits at the
    mixed-radix position (i_x * N + i_y) * N + i_z, N = |G|, and likewise for c.
    """
    backing: ClassVar[str] = "table"
    group: FgAbGroup
    module: FgAbGroup
    h_values: tuple[Element, ...] = field(converter=_elements)
    c_values: tuple[Element, ...] = field(converter=_elements)

    def __attrs_post_init__(self):
        n = self.group.cardinality
        if len(self.h_values) != n ** 3 or len(self.c_values) != n ** 2:
            raise GroupMismatch(f"tables on a group of order {n} need {n ** 3} h and {n ** 2} c entries")
        for v in self.h_values + self.c_values:
            if v.group != self.module:
                raise GroupMismatch(f"table value {v} lives in {v.group}, expected {self.module}")

    @classmethod
    def from_entries(cls, group: FgAbGroup, module: FgAbGroup,
                     h: Mapping[tuple[Element, Element, Element], Element] | None = None,
                     c: Mapping[tuple[Element, Element], Element] | None = None) -> "TableCocycle":
        """Entries not listed are zero."""
        n = group.cardinality
        z = module.zero()
        h_values = [z] * n ** 3
        c_values = [z] * n ** 2
        for (x, y, w), v in (h or {}).items():
            h_values[(group.index(x) * n + group.index(y)) * n + group.index(w)] = v
        for (x, y), v in (c or {}).items():
            c_values[group.index(x) * n + group.index(y)] = v
        return cls(group, module, h_values, c_values)

    @classmethod
    def zero(cls, group: FgAbGroup, module: FgAbGroup) -> "TableCocycle":
        return cls.from_entries(group, module)

    def h(self, x: Element, y: Element, z: Element) -> Element:
        g = self.group
        n = g.cardinality
        return self.h_values[(g.index(x) * n + g.index(y)) * n + g.index(z)]

    def c(self, x: Element, y: Element) -> Element:
        g = self.group
        return self.c_values[g.index(x) * g.cardinality + g.index(y)]

    def h_entries(self) -> dict[tuple[Element, Element, Element], Element]:
        """Non-zero values of h, keyed by argument triple."""
        pts = list(self.group.enumerate())
        return {args: v for args, v in zip(itertools.product(pts, repeat=3), self.h_values) if not v.is_zero}

    def c_entries(self) -> dict[tuple[Element, Element], Element]:
        pts = list(self.group.enumerate())
        return {args: v for args, v in zip(itertools.product(pts, repeat=2), self.c_values) if not v.is_zero}

    def perturbed(self, which: str, args: tuple[Element, ...], delta: Element) -> "TableCocycle":
        """A copy with delta added to one entry of h or c."""
        n = self.group.cardinality
        pos = 0
        for a in args:
            pos = pos * n + self.group.index(a)
        if which == "h":
            h = list(self.h_values)
            h[pos] = h[pos] + delta
            return TableCocycle(self.group, self.module, h, self.c_values)
        c = list(self.c_values)
        c[pos] = c[pos] + delta
        return TableCocycle(self.group, self.module, self.h_values, c)


@frozen
class StructuredCocycle(AbelianCocycle3):
    """
    h = 0 and c(x,y) = t(x,y) + sum_k xbar_k ybar_k qbar(beta_k).
    Evaluable on every group, finite or not.
    """
    backing: ClassVar[str] = "structured"
    bilinear: BilinearForm
    correction: Mod2Hom

    def __attrs_post_init__(self):
        if self.correction.basis.group != self.bilinear.source or self.correction.target != self.bilinear.target:
            raise GroupMismatch("correction and bilinear part live on different groups")

    @classmethod
    def bilinear_only(cls, t: BilinearForm) -> "StructuredCocycle":
        basis = t.source.mod2_basis()
        return cls(t, Mod2Hom(basis, t.target, [t.target.zero()] * basis.dimension))

    @property
    def group(self) -> FgAbGroup:
        return self.bilinear.source

    @property
    def module(self) -> FgAbGroup:
        return self.bilinear.target

    @property
    def h_is_zero(self) -> bool:
        return True

    def h(self, x: Element, y: Element, z: Element) -> Element:
        return self.module.zero()

    def c(self, x: Element, y: Element) -> Element:
        basis = self.correction.basis
        xs, ys = basis.coordinates(x), basis.coordinates(y)
        corr = total(self.module, (v for a, b, v in zip(xs, ys, self.correction.values) if a and b))
        return self.bilinear(x, y) + corr


@frozen
class CarryCocycle(AbelianCocycle3):
    """
    The carry representative of a quadratic form q, polar or not:

        c(x,y)   = sum_i x_i y_i q_i + sum_{i<j} x_i y_j b_ij
        h(x,y,z) = sum_i x_i * [y_i + z_i >= n_i] * n_i q_i   (torsion i)

    with x_i, y_i, z_i the reduced coefficients. Its trace is q.
    """
    backing: ClassVar[str] = "carry"
    form: QuadraticForm

    @property
    def group(self) -> FgAbGroup:
        return self.form.source

    @property
    def module(self) -> FgAbGroup:
        return self.form.target

    def h(self, x: Element, y: Element, z: Element) -> Element:
        terms = []
        for i, n in enumerate(self.group.orders):
            if n and x.coeffs[i] and y.coeffs[i] + z.coeffs[i] >= n:
                terms.append(x.coeffs[i] * n * self.form.diag[i])
        return total(self.module, terms)

    def c(self, x: Element, y: Element) -> Element:
        q = self.form
        acc = [0] * self.module.rank
        for i, a in enumerate(x.coeffs):
            if not a:
                continue
            for j, b in enumerate(y.coeffs):
                if not b or j < i:
                    continue
                entry = q.diag[i] if i == j else q.cross[i][j]
                for k, v in enumerate(entry.coeffs):
                    acc[k] += a * b * v
        return self.module.element(acc)


# ---------------------------------------------------------------------- #
# Validation
# ---------------------------------------------------------------------- #
CHECKS = ("group_cocycle", "normalized", "identity_A", "identity_Aprime")


@frozen
class ValidationReport:
    group_cocycle: bool
    normalized: bool
    identity_A: bool
    identity_Aprime: bool
    counterexamples: tuple[tuple[str, tuple[Element, ...]], ...] = ()
    exhaustive: bool = True
    box: int | None = None

    @property
    def valid(self) -> bool:
        return all(getattr(self, name) for name in CHECKS)

    def failures(self) -> list[str]:
        return [name for name in CHECKS if not getattr(self, name)]

    def counterexample(self, name: str) -> tuple[Element, ...] | None:
        return dict(self.counterexamples).get(name)


def _defects_from(u: Element, kappa: AbelianCocycle3, points: list[Element]) -> dict[str, tuple]:
    """First counterexample per check among tuples whose first coordinate is u."""
    h, c = kappa.h, kappa.c
    found: dict[str, tuple] = {}
    zero = kappa.group.zero()
    if not kappa.h_is_zero:
        for z in points:
            if not h(u, zero, z).is_zero:
                found.setdefault("normalized", (u, zero, z))
                break
        for x, y, z in itertools.product(points, repeat=3):
            lhs = h(x, y, z) + h(u, x + y, z) + h(u, x, y)
            rhs = h(u, x, y + z) + h(u + x, y, z)
            if lhs != rhs:
                found["group_cocycle"] = (u, x, y, z)
                break
    x = u
    for y, z in itertools.product(points, repeat=2):
        if "identity_A" not in found:
            if h(y, z, x) + c(x, y + z) + h(x, y, z) != c(x, z) + h(y, x, z) + c(x, y):
                found["identity_A"] = (x, y, z)
        if "identity_Aprime" not in found:
            if -h(z, x, y) + c(x + y, z) - h(x, y, z) != c(x, z) - h(x, z, y) + c(y, z):
                found["identity_Aprime"] = (x, y, z)
    return found


def validate(kappa: AbelianCocycle3, box: int = 3, parallel: int = 1) -> ValidationReport:
    """
    Check the 3-cocycle identity, h(x,0,z) = 0 and identities (A), (A').
    Exhaustive on finite groups, over sample_box(box) otherwise.
    """
    G = kappa.group
    points = G.points(box)
    per_u = partitioned(_defects_from, points, parallel, kappa, points)
    first: dict[str, tuple] = {}
    for found in per_u:
        for name, args in found.items():
            first.setdefault(name, args)
    report = ValidationReport(
        group_cocycle="group_cocycle" not in first,
        normalized="normalized" not in first,
        identity_A="identity_A" not in first,
        identity_Aprime="identity_Aprime" not in first,
        counterexamples=tuple((name, first[name]) for name in CHECKS if name in first),
        exhaustive=G.is_finite,
        box=None if G.is_finite else box,
    )
    log.debug("validate %s cocycle on %s: %s", kappa.backing, G, report.failures() or "ok")
    return report


def is_symmetric(kappa: AbelianCocycle3, box: int = 3) -> bool:
    points = kappa.group.points(box)
    return all((kappa.c(x, y) + kappa.c(y, x)).is_zero for x, y in itertools.product(points, repeat=2))


# ---------------------------------------------------------------------- #
# Trace and the identities it rests on
# ---------------------------------------------------------------------- #
def trace(kappa: AbelianCocycle3) -> QuadraticForm:
    """x -> c(x, x), read off as generator data."""
    G = kappa.group
    gens = G.generators()
    diag = [kappa.c(g, g) for g in gens]
    offdiag = {}
    for i, j in itertools.combinations(range(G.rank), 2):
        s = gens[i] + gens[j]
        offdiag[(i, j)] = kappa.c(s, s) - diag[i] - diag[j]
    return QuadraticForm.from_data(G, kappa.module, diag, offdiag)


def trace_table(kappa: AbelianCocycle3) -> dict[Element, Element]:
    return {x: kappa.c(x, x) for x in kappa.group.enumerate()}


def w_form(kappa: AbelianCocycle3) -> BilinearForm:
    """W(x,y) = c(x,y) + c(y,x) on generator pairs."""
    G = kappa.group
    G.require_finite("w_form")
    gens = G.generators()
    return BilinearForm(G, kappa.module, [[kappa.c(a, b) + kappa.c(b, a) for b in gens] for a in gens])


def alternating_sum(kappa: AbelianCocycle3, x: Element, y: Element, z: Element) -> Element:
    args = (x, y, z)
    terms = []
    for perm in itertools.permutations(range(3)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        value = kappa.h(*(args[p] for p in perm))
        terms.append(-value if inversions % 2 else value)
    return total(kappa.module, terms)


def square_polarization_defect(kappa: AbelianCocycle3, y: Element, z: Element) -> Element:
    """c(y+z, y+z) - c(y,y) - c(z,z) - W(y,z); zero for every abelian 3-cocycle."""
    c = kappa.c
    return c(y + z, y + z) - c(y, y) - c(z, z) - (c(y, z) + c(z, y))


def realize(q: QuadraticForm) -> CarryCocycle:
    return CarryCocycle(q)


# ---------------------------------------------------------------------- #
# Tables, pullbacks, coboundaries
# ---------------------------------------------------------------------- #
def tabulate(kappa: AbelianCocycle3) -> TableCocycle:
    if isinstance(kappa, TableCocycle):
        return kappa
    G = kappa.group
    pts = list(G.enumerate())
    h = [kappa.h(*args) for args in itertools.product(pts, repeat=3)]
    c = [kappa.c(*args) for args in itertools.product(pts, repeat=2)]
    return TableCocycle(G, kappa.module, h, c)


def pullback(kappa: AbelianCocycle3, f: Homomorphism) -> TableCocycle:
    """(h o f^3, c o f^2) on the finite source of f."""
    if f.target != kappa.group:
        raise GroupMismatch(f"cannot pull back along a map into {f.target}")
    pts = list(f.source.enumerate())
    img = [f(x) for x in pts]
    h = [kappa.h(*args) for args in itertools.product(img, repeat=3)]
    c = [kappa.c(*args) for args in itertools.product(img, repeat=2)]
    return TableCocycle(f.source, kappa.module, h, c)


def difference(kappa1: AbelianCocycle3, kappa2: AbelianCocycle3) -> TableCocycle:
    _same_groups(kappa1, kappa2)
    a, b = tabulate(kappa1), tabulate(kappa2)
    return TableCocycle(a.group, a.module,
                        [x - y for x, y in zip(a.h_values, b.h_values)],
                        [x - y for x, y in zip(a.c_values, b.c_values)])


def _same_groups(kappa1: AbelianCocycle3, kappa2: AbelianCocycle3) -> None:
    if (kappa1.group, kappa1.module) != (kappa2.group, kappa2.module):
        raise GroupMismatch(f"cocycles on ({kappa1.group}, {kappa1.module}) and ({kappa2.group}, {kappa2.module})")


@frozen
class CoboundaryWitness:
    """A map k: G^2 -> M on a finite group, dense table in index order."""
    group: FgAbGroup
    module: FgAbGroup
    k_values: tuple[Element, ...] = field(converter=_elements)

    def __attrs_post_init__(self):
        n = self.group.cardinality
        if len(self.k_values) != n ** 2:
            raise GroupMismatch(f"k on a group of order {n} needs {n ** 2} entries")

    @classmethod
    def from_entries(cls, group: FgAbGroup, module: FgAbGroup,
                     k: Mapping[tuple[Element, Element], Element] | None = None) -> "CoboundaryWitness":
        n = group.cardinality
        values = [module.zero()] * n ** 2
        for (x, y), v in (k or {}).items():
            values[group.index(x) * n + group.index(y)] = v
        return cls(group, module, values)

    def __call__(self, x: Element, y: Element) -> Element:
        return self.k_values[self.group.index(x) * self.group.cardinality + self.group.index(y)]

    def entries(self) -> dict[tuple[Element, Element], Element]:
        pts = list(self.group.enumerate())
        return {args: v for args, v in zip(itertools.product(pts, repeat=2), self.k_values) if not v.is_zero}

    @property
    def is_normalized(self) -> bool:
        z = self.group.zero()
        return all(self(x, z).is_zero and self(z, x).is_zero for x in self.group.enumerate())


def coboundary(k: CoboundaryWitness) -> TableCocycle:
    """(dk, k^T - k) with dk(x,y,z) = k(y,z) - k(x+y,z) + k(x,y+z) - k(x,y)."""
    if not k.is_normalized:
        raise NotNormalized("k(x,0) and k(0,y) must vanish")
    pts = list(k.group.enumerate())
    h = [k(y, z) - k(x + y, z) + k(x, y + z) - k(x, y) for x, y, z in itertools.product(pts, repeat=3)]
    c = [k(y, x) - k(x, y) for x, y in itertools.product(pts, repeat=2)]
    return TableCocycle(k.group, k.module, h, c)


def cohomologous(kappa1: AbelianCocycle3, kappa2: AbelianCocycle3) -> bool:
    """Same class iff same trace, the trace being injective on cohomology."""
    _same_groups(kappa1, kappa2)
    return trace(kappa1) == trace(kappa2)


def find_coboundary_witness(kappa1: AbelianCocycle3, kappa2: AbelianCocycle3,
                            max_candidates: int = 10 ** 6, parallel: int = 1) -> CoboundaryWitness | None:
    """Least normalized k with kappa1 - kappa2 = coboundary(k), by exhaustive search."""
    _same_groups(kappa1, kappa2)
    G, M = kappa1.group, kappa1.module
    G.require_finite("find_coboundary_witness")
    M.require_finite("find_coboundary_witness")
    d = difference(kappa1, kappa2)
    pts = list(G.enumerate())
    nonzero = [x for x in pts if not x.is_zero]
    search = LinearSearch(M)
    for x, y in itertools.product(nonzero, repeat=2):
        search.variable((x, y), M.enumerate())
    k = lambda a, b: search.var((a, b))
    for x, y in itertools.product(pts, repeat=2):
        search.require([(k(y, x), 1), (k(x, y), -1)], d.c(x, y))
    for x, y, z in itertools.product(pts, repeat=3):
        search.require([(k(y, z), 1), (k(x + y, z), -1), (k(x, y + z), 1), (k(x, y), -1)], d.h(x, y, z))
    search.guard("coboundary witness search", max_candidates)
    found = search.first(parallel)
    if found is None:
        return None
    return CoboundaryWitness.from_entries(G, M, search.assignment(found))


# ---------------------------------------------------------------------- #
# Enumeration oracle
# ---------------------------------------------------------------------- #
def cocycle_search(group: FgAbGroup, module: FgAbGroup) -> LinearSearch:
    """
    Unknowns h(x,y,z) and c(x,y) at all-nonzero arguments (normalization
    forces the rest), one constraint per instance of the 3-cocycle
    identity, (A) and (A').
    """
    group.require_finite("enumerate_cocycles")
    module.require_finite("enumerate_cocycles")
    pts = list(group.enumerate())
    nonzero = [x for x in pts if not x.is_zero]
    search = LinearSearch(module)
    for args in itertools.product(nonzero, repeat=3):
        search.variable(("h",) + args, module.enumerate())
    for args in itertools.product(nonzero, repeat=2):
        search.variable(("c",) + args, module.enumerate())
    h = lambda *a: search.var(("h",) + a)
    c = lambda *a: search.var(("c",) + a)
    for u, x, y, z in itertools.product(pts, repeat=4):
        search.require([(h(x, y, z), 1), (h(u, x + y, z), 1), (h(u, x, y), 1),
                        (h(u, x, y + z), -1), (h(u + x, y, z), -1)])
    for x, y, z in itertools.product(pts, repeat=3):
        search.require([(h(y, z, x), 1), (c(x, y + z), 1), (h(x, y, z), 1),
                        (c(x, z), -1), (h(y, x, z), -1), (c(x, y), -1)])
        search.require([(h(z, x, y), -1), (c(x + y, z), 1), (h(x, y, z), -1),
                        (c(x, z), -1), (h(x, z, y), 1), (c(y, z), -1)])
    return search


def enumerate_cocycles(group: FgAbGroup, module: FgAbGroup, max_candidates: int = 10 ** 7,
                       parallel: int = 1) -> list[TableCocycle]:
    search = cocycle_search(group, module)
    search.guard("cocycle enumeration", max_candidates)
    out = []
    for sol in search.run(parallel):
        entries = search.assignment(sol)
        h = {k[1:]: v for k, v in entries.items() if k[0] == "h"}
        c = {k[1:]: v for k, v in entries.items() if k[0] == "c"}
        out.append(TableCocycle.from_entries(group, module, h, c))
    log.info("enumerated %d abelian 3-cocycles on (%s, %s)", len(out), group, module)
    return out


def classify(group: FgAbGroup, module: FgAbGroup, max_candidates: int = 10 ** 7,
             parallel: int = 1) -> dict[QuadraticForm, list[TableCocycle]]:
    """Enumerated cocycles grouped by trace, classes in order of first appearance."""
    classes: dict[QuadraticForm, list[TableCocycle]] = {}
    for kappa in enumerate_cocycles(group, module, max_candidates, parallel):
        classes.setdefault(trace(kappa), []).append(kappa)
    return classes
