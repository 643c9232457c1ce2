# core/forms.py
import itertools
import logging
from typing import Iterator, Mapping, Sequence

from attrs import field, frozen

from core.abgroup import Element, FgAbGroup, Mod2Basis, total
from core.errors import GroupMismatch, IllDefined, NotAWitness, SearchSpaceTooLarge
from core.search import LinearSearch

log = logging.getLogger(__name__)


def _matrix(rows) -> tuple[tuple[Element, ...], ...]:
    return tuple(tuple(row) for row in rows)


def _check_source(form, x: Element) -> None:
    if x.group != form.source:
        raise GroupMismatch(f"{x} is not in the source {form.source}")


@frozen
class BilinearForm:
    """
    A Z-bilinear map G x G -> M stored by its values t_ij = t(g_i, g_j).
    Entry t_ij must be killed by the orders of both g_i and g_j.
    """
    source: FgAbGroup
    target: FgAbGroup
    matrix: tuple[tuple[Element, ...], ...] = field(converter=_matrix)

    def __attrs_post_init__(self):
        r = self.source.rank
        if len(self.matrix) != r or any(len(row) != r for row in self.matrix):
            raise GroupMismatch(f"bilinear matrix must be {r}x{r}")
        for i, row in enumerate(self.matrix):
            for j, t in enumerate(row):
                if t.group != self.target:
                    raise GroupMismatch(f"entry ({i},{j}) lives in {t.group}, expected {self.target}")
                for k in {i, j}:
                    n = self.source.orders[k]
                    if n and not (n * t).is_zero:
                        raise IllDefined(f"entry ({i},{j}) = {t} is not killed by the order {n} of generator {k}")

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "BilinearForm":
        z = target.zero()
        return cls(source, target, [[z] * source.rank for _ in range(source.rank)])

    @classmethod
    def from_coeffs(cls, source: FgAbGroup, target: FgAbGroup, rows) -> "BilinearForm":
        return cls(source, target, [[target.element(v) for v in row] for row in rows])

    def __call__(self, x: Element, y: Element) -> Element:
        return eval_bilinear(self, x, y)

    def transpose(self) -> "BilinearForm":
        r = self.source.rank
        return BilinearForm(self.source, self.target, [[self.matrix[j][i] for j in range(r)] for i in range(r)])

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        if (other.source, other.target) != (self.source, self.target):
            raise GroupMismatch("bilinear forms on different groups")
        return BilinearForm(self.source, self.target,
                            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)])

    @property
    def is_zero(self) -> bool:
        return all(t.is_zero for row in self.matrix for t in row)

    @property
    def is_symmetric(self) -> bool:
        return self == self.transpose()


def eval_bilinear(t: BilinearForm, x: Element, y: Element) -> Element:
    _check_source(t, x)
    _check_source(t, y)
    acc = [0] * t.target.rank
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if not b:
                continue
            for k, v in enumerate(t.matrix[i][j].coeffs):
                acc[k] += a * b * v
    return t.target.element(acc)


@frozen
class QuadraticForm:
    """
    A quadratic form q: G -> M stored by generator data.

    diag[i] = q(g_i); cross is the polarization on generator pairs,
    cross[i][j] = b(g_i, g_j), symmetric, with cross[i][i] = 2 q(g_i).
    Evaluation: q(sum x_i g_i) = sum x_i^2 q_i + sum_{i<j} x_i x_j b_ij.
    """
    source: FgAbGroup
    target: FgAbGroup
    diag: tuple[Element, ...] = field(converter=tuple)
    cross: tuple[tuple[Element, ...], ...] = field(converter=_matrix)

    def __attrs_post_init__(self):
        r = self.source.rank
        if len(self.diag) != r or len(self.cross) != r or any(len(row) != r for row in self.cross):
            raise GroupMismatch(f"quadratic form data must cover {r} generators")
        for i, q in enumerate(self.diag):
            if q.group != self.target:
                raise GroupMismatch(f"q_{i} lives in {q.group}, expected {self.target}")
            if self.cross[i][i] != 2 * q:
                raise IllDefined(f"b_{i}{i} must equal 2 q_{i}")
            n = self.source.orders[i]
            if n and not (2 * n * q).is_zero:
                raise IllDefined(f"generator {i}: 2*{n} * q_{i} = {2 * n * q} is not zero")
            if n and not (n * n * q).is_zero:
                raise IllDefined(f"generator {i}: {n}^2 * q_{i} = {n * n * q} is not zero")
        for i in range(r):
            for j in range(r):
                if i == j:
                    continue
                b = self.cross[i][j]
                if b != self.cross[j][i]:
                    raise IllDefined(f"polarization entries ({i},{j}) and ({j},{i}) differ")
                n = self.source.orders[i]
                if n and not (n * b).is_zero:
                    raise IllDefined(f"b_{i}{j} = {b} is not killed by the order {n} of generator {i}")

    @classmethod
    def from_data(cls, source: FgAbGroup, target: FgAbGroup, diag: Sequence[Element],
                  offdiag: Mapping[tuple[int, int], Element] | None = None) -> "QuadraticForm":
        """Build from q_i and b_ij for i < j (missing pairs are zero)."""
        r = source.rank
        offdiag = offdiag or {}
        for i, j in offdiag:
            if not 0 <= i < j < r:
                raise IllDefined(f"off-diagonal key ({i},{j}) must satisfy 0 <= i < j < {r}")
        cross = [[2 * diag[i] if i == j else offdiag.get((min(i, j), max(i, j)), target.zero())
                  for j in range(r)] for i in range(r)]
        return cls(source, target, diag, cross)

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "QuadraticForm":
        return cls.from_data(source, target, [target.zero()] * source.rank)

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.diag) and all(b.is_zero for row in self.cross for b in row)

    def offdiag(self) -> dict[tuple[int, int], Element]:
        r = self.source.rank
        return {(i, j): self.cross[i][j] for i in range(r) for j in range(i + 1, r)}

    def __call__(self, x: Element) -> Element:
        return eval_quadratic(self, x)

    def table(self) -> dict[Element, Element]:
        return {x: self(x) for x in self.source.enumerate()}

    def compose(self, f) -> "QuadraticForm":
        """q o f for a homomorphism f into the source."""
        if f.target != self.source:
            raise GroupMismatch(f"cannot compose a form on {self.source} with a map into {f.target}")
        gens = f.source.generators()
        imgs = [f(g) for g in gens]
        diag = [self(y) for y in imgs]
        offdiag = {(i, j): self(imgs[i] + imgs[j]) - diag[i] - diag[j]
                   for i in range(len(gens)) for j in range(i + 1, len(gens))}
        return QuadraticForm.from_data(f.source, self.target, diag, offdiag)


def eval_quadratic(q: QuadraticForm, x: Element) -> Element:
    _check_source(q, x)
    acc = [0] * q.target.rank
    xs = x.coeffs
    for i, a in enumerate(xs):
        if not a:
            continue
        for k, v in enumerate(q.diag[i].coeffs):
            acc[k] += a * a * v
        for j in range(i + 1, len(xs)):
            if xs[j]:
                for k, v in enumerate(q.cross[i][j].coeffs):
                    acc[k] += a * xs[j] * v
    return q.target.element(acc)


# ---------------------------------------------------------------------- #
# Table checks
# ---------------------------------------------------------------------- #
def quadratic_table_defect(group: FgAbGroup, table: Mapping[Element, Element]) -> tuple | None:
    """
    First tuple violating q(-x) = q(x) or
    q(x+y+z) + q(x) + q(y) + q(z) = q(y+z) + q(z+x) + q(x+y), else None.
    """
    points = list(group.enumerate())
    missing = [x for x in points if x not in table]
    if missing:
        raise IllDefined(f"table is missing {len(missing)} elements, first {missing[0]}")
    for x in points:
        if table[-x] != table[x]:
            return ("symmetry", x)
    for x, y, z in itertools.product(points, repeat=3):
        lhs = table[x + y + z] + table[x] + table[y] + table[z]
        rhs = table[y + z] + table[z + x] + table[x + y]
        if lhs != rhs:
            return ("three-term", x, y, z)
    return None


def validate_quadratic_table(group: FgAbGroup, table: Mapping[Element, Element]) -> bool:
    return quadratic_table_defect(group, table) is None


def quadratic_tables(group: FgAbGroup, target: FgAbGroup, max_candidates: int = 10 ** 6,
                     parallel: int = 1) -> list[dict[Element, Element]]:
    """Every map G -> M passing validate_quadratic_table, found by constrained search."""
    group.require_finite("quadratic_tables")
    target.require_finite("quadratic_tables")
    points = list(group.enumerate())
    search = LinearSearch(target)
    for x in points:
        search.variable(x, target.enumerate())
    for x in points:
        search.require([(search.var(-x), 1), (search.var(x), -1)])
    for x, y, z in itertools.product(points, repeat=3):
        search.require([(search.var(x + y + z), 1), (search.var(x), 1), (search.var(y), 1), (search.var(z), 1),
                        (search.var(y + z), -1), (search.var(z + x), -1), (search.var(x + y), -1)])
    search.guard("quadratic table search", max_candidates)
    return [search.assignment(s) for s in search.run(parallel)]


def enumerate_quadratic_forms(group: FgAbGroup, target: FgAbGroup) -> Iterator[QuadraticForm]:
    """Every well-defined generator datum (q_i, b_ij), lexicographically."""
    r = group.rank
    diag_domains = [target.killed_by(2 * n, n * n) for n in group.orders]
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    off_domains = [target.killed_by(group.orders[i], group.orders[j]) for i, j in pairs]
    for diag in itertools.product(*diag_domains):
        for off in itertools.product(*off_domains):
            yield QuadraticForm.from_data(group, target, diag, dict(zip(pairs, off)))


# ---------------------------------------------------------------------- #
# Polarization and polarity
# ---------------------------------------------------------------------- #
def polarization(q: QuadraticForm) -> BilinearForm:
    return BilinearForm(q.source, q.target, q.cross)


def is_polar(q: QuadraticForm) -> BilinearForm | None:
    """
    A witness t with t + t^T = polarization(q), or None.

    Off-diagonal entries split as t_ij = b_ij (i < j), t_ji = 0. The diagonal
    needs some m with 2m = 2 q_i and n_i m = 0; the least such m is taken.
    """
    G, M = q.source, q.target
    r = G.rank
    z = M.zero()
    rows = [[q.cross[i][j] if i < j else z for j in range(r)] for i in range(r)]
    for i, n in enumerate(G.orders):
        if n == 0:
            rows[i][i] = q.diag[i]
            continue
        target = 2 * q.diag[i]
        m = next((m for m in M.torsion_elements(n) if 2 * m == target), None)
        if m is None:
            log.debug("generator %d: no m with 2m = %s and %d m = 0", i, target, n)
            return None
        rows[i][i] = m
    return BilinearForm(G, M, rows)


def brute_force_polar_witness(q: QuadraticForm, max_candidates: int = 10 ** 6,
                              parallel: int = 1) -> BilinearForm | None:
    """Exhaustive search over well-defined bilinear matrices for t + t^T = b."""
    G, M = q.source, q.target
    r = G.rank
    if not M.is_finite and any(n == 0 for n in G.orders):
        raise SearchSpaceTooLarge("brute-force polarity search", None, max_candidates)
    search = LinearSearch(M)
    for i, j in itertools.product(range(r), repeat=2):
        search.variable((i, j), M.killed_by(G.orders[i], G.orders[j]))
    for i, j in itertools.product(range(r), repeat=2):
        if i <= j:
            search.require([(search.var((i, j)), 1), (search.var((j, i)), 1)], q.cross[i][j])
    search.guard("brute-force polarity search", max_candidates)
    found = search.first(parallel)
    if found is None:
        return None
    return BilinearForm(G, M, [list(found[i * r:(i + 1) * r]) for i in range(r)])


def brute_force_is_polar(q: QuadraticForm, max_candidates: int = 10 ** 6, parallel: int = 1) -> bool:
    return brute_force_polar_witness(q, max_candidates, parallel) is not None


# ---------------------------------------------------------------------- #
# G/2G maps and the Whitehead row
# ---------------------------------------------------------------------- #
@frozen
class Mod2Hom:
    """An F2-linear map G/2G -> 2M given by its values on a Mod2Basis."""
    basis: Mod2Basis
    target: FgAbGroup
    values: tuple[Element, ...] = field(converter=tuple)

    def __attrs_post_init__(self):
        if len(self.values) != self.basis.dimension:
            raise GroupMismatch(f"{len(self.values)} values for a basis of dimension {self.basis.dimension}")
        for k, v in enumerate(self.values):
            if v.group != self.target:
                raise GroupMismatch(f"value {k} lives in {v.group}, expected {self.target}")
            if not (2 * v).is_zero:
                raise IllDefined(f"value {k} = {v} is not 2-torsion")

    def __call__(self, x: Element) -> Element:
        coords = self.basis.coordinates(x)
        return total(self.target, (v for bit, v in zip(coords, self.values) if bit))


def decompose_polar(q: QuadraticForm, t: BilinearForm, basis: Mod2Basis | None = None) -> Mod2Hom:
    """q-bar(x) = q(x) - t(x,x), read off on the basis vectors."""
    if (t.source, t.target) != (q.source, q.target):
        raise GroupMismatch("witness and form live on different groups")
    if t + t.transpose() != polarization(q):
        raise NotAWitness("t + t^T differs from the polarization of q")
    basis = basis or q.source.mod2_basis()
    values = []
    for k in range(basis.dimension):
        x = basis.lift(k)
        values.append(q(x) - t(x, x))
    return Mod2Hom(basis, q.target, values)


def psi(f: Mod2Hom) -> QuadraticForm:
    """A homomorphism G/2G -> M viewed as a quadratic form on G."""
    G = f.basis.group
    return QuadraticForm.from_data(G, f.target, [f(g) for g in G.generators()])


def phi(q: QuadraticForm) -> BilinearForm:
    return polarization(q)


def diag(B: BilinearForm) -> QuadraticForm:
    """x -> B(x, x)."""
    r = B.source.rank
    offdiag = {(i, j): B.matrix[i][j] + B.matrix[j][i] for i in range(r) for j in range(i + 1, r)}
    return QuadraticForm.from_data(B.source, B.target, [B.matrix[i][i] for i in range(r)], offdiag)


def sym(B: BilinearForm) -> BilinearForm:
    return B + B.transpose()


def psi_preimage(q: QuadraticForm, basis: Mod2Basis | None = None) -> Mod2Hom:
    """The f with psi(f) = q; exists exactly when the polarization of q vanishes."""
    if not polarization(q).is_zero:
        raise IllDefined("polarization is not zero, so q is not additive on G/2G")
    basis = basis or q.source.mod2_basis()
    return Mod2Hom(basis, q.target, [q(basis.lift(k)) for k in range(basis.dimension)])


def enumerate_bilinear_forms(group: FgAbGroup, target: FgAbGroup) -> Iterator[BilinearForm]:
    """Every well-defined matrix t_ij, entries killed by n_i and n_j."""
    r = group.rank
    cells = [(i, j) for i in range(r) for j in range(r)]
    domains = [target.killed_by(group.orders[i], group.orders[j]) for i, j in cells]
    for values in itertools.product(*domains):
        yield BilinearForm(group, target, [list(values[i * r:(i + 1) * r]) for i in range(r)])


def enumerate_mod2_homs(basis: Mod2Basis, target: FgAbGroup) -> Iterator[Mod2Hom]:
    two_torsion = target.torsion_elements(2)
    for values in itertools.product(two_torsion, repeat=basis.dimension):
        yield Mod2Hom(basis, target, values)
