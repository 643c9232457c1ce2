# core/search.py
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from math import prod
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from attrs import define, field, frozen

from core.abgroup import Element, FgAbGroup
from core.errors import SearchSpaceTooLarge

log = logging.getLogger(__name__)


def partitioned(fn: Callable, items: Sequence, parallel: int = 1, *args) -> list:
    """
    fn(item, *args) for every item, results in item order.
    parallel > 1 spreads the items over worker processes; fn must be a
    module-level function and its arguments picklable.
    """
    if parallel <= 1 or len(items) <= 1:
        return [fn(item, *args) for item in items]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(fn, items, *(itertools.repeat(a) for a in args)))


@frozen
class LinearConstraint:
    """sum(coef * value[var]) == rhs in the target group."""
    terms: tuple[tuple[int, int], ...]
    rhs: Element

    @property
    def last(self) -> int:
        return max(var for var, _ in self.terms)

    def holds(self, values: Sequence[Element]) -> bool:
        acc = [-a for a in self.rhs.coeffs]
        for var, coef in self.terms:
            for i, a in enumerate(values[var].coeffs):
                acc[i] += coef * a
        return all((a % n if n else a) == 0 for a, n in zip(acc, self.rhs.group.orders))


@define
class LinearSearch:
    """
    Backtracking search over assignments of target-group elements to
    variables, subject to linear constraints.

    Variables are tried in creation order, values in domain order, so
    solutions come out lexicographically. A constraint is checked as soon
    as its last variable is assigned, which prunes every extension of a
    failing prefix.
    """
    target: FgAbGroup
    keys: list[Hashable] = field(factory=list)
    domains: list[list[Element]] = field(factory=list)
    constraints: dict[tuple, LinearConstraint] = field(factory=dict)
    infeasible: bool = False
    _index: dict[Hashable, int] = field(factory=dict)

    # ------------------------------------------------------------------ #
    # Building
    # ------------------------------------------------------------------ #
    def variable(self, key: Hashable, domain: Iterable[Element]) -> int:
        self._index[key] = len(self.keys)
        self.keys.append(key)
        self.domains.append(list(domain))
        return self._index[key]

    def var(self, key: Hashable) -> int | None:
        """Index of a variable, None for entries that are structurally zero."""
        return self._index.get(key)

    def require(self, terms: Iterable[tuple[int | None, int]], rhs: Element | None = None) -> None:
        """Add sum(coef * var) == rhs; None variables contribute nothing."""
        rhs = rhs if rhs is not None else self.target.zero()
        merged: dict[int, int] = {}
        for var, coef in terms:
            if var is None:
                continue
            merged[var] = merged.get(var, 0) + coef
        cleaned = tuple(sorted((v, c) for v, c in merged.items() if c))
        if not cleaned:
            if not rhs.is_zero:
                self.infeasible = True
            return
        self.constraints.setdefault((cleaned, rhs.coeffs), LinearConstraint(cleaned, rhs))

    # ------------------------------------------------------------------ #
    # Running
    # ------------------------------------------------------------------ #
    def candidate_count(self) -> int:
        return prod(len(d) for d in self.domains)

    def guard(self, what: str, limit: int) -> None:
        n = self.candidate_count()
        log.debug("%s: %d variables, %d candidates, %d constraints",
                  what, len(self.domains), n, len(self.constraints))
        if n > limit:
            log.warning("%s refused: %d candidates > %d", what, n, limit)
            raise SearchSpaceTooLarge(what, n, limit)

    def _checks_by_last(self) -> list[list[LinearConstraint]]:
        checks: list[list[LinearConstraint]] = [[] for _ in self.domains]
        for c in self.constraints.values():
            checks[c.last].append(c)
        return checks

    def solutions(self, first_value: Element | None = None) -> Iterator[tuple[Element, ...]]:
        if self.infeasible:
            return
        n = len(self.domains)
        checks = self._checks_by_last()
        values: list[Any] = [None] * n

        def extend(v: int) -> Iterator[tuple[Element, ...]]:
            if v == n:
                yield tuple(values)
                return
            domain = [first_value] if (v == 0 and first_value is not None) else self.domains[v]
            for value in domain:
                values[v] = value
                if all(c.holds(values) for c in checks[v]):
                    yield from extend(v + 1)
            values[v] = None

        yield from extend(0)

    def run(self, parallel: int = 1, first_only: bool = False) -> list[tuple[Element, ...]]:
        """All solutions (or just the least one), identical for every `parallel`."""
        if self.infeasible:
            return []
        if parallel <= 1 or not self.domains:
            found = self.solutions()
            return list(itertools.islice(found, 1)) if first_only else list(found)
        branches = partitioned(_solve_branch, self.domains[0], parallel, self, first_only)
        out = [s for branch in branches for s in branch]
        return out[:1] if first_only else out

    def first(self, parallel: int = 1) -> tuple[Element, ...] | None:
        found = self.run(parallel, first_only=True)
        return found[0] if found else None

    def assignment(self, solution: Sequence[Element]) -> dict[Hashable, Element]:
        return dict(zip(self.keys, solution))


def _solve_branch(value: Element, search: LinearSearch, first_only: bool) -> list[tuple[Element, ...]]:
    found = search.solutions(first_value=value)
    return list(itertools.islice(found, 1)) if first_only else list(found)
