"""Binary constraint structures and outcome-correspondence reasoning.

A Bcs is a set of variables with finite ordered domains plus binary
constraints (correspondences) between pairs of variables. This module holds
the relation algebra (compose / intersect / inverse), path-consistency
propagation to the greatest fixed point of the transitivity, intersection,
reflexivity and symmetry rules, and an exact backtracking oracle used as
ground truth throughout the test suite.

Relations are stored as per-source-value bitmasks over the target domain,
which keeps propagation and the oracle fast without any dependencies.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InputError


@dataclass(frozen=True)
class Variable:
    id: str
    domain: tuple[str, ...]

    def __post_init__(self):
        if not self.domain:
            raise InputError(f"variable {self.id!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise InputError(f"variable {self.id!r} has duplicate domain values")


@dataclass(frozen=True)
class Correspondence:
    """A boolean relation between the domains of two variables.

    ``rows[i]`` is a bitmask over the target domain: bit j is set iff the
    pair (source_domain[i], target_domain[j]) is in the relation.
    """

    source: str
    target: str
    source_domain: tuple[str, ...]
    target_domain: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.source_domain):
            raise InputError("relation rows do not match the source domain")
        full = (1 << len(self.target_domain)) - 1
        if any(r & ~full for r in self.rows):
            raise InputError("relation rows exceed the target domain")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_pairs(cls, source: str, target: str,
                   source_domain: Sequence[str], target_domain: Sequence[str],
                   pairs: Iterable[tuple[str, str]]) -> "Correspondence":
        sd, td = tuple(source_domain), tuple(target_domain)
        sidx = {v: i for i, v in enumerate(sd)}
        tidx = {v: i for i, v in enumerate(td)}
        rows = [0] * len(sd)
        for x, y in pairs:
            if x not in sidx or y not in tidx:
                raise InputError(f"pair ({x!r}, {y!r}) is outside the declared domains")
            rows[sidx[x]] |= 1 << tidx[y]
        return cls(source, target, sd, td, tuple(rows))

    @classmethod
    def full(cls, source: str, target: str,
             source_domain: Sequence[str], target_domain: Sequence[str]) -> "Correspondence":
        td = tuple(target_domain)
        mask = (1 << len(td)) - 1
        return cls(source, target, tuple(source_domain), td,
                   tuple(mask for _ in source_domain))

    @classmethod
    def empty(cls, source: str, target: str,
              source_domain: Sequence[str], target_domain: Sequence[str]) -> "Correspondence":
        return cls(source, target, tuple(source_domain), tuple(target_domain),
                   tuple(0 for _ in source_domain))

    @classmethod
    def identity(cls, var: str, domain: Sequence[str]) -> "Correspondence":
        d = tuple(domain)
        return cls(var, var, d, d, tuple(1 << i for i in range(len(d))))

    # -- views --------------------------------------------------------------

    def pairs(self) -> list[tuple[str, str]]:
        out = []
        for i, row in enumerate(self.rows):
            for j in range(len(self.target_domain)):
                if row >> j & 1:
                    out.append((self.source_domain[i], self.target_domain[j]))
        return out

    def image(self, value: str) -> tuple[str, ...]:
        i = self.source_domain.index(value)
        row = self.rows[i]
        return tuple(v for j, v in enumerate(self.target_domain) if row >> j & 1)

    def contains(self, x: str, y: str) -> bool:
        i = self.source_domain.index(x)
        j = self.target_domain.index(y)
        return bool(self.rows[i] >> j & 1)

    def is_everywhere_empty(self) -> bool:
        return all(r == 0 for r in self.rows)

    def complement(self) -> "Correspondence":
        mask = (1 << len(self.target_domain)) - 1
        return Correspondence(self.source, self.target, self.source_domain,
                              self.target_domain, tuple(r ^ mask for r in self.rows))

    def subset_of(self, other: "Correspondence") -> bool:
        if (self.source_domain, self.target_domain) != (other.source_domain, other.target_domain):
            raise InputError("relations over different domains are not comparable")
        return all(r & ~s == 0 for r, s in zip(self.rows, other.rows))


def _transpose_rows(rows: Sequence[int], n_target: int) -> tuple[int, ...]:
    out = [0] * n_target
    for i, row in enumerate(rows):
        r = row
        while r:
            j = (r & -r).bit_length() - 1
            out[j] |= 1 << i
            r &= r - 1
    return tuple(out)


def _compose_rows(rows_ab: Sequence[int], rows_bc: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in rows_ab:
        acc = 0
        r = row
        while r:
            j = (r & -r).bit_length() - 1
            acc |= rows_bc[j]
            r &= r - 1
        out.append(acc)
    return tuple(out)


def compose(phi: Correspondence, psi: Correspondence) -> Correspondence:
    """Relational composition: x is related to z iff some y has (x,y) in phi
    and (y,z) in psi. The paper-order counterpart of psi ∘ phi."""
    if phi.target != psi.source or phi.target_domain != psi.source_domain:
        raise InputError(
            f"cannot compose {phi.source}->{phi.target} with {psi.source}->{psi.target}")
    return Correspondence(phi.source, psi.target, phi.source_domain,
                          psi.target_domain, _compose_rows(phi.rows, psi.rows))


def intersect(phi: Correspondence, xi: Correspondence) -> Correspondence:
    if (phi.source, phi.target) != (xi.source, xi.target) or \
            (phi.source_domain, phi.target_domain) != (xi.source_domain, xi.target_domain):
        raise InputError("can only intersect relations over the same variable pair")
    return Correspondence(phi.source, phi.target, phi.source_domain, phi.target_domain,
                          tuple(a & b for a, b in zip(phi.rows, xi.rows)))


def inverse(phi: Correspondence) -> Correspondence:
    return Correspondence(phi.target, phi.source, phi.target_domain, phi.source_domain,
                          _transpose_rows(phi.rows, len(phi.target_domain)))


@dataclass(frozen=True)
class Bcs:
    """Variables with ordered domains plus binary constraints.

    Duplicate constraints on a pair (in either direction) are permitted and
    kept; propagation and the oracle intersect them.
    """

    variables: tuple[Variable, ...]
    constraints: tuple[Correspondence, ...]

    def __post_init__(self):
        ids = [v.id for v in self.variables]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate variable ids")
        by_id = {v.id: v for v in self.variables}
        for c in self.constraints:
            if c.source not in by_id or c.target not in by_id:
                raise InputError(f"constraint {c.source}->{c.target} references unknown variables")
            if c.source_domain != by_id[c.source].domain or \
                    c.target_domain != by_id[c.target].domain:
                raise InputError(
                    f"constraint {c.source}->{c.target} domains do not match the variables")

    @classmethod
    def create(cls, variables: Sequence[tuple[str, Sequence[str]]],
               constraints: Iterable[Correspondence] = ()) -> "Bcs":
        return cls(tuple(Variable(i, tuple(d)) for i, d in variables), tuple(constraints))

    def var(self, var_id: str) -> Variable:
        for v in self.variables:
            if v.id == var_id:
                return v
        raise InputError(f"unknown variable {var_id!r}")

    def index(self, var_id: str) -> int:
        for i, v in enumerate(self.variables):
            if v.id == var_id:
                return i
        raise InputError(f"unknown variable {var_id!r}")

    def domain(self, var_id: str) -> tuple[str, ...]:
        return self.var(var_id).domain

    def with_constraints(self, extra: Iterable[Correspondence]) -> "Bcs":
        return Bcs(self.variables, self.constraints + tuple(extra))

    def constraint_pairs(self, x: str, y: str) -> list[Correspondence]:
        """All constraints between x and y, both directions, as given."""
        return [c for c in self.constraints
                if {c.source, c.target} == {x, y} or
                (x == y and c.source == x and c.target == x)]


@dataclass(frozen=True)
class Assignment:
    """One value per variable."""

    values: Mapping[str, str]

    def __getitem__(self, var_id: str) -> str:
        return self.values[var_id]

    def satisfies(self, bcs: Bcs) -> bool:
        for v in bcs.variables:
            if v.id not in self.values or self.values[v.id] not in v.domain:
                return False
        return all(c.contains(self.values[c.source], self.values[c.target])
                   for c in bcs.constraints)

    def as_tuple(self, bcs: Bcs) -> tuple[str, ...]:
        return tuple(self.values[v.id] for v in bcs.variables)


def _normalized_pairs(bcs: Bcs) -> dict[tuple[int, int], list[int]]:
    """One relation per variable pair (i <= j by position), the intersection of
    all given constraints in both directions; the full relation when none;
    identity (restricted by self-loop constraints) on the diagonal."""
    n = len(bcs.variables)
    sizes = [len(v.domain) for v in bcs.variables]
    pos = {v.id: i for i, v in enumerate(bcs.variables)}
    rel: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        for j in range(i, n):
            if i == j:
                rel[(i, i)] = [1 << x for x in range(sizes[i])]
            else:
                full = (1 << sizes[j]) - 1
                rel[(i, j)] = [full] * sizes[i]
    for c in bcs.constraints:
        i, j = pos[c.source], pos[c.target]
        if i == j:
            rows = rel[(i, i)]
            for x in range(sizes[i]):
                rows[x] &= c.rows[x]
        elif i < j:
            rows = rel[(i, j)]
            for x in range(sizes[i]):
                rows[x] &= c.rows[x]
        else:
            rows = rel[(j, i)]
            t = _transpose_rows(c.rows, sizes[j])
            for x in range(sizes[j]):
                rows[x] &= t[x]
    return rel


class _PairView:
    """Directed read/write access to the i<=j relation store used by propagation."""

    def __init__(self, rel: dict[tuple[int, int], list[int]], sizes: list[int]):
        self.rel = rel
        self.sizes = sizes

    def rows(self, a: int, b: int) -> list[int]:
        if a <= b:
            return self.rel[(a, b)]
        return list(_transpose_rows(self.rel[(b, a)], self.sizes[a]))

    def assign(self, a: int, b: int, rows: Sequence[int]) -> bool:
        """Store the directed relation a->b; returns True when it shrank."""
        if a <= b:
            stored, new = self.rel[(a, b)], list(rows)
        else:
            stored, new = self.rel[(b, a)], list(_transpose_rows(rows, self.sizes[b]))
        if new == stored:
            return False
        self.rel[(a if a <= b else b, b if a <= b else a)][:] = new
        return True


@dataclass(frozen=True)
class PropagatedBcs:
    """The greatest fixed point of the inference rules over all variable pairs.

    ``psi`` maps every ordered pair (including the diagonal) to its minimal
    derived correspondence; ``initial`` holds the normalized input relations
    for narrowing reports; ``has_empty`` records whether some derived
    correspondence is everywhere-empty (the refutation signal).
    """

    bcs: Bcs
    psi: Mapping[tuple[str, str], Correspondence]
    initial: Mapping[tuple[str, str], Correspondence]
    has_empty: bool
    sweeps: int | None = None

    def pair(self, x: str, y: str) -> Correspondence:
        key = (x, y)
        if key not in self.psi:
            raise InputError(f"no variable pair ({x!r}, {y!r})")
        return self.psi[key]

    def narrowed(self) -> bool:
        return any(self.psi[k].rows != self.initial[k].rows for k in self.psi)


def _package(bcs: Bcs, rel: dict[tuple[int, int], list[int]],
             init: dict[tuple[int, int], list[int]], sweeps: int | None) -> PropagatedBcs:
    names = [v.id for v in bcs.variables]
    doms = [v.domain for v in bcs.variables]

    def corr(i, j, rows):
        return Correspondence(names[i], names[j], doms[i], doms[j], tuple(rows))

    psi: dict[tuple[str, str], Correspondence] = {}
    initial: dict[tuple[str, str], Correspondence] = {}
    n = len(names)
    for i in range(n):
        for j in range(n):
            rows = rel[(i, j)] if i <= j else _transpose_rows(rel[(j, i)], len(doms[i]))
            rows0 = init[(i, j)] if i <= j else _transpose_rows(init[(j, i)], len(doms[i]))
            psi[(names[i], names[j])] = corr(i, j, rows)
            initial[(names[i], names[j])] = corr(i, j, rows0)
    has_empty = any(c.is_everywhere_empty() for c in psi.values())
    return PropagatedBcs(bcs, psi, initial, has_empty, sweeps)


def path_consistency(bcs: Bcs) -> PropagatedBcs:
    """Worklist propagation of the transitivity/intersection/symmetry/
    reflexivity rules to their unique greatest fixed point.

    The result is bit-identical to the naive full-sweep loop in
    :func:`path_consistency_sweeps`; empty relations are a legitimate result
    signaling unsatisfiability evidence, never an error.
    """
    n = len(bcs.variables)
    sizes = [len(v.domain) for v in bcs.variables]
    rel = _normalized_pairs(bcs)
    init = {k: list(v) for k, v in rel.items()}
    view = _PairView(rel, sizes)

    queue = deque(sorted(rel.keys()))
    queued = set(queue)

    def touch(a: int, b: int) -> None:
        key = (min(a, b), max(a, b))
        if key not in queued:
            queued.add(key)
            queue.append(key)

    while queue:
        a, b = queue.popleft()
        queued.discard((a, b))
        for k in range(n):
            # shrink (a,k) through b, and (b,k) through a
            for (x, t, y) in ((a, b, k), (b, a, k)):
                via = _compose_rows(view.rows(x, t), view.rows(t, y))
                cur = view.rows(x, y)
                new = [c & v for c, v in zip(cur, via)]
                if view.assign(x, y, new):
                    touch(x, y)
    return _package(bcs, rel, init, None)


def path_consistency_sweeps(bcs: Bcs) -> PropagatedBcs:
    """Naive repeated-inference loop: full sweeps over all ordered variable
    triples until a sweep makes no progress. Records the sweep count, which is
    bounded by (number of variables)^2 * (max domain size)^2."""
    n = len(bcs.variables)
    sizes = [len(v.domain) for v in bcs.variables]
    rel = _normalized_pairs(bcs)
    init = {k: list(v) for k, v in rel.items()}
    view = _PairView(rel, sizes)

    sweeps = 0
    progress = True
    while progress:
        progress = False
        sweeps += 1
        for x in range(n):
            for t in range(n):
                for y in range(n):
                    via = _compose_rows(view.rows(x, t), view.rows(t, y))
                    cur = view.rows(x, y)
                    new = [c & v for c, v in zip(cur, via)]
                    if view.assign(x, y, new):
                        progress = True
    return _package(bcs, rel, init, sweeps)


def enumerate_satisfying(bcs: Bcs, limit: int | None = None) -> list[Assignment]:
    """Backtracking enumeration of satisfying assignments.

    Variables are assigned in listed order, values tried in domain order, with
    forward checking against all constraints touching assigned variables; the
    output order is deterministic. Returns at most `limit` assignments when
    given. This oracle deliberately uses no propagation-derived information.
    """
    if limit is not None and limit <= 0:
        return []
    n = len(bcs.variables)
    sizes = [len(v.domain) for v in bcs.variables]
    rel = _normalized_pairs(bcs)

    directed: dict[tuple[int, int], tuple[int, ...]] = {}
    for (i, j), rows in rel.items():
        if i == j:
            continue
        directed[(i, j)] = tuple(rows)
        directed[(j, i)] = _transpose_rows(rows, sizes[j])

    cand = []
    for i in range(n):
        mask = 0
        diag = rel[(i, i)]
        for x in range(sizes[i]):
            if diag[x] >> x & 1:
                mask |= 1 << x
        cand.append(mask)

    names = [v.id for v in bcs.variables]
    domains = [v.domain for v in bcs.variables]
    found: list[Assignment] = []
    chosen = [0] * n

    def backtrack(depth: int, masks: list[int]) -> bool:
        if depth == n:
            found.append(Assignment({names[i]: domains[i][chosen[i]] for i in range(n)}))
            return limit is not None and len(found) >= limit
        avail = masks[depth]
        while avail:
            x = (avail & -avail).bit_length() - 1
            avail &= avail - 1
            chosen[depth] = x
            nxt = list(masks)
            dead = False
            for j in range(depth + 1, n):
                if (depth, j) in directed:
                    nxt[j] &= directed[(depth, j)][x]
                if nxt[j] == 0:
                    dead = True
                    break
            if not dead and backtrack(depth + 1, nxt):
                return True
        return False

    backtrack(0, cand)
    return found


def _check_claim(bcs: Bcs, claim: Correspondence) -> None:
    for end in (claim.source, claim.target):
        bcs.var(end)
    if claim.source_domain != bcs.domain(claim.source) or \
            claim.target_domain != bcs.domain(claim.target):
        raise InputError("claim domains do not match the structure")


def implies(bcs: Bcs, claim: Correspondence) -> bool:
    """Exact decision of whether every satisfying assignment satisfies the
    claim, via unsatisfiability of the structure plus the claim's complement."""
    _check_claim(bcs, claim)
    augmented = bcs.with_constraints([claim.complement()])
    return not enumerate_satisfying(augmented, limit=1)


def derivable(propagated: PropagatedBcs, claim: Correspondence) -> bool:
    """Whether the claim follows syntactically from the propagation fixed
    point, i.e. the derived relation for the pair is inside the claim."""
    _check_claim(propagated.bcs, claim)
    return propagated.pair(claim.source, claim.target).subset_of(claim)


def pin(var: str, domain: Sequence[str], value: str) -> Correspondence:
    """A self-loop constraint forcing a variable to one value."""
    if value not in domain:
        raise InputError(f"cannot pin {var!r} to unknown value {value!r}")
    return Correspondence.from_pairs(var, var, domain, domain, [(value, value)])
