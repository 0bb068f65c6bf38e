"""Structural conditions under which propagation is complete.

Max-closedness: per-variable total orders such that every constraint contains
the coordinatewise maximum of any two of its pairs. Join-closedness is the
semilattice generalization via least-upper-bound operators. This module
verifies both conditions (with violation witnesses), searches for certifying
orders by brute force, and constructs certifying orders for
assumption-generated structures.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import assumptions as asm
from .bcs import Bcs, Correspondence
from .errors import InputError
from .games import NormalFormGame, find_isomorphisms, fully_reduce, is_fully_reduced

VariableOrders = Mapping[str, tuple[str, ...]]
JoinFamily = Mapping[str, Mapping[tuple[str, str], str]]


@dataclass(frozen=True)
class ClosednessWitness:
    """Two relation pairs whose coordinatewise join is missing from the relation."""

    constraint_index: int
    source: str
    target: str
    pair_a: tuple[str, str]
    pair_b: tuple[str, str]
    missing: tuple[str, str]


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    witness: ClosednessWitness | None = None


def _check_orders(bcs: Bcs, orders: VariableOrders) -> dict[str, dict[str, int]]:
    ranks = {}
    for v in bcs.variables:
        if v.id not in orders:
            raise InputError(f"no order supplied for variable {v.id!r}")
        order = tuple(orders[v.id])
        if sorted(order) != sorted(v.domain):
            raise InputError(f"order for {v.id!r} is not a permutation of its domain")
        ranks[v.id] = {value: i for i, value in enumerate(order)}
    return ranks


def _scan_closure(bcs: Bcs, combine) -> ClosednessReport:
    """Shared scan: `combine(var_id, a, b)` must return the least upper bound."""
    for idx, c in enumerate(bcs.constraints):
        pairs = c.pairs()
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                (x1, y1), (x2, y2) = pairs[a], pairs[b]
                top = (combine(c.source, x1, x2), combine(c.target, y1, y2))
                if not c.contains(*top):
                    return ClosednessReport(False, ClosednessWitness(
                        idx, c.source, c.target, pairs[a], pairs[b], top))
    return ClosednessReport(True)


def is_max_closed(bcs: Bcs, orders: VariableOrders) -> ClosednessReport:
    """Check every constraint against the max-closedness definition; the first
    violation in deterministic scan order is reported as a witness."""
    ranks = _check_orders(bcs, orders)

    def vmax(var, a, b):
        return a if ranks[var][a] >= ranks[var][b] else b

    return _scan_closure(bcs, vmax)


def validate_join_family(bcs: Bcs, joins: JoinFamily) -> None:
    """Check the join tables cover all variables and satisfy the semilattice
    axioms; raises an input error naming the failed axiom."""
    for v in bcs.variables:
        if v.id not in joins:
            raise InputError(f"no join operator supplied for variable {v.id!r}")
        table = joins[v.id]
        dom = v.domain
        for a, b in itertools.product(dom, dom):
            if (a, b) not in table:
                raise InputError(f"join table for {v.id!r} is missing the pair ({a!r}, {b!r})")
            if table[(a, b)] not in dom:
                raise InputError(f"join table for {v.id!r} leaves the domain at ({a!r}, {b!r})")
        for a in dom:
            if table[(a, a)] != a:
                raise InputError(f"idempotency fails for {v.id!r} at {a!r}")
        for a, b in itertools.combinations(dom, 2):
            if table[(a, b)] != table[(b, a)]:
                raise InputError(f"commutativity fails for {v.id!r} at ({a!r}, {b!r})")
        for a, b, c in itertools.product(dom, repeat=3):
            if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                raise InputError(f"associativity fails for {v.id!r} at ({a!r}, {b!r}, {c!r})")


def is_join_closed(bcs: Bcs, joins: JoinFamily) -> ClosednessReport:
    """Check every constraint for closure under the supplied join operators."""
    validate_join_family(bcs, joins)

    def vjoin(var, a, b):
        return joins[var][(a, b)]

    return _scan_closure(bcs, vjoin)


def joins_from_orders(bcs: Bcs, orders: VariableOrders) -> dict[str, dict[tuple[str, str], str]]:
    """Max operators of total orders, as join tables."""
    ranks = _check_orders(bcs, orders)
    out = {}
    for v in bcs.variables:
        table = {}
        for a, b in itertools.product(v.domain, v.domain):
            table[(a, b)] = a if ranks[v.id][a] >= ranks[v.id][b] else b
        out[v.id] = table
    return out


def join_table_from_hasse(domain: Sequence[str],
                          edges: Sequence[tuple[str, str]]) -> dict[tuple[str, str], str]:
    """Compile a Hasse-diagram edge list (lower, upper) into a join table by
    least-upper-bound computation, rejecting inputs where some pair lacks a
    unique least upper bound."""
    dom = tuple(domain)
    known = set(dom)
    uppers = {a: {a} for a in dom}
    adj: dict[str, set[str]] = {a: set() for a in dom}
    for lo, hi in edges:
        if lo not in known or hi not in known:
            raise InputError(f"edge ({lo!r}, {hi!r}) references values outside the domain")
        adj[lo].add(hi)
    for a in dom:
        stack = [a]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in uppers[a]:
                    uppers[a].add(nxt)
                    stack.append(nxt)
    for a in dom:
        if a in uppers[a] - {a} or any(a in uppers[b] and b in uppers[a] for b in dom if b != a):
            raise InputError(f"the edge list contains a cycle through {a!r}")
    table = {}
    for a, b in itertools.product(dom, dom):
        common = uppers[a] & uppers[b]
        least = [c for c in common if all(d in uppers[c] for d in common)]
        if len(least) != 1:
            raise InputError(f"no unique least upper bound for ({a!r}, {b!r})")
        table[(a, b)] = least[0]
    return table


def _partial_max_closed(constraint: Correspondence,
                        ranks: dict[str, dict[str, int]]) -> bool:
    pairs = constraint.pairs()
    rs = ranks[constraint.source]
    rt = ranks[constraint.target]
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            (x1, y1), (x2, y2) = pairs[a], pairs[b]
            top = (x1 if rs[x1] >= rs[x2] else x2, y1 if rt[y1] >= rt[y2] else y2)
            if not constraint.contains(*top):
                return False
    return True


def search_max_orders(bcs: Bcs) -> dict[str, tuple[str, ...]] | None:
    """Brute-force search for a certifying order family, pruned constraint by
    constraint; returns the lexicographically first certificate or None.

    Exponential in domain sizes by design; intended for desk scale.
    """
    if any(len(v.domain) > 6 for v in bcs.variables):
        warnings.warn("order search over domains larger than 6 may be very slow")
    n = len(bcs.variables)
    by_last: dict[int, list[Correspondence]] = {i: [] for i in range(n)}
    pos = {v.id: i for i, v in enumerate(bcs.variables)}
    for c in bcs.constraints:
        by_last[max(pos[c.source], pos[c.target])].append(c)

    ranks: dict[str, dict[str, int]] = {}
    chosen: dict[str, tuple[str, ...]] = {}

    def assign(i: int) -> bool:
        if i == n:
            return True
        var = bcs.variables[i]
        for perm in itertools.permutations(var.domain):
            ranks[var.id] = {value: r for r, value in enumerate(perm)}
            chosen[var.id] = perm
            if all(_partial_max_closed(c, ranks) for c in by_last[i]) and assign(i + 1):
                return True
        del ranks[var.id], chosen[var.id]
        return False

    if assign(0):
        return dict(chosen)
    return None


# ---------------------------------------------------------------------------
# Certifying orders for assumption-generated structures
# ---------------------------------------------------------------------------


def _orbit_classes(game: NormalFormGame) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Class key per profile: per-player orbit ids under the automorphism group."""
    autos = find_isomorphisms(game, game)
    orbit_ids = []
    for i, acts in enumerate(game.actions):
        parent = list(range(len(acts)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for auto in autos:
            for a in range(len(acts)):
                ra, rb = find(a), find(auto.maps[i][a])
                if ra != rb:
                    parent[rb] = ra
        orbit_ids.append([find(a) for a in range(len(acts))])
    return {p: tuple(orbit_ids[i][p[i]] for i in range(game.n_players))
            for p in game.profiles()}


def _class_blocks(game: NormalFormGame) -> list[list[tuple[int, ...]]]:
    """Outcome equivalence classes, each sorted by label, classes sorted by
    their lexicographically smallest member label."""
    keys = _orbit_classes(game)
    blocks: dict[tuple[int, ...], list] = {}
    for profile, key in keys.items():
        blocks.setdefault(key, []).append(profile)
    out = []
    for members in blocks.values():
        members.sort(key=game.profile_label)
        out.append(members)
    out.sort(key=lambda ms: game.profile_label(ms[0]))
    return out


def _own_class_order(game: NormalFormGame) -> tuple[str, ...]:
    return tuple(game.profile_label(p) for block in _class_blocks(game) for p in block)


def _transport_order(src: NormalFormGame, dst: NormalFormGame,
                     src_order: Sequence[str]) -> tuple[str, ...]:
    """Carry a class-contiguous outcome order across an isomorphism: the class
    sequence is mapped through (any) isomorphism, members sorted by label."""
    isos = find_isomorphisms(src, dst)
    if not isos:
        raise InputError(f"no isomorphism from {src.name!r} to {dst.name!r}")
    iso = isos[0]
    keys = _orbit_classes(src)
    seen: set[tuple[int, ...]] = set()
    out: list[str] = []
    for label in src_order:
        key = keys[src.label_profile(label)]
        if key in seen:
            continue
        seen.add(key)
        members = sorted({iso.apply(p) for p, k in keys.items() if k == key},
                         key=dst.profile_label)
        out.extend(dst.profile_label(p) for p in members)
    return tuple(out)


def _risk_order(g: NormalFormGame, top: tuple[str, str], safe: tuple[str, str]) -> tuple[str, ...]:
    """Ascending: (top1,safe2) < (safe1,top2) < (safe,safe) < (top,top)."""
    return (
        f"{top[0]},{safe[1]}",
        f"{safe[0]},{top[1]}",
        f"{safe[0]},{safe[1]}",
        f"{top[0]},{top[1]}",
    )


def _classify_constraints(games: list[NormalFormGame], bcs: Bcs):
    """Re-derive which assumption generated each constraint of the structure.

    Returns (risk orders by game, isomorphism edges). Raises when some
    constraint matches no assumption-generated candidate.
    """
    by_name = {g.name: g for g in games}
    candidates: list[tuple[str, Correspondence, object]] = []

    for g in games:
        sub, oc = asm.oc_dominance(g)
        if not sub.same_payoffs(g):
            for other in games:
                if other.name != g.name and other.same_payoffs(sub):
                    candidates.append(("dominance", Correspondence(
                        g.name, other.name, oc.source_domain, oc.target_domain, oc.rows), None))
    for g1, g2 in itertools.combinations(games, 2):
        if is_fully_reduced(g1) and is_fully_reduced(g2):
            oc = asm.oc_isomorphism(g1, g2)
            if oc is not None:
                candidates.append(("isomorphism", oc, (g1.name, g2.name)))
    for g in games:
        try:
            candidates.append(("nash", asm.oc_nash(g), None))
        except InputError:
            pass
    for g1, g2 in itertools.permutations(games, 2):
        for labeling in asm.discover_risk_labelings(g1, g2):
            candidates.append(("risk", asm.oc_decreasing_risk(g1, g2, labeling), labeling))
    for g in games:
        for labeling in asm.discover_risk_labelings(g, g):
            candidates.append(("risk", asm.oc_decreasing_risk(g, g, labeling), labeling))

    risk_orders: dict[str, tuple[str, ...]] = {}
    iso_edges: list[tuple[str, str]] = []

    from .bcs import inverse as rel_inverse

    for c in bcs.constraints:
        matched = None
        for kind, cand, payload in candidates:
            if (c.source, c.target, c.rows) == (cand.source, cand.target, cand.rows):
                matched = (kind, payload)
                break
            inv = rel_inverse(cand)
            if (c.source, c.target, c.rows) == (inv.source, inv.target, inv.rows):
                matched = (kind, payload)
                break
        if matched is None:
            raise InputError(
                f"constraint {c.source}->{c.target} was not generated by the assumption set")
        kind, payload = matched
        if kind == "isomorphism":
            iso_edges.append(payload)
        elif kind == "risk":
            lab: asm.DecreasingRiskPair = payload
            for name, top, safe in ((lab.g1, lab.g1_top, lab.g1_safe),
                                    (lab.g2, lab.g2_top, lab.g2_safe)):
                order = _risk_order(by_name[name], top, safe)
                if risk_orders.get(name, order) != order:
                    raise InputError(
                        f"conflicting decreasing-risk orders required for {name!r}")
                risk_orders[name] = order
    return risk_orders, iso_edges


def orders_for_assumptions(games: list[NormalFormGame], bcs: Bcs) -> dict[str, tuple[str, ...]]:
    """Construct a certifying order family for a structure built by
    `build_assumption_bcs` over these games.

    Decreasing-risk games get the fixed coordination order, isomorphic games
    are ordered isomorphically (class-contiguously), remaining fully reduced
    games by automorphism equivalence classes, and games with dominated
    actions inherit their full reduction's order on surviving outcomes with
    all eliminated outcomes placed below under a label-lexicographic
    tie-break.
    """
    names = {g.name for g in games}
    for v in bcs.variables:
        if v.id not in names:
            raise InputError(f"structure variable {v.id!r} is not one of the games")
    by_name = {g.name: g for g in games}
    for v in bcs.variables:
        if v.domain != by_name[v.id].outcome_labels():
            raise InputError(f"domain of {v.id!r} does not match the game's outcomes")

    risk_orders, iso_edges = _classify_constraints(games, bcs)

    orders: dict[str, tuple[str, ...]] = dict(risk_orders)
    reduced = [g for g in games if is_fully_reduced(g)]

    neighbors: dict[str, set[str]] = {g.name: set() for g in reduced}
    for a, b in iso_edges:
        neighbors[a].add(b)
        neighbors[b].add(a)

    listed = [g.name for g in games]
    for g in reduced:
        if g.name in orders:
            continue
        component = {g.name}
        frontier = [g.name]
        while frontier:
            cur = frontier.pop()
            for nxt in neighbors[cur]:
                if nxt not in component:
                    component.add(nxt)
                    frontier.append(nxt)
        seeds = sorted((n for n in component if n in orders), key=listed.index)
        if not seeds:
            rep = min(component, key=listed.index)
            orders[rep] = _own_class_order(by_name[rep])
            seeds = [rep]
        queue = list(seeds)
        while queue:
            cur = queue.pop(0)
            for nxt in sorted(neighbors[cur], key=listed.index):
                if nxt not in orders:
                    orders[nxt] = _transport_order(by_name[cur], by_name[nxt], orders[cur])
                    queue.append(nxt)

    for g in games:
        if g.name in orders:
            continue
        final = fully_reduce(g).final
        base: tuple[str, ...] = ()
        for other in games:
            if other.name != g.name and other.same_payoffs(final) and other.name in orders:
                base = orders[other.name]
                break
        kept = set(base)
        below = sorted(l for l in g.outcome_labels() if l not in kept)
        orders[g.name] = tuple(below) + base

    return orders
