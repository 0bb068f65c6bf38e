"""Relation algebra, propagation, and the exact oracle."""

import itertools
import random

import pytest

from oc_reason import (
    Bcs,
    Correspondence,
    InputError,
    Variable,
    compose,
    derivable,
    enumerate_satisfying,
    implies,
    intersect,
    inverse,
    montanari_instance,
    join_incompleteness_instance,
    path_consistency,
    path_consistency_sweeps,
    pin,
    random_bcs,
)
from conftest import brute_force_compose


def rel(src, tgt, sd, td, pairs):
    return Correspondence.from_pairs(src, tgt, sd, td, pairs)


def random_relation(rng, src, tgt, sd, td, p=0.5):
    return rel(src, tgt, sd, td,
               [(a, b) for a in sd for b in td if rng.random() < p])


DOM3 = ("u", "v", "w")


class TestAlgebra:
    def test_compose_matches_brute_force(self):
        rng = random.Random(10)
        for _ in range(100):
            phi = random_relation(rng, "X", "Y", DOM3, DOM3)
            psi = random_relation(rng, "Y", "Z", DOM3, DOM3)
            got = set(compose(phi, psi).pairs())
            assert got == brute_force_compose(phi.pairs(), psi.pairs())

    def test_compose_identity(self):
        rng = random.Random(11)
        phi = random_relation(rng, "X", "Y", DOM3, DOM3)
        idx = Correspondence.identity("X", DOM3)
        idy = Correspondence.identity("Y", DOM3)
        assert compose(idx, phi).rows == phi.rows
        assert compose(phi, idy).rows == phi.rows

    def test_compose_variable_mismatch(self):
        phi = rel("X", "Y", DOM3, DOM3, [])
        with pytest.raises(InputError):
            compose(phi, phi)

    def test_intersect(self):
        a = rel("X", "Y", ("a", "d"), ("b", "c"), [("a", "b"), ("a", "c")])
        b = rel("X", "Y", ("a", "d"), ("b", "c"), [("a", "b"), ("d", "c")])
        assert intersect(a, b).pairs() == [("a", "b")]

    def test_intersect_idempotent_and_neutral(self):
        rng = random.Random(12)
        phi = random_relation(rng, "X", "Y", DOM3, DOM3)
        assert intersect(phi, phi).rows == phi.rows
        full = Correspondence.full("X", "Y", DOM3, DOM3)
        assert intersect(phi, full).rows == phi.rows

    def test_intersect_mismatch(self):
        a = rel("X", "Y", DOM3, DOM3, [])
        b = rel("X", "Z", DOM3, DOM3, [])
        with pytest.raises(InputError):
            intersect(a, b)

    def test_inverse(self):
        rng = random.Random(13)
        phi = random_relation(rng, "X", "Y", DOM3, ("p", "q"))
        assert inverse(inverse(phi)).rows == phi.rows
        assert set(inverse(phi).pairs()) == {(b, a) for a, b in phi.pairs()}
        ident = Correspondence.identity("X", DOM3)
        assert inverse(ident).rows == ident.rows


class TestBcsValidation:
    def test_unknown_variable(self):
        with pytest.raises(InputError):
            Bcs.create([("X", DOM3)], [rel("X", "Y", DOM3, DOM3, [])])

    def test_domain_mismatch(self):
        with pytest.raises(InputError):
            Bcs.create([("X", DOM3), ("Y", ("a",))], [rel("X", "Y", DOM3, DOM3, [])])

    def test_duplicate_constraints_kept(self):
        b = Bcs.create([("X", DOM3), ("Y", DOM3)],
                       [rel("X", "Y", DOM3, DOM3, [("u", "u")]),
                        rel("X", "Y", DOM3, DOM3, [("u", "u"), ("v", "v")])])
        assert len(b.constraints) == 2


class TestPathConsistency:
    def test_montanari_no_inference(self):
        prop = path_consistency(montanari_instance())
        assert not prop.narrowed()
        assert not prop.has_empty

    def test_single_constraint_support(self):
        phi = rel("X", "Y", DOM3, DOM3, [("u", "v"), ("u", "w"), ("v", "u")])
        b = Bcs.create([("X", DOM3), ("Y", DOM3)], [phi])
        prop = path_consistency(b)
        assert prop.pair("X", "Y").rows == phi.rows
        assert set(prop.pair("X", "X").pairs()) == {("u", "u"), ("v", "v")}
        assert set(prop.pair("Y", "Y").pairs()) == {("u", "u"), ("v", "v"), ("w", "w")}

    def test_join_incompleteness_no_narrowing(self):
        b, _ = join_incompleteness_instance()
        prop = path_consistency(b)
        assert not prop.narrowed()
        assert prop.pair("X", "Y").contains("x2", "y2")

    def test_symmetry_and_reflexivity_invariants(self):
        rng = random.Random(14)
        for _ in range(40)[:40]:
            b = random_bcs(rng, rng.randint(1, 5), 4)
            prop = path_consistency(b)
            names = [v.id for v in b.variables]
            for x, y in itertools.product(names, repeat=2):
                assert prop.pair(x, y).rows == inverse(prop.pair(y, x)).rows
            for x in names:
                ident = Correspondence.identity(x, b.domain(x))
                assert prop.pair(x, x).subset_of(ident)

    def test_monotone_under_inputs(self):
        rng = random.Random(15)
        for _ in range(40):
            b = random_bcs(rng, rng.randint(2, 5), 4)
            prop = path_consistency(b)
            for c in b.constraints:
                assert prop.pair(c.source, c.target).subset_of(c)

    def test_fixed_point_idempotent(self):
        rng = random.Random(16)
        for _ in range(25):
            b = random_bcs(rng, rng.randint(2, 4), 4)
            prop = path_consistency(b)
            again = path_consistency(Bcs(
                b.variables,
                tuple(prop.pair(x.id, y.id) for x in b.variables for y in b.variables)))
            for x in b.variables:
                for y in b.variables:
                    assert again.pair(x.id, y.id).rows == prop.pair(x.id, y.id).rows

    def test_worklist_equals_naive_sweeps(self):
        rng = random.Random(17)
        for _ in range(60):
            b = random_bcs(rng, rng.randint(1, 5), 4)
            fast = path_consistency(b)
            slow = path_consistency_sweeps(b)
            assert all(fast.psi[k].rows == slow.psi[k].rows for k in fast.psi)

    def test_sweep_bound(self):
        rng = random.Random(18)
        for _ in range(30):
            n = rng.randint(1, 6)
            b = random_bcs(rng, n, 4)
            prop = path_consistency_sweeps(b)
            m = max(len(v.domain) for v in b.variables)
            assert prop.sweeps <= n * n * m * m

    def test_soundness_against_oracle(self):
        # every satisfying assignment stays inside every derived relation
        rng = random.Random(19)
        for _ in range(60):
            b = random_bcs(rng, rng.randint(1, 5), 4)
            prop = path_consistency(b)
            names = [v.id for v in b.variables]
            for s in enumerate_satisfying(b):
                for x, y in itertools.product(names, repeat=2):
                    assert prop.pair(x, y).contains(s[x], s[y])


class TestOracle:
    def test_unconstrained_product(self):
        b = Bcs.create([("X", ("a", "b")), ("Y", ("p", "q", "r"))])
        assert len(enumerate_satisfying(b)) == 6

    def test_montanari_unsat(self):
        assert enumerate_satisfying(montanari_instance()) == []

    def test_k3_coloring_count(self):
        k4 = montanari_instance()
        keep = [v for v in k4.variables if v.id != "X4"]
        cons = [c for c in k4.constraints if "X4" not in (c.source, c.target)]
        assert len(enumerate_satisfying(Bcs(tuple(keep), tuple(cons)))) == 6

    def test_limit_and_determinism(self):
        b = Bcs.create([("X", ("a", "b")), ("Y", ("p", "q"))])
        sols = enumerate_satisfying(b)
        assert [s.as_tuple(b) for s in sols] == [
            ("a", "p"), ("a", "q"), ("b", "p"), ("b", "q")]
        assert [s.as_tuple(b) for s in enumerate_satisfying(b, limit=2)] == [
            ("a", "p"), ("a", "q")]

    def test_join_incompleteness_pinned_empty(self):
        b, _ = join_incompleteness_instance()
        pinned = b.with_constraints([
            pin("X", b.domain("X"), "x2"), pin("Y", b.domain("Y"), "y2")])
        assert enumerate_satisfying(pinned) == []

    def test_every_result_satisfies(self):
        rng = random.Random(20)
        for _ in range(40):
            b = random_bcs(rng, rng.randint(1, 4), 4)
            for s in enumerate_satisfying(b):
                assert s.satisfies(b)


class TestImpliesAndDerivable:
    def test_full_relation_always_implied(self):
        rng = random.Random(21)
        b = random_bcs(rng, 3, 3)
        names = [v.id for v in b.variables]
        full = Correspondence.full(names[0], names[1], b.domain(names[0]), b.domain(names[1]))
        assert implies(b, full)
        assert derivable(path_consistency(b), full)

    def test_montanari_empty_claim(self):
        k4 = montanari_instance()
        empty = Correspondence.empty("X1", "X2", k4.domain("X1"), k4.domain("X2"))
        assert implies(k4, empty)
        assert not derivable(path_consistency(k4), empty)

    def test_join_incompleteness_gap(self):
        b, _ = join_incompleteness_instance()
        claim = rel("X", "Y", b.domain("X"), b.domain("Y"),
                    [(x, y) for x in b.domain("X") for y in b.domain("Y")
                     if (x, y) != ("x2", "y2")])
        assert implies(b, claim)
        assert not derivable(path_consistency(b), claim)

    def test_derivable_implies_implies(self):
        rng = random.Random(22)
        for _ in range(40):
            b = random_bcs(rng, rng.randint(2, 4), 3)
            names = [v.id for v in b.variables]
            x, y = rng.sample(names, 2)
            claim = random_relation(rng, x, y, b.domain(x), b.domain(y), p=0.7)
            if derivable(path_consistency(b), claim):
                assert implies(b, claim)

    def test_claim_reflexive_inclusion(self):
        rng = random.Random(23)
        b = random_bcs(rng, 3, 3)
        prop = path_consistency(b)
        names = [v.id for v in b.variables]
        assert derivable(prop, prop.pair(names[0], names[1]))

    def test_exactness_containment(self):
        # the derived relation always contains the true minimal relation
        rng = random.Random(24)
        for _ in range(40):
            b = random_bcs(rng, rng.randint(1, 5), 4)
            prop = path_consistency(b)
            sols = enumerate_satisfying(b)
            names = [v.id for v in b.variables]
            for x, y in itertools.product(names, repeat=2):
                for s in sols:
                    assert prop.pair(x, y).contains(s[x], s[y])
