"""Canonical example games used in the documentation and tests."""

from __future__ import annotations

from .assumptions import DecreasingRiskPair
from .games import NormalFormGame


def chicken_trio() -> tuple[NormalFormGame, NormalFormGame, NormalFormGame]:
    """Three versions of Chicken: Ga has an extra strictly dominated row C',
    Gb is Ga without it, and Gc is Gb with every payoff mapped by x -> 2x + 4
    (so Gb and Gc are isomorphic via exactly one isomorphism)."""
    gb = NormalFormGame.two_player(
        "Gb", ("C", "D"), ("C", "D"),
        [[(3, 3), (1, 4)], [(4, 1), (0, 0)]])
    ga = NormalFormGame.two_player(
        "Ga", ("C", "D", "C'"), ("C", "D"),
        [[(3, 3), (1, 4)], [(4, 1), (0, 0)], [(2, 3), (0, 4)]])
    gc = NormalFormGame.two_player(
        "Gc", ("E", "F"), ("E", "F"),
        [[(10, 10), (6, 12)], [(12, 6), (4, 4)]])
    return ga, gb, gc


def prisoners_dilemma() -> NormalFormGame:
    return NormalFormGame.two_player(
        "PD", ("C", "D"), ("C", "D"),
        [[(3, 3), (0, 4)], [(4, 0), (1, 1)]])


def matching_pennies() -> NormalFormGame:
    """No pure Nash equilibrium."""
    return NormalFormGame.two_player(
        "MP", ("H", "T"), ("H", "T"),
        [[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])


def stag_hunt_pair() -> tuple[NormalFormGame, NormalFormGame, DecreasingRiskPair]:
    """Two stag-hunt style coordination games where the high action only
    becomes more attractive from the first to the second, with the labeling
    that makes the decreasing-risk assumption applicable."""
    left = NormalFormGame.two_player(
        "GL", ("aH", "aL"), ("aH", "aL"),
        [[(8, 8), (0, 4)], [(4, 0), (7, 7)]])
    right = NormalFormGame.two_player(
        "GR", ("aH", "aL"), ("aH", "aL"),
        [[(9, 8), (1, 3)], [(4, 1), (7, 7)]])
    labeling = DecreasingRiskPair(
        "GL", "GR", ("aH", "aH"), ("aL", "aL"), ("aH", "aH"), ("aL", "aL"))
    return left, right, labeling


def symmetric_coordination() -> NormalFormGame:
    """A fully symmetric 2x2 coordination game with two automorphisms
    (identity and the double swap)."""
    return NormalFormGame.two_player(
        "CO", ("A", "B"), ("A", "B"),
        [[(1, 1), (0, 0)], [(0, 0), (1, 1)]])


def single_outcome_game(name: str, payoffs) -> NormalFormGame:
    return NormalFormGame.two_player(name, ("a1",), ("a1",), [[tuple(payoffs)]])
