"""Shared hypothesis settings and strategies."""

from __future__ import annotations

import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def universes(draw, min_size: int = 1, max_size: int = 3):
    n = draw(st.integers(min_size, max_size))
    return (1 << n) - 1


@st.composite
def choice_tables(draw, universe: int):
    """A table ``X ↦ f(X) ⊆ X`` over the full power set of ``universe``."""
    from prefkit.logic import power_set, submasks

    return {x: draw(st.sampled_from(submasks(x))) for x in power_set(universe)}


@st.composite
def choice_functions(draw, max_size: int = 3):
    from prefkit.choice import ChoiceFunction
    from prefkit.logic import DomainFamily

    u = draw(universes(1, max_size))
    return ChoiceFunction(DomainFamily.power_set(u), draw(choice_tables(u)))


@st.composite
def relations(draw, max_size: int = 4):
    """A carrier and a strict relation on it (pairs of element indices)."""
    n = draw(st.integers(1, max_size))
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    rel = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return (1 << n) - 1, sorted(rel)


@st.composite
def distances(draw, max_size: int = 4, symmetric: bool = True):
    """A pseudo-distance respecting identity on ``{0..n-1}``."""
    from prefkit.distance import PseudoDistance

    n = draw(st.integers(2, max_size))
    vals = {}
    for u in range(n):
        for v in range(n):
            if u == v:
                vals[(u, v)] = 0
            elif symmetric and (v, u) in vals:
                vals[(u, v)] = vals[(v, u)]
            else:
                vals[(u, v)] = draw(st.integers(1, 6))
    return PseudoDistance((1 << n) - 1, vals)
