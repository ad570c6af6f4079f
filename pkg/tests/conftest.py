import os
import sys
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from edfk.graph_core import Graph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, max_n=6, labels="", t=0, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    edges = [e for e in pairs if draw(st.booleans())] if pairs else []
    lab = {}
    if labels:
        for v in range(n):
            lab[v] = draw(st.sets(st.sampled_from(labels), max_size=len(labels)))
    boundary = {}
    if t and n:
        idx = draw(st.permutations(range(1, t + 1)))
        chosen = draw(st.lists(st.sampled_from(range(n)), unique=True, max_size=min(n, t)))
        boundary = {v: i for v, i in zip(chosen, idx)}
    return Graph(range(n), edges, lab, boundary, t, frozenset(labels))


@pytest.fixture
def k4():
    from edfk.graph_core import complete_graph
    return complete_graph(4)
