import pytest
from hypothesis import settings

import storient as st
from storient.generator import GenConfig, generate

settings.register_profile("suite", deadline=None, max_examples=25)
settings.load_profile("suite")


# -- tiny fixed instances ----------------------------------------------------


@pytest.fixture
def triangle():
    """Vertices 0=s, 1=v, 2=t; outer face picked by the (0,2) hint."""
    g = st.build_embedding(
        3, [(0, 1), (1, 2), (0, 2)], [[0, 2], [1, 0], [2, 1]], outer_face_hint=(0, 2)
    )
    return g, 0, 2


@pytest.fixture
def four_cycle():
    """s=0, a=1, t=2, b=3 arranged as a 4-cycle."""
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    rotations = [[0, 3], [1, 0], [2, 1], [3, 2]]
    g = st.build_embedding(4, edges, rotations, outer_face_hint=(0, 2))
    return g, 0, 2


@pytest.fixture
def k4():
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    rotations = [[1, 2, 0], [0, 4, 3], [3, 5, 1], [4, 2, 5]]
    g = st.build_embedding(4, edges, rotations, outer_face_hint=(0, 2))
    return g, 0, 2


@pytest.fixture
def single_edge():
    g = st.build_embedding(2, [(0, 1)], [[0], [0]])
    return g, 0, 1


# -- generated instances, cached per session ---------------------------------

_CACHE: dict[tuple[int, float, int], tuple] = {}


@pytest.fixture(scope="session")
def gen():
    def make(n: int, p_iv: float, seed: int):
        key = (n, p_iv, seed)
        if key not in _CACHE:
            _CACHE[key] = generate(GenConfig(n, p_iv, seed))
        return _CACHE[key]

    return make
