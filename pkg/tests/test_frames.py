import pytest

from ladderwork.frames import (
    IDENTITY,
    ChartMap,
    ChartSequence,
    Frame,
    block_chart,
    compose_charts,
    detect_dominated_chart,
    monomial_chart,
    translation_chart,
)
from ladderwork.pseries import gens


@pytest.fixture
def uv():
    x, y = gens(3, 20)
    return x ** 3 * (1 + y), y ** 3 + x


def test_compose_with_identity():
    assert compose_charts(monomial_chart(1), IDENTITY) == monomial_chart(1)
    assert compose_charts(IDENTITY, translation_chart(2, 1)) == translation_chart(2, 1)


def test_compose_merges():
    assert compose_charts(monomial_chart(1), monomial_chart(2)) == monomial_chart(3)
    assert compose_charts(monomial_chart(2), translation_chart(1, 2)) == translation_chart(3, 2)
    seq = compose_charts(translation_chart(1, 1), monomial_chart(1))
    assert isinstance(seq, ChartSequence) and len(seq) == 2


def test_composite_pullback_matches_sequence():
    x, y = gens(5, 15)
    f = x ** 2 + 3 * x * y + y ** 4 + 1
    merged = compose_charts(monomial_chart(2), translation_chart(1, 3))
    step = translation_chart(1, 3).pullback(monomial_chart(2).pullback(f))
    assert merged.pullback(f) == step


def test_block_chart_shape():
    assert block_chart(1, 3) == translation_chart(3, 1)
    assert block_chart(4, 5) == translation_chart(5, 4)


def test_push_inverts_pullback():
    x, y = gens(3, 12)
    for ch in (monomial_chart(2), translation_chart(3, 2)):
        X, Y = ch.substituents(3, 12)
        a, b = ch.push(x, y)
        assert (a, b) == (X, Y)


def test_chart_validation():
    with pytest.raises(ValueError):
        ChartMap("translation", 2, 0)
    with pytest.raises(ValueError):
        ChartMap("monomial", 0)
    with pytest.raises(ValueError):
        ChartMap("spiral", 1)


def test_chart_json_round_trip():
    for ch in (monomial_chart(3), translation_chart(5, 4)):
        assert ChartMap.from_json(ch.to_json()) == ch


def test_base_frame_dominates_nothing(uv):
    assert not detect_dominated_chart(Frame((1, 0), *uv))


def test_first_step_dominates_nothing(uv):
    ch = monomial_chart(1)
    fr = Frame((1, 1), ch.pullback(uv[0]), ch.pullback(uv[1]))
    x, y = gens(3, 20)
    assert fr.v == y * (y ** 2 + x)
    assert not detect_dominated_chart(fr)


def test_last_step_dominates_translation(uv):
    ch = block_chart(1, 3)
    dom = detect_dominated_chart(Frame((1, 3), ch.pullback(uv[0]), ch.pullback(uv[1])))
    assert dom.chart == translation_chart(3, 2)
    assert dom.beta == 2 and not dom.swapped
    u, v = dom.reconstruct()
    assert u == ch.pullback(uv[0]) and v == ch.pullback(uv[1])


def test_monomial_domination():
    x, y = gens(3, 12)
    dom = detect_dominated_chart(Frame((0, 0), x ** 2 * y ** 3, y))
    assert dom.chart == monomial_chart(3)
    assert dom.u_next == x ** 2
    rev = detect_dominated_chart(Frame((0, 0), y, x ** 2 * y ** 3))
    assert rev.swapped and rev.chart == monomial_chart(3)


def test_frame_rejects_units():
    x, y = gens(3, 8)
    with pytest.raises(ValueError):
        Frame((0, 0), 1 + x, y)
