import pytest

from dbg_persist.timeline import Timeline


def _steps():
    # value 1 on (0,1), 2 at 1, 3 on (1,2), 4 at 2, 5 on (2,3)
    return Timeline(horizon=3.0, breakpoints=(1.0, 2.0), interval_values=(1, 3, 5), breakpoint_values=(2, 4))


def _union(values):
    return frozenset().union(*values)


def test_value_at_points_and_intervals():
    tl = _steps()
    assert tl.value_at(0.0) == 1
    assert tl.value_at(0.5) == 1
    assert tl.value_at(1.0) == 2
    assert tl.value_at(1.0 + 1e-12) == 2
    assert tl.value_at(1.5) == 3
    assert tl.value_at(3.0) == 5


def test_value_outside_domain():
    with pytest.raises(ValueError, match="outside"):
        _steps().value_at(3.5)


def test_shape_checks():
    with pytest.raises(ValueError):
        Timeline(horizon=1.0, breakpoints=(0.5,), interval_values=(1,), breakpoint_values=(1,))
    with pytest.raises(ValueError):
        Timeline(horizon=1.0, breakpoints=(0.6, 0.4), interval_values=(1, 2, 3), breakpoint_values=(1, 2))


def test_window_values_closed_window():
    tl = _steps()
    assert sorted(tl.window_values(0.2, 0.8)) == [1]
    assert sorted(tl.window_values(0.2, 1.0)) == [1, 2]
    assert sorted(tl.window_values(0.5, 1.5)) == [1, 2, 3]


def test_compressed_drops_silent_breakpoints():
    tl = Timeline(horizon=2.0, breakpoints=(1.0,), interval_values=("a", "a"), breakpoint_values=("a",))
    assert tl.compressed() == Timeline.constant(2.0, "a")


def test_smooth_zero_is_identity():
    tl = _steps()
    assert tl.smooth(0, max) is tl


def test_smooth_negative_rejected():
    with pytest.raises(ValueError):
        _steps().smooth(-0.1, max)


def test_smooth_large_eps_is_constant():
    tl = _steps().map(lambda v: frozenset({v}))
    smoothed = tl.smooth(10.0, _union)
    assert smoothed.breakpoints == ()
    assert smoothed.value_at(1.7) == frozenset({1, 2, 3, 4, 5})


def test_smooth_spreads_single_slice():
    # edge alive only on (1, 2) with dt = 1, eps = 0.5
    tl = Timeline(
        horizon=3.0,
        breakpoints=(1.0, 2.0),
        interval_values=(frozenset(), frozenset({"e"}), frozenset()),
        breakpoint_values=(frozenset({"e"}), frozenset({"e"})),
    )
    smoothed = tl.smooth(0.5, _union)
    assert smoothed.breakpoints == pytest.approx((0.5, 2.5))
    assert smoothed.value_at(0.5) == frozenset({"e"})
    assert smoothed.value_at(0.4) == frozenset()
    assert smoothed.value_at(2.5) == frozenset({"e"})
    assert smoothed.value_at(2.6) == frozenset()
