"""Bound formula tests."""

import pytest

from nodaltopo import bounds


def test_courant_values():
    assert bounds.courant_bound(1) == 1
    assert bounds.courant_bound(2) == 4
    assert bounds.courant_bound(7) == 49
    with pytest.raises(ValueError):
        bounds.courant_bound(0)


def test_karpushkin_values():
    assert bounds.karpushkin_bound(4) == 10
    assert bounds.karpushkin_bound(5) == 19
    assert bounds.karpushkin_bound(2) == 2
    with pytest.raises(ValueError):
        bounds.karpushkin_bound(1)


def test_pleijel_estimate():
    coeff = bounds.pleijel_estimate(1)
    assert coeff == pytest.approx(0.69, abs=0.01)
    assert bounds.pleijel_estimate(10) == pytest.approx(100.0 * coeff, rel=1e-12)


def test_predicted_ovals():
    assert bounds.predicted_ovals(7) == {"exact": 13}
    assert bounds.predicted_ovals(9) == {"at_least": 17}
    assert bounds.predicted_ovals(10) == {"exact": 30}
    assert bounds.predicted_ovals(6) == {"exact": 12}
    assert bounds.predicted_ovals(11) == {"exact": 31}
    assert bounds.predicted_ovals(5) == {"at_least": 5}
    with pytest.raises(ValueError):
        bounds.predicted_ovals(2)


def test_lewy_lower():
    assert bounds.lewy_lower(2) == 2
    assert bounds.lewy_lower(3) == 1
    assert bounds.lewy_lower(1) == 1


def test_bound_hierarchy():
    for n in range(2, 65):
        assert bounds.karpushkin_bound(n) <= bounds.courant_bound(n)
    for n in range(3, 65):
        pred = bounds.predicted_ovals(n)
        value = pred.get("exact", pred.get("at_least"))
        assert value <= bounds.karpushkin_bound(n)


def test_bound_report_flags():
    rep = bounds.bound_report(7, 13, 14)
    assert rep.parity_ok and rep.courant_ok and rep.karpushkin_ok
    assert rep.courant == 49 and rep.karpushkin == 39
    bad = bounds.bound_report(7, 40, 50)
    assert not bad.karpushkin_ok
    assert not bad.courant_ok
    assert not bad.parity_ok
