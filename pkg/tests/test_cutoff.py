import numpy as np
import pytest

import bdchains as bd


def test_analyze_c2(c2):
    row = bd.analyze_chain(c2, [0.1])
    assert row.t_mix[0.25] == 1 and row.t_mix[0.1] == 1
    assert row.t_rel == pytest.approx(1.0)
    assert row.product == pytest.approx(1.0)
    # d(0) = 1/2 already beats the 0.9 level, so t_mix(0.9) = 0
    assert row.window[0.1] == 1
    assert row.ratio[0.1] >= 1.0


def test_analyze_matches_linear_scan_oracle():
    chain = bd.biased_walk(64, 2 / 3)
    evo = bd.Evolution(chain)
    row = bd.analyze_chain(chain, [0.1], evo=evo)
    for lvl in (0.1, 0.25, 0.9):
        assert row.t_mix[lvl] == evo._mixing_time_linear(lvl, 10 ** 6)
    dense = np.sort(np.abs(np.linalg.eigvals(chain.kernel())))[::-1]
    assert row.gap == pytest.approx(1.0 - dense[1], abs=1e-10)


def test_family_scan_records_failures():
    def gen(n):
        if n == 3:
            raise ValueError("boom")
        return bd.lazy_srw(n)

    rep = bd.family_scan(gen, [2, 3, 4], [0.1])
    assert [row.n for row in rep.rows] == [2, 4]
    assert 3 in rep.failures and "boom" in rep.failures[3]


def test_family_report_invariants():
    rep = bd.family_scan(bd.lazy_srw, [4, 8, 16], [0.1, 0.2])
    for row in rep.rows:
        levels = sorted(row.t_mix)
        vals = [row.t_mix[l] for l in levels]
        assert all(a >= b for a, b in zip(vals, vals[1:]))  # nonincreasing in eps
        for e in (0.1, 0.2):
            assert row.window[e] >= 0
            assert row.ratio[e] >= 1.0


def test_trend_slope():
    assert bd.trend_slope([0, 1, 2], [0, 2, 4]) == pytest.approx(2.0)
    assert bd.trend_slope([1, 2, 3], [5, 5, 5]) == pytest.approx(0.0)


def test_window_constant_branches():
    # small eps: the 1/eps branch of the first constant dominates
    assert bd.window_constant(0.01) == pytest.approx(np.log2(100) / 0.01 ** 2.5)
    assert bd.window_constant(0.2) == pytest.approx(24 * 64)


def test_window_check_c2(c2):
    v = bd.window_bound_check(c2, 0.1)
    assert v.lhs <= 1 and v.holds


def test_window_check_biased_256():
    chain = bd.biased_walk(256, 2 / 3)
    v = bd.window_bound_check(chain, 0.1)
    assert v.holds
    assert v.rhs >= v.lhs > 0


def test_window_check_validation(c2, swap_chain):
    with pytest.raises(ValueError):
        bd.window_bound_check(c2, 0.7)
    with pytest.raises(ValueError):
        bd.window_bound_check(swap_chain, 0.1)


def test_lemma_suite_c2(c2):
    rep = bd.lemma_suite(c2, 0.05)
    by_name = {c.name: c for c in rep.checks}
    for name in ("tv_from_0_hitting_bound", "tv_from_k_union_bound",
                 "tmix_le_16_max_hitting", "spectral_lower_bound"):
        assert by_name[name].applicable and by_name[name].holds
    assert not by_name["quantile_commute_bound"].applicable
    assert rep.violated() == []


def test_lemma_suite_biased():
    rep = bd.lemma_suite(bd.biased_walk(64, 2 / 3), 0.05)
    assert rep.violated() == []


def test_lemma_suite_validation(c2, swap_chain):
    with pytest.raises(ValueError):
        bd.lemma_suite(swap_chain, 0.05)
    with pytest.raises(ValueError):
        bd.lemma_suite(c2, 0.2)


def test_submultiplicativity(suite_lazy_12):
    for chain in suite_lazy_12[:25]:
        evo = bd.Evolution(chain)
        for eps in (0.1, 0.01):
            assert bd.submultiplicativity_check(chain, eps, evo=evo)
