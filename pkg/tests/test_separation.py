import numpy as np
import pytest

import bdchains as bd


def brute_force_separation(chain, t):
    Pt = np.linalg.matrix_power(chain.kernel(), t)
    pi = bd.stationary(chain)
    return max(1.0 - Pt[x, y] / pi[y]
               for x in range(chain.n + 1) for y in range(chain.n + 1))


def test_worst_separation_matches_brute_force(suite_lazy_12):
    for chain in suite_lazy_12[:15]:
        for t in (0, 1, 3, 8):
            rep = bd.worst_separation(chain, t)
            brute = min(max(brute_force_separation(chain, t), 0.0), 1.0)
            assert rep.worst == pytest.approx(brute, abs=1e-12)


def test_endpoint_attains_worst_for_lazy(suite_lazy_12):
    for chain in suite_lazy_12[:25]:
        for t in (1, 5, 15):
            rep = bd.worst_separation(chain, t)
            assert abs(rep.worst - rep.endpoint_value) <= 1e-12


def test_symmetry_identity(suite_lazy_12, c4_once):
    for chain in suite_lazy_12[:25] + [c4_once]:
        for t in (1, 4, 10):
            assert bd.separation_symmetry_check(chain, t)


def test_separation_dominates_tv(suite_lazy_12):
    for chain in suite_lazy_12[:15]:
        evo = bd.Evolution(chain)
        for t in (1, 5, 12):
            assert evo.worst_tv(t)[0] <= bd.worst_separation(chain, t, evo=evo).worst + 1e-12


def test_separation_time_audit_agrees(suite_lazy_12):
    for chain in suite_lazy_12[:10]:
        fast = bd.separation_time(chain, 0.25)
        audited = bd.separation_time(chain, 0.25, audit=True)
        assert fast == audited


def test_separation_time_c2(c2):
    assert bd.separation_time(c2, 0.25) == 1  # one step reaches stationarity


def test_separation_requires_irreducible():
    chain = bd.new_chain([0.0, 0.0], [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(bd.ReducibleChainError):
        bd.worst_separation(chain, 1)


def test_apply_kernel(c2):
    f = np.array([1.0, 3.0])
    assert np.allclose(bd.apply_kernel(c2, f), c2.kernel() @ f)
    with pytest.raises(ValueError):
        bd.apply_kernel(c2, [1.0, 2.0, 3.0])


def test_is_unimodal():
    assert bd.is_unimodal([1, 2, 3, 2, 1]) == (True, 2)
    assert bd.is_unimodal([1, 2, 2, 1]) == (True, 1)
    assert bd.is_unimodal([3, 1, 2])[0] is False
    assert bd.is_unimodal([5]) == (True, 0)
    ok, mode = bd.is_unimodal([1, 2, 3, 4])
    assert ok and mode == 3


def test_is_monotone_vector():
    assert bd.is_monotone_vector([1, 2, 2, 3])
    assert bd.is_monotone_vector([3, 2, 1], decreasing=True)
    assert not bd.is_monotone_vector([1, 3, 2])


def test_likelihood_checks_lazy(suite_lazy_12):
    for chain in suite_lazy_12[:40]:
        for t in (1, 6):
            rep = bd.likelihood_ratio_checks(chain, t)
            assert rep.unimodal_checks_apply
            assert rep.all_ratio_columns_unimodal, rep.first_violation


def test_likelihood_checks_monotone(suite_monotone_200):
    for chain in suite_monotone_200[:40]:
        if not chain.flags.irreducible:
            continue
        for t in (1, 6):
            rep = bd.likelihood_ratio_checks(chain, t)
            assert rep.monotone_checks_apply
            assert rep.columns_to_zero_decreasing, rep.first_violation
            assert rep.ratio_from_zero_decreasing, rep.first_violation
