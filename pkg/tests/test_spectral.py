import numpy as np
import pytest

import bdchains as bd


def dense_eigenvalues(chain):
    # independent oracle: dense symmetric solver on the symmetrized matrix
    d, e = bd.symmetrized_tridiagonal(chain)
    m = len(d)
    A = np.diag(d)
    A[np.arange(m - 1), np.arange(1, m)] = e
    A[np.arange(1, m), np.arange(m - 1)] = e
    return np.sort(np.linalg.eigvalsh(A))[::-1]


def test_c2_spectrum(c2):
    rep = bd.eigenvalues(c2)
    assert np.allclose(rep.eigenvalues, [1.0, 0.0], atol=1e-12)
    assert rep.gap == pytest.approx(1.0, abs=1e-12)
    assert rep.t_rel == pytest.approx(1.0, abs=1e-12)
    assert rep.ergodic


def test_swap_spectrum(swap_chain):
    rep = bd.eigenvalues(swap_chain)
    assert np.allclose(rep.eigenvalues, [1.0, -1.0], atol=1e-12)
    assert rep.gap == pytest.approx(0.0, abs=1e-12)
    assert not rep.ergodic
    assert rep.t_rel == np.inf


def test_symmetrized_entries(c2, biased3, c4_once):
    d, e = bd.symmetrized_tridiagonal(c2)
    assert np.allclose(d, [0.5, 0.5]) and np.allclose(e, [0.5])
    _, e = bd.symmetrized_tridiagonal(biased3)
    assert np.allclose(e, np.sqrt(1 / 18))
    _, e = bd.symmetrized_tridiagonal(c4_once)
    assert np.allclose(e, np.sqrt([25 / 66, 25 / 77, 1 / 14]))


def test_lazy_c4_matches_dense_oracle(c4_once):
    chain = bd.lazy_version(c4_once)
    rep = bd.eigenvalues(chain)
    assert np.max(np.abs(rep.eigenvalues - dense_eigenvalues(chain))) <= 1e-10


def test_random_chains_match_dense_oracle(suite_lazy_16, suite_monotone_200):
    for chain in suite_lazy_16[:40] + suite_monotone_200[:40]:
        rep = bd.eigenvalues(chain)
        assert len(rep.eigenvalues) == chain.n + 1
        assert np.max(np.abs(rep.eigenvalues - dense_eigenvalues(chain))) <= 1e-10
        assert np.all(rep.eigenvalues <= 1.0 + 1e-12)
        assert np.all(rep.eigenvalues >= -1.0 - 1e-12)


def test_lazy_chains_nonnegative_spectrum(suite_lazy_16):
    for chain in suite_lazy_16[:60]:
        assert np.min(bd.eigenvalues(chain).eigenvalues) >= -1e-10


def test_kernel_similar_to_symmetrized(biased3, suite_lazy_16):
    # the asymmetric kernel and the symmetric tridiagonal built from r and
    # sqrt(p_i q_{i+1}) share a spectrum
    for chain in [biased3] + suite_lazy_16[:20]:
        raw = np.sort(np.linalg.eigvals(chain.kernel()).real)[::-1]
        assert np.max(np.abs(raw - dense_eigenvalues(chain))) <= 1e-10


def test_submatrix_spectrum_c2(c2):
    rep = bd.absorbing_submatrix_spectrum(c2, 1)
    assert np.allclose(rep.eigenvalues, [0.5])
    assert rep.gap == pytest.approx(0.5)


def test_submatrix_interlacing(suite_lazy_16):
    for chain in suite_lazy_16[:30]:
        full = bd.eigenvalues(chain).eigenvalues
        for ell in (1, chain.n // 2 + 1, chain.n):
            sub = bd.absorbing_submatrix_spectrum(chain, ell).eigenvalues
            assert len(sub) == ell
            assert np.max(sub) < 1.0  # strictly substochastic block
            for j in range(ell):  # Cauchy interlacing
                assert full[j + (chain.n + 1 - ell)] - 1e-12 <= sub[j] <= full[j] + 1e-12


def test_submatrix_range_errors(c2):
    with pytest.raises(ValueError):
        bd.absorbing_submatrix_spectrum(c2, 0)
    with pytest.raises(ValueError):
        bd.absorbing_submatrix_spectrum(c2, 5)


def test_reducible_chain_reports_warning():
    chain = bd.new_chain([0.0, 0.0], [0.0, 0.0], [1.0, 1.0])
    rep = bd.eigenvalues(chain)
    assert not rep.irreducible and not rep.ergodic
    assert np.allclose(rep.eigenvalues, [1.0, 1.0])
