import numpy as np
import pytest

import bdchains as bd


@pytest.fixture(scope="session")
def c2():
    return bd.new_chain([0.5, 0.0], [0.0, 0.5], [0.5, 0.5])


@pytest.fixture(scope="session")
def swap_chain():
    return bd.new_chain([1.0, 0.0], [0.0, 1.0], [0.0, 0.0])


@pytest.fixture(scope="session")
def c4_once():
    # weighted path with edges (5, 5, 1) and unit self loops
    return bd.from_conductances([5, 5, 1], [1, 1, 1, 1], loop_convention="once")


@pytest.fixture(scope="session")
def c4_twice():
    return bd.from_conductances([5, 5, 1], [1, 1, 1, 1], loop_convention="twice")


@pytest.fixture(scope="session")
def biased3():
    # interior p = 1/3, q = 1/6; stationary (1, 2, 4, 8)/15
    p = [1 / 3, 1 / 3, 1 / 3, 0.0]
    q = [0.0, 1 / 6, 1 / 6, 1 / 6]
    r = [2 / 3, 1 / 2, 1 / 2, 5 / 6]
    return bd.new_chain(p, q, r)


def _suite(seed, count, n_lo, n_hi, maker):
    rng = bd.make_rng(seed)
    return [maker(int(rng.integers(n_lo, n_hi + 1)), rng) for _ in range(count)]


@pytest.fixture(scope="session")
def suite_lazy_12():
    return _suite(101, 200, 2, 12, bd.random_lazy_chain)


@pytest.fixture(scope="session")
def suite_lazy_30():
    return _suite(202, 500, 2, 30, bd.random_lazy_chain)


@pytest.fixture(scope="session")
def suite_lazy_20():
    return _suite(303, 300, 2, 20, bd.random_lazy_chain)


@pytest.fixture(scope="session")
def suite_lazy_16():
    return _suite(404, 200, 2, 16, bd.random_lazy_chain)


@pytest.fixture(scope="session")
def suite_monotone_200():
    return _suite(505, 200, 2, 16, bd.random_monotone_chain)


FAMILY_SIZES = (64, 128, 256, 512)
FAMILY_LEVELS = (0.05, 0.1, 0.2, 0.25, 0.75, 0.8, 0.9, 0.95)


@pytest.fixture(scope="session")
def family_data():
    """Mixing times and spectra for the drifted and driftless walk families
    at the large sizes; shared by the window and trend tests."""
    out = {}
    for name, gen in (("biased", lambda n: bd.biased_walk(n, 2 / 3)),
                      ("lazy_srw", bd.lazy_srw)):
        rows = {}
        for n in FAMILY_SIZES:
            chain = gen(n)
            evo = bd.Evolution(chain)
            spec = bd.eigenvalues(chain)
            tmix = {lvl: evo.mixing_time(lvl) for lvl in FAMILY_LEVELS}
            rows[n] = {"chain": chain, "evo": evo, "gap": spec.gap,
                       "t_rel": spec.t_rel, "tmix": tmix}
        out[name] = rows
    return out
