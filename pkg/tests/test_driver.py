import numpy as np
import pytest

from helpers import corrcoef_pairs, distance_pairs, planted_matrix, spectrum_matrix, standardized
from tcor import (
    ConfigError,
    ConstantColumnError,
    SizeGuardError,
    TcorConfig,
    brute_force_threshold,
    savings_estimate,
    tcor,
    tdist,
    truncated_svd,
    CenteredScaledOperator,
)


@pytest.mark.parametrize("t", [0.3, 0.7, 0.9, 0.99])
def test_tcor_matches_oracle_40x300(rng, t):
    A = planted_matrix(rng, 40, 300)
    truth = corrcoef_pairs(A, t)
    for p0 in (1, 2, 5, 10):
        res = tcor(A, t, p0=p0)
        assert res.pairs() == set(truth)
        for i, j, v in res:
            assert abs(v - truth[(i, j)]) <= 1e-10


def test_tcor_sorted_and_in_range(rng):
    res = tcor(planted_matrix(rng, 20, 200), 0.5)
    key = res.i * 10_000 + res.j
    assert np.all(np.diff(key) > 0)
    assert np.all(res.values >= 0.5) and np.all(res.values <= 1.0)


def test_brute_force_small_cases():
    a = np.array([1.0, 3.0, 2.0, 5.0])
    res = brute_force_threshold(np.c_[a, a], 0.99)
    assert list(res) == [(0, 1, pytest.approx(1.0))]
    H = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])
    assert len(brute_force_threshold(H, 0.5)) == 0


def test_brute_force_cross_check_entries(rng):
    A = planted_matrix(rng, 25, 80)
    res = brute_force_threshold(A, 0.4)
    for i, j, v in list(res)[:20]:
        x, y = A[:, i] - A[:, i].mean(), A[:, j] - A[:, j].mean()
        assert v == pytest.approx(x @ y / np.sqrt((x @ x) * (y @ y)), abs=1e-12)


def test_brute_force_guard():
    A = np.random.default_rng(0).standard_normal((3, 30))
    with pytest.raises(SizeGuardError):
        brute_force_threshold(A, 0.9, max_n=20)
    brute_force_threshold(A, 0.9, max_n=None)


def test_brute_force_blocks_agree(rng):
    A = planted_matrix(rng, 10, 90)
    a = brute_force_threshold(A, 0.6, block=7)
    b = brute_force_threshold(A, 0.6, block=512)
    assert a.pairs() == b.pairs()


@pytest.mark.parametrize("t", [0.0, 1.0, -0.5, 1.5, None])
def test_invalid_threshold(t):
    with pytest.raises(ConfigError):
        tcor(np.eye(4), TcorConfig(t=t))


@pytest.mark.parametrize("kw", [{"p0": 0}, {"growth": 1.0}, {"threads": 0}, {"p0": 5, "p_max": 3}])
def test_invalid_config(kw):
    with pytest.raises(ConfigError):
        tcor(np.random.default_rng(0).standard_normal((10, 8)), 0.9, **kw)


def test_constant_column_passes_through():
    A = np.random.default_rng(0).standard_normal((6, 5))
    A[:, 2] = 1.0
    with pytest.raises(ConstantColumnError):
        tcor(A, 0.9)


def test_p0_clamped_to_rank():
    A = np.random.default_rng(3).standard_normal((5, 40))
    res = tcor(A, 0.9, p0=10)
    assert res.diagnostics.p_initial == 4


def test_rank_adaptation_grows_until_budget(rng):
    A = spectrum_matrix(rng, 60, 800, 1.0 / np.arange(1, 61) ** 0.3)
    truth = corrcoef_pairs(A, 0.6)
    res = tcor(A, 0.6, p0=1, candidate_budget=0)
    d = res.diagnostics
    assert d.ranks[0] == 1 and len(d.ranks) > 1
    assert all(b > a for a, b in zip(d.ranks, d.ranks[1:]))
    assert res.pairs() == set(truth)


def test_rank_adaptation_stops_when_flat(rng):
    A = planted_matrix(rng, 30, 300)
    res = tcor(A, 0.3, p0=2, candidate_budget=0, improvement_floor=0.99)
    assert len(res.diagnostics.ranks) <= 2


def test_no_growth_under_budget(rng):
    res = tcor(planted_matrix(rng, 30, 100), 0.99, p0=3)
    assert res.diagnostics.ranks == [3]


def test_lanczos_path_matches_oracle(rng):
    A = planted_matrix(rng, 210, 260, n_planted=20, noise=(0.0, 1.0))
    res = tcor(A, 0.7, p0=5, svd_method="lanczos", candidate_budget=0, p_max=20)
    assert res.diagnostics.svd_method == "lanczos"
    assert res.pairs() == set(corrcoef_pairs(A, 0.7))


def test_flop_model(rng):
    A = planted_matrix(rng, 30, 250)
    d = tcor(A, 0.7).diagnostics
    assert all(tests <= d.ell * d.n for tests in d.tests_per_round)


def test_eq2_exactness(rng):
    A = rng.standard_normal((20, 60)) * 2 + 1
    X = standardized(A)
    op = CenteredScaledOperator(A)
    svd = truncated_svd(op, op.max_rank)
    for _ in range(100):
        i, j = rng.choice(60, 2, replace=False)
        recon = (svd.s ** 2 * (svd.V[i] - svd.V[j]) ** 2).sum()
        direct = ((X[:, i] - X[:, j]) ** 2).sum()
        assert recon == pytest.approx(direct, rel=1e-8)


def test_tdist_duplicates():
    A = np.random.default_rng(0).standard_normal((8, 20)) * 10
    A[:, 5] = A[:, 11]
    res = tdist(A, 1e-3)
    assert list(res) == [(5, 11, 0.0)]


def test_tdist_empty(rng):
    A = rng.standard_normal((10, 30))
    dmin = min(distance_pairs(A, np.inf).values())
    assert len(tdist(A, dmin * 0.99)) == 0


def test_tdist_matches_oracle(rng):
    A = planted_matrix(rng, 20, 100, n_planted=15, noise=(0.0, 0.2))
    for d in (0.1, 0.5, 3.0):
        truth = distance_pairs(A, d)
        res = tdist(A, d)
        assert res.pairs() == set(truth)
        for i, j, v in res:
            assert v == pytest.approx(truth[(i, j)], abs=1e-10)


def test_tdist_allows_constant_columns():
    A = np.ones((4, 3))
    A[:, 2] = 2.0
    res = tdist(A, 0.5)
    assert res.pairs() == {(0, 1)}


def test_tdist_zero_matrix():
    assert len(tdist(np.zeros((3, 4)), 0.1)) == 6


def test_tdist_invalid_distance():
    with pytest.raises(ConfigError):
        tdist(np.eye(3), 0.0)


@pytest.mark.parametrize("args, expected", [
    ((6221, 80, 787, 10), 63.2),
    ((1000, 100, 10, 10), 1000.0),
])
def test_savings_estimate(args, expected):
    assert savings_estimate(*args) == pytest.approx(expected, rel=1e-3)


def test_savings_degenerate():
    assert savings_estimate(101, 100, 100, 100) == pytest.approx(1.01)
