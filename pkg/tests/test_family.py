import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsgsense.errors import DomainError, InfeasibleError
from fsgsense.family import (
    FsgBlocks,
    FsgParams,
    PhotonBudget,
    blocks_from_params,
    free_parameter_range,
    optimal_precision_blocks,
    params_from_blocks,
    privacy_condition_residual,
    solve_s,
    tmsv_blocks,
    total_photons,
)

finite = dict(allow_nan=False, allow_infinity=False)


def test_params_validation():
    with pytest.raises(DomainError):
        FsgParams(M=1, n_th=0.0, s=0.0, t=0.0)
    with pytest.raises(DomainError):
        FsgParams(M=2, n_th=-0.1, s=0.0, t=0.0)
    assert FsgParams(M=2, n_th=1.0, s=0.0, t=0.0).nu == 3.0


def test_blocks_validation():
    with pytest.raises(DomainError):
        FsgBlocks(M=2, eps1=1.0, eps2=1.0, gam1=1.5, gam2=0.0)
    with pytest.raises(DomainError):
        # below the vacuum limit
        FsgBlocks(M=2, eps1=0.5, eps2=0.5, gam1=0.0, gam2=0.0)


def test_photon_budget_rejects_negative():
    with pytest.raises(DomainError):
        PhotonBudget(N_tot=-1.0)


@given(
    m=st.integers(min_value=2, max_value=6),
    n_th=st.floats(min_value=0.0, max_value=5.0, **finite),
    s=st.floats(min_value=-1.5, max_value=1.5, **finite),
    t=st.floats(min_value=-1.5, max_value=1.5, **finite),
)
@settings(max_examples=200, deadline=None)
def test_chart_roundtrip(m, n_th, s, t):
    params = FsgParams(M=m, n_th=n_th, s=s, t=t)
    back = params_from_blocks(blocks_from_params(params))
    assert back.M == m
    assert back.n_th == pytest.approx(n_th, abs=1e-9)
    assert back.s == pytest.approx(s, abs=1e-9)
    assert back.t == pytest.approx(t, abs=1e-9)


@given(
    m=st.integers(min_value=2, max_value=6),
    n_th=st.floats(min_value=0.0, max_value=5.0, **finite),
    s=st.floats(min_value=-1.5, max_value=1.5, **finite),
    t=st.floats(min_value=-1.5, max_value=1.5, **finite),
)
@settings(max_examples=200, deadline=None)
def test_total_photons_identity(m, n_th, s, t):
    # M (eps1 + eps2 - 2)/4 == [nu (cosh 2s + (M-1) cosh 2t) - M]/2
    blocks = blocks_from_params(FsgParams(M=m, n_th=n_th, s=s, t=t))
    nu = 1.0 + 2.0 * n_th
    expected = 0.5 * (nu * (np.cosh(2 * s) + (m - 1) * np.cosh(2 * t)) - m)
    assert total_photons(blocks) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_solve_s_inverts_the_photon_constraint(rng):
    for _ in range(100):
        m = int(rng.integers(2, 7))
        n_th = float(rng.uniform(0.0, 3.0))
        n_tot = float(rng.uniform(m * n_th + 0.1, m * n_th + 50.0))
        t_max = free_parameter_range(m, n_th, n_tot)
        t = float(rng.uniform(-t_max, t_max))
        sol = solve_s(m, n_th, n_tot, t)
        assert sol.feasible
        assert sol.s >= 0.0
        blocks = blocks_from_params(FsgParams(M=m, n_th=n_th, s=sol.s, t=t))
        assert total_photons(blocks) == pytest.approx(n_tot, rel=1e-9, abs=1e-9)


def test_solve_s_flags_t_beyond_the_budget():
    t_max = free_parameter_range(3, 0.0, 5.0)
    sol = solve_s(3, 0.0, 5.0, 1.5 * t_max + 0.1)
    assert not sol.feasible


def test_solve_s_endpoint_gives_zero_s():
    t_max = free_parameter_range(4, 1.0, 30.0)
    sol = solve_s(4, 1.0, 30.0, t_max)
    assert sol.feasible
    assert sol.s == pytest.approx(0.0, abs=1e-6)


def test_thermal_floor_raises():
    with pytest.raises(InfeasibleError):
        solve_s(4, 5.0, 10.0, 0.0)
    with pytest.raises(InfeasibleError):
        free_parameter_range(4, 5.0, 10.0)


def test_free_parameter_range_zero_at_the_floor():
    assert free_parameter_range(4, 5.0, 20.0) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("m", [2, 3, 6])
@pytest.mark.parametrize("n_tot", [0.5, 1.0, 10.0])
def test_optimal_precision_blocks_are_pure_with_right_budget(m, n_tot):
    blocks = optimal_precision_blocks(m, n_tot)
    assert total_photons(blocks) == pytest.approx(n_tot, rel=1e-12)
    params = params_from_blocks(blocks)
    assert params.n_th == pytest.approx(0.0, abs=1e-9)
    assert params.t == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("n_tot", [0.5, 1.0, 10.0, 100.0])
def test_tmsv_blocks(n_tot):
    blocks = tmsv_blocks(n_tot)
    assert blocks.M == 2
    assert total_photons(blocks) == pytest.approx(n_tot, rel=1e-12)
    assert privacy_condition_residual(blocks) == pytest.approx(0.0, abs=1e-9 * (1 + n_tot) ** 2)
    params = params_from_blocks(blocks)
    assert params.n_th == pytest.approx(0.0, abs=1e-9)
    assert params.s == pytest.approx(-params.t, rel=1e-9)


def test_privacy_condition_residual_nonzero_off_the_tmsv_manifold():
    blocks = optimal_precision_blocks(2, 1.0)
    assert abs(privacy_condition_residual(blocks)) > 1e-3
