"""Reference acoustic kernel: correctness, symmetry, determinism."""

import numpy as np
import pytest

from fdroof import (
    KernelConfig,
    Source,
    StabilityWarning,
    ValidationError,
    Wavefield,
    dump_wavefield,
    max_stable_dt,
    oracle_step,
    run_benchmark,
    step,
)


def make_config(order, dims, n_t=1, dt_frac=0.5, **kw):
    dt = dt_frac * max_stable_dt(order, kw.get("h", 1.0), kw.get("m", 1.0))
    return KernelConfig(order=order, dims=dims, n_t=n_t, dt=dt, **kw)


def random_field(cfg, seed=0):
    rng = np.random.default_rng(seed)
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    fld.interior(2)[...] = rng.standard_normal(cfg.dims).astype(np.float32)
    fld.interior(1)[...] = rng.standard_normal(cfg.dims).astype(np.float32)
    return fld


def test_zero_field_stays_zero():
    cfg = make_config(4, (12, 12, 12))
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    for _ in range(5):
        step(fld, cfg)
    assert not fld.interior(2).any()
    assert fld.halo_is_zero()


def test_single_impulse_order2_one_step():
    cfg = KernelConfig(order=2, dims=(9, 9, 9), n_t=1, dt=0.3)
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    fld.interior(2)[4, 4, 4] = 1.0
    step(fld, cfg)
    u = fld.interior(2)
    coef = 0.3 * 0.3
    assert u[4, 4, 4] == pytest.approx(2.0 - 6.0 * coef)
    for neighbor in ((5, 4, 4), (3, 4, 4), (4, 5, 4), (4, 3, 4), (4, 4, 5), (4, 4, 3)):
        assert u[neighbor] == pytest.approx(coef)
    assert np.count_nonzero(u) == 7


def test_mirror_symmetry_is_bitexact():
    cfg = make_config(8, (17, 17, 17), n_t=1)
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    series = np.array([1.0, 0.5, -0.25, 0.1], dtype=np.float32)
    cfg.source = Source(location=(8, 8, 8), series=series)
    for _ in range(4):
        step(fld, cfg)
        u = fld.interior(2)
        for axis in range(3):
            assert (u == np.flip(u, axis=axis)).all(), f"axis {axis}"


@pytest.mark.parametrize("order", [2, 4, 8, 16])
def test_step_matches_convolution_oracle(order):
    cfg = make_config(order, (20, 20, 20))
    a = random_field(cfg, seed=order)
    b = random_field(cfg, seed=order)
    for _ in range(3):
        step(a, cfg)
        oracle_step(b, cfg)
        scale = float(np.abs(a.interior(2)).max())
        diff = float(np.abs(a.interior(2) - b.interior(2)).max())
        assert diff <= 1e-6 * scale


def test_oracle_matches_with_varying_slowness():
    m = 1.0 + 0.5 * np.random.default_rng(3).random((16, 16, 16)).astype(np.float32)
    cfg = make_config(4, (16, 16, 16), m=m)
    a = random_field(cfg, seed=11)
    b = random_field(cfg, seed=11)
    step(a, cfg)
    oracle_step(b, cfg)
    scale = float(np.abs(a.interior(2)).max())
    assert float(np.abs(a.interior(2) - b.interior(2)).max()) <= 1e-6 * scale


def test_oracle_rejects_large_grids():
    cfg = make_config(2, (40, 40, 40))
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    with pytest.raises(ValidationError, match="32"):
        oracle_step(fld, cfg)


def test_halo_stays_zero_across_orders():
    for order in (2, 8):
        cfg = make_config(order, (15, 15, 15))
        fld = random_field(cfg, seed=1)
        for _ in range(10):
            step(fld, cfg)
        assert fld.halo_is_zero()


def test_dimension_mismatch_rejected():
    cfg = make_config(4, (12, 12, 12))
    fld = Wavefield.allocate((12, 12, 12), halo=1)  # wrong halo
    with pytest.raises(ValidationError, match="does not match"):
        step(fld, cfg)


def test_config_validation():
    with pytest.raises(ValidationError):
        KernelConfig(order=3, dims=(9, 9, 9), n_t=1, dt=0.1)
    with pytest.raises(ValidationError):
        KernelConfig(order=8, dims=(5, 9, 9), n_t=1, dt=0.1)  # halo 4 needs >= 9
    with pytest.raises(ValidationError):
        KernelConfig(order=2, dims=(9, 9, 9), n_t=1, dt=0.1,
                     source=Source((9, 0, 0), np.ones(1)))


def test_cfl_violation_warns_and_proceeds():
    dt_bound = max_stable_dt(2, 1.0)
    with pytest.warns(StabilityWarning):
        cfg = KernelConfig(order=2, dims=(9, 9, 9), n_t=1, dt=2 * dt_bound)
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    step(fld, cfg)  # still runs


def test_at_bound_does_not_warn(recwarn):
    KernelConfig(order=2, dims=(9, 9, 9), n_t=1, dt=max_stable_dt(2, 1.0))
    assert not [w for w in recwarn if issubclass(w.category, StabilityWarning)]


def test_slab_decomposition_bitexact():
    cfg = make_config(8, (24, 20, 18))
    ref = random_field(cfg, seed=5)
    step(ref, cfg, slabs=1)
    for slabs in (2, 3, 7):
        fld = random_field(cfg, seed=5)
        step(fld, cfg, slabs=slabs)
        assert (fld.interior(2) == ref.interior(2)).all(), slabs


def test_repeated_runs_bit_identical(gtx480):
    cfg = make_config(4, (16, 16, 16), n_t=4)
    r1 = run_benchmark(cfg, gtx480)
    r2 = run_benchmark(cfg, gtx480)
    assert (r1.wavefield.interior(2) == r2.wavefield.interior(2)).all()
    assert r1.total_flops == r2.total_flops


def test_benchmark_oi_independent_of_grid(gtx480):
    small = run_benchmark(make_config(8, (12, 12, 12), n_t=2), gtx480)
    large = run_benchmark(make_config(8, (24, 24, 24), n_t=2), gtx480)
    assert small.point.oi == large.point.oi == 3.625  # 3*9/8 + 1/4
    assert small.measured_gflops > 0 and np.isfinite(small.measured_gflops)
    assert small.point.measured_gflops == small.measured_gflops


def test_benchmark_flop_accounting(gtx480):
    cfg = make_config(2, (10, 10, 10), n_t=3)
    res = run_benchmark(cfg, gtx480)
    assert res.total_flops == 10 ** 3 * 22 * 3  # N * kernel_flops(k=3) * steps
    assert res.measured_gflops == pytest.approx(res.total_flops / res.wall_time_s / 1e9)


def test_dump_wavefield_layout(tmp_path):
    cfg = make_config(2, (3, 4, 5))
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    fld.interior(2)[...] = np.arange(60, dtype=np.float32).reshape(3, 4, 5)
    path = tmp_path / "field.bin"
    dump_wavefield(fld, path)
    assert (tmp_path / "field.bin.dims").read_text() == "3 4 5\n"
    raw = np.fromfile(path, dtype="<f4")
    assert raw.shape == (60,)
    # x-fastest: the first three values walk the x axis
    assert raw[0] == fld.interior(2)[0, 0, 0]
    assert raw[1] == fld.interior(2)[1, 0, 0]
    assert raw[2] == fld.interior(2)[2, 0, 0]
    assert raw[3] == fld.interior(2)[0, 1, 0]


def test_source_injection_matches_series():
    cfg = make_config(2, (9, 9, 9))
    series = np.array([2.0, 3.0], dtype=np.float32)
    cfg.source = Source(location=(4, 4, 4), series=series)
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    step(fld, cfg)
    assert fld.interior(2)[4, 4, 4] == 2.0
    step(fld, cfg)
    # 2*u(t-1) - 0 + lap contribution at centre + q[1]
    assert fld.it == 2


def test_max_stable_dt_decreases_with_order():
    bounds = [max_stable_dt(order, 1.0) for order in (2, 4, 8, 16, 24)]
    assert bounds == sorted(bounds, reverse=True)


def test_max_stable_dt_uses_velocity():
    # m = 1/v^2: doubling the velocity halves the admissible step
    assert max_stable_dt(2, 1.0, m=0.25) == pytest.approx(max_stable_dt(2, 1.0) / 2)
