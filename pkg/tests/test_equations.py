"""Equation catalog: FLOP counts, traffic, operational intensity, files."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fdroof import (
    BUILTIN_EQUATIONS,
    EquationSpec,
    RegistryConflictError,
    ValidationError,
    bytes_per_point,
    equation_registry,
    fd_weights,
    get_equation,
    kernel_flops,
    load_equations,
    operational_intensity,
    traffic_model,
)


def oi_closed_form(name, k):
    """The per-equation OI formulas, written down independently."""
    k = Fraction(k)
    return {
        "acoustic": 3 * k / 8 + Fraction(1, 4),
        "vti": k / 3 + Fraction(4, 9),
        "tti": k * k / 5 - k / 5 + Fraction(5, 3),
    }[name]


def test_kernel_flops_examples():
    assert kernel_flops(BUILTIN_EQUATIONS["acoustic"], 25) == 154
    assert kernel_flops(BUILTIN_EQUATIONS["tti"], 7) == 604
    for k in (3, 9, 25):
        assert kernel_flops(BUILTIN_EQUATIONS["elastic-stiff"], k) == 441


def test_bytes_per_point_examples():
    assert bytes_per_point(BUILTIN_EQUATIONS["acoustic"], 4) == 16
    assert bytes_per_point(BUILTIN_EQUATIONS["elastic-symmetric"], 4) == 112
    assert bytes_per_point(BUILTIN_EQUATIONS["acoustic"], 8) == 32
    with pytest.raises(ValidationError):
        bytes_per_point(BUILTIN_EQUATIONS["acoustic"], 2)


def test_operational_intensity_examples():
    assert operational_intensity(BUILTIN_EQUATIONS["acoustic"], 25).oi == Fraction(77, 8)
    tti = operational_intensity(BUILTIN_EQUATIONS["tti"], 7)
    assert float(tti.oi) == pytest.approx(10.0667, abs=1e-4)
    assert tti.oi == Fraction(604, 60)
    assert operational_intensity(BUILTIN_EQUATIONS["elastic-symmetric"], 9).oi == Fraction("3.9375")
    assert operational_intensity(BUILTIN_EQUATIONS["elastic-const"], 9).oi == Fraction("15.75")
    # the variable-stiffness traffic of 284 bytes/point
    stiff = operational_intensity(BUILTIN_EQUATIONS["elastic-stiff"], 9)
    assert stiff.bytes_per_point == 284
    assert float(stiff.oi) == pytest.approx(1.5528, abs=1e-4)


@pytest.mark.parametrize("name", ["acoustic", "vti", "tti"])
def test_oi_matches_closed_form_for_all_k(name):
    eq = BUILTIN_EQUATIONS[name]
    for k in range(2, 41):
        assert operational_intensity(eq, k).oi == oi_closed_form(name, k), (name, k)


@pytest.mark.parametrize("name", list(BUILTIN_EQUATIONS))
def test_oi_halves_in_double_precision(name):
    eq = BUILTIN_EQUATIONS[name]
    assert operational_intensity(eq, 9, 8).oi * 2 == operational_intensity(eq, 9, 4).oi


def test_oi_result_ratio_invariant():
    res = operational_intensity(BUILTIN_EQUATIONS["vti"], 13)
    assert res.oi == Fraction(res.kernel_flops, res.bytes_per_point)


@pytest.mark.parametrize("name", ["acoustic", "vti", "tti"])
def test_kernel_flops_polynomial_structure(name):
    # The FLOP polynomial is affine in k without cross terms and quadratic
    # with them, leading coefficient 2 * factor * n_cross.  The second
    # difference over unit k steps is twice the leading coefficient.
    eq = BUILTIN_EQUATIONS[name]
    f = [kernel_flops(eq, k) for k in range(3, 12)]
    second = {f[i + 2] - 2 * f[i + 1] + f[i] for i in range(len(f) - 2)}
    assert second == {2 * (2 * eq.factor * eq.n_cross)}


@pytest.mark.parametrize("k", [3, 5, 7])
def test_star_geometry_flop_count_oracle(k):
    """Count FLOPs off the enumerated per-axis stencil lines.

    One multiply per stencil weight and one add to accumulate each weighted
    value into the update expression, over the three k-point axis lines,
    plus the equation's fixed multiply/add/duplicate bookkeeping.
    """
    weights = fd_weights(2, k - 1).weights
    assert len(weights) == k
    mults = adds = 0
    for _axis in range(3):
        mults += len(weights)
        adds += len(weights)
    eq = BUILTIN_EQUATIONS["acoustic"]
    counted = mults + adds + eq.extra_mult + eq.extra_add - eq.duplicates
    assert counted == kernel_flops(eq, k)


def test_traffic_model():
    assert traffic_model(3, 1, streaming_stores=True) == 16
    assert traffic_model(3, 1, streaming_stores=False) == 20
    assert traffic_model(0, 1, streaming_stores=True) == 4
    assert traffic_model(7, 0) == 28
    with pytest.raises(ValidationError):
        traffic_model(0, 0)
    with pytest.raises(ValidationError):
        traffic_model(-1, 1)


@given(st.integers(0, 20), st.integers(0, 20))
def test_streaming_stores_never_cost_more(loads, stores):
    if loads + stores < 1:
        return
    assert traffic_model(loads, stores, True) <= traffic_model(loads, stores, False)


def test_builtin_vti_fields():
    vti = BUILTIN_EQUATIONS["vti"]
    assert (vti.factor, vti.n_second, vti.extra_mult, vti.extra_add,
            vti.duplicates, vti.fields_moved) == (2, 3, 5, 5, 2, 9)


def test_elastic_entries_differ_only_in_traffic():
    stiff = BUILTIN_EQUATIONS["elastic-stiff"]
    sym = BUILTIN_EQUATIONS["elastic-symmetric"]
    const = BUILTIN_EQUATIONS["elastic-const"]
    assert (stiff.fields_moved, sym.fields_moved, const.fields_moved) == (71, 28, 7)
    assert stiff.fixed_kernel_flops == sym.fixed_kernel_flops == const.fixed_kernel_flops == 441


def test_elastic_alias():
    assert get_equation("elastic") is BUILTIN_EQUATIONS["elastic-stiff"]


def test_custom_2d_variant_accepted(tmp_path):
    path = tmp_path / "eq.yaml"
    path.write_text("name: acoustic-2d\nn_second: 2\nextra_mult: 3\nextra_add: 4\n"
                    "duplicates: 3\nfields_moved: 4\n")
    registry = equation_registry([path])
    eq = registry["acoustic-2d"]
    assert kernel_flops(eq, 3) == 16


def test_negative_flops_rejected(tmp_path):
    path = tmp_path / "eq.yaml"
    # duplicates exceed everything the kernel computes
    path.write_text("name: bogus\nextra_mult: 1\nextra_add: 1\nduplicates: 50\n"
                    "fields_moved: 4\n")
    with pytest.raises(ValidationError, match="negative"):
        load_equations(path)


def test_unknown_keys_and_missing_name_rejected(tmp_path):
    path = tmp_path / "eq.yaml"
    path.write_text("name: x\nflops: 12\n")
    with pytest.raises(ValidationError, match="unknown equation keys"):
        load_equations(path)
    path.write_text("factor: 1\nfields_moved: 2\n")
    with pytest.raises(ValidationError, match="missing 'name'"):
        load_equations(path)


def test_builtin_shadowing_requires_override(tmp_path):
    path = tmp_path / "eq.yaml"
    path.write_text("name: acoustic\nn_second: 3\nextra_mult: 3\nextra_add: 5\n"
                    "duplicates: 4\nfields_moved: 5\n")
    with pytest.raises(RegistryConflictError, match="override"):
        equation_registry([path])
    path.write_text("name: acoustic\noverride: true\nn_second: 3\nextra_mult: 3\n"
                    "extra_add: 5\nduplicates: 4\nfields_moved: 5\n")
    registry = equation_registry([path])
    assert registry["acoustic"].fields_moved == 5


def test_spec_invariant_validation():
    with pytest.raises(ValidationError):
        EquationSpec(name="bad", factor=0)
    with pytest.raises(ValidationError):
        EquationSpec(name="bad", n_second=-1)
    with pytest.raises(ValidationError):
        EquationSpec(name="bad", fields_moved=0)
    with pytest.raises(ValidationError):
        EquationSpec(name="bad", fixed_kernel_flops=0)
