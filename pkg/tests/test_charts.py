"""SVG chart generation: determinism, structure, roofline invariants."""

import xml.dom.minidom

import pytest

from fdroof import (
    BUILTIN_EQUATIONS,
    DEFAULT_REFERENCE_MARKERS,
    oi_curve,
    oi_curve_chart,
    render_svg,
    roofline_chart,
    roofline_dataset,
)
from fdroof.formatting import fmt


@pytest.fixture
def dataset(gtx480):
    return roofline_dataset(
        gtx480,
        [(BUILTIN_EQUATIONS["elastic-stiff"], 9, 94.8),
         (BUILTIN_EQUATIONS["elastic-const"], 9)],
    )


def test_fmt_rules():
    assert fmt(9.625) == "9.625"
    assert fmt(10.066666666) == "10.0667"
    assert fmt(2750.0) == "2750"
    assert fmt(1.25e8) == "1.25e+08"
    assert fmt(2.2e-5) == "2.2e-05"
    assert fmt(0) == "0"
    assert fmt(-1.5) == "-1.5"
    assert fmt(0.5774) == "0.5774"


def test_roofline_chart_always_has_both_roof_segments(dataset):
    spec = roofline_chart(dataset)
    assert spec.kind == "roofline"
    assert spec.log_axes
    assert len(spec.series) == 2  # bandwidth slope + compute roof
    slope, flat = spec.series
    assert slope.points[1] == flat.points[0]  # meet at the ridge


def test_roofline_svg_renders_and_parses(dataset):
    svg = render_svg(roofline_chart(dataset))
    xml.dom.minidom.parseString(svg)
    assert svg.startswith("<?xml")
    assert svg.count("<polyline") == 2
    # model point (open) + measured point (filled) + legend dots
    assert "elastic-stiff:k9 measured" in svg


def test_roofline_reference_markers_are_optional(dataset):
    bare = render_svg(roofline_chart(dataset))
    decorated = render_svg(roofline_chart(dataset, ref_markers=DEFAULT_REFERENCE_MARKERS))
    assert "SpMV" not in bare
    assert "SpMV" in decorated and "3DFFT" in decorated


def test_render_is_deterministic(dataset):
    a = render_svg(roofline_chart(dataset))
    b = render_svg(roofline_chart(dataset))
    assert a == b


def test_oi_curve_chart(xeon, phi, gtx480):
    eqs = [BUILTIN_EQUATIONS[n] for n in ("acoustic", "vti", "tti")]
    curves = oi_curve(eqs, k_min=3, k_max=35, machines=[xeon, phi, gtx480])
    spec = oi_curve_chart(curves)
    assert not spec.log_axes
    assert len(spec.series) == 3
    assert len(spec.ref_lines) == 3  # one I_min marker per machine
    svg = render_svg(spec)
    xml.dom.minidom.parseString(svg)
    assert "tti" in svg and "I_min" in svg


def test_oi_curve_single_equation_no_markers(acoustic):
    curves = oi_curve([acoustic], k_min=3, k_max=9)
    spec = oi_curve_chart(curves)
    assert len(spec.series) == 1
    assert spec.ref_lines == ()
    xml.dom.minidom.parseString(render_svg(spec))


def test_empty_roofline_still_renders(gtx480):
    ds = roofline_dataset(gtx480, [])
    svg = render_svg(roofline_chart(ds))
    xml.dom.minidom.parseString(svg)
    assert svg.count("<polyline") == 2
