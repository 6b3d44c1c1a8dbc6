import json
from pathlib import Path

import numpy as np
import pytest

from apwlab.algebra import apw_norm, compose
from apwlab.errors import SpecParseError, SpecValidationError
from apwlab.freq import FreqLabel
from apwlab.specfile import dumps_spec, parse_spec, read_spec, write_spec

VOLTERRA_DOC = {
    "format_version": 1,
    "c": 1,
    "d": 1,
    "basis": [[1.0]],
    "grid": {"step": [0.03125], "half_width": [20.0]},
    "lambda": [1.0, 0.0],
    "terms": [{"label": [0], "kernel": {"kind": "exp-one-sided", "gamma": 0.5, "rate": 1.0}}],
}

TWO_FREQ_DOC = {
    "format_version": 1,
    "c": 1,
    "d": 1,
    "basis": [[1.0], [1.4142135623730951]],
    "grid": {"step": [0.0625]},
    "lambda": [1.0, 0.0],
    "terms": [
        {"label": [1, 0], "kernel": {"kind": "gaussian", "mass": 0.2, "width": 1.0}},
        {"label": [0, 1], "kernel": {"kind": "gaussian", "mass": 0.2, "width": 1.0}},
    ],
    "fiber": {"window_radius": 3},
}


def _text(doc):
    return json.dumps(doc)


def test_minimal_identity():
    doc = dict(VOLTERRA_DOC, terms=[])
    spec = parse_spec(_text(doc))
    assert apw_norm(spec.operator).total == 1.0
    assert spec.half_width == [20.0]


def test_volterra_spec():
    spec = parse_spec(_text(VOLTERRA_DOC))
    op = spec.operator
    assert op.labels == [FreqLabel((0,))]
    assert apw_norm(op).total == pytest.approx(1.5, abs=1e-3)
    assert op.terms[FreqLabel((0,))].radius == (20.0,)


def test_fiber_settings_are_kept():
    spec = parse_spec(_text(TWO_FREQ_DOC))
    assert spec.fiber == {"window_radius": 3}
    with pytest.raises(SpecParseError):
        parse_spec(_text(dict(TWO_FREQ_DOC, fiber={"window": 3})))


def test_scalar_step_is_accepted():
    doc = dict(VOLTERRA_DOC, grid={"step": 0.03125, "half_width": 20})
    assert parse_spec(_text(doc)).operator.step == (0.03125,)


def test_duplicate_label_is_rejected():
    term = VOLTERRA_DOC["terms"][0]
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(_text(dict(VOLTERRA_DOC, terms=[term, term])))
    assert "duplicate label" in str(excinfo.value)


def test_malformed_json_reports_line():
    with pytest.raises(SpecParseError) as excinfo:
        parse_spec('{\n  "c": 1,\n  "d": 1,\n}')
    assert excinfo.value.line == 4


def test_missing_field_is_named():
    doc = {k: v for k, v in VOLTERRA_DOC.items() if k != "lambda"}
    with pytest.raises(SpecParseError) as excinfo:
        parse_spec(_text(doc))
    assert excinfo.value.field == "lambda"


def test_unknown_kernel_kind():
    doc = dict(VOLTERRA_DOC, terms=[{"label": [0], "kernel": {"kind": "lorentzian"}}])
    with pytest.raises(SpecParseError) as excinfo:
        parse_spec(_text(doc))
    assert excinfo.value.field == "terms[0].kernel.kind"


def test_tail_bound_is_enforced():
    doc = dict(TWO_FREQ_DOC, grid={"step": [0.0625], "half_width": [3.0]})
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(_text(doc))
    assert excinfo.value.invariant == "tail-bound"


def test_dependent_basis_is_rejected():
    doc = dict(TWO_FREQ_DOC, basis=[[1.0], [0.5]])
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(_text(doc))
    assert excinfo.value.invariant == "injectivity"
    undeclared = dict(doc, declared_independent=False)
    assert parse_spec(_text(undeclared)).operator.basis.declared_independent is False


def test_one_sided_kernel_needs_one_dimension():
    doc = dict(
        VOLTERRA_DOC,
        c=2,
        basis=[[1.0, 0.0]],
        grid={"step": [0.25, 0.25], "half_width": [20.0, 20.0]},
    )
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(_text(doc))
    assert excinfo.value.invariant == "kernel-dimension"


def test_even_sample_count_is_rejected():
    kernel = {"kind": "samples", "grid": {"count": [4]}, "re": [0.0] * 4, "im": [0.0] * 4}
    doc = dict(VOLTERRA_DOC, terms=[{"label": [0], "kernel": kernel}])
    with pytest.raises(SpecValidationError):
        parse_spec(_text(doc))


def test_analytic_round_trip_is_byte_stable():
    for doc in (VOLTERRA_DOC, TWO_FREQ_DOC):
        spec = parse_spec(_text(doc))
        first = dumps_spec(spec.operator, spec.fiber)
        second = dumps_spec(parse_spec(first).operator, spec.fiber)
        assert first == second


def test_samples_round_trip_is_bit_exact(tmp_path):
    op = parse_spec(_text(TWO_FREQ_DOC)).operator
    product = compose(op, op)
    path = write_spec(product, tmp_path / "product.json")
    back = read_spec(path).operator
    assert back.labels == product.labels
    assert back.lam == product.lam
    for label in product.labels:
        assert np.array_equal(back.terms[label].values, product.terms[label].values)
        assert back.terms[label].tail_bound == product.terms[label].tail_bound
    assert dumps_spec(back) == path.read_text(encoding="utf-8")


def test_read_spec_missing_file(tmp_path):
    with pytest.raises(SpecParseError):
        read_spec(tmp_path / "absent.json")


@pytest.mark.parametrize("name", ["volterra", "singular", "two_frequency", "near_threshold"])
def test_shipped_operator_specs_parse(name):
    path = Path(__file__).resolve().parent.parent / "specs" / f"{name}.json"
    spec = read_spec(path)
    assert spec.operator.lam == 1.0
    assert apw_norm(spec.operator).total > 0


def test_zero_kernels_are_pruned_into_slack():
    terms = [
        {"label": [0], "kernel": {"kind": "exp-one-sided", "gamma": 0.5, "rate": 1.0}},
        {"label": [1], "kernel": {"kind": "gaussian", "mass": 0.0, "width": 1.0}},
        {"label": [2], "kernel": {"kind": "gaussian", "mass": 1e-16, "width": 1.0}},
    ]
    op = parse_spec(_text(dict(VOLTERRA_DOC, terms=terms))).operator
    assert op.labels == [FreqLabel((0,))]
    assert op.slack == pytest.approx(1e-16, rel=1e-9)
    assert [row["label"] for row in apw_norm(op).as_rows()] == ["unit", "0", "total", "slack"]


def test_half_width_is_kept_per_axis():
    doc = {
        "format_version": 1,
        "c": 2,
        "d": 1,
        "basis": [[1.0, 0.0], [0.0, 1.4142135623730951]],
        "grid": {"step": [0.25, 0.25], "half_width": [6.0, 9.0]},
        "lambda": [1.0, 0.0],
        "terms": [{"label": [1, 0], "kernel": {"kind": "gaussian", "mass": 0.2, "width": 1.0}}],
    }
    spec = parse_spec(_text(doc))
    k = spec.operator.terms[FreqLabel((1, 0))]
    assert k.grid.count == (49, 73)
    assert k.radius == (6.0, 9.0)
    assert spec.half_width == [6.0, 9.0]
    again = parse_spec(dumps_spec(spec.operator))
    assert again.operator.terms[FreqLabel((1, 0))].grid.count == (49, 73)


def test_half_width_must_match_dimension():
    doc = dict(VOLTERRA_DOC, grid={"step": [0.03125], "half_width": [20.0, 20.0]})
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(_text(doc))
    assert excinfo.value.invariant == "grid-half-width"
