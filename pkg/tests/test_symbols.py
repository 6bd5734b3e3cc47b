import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fhtoeplitz import symbols as sym
from fhtoeplitz.errors import EvaluationAtSingularity, NotOnUnitCircle, ParameterOutOfRange
from fhtoeplitz.symbols import SymbolKind, SymbolSpec

Z0 = np.exp(1j * np.pi / 3)


def offset_grid(m):
    return np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)


# validation -----------------------------------------------------------------

def test_validate_type1_wiener_hopf_range():
    spec = SymbolSpec.type1(0.5, -0.5)
    assert sym.validate(spec, wiener_hopf=True) is spec


def test_validate_type1_outside_wiener_hopf_range():
    spec = SymbolSpec.type1(0.5, -0.1)       # -beta < alpha/2
    sym.validate(spec)
    with pytest.raises(ParameterOutOfRange):
        sym.validate(spec, wiener_hopf=True)


def test_validate_type2_trivial_exponents():
    sym.validate(SymbolSpec.type2(0, 0, Z0))


@pytest.mark.parametrize("spec, field", [
    (SymbolSpec.singular(-0.5, 0), "alpha"),
    (SymbolSpec.type1(-0.7, 0), "alpha"),
    (SymbolSpec.type2(-0.6, -0.4, Z0), "delta+gamma"),
    (SymbolSpec.type2(0.1, 0.1, 1.5), "z0"),
    (SymbolSpec.type2(0.1, 0.1, Z0, b_kind="nope"), "b_kind"),
    (SymbolSpec.type3([(0.0, 0.7)]), "singularities[0].alpha_j"),
    (SymbolSpec.type3([(1.0, 0.1), (1.0 + 2 * np.pi, 0.2)]), "singularities"),
    (SymbolSpec.type3([(1.0, 0.1)], c_kind=lambda z: -np.ones_like(z)), "c_kind"),
])
def test_validate_rejects(spec, field):
    with pytest.raises(ParameterOutOfRange) as exc:
        sym.validate(spec)
    assert exc.value.field == field


def test_validate_rejects_vanishing_b():
    spec = SymbolSpec.type2(0.1, 0.1, Z0, b_kind=lambda z: z - Z0 * np.exp(1j * np.pi / 1024))
    with pytest.raises(ParameterOutOfRange):
        sym.validate(spec)


# evaluation -----------------------------------------------------------------

def test_eval_trivial_singular():
    assert sym.evaluate(SymbolSpec.singular(0, 0), 1j) == pytest.approx(1, abs=1e-15)


def test_eval_singular_alpha_one_at_minus_one():
    # -(z - 1)**2 / z = 2 - z - 1/z
    assert sym.evaluate(SymbolSpec.singular(1, 0), -1) == pytest.approx(4, abs=1e-14)


def test_eval_singular_alpha_one_is_laurent_polynomial():
    z = offset_grid(64)
    np.testing.assert_allclose(sym.evaluate(SymbolSpec.singular(1, 0), z), 2 - z - 1 / z,
                               atol=1e-13)


def test_eval_type2_trivial():
    z = offset_grid(16)
    np.testing.assert_allclose(sym.evaluate(SymbolSpec.type2(0, 0, Z0), z), 1, atol=1e-15)


def test_eval_off_circle():
    with pytest.raises(NotOnUnitCircle):
        sym.evaluate(SymbolSpec.singular(0.25, 0), 1.1)


@pytest.mark.parametrize("spec, z", [
    (SymbolSpec.singular(0.25, -0.5), 1.0),
    (SymbolSpec.type1(0.5, -0.5), 1.0),
    (SymbolSpec.type2(0.3, 0.2, Z0), Z0),
    (SymbolSpec.type3([(np.pi, 0.25)]), -1.0),
])
def test_eval_at_singularity(spec, z):
    with pytest.raises(EvaluationAtSingularity):
        sym.evaluate(spec, z)


@pytest.mark.parametrize("alpha", [0.25, 0.75])
@pytest.mark.parametrize("beta", [-0.5, 0.0])
def test_singular_expanded_and_product_forms_agree(alpha, beta):
    z = offset_grid(1024)
    a = sym.singular_form_expanded(alpha, beta, z)
    b = sym.singular_form_product(alpha, beta, z)
    assert np.max(np.abs(a - b)) < 1e-10


def test_singular_matches_trigonometric_form():
    # independent oracle: (2 sin(theta/2))**(2 alpha) exp(i beta (theta - pi))
    alpha, beta = 0.75, -0.5
    theta = 2 * np.pi * (np.arange(512) + 0.5) / 512
    oracle = (2 * np.sin(theta / 2)) ** (2 * alpha) * np.exp(1j * beta * (theta - np.pi))
    got = sym.evaluate(SymbolSpec.singular(alpha, beta), np.exp(1j * theta))
    assert np.max(np.abs(got - oracle)) < 1e-12


def test_singular_equals_type1_with_doubled_alpha():
    z = offset_grid(256)
    a = sym.evaluate(SymbolSpec.singular(0.3, -0.4), z)
    b = sym.evaluate(SymbolSpec.type1(0.6, -0.4), z)
    assert np.max(np.abs(a - b)) < 1e-12


def test_type3_zero_exponents_is_one():
    spec = SymbolSpec.type3([(0.3, 0.0), (2.0, 0.0)])
    np.testing.assert_allclose(sym.evaluate(spec, offset_grid(64)), 1, atol=1e-15)


def test_type3_custom_c():
    spec = SymbolSpec.type3([(np.pi, 0.25)], c_kind=lambda z: 2 + 0.5 * (z + 1 / z).real)
    sym.validate(spec)
    z = offset_grid(32)
    oracle = np.abs(z + 1) ** 0.5 * (2 + np.cos(np.angle(z)))
    np.testing.assert_allclose(sym.evaluate(spec, z), oracle, atol=1e-13)


# grids ----------------------------------------------------------------------

def test_grid_trivial_m8():
    np.testing.assert_allclose(sym.evaluate_grid(SymbolSpec.singular(0, 0), 8), np.ones(8),
                               atol=1e-15)


def test_grid_alpha_one_m4_offset():
    nodes = sym.grid_nodes(SymbolSpec.singular(1, 0), 8)
    np.testing.assert_allclose(nodes, np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8))
    vals = sym.evaluate_grid(SymbolSpec.singular(1, 0), 8)
    np.testing.assert_allclose(vals, 2 - nodes - 1 / nodes, atol=1e-14)


def test_grid_empty_type3():
    np.testing.assert_allclose(sym.evaluate_grid(SymbolSpec.type3([]), 16), 1)


def test_grid_too_small():
    with pytest.raises(ParameterOutOfRange):
        sym.evaluate_grid(SymbolSpec.singular(0, 0), 4)


def test_grid_avoids_every_type3_singularity():
    spec = SymbolSpec.type3([(0.0, 0.2), (np.pi, 0.1), (np.pi / 2, -0.2)])
    nodes = sym.grid_nodes(spec, 64)
    pts = sym.singular_points(spec)
    assert np.min(np.abs(nodes[:, None] - pts[None, :])) > 1e-3


# properties -----------------------------------------------------------------

FAMILIES = [
    SymbolSpec.singular(0.75, -0.5),
    SymbolSpec.singular(0.25, 0.3),
    SymbolSpec.type1(0.5, -0.5),
    SymbolSpec.type2(0.3, 0.2, Z0),
    SymbolSpec.type2(0.3, 0.2, Z0, b_kind="row5"),
    SymbolSpec.type3([(np.pi, 0.25), (1.0, -0.2)]),
]


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: s.kind.value)
def test_branch_continuity(spec):
    m = 4096
    nodes = sym.grid_nodes(spec, m)
    vals = sym.evaluate(spec, nodes)
    # keep nodes at least 8 cells from every singular point
    pts = sym.singular_points(spec)
    far = np.min(np.abs(nodes[:, None] - pts[None, :]), axis=1) > 8 * 2 * np.pi / m
    keep = far & np.roll(far, -1)
    step = np.abs(np.roll(vals, -1) - vals)[keep]
    # derivative estimate from a 4x finer grid
    fine = sym.grid_nodes(spec, 4 * m)
    fvals = sym.evaluate(spec, fine)
    ffar = np.min(np.abs(fine[:, None] - pts[None, :]), axis=1) > 8 * 2 * np.pi / m
    fkeep = ffar & np.roll(ffar, -1)
    deriv = np.max(np.abs(np.roll(fvals, -1) - fvals)[fkeep]) / (2 * np.pi / (4 * m))
    assert np.max(step) < 10 * (2 * np.pi / m) * deriv


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(-0.45, 1.5), beta=st.floats(-0.9, 0.9),
       theta=st.floats(0.05, 2 * np.pi - 0.05))
def test_continuation_agrees_on_circle(alpha, beta, theta):
    z = np.exp(1j * theta)
    for spec in (SymbolSpec.singular(alpha, beta), SymbolSpec.type1(alpha, beta)):
        a = sym.evaluate(spec, z)
        b = sym.continued(spec, z)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


@settings(max_examples=40, deadline=None)
@given(d=st.floats(-0.45, 0.9), g=st.floats(-0.45, 0.9), phi=st.floats(-3, 3),
       theta=st.floats(0.05, 2 * np.pi - 0.05))
def test_type2_continuation_agrees_on_circle(d, g, phi, theta):
    spec = SymbolSpec.type2(d, g, np.exp(1j * phi))
    z = np.exp(1j * (phi + theta))
    assert abs(sym.evaluate(spec, z) - sym.continued(spec, z)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(kind=st.sampled_from(list(SymbolKind)),
       a=st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
       b=st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
       phi=st.floats(-3.1, 3.1),
       sing=st.lists(st.tuples(st.floats(-3, 3), st.floats(-0.49, 0.49)), max_size=3))
def test_json_round_trip(kind, a, b, phi, sing):
    spec = SymbolSpec(kind, alpha=a, beta=b, delta=a, gamma=b, z0=np.exp(1j * phi),
                      b_kind="row2", singularities=tuple(sing))
    back = SymbolSpec.from_dict(spec.to_dict())
    assert back.kind is spec.kind
    assert back.alpha == spec.alpha and back.beta == spec.beta
    assert abs(back.z0 - spec.z0) < 1e-15
    assert back.singularities == spec.singularities
    assert back.b_kind == "row2"


def test_json_rejects_callable():
    with pytest.raises(ValueError):
        SymbolSpec.type3([], c_kind=lambda z: z).to_dict()


def test_effective_alpha():
    assert sym.effective_alpha(SymbolSpec.singular(0.75, -0.5)) == 0.75
    assert sym.effective_alpha(SymbolSpec.type1(0.5, -0.5)) == 0.25
    assert sym.effective_alpha(SymbolSpec.type2(0.3, 0.2, Z0)) == pytest.approx(0.25)
    assert sym.effective_alpha(SymbolSpec.type3([(np.pi, 0.25)])) == 0.25
    assert sym.effective_alpha(SymbolSpec.type3([])) == 0
