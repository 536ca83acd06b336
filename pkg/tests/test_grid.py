import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aklab import (
    BumpSpec,
    Field,
    GridMismatchError,
    TorusGrid,
    bump_f0,
    inner,
    integrate,
    negative_part,
    norm_l2,
    norm_sup,
    positive_part,
    second_derivative,
    torus_distance,
)
from aklab.counterexample import bump_f0_values, p3_ramp

from conftest import INT_F0, INT_F0_SQ


def test_grid_basics():
    g = TorusGrid(32)
    assert g.h * g.n == 1.0
    assert np.all(np.diff(g.nodes) > 0)
    assert g.nodes[0] == 0.0 and g.nodes[-1] < 1.0


def test_grid_rejects_too_small():
    with pytest.raises(ValueError):
        TorusGrid(15)


def test_field_validation():
    g = TorusGrid(16)
    with pytest.raises(ValueError):
        Field(g, np.ones(8))
    with pytest.raises(ValueError):
        Field(g, np.full(16, np.nan))
    f = Field.constant(g, 2.0)
    assert not f.values.flags.writeable


def test_torus_distance_examples():
    assert torus_distance(0.1, 0.9) == pytest.approx(0.2, abs=1e-15)
    assert torus_distance(0.3, 0.3) == 0.0
    assert torus_distance(0.25, 0.75) == pytest.approx(0.5, abs=1e-15)


@given(
    st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
    st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
)
@settings(max_examples=200, deadline=None)
def test_torus_distance_symmetric_and_bounded(x, y):
    d = torus_distance(x, y)
    assert d == torus_distance(y, x)
    assert 0.0 <= d <= 0.5


def test_integrate_constant_exact():
    g = TorusGrid(64)
    assert integrate(Field.constant(g, 1.0)) == pytest.approx(1.0, abs=0.0)


def test_integrate_sine_vanishes():
    g = TorusGrid(64)
    f = Field.from_function(g, lambda th: np.sin(2 * np.pi * th))
    assert abs(integrate(f)) < 1e-12


def test_integrate_bump_against_refined_oracle():
    """Rectangle rule at refinement n = 2^16 reproduces the quadrature value
    of the closed-form bump, itself frozen at 12/25 before the build."""
    spec = BumpSpec()
    fine = TorusGrid(2**16)
    assert integrate(bump_f0(spec, fine)) == pytest.approx(INT_F0, abs=1e-10)
    coarse = TorusGrid(256)
    assert integrate(bump_f0(spec, coarse)) == pytest.approx(INT_F0, abs=5e-5)


def test_inner_orthogonal_modes():
    g = TorusGrid(64)
    s = Field.from_function(g, lambda th: np.sin(2 * np.pi * th))
    c = Field.from_function(g, lambda th: np.cos(2 * np.pi * th))
    assert abs(inner(s, c)) < 1e-12
    assert inner(Field.constant(g, 1.0), Field.constant(g, 1.0)) == pytest.approx(1.0)


def test_inner_bump_matches_squared_integral():
    spec = BumpSpec()
    fine = TorusGrid(2**16)
    f = bump_f0(spec, fine)
    assert inner(f, f) == pytest.approx(INT_F0_SQ, abs=1e-9)
    coarse = bump_f0(spec, TorusGrid(256))
    assert inner(coarse, coarse) == pytest.approx(INT_F0_SQ, abs=1e-4)


def test_inner_grid_mismatch():
    f = Field.constant(TorusGrid(32), 1.0)
    g = Field.constant(TorusGrid(64), 1.0)
    with pytest.raises(GridMismatchError):
        inner(f, g)


def test_second_derivative_annihilates_constants():
    g = TorusGrid(32)
    d2 = second_derivative(Field.constant(g, 3.7))
    assert np.all(d2.values == 0.0)


def test_second_derivative_cosine_order_two():
    errs = []
    for n in (64, 128, 256):
        g = TorusGrid(n)
        f = Field.from_function(g, lambda th: np.cos(2 * np.pi * th))
        exact = -4 * np.pi**2 * f.values
        errs.append(np.abs(second_derivative(f).values - exact).max())
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


def _bump_d2_exact(spec: BumpSpec, th: np.ndarray) -> np.ndarray:
    """Closed-form second derivative of the bump, piece by piece."""
    R, eps = spec.R, spec.eps
    lo_out, lo_in = 0.5 - R - eps / 2, 0.5 - R + eps / 2
    hi_in, hi_out = 0.5 + R - eps / 2, 0.5 + R + eps / 2

    def p3_dd(x):
        return -12.0 + 48.0 * x - 36.0 * x**2

    out = np.zeros_like(th)
    down = (th >= hi_in) & (th <= hi_out)
    out[down] = p3_dd((th[down] - 0.5 - R + eps / 2) / eps) / eps**2
    up = (th >= lo_out) & (th <= lo_in)
    out[up] = p3_dd((-th[up] + 0.5 - R + eps / 2) / eps) / eps**2
    return out


def test_second_derivative_bump_away_from_junctions():
    spec = BumpSpec()
    junctions = np.array(
        [0.5 - spec.R - spec.eps / 2, 0.5 - spec.R + spec.eps / 2,
         0.5 + spec.R - spec.eps / 2, 0.5 + spec.R + spec.eps / 2]
    )
    errs = []
    for n in (256, 512):
        g = TorusGrid(n)
        f = bump_f0(spec, g)
        num = second_derivative(f).values
        exact = _bump_d2_exact(spec, g.nodes)
        dist = np.min(
            np.abs(g.nodes[:, None] - junctions[None, :]) % 1.0, axis=1
        )
        mask = np.minimum(dist, 1.0 - dist) > 2.5 * g.h
        errs.append(np.abs(num - exact)[mask].max())
    assert errs[0] < 1.0  # |p3''''| / (12 eps^4) * h^2 at n = 256
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.3)


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=16, max_size=16))
@settings(max_examples=100, deadline=None)
def test_parts_identities(values):
    g = TorusGrid(16)
    f = Field(g, np.asarray(values))
    fp, fm = positive_part(f), negative_part(f)
    assert np.all(fp.values >= 0) and np.all(fm.values >= 0)
    assert np.all(fp.values - fm.values == f.values)
    assert np.all(fp.values * fm.values == 0.0)


def test_parts_examples():
    g = TorusGrid(16)
    assert np.all(negative_part(Field.constant(g, -2.0)).values == 2.0)
    assert np.all(negative_part(Field.constant(g, 3.0)).values == 0.0)


def test_integrate_splits_into_parts():
    rng = np.random.default_rng(3)
    g = TorusGrid(64)
    f = Field(g, rng.normal(size=64))
    total = integrate(positive_part(f)) - integrate(negative_part(f))
    assert total == pytest.approx(integrate(f), abs=1e-12)


def test_norms_basics():
    g = TorusGrid(32)
    one = Field.constant(g, 1.0)
    assert norm_l2(one) == pytest.approx(1.0)
    assert norm_sup(one) == 1.0
    rng = np.random.default_rng(1)
    f = Field(g, rng.normal(size=32))
    c = -3.5
    scaled = Field(g, c * f.values)
    assert norm_l2(scaled) == pytest.approx(abs(c) * norm_l2(f), rel=1e-12)
    assert norm_sup(scaled) == pytest.approx(abs(c) * norm_sup(f), rel=1e-12)


def test_bump_junction_slopes_flat():
    # one-sided slopes at the ramp-plateau junction differ by O(h) with the
    # constant set by the ramp curvature scale 12 / eps^2 = 1200
    spec = BumpSpec()
    for n in (512, 1024, 2048):
        g = TorusGrid(n)
        v = bump_f0(spec, g).values
        j = int(round((0.5 - spec.R + spec.eps / 2) * n))
        left = (v[j] - v[j - 1]) * n
        right = (v[j + 1] - v[j]) * n
        assert abs(left - right) < 2500.0 * g.h


def test_p3_ramp_endpoints():
    assert p3_ramp(0.0) == 1.0
    assert p3_ramp(1.0) == 0.0
    x = np.linspace(0, 1, 1001)
    v = p3_ramp(x)
    assert np.all(v >= -1e-15) and np.all(v <= 1.0 + 1e-15)


def test_bump_values_match_closed_form():
    spec = BumpSpec()
    g = TorusGrid(128)
    assert np.allclose(bump_f0(spec, g).values, bump_f0_values(spec, g.nodes))
