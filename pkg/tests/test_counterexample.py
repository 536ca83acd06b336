import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from aklab import (
    BumpSpec,
    TorusGrid,
    WitnessSpec,
    assemble_witness,
    build_counterexample,
    bump_f0,
    dip_halfwidth,
    distance_to_cone,
    integrate,
    middle_piece,
    negative_part,
    nonneg_from_witness,
    nonneg_witness,
    scaled_initial,
    solve_quintic,
)
from aklab.counterexample import ConstructionError, junction_residuals, ramp_eval

# c_star values found by the doubling search, recorded after the first
# verified runs (baseline homogeneous parameters, rho = 0.03, n = 256)
CSTAR_BASELINE = {
    ("L2", 0.05, 1.0): 8.0,
    ("L2", 0.05, 50.0): 256.0,
    ("L2", 0.05, 1000.0): 4096.0,
    ("L2", 0.1, 1.0): 16.0,
    ("L2", 0.1, 50.0): 512.0,
    ("L2", 0.1, 1000.0): 8192.0,
    ("SUP", 0.05, 1.0): 4.0,
    ("SUP", 0.05, 50.0): 128.0,
    ("SUP", 0.05, 1000.0): 2048.0,
    ("SUP", 0.1, 1.0): 8.0,
    ("SUP", 0.1, 50.0): 256.0,
    ("SUP", 0.1, 1000.0): 4096.0,
}


def test_dip_halfwidth_values():
    assert dip_halfwidth(0.02, "SUP") == pytest.approx(0.1, rel=1e-12)
    a = dip_halfwidth(0.1, "L2")
    assert a == pytest.approx((np.sqrt(15.0) * 0.1 / 8.0) ** 0.4, rel=1e-12)
    # downstream norm check: ||p2||_L2 = (16 a^5 / 15)^(1/2) = delta / 2
    assert np.sqrt(16.0 * a**5 / 15.0) == pytest.approx(0.05, abs=1e-14)


def test_dip_halfwidth_rejects_large_delta():
    with pytest.raises(ValueError, match="too large"):
        dip_halfwidth(8.0 / np.sqrt(15.0), "L2")  # formula gives a = 1
    with pytest.raises(ValueError, match="too large"):
        dip_halfwidth(0.5, "SUP")
    with pytest.raises(ValueError):
        dip_halfwidth(-0.1, "SUP")
    with pytest.raises(ValueError):
        dip_halfwidth(0.1, "LINF")


def test_middle_piece_shape():
    a = 0.2
    p2 = middle_piece(a)
    assert npoly.polyval(0.5, p2) == pytest.approx(-(a**2), abs=1e-15)
    dp2 = npoly.polyder(p2)
    assert npoly.polyval(0.5 - a, dp2) == pytest.approx(-2 * a, abs=1e-15)
    assert npoly.polyval(0.5 + a, dp2) == pytest.approx(2 * a, abs=1e-15)
    assert npoly.polyval(0.1, npoly.polyder(p2, 2)) == pytest.approx(2.0, abs=1e-15)
    assert npoly.polyval(0.5 - a, p2) == pytest.approx(0.0, abs=1e-15)


def test_p2_norms_match_delta_over_two():
    # sup norm on the support equals a^2 = delta/2 for the SUP half-width
    delta = 0.1
    a = dip_halfwidth(delta, "SUP")
    assert a * a == pytest.approx(delta / 2.0, rel=1e-14)
    # L2 norm on the support via refined closed-form quadrature
    a = dip_halfwidth(delta, "L2")
    u = (np.arange(2**16) + 0.5) / 2**16 * (2 * a) - a
    val = np.sqrt(np.sum((u**2 - a**2) ** 2) * (2 * a) / 2**16)
    assert val == pytest.approx(delta / 2.0, abs=1e-10)

@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("c_star", [1.0, 512.0, 32768.0])
def test_quintic_conditions(side, c_star):
    a = dip_halfwidth(0.1, "L2")
    coeffs = solve_quintic(side, a, c_star)
    sgn = -1.0 if side == "left" else 1.0
    # junction conditions
    assert ramp_eval(coeffs, side, a, 0.0, 0) == pytest.approx(0.0, abs=1e-12)
    assert ramp_eval(coeffs, side, a, 0.0, 1) == pytest.approx(sgn * 2 * a, abs=1e-10)
    assert ramp_eval(coeffs, side, a, 0.0, 2) == pytest.approx(2.0, abs=1e-9)
    # plateau conditions
    u_plat = -(0.5 - a) if side == "left" else (0.5 - a)
    assert ramp_eval(coeffs, side, a, u_plat, 0) == pytest.approx(c_star, rel=1e-12)
    assert ramp_eval(coeffs, side, a, u_plat, 1) == pytest.approx(0.0, abs=1e-10 * c_star)
    assert ramp_eval(coeffs, side, a, u_plat, 2) == pytest.approx(0.0, abs=1e-9 * c_star)


def test_quintic_rejects_bad_inputs():
    with pytest.raises(ValueError):
        solve_quintic("left", 0.6, 1.0)
    with pytest.raises(ValueError):
        solve_quintic("left", 0.2, -1.0)
    with pytest.raises(ValueError):
        solve_quintic("middle", 0.2, 1.0)


def test_mirror_symmetry():
    spec = assemble_witness("SUP", 0.1, 50.0, 7.0)
    th = np.linspace(0.0, 1.0, 2001)
    left = spec.evaluate(th)
    right = spec.evaluate(1.0 - th)
    assert np.abs(left - right).max() < 1e-10

@pytest.mark.parametrize("setting,delta", [("L2", 0.05), ("L2", 0.1), ("SUP", 0.05), ("SUP", 0.1)])
@pytest.mark.parametrize("c_star", [1.0, 256.0, 8192.0])
def test_witness_c2_junctions(setting, delta, c_star):
    spec = assemble_witness(setting, delta, 50.0, c_star)
    res = junction_residuals(spec)
    worst = max(max(v) for v in res.values())
    assert worst <= 1e-9


def test_witness_negative_region(table1):
    params, _, _ = table1
    spec = assemble_witness("L2", 0.1, 50.0, 4.0)
    th = np.linspace(0, 1, 20001)
    v = spec.evaluate(th)
    inside = (th > 0.5 - spec.a) & (th < 0.5 + spec.a)
    assert np.all(v[~inside] >= -1e-12)
    assert v[np.argmin(np.abs(th - 0.5))] == pytest.approx(-spec.a**2, abs=1e-12)


def test_witness_membership(table1):
    params, _, pc = table1
    for setting in ("L2", "SUP"):
        spec, report = build_counterexample(setting, 0.1, 50.0, pc, params)
        f = spec.to_field(params.grid)
        d = distance_to_cone(f, setting)
        assert 0.0 < d < 0.1
        tol = 1e-12 if setting == "SUP" else 1e-4
        assert d == pytest.approx(0.05, abs=tol)
        fm = negative_part(f)
        band = (params.grid.nodes > 0.5 - spec.a) & (params.grid.nodes < 0.5 + spec.a)
        assert np.all(fm.values[~band] == 0.0)


def test_cstar_baselines(table1):
    params, _, pc = table1
    for (setting, delta, bigC), expected in CSTAR_BASELINE.items():
        spec, report = build_counterexample(setting, delta, bigC, pc, params)
        assert report.passed
        assert spec.c_star == expected


def test_cstar_monotone_in_delta(table1):
    """Larger delta needs a taller plateau at fixed C: the certificate rhs
    grows faster in delta than the dip mass."""
    params, _, pc = table1
    for setting in ("L2", "SUP"):
        found = [
            build_counterexample(setting, d, 50.0, pc, params)[0].c_star
            for d in (0.05, 0.1, 0.2)
        ]
        assert found[0] <= found[1] <= found[2]


def test_witness_serialization_roundtrip(table1):
    params, _, pc = table1
    spec, _ = build_counterexample("SUP", 0.1, 50.0, pc, params)
    doc = spec.to_json_dict()
    back = WitnessSpec.from_json_dict(doc)
    assert back == spec
    g = params.grid
    assert np.array_equal(back.to_field(g).values, spec.to_field(g).values)


def test_bump_f0_values():
    g = TorusGrid(256)
    spec = BumpSpec()
    f = bump_f0(spec, g)
    assert f.values[128] == 1.0  # theta = 1/2 on the plateau
    assert f.values[0] == 0.0
    assert np.all(f.values >= 0.0) and np.all(f.values <= 1.0)


def test_bump_spec_validation():
    with pytest.raises(ValueError):
        BumpSpec(R=0.4, eps=0.3)  # 2R = 0.8 > 1 - eps = 0.7
    with pytest.raises(ValueError):
        BumpSpec(R=0.25, eps=0.6)
    with pytest.raises(ValueError):
        BumpSpec(k_bar=0.0)


def test_scaled_initial_homogeneous():
    g = TorusGrid(128)
    ten = scaled_initial(BumpSpec(k_bar=10.0), g)
    hundred = scaled_initial(BumpSpec(k_bar=100.0), g)
    assert np.abs(ten.values).max() == pytest.approx(10.0, abs=1e-12)
    assert np.array_equal(hundred.values, 10.0 * ten.values)
    assert integrate(ten) == pytest.approx(10.0 * integrate(bump_f0(BumpSpec(), g)), rel=1e-12)


def test_nonneg_witness_structure(table1):
    params, _, pc = table1
    g = params.grid
    spec, _ = build_counterexample("SUP", 0.1, 50.0, pc, params)
    f = nonneg_from_witness(spec, g)
    assert np.all(f.values >= 0.0)
    zero_band = f.values == 0.0
    width = zero_band.sum() * g.h
    assert width == pytest.approx(2.0 * spec.a, abs=2.5 * g.h)
    # the zero band sits around theta = 1/2
    assert f.values[g.n // 2] == 0.0
    direct = nonneg_witness(0.1, 50.0, pc, params)
    assert np.array_equal(direct.values, f.values)


def test_lhs_affine_in_cstar(table1):
    from aklab import l2_certificate, sup_certificate

    params, _, pc = table1
    for setting, cert in (("L2", l2_certificate), ("SUP", sup_certificate)):
        lhs = {}
        for cs in (1.0, 2.0, 4.0):
            f = assemble_witness(setting, 0.1, 50.0, cs).to_field(params.grid)
            lhs[cs] = cert(f, 50.0, 0.1, pc, params).lhs
        slope_12 = lhs[2.0] - lhs[1.0]
        slope_24 = (lhs[4.0] - lhs[2.0]) / 2.0
        assert slope_12 > 0.0
        assert abs(slope_24 - slope_12) <= 1e-8 * max(1.0, abs(lhs[4.0]))


def test_build_counterexample_cap(table1):
    # an absurd demand cannot be met below the c_star cap
    params, _, pc = table1
    import aklab.counterexample as ce

    old = ce.MAX_CSTAR
    ce.MAX_CSTAR = 4.0
    try:
        with pytest.raises(ConstructionError, match="inconsistency"):
            build_counterexample("SUP", 0.1, 1e6, pc, params)
    finally:
        ce.MAX_CSTAR = old
