import io

import numpy as np
import pytest

from gcww import coefficients as co
from gcww import diagram
from gcww.errors import RootNotBracketedError
from gcww.params import make_params, resonance_kappa


def test_classify_unstable_and_stable():
    u = diagram.classify_point(make_params(0.1, 2.0))
    assert u.region == "unstable" and u.code == "U" and u.e22_ewb > 0
    s = diagram.classify_point(make_params(0.0, 1.0))
    assert s.region == "stable" and s.code == "S" and s.e22_ewb < 0
    assert u.c_hat_sign == 1


def test_classify_reports_exclusion_instead_of_raising():
    h = 1.5
    v = diagram.classify_point(make_params(resonance_kappa(2, h), h))
    assert v.region == "excluded" and v.code == "X"
    assert 2 in v.flags.near_resonance


def test_scan_grid_shapes_and_agreement():
    g = diagram.scan_grid((0.0, 2.0), (0.2, 3.0), 9, 7)
    assert g.verdicts.shape == (7, 9)
    for i in (0, 3, 6):
        for j in (0, 4, 8):
            v = diagram.classify_point(make_params(g.kappa_axis[j], g.depth_axis[i]))
            assert v.code == g.verdicts[i, j]


def test_scan_grid_rejects_bad_ranges():
    with pytest.raises(ValueError):
        diagram.scan_grid((1.0, 0.0), (0.1, 1.0), 4, 4)
    with pytest.raises(ValueError):
        diagram.scan_grid((0.0, 1.0), (0.1, 1.0), 1, 4)


def test_csv_layout():
    g = diagram.scan_grid((0.0, 1.0), (0.5, 1.0), 2, 2)
    text = g.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == diagram.CSV_HEADER
    assert len(lines) == 5
    assert lines[1].split(",")[:3] == ["0", "0.5", g.verdicts[0, 0]]
    buf = io.StringIO()
    g.write_csv(buf)
    assert buf.getvalue() == text


def test_csv_is_deterministic():
    a = diagram.scan_grid((0.0, 2.0), (0.1, 4.0), 11, 13).to_csv()
    b = diagram.scan_grid((0.0, 2.0), (0.1, 4.0), 11, 13).to_csv()
    assert a == b


def test_critical_depth():
    assert diagram.critical_depth() == pytest.approx(1.3627827, abs=1e-5)
    with pytest.raises(RootNotBracketedError):
        diagram.critical_depth(bracket=(2.0, 3.0))


@pytest.mark.parametrize("which", ["ewb", "e22", "D", "chat", "r2"])
def test_traced_points_are_zeros(which):
    f = diagram.curve_function(which)
    pts = diagram.trace_curve(which, "depth", (0.3, 3.5), (0.0, 2.0), n_samples=12)
    assert len(pts) > 0
    for k, h in pts:
        # Near the resonance poles e_wb is steep, so test for a sign change
        # with small values rather than a small value at the point alone.
        lo, hi = f(k - 1e-8, h), f(k + 1e-8, h)
        assert lo * hi <= 0
        assert max(abs(lo), abs(hi)) < 1e-6 + 1e-3 * min(abs(f(k - 1e-4, h)), abs(f(k + 1e-4, h)))


def test_steep_zero_beside_a_pole_is_kept():
    # e_wb has a zero squeezed between two poles near kappa = h^2/3 here.
    pts = diagram.trace_curve("ewb", "depth", (0.3, 0.3), (0.02, 0.04), n_samples=1)
    assert np.any(np.abs(pts[:, 0] - 0.0284981) < 1e-6)


def test_trace_along_kappa_axis():
    pts = diagram.trace_curve("ewb", "kappa", (0.0, 0.0), (1.0, 2.0), n_samples=1)
    assert pts.shape == (1, 2)
    assert pts[0, 1] == pytest.approx(1.3627827, abs=1e-6)


def test_resonance_curve_function():
    f = diagram.curve_function("r3")
    assert f(resonance_kappa(3, 1.2), 1.2) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        diagram.curve_function("r1")
    with pytest.raises(ValueError):
        diagram.curve_function("nonsense")
    with pytest.raises(ValueError):
        diagram.trace_curve("D", "time", (0, 1), (0, 1))


def test_poles_are_not_reported_as_zeros():
    # e_wb changes sign across the pole on D = 0; that crossing must be dropped.
    pts = diagram.trace_curve("ewb", "depth", (2.0, 2.0), (0.0, 2.0), n_samples=1, n_scan=4000)
    for k, h in pts:
        assert abs(co.raw_D(k, h)) > 1e-4


@pytest.mark.parametrize("which", ["curve4", "curve5"])
def test_asymptote_offsets_shrink(which):
    offs = [abs(diagram.asymptote_offset(which, k)) for k in (10.0, 20.0, 40.0, 80.0)]
    assert all(a > b for a, b in zip(offs, offs[1:]))


def test_asymptote_errors():
    with pytest.raises(ValueError):
        diagram.asymptote_offset("curve9", 10.0)


def test_verdict_flips_across_critical_depth_on_gravity_axis():
    g = diagram.scan_grid((0.0, 0.01), (1.0, 2.0), 2, 101)
    col = g.verdicts[:, 0]
    hs = g.depth_axis
    assert set(col[hs < 1.36]) == {"S"}
    assert set(col[hs > 1.37]) == {"U"}
