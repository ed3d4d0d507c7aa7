"""Error norms, convergence tables, scheme-name parsing, problem registry."""

import numpy as np
import pytest

from wenolab import FieldSnapshot, Grid1D, WenoForm
from wenolab.bench import (
    convergence_study,
    l1_error,
    scaled_abs_sum,
    scheme_from_name,
    scheme_label,
)
from wenolab.problems import case_names, get_case, reference_profile


class TestL1Error:
    def test_identical_arrays_give_zero(self):
        g = Grid1D(0.0, 1.0, 10)
        snap = FieldSnapshot(0.0, g, np.arange(10.0)[:, None])
        assert l1_error(snap, np.arange(10.0)) == 0.0

    def test_unit_difference_on_unit_domain(self):
        g = Grid1D(0.0, 1.0, 10)
        snap = FieldSnapshot(0.0, g, np.ones((10, 1)))
        assert l1_error(snap, np.zeros(10)) == pytest.approx(1.0)

    def test_dx_weighting_fixed_pointwise_difference(self):
        # halving dx with the same pointwise difference leaves the error put
        for n in (10, 20):
            g = Grid1D(0.0, 1.0, n)
            snap = FieldSnapshot(0.0, g, np.full((n, 1), 0.3))
            assert l1_error(snap, np.zeros(n)) == pytest.approx(0.3)

    def test_grid_mismatch_raises(self):
        g = Grid1D(0.0, 1.0, 10)
        snap = FieldSnapshot(0.0, g, np.ones((10, 1)))
        with pytest.raises(ValueError, match="grid"):
            l1_error(snap, np.zeros(11))

    def test_component_selection(self):
        g = Grid1D(0.0, 1.0, 8)
        cells = np.stack([np.ones(8), 2 * np.ones(8)], axis=1)
        snap = FieldSnapshot(0.0, g, cells)
        ref = np.zeros((8, 2))
        assert l1_error(snap, ref, component=1) == pytest.approx(2.0)


class TestScaledAbsSum:
    def test_unit_length_matches_plain_sum(self):
        a = np.array([1.0, 2.0, 3.0])
        b = np.zeros(3)
        assert scaled_abs_sum(a, b, dx=0.5, length=1.0) == pytest.approx(3.0)

    def test_length_normalization(self):
        a, b = np.ones(4), np.zeros(4)
        assert scaled_abs_sum(a, b, dx=0.5, length=2.0) == pytest.approx(1.0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            scaled_abs_sum(np.ones(3), np.ones(4), 0.1, 1.0)


class TestConvergenceStudy:
    def test_tanh_matches_published_values(self):
        table = convergence_study(get_case("tanh-deriv"),
                                  scheme_from_name("ejs:2,2", eps=1e-40),
                                  ns=(101, 201))
        assert table.rows[0].error == pytest.approx(2.0e-4, rel=0.2)
        assert table.rows[1].error == pytest.approx(7.1e-6, rel=0.2)
        assert table.rows[1].order == pytest.approx(4.8, abs=0.2)
        assert table.rows[0].order is None

    def test_table_formatting(self):
        table = convergence_study(get_case("tanh-deriv"),
                                  scheme_from_name("ejs:2,2", eps=1e-40),
                                  ns=(101, 201))
        text = str(table)
        assert "tanh-deriv" in text and "ejs:2,2" in text
        assert "N" in text and "order" in text
        assert len(text.splitlines()) == 4

    def test_rejects_pde_case(self):
        with pytest.raises(ValueError, match="derivative"):
            convergence_study(get_case("sod"), scheme_from_name("js"))


class TestSchemeNames:
    def test_plain_schemes(self):
        assert scheme_from_name("js").form is WenoForm.JS
        assert scheme_from_name("z").form is WenoForm.Z
        assert scheme_from_name("linear").form is WenoForm.LINEAR

    def test_weno45_alias(self):
        t = scheme_from_name("weno45")
        assert t.form is WenoForm.EMBEDDED_FORM1
        assert (t.c2, t.c0) == (2.0, 2.0)

    def test_fractional_proportions(self):
        t = scheme_from_name("ejs:2/3,6/7")
        assert t.c2 == pytest.approx(2 / 3)
        assert t.c0 == pytest.approx(6 / 7)

    def test_decimal_proportions(self):
        t = scheme_from_name("ez:0.667,0.857")
        assert t.form is WenoForm.EMBEDDED_FORM2
        assert t.c2 == pytest.approx(0.667)

    def test_parameter_overrides(self):
        t = scheme_from_name("ez:2,2", eps=1e-40, p=1.0, mu=0.5)
        assert t.eps == 1e-40 and t.p == 1.0 and t.mu == 0.5

    def test_outer_scheme_suffix(self):
        assert scheme_from_name("ejs:2,2").outer is WenoForm.LINEAR
        assert scheme_from_name("ejs:2/3,6/7,js").outer is WenoForm.JS
        assert scheme_from_name("ez:2/3,6/7,z").outer is WenoForm.Z
        assert scheme_from_name("ez:2,2,linear").outer is WenoForm.LINEAR

    @pytest.mark.parametrize("bad", ["weno9", "ejs:1", "ejs:a,b", "js:2,2x",
                                     "ejs:2,2,weno"])
    def test_unknown_scheme_raises(self, bad):
        with pytest.raises(ValueError):
            scheme_from_name(bad)

    def test_labels_round_trip(self):
        for name in ("linear", "js", "z", "ejs:2,2", "ez:0.5,2", "ejs:2,2,js",
                     "ez:2,2,z"):
            assert scheme_label(scheme_from_name(name)) == name


class TestRegistry:
    def test_registered_names_exactly(self):
        assert case_names() == sorted([
            "shu-linear", "plane-wave-10pi", "plane-wave-20pi", "sod", "lax",
            "r123", "blast", "shu-osher", "tanh-deriv", "sin-crit-deriv",
        ])

    def test_unknown_case(self):
        with pytest.raises(KeyError, match="registered"):
            get_case("kelvin-helmholtz")

    def test_riemann_reference_matches_star_values(self):
        case = get_case("sod")
        g = Grid1D(-1.0, 1.0, 51)
        ref = reference_profile(case, g, 0.4)
        assert ref.shape == (51, 3)
        # density behind the right shock equals the right star density
        from wenolab import solve_star
        sol = solve_star((1, 0, 1), (0.125, 0, 0.1))
        x = g.centers()
        star_band = (x / 0.4 > sol.u_star + 0.05) & (x / 0.4 < 1.0)
        assert np.allclose(ref[star_band, 0], sol.rho_star_r, rtol=1e-10)

    def test_shu_profile_shapes(self):
        from wenolab.problems import shu_profile
        x = np.array([-0.7, -0.3, 0.1, 0.5, 0.9])
        u = shu_profile(x)
        assert u[1] == 1.0            # square
        assert u[2] == pytest.approx(1.0)   # triangle peak
        assert u[3] == pytest.approx(1.0, abs=0.01)  # ellipse peak
        assert u[4] == 0.0
        # the Gaussian block keeps three equal-weight terms
        assert 0.45 < u[0] < 0.55

    def test_expensive_references_gated(self):
        g = Grid1D(0.0, 1.0, 16)
        assert reference_profile(get_case("blast"), g, 0.01) is None
        g = Grid1D(-1.0, 9.0, 16)
        assert reference_profile(get_case("shu-osher"), g, 0.01) is None

    def test_fine_grid_restriction(self):
        from wenolab.problems import _restrict

        fine = Grid1D(0.0, 1.0, 64)
        vals = np.sin(np.pi * fine.centers())[:, None]
        snap = FieldSnapshot(0.0, fine, vals)
        # divisible counts: block average
        coarse = Grid1D(0.0, 1.0, 16)
        out = _restrict(snap, coarse)
        np.testing.assert_allclose(out[:, 0], vals[:, 0].reshape(16, 4).mean(axis=1))
        # non-divisible counts: interpolation at coarse centers
        coarse = Grid1D(0.0, 1.0, 10)
        out = _restrict(snap, coarse)
        np.testing.assert_allclose(out[:, 0], np.sin(np.pi * coarse.centers()),
                                   atol=2e-3)

    def test_initial_cells_average_jump_exactly(self):
        case = get_case("sod")
        g = Grid1D(-1.0, 1.0, 201)
        cells = case.initial_cells(g)
        law = case.law
        # the jump sits at the center of cell 100: exact half/half mix
        expected = 0.5 * (law.conserved(1, 0, 1) + law.conserved(0.125, 0, 0.1))
        np.testing.assert_allclose(cells[100], expected, rtol=1e-12)
        np.testing.assert_allclose(cells[0], law.conserved(1, 0, 1), rtol=1e-14)
        np.testing.assert_allclose(cells[-1], law.conserved(0.125, 0, 0.1), rtol=1e-14)
