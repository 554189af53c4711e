from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frachelm.boundary_data import BoundaryFunction
from frachelm.frac_kernels import DomainError
from frachelm.solver import (
    CompatibilityFailure,
    CompatibilityWarning,
    Field,
    ProblemSpec,
    UnknownMode,
    assemble,
    evaluate,
    evaluate_grid,
    evaluate_on,
    modal_profile,
)
from frachelm.spectral_basis import EpsOutOfRange, Eigenfunction, ModeIndex, mu_of_mode
from frachelm.verify import helmholtz_separation

PI = math.pi


def solve(kind="D", alpha=1.0, eps=0.0, c=0.0, phi="sin(y)", psi="0", n=8, **kw):
    return assemble(ProblemSpec(kind, alpha, eps, c, phi, psi, n_modes=n, **kw))


class TestSpec:
    @pytest.mark.parametrize("alpha", [0.0, 1.2, -0.5])
    def test_alpha(self, alpha):
        with pytest.raises(ValueError):
            ProblemSpec("D", alpha, 0.0, 0.0, "0", "0")

    def test_eps(self):
        with pytest.raises(EpsOutOfRange):
            ProblemSpec("D", 1.0, 1.0, 0.0, "0", "0")

    @pytest.mark.parametrize("n", [0, 2.5])
    def test_n_modes(self, n):
        with pytest.raises(ValueError):
            ProblemSpec("D", 1.0, 0.0, 0.0, "0", "0", n_modes=n)

    def test_digest_stable(self):
        a = ProblemSpec("D", 0.5, 0.1, 1.0, "sin(y)", "0")
        b = ProblemSpec("dirichlet", 0.5, 0.1, 1.0, "sin(y)", "0")
        assert a.digest() == b.digest()
        assert a.digest() != ProblemSpec("D", 0.5, 0.1, 1.5, "sin(y)", "0").digest()


class TestAssemble:
    def test_homogeneous(self):
        sol = solve(phi="0", psi="0")
        assert all(r.phi == 0 and r.psi == 0 for r in sol.records)
        f = evaluate_grid(sol, 5, 9)
        assert np.all(f.values == 0.0)

    def test_single_mode_classical(self):
        sol = solve()
        active = [r for r in sol.records if abs(r.phi) > 1e-12 or abs(r.psi) > 1e-12]
        assert [r.mode.label for r in active] == ["D-odd-1"]
        # sinh(0.5)/sinh(1) = 0.4434094...
        assert evaluate(sol, 0.5, PI / 2) == pytest.approx(math.sinh(0.5) / math.sinh(1.0), rel=1e-12)
        # sinh(0.75)/sinh(1) = 0.6997242...
        assert evaluate(sol, 0.25, PI / 2) == pytest.approx(math.sinh(0.75) / math.sinh(1.0), rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0])
    @pytest.mark.parametrize("eps", [-0.4, 0.0, 0.7])
    def test_neumann_constant_mode(self, alpha, eps):
        sol = solve("N", alpha, eps, 0.0, "1", "3")
        assert sol.zero_mode is not None
        y = np.linspace(-PI, PI, 7)
        for x in (0.0, 0.25, 0.6, 1.0):
            ref = (1 - x**alpha) + 3 * x**alpha
            np.testing.assert_allclose(evaluate(sol, x, y), ref, rtol=1e-12)
        if alpha == 0.5:
            assert evaluate(sol, 0.25, 0.0) == pytest.approx(2.0, rel=1e-13)

    def test_constant_mode_with_c_uses_kernels(self):
        sol = solve("P", 0.6, 0.0, 2.0, "1", "0")
        assert sol.zero_mode is None
        rec = sol.record(ModeIndex("P", "even", 0))
        assert rec.mu == 2.0

    def test_mu_matches_basis(self):
        sol = solve("AP", 0.7, 0.3, 1.5, "sin(y/2)", "0")
        for r in sol.records:
            assert r.mu == mu_of_mode(r.mode, 0.3, 1.5)

    def test_compatibility_strict(self):
        with pytest.raises(CompatibilityFailure) as info:
            solve(phi="cos(y)")
        assert not info.value.report.passed

    def test_compatibility_warning(self):
        with pytest.warns(CompatibilityWarning):
            solve(phi="cos(y)", strict_compat=False)

    def test_report_is_json_ready(self):
        import json

        rep = solve(alpha=0.5).report()
        text = json.dumps(rep)
        assert "spec_hash" in text and len(rep["modes"]) == len(solve(alpha=0.5).records)

    def test_threads_identical(self):
        spec = ProblemSpec("P", 0.5, 0.2, 1.0, "catalog:smooth_P", "exp(cos(y))", n_modes=12)
        a = evaluate_grid(assemble(spec), 17, 33)
        b = evaluate_grid(assemble(spec, threads=4), 17, 33, threads=4)
        assert np.array_equal(a.values, b.values)


class TestProfiles:
    def test_endpoints(self):
        sol = solve("D", 0.5, 0.2, 1.0, "catalog:smooth_D", "sin(2*y)", n=10)
        for r in sol.records:
            assert modal_profile(sol, r.mode, 0.0) == pytest.approx(r.phi, abs=1e-10)
            assert modal_profile(sol, r.mode, 1.0) == pytest.approx(r.psi, abs=1e-10)

    def test_classical(self):
        sol = solve()
        v = modal_profile(sol, ModeIndex("D", "odd", 1), 0.5)
        assert v / sol.record(ModeIndex("D", "odd", 1)).phi == pytest.approx(math.sinh(0.5) / math.sinh(1.0), rel=1e-12)

    def test_unknown_mode(self):
        sol = solve(n=3)
        with pytest.raises(UnknownMode):
            modal_profile(sol, ModeIndex("D", "odd", 4), 0.5)
        with pytest.raises(UnknownMode):
            modal_profile(sol, ModeIndex("N", "odd", 1), 0.5)

    def test_mode_decay_estimate(self):
        sol = solve("D", 0.4, -0.3, 0.5, "catalog:smooth_D", "y*(pi^2-y^2)*cos(y/2)", n=16)
        x = np.linspace(0, 1, 201)
        for r in sol.records:
            assert np.max(np.abs(modal_profile(sol, r.mode, x))) <= abs(r.phi) + abs(r.psi) + 1e-12


class TestEvaluate:
    def test_domain(self):
        sol = solve()
        with pytest.raises(DomainError):
            evaluate(sol, 1.1, 0.0)
        with pytest.raises(DomainError):
            evaluate(sol, 0.5, 4.0)

    def test_edges_reproduce_truncated_expansion(self):
        sol = solve("D", 0.6, 0.1, 0.0, "catalog:smooth_D", "sin(3*y)", n=12)
        y = np.linspace(-PI, PI, 101)
        for x, attr in ((0.0, "phi"), (1.0, "psi")):
            expansion = sum(getattr(r, attr) * Eigenfunction(r.mode)(y) for r in sol.records)
            assert np.max(np.abs(evaluate(sol, x, y) - expansion)) <= 1e-12

    def test_grid_matches_pointwise(self):
        sol = solve("N", 0.5, 0.3, 1.0, "catalog:smooth_N", "cos(y)", n=10)
        f = evaluate_grid(sol, 9, 13)
        X, Y = np.meshgrid(f.x, f.y, indexing="ij")
        np.testing.assert_allclose(f.values, evaluate(sol, X, Y), rtol=1e-13, atol=1e-13)

    def test_single_mode_outer_product(self):
        sol = solve(alpha=0.5, eps=0.2)
        f = evaluate_grid(sol, 11, 21)
        m = ModeIndex("D", "odd", 1)
        outer = np.outer(modal_profile(sol, m, f.x), Eigenfunction(m)(f.y))
        np.testing.assert_allclose(f.values, outer, rtol=1e-14, atol=1e-15)

    def test_derivative_field(self):
        sol = solve(alpha=0.5)
        y = np.array([0.0, 1.0])
        uy = evaluate_on(sol, [0.5], y, y_derivative=1).values[0]
        h = 1e-6
        fd = (evaluate(sol, 0.5, y + h) - evaluate(sol, 0.5, y - h)) / (2 * h)
        np.testing.assert_allclose(uy, fd, rtol=1e-7)

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("c", [0.0, 1.0])
    def test_classical_limit(self, m, c):
        sol = solve(phi=f"sin({m}*y)", c=c)
        f = evaluate_grid(sol, 21, 21)
        ref = helmholtz_separation(m, c, f.x, f.y)
        scale = np.max(np.abs(ref))
        assert np.max(np.abs(f.values - ref)) <= 1e-8 * scale


class TestInvariants:
    def test_even_data_even_solution(self):
        sol = solve("N", 0.5, 0.4, 1.0, "cos(2*y) + 1", "catalog:smooth_N", n=10)
        f = evaluate_grid(sol, 9, 33)
        assert np.max(np.abs(f.values - f.values[:, ::-1])) <= 1e-12

    def test_odd_data_odd_solution(self):
        sol = solve("P", 0.5, -0.4, 1.0, "sin(y) + y*(pi^2-y^2)", "sin(3*y)", n=10)
        f = evaluate_grid(sol, 9, 33)
        assert np.max(np.abs(f.values + f.values[:, ::-1])) <= 1e-12

    @settings(max_examples=10, deadline=None)
    @given(
        alpha=st.floats(0.3, 1.0),
        eps=st.floats(-0.9, 0.9),
        c=st.floats(0.0, 3.0),
        a=st.floats(-2, 2),
        b=st.floats(-2, 2),
    )
    def test_superposition(self, alpha, eps, c, a, b):
        p1, q1 = "sin(y)", f"{a!r}*sin(2*y)"
        p2, q2 = f"{b!r}*y*(pi^2-y^2)", "sin(3*y)"
        s1 = solve("D", alpha, eps, c, p1, q1, n=8)
        s2 = solve("D", alpha, eps, c, p2, q2, n=8)
        s12 = solve("D", alpha, eps, c, f"{p1} + {p2}", f"{q1} + {q2}", n=8)
        f1, f2, f12 = (evaluate_grid(s, 9, 17).values for s in (s1, s2, s12))
        assert np.max(np.abs(f12 - (f1 + f2))) <= 1e-12 * max(1.0, np.max(np.abs(f12)))

    def test_anti_periodicity(self):
        sol = solve("AP", 0.5, 0.3, 0.5, "sin(y/2)", "catalog:smooth_AP", n=12)
        x = np.linspace(0, 1, 11)
        ends = evaluate_on(sol, x, [-PI, PI]).values
        assert np.max(np.abs(ends[:, 0] + ends[:, 1])) <= 1e-10


class TestField:
    def test_csv_roundtrip(self, tmp_path):
        sol = solve(alpha=0.5)
        f = evaluate_grid(sol, 5, 7)
        path = tmp_path / "f.csv"
        text = f.to_csv(path)
        g = Field.from_csv(path)
        assert np.array_equal(g.values, f.values)
        assert np.array_equal(g.x, f.x) and np.array_equal(g.y, f.y)
        assert g.metadata == f.metadata
        assert Field.from_csv(text).metadata["spec_hash"] == sol.spec.digest()

    def test_shape_check(self):
        with pytest.raises(ValueError):
            Field(np.zeros(2), np.zeros(3), np.zeros((3, 2)))

    def test_y_fastest(self):
        f = evaluate_grid(solve(), 2, 3)
        lines = f.to_csv().splitlines()
        assert lines[1] == "x,y,u"
        assert [l.split(",")[0] for l in lines[2:]] == ["0"] * 3 + ["1"] * 3

    def test_catalog_boundary(self):
        sol = solve(phi=BoundaryFunction.from_catalog("sin", m=2))
        assert evaluate(sol, 0.0, 0.3) == pytest.approx(math.sin(0.6), abs=1e-12)
