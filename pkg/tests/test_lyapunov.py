from fractions import Fraction

import pytest

from isoquintic.qpoly import Poly, parse_expr, solve_linear_exact
from isoquintic.lyapunov import (
    PlanarSystem, LyapunovError, check_linear_center, rotation_operator_matrix,
    pl_constants, first_nonzero,
)
from isoquintic import quintic

X = Poly.var("x")
Y = Poly.var("y")


def det_exact(m):
    """Fraction determinant by elimination (independent of the solver path)."""
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return det


class TestRotationOperator:
    def test_k2_by_direct_differentiation(self):
        m = rotation_operator_matrix(2)
        # columns are L(x^2)=2xy, L(xy)=y^2-x^2, L(y^2)=-2xy
        cols = [[m[i][j] for i in range(3)] for j in range(3)]
        assert cols == [[0, 2, 0], [-1, 0, 1], [0, -2, 0]]

    def test_k1(self):
        assert rotation_operator_matrix(1) == [[Fraction(0), Fraction(-1)],
                                               [Fraction(1), Fraction(0)]]

    @pytest.mark.parametrize("k", [3, 5, 7, 9, 11])
    def test_odd_degrees_nonsingular(self, k):
        assert det_exact(rotation_operator_matrix(k)) != 0

    @pytest.mark.parametrize("k", [2, 4, 6])
    def test_even_degrees_singular(self, k):
        # the even-stage solve relies on the augmented system instead
        assert det_exact(rotation_operator_matrix(k)) == 0

    def test_matches_operator_action(self):
        k = 4
        m = rotation_operator_matrix(k)
        for j in range(k + 1):
            basis = X ** (k - j) * Y ** j
            image = Y * basis.diff("x") - X * basis.diff("y")
            expect = Poly.zero()
            for i in range(k + 1):
                expect = expect + m[i][j] * X ** (k - i) * Y ** i
            assert image == expect


def family_system():
    return quintic.build_system(quintic.QuinticParams.symbolic())


class TestPlConstants:
    def test_first_constant_of_family(self):
        rep = pl_constants(family_system(), 1)
        assert rep.constants[0] == Poly.var("a") + Poly.var("c")
        # the raw value is a positive rational multiple of the canonical one
        assert rep.raw[0] == Fraction(2, 3) * (Poly.var("a") + Poly.var("c"))

    def test_linear_center_all_zero(self):
        rep = pl_constants(PlanarSystem(Y, -X), 4)
        assert all(d.is_zero for d in rep.raw)
        assert rep.first_nonzero_index is None

    def test_numeric_a1(self):
        sysm = quintic.build_system(quintic.QuinticParams.numeric(
            1, 0, 0, 0, 0, 0, 0, 0))
        rep = pl_constants(sysm, 1)
        assert rep.raw[0].eval_rational({}) == Fraction(2, 3)
        assert rep.first_nonzero_index == 1
        assert rep.sign == "positive"

    def test_invalid_linear_part(self):
        with pytest.raises(LyapunovError):
            pl_constants(PlanarSystem(Y + X ** 2, -X + Y), 1)
        with pytest.raises(LyapunovError):
            check_linear_center(PlanarSystem(Y + 1, -X))

    def test_cap(self):
        with pytest.raises(LyapunovError):
            pl_constants(PlanarSystem(Y, -X), 7)

    def test_exactness_oracle(self):
        """Independent check: assemble F from the solved components, compute
        dF/dt directly, and compare with sum D_i (x^(2i+2) + y^(2i+2))."""
        m = 3
        sysm = family_system()
        rep = pl_constants(sysm, m)
        F = Poly.zero()
        for part in rep.f_components.values():
            F = F + part
        dF = F.diff("x") * sysm.p + F.diff("y") * sysm.q
        expected = Poly.zero()
        for i, d in enumerate(rep.raw, 1):
            k = 2 * i + 2
            expected = expected + d * (X ** k + Y ** k)
        diff = dF - expected
        # agreement through every fully-determined degree
        for deg, part in diff.homogeneous_parts().items():
            if deg <= 2 * m + 2:
                assert part.is_zero, f"degree {deg} residual {part}"

    def test_stage_matrices_parameter_free(self):
        # the solves only ever see Fraction matrices by construction
        for k in range(1, 12):
            for row in rotation_operator_matrix(k):
                assert all(isinstance(v, Fraction) for v in row)


class TestFirstNonzero:
    def test_positive_focus(self):
        rep = pl_constants(family_system(), 2)
        zeros = {n: 0 for n in quintic.PARAM_NAMES}
        assert first_nonzero(rep, {**zeros, "a": 1}) == (1, "positive")

    def test_case_ii_center_point(self):
        rep = pl_constants(family_system(), 4)
        zeros = {n: 0 for n in quintic.PARAM_NAMES}
        assert first_nonzero(rep, {**zeros, "b": 1}) is None

    def test_second_constant(self):
        rep = pl_constants(family_system(), 2)
        zeros = {n: 0 for n in quintic.PARAM_NAMES}
        assert first_nonzero(rep, {**zeros, "d": 1}) == (2, "positive")

    def test_unbound_parameter(self):
        rep = pl_constants(family_system(), 1)
        with pytest.raises(Exception):
            first_nonzero(rep, {"a": 1})


class TestVanishingConsistency:
    def test_relations_control_constants(self, rng):
        rep = pl_constants(family_system(), 4)
        hits = 0
        while hits < 100:
            b = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
            e = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
            g = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
            det = 3 * b ** 3 - 12 * b * c ** 2
            if det == 0:
                continue
            # solve the two bilinear relations for (f, h), then d
            f = (3 * b ** 2 * 3 * c * (e + g) - 6 * b * 3 * b * c * g) / det
            h = (b * 3 * b * c * g - 2 * c ** 2 * 3 * c * (e + g)) / det
            d = (-f - 3 * h) / 3
            pt = {"a": -c, "b": b, "c": c, "d": d, "e": e, "f": f,
                  "g": g, "h": h}
            params = quintic.QuinticParams(**pt)
            assert all(r.eval_rational(pt) == 0
                       for r in quintic.reduced_conditions(params))
            assert all(dp.eval_rational(pt) == 0 for dp in rep.raw)
            hits += 1

    def test_violating_first_relation(self, rng):
        rep = pl_constants(family_system(), 1)
        for _ in range(100):
            pt = {n: Fraction(rng.randint(-9, 9), rng.randint(1, 3))
                  for n in quintic.PARAM_NAMES}
            if pt["a"] + pt["c"] == 0:
                pt["a"] += 1
            assert rep.raw[0].eval_rational(pt) != 0
