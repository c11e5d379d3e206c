"""
Pruebas unitarias de las sumas de potencias, la inversión numérica de
Laplace y el análisis de valor final.
"""

import math

import numpy as np
import pytest

from src.errors import BranchCutError, ConvergenceError, DomainError, GrowthError, PoleError
from src.laplace import (
    FinalValue,
    InversionConfig,
    LimitKind,
    PowerSum,
    TransferFn,
    eval_tf,
    final_value,
    invert,
)
from src.specfun import mittag_leffler

ONE = PowerSum.monomial(1.0, 0.0)


def ratio(numerator, denominator) -> TransferFn:
    """Atajo: listas de (coeficiente, exponente)."""
    return TransferFn(PowerSum(numerator), PowerSum(denominator))


def random_catalog(seed: int = 20240611):
    """
    Veinte transformadas con límite conocido y exponentes ≤ 2.

    Las pares tienden a a0/b0 (FiniteLimit); las impares, con un polo
    fraccionario z^q, q ≤ 0.25, tienden a cero.
    """
    rng = np.random.default_rng(seed)
    catalog = []
    for i in range(20):
        a0, a1, b0, b1 = rng.uniform(0.5, 2.0, size=4)
        if i % 2 == 0:
            r = rng.uniform(0.8, 1.0)
            p = rng.uniform(0.8, r)
            tf = ratio([(a0, 0.0), (a1, p)], [(b0, 1.0), (b1, 1.0 + r)])
            catalog.append((tf, FinalValue(LimitKind.FINITE, a0 / b0)))
        else:
            q = rng.uniform(0.05, 0.25)
            r = rng.uniform(1.0 - q, 1.0)
            tf = ratio([(a0, 0.0)], [(b0, q), (b1, q + r)])
            catalog.append((tf, FinalValue(LimitKind.ZERO, 0.0)))
    return catalog


class TestPowerSum:
    """Pruebas de la suma de potencias."""

    def test_merge_and_order(self):
        """✅ test_merge_and_order: Verifica la fusión de exponentes iguales y el orden"""
        # Arrange & Act
        ps = PowerSum([(2.0, 1.5), (1.0, 0.0), (3.0, 1.5), (4.0, 0.5), (-4.0, 0.5)])

        # Assert
        assert ps.terms == ((1.0, 0.0), (5.0, 1.5))
        assert ps.exponents == [0.0, 1.5]
        assert ps.lowest() == (1.0, 0.0)
        assert ps.degree() == 1.5

    def test_str(self):
        """Verifica la representación textual"""
        assert str(PowerSum([(1.0, 0.0), (2.0, 0.5)])) == "1*z^0 + 2*z^0.5"
        assert str(PowerSum([(1.0, 0.0), (-2.0, 1.0)])) == "1*z^0 - 2*z^1"
        assert str(PowerSum()) == "0"

    def test_arithmetic(self):
        """Verifica suma, resta, producto y desplazamiento"""
        # Arrange
        a = PowerSum([(1.0, 0.0), (1.0, 0.5)])
        b = PowerSum([(2.0, 0.5)])

        # Act & Assert
        assert a + b == PowerSum([(1.0, 0.0), (3.0, 0.5)])
        assert (a - a).is_zero()
        assert a * b == PowerSum([(2.0, 0.5), (2.0, 1.0)])
        assert 3 * a == PowerSum([(3.0, 0.0), (3.0, 0.5)])
        assert a.shift(1.0) == PowerSum([(1.0, 1.0), (1.0, 1.5)])

    def test_evaluate_principal_branch(self):
        """Verifica la evaluación con exponentes fraccionarios en la rama principal"""
        ps = PowerSum([(1.0, 0.5)])
        assert ps.evaluate(4.0) == pytest.approx(2.0)
        assert ps.evaluate(-4.0 + 0j) == pytest.approx(2j)
        assert ps.evaluate(0.0) == 0

    def test_empty_sum_has_no_lowest_term(self):
        """❌ test_empty_sum_has_no_lowest_term: Verifica el error de la suma vacía"""
        with pytest.raises(DomainError, match="vacía"):
            PowerSum().lowest()

    def test_rejects_non_finite(self):
        """❌ Verifica que no se admiten coeficientes infinitos"""
        with pytest.raises(DomainError, match="finitos"):
            PowerSum([(math.inf, 1.0)])


class TestTransferFn:
    """Pruebas de las funciones de transferencia y su evaluación."""

    def test_eval_example(self):
        """✅ test_eval_example: Verifica (1 + z^0.5)/(z² + z^2.5 + 4z) en z = 1"""
        # Arrange
        tf = ratio([(1.0, 0.0), (1.0, 0.5)], [(1.0, 2.0), (1.0, 2.5), (4.0, 1.0)])

        # Act
        value = eval_tf(tf, 1.0)

        # Assert
        assert value == pytest.approx(1.0 / 3.0)

    def test_eval_complex_point(self):
        """Verifica 1/(z² + 1) en z = 1 + i"""
        tf = ratio([(1.0, 0.0)], [(1.0, 2.0), (1.0, 0.0)])
        assert eval_tf(tf, 1 + 1j) == pytest.approx(1.0 / ((1 + 1j) ** 2 + 1))

    def test_conjugate_symmetry(self):
        """Verifica F(z̄) = conj(F(z)) para coeficientes reales"""
        # Arrange
        tf = ratio([(1.0, 0.0), (0.7, 0.3)], [(1.0, 1.6), (2.0, 0.4)])

        # Act & Assert
        for z in (0.5 + 2j, 3.0 + 0.1j, 0.01 + 50j):
            assert eval_tf(tf, z.conjugate()) == pytest.approx(eval_tf(tf, z).conjugate())

    def test_eval_errors(self):
        """❌ test_eval_errors: Verifica los errores de dominio, corte de rama y polo"""
        with pytest.raises(DomainError, match="z = 0"):
            eval_tf(ratio([(1.0, 0.0)], [(1.0, -0.5)]), 0.0)
        with pytest.raises(BranchCutError) as info:
            eval_tf(ratio([(1.0, 0.0)], [(1.0, 0.5)]), -1.0)
        assert info.value.point == -1.0
        with pytest.raises(PoleError):
            eval_tf(ratio([(1.0, 0.0)], [(1.0, 1.0), (1.0, 0.0)]), -1.0)

    def test_principal_branch_above_cut(self):
        """✅ test_principal_branch_above_cut: Verifica z^0.5 → i justo encima del corte"""
        tf = ratio([(1.0, 0.5)], [(1.0, 0.0)])
        assert eval_tf(tf, complex(-1.0, 1e-300)) == pytest.approx(1j, abs=1e-12)
        assert eval_tf(tf, complex(-1.0, -1e-300)) == pytest.approx(-1j, abs=1e-12)

    def test_integer_exponents_allow_negative_axis(self):
        """Verifica que con exponentes enteros el semieje negativo es válido"""
        assert eval_tf(ratio([(1.0, 0.0)], [(1.0, 2.0)]), -2.0) == pytest.approx(0.25)

    def test_algebra(self):
        """Verifica suma, producto y recíproco"""
        # Arrange
        f = ratio([(1.0, 0.0)], [(1.0, 1.0)])
        g = ratio([(1.0, 0.0)], [(1.0, 1.0), (1.0, 0.0)])
        z = 0.7 + 0.2j

        # Act & Assert
        assert eval_tf(f + g, z) == pytest.approx(1 / z + 1 / (z + 1))
        assert eval_tf(f * g, z) == pytest.approx(1 / (z * (z + 1)))
        assert eval_tf(2.0 * f, z) == pytest.approx(2 / z)
        assert eval_tf(g.reciprocal(), z) == pytest.approx(z + 1)
        assert f + f == ratio([(2.0, 0.0)], [(1.0, 1.0)])

    def test_zero_denominator(self):
        """❌ Verifica que el denominador no puede ser nulo"""
        with pytest.raises(DomainError, match="denominador"):
            TransferFn(ONE, PowerSum())
        with pytest.raises(DomainError, match="recíproco"):
            TransferFn(PowerSum(), ONE).reciprocal()

    def test_str(self):
        """Verifica el formato (num) / (den)"""
        assert str(ratio([(1.0, 0.0)], [(1.0, 1.0)])) == "(1*z^0) / (1*z^1)"


class TestFinalValue:
    """Pruebas del teorema del valor final simbólico."""

    @pytest.mark.parametrize("tf,expected", [
        (ratio([(1.0, 0.0)], [(1.0, 1.0)]), FinalValue(LimitKind.FINITE, 1.0)),
        (ratio([(1.0, 0.0)], [(1.0, 1.0), (1.0, 0.0)]), FinalValue(LimitKind.ZERO)),
        (ratio([(1.0, 0.0)], [(1.0, 2.0)]), FinalValue(LimitKind.DIVERGENT, math.inf)),
        (ratio([(3.0, 0.0), (1.0, 0.4)], [(4.0, 1.0), (1.0, 1.6)]), FinalValue(LimitKind.FINITE, 0.75)),
        (ratio([(1.0, 0.0)], [(1.0, 0.5), (1.0, 2.0)]), FinalValue(LimitKind.ZERO)),
        (TransferFn(PowerSum(), ONE), FinalValue(LimitKind.ZERO)),
    ])
    def test_examples(self, tf, expected):
        """✅ test_examples: Verifica la clase y el valor del límite"""
        assert final_value(tf) == expected

    def test_str(self):
        """Verifica el texto de los resultados"""
        assert str(FinalValue(LimitKind.FINITE, 0.25)) == "FiniteLimit(0.25)"
        assert str(FinalValue(LimitKind.ZERO)) == "ZeroLimit"

    def test_random_catalog_against_inversion(self):
        """✅ test_random_catalog_against_inversion: Verifica el valor final frente a f(10³)"""
        # Arrange
        catalog = random_catalog()

        # Act & Assert
        for tf, expected in catalog:
            limit = final_value(tf)
            assert limit.kind is expected.kind
            assert limit.value == pytest.approx(expected.value)
            late = invert(tf, 1e3)
            assert abs(late - limit.value) <= 1e-2 * max(1.0, abs(limit.value)), str(tf)


class TestInvert:
    """Pruebas de la inversión numérica."""

    def setup_method(self):
        """Configuración antes de cada prueba."""
        self.times = np.array([0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0])

    def test_constant(self):
        """✅ test_constant: Verifica 1/z → 1"""
        values = invert(ratio([(1.0, 0.0)], [(1.0, 1.0)]), self.times)
        assert values == pytest.approx(np.ones_like(self.times), rel=1e-7)

    def test_exponential(self):
        """Verifica 1/(z + 1) → e^-t"""
        values = invert(ratio([(1.0, 0.0)], [(1.0, 1.0), (1.0, 0.0)]), self.times)
        assert values == pytest.approx(np.exp(-self.times), rel=1e-6, abs=1e-10)

    def test_ramp(self):
        """Verifica 1/z² → t"""
        values = invert(ratio([(1.0, 0.0)], [(1.0, 2.0)]), self.times)
        assert values == pytest.approx(self.times, rel=1e-7)

    def test_sine(self):
        """✅ test_sine: Verifica 1/(z² + 1) → sin t (polos sobre el eje imaginario)"""
        values = invert(ratio([(1.0, 0.0)], [(1.0, 2.0), (1.0, 0.0)]), self.times)
        assert values == pytest.approx(np.sin(self.times), abs=1e-6)

    def test_mittag_leffler_pair(self):
        """✅ test_mittag_leffler_pair: Verifica z^-0.6/(z^1.4 + 1) → t·E_{1.4,2}(-t^1.4)"""
        # Arrange
        tf = ratio([(1.0, -0.6)], [(1.0, 1.4), (1.0, 0.0)])
        t = np.array([0.5, 1.0, 3.0])

        # Act
        values = invert(tf, t)

        # Assert
        expected = t * mittag_leffler(1.4, 2.0, -t ** 1.4)
        assert values == pytest.approx(expected, rel=1e-6)
        assert invert(tf, 1.0) == pytest.approx(float(mittag_leffler(1.4, 2.0, -1.0)), rel=1e-6)

    def test_linearity(self):
        """Verifica invert(aF + bG) = a·invert(F) + b·invert(G)"""
        # Arrange
        rng = np.random.default_rng(7)
        for _ in range(5):
            p, q = rng.uniform(1.0, 1.8, size=2)
            a, b = rng.uniform(-2.0, 2.0, size=2)
            f = ratio([(1.0, 0.0)], [(1.0, p), (1.0, 0.0)])
            g = ratio([(1.0, 0.0)], [(1.0, q), (2.0, 0.0)])

            # Act
            combined = invert(a * f + b * g, self.times)
            separate = a * invert(f, self.times) + b * invert(g, self.times)

            # Assert
            scale = np.max(np.abs(separate))
            tolerance = InversionConfig().relative_tolerance
            assert np.max(np.abs(combined - separate)) <= 2 * tolerance * max(scale, 1.0)

    def test_underdamped_block_matches_single_times(self):
        """✅ test_underdamped_block_matches_single_times: Verifica la oscilación amortiguada en un bloque de tiempos"""
        # Arrange: 1/(z² + z + k²) → e^{-t/2} sin(ωt)/ω, polos en -1/2 ± iω
        k = 11.791534439014281
        omega = math.sqrt(k ** 2 - 0.25)
        tf = ratio([(1.0, 0.0)], [(1.0, 2.0), (1.0, 1.0), (k ** 2, 0.0)])
        t = np.array([10.3, 10.8, 15.0, 19.9])

        # Act
        block = invert(tf, t)
        single = np.array([invert(tf, ti) for ti in t])

        # Assert
        expected = np.exp(-t / 2.0) * np.sin(omega * t) / omega
        assert block == pytest.approx(expected, abs=1e-9)
        assert block == pytest.approx(single, abs=1e-9)

    def test_resonance_beyond_cap_raises(self):
        """❌ Verifica ConvergenceError si el tope de términos no alcanza los polos"""
        tf = ratio([(1.0, 0.0)], [(1.0, 2.0), (1.0, 1.0), (1e6, 0.0)])
        cfg = InversionConfig(max_quadrature_terms=256)
        with pytest.raises(ConvergenceError, match="polos"):
            invert(tf, [10.0, 20.0], cfg)

    def test_scalar_and_shape(self):
        """Verifica que un escalar devuelve float y un vector conserva su forma"""
        tf = ratio([(1.0, 0.0)], [(1.0, 1.0)])
        assert isinstance(invert(tf, 2.0), float)
        assert invert(tf, [1.0, 2.0]).shape == (2,)

    def test_zero_function(self):
        """Verifica que la función nula se invierte a cero"""
        values = invert(TransferFn(PowerSum(), ONE), self.times)
        assert np.all(values == 0.0)

    def test_growth_error(self):
        """❌ test_growth_error: Verifica el rechazo de transformadas que no decaen"""
        with pytest.raises(GrowthError):
            invert(ratio([(1.0, 0.0)], [(1.0, 0.5)]), 1.0)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
    def test_invalid_times(self, bad):
        """❌ test_invalid_times: Verifica que los instantes deben ser positivos y finitos"""
        with pytest.raises(DomainError, match="positivos"):
            invert(ratio([(1.0, 0.0)], [(1.0, 1.0)]), [1.0, bad])

    def test_convergence_error(self):
        """❌ Verifica ConvergenceError cuando la cuadratura no basta"""
        # Arrange: una oscilación rápida sin margen para duplicar términos
        tf = ratio([(1.0, 0.0)], [(1.0, 2.0), (1e4, 0.0)])
        cfg = InversionConfig(quadrature_terms=16, acceleration_depth=0, max_quadrature_terms=16)

        # Act & Assert
        with pytest.raises(ConvergenceError) as info:
            invert(tf, 1.0, cfg)
        assert info.value.residual > 0


class TestInversionConfig:
    """Pruebas de validación de la configuración."""

    def test_defaults(self):
        """✅ test_defaults: Verifica los valores por defecto"""
        cfg = InversionConfig()
        assert (cfg.abscissa_offset, cfg.quadrature_terms, cfg.acceleration_depth) == (6.0, 128, 20)
        assert cfg.relative_tolerance == 1e-8

    @pytest.mark.parametrize("kwargs", [
        {"abscissa_offset": 0.0},
        {"quadrature_terms": 4},
        {"acceleration_depth": -1},
        {"quadrature_terms": 16, "acceleration_depth": 8},
        {"relative_tolerance": 0.0},
        {"relative_tolerance": 0.1},
        {"max_quadrature_terms": 64},
    ])
    def test_invalid(self, kwargs):
        """❌ test_invalid: Verifica el rechazo de configuraciones inválidas"""
        with pytest.raises(DomainError):
            InversionConfig(**kwargs)


if __name__ == "__main__":
    pytest.main([__file__])
