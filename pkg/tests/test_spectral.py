"""
Pruebas de la solución espectral y de sus casos cerrados.
"""

import math

import numpy as np
import pytest

from src.errors import DomainError, TruncationError
from src.laplace import PowerSum, TransferFn
from src.specfun import bessel_j0, j0_roots
from src.spectral import (
    FluidParams,
    RadialField,
    SpectralSolver,
    characteristic_scales,
    mode_table,
    steady_profile,
    stress,
    velocity,
    velocity_maxwell_mode,
    velocity_newtonian,
    velocity_scott_blair,
    velocity_transform,
)

NEWTONIAN = FluidParams(alpha=0.0, beta=1.0, lam=1.0)


def center_tail(alpha: float, beta: float, times) -> np.ndarray:
    """
    Comportamiento de u(0, t) a tiempo largo (λ = 1).

    Cada modo se comporta en z → 0 como (1 + z^α)/(k² z^β) y Σ A_m/k_m² = 1/4,
    de modo que u(0, t) ≈ (t^{β-1}/Γ(β) + t^{β-α-1}/Γ(β-α))/4; el segundo
    término desaparece si α = β.
    """
    t = np.asarray(times, dtype=float)
    tail = t ** (beta - 1.0) / math.gamma(beta)
    if beta > alpha:
        tail = tail + t ** (beta - alpha - 1.0) / math.gamma(beta - alpha)
    return 0.25 * tail


class TestFluidParams:
    """Pruebas de validación de los parámetros."""

    def test_valid(self):
        """✅ test_valid: Verifica la creación y el texto"""
        params = FluidParams(0.3, 0.8, 2.0)
        assert str(params) == "α=0.3, β=0.8, λ=2"

    @pytest.mark.parametrize("alpha,beta,lam", [
        (0.9, 0.5, 1.0),
        (-0.1, 0.5, 1.0),
        (0.2, 1.2, 1.0),
        (0.2, 0.5, 0.0),
        (math.nan, 0.5, 1.0),
    ])
    def test_invalid(self, alpha, beta, lam):
        """❌ test_invalid: Verifica 0 ≤ α ≤ β ≤ 1 y λ > 0"""
        with pytest.raises(DomainError):
            FluidParams(alpha, beta, lam)


class TestModes:
    """Pruebas de la tabla de modos."""

    def test_first_coefficient(self):
        """✅ test_first_coefficient: Verifica A_1 = 2/(k_1 J1(k_1)) ≈ 1.60197"""
        modes = mode_table(NEWTONIAN, 3)
        assert modes[0].index == 1
        assert modes[0].coefficient == pytest.approx(1.60197, abs=1e-5)
        assert [m.root for m in modes] == list(j0_roots(3).roots)

    def test_partial_sums_of_unity(self):
        """Verifica Σ A_m J0(k_m r) → 1 en r = 0.5"""
        # Arrange
        modes = mode_table(NEWTONIAN, 400)

        # Act
        terms = np.array([m.coefficient * bessel_j0(m.root * 0.5) for m in modes])

        # Assert
        assert np.sum(terms) == pytest.approx(1.0, abs=2e-2)
        assert np.mean(np.cumsum(terms)[-50:]) == pytest.approx(1.0, abs=1e-3)

    def test_newtonian_transform(self):
        """Verifica que α = 0, β = 1 da 2/(2z² + k² z)"""
        # Arrange
        k = 2.0
        expected = TransferFn(PowerSum([(2.0, 0.0)]), PowerSum([(2.0, 2.0), (k ** 2, 1.0)]))

        # Act
        tf = velocity_transform(NEWTONIAN, k)

        # Assert
        for z in (0.3 + 1j, 2.0, 5.0 - 3j):
            assert tf.evaluate(z) == pytest.approx(expected.evaluate(z))


class TestVelocity:
    """Pruebas del campo de velocidad."""

    def test_newtonian_profile(self):
        """✅ test_newtonian_profile: Verifica el perfil newtoniano frente a la serie exponencial"""
        # Arrange
        radii = np.linspace(0.0, 1.0, 11)
        times = [0.2, 1.0, 10.0]

        # Act
        field = velocity(NEWTONIAN, radii, times, modes=200, tail_tolerance=1e-3)
        exact = velocity_newtonian(radii, times, modes=400)

        # Assert
        assert field.values == pytest.approx(exact.values, abs=1e-5)
        assert field.at_time(10.0) == pytest.approx((1.0 - radii ** 2) / 2.0, abs=1e-4)

    @pytest.mark.parametrize("alpha,beta", [(0.0, 1.0), (0.0, 0.4), (0.3, 0.8), (0.6, 0.6), (0.6, 1.0), (1.0, 1.0)])
    def test_no_slip_and_rest(self, alpha, beta):
        """✅ test_no_slip_and_rest: Verifica |u(1, t)| < 1e-8, u(r, 0) = 0 y |u(r, 1e-3)| < 5e-3"""
        # Arrange
        radii = [0.0, 0.5, 0.9, 1.0]

        # Act
        field = velocity(FluidParams(alpha, beta), radii, [0.0, 1e-3, 0.5, 2.0], tail_tolerance=None)

        # Assert
        assert np.all(field.at_time(0.0) == 0.0)
        assert np.abs(field.at_time(1e-3)).max() < 5e-3
        assert np.abs(field.at_radius(1.0)).max() < 1e-8

    def test_newtonian_series_at_rest(self):
        """Verifica que la serie newtoniana cerrada anula (1 - r²)/2 en t = 0 a 1e-6"""
        field = velocity_newtonian(np.linspace(0.0, 1.0, 11), [0.0])
        assert np.abs(field.values).max() < 1e-6

    def test_newtonian_matches_scott_blair(self):
        """✅ test_newtonian_matches_scott_blair: Verifica u(0, 2) newtoniano frente a Scott Blair con β = 1"""
        # Arrange
        exact = velocity_newtonian([0.0], [2.0]).values[0, 0]

        # Act
        # La serie de Scott Blair no tiene parte estacionaria cerrada; con M modos
        # su cola en r = 0 ronda 2.5·k_M^{-5/2}.
        closed = velocity_scott_blair(1.0, 1.0, [0.0], [2.0], modes=2000).values[0, 0]

        # Assert
        assert closed == pytest.approx(exact, abs=1e-8)

    def test_fluid_plateau(self):
        """✅ test_fluid_plateau: Verifica u(0, t) → 0.25 con la cola algebraica t^-α (α = 0.6, β = 1)"""
        # Act
        field = velocity(FluidParams(0.6, 1.0), [0.0], [100.0, 400.0], tail_tolerance=None)

        # Assert
        assert field.values[:, 0] == pytest.approx(center_tail(0.6, 1.0, field.times), rel=2e-3)
        assert field.values[0, 0] > field.values[1, 0] > 0.25

    def test_newtonian_steady_center(self):
        """Verifica u(0, 10) ≈ 0.5 para el fluido newtoniano"""
        field = velocity(NEWTONIAN, [0.0], [10.0])
        assert field.values[0, 0] == pytest.approx(0.5, abs=1e-3)

    @pytest.mark.parametrize("alpha,beta", [(0.6, 0.6), (0.6, 0.8), (0.3, 0.9)])
    def test_solid_like_decay(self, alpha, beta):
        """✅ test_solid_like_decay: Verifica el decaimiento algebraico t^{β-1} cuando β < 1"""
        # Act
        field = velocity(FluidParams(alpha, beta), [0.0], [200.0, 800.0], tail_tolerance=None)

        # Assert
        assert field.values[:, 0] == pytest.approx(center_tail(alpha, beta, field.times), rel=1e-2)
        assert abs(field.values[1, 0]) < abs(field.values[0, 0])

    @pytest.mark.parametrize("beta", [0.4, 0.8, 1.0])
    def test_scott_blair_cross_check(self, beta):
        """✅ test_scott_blair_cross_check: Verifica la inversión frente a Mittag-Leffler (α = 0)"""
        # Arrange
        params = FluidParams(0.0, beta)
        radii = [0.0, 0.3, 0.7]
        times = [0.5, 1.0, 3.0, 10.0]

        # Act
        inverted = velocity(params, radii, times, modes=100, tail_tolerance=None)
        closed = velocity_scott_blair(beta, 1.0, radii, times, modes=100, tail_tolerance=None)

        # Assert
        assert inverted.values == pytest.approx(closed.values, rel=1e-4, abs=1e-6)

    def test_maxwell_modes(self):
        """✅ test_maxwell_modes: Verifica T_1..T_5 frente a la EDO de segundo orden (α = β = 1)"""
        # Arrange
        params = FluidParams(1.0, 1.0, 1.0)
        times = np.linspace(0.1, 20.0, 40)
        solver = SpectralSolver(params, modes=5)

        # Act
        responses = solver.mode_responses(times)

        # Assert
        for mode, row in zip(solver.modes, responses):
            assert row == pytest.approx(velocity_maxwell_mode(mode.root, 1.0, times), abs=1e-6)

    def test_maxwell_mode_initial_conditions(self):
        """Verifica T(0) = 0 y T'(0⁺) = 1, incluido el caso de raíz doble"""
        for root, lam in ((2.404825557695773, 1.0), (0.5, 1.0)):
            h = 1e-6
            values = velocity_maxwell_mode(root, lam, [0.0, h])
            assert values[0] == pytest.approx(0.0, abs=1e-14)
            assert values[1] / h == pytest.approx(1.0, rel=1e-4)

    def test_truncation_error(self):
        """❌ test_truncation_error: Verifica el error cuando la cola supera la tolerancia"""
        with pytest.raises(TruncationError) as info:
            velocity(FluidParams(0.2, 0.9), [0.0], [1e-3], modes=5)
        assert info.value.modes == 5
        assert info.value.tail > 1e-6

    @pytest.mark.parametrize("radii,times", [([1.5], [1.0]), ([0.5], [-1.0]), ([], [1.0])])
    def test_invalid_grid(self, radii, times):
        """❌ Verifica el rechazo de radios y tiempos fuera de dominio"""
        with pytest.raises(DomainError):
            velocity(NEWTONIAN, radii, times, modes=3)


class TestStress:
    """Pruebas del esfuerzo cortante."""

    def test_steady_newtonian_stress(self):
        """✅ test_steady_newtonian_stress: Verifica σ → -r/2 para el fluido newtoniano"""
        # Arrange
        radii = np.array([0.0, 0.25, 0.5, 0.75])

        # Act
        field = stress(NEWTONIAN, radii, [20.0], modes=400, tail_tolerance=None)

        # Assert
        assert field.quantity == "stress"
        assert field.values[0] == pytest.approx(-radii / 2.0, abs=5e-3)

    def test_fractional_stress_approaches_wall_balance(self):
        """Verifica σ(r, 100) ≈ -r/2 con α = 0.6, β = 1"""
        # Arrange
        radii = np.array([0.0, 0.25, 0.5, 0.75])

        # Act
        field = stress(FluidParams(0.6, 1.0), radii, [100.0], tail_tolerance=None)

        # Assert
        assert field.values[0] == pytest.approx(-radii / 2.0, abs=1e-3)

    def test_unknown_quantity(self):
        """❌ test_unknown_quantity: Verifica el rechazo de magnitudes distintas de velocity y stress"""
        solver = SpectralSolver(NEWTONIAN, modes=2)
        with pytest.raises(DomainError, match="Magnitud inválida"):
            solver.mode_responses([1.0], "pressure")

    def test_stress_at_rest(self):
        """Verifica σ(r, 0) = 0"""
        field = stress(FluidParams(0.3, 0.8), [0.5], [0.0, 1.0], modes=50, tail_tolerance=None)
        assert field.values[0, 0] == 0.0


class TestSteadyProfile:
    """Pruebas del perfil límite."""

    def test_fluid_profiles(self):
        """✅ test_fluid_profiles: Verifica (1 - r²)/2 newtoniano y (1 - r²)/4 con α = 0.6"""
        # Arrange
        radii = np.array([0.0, 0.5, 1.0])

        # Act
        newtonian = steady_profile(NEWTONIAN, radii)
        fractional = steady_profile(FluidParams(0.6, 1.0), radii)

        # Assert
        assert newtonian.values[0] == pytest.approx((1.0 - radii ** 2) / 2.0)
        assert fractional.values[0] == pytest.approx((1.0 - radii ** 2) / 4.0)
        assert math.isinf(newtonian.times[0])

    def test_solid_like_profile(self):
        """Verifica el perfil nulo cuando β < 1"""
        profile = steady_profile(FluidParams(0.2, 0.6))
        assert profile.radii.size == 101
        assert np.all(profile.values == 0.0)


class TestRadialField:
    """Pruebas del contenedor de campos."""

    def setup_method(self):
        """Configuración antes de cada prueba."""
        self.field = RadialField(
            radii=np.array([0.0, 1.0]),
            times=np.array([1.0, 2.0]),
            values=np.array([[0.1, 0.0], [0.2, 0.0]]),
        )

    def test_csv_rows_are_time_major(self):
        """✅ test_csv_rows_are_time_major: Verifica el orden t,r,value"""
        assert self.field.to_csv_rows() == [
            (1.0, 0.0, 0.1), (1.0, 1.0, 0.0), (2.0, 0.0, 0.2), (2.0, 1.0, 0.0),
        ]

    def test_selectors(self):
        """Verifica at_radius y at_time"""
        assert self.field.at_radius(0.0).tolist() == [0.1, 0.2]
        assert self.field.at_time(2.0).tolist() == [0.2, 0.0]
        with pytest.raises(DomainError, match="malla"):
            self.field.at_radius(0.5)

    def test_shape_mismatch(self):
        """❌ Verifica el rechazo de una matriz con forma incorrecta"""
        with pytest.raises(DomainError, match="forma"):
            RadialField(radii=np.zeros(3), times=np.zeros(2), values=np.zeros((3, 2)))


class TestScales:
    """Pruebas de las escalas características."""

    def test_characteristic_scales(self):
        """✅ test_characteristic_scales: Verifica las escalas de tiempo, velocidad y esfuerzo"""
        scales = characteristic_scales(radius=0.01, density=1000.0, modulus=10.0, relaxation=2.0, gradient=50.0)
        assert scales.length == 0.01
        assert scales.time == pytest.approx(1000.0 * 1e-4 / 20.0)
        assert scales.velocity == pytest.approx(50.0 * 1e-4 / 20.0)
        assert scales.stress == pytest.approx(0.5)

    def test_invalid_scales(self):
        """❌ Verifica que todas las magnitudes deben ser positivas"""
        with pytest.raises(DomainError):
            characteristic_scales(0.01, 1000.0, 0.0, 2.0, 50.0)


if __name__ == "__main__":
    pytest.main([__file__])
