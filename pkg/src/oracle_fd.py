"""
Integrador temporal independiente para validar la solución espectral.

Resuelve el sistema acoplado adimensional

    ∂u/∂t = 1 + ∂σ/∂r + σ/r
    σ + λ^α D^α σ = λ^{β-1} D^{β-1} ∂u/∂r

con operadores de Grünwald-Letnikov en el tiempo y diferencias centradas
sobre una malla radial escalonada (u en los nodos, σ en los puntos medios).
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, InstabilityError
from .spectral import FluidParams, RadialField

logger = logging.getLogger(__name__)

INSTABILITY_LIMIT = 1e6
PROGRESS_EVERY = 1000


@dataclass(frozen=True)
class FdConfig:
    """
    Configuración del integrador.

    Attributes:
        radial_points (int): Nodos radiales, incluidos r = 0 y r = 1 (≥ 16)
        time_step (float): Paso temporal h
        horizon (float): Tiempo final, con h ≤ horizon / 100
        history_window (int | str): Pasos de memoria retenidos o "full"
    """

    radial_points: int = 64
    time_step: float = 1e-3
    horizon: float = 5.0
    history_window: Union[int, str] = "full"

    def __post_init__(self):
        if int(self.radial_points) != self.radial_points or self.radial_points < 16:
            raise DomainError("radial_points debe ser un entero ≥ 16")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError("horizon debe ser positivo")
        if not (math.isfinite(self.time_step) and self.time_step > 0):
            raise DomainError("time_step debe ser positivo")
        if self.time_step > self.horizon / 100.0:
            raise DomainError("time_step no puede superar horizon / 100")
        if self.history_window != "full":
            if isinstance(self.history_window, bool) or not isinstance(self.history_window, int) \
                    or self.history_window < 1:
                raise DomainError("history_window debe ser un entero positivo o 'full'")

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.time_step))


def gl_weights(order: float, count: int) -> np.ndarray:
    """
    Pesos de Grünwald-Letnikov w_k de (1 - x)^order.

    w_0 = 1 y w_k = w_{k-1}·(1 - (order + 1)/k). Sirven tanto para
    derivadas (order > 0) como para integrales fraccionarias (order < 0).

    Args:
        order (float): Orden en (-1, 2]
        count (int): Número de pesos, al menos 1

    Returns:
        np.ndarray: Pesos w_0 ... w_{count-1}

    Raises:
        DomainError: Si el orden o el número de pesos están fuera de rango
    """
    if not (math.isfinite(order) and -1.0 < order <= 2.0):
        raise DomainError(f"Orden de Grünwald-Letnikov fuera de (-1, 2]: {order}")
    if int(count) != count or count < 1:
        raise DomainError("count debe ser un entero ≥ 1")
    k = np.arange(1, int(count))
    factors = np.concatenate([[1.0], 1.0 - (order + 1.0) / k])
    return np.cumprod(factors)


def _support(weights: np.ndarray) -> int:
    """Último índice con peso no nulo (+1); los órdenes enteros tienen soporte finito."""
    nonzero = np.flatnonzero(weights[1:])
    return int(nonzero[-1]) + 2 if nonzero.size else 1


class FractionalPipeSolver:
    """
    Integrador de Grünwald-Letnikov del flujo de arranque.

    El esfuerzo se obtiene de la recursión constitutiva con el último
    gradiente de velocidad; la ecuación de momento se avanza con Euler
    implícito linealizado (sistema tridiagonal por paso).
    """

    def __init__(self, params: FluidParams, cfg: FdConfig):
        if params.beta <= 0.0:
            raise DomainError("El integrador necesita β > 0 (orden β - 1 en (-1, 0])")
        self.params = params
        self.cfg = cfg
        self.dr = 1.0 / (cfg.radial_points - 1)
        self.nodes = np.linspace(0.0, 1.0, cfg.radial_points)
        self.midpoints = self.nodes[:-1] + self.dr / 2.0

        h = cfg.time_step
        lam, alpha, beta = params.lam, params.alpha, params.beta
        self.stress_factor = lam ** alpha * h ** (-alpha)
        self.strain_factor = lam ** (beta - 1.0) * h ** (1.0 - beta)
        self.denominator = 1.0 + self.stress_factor
        self.stress_weights = gl_weights(alpha, cfg.steps + 1)
        self.strain_weights = gl_weights(beta - 1.0, cfg.steps + 1)
        self.stress_support = _support(self.stress_weights)
        self.strain_support = _support(self.strain_weights)

    def strain_rate(self, u: np.ndarray) -> np.ndarray:
        return np.diff(u) / self.dr

    def divergence(self, sigma: np.ndarray) -> np.ndarray:
        """(1/r) d(r σ)/dr en los nodos 0..N-2; en el eje vale 2 dσ/dr = 4σ_½/Δr."""
        flux = self.midpoints * sigma
        div = np.empty(self.nodes.size - 1)
        div[0] = 4.0 * sigma[0] / self.dr
        div[1:] = (flux[1:] - flux[:-1]) / (self.nodes[1:-1] * self.dr)
        return div

    def _banded_operator(self) -> np.ndarray:
        """I - h(b/a)L en formato de bandas (1, 1) para los nodos 0..N-2."""
        n = self.nodes.size - 1
        c = self.cfg.time_step * self.strain_factor / self.denominator / self.dr ** 2
        upper = np.zeros(n)
        diag = np.ones(n)
        lower = np.zeros(n)

        upper[1] = -4.0 * c
        diag[0] += 4.0 * c
        r = self.nodes[1:n]
        right = self.midpoints[1:n] / r
        left = self.midpoints[0:n - 1] / r
        diag[1:] += c * (right + left)
        upper[2:] = -c * right[:-1]
        lower[:-1] = -c * left

        banded = np.zeros((3, n))
        banded[0] = upper
        banded[1] = diag
        banded[2] = lower
        return banded

    def _history(self, weights: np.ndarray, support: int, past: np.ndarray, step: int) -> np.ndarray:
        depth = step if self.cfg.history_window == "full" else min(step, self.cfg.history_window)
        depth = min(depth, support - 1)
        if depth == 0:
            return np.zeros(past.shape[1])
        return weights[1:depth + 1] @ past[step - depth:step][::-1]

    def run(self) -> RadialField:
        """
        Avanza desde el reposo hasta el horizonte.

        Returns:
            RadialField: Trayectoria de velocidad (incluye t = 0)

        Raises:
            InstabilityError: Si la velocidad deja de ser finita o supera 1e6
        """
        cfg = self.cfg
        steps = cfg.steps
        h = cfg.time_step
        n = self.nodes.size
        if cfg.history_window != "full" and cfg.history_window < steps:
            logger.warning("Memoria truncada a %d pasos: el resultado es aproximado", cfg.history_window)

        velocity = np.zeros((steps + 1, n))
        strain = np.zeros((steps + 1, n - 1))
        sigma = np.zeros((steps + 1, n - 1))
        banded = self._banded_operator()
        b_over_a = self.strain_factor / self.denominator

        for step in range(1, steps + 1):
            memory = (
                self.strain_factor * self._history(self.strain_weights, self.strain_support, strain, step)
                - self.stress_factor * self._history(self.stress_weights, self.stress_support, sigma, step)
            )
            rhs = velocity[step - 1, :-1] + h * (1.0 + self.divergence(memory / self.denominator))
            velocity[step, :-1] = solve_banded((1, 1), banded, rhs)
            strain[step] = self.strain_rate(velocity[step])
            sigma[step] = b_over_a * strain[step] + memory / self.denominator

            peak = np.max(np.abs(velocity[step]))
            if not np.isfinite(peak) or peak > INSTABILITY_LIMIT:
                raise InstabilityError(f"El integrador divergió en el paso {step}", step=step)
            if step % PROGRESS_EVERY == 0:
                logger.debug("Paso %d/%d, u(0)=%.6f", step, steps, velocity[step, 0])

        times = np.arange(steps + 1) * h
        return RadialField(radii=self.nodes.copy(), times=times, values=velocity, quantity="velocity")


def simulate(params: FluidParams, cfg: FdConfig) -> RadialField:
    """
    Trayectoria de velocidad del integrador de Grünwald-Letnikov.

    Args:
        params (FluidParams): Parámetros del fluido (β > 0)
        cfg (FdConfig): Malla, paso y horizonte

    Returns:
        RadialField: u(r, t) en todos los pasos, con u(1, t) = 0 exacto
    """
    logger.debug("Integrando %s con %d nodos y h=%g", params, cfg.radial_points, cfg.time_step)
    return FractionalPipeSolver(params, cfg).run()
