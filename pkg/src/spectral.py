"""
Solución espectral exacta del flujo de arranque en tubería.

La velocidad y el esfuerzo cortante se expanden en los modos de Bessel
J0(k_m r); la dependencia temporal de cada modo se obtiene invirtiendo
su transformada de Laplace. También se incluyen los casos cerrados
(elemento fraccionario de Scott Blair, fluido newtoniano y Maxwell
ordinario) y el perfil estacionario.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, TruncationError
from .laplace import InversionConfig, LimitKind, PowerSum, TransferFn, final_value, invert
from .specfun import bessel_j0, bessel_j1, j0_roots, mittag_leffler

logger = logging.getLogger(__name__)

VALID_QUANTITIES = ["velocity", "stress"]

DEFAULT_MODES = 200
VELOCITY_TAIL_TOLERANCE = 1e-6
# Junto a la pared los términos del esfuerzo decaen como 2/k_m²; 1e-6 exigiría cientos de modos.
STRESS_TAIL_TOLERANCE = 1e-3
MODE_ATOL = 1e-10
TAIL_MODES = 3


@dataclass(frozen=True)
class FluidParams:
    """
    Parámetros adimensionales del fluido de Maxwell fraccionario.

    Attributes:
        alpha (float): Orden fraccionario α
        beta (float): Orden fraccionario β, con 0 ≤ α ≤ β ≤ 1
        lam (float): Tiempo de relajación adimensional λ > 0
    """

    alpha: float
    beta: float
    lam: float = 1.0

    def __post_init__(self):
        values = (self.alpha, self.beta, self.lam)
        if not all(math.isfinite(v) for v in values):
            raise DomainError("Los parámetros del fluido deben ser finitos")
        if not 0.0 <= self.alpha <= self.beta <= 1.0:
            raise DomainError(
                f"Se requiere 0 ≤ α ≤ β ≤ 1 (recibido α={self.alpha}, β={self.beta})"
            )
        if self.lam <= 0.0:
            raise DomainError(f"λ debe ser positivo (recibido {self.lam})")

    def __str__(self) -> str:
        return f"α={self.alpha:g}, β={self.beta:g}, λ={self.lam:g}"


@dataclass(frozen=True)
class Mode:
    """
    Un modo de Bessel de la expansión.

    Attributes:
        index (int): Índice m ≥ 1
        root (float): Raíz k_m de J0
        coefficient (float): A_m = 2 / (k_m J1(k_m))
        transform (TransferFn): Transformada de T_m(t)
    """

    index: int
    root: float
    coefficient: float
    transform: TransferFn


@dataclass(frozen=True, eq=False)
class RadialField:
    """
    Campo muestreado sobre una malla radial en varios instantes.

    Attributes:
        radii (np.ndarray): Radios en [0, 1]
        times (np.ndarray): Instantes no negativos
        values (np.ndarray): Matriz (tiempo × radio)
        quantity (str): 'velocity' o 'stress'
    """

    radii: np.ndarray
    times: np.ndarray
    values: np.ndarray
    quantity: str = "velocity"

    def __post_init__(self):
        if self.quantity not in VALID_QUANTITIES:
            raise DomainError(f"Magnitud inválida: {self.quantity}. Opciones: {VALID_QUANTITIES}")
        if np.shape(self.values) != (len(self.times), len(self.radii)):
            raise DomainError("values debe tener forma (tiempos × radios)")

    def at_radius(self, radius: float) -> np.ndarray:
        """
        Serie temporal en un radio de la malla.

        Raises:
            DomainError: Si el radio no pertenece a la malla
        """
        matches = np.flatnonzero(np.isclose(self.radii, radius, rtol=0.0, atol=1e-12))
        if matches.size == 0:
            raise DomainError(f"El radio {radius} no pertenece a la malla")
        return self.values[:, matches[0]]

    def at_time(self, time: float) -> np.ndarray:
        matches = np.flatnonzero(np.isclose(self.times, time, rtol=1e-12, atol=0.0))
        if matches.size == 0:
            raise DomainError(f"El instante {time} no pertenece a la serie")
        return self.values[matches[0]]

    def to_csv_rows(self) -> List[Tuple[float, float, float]]:
        """Filas ``t,r,value`` en orden temporal (todas las r de cada t)."""
        return [
            (float(t), float(r), float(v))
            for t, row in zip(self.times, self.values)
            for r, v in zip(self.radii, row)
        ]


@dataclass(frozen=True)
class CharacteristicScales:
    """Escalas físicas que adimensionalizan el problema."""

    length: float
    time: float
    velocity: float
    stress: float


def characteristic_scales(radius: float, density: float, modulus: float,
                          relaxation: float, gradient: float) -> CharacteristicScales:
    """
    Escalas de longitud a, tiempo ρa²/(Eλ), velocidad Ga²/(Eλ) y esfuerzo G·a.

    Args:
        radius (float): Radio de la tubería a
        density (float): Densidad ρ
        modulus (float): Módulo E del modelo
        relaxation (float): Tiempo de relajación λ
        gradient (float): Magnitud G del gradiente de presión

    Returns:
        CharacteristicScales: Escalas en unidades físicas
    """
    values = (radius, density, modulus, relaxation, gradient)
    if not all(math.isfinite(v) and v > 0 for v in values):
        raise DomainError("Todas las magnitudes físicas deben ser positivas")
    return CharacteristicScales(
        length=radius,
        time=density * radius ** 2 / (modulus * relaxation),
        velocity=gradient * radius ** 2 / (modulus * relaxation),
        stress=gradient * radius,
    )


def radial_grid(points: int) -> np.ndarray:
    """Malla radial uniforme que incluye r = 0 y r = 1."""
    if points < 2:
        raise DomainError("La malla radial necesita al menos 2 puntos")
    return np.linspace(0.0, 1.0, int(points))


def _mode_denominator(params: FluidParams, root: float) -> PowerSum:
    a, b, lam = params.alpha, params.beta, params.lam
    return PowerSum([
        (1.0, 2.0),
        (lam ** a, a + 2.0),
        (root ** 2 * lam ** (b - 1.0), b),
    ])


def velocity_transform(params: FluidParams, root: float) -> TransferFn:
    """(1 + λ^α z^α) / (z² + λ^α z^{α+2} + k² λ^{β-1} z^β)."""
    numerator = PowerSum([(1.0, 0.0), (params.lam ** params.alpha, params.alpha)])
    return TransferFn(numerator, _mode_denominator(params, root))


def stress_transform(params: FluidParams, root: float) -> TransferFn:
    """λ^{β-1} z^{β-1} / (z² + λ^α z^{α+2} + k² λ^{β-1} z^β)."""
    numerator = PowerSum.monomial(params.lam ** (params.beta - 1.0), params.beta - 1.0)
    return TransferFn(numerator, _mode_denominator(params, root))


def mode_table(params: FluidParams, count: int = DEFAULT_MODES) -> List[Mode]:
    """
    Construye los primeros ``count`` modos.

    Args:
        params (FluidParams): Parámetros del fluido
        count (int): Número de modos M ≥ 1

    Returns:
        List[Mode]: Modos con raíz, coeficiente A_m y transformada de velocidad
    """
    roots = j0_roots(count)
    modes = []
    for index, root in enumerate(roots.roots, start=1):
        coefficient = 2.0 / (root * bessel_j1(root))
        modes.append(Mode(index, root, coefficient, velocity_transform(params, root)))
    logger.debug("Tabla de %d modos para %s", count, params)
    return modes


def _validate_radii(radii: Sequence[float]) -> np.ndarray:
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if r.ndim != 1 or r.size == 0:
        raise DomainError("La malla radial debe ser un vector no vacío")
    if not np.all(np.isfinite(r) & (r >= 0.0) & (r <= 1.0)):
        raise DomainError("Todos los radios deben estar en [0, 1]")
    return r


def _validate_times(times: Sequence[float]) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise DomainError("La lista de instantes debe ser un vector no vacío")
    if not np.all(np.isfinite(t) & (t >= 0.0)):
        raise DomainError("Los instantes deben ser finitos y no negativos")
    return t


def _check_tail(responses: np.ndarray, spatial: np.ndarray, times: np.ndarray,
                tolerance: float) -> None:
    positive = np.flatnonzero(times > 0)
    if positive.size == 0:
        return
    first = positive[np.argmin(times[positive])]
    last = responses[-TAIL_MODES:, first][:, None] * spatial[-TAIL_MODES:]
    tail = float(np.max(np.abs(last)))
    logger.debug("Cola de la serie en t=%.3g: %.3e", times[first], tail)
    if tail > tolerance:
        raise TruncationError(
            f"La cola de la serie ({tail:.3e}) supera la tolerancia {tolerance:.1e} "
            f"en t={times[first]:.4g} con {responses.shape[0]} modos",
            tail=tail,
            modes=responses.shape[0],
        )


def _assemble(responses: np.ndarray, spatial: np.ndarray, radii: np.ndarray,
              times: np.ndarray, quantity: str, tail_tolerance: Optional[float]) -> RadialField:
    if tail_tolerance is not None:
        _check_tail(responses, spatial, times, tail_tolerance)
    values = responses.T @ spatial
    return RadialField(radii=radii, times=times, values=values, quantity=quantity)


class SpectralSolver:
    """
    Evalúa la expansión espectral para un juego de parámetros.

    Attributes:
        params (FluidParams): Parámetros del fluido
        modes (List[Mode]): Tabla de modos
        cfg (InversionConfig): Configuración de la inversión de Laplace
    """

    def __init__(self, params: FluidParams, modes: int = DEFAULT_MODES,
                 cfg: Optional[InversionConfig] = None):
        self.params = params
        self.cfg = cfg or InversionConfig()
        self.modes = mode_table(params, modes)

    @property
    def roots(self) -> np.ndarray:
        return np.array([mode.root for mode in self.modes])

    def mode_responses(self, times: Sequence[float], quantity: str = "velocity") -> np.ndarray:
        """
        Funciones temporales de cada modo, matriz (modos × tiempos).

        En t = 0 se devuelve 0 exacto sin invertir.

        Raises:
            DomainError: Si ``quantity`` no es 'velocity' ni 'stress'
        """
        if quantity not in VALID_QUANTITIES:
            raise DomainError(f"Magnitud inválida: {quantity}. Opciones: {VALID_QUANTITIES}")
        t = _validate_times(times)
        positive = t > 0
        responses = np.zeros((len(self.modes), t.size))
        if not np.any(positive):
            return responses
        for row, mode in enumerate(self.modes):
            if quantity == "stress":
                transform = stress_transform(self.params, mode.root)
            else:
                transform = mode.transform
            responses[row, positive] = invert(transform, t[positive], self.cfg, atol=MODE_ATOL)
        logger.debug("Invertidos %d modos (%s) en %d instantes", len(self.modes), quantity, int(positive.sum()))
        return responses

    def velocity_spatial(self, radii: np.ndarray) -> np.ndarray:
        return np.array([mode.coefficient * bessel_j0(mode.root * radii) for mode in self.modes])

    def stress_spatial(self, radii: np.ndarray) -> np.ndarray:
        return np.array([-2.0 * bessel_j1(mode.root * radii) / bessel_j1(mode.root) for mode in self.modes])

    def velocity(self, radii: Sequence[float], times: Sequence[float],
                 tail_tolerance: Optional[float] = VELOCITY_TAIL_TOLERANCE) -> RadialField:
        r = _validate_radii(radii)
        t = _validate_times(times)
        responses = self.mode_responses(t, "velocity")
        return _assemble(responses, self.velocity_spatial(r), r, t, "velocity", tail_tolerance)

    def stress(self, radii: Sequence[float], times: Sequence[float],
               tail_tolerance: Optional[float] = STRESS_TAIL_TOLERANCE) -> RadialField:
        r = _validate_radii(radii)
        t = _validate_times(times)
        responses = self.mode_responses(t, "stress")
        return _assemble(responses, self.stress_spatial(r), r, t, "stress", tail_tolerance)


def velocity(params: FluidParams, radii: Sequence[float], times: Sequence[float],
             modes: int = DEFAULT_MODES, cfg: Optional[InversionConfig] = None,
             tail_tolerance: Optional[float] = VELOCITY_TAIL_TOLERANCE) -> RadialField:
    """
    Campo de velocidad u(r, t) = Σ A_m J0(k_m r) T_m(t).

    Args:
        params (FluidParams): Parámetros del fluido
        radii: Radios en [0, 1]
        times: Instantes no negativos (t = 0 devuelve 0 exacto)
        modes (int): Número de modos M
        cfg (InversionConfig): Configuración de la inversión
        tail_tolerance (float | None): Cota de los tres últimos modos; None la desactiva

    Returns:
        RadialField: Campo de velocidad

    Raises:
        DomainError: Radios fuera de [0, 1] o instantes negativos
        TruncationError: Si la cola de la serie supera la tolerancia
    """
    return SpectralSolver(params, modes, cfg).velocity(radii, times, tail_tolerance)


def stress(params: FluidParams, radii: Sequence[float], times: Sequence[float],
           modes: int = DEFAULT_MODES, cfg: Optional[InversionConfig] = None,
           tail_tolerance: Optional[float] = STRESS_TAIL_TOLERANCE) -> RadialField:
    """
    Esfuerzo cortante σ_rz(r, t) = Σ (-2 J1(k_m r)/J1(k_m)) S_m(t), en unidades de G·a.

    Mismos argumentos y errores que :func:`velocity`.
    """
    return SpectralSolver(params, modes, cfg).stress(radii, times, tail_tolerance)


def velocity_scott_blair(beta: float, lam: float, radii: Sequence[float], times: Sequence[float],
                         modes: int = DEFAULT_MODES,
                         tail_tolerance: Optional[float] = VELOCITY_TAIL_TOLERANCE) -> RadialField:
    """
    Velocidad del elemento de Scott Blair (α = 0) mediante Mittag-Leffler.

    T_m(t) = t·E_{2-β,2}(-k_m² λ^{β-1} t^{2-β} / 2), sin inversión de Laplace.

    Raises:
        DomainError: Si β ∉ (0, 1] o λ ≤ 0
    """
    if not (math.isfinite(beta) and 0.0 < beta <= 1.0):
        raise DomainError(f"β debe estar en (0, 1] (recibido {beta})")
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"λ debe ser positivo (recibido {lam})")
    r = _validate_radii(radii)
    t = _validate_times(times)
    roots = j0_roots(modes).as_array()

    responses = np.zeros((roots.size, t.size))
    positive = t > 0
    if np.any(positive):
        tp = t[positive]
        argument = -np.outer(roots ** 2, tp ** (2.0 - beta)) * lam ** (beta - 1.0) / 2.0
        responses[:, positive] = tp * mittag_leffler(2.0 - beta, 2.0, argument)

    spatial = np.array([2.0 / (k * bessel_j1(k)) * bessel_j0(k * r) for k in roots])
    return _assemble(responses, spatial, r, t, "velocity", tail_tolerance)


def velocity_newtonian(radii: Sequence[float], times: Sequence[float],
                       modes: int = DEFAULT_MODES) -> RadialField:
    """u = (1 - r²)/2 - Σ 4 J0(k_m r) / (k_m³ J1(k_m)) · exp(-k_m² t / 2)."""
    r = _validate_radii(radii)
    t = _validate_times(times)
    roots = j0_roots(modes).as_array()
    spatial = np.array([4.0 * bessel_j0(k * r) / (k ** 3 * bessel_j1(k)) for k in roots])
    decay = np.exp(-np.outer(roots ** 2, t) / 2.0)
    values = (1.0 - r ** 2)[None, :] / 2.0 - decay.T @ spatial
    return RadialField(radii=r, times=t, values=values, quantity="velocity")


def velocity_maxwell_mode(root: float, lam: float, times: Sequence[float]) -> np.ndarray:
    """
    T_m(t) cerrado para el fluido de Maxwell ordinario (α = β = 1).

    Resuelve λT'' + T' + k²T = 1 con T(0) = 0 y T'(0⁺) = 1; el salto de la
    derivada proviene del término λ·d/dt del forzamiento escalón.

    Args:
        root (float): Raíz k_m
        lam (float): Tiempo de relajación λ
        times: Instantes no negativos

    Returns:
        np.ndarray: T_m en cada instante
    """
    t = _validate_times(times)
    steady = 1.0 / root ** 2
    discriminant = complex(1.0 - 4.0 * lam * root ** 2)
    r1 = (-1.0 + np.sqrt(discriminant)) / (2.0 * lam)
    r2 = (-1.0 - np.sqrt(discriminant)) / (2.0 * lam)
    if abs(r1 - r2) < 1e-12 * abs(r1):
        slope = 1.0 + r1 * steady
        return (steady + (-steady + slope * t) * np.exp(r1 * t)).real
    c1 = (1.0 + r2 * steady) / (r1 - r2)
    c2 = -steady - c1
    return (steady + c1 * np.exp(r1 * t) + c2 * np.exp(r2 * t)).real


def steady_profile(params: FluidParams, radii: Optional[Sequence[float]] = None) -> RadialField:
    """
    Perfil límite cuando t → ∞, deducido del valor final del primer modo.

    Para β < 1 el límite es nulo; para β = 1 el valor final de cada modo
    es c/k_m² y la suma Σ 2 J0(k_m r)/(k_m³ J1(k_m)) = (1 - r²)/4 da el
    perfil cerrado c·(1 - r²)/4.

    Returns:
        RadialField: Campo con un único instante t = ∞
    """
    r = radial_grid(101) if radii is None else _validate_radii(radii)
    first = mode_table(params, 1)[0]
    limit = final_value(first.transform)
    if limit.kind is LimitKind.ZERO:
        profile = np.zeros_like(r)
    elif limit.kind is LimitKind.FINITE:
        scale = limit.value * first.root ** 2
        profile = scale * (1.0 - r ** 2) / 4.0
    else:
        raise DomainError(f"El modo 1 diverge para {params}")
    logger.debug("Valor final del modo 1: %s", limit)
    return RadialField(radii=r, times=np.array([math.inf]), values=profile[None, :], quantity="velocity")
