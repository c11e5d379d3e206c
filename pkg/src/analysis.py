"""
Caracterización del flujo y comprobación de la conjetura del camino de muelles.

Incluye la serie temporal de la velocidad en el eje, el conteo de
oscilaciones, la clasificación sólido/fluido a tiempo largo y el análisis
de redes mecánicas finitas.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .laplace import InversionConfig, LimitKind, TransferFn, final_value
from .network import MechNetwork, SpringPot, parse_network, serial
from .spectral import DEFAULT_MODES, VELOCITY_TAIL_TOLERANCE, FluidParams, mode_table, velocity

logger = logging.getLogger(__name__)

DEFAULT_NOISE_TOL = 1e-3
CATALOG_PATH = Path(__file__).with_name("catalog.txt")


class BehaviorClass(Enum):
    """Comportamiento a tiempo largo bajo carga constante."""

    SOLID_LIKE = "SolidLike"
    FLUID_LIKE = "FluidLike"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class CenterSeries:
    """
    Velocidad en el eje u(0, t) muestreada en el tiempo.

    Attributes:
        times (np.ndarray): Instantes estrictamente crecientes
        values (np.ndarray): u(0, t) en cada instante
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise DomainError("times y values deben ser vectores de igual longitud")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise DomainError("La serie contiene valores no finitos")
        if np.any(np.diff(times) <= 0):
            raise DomainError("Los instantes deben ser estrictamente crecientes")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class ConjectureResult:
    """Veredictos del camino de muelles y del análisis de valor final para una red."""

    network: MechNetwork
    spring_path: bool
    behavior: BehaviorClass

    @property
    def consistent(self) -> bool:
        return self.spring_path == (self.behavior is BehaviorClass.SOLID_LIKE)

    def __bool__(self) -> bool:
        return self.consistent


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    network: MechNetwork


def center_series(params: FluidParams, times: Sequence[float], modes: int = DEFAULT_MODES,
                  cfg: Optional[InversionConfig] = None,
                  tail_tolerance: Optional[float] = VELOCITY_TAIL_TOLERANCE) -> CenterSeries:
    """
    Velocidad en el eje a partir de la solución espectral.

    Args:
        params (FluidParams): Parámetros del fluido
        times: Instantes estrictamente crecientes
        modes (int): Número de modos
        cfg (InversionConfig): Configuración de la inversión
        tail_tolerance (float | None): Tolerancia de truncamiento

    Returns:
        CenterSeries: Serie u(0, t)
    """
    field = velocity(params, [0.0], times, modes, cfg, tail_tolerance)
    return CenterSeries(field.times, field.at_radius(0.0))


def turning_points(series: CenterSeries, noise_tol: float = DEFAULT_NOISE_TOL) -> List[Tuple[int, str]]:
    """
    Extremos locales confirmados con histéresis ``noise_tol``.

    Un máximo se confirma cuando la serie sube más de ``noise_tol`` desde
    el extremo anterior y luego cae más de ``noise_tol``; los mínimos igual.

    Returns:
        List[Tuple[int, str]]: (índice, 'max' | 'min') en orden temporal
    """
    if noise_tol <= 0:
        raise DomainError("noise_tol debe ser positivo")
    if len(series) < 3:
        raise DomainError("Se necesitan al menos 3 muestras")
    values = series.values
    points = []
    trend = 0
    hi = lo = 0
    for i in range(1, values.size):
        v = values[i]
        if trend == 0:
            if v > values[hi]:
                hi = i
            if v < values[lo]:
                lo = i
            if values[hi] - values[lo] > noise_tol:
                trend = 1 if hi > lo else -1
        elif trend == 1:
            if v > values[hi]:
                hi = i
            elif values[hi] - v > noise_tol:
                points.append((hi, "max"))
                trend, lo = -1, i
        else:
            if v < values[lo]:
                lo = i
            elif v - values[lo] > noise_tol:
                points.append((lo, "min"))
                trend, hi = 1, i
    return points


def count_oscillations(series: CenterSeries, noise_tol: float = DEFAULT_NOISE_TOL) -> int:
    """
    Número de extremos locales estrictos con prominencia mayor que ``noise_tol``.

    Raises:
        DomainError: Con menos de 3 muestras o tolerancia no positiva
    """
    return len(turning_points(series, noise_tol))


def first_undershoot(series: CenterSeries, noise_tol: float = DEFAULT_NOISE_TOL) -> float:
    """
    Caída entre el primer máximo confirmado y el mínimo que le sigue.

    Returns:
        float: Amplitud de la primera oscilación (0 si no hay máximo)
    """
    points = turning_points(series, noise_tol)
    peaks = [i for i, (_, kind) in enumerate(points) if kind == "max"]
    if not peaks:
        return 0.0
    first = peaks[0]
    peak_index = points[first][0]
    if first + 1 < len(points):
        trough = series.values[points[first + 1][0]]
    else:
        trough = float(np.min(series.values[peak_index:]))
    return float(series.values[peak_index] - trough)


def _behavior(limit_kind: LimitKind) -> BehaviorClass:
    return BehaviorClass.SOLID_LIKE if limit_kind is LimitKind.ZERO else BehaviorClass.FLUID_LIKE


def classify_longtime(params: FluidParams) -> BehaviorClass:
    """SolidLike si el primer modo tiende a cero (β < 1); FluidLike si tiende a una constante."""
    first = mode_table(params, 1)[0]
    return _behavior(final_value(first.transform).kind)


def network_modulus(net: MechNetwork) -> TransferFn:
    """
    Módulo de relajación G(z) = σ̂/ε̂ de la red.

    Muelle E, amortiguador ηz, elemento fraccionario Eλ^γ z^γ; en serie se
    suman las flexibilidades y en paralelo los módulos.
    """
    return net.modulus_transform()


def classify_network(net: MechNetwork) -> BehaviorClass:
    """
    FluidLike si z/G(z) tiende a una constante no nula cuando z → 0.

    Es el valor final de la velocidad de deformación bajo esfuerzo
    escalón, cuya transformada es 1/G(z).
    """
    limit = final_value(network_modulus(net).reciprocal())
    return _behavior(limit.kind)


def spring_path(net: MechNetwork) -> bool:
    """True si la red contiene un camino de extremo a extremo formado solo por muelles."""
    return net.has_spring_path()


def check_conjecture(net: MechNetwork) -> ConjectureResult:
    """
    Compara el camino de muelles con la clasificación por valor final.

    Returns:
        ConjectureResult: Ambos veredictos; es verdadero si coinciden
    """
    result = ConjectureResult(net, spring_path(net), classify_network(net))
    if not result.consistent:
        logger.warning("Contraejemplo: %s (camino=%s, %s)", net.to_text(), result.spring_path, result.behavior)
    return result


def orders_of_serial_pair(gamma1: float, gamma2: float) -> Tuple[float, float]:
    """(α, β) = (|γ1 - γ2|, max(γ1, γ2)) de dos elementos fraccionarios en serie."""
    return abs(gamma1 - gamma2), max(gamma1, gamma2)


def fractional_maxwell_network(alpha: float, beta: float, lam: float = 1.0) -> MechNetwork:
    """Dos elementos fraccionarios en serie con órdenes β y β - α."""
    FluidParams(alpha, beta, lam)
    return serial(SpringPot(1.0, lam, beta), SpringPot(1.0, lam, beta - alpha))


def load_catalog(path: Optional[Union[str, Path]] = None) -> List[CatalogEntry]:
    """
    Lee un catálogo de redes, una por línea, con formato ``nombre = expresión``.

    Las líneas vacías y las que empiezan por '#' se ignoran; una línea sin
    nombre usa la propia expresión como nombre.

    Raises:
        DomainError: Si alguna expresión es inválida (indica la línea)
    """
    catalog = Path(path) if path is not None else CATALOG_PATH
    entries = []
    for number, raw in enumerate(catalog.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, _, expression = line.rpartition("=")
        name = name.strip() or expression.strip()
        try:
            entries.append(CatalogEntry(name, parse_network(expression)))
        except DomainError as exc:
            raise DomainError(f"{catalog}:{number}: {exc}") from exc
    logger.debug("Catálogo %s: %d redes", catalog, len(entries))
    return entries
