"""
Respuestas en el dominio de Laplace como cocientes de sumas de potencias.

Este módulo representa las transformadas c1*z^p1 + c2*z^p2 + ... con
exponentes reales, las evalúa sobre la rama principal, las invierte
numéricamente sobre una recta vertical de Bromwich y clasifica su
comportamiento a tiempo largo (teorema del valor final).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from .errors import BranchCutError, ConvergenceError, DomainError, GrowthError, PoleError

logger = logging.getLogger(__name__)

Term = Tuple[float, float]
Number = Union[int, float]

EXPONENT_DECIMALS = 12
EXPONENT_TOLERANCE = 1e-12
TIMES_PER_CHUNK = 64
CHUNK_ELEMENTS = 1 << 20
# Un polo con amortiguamiento a pesa e^{-a·t}; por debajo de e^{-40} se ignora.
RESONANCE_DECAY_LIMIT = 40.0
RESONANCE_MARGIN = 1.5
POLE_NEWTON_STEPS = 40


def _is_integer(exponent: float) -> bool:
    return abs(exponent - round(exponent)) <= EXPONENT_TOLERANCE


def _format_number(value: float) -> str:
    return f"{value:.12g}"


class PowerSum:
    """
    Suma finita de términos c·z^p con exponentes reales.

    Los términos con el mismo exponente se fusionan sumando coeficientes,
    los coeficientes nulos se descartan y los exponentes quedan en orden
    estrictamente creciente.
    """

    def __init__(self, terms: Iterable[Term] = ()):
        merged = {}
        for coeff, exponent in terms:
            coeff = float(coeff)
            exponent = float(exponent)
            if not (math.isfinite(coeff) and math.isfinite(exponent)):
                raise DomainError("Los coeficientes y exponentes deben ser finitos")
            key = round(exponent, EXPONENT_DECIMALS) + 0.0
            merged[key] = merged.get(key, 0.0) + coeff
        self._terms: Tuple[Term, ...] = tuple(
            (coeff, exponent) for exponent, coeff in sorted(merged.items()) if coeff != 0.0
        )

    @classmethod
    def monomial(cls, coeff: float, exponent: float) -> "PowerSum":
        return cls([(coeff, exponent)])

    @property
    def terms(self) -> Tuple[Term, ...]:
        return self._terms

    @property
    def exponents(self) -> List[float]:
        return [exponent for _, exponent in self._terms]

    def is_zero(self) -> bool:
        return not self._terms

    def lowest(self) -> Term:
        """
        Término de menor exponente, el que domina cuando z → 0.

        Raises:
            DomainError: Si la suma está vacía
        """
        if not self._terms:
            raise DomainError("Una suma vacía no tiene término dominante")
        return self._terms[0]

    def highest(self) -> Term:
        """Término de mayor exponente, el que domina cuando |z| → ∞."""
        if not self._terms:
            raise DomainError("Una suma vacía no tiene término dominante")
        return self._terms[-1]

    def degree(self) -> float:
        return self.highest()[1]

    def shift(self, exponent: float) -> "PowerSum":
        """Multiplica la suma por z^exponent."""
        return PowerSum((c, p + exponent) for c, p in self._terms)

    def evaluate(self, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        """
        Evalúa la suma en la rama principal sin comprobaciones de dominio.

        Los exponentes enteros usan potencia entera; los fraccionarios
        usan exp(p·log z) con arg z ∈ (-π, π].

        Args:
            z (complex | np.ndarray): Punto(s) de evaluación

        Returns:
            complex | np.ndarray: Valor(es) de la suma
        """
        points = np.asarray(z, dtype=complex)
        total = np.zeros_like(points)
        if self._terms:
            nonzero = points != 0
            with np.errstate(divide="ignore", invalid="ignore"):
                log_z = np.log(np.where(nonzero, points, 1.0))
                for coeff, exponent in self._terms:
                    if exponent == 0.0:
                        total = total + coeff
                    elif _is_integer(exponent):
                        total = total + coeff * points ** int(round(exponent))
                    else:
                        power = np.exp(exponent * log_z)
                        total = total + coeff * np.where(nonzero, power, 0.0)
        if np.ndim(z) == 0:
            return complex(total)
        return total

    def __iter__(self) -> Iterator[Term]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: "PowerSum") -> "PowerSum":
        if not isinstance(other, PowerSum):
            return NotImplemented
        return PowerSum(self._terms + other._terms)

    def __neg__(self) -> "PowerSum":
        return PowerSum((-c, p) for c, p in self._terms)

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["PowerSum", Number]) -> "PowerSum":
        if isinstance(other, PowerSum):
            return PowerSum(
                (c1 * c2, p1 + p2) for c1, p1 in self._terms for c2, p2 in other._terms
            )
        if isinstance(other, (int, float)):
            return PowerSum((c * other, p) for c, p in self._terms)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for i, (coeff, exponent) in enumerate(self._terms):
            text = f"{_format_number(abs(coeff))}*z^{_format_number(exponent)}"
            if i == 0:
                pieces.append(text if coeff > 0 else f"-{text}")
            else:
                pieces.append(f"{'+' if coeff > 0 else '-'} {text}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"PowerSum({list(self._terms)!r})"


class TransferFn:
    """
    Cociente de dos sumas de potencias, numerador / denominador.

    Attributes:
        numerator (PowerSum): Numerador (puede ser vacío: función nula)
        denominator (PowerSum): Denominador no vacío
    """

    def __init__(self, numerator: PowerSum, denominator: PowerSum):
        if denominator.is_zero():
            raise DomainError("El denominador de una función de transferencia no puede ser nulo")
        self.numerator = numerator
        self.denominator = denominator

    @classmethod
    def constant(cls, value: float) -> "TransferFn":
        return cls(PowerSum.monomial(value, 0.0), PowerSum.monomial(1.0, 0.0))

    def evaluate(self, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        """Cociente en la rama principal, sin comprobaciones (uso interno)."""
        return self.numerator.evaluate(z) / self.denominator.evaluate(z)

    def decay_order(self) -> float:
        """Exponente de |z| con que decae la transformada cuando |z| → ∞."""
        if self.numerator.is_zero():
            return -math.inf
        return self.numerator.degree() - self.denominator.degree()

    def reciprocal(self) -> "TransferFn":
        if self.numerator.is_zero():
            raise DomainError("No existe el recíproco de la función nula")
        return TransferFn(self.denominator, self.numerator)

    def __add__(self, other: "TransferFn") -> "TransferFn":
        if not isinstance(other, TransferFn):
            return NotImplemented
        if self.denominator == other.denominator:
            return TransferFn(self.numerator + other.numerator, self.denominator)
        return TransferFn(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __mul__(self, other: Union["TransferFn", Number]) -> "TransferFn":
        if isinstance(other, TransferFn):
            return TransferFn(self.numerator * other.numerator, self.denominator * other.denominator)
        if isinstance(other, (int, float)):
            return TransferFn(self.numerator * other, self.denominator)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransferFn):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __str__(self) -> str:
        return f"({self.numerator}) / ({self.denominator})"

    def __repr__(self) -> str:
        return f"TransferFn({self.numerator!r}, {self.denominator!r})"


@dataclass(frozen=True)
class InversionConfig:
    """
    Parámetros de la inversión numérica.

    Attributes:
        abscissa_offset (float): σ·t_max del contorno (en unidades de 1/t)
        quadrature_terms (int): Términos iniciales de la serie de Fourier
        acceleration_depth (int): Profundidad d del algoritmo ε (usa 2d+1 sumas parciales)
        relative_tolerance (float): Error relativo admitido por bloque de tiempos
        max_quadrature_terms (int): Tope de términos al duplicar adaptativamente
    """

    abscissa_offset: float = 6.0
    quadrature_terms: int = 128
    acceleration_depth: int = 20
    relative_tolerance: float = 1e-8
    max_quadrature_terms: int = 65536

    def __post_init__(self):
        if not (math.isfinite(self.abscissa_offset) and self.abscissa_offset > 0):
            raise DomainError("abscissa_offset debe ser positivo")
        if int(self.quadrature_terms) != self.quadrature_terms or self.quadrature_terms < 8:
            raise DomainError("quadrature_terms debe ser un entero ≥ 8")
        if int(self.acceleration_depth) != self.acceleration_depth or self.acceleration_depth < 0:
            raise DomainError("acceleration_depth debe ser un entero no negativo")
        if 2 * self.acceleration_depth + 1 > self.quadrature_terms:
            raise DomainError("La aceleración necesita 2·depth + 1 ≤ quadrature_terms")
        if not 0.0 < self.relative_tolerance <= 1e-2:
            raise DomainError("relative_tolerance debe estar en (0, 1e-2]")
        if self.max_quadrature_terms < self.quadrature_terms:
            raise DomainError("max_quadrature_terms no puede ser menor que quadrature_terms")


class LimitKind(Enum):
    """Clase del límite de f(t) cuando t → ∞."""

    ZERO = "ZeroLimit"
    FINITE = "FiniteLimit"
    DIVERGENT = "Divergent"


@dataclass(frozen=True)
class FinalValue:
    """Resultado del análisis de valor final: clase y, si es finito, el límite."""

    kind: LimitKind
    value: float = 0.0

    def __str__(self) -> str:
        if self.kind is LimitKind.FINITE:
            return f"{self.kind.value}({self.value:.12g})"
        return self.kind.value


def eval_tf(tf: TransferFn, z: complex) -> complex:
    """
    Evalúa una función de transferencia en un punto del plano complejo.

    Args:
        tf (TransferFn): Función de transferencia
        z (complex): Punto de evaluación

    Returns:
        complex: numerador(z) / denominador(z) en la rama principal

    Raises:
        DomainError: Si z = 0 y algún exponente es negativo
        BranchCutError: Si z está sobre el semieje real negativo y hay exponentes fraccionarios
        PoleError: Si el denominador se anula en z
    """
    z = complex(z)
    exponents = tf.numerator.exponents + tf.denominator.exponents
    if z == 0 and any(p < 0 for p in exponents):
        raise DomainError("z = 0 no está en el dominio cuando hay exponentes negativos")
    if z.imag == 0.0 and z.real < 0.0 and not all(_is_integer(p) for p in exponents):
        raise BranchCutError(f"{z} está sobre el corte de rama", point=z)
    denominator = tf.denominator.evaluate(z)
    if denominator == 0:
        raise PoleError(f"El denominador se anula en z = {z}", point=z)
    return tf.numerator.evaluate(z) / denominator


def final_value(tf: TransferFn) -> FinalValue:
    """
    Clasifica lim_{t→∞} f(t) a partir del término dominante de z·F(z) en z → 0⁺.

    El cálculo es simbólico: solo intervienen el menor exponente y su
    coeficiente en numerador y denominador.

    Args:
        tf (TransferFn): Transformada de la respuesta

    Returns:
        FinalValue: ZeroLimit, FiniteLimit(c) o Divergent
    """
    if tf.numerator.is_zero():
        return FinalValue(LimitKind.ZERO, 0.0)
    c_num, p_num = tf.numerator.lowest()
    c_den, p_den = tf.denominator.lowest()
    exponent = 1.0 + p_num - p_den
    if exponent > EXPONENT_TOLERANCE:
        return FinalValue(LimitKind.ZERO, 0.0)
    if exponent >= -EXPONENT_TOLERANCE:
        return FinalValue(LimitKind.FINITE, c_num / c_den)
    return FinalValue(LimitKind.DIVERGENT, math.copysign(math.inf, c_num / c_den))


def _check_growth(tf: TransferFn) -> None:
    order = tf.decay_order()
    if order > -1.0 + EXPONENT_TOLERANCE:
        raise GrowthError(f"La transformada decae como |z|^{order:g}; se necesita |z|^-1 o más rápido")


def _pole_estimates(denominator: PowerSum) -> List[Tuple[float, float]]:
    """
    Frecuencia y amortiguamiento aproximados de los ceros complejos del denominador.

    Cada arista del polígono de Newton de los puntos (p, log|c|) equilibra
    dos términos. Si sus exponentes difieren en d > 1 hay ceros en la rama
    principal con |z| = (|c_i|/|c_j|)^{1/d} y arg z = ±π/d; con d ≤ 1 los
    ceros caen sobre el corte o fuera de la hoja y no producen resonancias.
    """
    hull: List[Tuple[float, float]] = []
    for coeff, exponent in denominator.terms:
        point = (exponent, math.log(abs(coeff)))
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (point[1] - y0) - (y1 - y0) * (point[0] - x0) < 0:
                break
            hull.pop()
        hull.append(point)

    estimates = []
    for (p_low, y_low), (p_high, y_high) in zip(hull, hull[1:]):
        gap = p_high - p_low
        if gap <= 1.0 + EXPONENT_TOLERANCE:
            continue
        radius = math.exp((y_low - y_high) / gap)
        for branch in range(1, int(gap) + 2, 2):
            angle = branch * math.pi / gap
            if angle > math.pi:
                break
            seed = radius * complex(math.cos(angle), math.sin(angle))
            zero = _refine_zero(denominator, seed)
            estimates.append((abs(zero.imag), max(-zero.real, 0.0)))
    return estimates


def _refine_zero(denominator: PowerSum, seed: complex) -> complex:
    """Newton sobre la rama principal; si no converge se conserva la semilla."""
    derivative = PowerSum((c * p, p - 1.0) for c, p in denominator.terms if p != 0.0)
    z = seed
    for _ in range(POLE_NEWTON_STEPS):
        slope = derivative.evaluate(z)
        if slope == 0 or not np.isfinite(slope):
            return seed
        step = denominator.evaluate(z) / slope
        z = z - step
        if not np.isfinite(z) or z == 0:
            return seed
        if abs(step) <= 1e-10 * abs(z):
            return z
    return seed


def _resolution_terms(tf: TransferFn, times: np.ndarray, period: float, depth: int) -> int:
    """Términos necesarios para que la cuadratura rebase los polos que aún pesan en el bloque."""
    t_min = float(times.min())
    reach = 0.0
    for frequency, damping in _pole_estimates(tf.denominator):
        if damping * t_min <= RESONANCE_DECAY_LIMIT:
            reach = max(reach, RESONANCE_MARGIN * frequency)
    if reach == 0.0:
        return 0
    return int(math.ceil(reach * period / math.pi)) + 2 * depth + 1


def _wynn_epsilon(partial: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Algoritmo ε de Wynn sobre sumas parciales complejas (una fila por instante).

    Las columnas pares de la tabla ε son los aproximantes de Padé
    diagonales de la serie en potencias de w, la misma familia que el
    algoritmo cociente-diferencia. Devuelve la última estimación y la
    diferencia con la columna par anterior.
    """
    width = partial.shape[1]
    previous = np.zeros((partial.shape[0], width + 1), dtype=complex)
    current = partial.astype(complex)
    estimate = current[:, -1]
    change = np.abs(current[:, -1] - current[:, -2])
    with np.errstate(all="ignore"):
        for column in range(1, width):
            diff = current[:, 1:] - current[:, :-1]
            small = np.abs(diff) <= 1e-300
            inverse = np.divide(1.0, diff, out=np.full(diff.shape, 1e300, dtype=complex), where=~small)
            following = previous[:, 1:-1] + inverse
            previous, current = current, following
            if column % 2 == 0:
                candidate = current[:, -1]
                valid = np.isfinite(candidate)
                change = np.where(valid, np.abs(candidate - estimate), change)
                estimate = np.where(valid, candidate, estimate)
    return estimate, change


def _fourier_sum(tf: TransferFn, times: np.ndarray, sigma: float, period: float,
                 terms: int, depth: int) -> Tuple[np.ndarray, np.ndarray]:
    """Serie trapezoidal de Fourier acelerada; devuelve valores y estimación de error."""
    k = np.arange(terms)
    samples = tf.evaluate(sigma + 1j * math.pi * k / period)
    samples[0] *= 0.5
    scale = np.exp(sigma * times) / period

    values = np.empty(times.shape)
    residual = np.empty(times.shape)
    rows = max(1, min(TIMES_PER_CHUNK, CHUNK_ELEMENTS // terms))
    for start in range(0, len(times), rows):
        chunk = slice(start, start + rows)
        phase = np.exp(1j * math.pi * np.outer(times[chunk], k) / period)
        partial = np.cumsum(samples * phase, axis=1)
        plain = partial[:, -1]
        plain_change = np.abs(partial[:, -1] - partial[:, -2])
        if depth == 0:
            estimate, change = plain, plain_change
        else:
            estimate, change = _wynn_epsilon(partial[:, -(2 * depth + 1):])
            usable = np.isfinite(estimate) & (change <= plain_change)
            estimate = np.where(usable, estimate, plain)
            change = np.where(usable, change, plain_change)
        values[chunk] = scale[chunk] * estimate.real
        residual[chunk] = scale[chunk] * change
    return values, residual


def _invert_block(tf: TransferFn, times: np.ndarray, cfg: InversionConfig, atol: float) -> np.ndarray:
    t_max = float(times.max())
    period = 2.0 * t_max
    sigma = cfg.abscissa_offset / t_max
    floor = _resolution_terms(tf, times, period, cfg.acceleration_depth)
    terms = cfg.quadrature_terms
    while terms < floor and terms < cfg.max_quadrature_terms:
        terms = min(2 * terms, cfg.max_quadrature_terms)

    # Cada instante converge por separado; solo se recalculan los pendientes.
    values = np.zeros(times.shape)
    pending = np.ones(times.shape, dtype=bool)
    while True:
        index = np.flatnonzero(pending)
        trial, residual = _fourier_sum(tf, times[index], sigma, period, terms, cfg.acceleration_depth)
        values[index] = trial
        limit = max(cfg.relative_tolerance * float(np.max(np.abs(values))), atol, np.finfo(float).tiny)
        worst = int(np.argmax(residual))
        if floor > terms:
            raise ConvergenceError(
                f"La inversión en t={times[index[worst]]:.6g} necesita {floor} términos para "
                f"rebasar los polos del denominador (tope {cfg.max_quadrature_terms})",
                residual=float(residual[worst]),
                time=float(times[index[worst]]),
            )
        pending[index[residual <= limit]] = False
        if not np.any(pending):
            logger.debug("Bloque t_max=%.3g convergió con %d términos", t_max, terms)
            return values
        if terms >= cfg.max_quadrature_terms:
            raise ConvergenceError(
                f"La inversión no convergió en t={times[index[worst]]:.6g} "
                f"(residuo {residual[worst]:.3e} > {limit:.3e}, {terms} términos)",
                residual=float(residual[worst]),
                time=float(times[index[worst]]),
            )
        terms = min(2 * terms, cfg.max_quadrature_terms)


def invert(tf: TransferFn, times, cfg: Optional[InversionConfig] = None,
           atol: float = 0.0) -> Union[float, np.ndarray]:
    """
    Inversa numérica de Laplace f(t) = (1/2πi)∫ F(z)e^{zt} dz.

    Se usa la regla trapezoidal sobre la recta Re z = σ (serie de Fourier
    de periodo 2T) acelerada con el algoritmo ε. Los tiempos se agrupan
    por décadas; cada bloque usa T = 2·t_max y σ = abscissa_offset/t_max.
    El número inicial de términos se eleva hasta rebasar la frecuencia de
    los polos complejos que siguen pesando en el bloque; sin ello el
    algoritmo ε extrapola una cola suave y pierde la oscilación. Cada
    instante cuyo error estimado supera la tolerancia se recalcula
    duplicando términos hasta ``max_quadrature_terms``.

    Args:
        tf (TransferFn): Transformada a invertir
        times (float | array): Instantes positivos
        cfg (InversionConfig): Parámetros (por defecto los de la clase)
        atol (float): Tolerancia absoluta mínima por bloque

    Returns:
        float | np.ndarray: f(t) en cada instante

    Raises:
        DomainError: Si algún instante no es positivo y finito
        GrowthError: Si la transformada no decae al menos como |z|^-1
        ConvergenceError: Si la aceleración no alcanza la tolerancia
    """
    cfg = cfg or InversionConfig()
    t = np.atleast_1d(np.asarray(times, dtype=float)).ravel()
    if t.size and not np.all(np.isfinite(t) & (t > 0)):
        raise DomainError("invert: todos los instantes deben ser positivos y finitos")
    _check_growth(tf)

    result = np.zeros(t.shape)
    if not tf.numerator.is_zero() and t.size:
        decades = np.floor(np.log10(t))
        for decade in np.unique(decades):
            block = decades == decade
            result[block] = _invert_block(tf, t[block], cfg, atol)
    if np.ndim(times) == 0:
        return float(result[0])
    return result.reshape(np.shape(times))
