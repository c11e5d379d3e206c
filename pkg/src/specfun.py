"""
Funciones especiales sobre las que se construye la solución exacta.

Incluye las funciones de Bessel J0 y J1, los ceros positivos de J0, la
función Gamma y la función de Mittag-Leffler de dos parámetros E_{a,b}
sobre el semieje real negativo.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Tuple, Union

import numpy as np
from scipy import optimize, special

from .errors import DomainError
from .laplace import InversionConfig, PowerSum, TransferFn, invert

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

ROOT_TOLERANCE = 1e-12
NEWTON_MAX_ITER = 50

# Regímenes de Mittag-Leffler sobre |x|.
ML_SERIES_RADIUS = 5.0
ML_ASYMPTOTIC_THRESHOLD = 50.0
ML_SERIES_MAX_TERMS = 600
ML_ASYMPTOTIC_MAX_TERMS = 60
ML_CANCELLATION_LIMIT = 1e6
ML_ASYMPTOTIC_TOLERANCE = 1e-10
ML_INVERSION = InversionConfig(relative_tolerance=1e-9)
# Piso absoluto: el redondeo de la serie de Fourier ronda 1e-14.
ML_INVERSION_ATOL = 1e-13
ML_INVERSION_RTOL_FLOOR = 1e-13


@dataclass(frozen=True)
class RootTable:
    """
    Tabla de los primeros ceros positivos de J0.

    Attributes:
        count (int): Número de raíces
        roots (Tuple[float, ...]): Raíces k_1 < k_2 < ... < k_M
    """

    count: int
    roots: Tuple[float, ...]

    def __post_init__(self):
        if self.count != len(self.roots):
            raise DomainError("count no coincide con el número de raíces")
        if any(b <= a for a, b in zip(self.roots, self.roots[1:])):
            raise DomainError("Las raíces deben ser estrictamente crecientes")

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, index: int) -> float:
        return self.roots[index]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=float)

    def to_csv_rows(self) -> List[Tuple[int, float]]:
        """
        Filas ``m,k_m`` para la salida CSV.

        Returns:
            List[Tuple[int, float]]: Índice (desde 1) y raíz
        """
        return [(m, k) for m, k in enumerate(self.roots, start=1)]


def _require_finite(x: ArrayLike, name: str) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{name}: el argumento debe ser finito")
    return values


def _as_output(values: np.ndarray, like: ArrayLike) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(values)
    return values


def bessel_j0(x: ArrayLike) -> ArrayLike:
    """
    Función de Bessel de primera especie y orden cero.

    Args:
        x (float | np.ndarray): Argumento(s) finito(s)

    Returns:
        float | np.ndarray: J0(x)

    Raises:
        DomainError: Si algún argumento no es finito
    """
    values = _require_finite(x, "bessel_j0")
    return _as_output(special.j0(values), x)


def bessel_j1(x: ArrayLike) -> ArrayLike:
    """
    Función de Bessel de primera especie y orden uno.

    Args:
        x (float | np.ndarray): Argumento(s) finito(s)

    Returns:
        float | np.ndarray: J1(x)

    Raises:
        DomainError: Si algún argumento no es finito
    """
    values = _require_finite(x, "bessel_j1")
    return _as_output(special.j1(values), x)


def mcmahon_guess(m: int) -> float:
    """Estimación asintótica de McMahon para el m-ésimo cero de J0."""
    b = (m - 0.25) * math.pi
    return b + 1.0 / (8.0 * b) - 124.0 / (3.0 * (8.0 * b) ** 3)


def _polish_root(m: int) -> float:
    lower = (m - 1) * math.pi + 2.0
    upper = m * math.pi + 2.0
    k = mcmahon_guess(m)
    for _ in range(NEWTON_MAX_ITER):
        value = special.j0(k)
        if abs(value) < ROOT_TOLERANCE:
            return k
        # J0' = -J1
        k = k + value / special.j1(k)
        if not lower < k < upper:
            break
    logger.debug("Newton salió del intervalo para m=%d; se usa bisección", m)
    return optimize.brentq(special.j0, lower, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def j0_roots(count: int) -> RootTable:
    """
    Primeros ``count`` ceros positivos de J0.

    Cada raíz parte de la estimación de McMahon y se pule con Newton hasta
    |J0(k_m)| < 1e-12; si Newton abandona el intervalo
    ((m-1)π + 2, mπ + 2) se recurre a bisección (Brent).

    Args:
        count (int): Número de raíces, al menos 1

    Returns:
        RootTable: Tabla de raíces

    Raises:
        DomainError: Si ``count`` < 1
    """
    if int(count) != count or count < 1:
        raise DomainError(f"Se necesita al menos una raíz (recibido {count})")
    roots = tuple(float(_polish_root(m)) for m in range(1, int(count) + 1))
    logger.debug("Calculadas %d raíces de J0, k_M=%.6f", count, roots[-1])
    return RootTable(count=int(count), roots=roots)


def gamma_fn(x: ArrayLike) -> ArrayLike:
    """
    Función Gamma.

    Args:
        x (float | np.ndarray): Argumento(s) finito(s), distinto(s) de 0, -1, -2, ...

    Returns:
        float | np.ndarray: Γ(x)

    Raises:
        DomainError: En los polos o con argumentos no finitos
    """
    values = _require_finite(x, "gamma_fn")
    if np.any((values <= 0) & (values == np.round(values))):
        raise DomainError("gamma_fn: polo en un entero no positivo")
    return _as_output(special.gamma(values), x)


def _ml_series(a: float, b: float, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Serie de potencias de E_{a,b}(-z); devuelve valores y máscara de validez."""
    n = np.arange(ML_SERIES_MAX_TERMS)
    log_coeff = -special.gammaln(a * n + b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_z = np.log(z)[:, None]
        log_mag = np.where(n == 0, 0.0, n * log_z) + log_coeff
        terms = np.where(n % 2 == 0, 1.0, -1.0) * np.exp(log_mag)
        terms[:, 0] = special.rgamma(b)
        total = terms.sum(axis=1)
        largest = np.abs(terms).max(axis=1)
        last = np.abs(terms[:, -1])
        scale = np.maximum(np.abs(total), np.finfo(float).tiny)
        ok = (largest <= ML_CANCELLATION_LIMIT * scale) & (last <= 1e-17 * scale)
    return total, ok & np.isfinite(total)


def _ml_asymptotic(a: float, b: float, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Desarrollo asintótico de E_{a,b}(-z) para z grande, con truncamiento óptimo."""
    k = np.arange(1, ML_ASYMPTOTIC_MAX_TERMS + 1)
    inv_gamma = special.rgamma(b - a * k)
    with np.errstate(over="ignore", invalid="ignore"):
        power = np.exp(-k * np.log(z)[:, None])
        mags = power * np.abs(inv_gamma)
        terms = np.where(k % 2 == 1, 1.0, -1.0) * power * inv_gamma

    # Se suman términos mientras su módulo no crezca respecto al mínimo previo.
    envelope = np.minimum.accumulate(np.where(mags == 0.0, np.inf, mags), axis=1)
    previous = np.concatenate([np.full((len(z), 1), np.inf), envelope[:, :-1]], axis=1)
    stop = np.logical_or.accumulate(mags > previous, axis=1)
    total = np.where(stop, 0.0, terms).sum(axis=1)
    first_dropped = np.take_along_axis(mags, np.argmax(stop, axis=1)[:, None], axis=1)[:, 0]
    error = np.where(stop.any(axis=1), first_dropped, mags[:, -1])

    # Residuos de los polos de s^{a-b}/(s^a + z) sobre la hoja principal.
    if a > 1.0:
        pole = z ** (1.0 / a) * np.exp(1j * math.pi / a)
        total = total + (2.0 / a) * np.real(pole ** (1.0 - b) * np.exp(pole))
    elif a == 1.0:
        total = total + math.cos(math.pi * (1.0 - b)) * z ** (1.0 - b) * np.exp(-z)

    scale = np.maximum(np.abs(total), np.finfo(float).tiny)
    return total, (error <= ML_ASYMPTOTIC_TOLERANCE * scale) & np.isfinite(total)


def _ml_inversion(a: float, b: float, z: np.ndarray,
                  cfg: InversionConfig = ML_INVERSION) -> np.ndarray:
    """
    E_{a,b}(-z) invirtiendo s^{a-b}/(s^a + 1) en t = z^{1/a}.

    Para b < 1 la imagen no decae como |s|^-1 y se eleva b mediante
    E_{a,b}(x) = 1/Γ(b) + x E_{a,a+b}(x). La resta cancela dígitos: si
    |x E_{a,a+b}| supera a |E_{a,b}| el término interior se recalcula con
    la tolerancia reducida en ese mismo factor.
    """
    if b < 1.0:
        inner = _ml_inversion(a, a + b, z, cfg)
        lifted = special.rgamma(b) - z * inner
        tiny = np.finfo(float).tiny
        amplification = float(np.max(np.abs(z * inner) / np.maximum(np.abs(lifted), tiny)))
        if amplification > 1.0:
            rtol = max(cfg.relative_tolerance / amplification, ML_INVERSION_RTOL_FLOOR)
            logger.debug("E_{%.3g,%.3g}: cancelación ×%.3g, tolerancia interior %.1e", a, b, amplification, rtol)
            inner = _ml_inversion(a, a + b, z, replace(cfg, relative_tolerance=rtol))
            lifted = special.rgamma(b) - z * inner
        return lifted
    image = TransferFn(PowerSum([(1.0, a - b)]), PowerSum([(1.0, 0.0), (1.0, a)]))
    t = z ** (1.0 / a)
    values = np.asarray(invert(image, t, cfg, atol=ML_INVERSION_ATOL))
    return t ** (1.0 - b) * values


def mittag_leffler(a: float, b: float, x: ArrayLike) -> ArrayLike:
    """
    Función de Mittag-Leffler de dos parámetros E_{a,b}(x) para x ≤ 0.

    Serie de potencias para |x| ≤ 5, desarrollo asintótico (con los
    residuos de los polos complejos conjugados cuando a > 1) para
    |x| ≥ 50 y, en el hueco o cuando alguno de los dos pierde precisión,
    inversión numérica de la imagen de Laplace.

    Args:
        a (float): Parámetro en (0, 2]
        b (float): Parámetro positivo
        x (float | np.ndarray): Argumento(s) no positivo(s)

    Returns:
        float | np.ndarray: E_{a,b}(x)

    Raises:
        DomainError: Si los parámetros están fuera del rango admitido
    """
    if not (math.isfinite(a) and 0.0 < a <= 2.0):
        raise DomainError(f"mittag_leffler: a={a} fuera de (0, 2]")
    if not (math.isfinite(b) and b > 0.0):
        raise DomainError(f"mittag_leffler: b={b} debe ser positivo")
    values = _require_finite(x, "mittag_leffler")
    if np.any(values > 0.0):
        raise DomainError("mittag_leffler: solo se admite x ≤ 0")

    z = -np.atleast_1d(values).astype(float).ravel()
    result = np.full(z.shape, np.nan)
    pending = np.ones(z.shape, dtype=bool)

    near = z <= ML_SERIES_RADIUS
    if np.any(near):
        series, ok = _ml_series(a, b, z[near])
        idx = np.flatnonzero(near)[ok]
        result[idx] = series[ok]
        pending[idx] = False

    far = z >= ML_ASYMPTOTIC_THRESHOLD
    if np.any(far):
        asymptotic, ok = _ml_asymptotic(a, b, z[far])
        idx = np.flatnonzero(far)[ok]
        result[idx] = asymptotic[ok]
        pending[idx] = False

    if np.any(pending):
        logger.debug("E_{%.3g,%.3g}: %d puntos por inversión", a, b, int(pending.sum()))
        result[pending] = _ml_inversion(a, b, z[pending])

    result = result.reshape(np.shape(values))
    return _as_output(result, x)
