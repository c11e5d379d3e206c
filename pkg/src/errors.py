"""
Jerarquía de excepciones del paquete.

Cada subclase hereda también de la excepción estándar equivalente, de modo
que el código que captura ``ValueError`` o ``ArithmeticError`` sigue
funcionando.
"""

from typing import Optional


class FlowError(Exception):
    """Base de todos los errores del paquete."""


class DomainError(FlowError, ValueError):
    """Argumento o parámetro fuera del dominio admitido."""


class GrowthError(DomainError):
    """La transformada no decae al menos como |z|^-1 sobre el contorno."""


class PoleError(FlowError, ZeroDivisionError):
    """Evaluación de una función de transferencia sobre un cero del denominador."""

    def __init__(self, message: str, point: complex):
        super().__init__(message)
        self.point = point


class BranchCutError(FlowError, ValueError):
    """Potencia fraccionaria evaluada sobre el corte de rama (eje real negativo)."""

    def __init__(self, message: str, point: complex):
        super().__init__(message)
        self.point = point


class ConvergenceError(FlowError, ArithmeticError):
    """
    La aceleración de la inversión no alcanzó la tolerancia.

    Attributes:
        residual (float): Estimación del error en el peor instante
        time (float): Instante donde se alcanzó ese residuo
    """

    def __init__(self, message: str, residual: float, time: Optional[float] = None):
        super().__init__(message)
        self.residual = residual
        self.time = time


class TruncationError(FlowError, ArithmeticError):
    """
    La cola de la serie espectral supera la tolerancia.

    Attributes:
        tail (float): Máxima contribución de los tres últimos modos
        modes (int): Número de modos usados
    """

    def __init__(self, message: str, tail: float, modes: int):
        super().__init__(message)
        self.tail = tail
        self.modes = modes


class InstabilityError(FlowError, ArithmeticError):
    """El integrador temporal divergió."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step
