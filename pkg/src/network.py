"""
Redes mecánicas de muelles, amortiguadores y elementos fraccionarios.

Una red es un árbol finito: las hojas son elementos (spring, dashpot,
springpot) y los nodos internos combinaciones en serie o en paralelo de
al menos dos subredes. Cada nodo conoce su módulo de relajación en el
dominio de Laplace y si contiene un camino formado solo por muelles.

Formato de texto (una expresión por red):

    spring(E)
    dashpot(eta)
    springpot(E, lambda, gamma)
    serial(red, red, ...)
    parallel(red, red, ...)
"""

import ast
import math
from dataclasses import dataclass
from typing import Tuple, Union

from .errors import DomainError
from .laplace import PowerSum, TransferFn


def _require_positive(value: float, name: str) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} debe ser positivo (recibido {value})")
    return value


def _fmt(value: float) -> str:
    return f"{value:g}"


@dataclass(frozen=True)
class Spring:
    """Muelle lineal σ = E ε."""

    modulus: float = 1.0

    def __post_init__(self):
        _require_positive(self.modulus, "El módulo del muelle")

    def modulus_transform(self) -> TransferFn:
        return TransferFn.constant(self.modulus)

    def has_spring_path(self) -> bool:
        return True

    def to_text(self) -> str:
        return f"spring({_fmt(self.modulus)})"


@dataclass(frozen=True)
class Dashpot:
    """Amortiguador newtoniano σ = η dε/dt."""

    viscosity: float = 1.0

    def __post_init__(self):
        _require_positive(self.viscosity, "La viscosidad del amortiguador")

    def modulus_transform(self) -> TransferFn:
        return TransferFn(PowerSum.monomial(self.viscosity, 1.0), PowerSum.monomial(1.0, 0.0))

    def has_spring_path(self) -> bool:
        return False

    def to_text(self) -> str:
        return f"dashpot({_fmt(self.viscosity)})"


@dataclass(frozen=True)
class SpringPot:
    """
    Elemento fraccionario de Scott Blair σ = E λ^γ D^γ ε.

    Attributes:
        modulus (float): Módulo E > 0
        relaxation (float): Tiempo de relajación λ > 0
        order (float): Orden γ en [0, 1] (0 = muelle, 1 = amortiguador)
    """

    modulus: float = 1.0
    relaxation: float = 1.0
    order: float = 0.5

    def __post_init__(self):
        _require_positive(self.modulus, "El módulo del elemento fraccionario")
        _require_positive(self.relaxation, "El tiempo de relajación")
        if not (math.isfinite(self.order) and 0.0 <= self.order <= 1.0):
            raise DomainError(f"El orden debe estar en [0, 1] (recibido {self.order})")

    def modulus_transform(self) -> TransferFn:
        coeff = self.modulus * self.relaxation ** self.order
        return TransferFn(PowerSum.monomial(coeff, self.order), PowerSum.monomial(1.0, 0.0))

    def has_spring_path(self) -> bool:
        # Con orden < 1 se comporta como sólido.
        return self.order < 1.0

    def to_text(self) -> str:
        return f"springpot({_fmt(self.modulus)},{_fmt(self.relaxation)},{_fmt(self.order)})"


@dataclass(frozen=True)
class Serial:
    """Subredes en serie: se suman las flexibilidades 1/G_i."""

    children: Tuple["MechNetwork", ...]

    def __post_init__(self):
        _check_children(self.children, "serial")

    def modulus_transform(self) -> TransferFn:
        compliance = self.children[0].modulus_transform().reciprocal()
        for child in self.children[1:]:
            compliance = compliance + child.modulus_transform().reciprocal()
        return compliance.reciprocal()

    def has_spring_path(self) -> bool:
        return all(child.has_spring_path() for child in self.children)

    def to_text(self) -> str:
        return f"serial({','.join(child.to_text() for child in self.children)})"


@dataclass(frozen=True)
class Parallel:
    """Subredes en paralelo: se suman los módulos G_i."""

    children: Tuple["MechNetwork", ...]

    def __post_init__(self):
        _check_children(self.children, "parallel")

    def modulus_transform(self) -> TransferFn:
        modulus = self.children[0].modulus_transform()
        for child in self.children[1:]:
            modulus = modulus + child.modulus_transform()
        return modulus

    def has_spring_path(self) -> bool:
        return any(child.has_spring_path() for child in self.children)

    def to_text(self) -> str:
        return f"parallel({','.join(child.to_text() for child in self.children)})"


MechNetwork = Union[Spring, Dashpot, SpringPot, Serial, Parallel]


def _check_children(children, kind: str) -> None:
    if not isinstance(children, tuple) or len(children) < 2:
        raise DomainError(f"Un nodo {kind} necesita al menos dos subredes")
    for child in children:
        if not isinstance(child, (Spring, Dashpot, SpringPot, Serial, Parallel)):
            raise DomainError(f"Subred inválida en nodo {kind}: {child!r}")


def serial(*children: MechNetwork) -> Serial:
    return Serial(tuple(children))


def parallel(*children: MechNetwork) -> Parallel:
    return Parallel(tuple(children))


_CONSTRUCTORS = {
    "spring": (Spring, 1),
    "dashpot": (Dashpot, 1),
    "springpot": (SpringPot, 3),
}


def _number(node: ast.AST) -> float:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _number(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return float(node.value)
    raise DomainError(f"Se esperaba un número en la red: {ast.dump(node)}")


def _build(node: ast.AST) -> MechNetwork:
    if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)) or node.keywords:
        raise DomainError("Expresión de red mal formada")
    name = node.func.id.lower()
    if name in ("serial", "parallel"):
        children = tuple(_build(arg) for arg in node.args)
        return Serial(children) if name == "serial" else Parallel(children)
    if name not in _CONSTRUCTORS:
        raise DomainError(f"Elemento desconocido: {node.func.id}")
    cls, arity = _CONSTRUCTORS[name]
    if len(node.args) != arity:
        raise DomainError(f"{name} necesita {arity} argumento(s)")
    return cls(*(_number(arg) for arg in node.args))


def parse_network(text: str) -> MechNetwork:
    """
    Construye una red a partir de su expresión de texto.

    Args:
        text (str): Por ejemplo ``serial(springpot(1,1,0.4),springpot(1,1,0.6))``

    Returns:
        MechNetwork: Árbol de la red

    Raises:
        DomainError: Si la expresión no respeta la gramática o los valores son inválidos
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"Expresión de red mal formada: {text!r}") from exc
    return _build(tree.body)
