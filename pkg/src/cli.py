"""
Interfaz de línea de comandos del flujo de arranque fraccionario.

Subcomandos: roots, velocity, stress, center-series, figure, classify,
conjecture y oracle-compare. Todas las salidas de datos son CSV con una
cabecera ``# clave=valor``; ``--format plot`` dibuja además el CSV escrito.
"""

import functools
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
from colorama import init as colorama_init

from . import __version__
from .analysis import (
    center_series,
    check_conjecture,
    classify_longtime,
    count_oscillations,
    load_catalog,
)
from .errors import FlowError
from .laplace import final_value
from .oracle_fd import FdConfig, simulate
from .spectral import (
    STRESS_TAIL_TOLERANCE,
    VELOCITY_TAIL_TOLERANCE,
    FluidParams,
    RadialField,
    mode_table,
    radial_grid,
    steady_profile,
    stress,
    velocity,
    velocity_scott_blair,
)
from .specfun import j0_roots
from .utils import (
    behavior_color,
    csv_text,
    display_table,
    print_header,
    print_section,
    parse_config_file,
    render_plot,
    time_grid,
    verdict,
    write_csv,
)

logger = logging.getLogger(__name__)

FIGURE_TAIL_TOLERANCE = 1e-3
ORACLE_TAIL_TOLERANCE = 1e-3
ORACLE_SAMPLE_EVERY = 0.5
FIG3_TIMES = (0.5, 1.0, 2.0, 5.0, 10.0, 30.0)

# Los juegos de parámetros de cada figura son convenciones del repositorio.
FIGURES: Dict[str, Dict[str, Tuple[float, ...]]] = {
    "fig2": {"alpha": (0.0,), "beta": (0.2, 0.4, 0.6, 0.8, 1.0)},
    "fig3": {"alpha": (0.0,), "beta": (0.4, 1.0)},
    "fig4": {"alpha": (0.6,), "beta": (0.6, 0.7, 0.8, 0.9, 1.0)},
    "fig5": {"alpha": (0.0, 0.2, 0.4, 0.6), "beta": (0.6,)},
    "fig6": {"alpha": (0.0, 0.2, 0.6, 1.0), "beta": (1.0,)},
}

CONFIG_KEYS = {"lambda": "lam", "format": "fmt"}


@dataclass(frozen=True)
class RunConfig:
    """
    Parámetros de una ejecución de la CLI, validados antes de calcular.

    Attributes:
        alpha, beta, lam: Parámetros del fluido
        modes (int): Modos de la expansión
        r_points (int): Puntos de la malla radial
        t_max (float): Tiempo final
        dt (float): Paso de la malla temporal
        tol (float | None): Tolerancia del comando
        out (Path | None): Fichero o directorio de salida
        fmt (str): 'csv' o 'plot'
    """

    alpha: float = 0.0
    beta: float = 1.0
    lam: float = 1.0
    modes: int = 200
    r_points: int = 21
    t_max: float = 1.0
    dt: float = 0.1
    tol: Optional[float] = None
    out: Optional[Path] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.modes < 1:
            raise click.BadParameter("--modes debe ser ≥ 1")
        if self.r_points < 2:
            raise click.BadParameter("--r-points debe ser ≥ 2")
        if not (self.dt > 0 and self.t_max > 0 and self.dt <= self.t_max):
            raise click.BadParameter("Se requiere 0 < --dt ≤ --t-max")
        if self.tol is not None and not (self.tol > 0 and math.isfinite(self.tol)):
            raise click.BadParameter("--tol debe ser positivo")
        if self.fmt == "plot" and self.out is None:
            raise click.UsageError("--format plot necesita --out")

    def params(self, alpha: Optional[float] = None, beta: Optional[float] = None) -> FluidParams:
        return FluidParams(self.alpha if alpha is None else alpha,
                           self.beta if beta is None else beta, self.lam)

    def radii(self) -> np.ndarray:
        return radial_grid(self.r_points)

    def times(self) -> np.ndarray:
        return time_grid(self.t_max, self.dt)

    def metadata(self, command: str, **extra) -> Dict[str, object]:
        data = {"command": command, "alpha": self.alpha, "beta": self.beta, "lambda": self.lam,
                "modes": self.modes}
        data.update(extra)
        return data


def _load_config(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> None:
    if not value:
        return
    try:
        raw = parse_config_file(value)
    except FlowError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param)
    mapped = {CONFIG_KEYS.get(key, key.replace("-", "_")): v for key, v in raw.items()}
    ctx.default_map = {name: dict(mapped) for name in main.commands}
    logger.debug("Configuración cargada de %s: %s", value, mapped)


def handle_errors(func: Callable) -> Callable:
    """Convierte los errores del dominio en un mensaje ❌ y código de salida 1."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FlowError as exc:
            click.echo(verdict(False, f"{type(exc).__name__}: {exc}"), err=True)
            sys.exit(1)

    return wrapper


def fluid_options(func: Callable) -> Callable:
    decorators = [
        click.option("--alpha", type=float, default=0.0, show_default=True, help="Orden fraccionario α"),
        click.option("--beta", type=float, default=1.0, show_default=True, help="Orden fraccionario β"),
        click.option("--lambda", "lam", type=float, default=1.0, show_default=True, help="Tiempo de relajación λ"),
        click.option("--modes", type=click.IntRange(min=1), default=200, show_default=True, help="Modos de Bessel"),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def output_options(func: Callable) -> Callable:
    decorators = [
        click.option("--out", type=click.Path(path_type=Path), default=None, help="Fichero de salida"),
        click.option("--format", "fmt", type=click.Choice(["csv", "plot"]), default="csv", show_default=True),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def emit(cfg: RunConfig, metadata: Dict[str, object], columns: Sequence[str], rows) -> None:
    """Escribe el CSV en --out (y su gráfica) o en la salida estándar."""
    if cfg.out is None:
        click.echo(csv_text(metadata, columns, rows), nl=False)
        return
    path = write_csv(cfg.out, metadata, columns, rows)
    click.echo(verdict(True, f"CSV guardado en {path}"), err=True)
    if cfg.fmt == "plot":
        png = render_plot(path)
        click.echo(verdict(True, f"Gráfica guardada en {png}"), err=True)


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), callback=_load_config,
              is_eager=True, expose_value=False, help="Fichero clave=valor con valores por defecto")
@click.option("--verbose", "-v", is_flag=True, help="Registro DEBUG")
@click.version_option(__version__)
def main(verbose: bool) -> None:
    """📊 Flujo de arranque en tubería para un fluido de Maxwell fraccionario."""
    colorama_init()
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )


@main.command()
@click.argument("count", type=click.IntRange(min=1))
@output_options
@handle_errors
def roots(count: int, out: Optional[Path], fmt: str) -> None:
    """Primeros COUNT ceros positivos de J0 (columnas m,k_m)."""
    cfg = RunConfig(out=out, fmt=fmt)
    table = j0_roots(count)
    emit(cfg, {"command": "roots", "count": count}, ["m", "k_m"], table.to_csv_rows())


def _field_command(name: str, quantity: str, default_tol: float) -> Callable:
    @fluid_options
    @click.option("--r-points", type=int, default=21, show_default=True, help="Puntos radiales en [0, 1]")
    @click.option("--t-max", type=float, default=1.0, show_default=True)
    @click.option("--dt", type=float, default=0.1, show_default=True)
    @click.option("--tol", type=float, default=default_tol, show_default=True, help="Tolerancia de la cola")
    @output_options
    @handle_errors
    def command(alpha, beta, lam, modes, r_points, t_max, dt, tol, out, fmt):
        cfg = RunConfig(alpha, beta, lam, modes, r_points, t_max, dt, tol, out, fmt)
        compute = velocity if quantity == "velocity" else stress
        field = compute(cfg.params(), cfg.radii(), cfg.times(), modes, tail_tolerance=tol)
        emit(cfg, cfg.metadata(name, t_max=t_max, dt=dt, tol=tol), ["t", "r", "value"], field.to_csv_rows())

    command.__doc__ = f"Campo de {'velocidad' if quantity == 'velocity' else 'esfuerzo'} u(r, t) en CSV (t,r,value)."
    return main.command(name)(command)


_field_command("velocity", "velocity", VELOCITY_TAIL_TOLERANCE)
_field_command("stress", "stress", STRESS_TAIL_TOLERANCE)


@main.command("center-series")
@fluid_options
@click.option("--t-max", type=float, default=30.0, show_default=True)
@click.option("--dt", type=float, default=0.05, show_default=True)
@click.option("--tol", type=float, default=FIGURE_TAIL_TOLERANCE, show_default=True)
@output_options
@handle_errors
def center_series_command(alpha, beta, lam, modes, t_max, dt, tol, out, fmt):
    """Velocidad en el eje u(0, t) (columnas t,u0)."""
    cfg = RunConfig(alpha, beta, lam, modes, 2, t_max, dt, tol, out, fmt)
    series = center_series(cfg.params(), cfg.times(), modes, tail_tolerance=tol)
    metadata = cfg.metadata("center-series", t_max=t_max, dt=dt, tol=tol,
                            oscillations=count_oscillations(series))
    emit(cfg, metadata, ["t", "u0"], zip(series.times, series.values))


def _figure_field(params: FluidParams, radii, times, modes: int, tol: float) -> RadialField:
    if params.alpha == 0.0:
        return velocity_scott_blair(params.beta, params.lam, radii, times, modes, tail_tolerance=tol)
    return velocity(params, radii, times, modes, tail_tolerance=tol)


def figure_curves(which: str, alpha: Optional[float], beta: Optional[float],
                  lam: float) -> List[FluidParams]:
    """
    Juegos de parámetros de una figura, con las sustituciones de la línea de comandos.

    Todos se validan antes de calcular nada.
    """
    defaults = FIGURES[which]
    alphas = defaults["alpha"] if alpha is None else (alpha,)
    betas = defaults["beta"] if beta is None else (beta,)
    return [FluidParams(a, b, lam) for b in betas for a in alphas]


@main.command()
@click.argument("which", type=click.Choice(sorted(FIGURES)))
@click.option("--alpha", type=float, default=None, help="Sustituye los α de la figura")
@click.option("--beta", type=float, default=None, help="Sustituye los β de la figura")
@click.option("--lambda", "lam", type=float, default=1.0, show_default=True)
@click.option("--modes", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--r-points", type=int, default=21, show_default=True)
@click.option("--t-max", type=float, default=30.0, show_default=True)
@click.option("--dt", type=float, default=0.05, show_default=True)
@click.option("--tol", type=float, default=FIGURE_TAIL_TOLERANCE, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("figures"),
              show_default=True, help="Directorio de salida")
@click.option("--format", "fmt", type=click.Choice(["csv", "plot"]), default="csv", show_default=True)
@handle_errors
def figure(which, alpha, beta, lam, modes, r_points, t_max, dt, tol, out, fmt):
    """Reproduce una figura: un CSV por curva en el directorio --out."""
    cfg = RunConfig(0.0, 1.0, lam, modes, r_points, t_max, dt, tol, out, fmt)
    curves = figure_curves(which, alpha, beta, lam)
    out.mkdir(parents=True, exist_ok=True)
    print_header(f"📊 Figura {which}")

    rows = []
    for params in curves:
        path = out / f"{which}_alpha{params.alpha:g}_beta{params.beta:g}.csv"
        metadata = {"command": f"figure {which}", "alpha": params.alpha, "beta": params.beta,
                    "lambda": params.lam, "modes": modes, "tol": tol}
        if which == "fig3":
            field = _figure_field(params, cfg.radii(), np.array(FIG3_TIMES), modes, tol)
            write_csv(path, metadata, ["t", "r", "u"], field.to_csv_rows())
            summary = field.values[-1, 0]
        else:
            times = cfg.times()
            field = _figure_field(params, [0.0], times, modes, tol)
            write_csv(path, metadata, ["t", "u0"], zip(times, field.values[:, 0]))
            summary = field.values[-1, 0]
        if fmt == "plot":
            render_plot(path)
        rows.append([params.alpha, params.beta, summary, path.name])
        logger.debug("Curva %s escrita en %s", params, path)

    display_table(rows, ["α", "β", "u(0, t_final)", "fichero"])
    click.echo(verdict(True, f"{len(rows)} curva(s) en {out}"))


@main.command()
@fluid_options
@output_options
@handle_errors
def classify(alpha, beta, lam, modes, out, fmt):
    """Clasificación sólido/fluido a tiempo largo."""
    cfg = RunConfig(alpha, beta, lam, modes, out=out, fmt="csv")
    params = cfg.params()
    behavior = classify_longtime(params)
    limit = final_value(mode_table(params, 1)[0].transform)
    center = float(steady_profile(params, [0.0]).values[0, 0])

    print_header("🔍 Clasificación a tiempo largo")
    display_table([[alpha, beta, lam, str(limit), center, str(behavior)]],
                  ["α", "β", "λ", "valor final T_1", "u(0, ∞)", "clase"])
    click.echo(f"\nComportamiento: {behavior_color(str(behavior))}")
    if out is not None:
        write_csv(out, cfg.metadata("classify"), ["alpha", "beta", "lambda", "u0_inf", "behavior"],
                  [[alpha, beta, lam, center, str(behavior)]])


@main.command()
@click.option("--catalog", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Catálogo de redes (por defecto el incluido)")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@handle_errors
def conjecture(catalog, out):
    """Comprueba la conjetura del camino de muelles sobre un catálogo de redes."""
    entries = load_catalog(catalog)
    print_header("📋 Conjetura del camino de muelles")
    rows = []
    consistent = 0
    for entry in entries:
        result = check_conjecture(entry.network)
        consistent += result.consistent
        rows.append([entry.name, entry.network.to_text(), result.spring_path,
                     str(result.behavior), "✅" if result.consistent else "❌"])
    display_table(rows, ["red", "expresión", "camino de muelles", "clase", "coincide"])

    ok = consistent == len(entries)
    click.echo(verdict(ok, f"{consistent}/{len(entries)} consistent"))
    if out is not None:
        write_csv(out, {"command": "conjecture", "networks": len(entries)},
                  ["name", "spring_path", "behavior", "consistent"],
                  [[r[0], r[2], r[3], r[4] == "✅"] for r in rows])
    if not ok:
        sys.exit(1)


@main.command("oracle-compare")
@fluid_options
@click.option("--r-points", type=click.IntRange(min=16), default=64, show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--t-max", type=float, default=5.0, show_default=True, help="Horizonte del integrador")
@click.option("--tol", type=float, default=2e-2, show_default=True, help="Umbral de la distancia L2 relativa")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@handle_errors
def oracle_compare(alpha, beta, lam, modes, r_points, dt, t_max, tol, out):
    """Compara la solución espectral con el integrador de Grünwald-Letnikov."""
    cfg = RunConfig(alpha, beta, lam, modes, r_points, t_max, dt, tol, out)
    params = cfg.params()
    trajectory = simulate(params, FdConfig(r_points, dt, t_max))

    sample_times = time_grid(t_max, ORACLE_SAMPLE_EVERY)
    indices = np.clip(np.rint(sample_times / dt).astype(int), 0, trajectory.times.size - 1)
    times = trajectory.times[indices]
    oracle = trajectory.values[indices]
    spectral = velocity(params, trajectory.radii, times, modes,
                        tail_tolerance=ORACLE_TAIL_TOLERANCE).values

    diff = oracle - spectral
    scale = float(np.max(np.abs(spectral)))
    max_rel = float(np.max(np.abs(diff))) / scale
    l2_rel = float(np.linalg.norm(diff) / np.linalg.norm(spectral))
    ok = l2_rel < tol

    print_header("🔍 Espectral vs. Grünwald-Letnikov")
    print_section(str(params))
    display_table([[r_points, dt, t_max, max_rel, l2_rel, tol]],
                  ["puntos", "dt", "horizonte", "máx. relativo", "L2 relativo", "umbral"])
    click.echo(verdict(ok, f"L2 relativo {l2_rel:.3e} {'<' if ok else '≥'} {tol:g}"))
    if out is not None:
        rows = [
            (t, r, s, o)
            for t, srow, orow in zip(times, spectral, oracle)
            for r, s, o in zip(trajectory.radii, srow, orow)
        ]
        write_csv(out, cfg.metadata("oracle-compare", dt=dt, horizon=t_max, l2_rel=l2_rel, max_rel=max_rel),
                  ["t", "r", "spectral", "oracle"], rows)
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
