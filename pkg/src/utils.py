"""
Utilidades de salida: CSV con cabecera de parámetros, tablas, mallas y gráficas.
"""

import csv
import io
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from colorama import Fore, Style
from tabulate import tabulate

from .errors import DomainError

PathLike = Union[str, Path]


def format_number(value) -> str:
    """Formato numérico estable para CSV (mismo texto en cada ejecución)."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{float(value):.12g}"
    return str(value)


def csv_text(metadata: Dict[str, object], columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    """
    Construye el CSV: líneas ``# clave=valor``, cabecera de columnas y filas.

    Args:
        metadata (Dict[str, object]): Parámetros de la ejecución
        columns (Sequence[str]): Nombres de columna
        rows (Iterable[Sequence]): Filas de datos

    Returns:
        str: Contenido del CSV
    """
    buffer = io.StringIO()
    for key, value in metadata.items():
        buffer.write(f"# {key}={format_number(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def write_csv(path: PathLike, metadata: Dict[str, object], columns: Sequence[str],
              rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(metadata, columns, rows), encoding="utf-8")
    return path


def read_csv(path: PathLike) -> Tuple[Dict[str, str], List[str], np.ndarray]:
    """
    Lee un CSV escrito por :func:`write_csv`.

    Returns:
        Tuple: (metadatos, columnas, matriz de datos)
    """
    metadata = {}
    header_lines = 0
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.startswith("#"):
            break
        key, _, value = line[1:].strip().partition("=")
        metadata[key] = value
        header_lines += 1
    # Con names=True la primera línea tras skip_header da los nombres de columna.
    table = np.atleast_1d(np.genfromtxt(path, delimiter=",", skip_header=header_lines,
                                        names=True, dtype=float, encoding="utf-8"))
    columns = list(table.dtype.names)
    values = np.column_stack([table[name] for name in columns]) if table.size else np.empty((0, len(columns)))
    return metadata, columns, values


def render_plot(csv_path: PathLike, png_path: Optional[PathLike] = None) -> Path:
    """
    Dibuja un CSV ya escrito: una curva por cada combinación de las columnas
    iniciales, con las dos últimas como eje x y eje y.

    Returns:
        Path: Ruta del PNG generado
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = Path(csv_path)
    png_path = Path(png_path) if png_path is not None else csv_path.with_suffix(".png")
    metadata, columns, data = read_csv(csv_path)
    *group_columns, x_name, y_name = columns

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if group_columns and data.size:
        keys = [tuple(row) for row in data[:, :len(group_columns)]]
        for key in dict.fromkeys(keys):
            mask = np.all(data[:, :len(group_columns)] == np.array(key), axis=1)
            label = ", ".join(f"{name}={format_number(v)}" for name, v in zip(group_columns, key))
            ax.plot(data[mask, -2], data[mask, -1], label=label)
        if len(set(keys)) <= 12:
            ax.legend(fontsize=8)
    elif data.size:
        ax.plot(data[:, -2], data[:, -1])
    ax.set_xlabel(x_name)
    ax.set_ylabel(y_name)
    ax.set_title(metadata.get("command", csv_path.stem))
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return png_path


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Instantes dt, 2dt, ..., t_max (t_max incluido si es múltiplo de dt)."""
    if not (dt > 0 and t_max > 0 and dt <= t_max):
        raise DomainError("Se requiere 0 < dt ≤ t_max")
    count = int(math.floor(t_max / dt + 1e-9))
    return dt * np.arange(1, count + 1)


def parse_config_file(path: PathLike) -> Dict[str, str]:
    """
    Lee un fichero de líneas ``clave=valor``; ignora comentarios '#' y líneas vacías.

    Raises:
        DomainError: Si alguna línea no tiene '='
    """
    values = {}
    for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DomainError(f"{path}:{number}: se esperaba clave=valor")
        values[key.strip()] = value.strip()
    return values


def print_header(title: str) -> None:
    """Imprime un encabezado destacado."""
    print(f"\n{Style.BRIGHT}{'=' * 60}")
    print(f"{title.center(60)}")
    print(f"{'=' * 60}{Style.RESET_ALL}")


def print_section(title: str) -> None:
    """Imprime una sección."""
    print(f"\n{Fore.CYAN}{title}{Style.RESET_ALL}")
    print("-" * len(title))


def display_table(rows: Sequence[Sequence], headers: Sequence[str]) -> None:
    if not rows:
        print("📝 No hay resultados para mostrar.")
        return
    print(tabulate(rows, headers=headers, tablefmt="simple", floatfmt=".6g"))


def verdict(ok: bool, text: str) -> str:
    """Línea coloreada con ✅ o ❌."""
    if ok:
        return f"{Fore.GREEN}✅ {text}{Style.RESET_ALL}"
    return f"{Fore.RED}❌ {text}{Style.RESET_ALL}"


def behavior_color(label: str) -> str:
    color = Fore.BLUE if label == "SolidLike" else Fore.MAGENTA
    return f"{color}{label}{Style.RESET_ALL}"
