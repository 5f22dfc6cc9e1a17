"""
Gráficos SVG dos resultados.

Saída determinística: salt de hash fixo e sem data nos metadados, para que
duas execuções iguais gerem arquivos idênticos.
"""
import logging
from pathlib import Path
from typing import Dict, Mapping, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from models.schemas import MethodEnum, PRCurve  # noqa: E402

logger = logging.getLogger(__name__)

SVG_METADATA = {"Date": None}

plt.rcParams.update(
    {
        "svg.hashsalt": "vertexnoise",
        "svg.fonttype": "none",
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 9,
    }
)


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.debug(f"gráfico salvo em {path}")
    return path


def plot_class_pr(
    class_name: str,
    curves: Mapping[Tuple[MethodEnum, int], PRCurve],
    path: Path,
) -> Path:
    """Uma linha por (método, número de pontos); precisão cortada em 0 só na exibição"""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for (method, points), curve in sorted(curves.items(), key=lambda kv: (kv[0][0].value, kv[0][1])):
        if not len(curve):
            continue
        x = np.arange(1, len(curve) + 1)
        y = np.clip(np.asarray(curve.values), 0.0, None)
        ax.plot(x, y, marker="o", markersize=2.5, linewidth=1.0, label=f"{method.value} ({points})")
    ax.set_title(f"PR médio: {class_name}")
    ax.set_xlabel("índice do GT (posição de recall)")
    ax.set_ylabel("precisão")
    ax.set_ylim(0.0, 1.02)
    if ax.lines:
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return _save(fig, path)


def plot_descriptors(
    title: str,
    series: Dict[str, Sequence[float]],
    path: Path,
) -> Path:
    """Séries de descritores normalizadas para [0, 1] pelo índice do ponto"""
    fig, ax = plt.subplots(figsize=(7.5, 4.0))
    for name in sorted(series):
        values = np.asarray(series[name], dtype=np.float64)
        span = float(np.ptp(values)) if values.size else 0.0
        shown = (values - values.min()) / span if span > 0 else np.zeros_like(values)
        ax.plot(np.arange(values.size), shown, linewidth=0.8, label=name)
    ax.set_title(title)
    ax.set_xlabel("índice do ponto")
    ax.set_ylabel("valor normalizado")
    if ax.lines:
        ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)
