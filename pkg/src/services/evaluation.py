"""
Avaliação probabilística de precisão-recall.

Cada conjunto de IPs vira uma densidade sobre os pontos do contorno,
proporcional ao inverso da distância pela borda até o IP mais próximo.
A precisão em cada posição de recall é 1 menos a divergência acumulada
com a densidade do GT, somando as menores diferenças primeiro.
"""
import logging
from typing import Sequence

import numpy as np

from core.exceptions import DegenerateMethodError, InvalidArgumentError
from models.schemas import Contour, DensityProfile, IPSet, PRCurve
from services.geometry_core import boundary_distances

logger = logging.getLogger(__name__)


def density_profile(ips: IPSet, c: Contour) -> DensityProfile:
    """raw(j) = ds_j / max(distância até o IP mais próximo, ds_j), normalizado para massa 1"""
    if ips.contour_size != c.n_points:
        raise InvalidArgumentError(
            f"IPSet de {ips.contour_size} pontos para contorno de {c.n_points}"
        )
    if not len(ips):
        raise DegenerateMethodError(f"método {ips.method.value} não detectou nenhum IP")

    ds = c.arc_elements
    nearest = boundary_distances(c, ips.as_array()).min(axis=1)
    raw = ds / np.maximum(nearest, ds)
    return DensityProfile(mass=raw / raw.sum())


def uniform_density(n_points: int) -> DensityProfile:
    if n_points < 1:
        raise InvalidArgumentError(f"número de pontos inválido: {n_points}")
    return DensityProfile(mass=np.full(n_points, 1.0 / n_points))


def density_or_uniform(ips: IPSet, c: Contour) -> DensityProfile:
    """density_profile com fallback uniforme para conjuntos vazios"""
    try:
        return density_profile(ips, c)
    except DegenerateMethodError as e:
        logger.warning(f"⚠️ {e}; usando densidade uniforme")
        return uniform_density(c.n_points)


def pr_curve(
    method_density: DensityProfile,
    gt_density: DensityProfile,
    gt_indices: IPSet,
) -> PRCurve:
    """values[m] = 1 - soma das m menores |p(g) - p_G(g)| nos pontos do GT"""
    n = len(method_density)
    if len(gt_density) != n or gt_indices.contour_size != n:
        raise InvalidArgumentError(
            f"tamanhos incompatíveis: método {n}, GT {len(gt_density)}, "
            f"índices em {gt_indices.contour_size}"
        )
    idx = gt_indices.as_array()
    diffs = np.sort(np.abs(method_density.mass[idx] - gt_density.mass[idx]))
    values = 1.0 - np.cumsum(diffs)
    return PRCurve(values=tuple(float(v) for v in values))


def average_pr(curves: Sequence[PRCurve]) -> PRCurve:
    """Média ponto a ponto, truncando todas as curvas na menor delas"""
    if not curves:
        raise InvalidArgumentError("nenhuma curva para média")
    length = min(len(curve) for curve in curves)
    if length < max(len(curve) for curve in curves):
        logger.debug(f"curvas truncadas para {length} posições de recall")
    stacked = np.array([curve.values[:length] for curve in curves], dtype=np.float64)
    if length == 0:
        return PRCurve()
    mean = stacked.mean(axis=0)
    # a média de sequências não crescentes é não crescente; corrige só ruído de arredondamento
    mean = np.minimum.accumulate(mean)
    return PRCurve(values=tuple(float(v) for v in mean))
