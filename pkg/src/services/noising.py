"""
Distorção gaussiana da borda e noising incremental determinístico.

Cada passo de noising insere um ponto novo no meio de cada aresta, deslocado
perpendicularmente por uma fração fixa do comprimento da aresta. Os pontos
originais nunca se movem e ocupam as posições pares da saída.
"""
import logging
from typing import List, Union

import numpy as np

from core.exceptions import InvalidArgumentError
from models.schemas import Contour, NoisingConfig, SideRuleEnum
from services.geometry_core import circle_intersection_offset, edge_normals, normals, radius_for_offset

logger = logging.getLogger(__name__)


def gaussian_distort(
    c: Contour,
    variance: float,
    seed: Union[int, np.random.SeedSequence, None] = None,
) -> Contour:
    """Move cada ponto ao longo da normal externa por N(0, variance)"""
    if variance < 0:
        raise InvalidArgumentError(f"variância negativa: {variance}")
    rng = np.random.default_rng(seed)
    displacement = rng.normal(0.0, np.sqrt(variance), size=c.n_points)
    return Contour(points=c.points + displacement[:, None] * normals(c))


def _side_signs(n_edges: int, side_rule: SideRuleEnum) -> np.ndarray:
    if side_rule == SideRuleEnum.OUTWARD:
        return np.ones(n_edges)
    if side_rule == SideRuleEnum.INWARD:
        return -np.ones(n_edges)
    signs = np.ones(n_edges)
    signs[1::2] = -1.0
    return signs


def noising_step(c: Contour, config: NoisingConfig = NoisingConfig()) -> Contour:
    """Dobra o número de pontos; originais preservados bit a bit nas posições pares"""
    n = c.n_points
    # raio dos círculos nas extremidades escolhido para que a interseção fique a ratio·d do ponto médio
    magnitude = np.array([
        circle_intersection_offset(d, radius_for_offset(d, config.perturbation_ratio * d))
        for d in c.edge_lengths.tolist()
    ])
    offset = magnitude * _side_signs(n, config.side_rule)
    midpoints = c.points + 0.5 * c.edges
    new_points = midpoints + offset[:, None] * edge_normals(c)

    out = np.empty((2 * n, 2))
    out[0::2] = c.points
    out[1::2] = new_points
    return Contour(points=out)


def incremental_noising(c: Contour, config: NoisingConfig = NoisingConfig()) -> List[Contour]:
    """Aplica noising_step recursivamente; devolve [passo 1, ..., passo k]"""
    levels = []
    current = c
    for step in range(config.steps):
        current = noising_step(current, config)
        levels.append(current)
        logger.debug(f"noising passo {step + 1}: {current.n_points} pontos")
    return levels


def subsample(c: Contour, levels: int) -> Contour:
    """Mantém um a cada 2^levels pontos a partir do índice 0"""
    if levels < 0:
        raise InvalidArgumentError(f"levels negativo: {levels}")
    stride = 2 ** levels
    if c.n_points % stride:
        raise InvalidArgumentError(f"{c.n_points} pontos não é divisível por {stride}")
    if c.n_points // stride < 3:
        raise InvalidArgumentError("subamostragem deixaria menos de 3 pontos")
    return Contour(points=c.points[::stride])
