"""
Suavização progressiva, curvatura acumulada (SK) e ground truth.

O GT de uma forma é o conjunto de extremos da soma ponto a ponto das
curvaturas de Heron de todas as versões suavizadas do contorno de 100 pontos.
"""
import logging
import math
from typing import List, Optional

import numpy as np

from core.exceptions import InvalidArgumentError
from models.schemas import Contour, GroundTruth, MethodEnum, ScalarSeries, SmoothingSchedule, WindowConfig
from services.descriptors import DEFAULT_WINDOW_RATIO, default_heron_offset, heron_curvature
from utils.helpers import is_power_of_two

logger = logging.getLogger(__name__)

GT_POINTS = 100


def smooth_once(c: Contour, step_factor: float = 0.25) -> Contour:
    """p_i <- (1-f) p_i + f (p_{i-1} + p_{i+1}) / 2"""
    if not 0 < step_factor <= 0.5:
        raise InvalidArgumentError(f"step_factor fora de (0, 0.5]: {step_factor}")
    p = c.points
    neighbours = 0.5 * (np.roll(p, 1, axis=0) + np.roll(p, -1, axis=0))
    return Contour(points=(1.0 - step_factor) * p + step_factor * neighbours)


def progressive_smoothing(c: Contour, schedule: SmoothingSchedule = SmoothingSchedule()) -> List[Contour]:
    """[c, S(c), S²(c), ...] com schedule.steps_for(n) aplicações"""
    levels = [c]
    for _ in range(schedule.steps_for(c.n_points)):
        levels.append(smooth_once(levels[-1], schedule.step_factor))
    return levels


def cumulative_curvature(
    c: Contour,
    schedule: SmoothingSchedule = SmoothingSchedule(),
    k: Optional[int] = None,
    window_ratio: float = DEFAULT_WINDOW_RATIO,
) -> ScalarSeries:
    """SK(i) = Σ_t κ_t(i) sobre todos os níveis de suavização, correspondência por índice"""
    k = default_heron_offset(c.n_points, window_ratio) if k is None else k
    total = np.zeros(c.n_points)
    for level in progressive_smoothing(c, schedule):
        total += heron_curvature(level, k).values
    return ScalarSeries.from_values(total)


def ground_truth_ips(
    c100: Contour,
    schedule: SmoothingSchedule = SmoothingSchedule(),
    window: WindowConfig = WindowConfig(),
) -> GroundTruth:
    """Extremos da curvatura acumulada do contorno limpo de 100 pontos"""
    # import local: detection depende deste módulo para o SK
    from services.detection import sliding_extrema

    if c100.n_points != GT_POINTS:
        raise InvalidArgumentError(f"GT é definido só em {GT_POINTS} pontos, recebeu {c100.n_points}")
    cumulative = cumulative_curvature(c100, schedule, window_ratio=window.window_ratio)
    found = sliding_extrema(cumulative, c100, window)
    indices = found.model_copy(update={"method": MethodEnum.GT})
    logger.debug(f"GT com {len(indices)} pontos")
    return GroundTruth(indices=indices, cumulative=cumulative)


def _noising_power(N: int, base: int = GT_POINTS) -> int:
    if N < base or N % base or not is_power_of_two(N // base):
        raise InvalidArgumentError(f"N={N} não é {base}·2^p")
    return int(math.log2(N // base))


def gt_index_map(n: int, N: int) -> int:
    """Índice 1-based n do contorno de 100 pontos -> 2^p (n-1) + 1 no contorno de N pontos"""
    p = _noising_power(N)
    if not 1 <= n <= GT_POINTS:
        raise InvalidArgumentError(f"n={n} fora de [1, {GT_POINTS}]")
    return 2 ** p * (n - 1) + 1


def map_gt_indices(gt: GroundTruth, N: int) -> np.ndarray:
    """Mesmo mapeamento em índices 0-based, para todo o conjunto"""
    return gt.indices.as_array() * 2 ** _noising_power(N)
