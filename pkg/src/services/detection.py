"""
Detecção de extremos por janela deslizante e os cinco detectores de IP.

A janela é uma fração fixa do comprimento do contorno, portanto vê a mesma
vizinhança geométrica em qualquer número de pontos.
"""
import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from core.exceptions import InvalidArgumentError
from models.schemas import (
    Contour,
    IPSet,
    MethodEnum,
    ScalarSeries,
    SharpnessNormalizationEnum,
    SmoothingSchedule,
    WindowConfig,
)
from services.descriptors import (
    DEFAULT_AI_RADIUS,
    area_integral_invariant,
    default_heron_offset,
    heron_curvature,
    var_descriptor,
)
from services.smoothing import cumulative_curvature

logger = logging.getLogger(__name__)


def window_pairs(c: Contour, w: WindowConfig) -> np.ndarray:
    """Número de pares simétricos (i-t, i+t) dentro da meia-janela de cada ponto"""
    n = c.n_points
    lam = c.length
    if w.window_ratio * lam < lam / n:
        raise InvalidArgumentError(
            f"janela {w.window_ratio}·λ menor que o espaçamento médio de {n} pontos"
        )
    half = 0.5 * w.window_ratio * lam
    s = c.arc_positions
    extended = np.concatenate([s - lam, s, s + lam])
    center = np.arange(n) + n
    right = np.searchsorted(extended, s + half, side="right") - center - 1
    left = center - np.searchsorted(extended, s - half, side="left")
    pairs = np.minimum(left, right)
    return np.clip(pairs, 1, (n - 1) // 2)


def _window_scan(values: np.ndarray, pairs: np.ndarray, tolerance: float) -> Tuple[np.ndarray, np.ndarray]:
    """Máscara de extremos com sinal consistente e maior |diferença| dentro da janela"""
    n = len(values)
    scale = float(np.max(np.abs(values))) if n else 0.0
    tol = tolerance * scale
    idx = np.arange(n)
    above = np.ones(n, dtype=bool)
    below = np.ones(n, dtype=bool)
    max_diff = np.zeros(n)

    for t in range(1, int(pairs.max()) + 1):
        active = pairs >= t
        left = values - values[(idx - t) % n]
        right = values - values[(idx + t) % n]
        above &= ~active | ((left > tol) & (right > tol))
        below &= ~active | ((left < -tol) & (right < -tol))
        spread = np.maximum(np.abs(left), np.abs(right))
        max_diff = np.where(active, np.maximum(max_diff, spread), max_diff)

    if scale == 0.0:
        above[:] = False
        below[:] = False
    return above | below, max_diff


def sliding_extrema(
    series: ScalarSeries,
    c: Contour,
    w: WindowConfig = WindowConfig(),
    method: MethodEnum = MethodEnum.VO,
) -> IPSet:
    """Centros de janela cujas diferenças com todos os pares têm o mesmo sinal"""
    if series.contour_size != c.n_points:
        raise InvalidArgumentError("série e contorno com tamanhos diferentes")
    mask, _ = _window_scan(series.values, window_pairs(c, w), w.tie_tolerance)
    return IPSet.from_indices(np.flatnonzero(mask), method, c.n_points)


def detect_Vo(c: Contour, w: WindowConfig = WindowConfig()) -> IPSet:
    """Extremos de φ (zeros de φ̇) sem derivar numericamente"""
    return sliding_extrema(var_descriptor(c), c, w, MethodEnum.VO)


def detect_V(c: Contour, w: WindowConfig = WindowConfig()) -> IPSet:
    """Extremos de φ com variação brusca em volta do centro da janela"""
    phi = var_descriptor(c).values
    mask, max_diff = _window_scan(phi, window_pairs(c, w), w.tie_tolerance)

    if w.sharpness_normalization == SharpnessNormalizationEnum.RANGE:
        scale = float(phi.max() - phi.min())
    else:
        scale = float(np.mean(phi))
    if scale <= 0:
        return IPSet(method=MethodEnum.V, contour_size=c.n_points)

    sharp = max_diff / scale > w.sharpness_threshold * w.window_ratio
    return IPSet.from_indices(np.flatnonzero(mask & sharp), MethodEnum.V, c.n_points)


def detect_AI(
    c: Contour,
    w: WindowConfig = WindowConfig(),
    radius: float = DEFAULT_AI_RADIUS,
    pixel_size: float = 1.0,
) -> IPSet:
    series = area_integral_invariant(c, radius, pixel_size)
    return sliding_extrema(series, c, w, MethodEnum.AI)


def detect_K(c: Contour, w: WindowConfig = WindowConfig(), k: Optional[int] = None) -> IPSet:
    k = default_heron_offset(c.n_points, w.window_ratio) if k is None else k
    return sliding_extrema(heron_curvature(c, k), c, w, MethodEnum.K)


def detect_SK(
    c: Contour,
    w: WindowConfig = WindowConfig(),
    schedule: SmoothingSchedule = SmoothingSchedule(),
) -> IPSet:
    return sliding_extrema(cumulative_curvature(c, schedule, window_ratio=w.window_ratio), c, w, MethodEnum.SK)


DETECTORS: Dict[MethodEnum, Callable[..., IPSet]] = {
    MethodEnum.VO: detect_Vo,
    MethodEnum.V: detect_V,
    MethodEnum.AI: detect_AI,
    MethodEnum.K: detect_K,
    MethodEnum.SK: detect_SK,
}


def detect(
    method: MethodEnum,
    c: Contour,
    w: WindowConfig = WindowConfig(),
    schedule: SmoothingSchedule = SmoothingSchedule(),
    ai_radius: float = DEFAULT_AI_RADIUS,
    ai_pixel_size: float = 1.0,
) -> IPSet:
    """Despacha para o detector do método pedido"""
    method = MethodEnum(method)
    if method == MethodEnum.SK:
        return detect_SK(c, w, schedule)
    if method == MethodEnum.AI:
        return detect_AI(c, w, ai_radius, ai_pixel_size)
    if method not in DETECTORS:
        raise InvalidArgumentError(f"método sem detector: {method.value}")
    return DETECTORS[method](c, w)
