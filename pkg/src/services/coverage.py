"""
Cobertura do plano pelas famílias de contornos.

Compara a faixa preenchida pelo noising incremental com a área varrida pela
suavização progressiva, medindo ocupação de células de uma grade regular.
"""
import logging
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage
from scipy.stats import spearmanr

from core.exceptions import InvalidArgumentError
from models.schemas import Contour, CoverageGrid, CoverageReport, GroundTruth, SmoothingSchedule
from services.smoothing import progressive_smoothing

logger = logging.getLogger(__name__)

BOX_COUNT_RESOLUTIONS = (8, 16, 32, 64)


def sample_polyline(c: Contour, spacing: float) -> np.ndarray:
    """Pontos ao longo da polilinha fechada, no máximo `spacing` entre vizinhos"""
    if spacing <= 0:
        raise InvalidArgumentError(f"espaçamento precisa ser positivo: {spacing}")
    per_edge = np.maximum(1, np.ceil(c.edge_lengths / spacing).astype(np.int64))
    edge_of = np.repeat(np.arange(c.n_points), per_edge)
    offsets = np.arange(per_edge.sum()) - np.repeat(np.cumsum(per_edge) - per_edge, per_edge)
    t = offsets / per_edge[edge_of]
    return c.points[edge_of] + t[:, None] * c.edges[edge_of]


def _grid_frame(points: np.ndarray, cell_size: float):
    # uma célula de folga em volta, origem acompanha a translação dos pontos
    origin = points.min(axis=0) - cell_size
    extent = points.max(axis=0) - origin
    cols, rows = (np.floor(extent / cell_size).astype(np.int64) + 2).tolist()
    return (float(origin[0]), float(origin[1])), (rows, cols)


def rasterize(points: np.ndarray, cell_size: float) -> CoverageGrid:
    """Conta quantos pontos caem em cada célula"""
    if cell_size <= 0:
        raise InvalidArgumentError(f"cell_size precisa ser positivo: {cell_size}")
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    origin, shape = _grid_frame(points, cell_size)
    grid = CoverageGrid(cell_size=cell_size, origin=origin, counts=np.zeros(shape, dtype=np.int64))
    cells = grid.cell_of(points)
    counts = np.zeros(shape, dtype=np.int64)
    np.add.at(counts, (cells[:, 0], cells[:, 1]), 1)
    return grid.model_copy(update={"counts": counts})


def noising_coverage(contours: Sequence[Contour], cell_size: float) -> CoverageGrid:
    """Amostras de todos os níveis de noising juntas, a cada cell_size/2"""
    if not contours:
        raise InvalidArgumentError("nenhum nível de noising informado")
    samples = np.vstack([sample_polyline(c, cell_size / 2) for c in contours])
    grid = rasterize(samples, cell_size)
    logger.debug(f"cobertura de noising: {len(contours)} níveis, {grid.total} amostras")
    return grid


def smoothing_coverage(
    c: Contour,
    schedule: SmoothingSchedule = SmoothingSchedule(),
    cell_size: float = 2.0,
) -> CoverageGrid:
    """Quantos níveis de suavização passam por cada célula (cada nível conta uma vez)"""
    if cell_size <= 0:
        raise InvalidArgumentError(f"cell_size precisa ser positivo: {cell_size}")
    levels = [sample_polyline(level, cell_size / 2) for level in progressive_smoothing(c, schedule)]
    origin, shape = _grid_frame(np.vstack(levels), cell_size)
    frame = CoverageGrid(cell_size=cell_size, origin=origin, counts=np.zeros(shape, dtype=np.int64))

    counts = np.zeros(shape, dtype=np.int64)
    for samples in levels:
        cells = frame.cell_of(samples)
        occupied = np.zeros(shape, dtype=bool)
        occupied[cells[:, 0], cells[:, 1]] = True
        counts += occupied
    return frame.model_copy(update={"counts": counts})


def local_sums(grid: CoverageGrid, points: np.ndarray) -> np.ndarray:
    """Soma da vizinhança 3×3 da célula de cada ponto; fora da grade vale 0"""
    summed = ndimage.convolve(grid.counts, np.ones((3, 3), dtype=np.int64), mode="constant", cval=0)
    cells = grid.cell_of(points)
    rows, cols = grid.counts.shape
    inside = (cells[:, 0] >= 0) & (cells[:, 0] < rows) & (cells[:, 1] >= 0) & (cells[:, 1] < cols)
    out = np.zeros(len(cells), dtype=np.int64)
    out[inside] = summed[cells[inside, 0], cells[inside, 1]]
    return out


def rank_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Spearman com convenção 0 para menos de 2 pontos ou variância nula"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) < 2 or np.ptp(a) == 0 or np.ptp(b) == 0:
        logger.warning("⚠️ correlação de postos indefinida (variância nula); usando 0")
        return 0.0
    return float(spearmanr(a, b).statistic)


def box_counting_dimension(
    points: np.ndarray,
    cell_sizes: Optional[Sequence[float]] = None,
) -> float:
    """Inclinação de log(células ocupadas) por log(1/cell_size)"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if cell_sizes is None:
        extent = float(np.ptp(points, axis=0).max())
        if extent <= 0:
            raise InvalidArgumentError("pontos sem extensão espacial")
        cell_sizes = [extent / r for r in BOX_COUNT_RESOLUTIONS]
    sizes = np.asarray(cell_sizes, dtype=np.float64)
    if len(sizes) < 2 or np.any(sizes <= 0):
        raise InvalidArgumentError("pelo menos dois tamanhos de célula positivos são necessários")

    occupied = []
    origin = points.min(axis=0)
    for size in sizes:
        cells = np.floor((points - origin) / size).astype(np.int64)
        occupied.append(len(np.unique(cells, axis=0)))
    slope, _ = np.polyfit(np.log(1.0 / sizes), np.log(occupied), 1)
    return float(slope)


def coverage_correlation(
    a: CoverageGrid,
    b: CoverageGrid,
    gt: GroundTruth,
    c: Contour,
) -> CoverageReport:
    """
    Relaciona cobertura por noising (a) e por suavização (b) nos pontos do GT.

    Relata a correlação de postos das somas locais das duas grades nos pontos
    do GT e a fração de pontos do GT cuja soma local em `a` supera a mediana
    das somas locais de todos os pontos do contorno.
    """
    if gt.indices.contour_size != c.n_points:
        raise InvalidArgumentError("GT pertence a outro contorno")
    gt_points = c.points[gt.indices.as_array()]
    if not len(gt_points):
        logger.warning("⚠️ GT vazio; relatório de cobertura degenerado")
        return CoverageReport(rank_correlation=0.0, gt_above_median_fraction=0.0, gt_count=0)

    local_a = local_sums(a, gt_points)
    local_b = local_sums(b, gt_points)
    median = float(np.median(local_sums(a, c.points)))
    return CoverageReport(
        rank_correlation=rank_correlation(local_a, local_b),
        gt_above_median_fraction=float(np.mean(local_a > median)),
        gt_count=len(gt_points),
    )


def analyze_coverage(
    c: Contour,
    gt: GroundTruth,
    levels: Sequence[Contour],
    schedule: SmoothingSchedule = SmoothingSchedule(),
    cell_size: float = 2.0,
) -> CoverageReport:
    """Relatório completo: grades de noising e suavização, correlação e dimensões"""
    noised = noising_coverage([c, *levels], cell_size)
    smoothed = smoothing_coverage(c, schedule, cell_size)
    report = coverage_correlation(noised, smoothed, gt, c)

    noise_samples = np.vstack([sample_polyline(level, cell_size / 2) for level in [c, *levels]])
    smooth_samples = np.vstack(
        [sample_polyline(level, cell_size / 2) for level in progressive_smoothing(c, schedule)]
    )
    return report.model_copy(
        update={
            "noising_dimension": box_counting_dimension(noise_samples),
            "smoothing_dimension": box_counting_dimension(smooth_samples),
        }
    )
