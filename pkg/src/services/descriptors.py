"""
Descritores escalares por ponto do contorno.

O descritor VAR (distância total) e as quantidades globais A e B que o ligam
à curvatura, mais os três estimadores locais usados como baseline:
área de Heron, invariante integral de área e (via smoothing) curvatura acumulada.
"""
import logging
from typing import Optional

import numpy as np
from matplotlib.path import Path

from core.exceptions import DegenerateDescriptorError, InvalidArgumentError
from models.schemas import Contour, CurvatureAtExtrema, GlobalQuantities, IPSet, ScalarSeries
from services.geometry_core import iter_pair_blocks
from utils.helpers import round_half_up

logger = logging.getLogger(__name__)

DEFAULT_WINDOW_RATIO = 0.017
DEFAULT_AI_RADIUS = 15.0

# Contribuição local de |s - ξ| em ξ = s: o bico da distância gera 2δ em φ̈
SELF_TERM = 2.0


def var_descriptor(c: Contour) -> ScalarSeries:
    """φ(i) = Σ_j |p_i - p_j| ds_j"""
    ds = c.arc_elements
    phi = np.empty(c.n_points)
    for rows, dist, _, _ in iter_pair_blocks(c):
        phi[rows] = (dist * ds[None, :]).sum(axis=1)
    return ScalarSeries.from_values(phi)


def _traversal_sign(c: Contour) -> float:
    # ω é medido a partir da normal externa; a derivada segue o sentido de percurso
    return 1.0 if c.ccw else -1.0


def var_first_derivative(c: Contour) -> ScalarSeries:
    """φ̇(i) = -Σ_j sin(ω_ij) ds_j"""
    ds = c.arc_elements
    out = np.empty(c.n_points)
    for rows, _, _, sin_w in iter_pair_blocks(c):
        out[rows] = -(sin_w * ds[None, :]).sum(axis=1)
    return ScalarSeries.from_values(_traversal_sign(c) * out)


def global_A(c: Contour) -> ScalarSeries:
    """A(i) = Σ_j cos(ω_ij) ds_j"""
    ds = c.arc_elements
    out = np.empty(c.n_points)
    for rows, _, cos_w, _ in iter_pair_blocks(c):
        out[rows] = (cos_w * ds[None, :]).sum(axis=1)
    return ScalarSeries.from_values(out)


def global_B(c: Contour) -> ScalarSeries:
    """B(i) = Σ_j cos²(ω_ij) / |r_ij| ds_j, sem o termo singular j = i"""
    ds = c.arc_elements
    out = np.empty(c.n_points)
    for rows, dist, cos_w, _ in iter_pair_blocks(c):
        safe = np.where(dist > 0, dist, 1.0)
        out[rows] = (cos_w * cos_w / safe * ds[None, :]).sum(axis=1)
    return ScalarSeries.from_values(out)


def global_quantities(c: Contour) -> GlobalQuantities:
    """φ, φ̇, A e B numa única passada pelos pares"""
    ds = c.arc_elements[None, :]
    n = c.n_points
    phi, phi_dot, a, b = (np.empty(n) for _ in range(4))
    for rows, dist, cos_w, sin_w in iter_pair_blocks(c):
        safe = np.where(dist > 0, dist, 1.0)
        phi[rows] = (dist * ds).sum(axis=1)
        phi_dot[rows] = -(sin_w * ds).sum(axis=1)
        a[rows] = (cos_w * ds).sum(axis=1)
        b[rows] = (cos_w * cos_w / safe * ds).sum(axis=1)
    return GlobalQuantities(
        phi=ScalarSeries.from_values(phi),
        phi_dot=ScalarSeries.from_values(_traversal_sign(c) * phi_dot),
        A=ScalarSeries.from_values(a),
        B=ScalarSeries.from_values(b),
    )


def second_derivative(series: ScalarSeries, c: Contour) -> ScalarSeries:
    """Segunda diferença central em comprimento de arco, com espaçamento não uniforme"""
    if series.contour_size != c.n_points:
        raise InvalidArgumentError("série e contorno com tamanhos diferentes")
    f = series.values
    h_plus = c.edge_lengths
    h_minus = np.roll(c.edge_lengths, 1)
    f_plus = np.roll(f, -1)
    f_minus = np.roll(f, 1)
    num = 2.0 * (h_minus * f_plus - (h_plus + h_minus) * f + h_plus * f_minus)
    return ScalarSeries.from_values(num / (h_plus * h_minus * (h_plus + h_minus)))


def kappa_global(
    c: Contour,
    extremum_indices: IPSet,
    quantities: Optional[GlobalQuantities] = None,
) -> CurvatureAtExtrema:
    """
    Curvatura nos extremos de φ: κ = (φ̈ - B - 2) / A.

    φ̈ vem de diferenças finitas de φ, que já incluem o termo singular j = i;
    B não o inclui, então ele entra como a constante SELF_TERM. A relação só é
    garantida nos extremos, onde A ≠ 0.
    """
    if extremum_indices.contour_size != c.n_points:
        raise InvalidArgumentError("IPSet pertence a outro contorno")
    if not len(extremum_indices):
        raise InvalidArgumentError("nenhum extremo de φ informado")

    q = quantities or global_quantities(c)
    phi_dd = second_derivative(q.phi, c).values
    tol = 1e-9 * c.length

    values = []
    for i in extremum_indices.indices:
        a = float(q.A.values[i])
        if abs(a) < tol:
            raise DegenerateDescriptorError(f"|A| = {abs(a):.3e} no índice {i}")
        values.append((float(phi_dd[i]) - float(q.B.values[i]) - SELF_TERM) / a)

    return CurvatureAtExtrema(indices=extremum_indices.indices, values=tuple(values))


def residual_check(c: Contour, kappa: np.ndarray, quantities: Optional[GlobalQuantities] = None) -> float:
    """RMS relativo de φ̈ - (κ A + B + 2) sobre todos os pontos"""
    q = quantities or global_quantities(c)
    phi_dd = second_derivative(q.phi, c).values
    residual = phi_dd - (np.asarray(kappa) * q.A.values + q.B.values + SELF_TERM)
    return float(np.sqrt(np.mean(residual ** 2)) / np.sqrt(np.mean(phi_dd ** 2)))


def default_heron_offset(n_points: int, window_ratio: float = DEFAULT_WINDOW_RATIO) -> int:
    return max(1, round_half_up(window_ratio * n_points / 2))


def heron_curvature(c: Contour, k: Optional[int] = None) -> ScalarSeries:
    """Área com sinal do triângulo (p_{i-k}, p_i, p_{i+k})"""
    n = c.n_points
    k = default_heron_offset(n) if k is None else k
    if not 1 <= k < n / 2:
        raise InvalidArgumentError(f"deslocamento k={k} fora de [1, {n}/2)")

    p = c.points
    a = p - np.roll(p, k, axis=0)
    b = np.roll(p, -k, axis=0) - p
    twice_area = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    return ScalarSeries.from_values(0.5 * twice_area)


def _interior_raster(c: Contour, pixel_size: float, margin: int):
    """
    Máscara do interior (linha = y, coluna = x) numa grade alinhada a múltiplos
    de pixel_size, com centros de pixel no meio de cada célula.
    """
    origin = (np.floor(c.points.min(axis=0) / pixel_size) - margin) * pixel_size
    cols, rows = (np.ceil((c.points.max(axis=0) - origin) / pixel_size).astype(int) + margin).tolist()
    ys, xs = np.mgrid[0:rows, 0:cols]
    centers = origin + (np.column_stack([xs.ravel(), ys.ravel()]) + 0.5) * pixel_size
    inside = Path(np.vstack([c.points, c.points[:1]])).contains_points(centers)
    return inside.reshape(rows, cols), origin


def area_integral_invariant(
    c: Contour,
    radius: float = DEFAULT_AI_RADIUS,
    pixel_size: float = 1.0,
    block: int = 64,
) -> ScalarSeries:
    """
    Número de pixels preenchidos do interior da forma dentro do disco de raio
    dado centrado em cada ponto.

    O interior é rasterizado uma vez; o disco só é avaliado nos pontos do contorno.
    """
    if radius <= 0:
        raise InvalidArgumentError(f"raio precisa ser positivo: {radius}")
    if pixel_size <= 0:
        raise InvalidArgumentError(f"tamanho de pixel precisa ser positivo: {pixel_size}")
    if abs(c.signed_area) < 1e-12 * max(c.length, 1.0) ** 2:
        raise DegenerateDescriptorError("polígono de área nula não pode ser rasterizado")

    reach = int(np.ceil(radius / pixel_size)) + 1
    mask, origin = _interior_raster(c, pixel_size, reach + 1)
    offsets = np.arange(-reach, reach + 1)
    d_row, d_col = (g.ravel() for g in np.meshgrid(offsets, offsets, indexing="ij"))
    cell = np.floor((c.points - origin) / pixel_size).astype(int)

    values = np.empty(c.n_points)
    for start in range(0, c.n_points, block):
        sl = slice(start, min(c.n_points, start + block))
        cols = cell[sl, 0, None] + d_col[None, :]
        rows = cell[sl, 1, None] + d_row[None, :]
        dx = origin[0] + (cols + 0.5) * pixel_size - c.points[sl, 0, None]
        dy = origin[1] + (rows + 0.5) * pixel_size - c.points[sl, 1, None]
        in_disk = dx * dx + dy * dy <= radius * radius
        values[sl] = (mask[rows, cols] & in_disk).sum(axis=1)

    logger.debug(f"AI calculado em {c.n_points} pontos (raio {radius}, grade {mask.shape})")
    return ScalarSeries.from_values(values)
