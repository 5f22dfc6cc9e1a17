"""
Primitivas geométricas sobre contornos fechados.

Reamostragem por comprimento de arco, normais por bissetriz, distância ao
longo da borda e o deslocamento da interseção de círculos usado no noising.
"""
import logging
import math
from typing import Iterator, Tuple

import numpy as np

from core.exceptions import InvalidArgumentError, NoIntersectionError
from models.schemas import Contour

logger = logging.getLogger(__name__)

# Linhas por bloco nas somas O(n²) sobre pares de pontos
PAIR_BLOCK_ROWS = 256


def resample(c: Contour, n: int) -> Contour:
    """
    Reamostra o contorno com n pontos igualmente espaçados em comprimento de arco,
    começando no primeiro ponto armazenado.
    """
    if n < 3:
        raise InvalidArgumentError(f"resample exige n >= 3, recebeu {n}")

    lam = c.length
    knots = np.append(c.arc_positions, lam)
    closed = np.vstack([c.points, c.points[:1]])
    targets = np.arange(n) * (lam / n)

    x = np.interp(targets, knots, closed[:, 0])
    y = np.interp(targets, knots, closed[:, 1])
    return Contour(points=np.column_stack([x, y]))


def unit_tangents(c: Contour) -> np.ndarray:
    """Tangente em cada ponto: bissetriz das arestas de entrada e saída"""
    unit = c.edges / c.edge_lengths[:, None]
    incoming = np.roll(unit, 1, axis=0)
    bisector = incoming + unit
    norm = np.hypot(bisector[:, 0], bisector[:, 1])

    # arestas opostas (cúspide): cai para a aresta de saída
    cusp = norm < 1e-12
    bisector[cusp] = unit[cusp]
    norm[cusp] = 1.0
    return bisector / norm[:, None]


def normals(c: Contour, outward: bool = True) -> np.ndarray:
    """
    Normal unitária por ponto, perpendicular à tangente bissetriz.

    Com outward=True aponta para fora da região delimitada em qualquer sentido
    de percurso; com outward=False é a normal à esquerda do percurso.
    """
    t = unit_tangents(c)
    left = np.column_stack([-t[:, 1], t[:, 0]])
    if not outward:
        return left
    # para contorno anti-horário o exterior fica à direita
    return -left if c.ccw else left


def edge_normals(c: Contour) -> np.ndarray:
    """Perpendicular unitária externa de cada aresta i -> i+1"""
    e = c.edges / c.edge_lengths[:, None]
    right = np.column_stack([e[:, 1], -e[:, 0]])
    return right if c.ccw else -right


def boundary_distance(c: Contour, i: int, j: int) -> float:
    """Menor dos dois comprimentos de arco entre os pontos i e j"""
    n = c.n_points
    for idx in (i, j):
        if not 0 <= idx < n:
            raise InvalidArgumentError(f"índice {idx} fora do contorno de {n} pontos")
    s = c.arc_positions
    d = abs(float(s[i] - s[j]))
    return min(d, c.length - d)


def boundary_distances(c: Contour, targets: np.ndarray) -> np.ndarray:
    """Matriz (n, m) de distâncias pela borda de todo ponto a cada índice alvo"""
    targets = np.asarray(targets, dtype=np.int64)
    if targets.size and (targets.min() < 0 or targets.max() >= c.n_points):
        raise InvalidArgumentError("índice alvo fora do contorno")
    s = c.arc_positions
    d = np.abs(s[:, None] - s[None, targets])
    return np.minimum(d, c.length - d)


def circle_intersection_offset(d: float, r: float) -> float:
    """
    Distância do ponto médio da aresta às interseções de dois círculos de raio r
    centrados nas extremidades de uma aresta de comprimento d.
    """
    if d <= 0:
        raise InvalidArgumentError(f"comprimento de aresta precisa ser positivo: {d}")
    half = d / 2
    if r < half:
        raise NoIntersectionError(f"raio {r} menor que metade da aresta ({half})")
    return math.sqrt(max(r * r - half * half, 0.0))


def radius_for_offset(d: float, offset: float) -> float:
    """Raio que produz o deslocamento perpendicular pedido"""
    if d <= 0 or offset < 0:
        raise InvalidArgumentError("aresta positiva e deslocamento não negativo são exigidos")
    return math.hypot(offset, d / 2)


def point_segment_distances(points: np.ndarray, c: Contour, block: int = 4096) -> np.ndarray:
    """Distância de cada ponto à polilinha fechada de c"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    a = c.points
    e = c.edges
    ee = np.einsum("ij,ij->i", e, e)
    out = np.empty(len(points))
    for start in range(0, len(points), block):
        p = points[start:start + block]
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("bsk,sk->bs", ap, e) / ee[None, :], 0.0, 1.0)
        closest = a[None, :, :] + t[..., None] * e[None, :, :]
        diff = p[:, None, :] - closest
        out[start:start + block] = np.sqrt(np.einsum("bsk,bsk->bs", diff, diff).min(axis=1))
    return out


def hausdorff_to_polyline(points: np.ndarray, c: Contour) -> float:
    """Distância de Hausdorff dirigida: pior ponto até a polilinha de c"""
    return float(point_segment_distances(points, c).max())


def iter_pair_blocks(c: Contour, block: int = PAIR_BLOCK_ROWS) -> Iterator[Tuple[slice, np.ndarray, np.ndarray, np.ndarray]]:
    """
    Percorre os pares (i, j) em blocos de linhas.

    Entrega (linhas, |r_ij|, cos ω_ij, sin ω_ij), com ω o ângulo anti-horário da
    normal externa em i até p_j - p_i. O termo j = i vem zerado em cos e sin.
    """
    pts = c.points
    nrm = normals(c)
    n = c.n_points
    for start in range(0, n, block):
        rows = slice(start, min(n, start + block))
        idx = np.arange(rows.start, rows.stop)
        v = pts[None, :, :] - pts[idx, None, :]
        dist = np.hypot(v[..., 0], v[..., 1])
        safe = dist.copy()
        safe[np.arange(len(idx)), idx] = 1.0
        ni = nrm[idx, None, :]
        cos_w = (ni[..., 0] * v[..., 0] + ni[..., 1] * v[..., 1]) / safe
        sin_w = (ni[..., 0] * v[..., 1] - ni[..., 1] * v[..., 0]) / safe
        yield rows, dist, cos_w, sin_w
