"""
Formas sintéticas em escala de silhueta (~100 unidades).

Substituem o dataset de benchmark, que não acompanha o projeto, e servem de
fixtures para os testes: círculos e elipses analíticos, polígonos, estrelas
com vértices conhecidos e blobs suaves.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from matplotlib.path import Path as MplPath

from core.exceptions import InvalidArgumentError
from models.schemas import Contour, ShapeRecord
from services.geometry_core import resample

logger = logging.getLogger(__name__)

SILHOUETTE_RADIUS = 100.0
DENSE_POINTS = 4000


def circle(n_points: int = 100, radius: float = SILHOUETTE_RADIUS, center: Tuple[float, float] = (0.0, 0.0)) -> Contour:
    """Polígono regular inscrito; φ e demais descritores são constantes"""
    theta = 2 * np.pi * np.arange(n_points) / n_points
    pts = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
    return Contour(points=pts)


def ellipse(a: float, b: float, n_points: int = 400, dense: int = 20000) -> Contour:
    """Elipse reamostrada por arco a partir de (a, 0)"""
    if dense % 4 or dense < n_points:
        raise InvalidArgumentError("dense precisa ser múltiplo de 4 e >= n_points")
    t = 2 * np.pi * np.arange(dense) / dense
    outline = Contour(points=np.column_stack([a * np.cos(t), b * np.sin(t)]))
    return resample(outline, n_points)


def ellipse_curvature(a: float, b: float, points: np.ndarray) -> np.ndarray:
    """Curvatura analítica nos pontos dados (parâmetro recuperado por atan2)"""
    pts = np.atleast_2d(points)
    t = np.arctan2(pts[:, 1] / b, pts[:, 0] / a)
    return a * b / (a * a * np.sin(t) ** 2 + b * b * np.cos(t) ** 2) ** 1.5


def polygon(vertices: Sequence[Tuple[float, float]], n_points: int = DENSE_POINTS) -> Contour:
    """Contorno do polígono com n_points igualmente espaçados, começando no vértice 0"""
    return resample(Contour.from_points(np.asarray(vertices, dtype=np.float64)), n_points)


def regular_polygon(sides: int, radius: float = SILHOUETTE_RADIUS, n_points: int = DENSE_POINTS,
                    rotation: float = 0.0) -> Contour:
    theta = rotation + 2 * np.pi * np.arange(sides) / sides
    return polygon(np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]), n_points)


def rectangle(width: float = 2 * SILHOUETTE_RADIUS, height: float = SILHOUETTE_RADIUS,
              n_points: int = DENSE_POINTS) -> Contour:
    w, h = width / 2, height / 2
    return polygon([(-w, -h), (w, -h), (w, h), (-w, h)], n_points)


def square(side: float = 2 * SILHOUETTE_RADIUS, n_points: int = 100) -> Contour:
    """Quadrado começando num canto; com n múltiplo de 4 os cantos caem em 0, n/4, n/2, 3n/4"""
    return rectangle(side, side, n_points)


def l_shape(size: float = 2 * SILHOUETTE_RADIUS, n_points: int = DENSE_POINTS) -> Contour:
    s, t = size, size / 2
    return polygon([(0, 0), (s, 0), (s, t), (t, t), (t, s), (0, s)], n_points)


def star(tips: int = 5, outer: float = SILHOUETTE_RADIUS, inner: float = 0.38 * SILHOUETTE_RADIUS,
         n_points: int = DENSE_POINTS) -> Contour:
    """Estrela de `tips` pontas; a ponta 0 fica em (outer, 0)"""
    return polygon(star_vertices(tips, outer, inner), n_points)


def star_vertices(tips: int = 5, outer: float = SILHOUETTE_RADIUS,
                  inner: float = 0.38 * SILHOUETTE_RADIUS) -> np.ndarray:
    theta = np.pi * np.arange(2 * tips) / tips
    radius = np.where(np.arange(2 * tips) % 2 == 0, outer, inner)
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def _radial(radius: np.ndarray, theta: np.ndarray, n_points: int) -> Contour:
    outline = Contour.from_points(np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]))
    return resample(outline, n_points)


def rounded_star(lobes: int = 5, amplitude: float = 0.3, radius: float = SILHOUETTE_RADIUS,
                 n_points: int = DENSE_POINTS) -> Contour:
    """r(θ) = R (1 + a cos(kθ)); extremos suaves de curvatura nos lobos"""
    theta = 2 * np.pi * np.arange(DENSE_POINTS) / DENSE_POINTS
    return _radial(radius * (1 + amplitude * np.cos(lobes * theta)), theta, n_points)


def blob(seed: int = 0, harmonics: int = 4, roughness: float = 0.12,
         radius: float = SILHOUETTE_RADIUS, n_points: int = DENSE_POINTS) -> Contour:
    """Forma estrelada suave com harmônicos de fase e amplitude sorteadas"""
    rng = np.random.default_rng(seed)
    theta = 2 * np.pi * np.arange(DENSE_POINTS) / DENSE_POINTS
    r = np.ones_like(theta)
    for k in range(2, harmonics + 2):
        r += roughness * rng.uniform(0.3, 1.0) / (k - 1) * np.cos(k * theta + rng.uniform(0, 2 * np.pi))
    return _radial(radius * r, theta, n_points)


def synthetic_suite(n_points: int = DENSE_POINTS) -> List[ShapeRecord]:
    """Nove formas em três classes, com vértices conhecidos"""
    shapes = {
        "stars": {
            "star5": star(5, n_points=n_points),
            "star6": star(6, inner=45.0, n_points=n_points),
            "star7": star(7, inner=50.0, n_points=n_points),
        },
        "polygons": {
            "triangle": regular_polygon(3, n_points=n_points, rotation=np.pi / 2),
            "rectangle": rectangle(n_points=n_points),
            "lshape": l_shape(n_points=n_points),
        },
        "blobs": {
            "blob1": blob(1, n_points=n_points),
            "blob2": blob(2, n_points=n_points),
            "rounded4": rounded_star(4, 0.25, n_points=n_points),
        },
    }
    return [
        ShapeRecord(class_name=class_name, shape_name=shape_name, contour=contour)
        for class_name, by_shape in shapes.items()
        for shape_name, contour in by_shape.items()
    ]


def rasterize_mask(c: Contour, shape: Optional[Tuple[int, int]] = None, margin: int = 2) -> np.ndarray:
    """
    Máscara binária (linha 0 no topo) com os centros de pixel dentro do polígono.

    Coordenadas de pixel: coluna = x, linha = altura - 1 - y, após transladar o
    contorno para caber com `margin` pixels de borda.
    """
    pts = c.points - np.floor(c.points.min(axis=0)) + margin
    if shape is None:
        w, h = (np.ceil(pts.max(axis=0)).astype(int) + margin + 1).tolist()
        shape = (h, w)
    rows, cols = np.mgrid[0:shape[0], 0:shape[1]]
    centers = np.column_stack([cols.ravel(), (shape[0] - 1 - rows).ravel()]).astype(np.float64)
    inside = MplPath(np.vstack([pts, pts[:1]])).contains_points(centers)
    return inside.reshape(shape)
