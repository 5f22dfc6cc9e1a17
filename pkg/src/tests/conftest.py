"""Fixtures compartilhadas: formas sintéticas com geometria conhecida."""
import numpy as np
import pytest

from models.schemas import Contour
from services import synthetic


@pytest.fixture
def unit_square() -> Contour:
    return Contour(points=[(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def circle100() -> Contour:
    return synthetic.circle(100)


@pytest.fixture
def square100() -> Contour:
    """Quadrado de lado 200 com cantos nos índices 0, 25, 50 e 75"""
    return synthetic.square(200.0, 100)


@pytest.fixture
def star100() -> Contour:
    """Estrela de 5 pontas: pontas nos índices pares de 10 em 10 (0, 20, ...), reentrâncias nos ímpares"""
    return synthetic.star(5, n_points=100)


@pytest.fixture
def ellipse400() -> Contour:
    return synthetic.ellipse(2.0, 1.0, 400)


@pytest.fixture
def blob100() -> Contour:
    return synthetic.blob(3, n_points=100)


def random_contour(rng: np.random.Generator, n: int = 40) -> Contour:
    """Polígono estrelado aleatório, anti-horário"""
    theta = np.sort(rng.uniform(0, 2 * np.pi, n))
    radius = 50.0 * (1.0 + 0.3 * rng.uniform(-1, 1, n))
    return Contour.from_points(np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]))


def random_star(rng: np.random.Generator) -> Contour:
    tips = int(rng.integers(4, 9))
    outer = float(rng.uniform(80, 120))
    inner = float(rng.uniform(0.3, 0.6)) * outer
    return synthetic.star(tips, outer, inner, n_points=100)
