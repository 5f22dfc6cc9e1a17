import math

import numpy as np
import pytest

from core.exceptions import InvalidArgumentError, NoIntersectionError
from models.schemas import Contour
from services import synthetic
from services.geometry_core import (
    boundary_distance,
    boundary_distances,
    circle_intersection_offset,
    hausdorff_to_polyline,
    normals,
    radius_for_offset,
    resample,
)


class TestContour:
    def test_rejeita_menos_de_tres_pontos(self):
        with pytest.raises(ValueError):
            Contour(points=[(0, 0), (1, 0)])

    def test_rejeita_pontos_consecutivos_repetidos(self):
        with pytest.raises(ValueError):
            Contour(points=[(0, 0), (1, 0), (1, 0), (0, 1)])

    def test_rejeita_fechamento_repetido(self):
        with pytest.raises(ValueError):
            Contour(points=[(0, 0), (1, 0), (1, 1), (0, 0)])

    def test_perimetro_inclui_aresta_de_fechamento(self, unit_square):
        assert unit_square.length == pytest.approx(4.0)
        assert unit_square.ccw
        assert unit_square.closed

    def test_from_points_normaliza_para_anti_horario(self):
        cw = [(0, 0), (0, 1), (1, 1), (1, 0)]
        c = Contour.from_points(cw)
        assert c.ccw
        assert tuple(c.points[0]) == (0.0, 0.0)
        assert c.signed_area == pytest.approx(1.0)

    def test_construtor_mantem_ordem(self):
        c = Contour(points=[(0, 0), (0, 1), (1, 1), (1, 0)])
        assert not c.ccw
        assert c.signed_area == pytest.approx(-1.0)

    def test_reversed_inverte_orientacao_mantendo_primeiro_ponto(self, unit_square):
        r = unit_square.reversed()
        assert not r.ccw
        assert np.array_equal(r.points[0], unit_square.points[0])
        assert np.array_equal(r.points[1], unit_square.points[-1])

    def test_diametro(self, unit_square):
        assert unit_square.diameter == pytest.approx(math.sqrt(2))


class TestResample:
    def test_quatro_pontos_mantem_cantos(self, unit_square):
        out = resample(unit_square, 4)
        np.testing.assert_allclose(out.points, unit_square.points, atol=1e-12)

    def test_oito_pontos_inclui_pontos_medios(self, unit_square):
        out = resample(unit_square, 8)
        expected = [(0, 0), (0.5, 0), (1, 0), (1, 0.5), (1, 1), (0.5, 1), (0, 1), (0, 0.5)]
        np.testing.assert_allclose(out.points, expected, atol=1e-12)

    def test_perimetro_do_circulo(self):
        out = resample(synthetic.circle(64, radius=1.0), 128)
        assert out.n_points == 128
        assert out.length == pytest.approx(2 * math.pi, rel=0.01)

    def test_idempotente_em_contorno_uniforme(self, unit_square):
        once = resample(unit_square, 8)
        twice = resample(once, 8)
        np.testing.assert_allclose(twice.points, once.points, atol=1e-9)

    def test_n_invalido(self, unit_square):
        with pytest.raises(InvalidArgumentError):
            resample(unit_square, 2)


class TestNormals:
    def test_ponto_medio_da_aresta_inferior(self, unit_square):
        c = resample(unit_square, 8)
        np.testing.assert_allclose(normals(c)[1], (0.0, -1.0), atol=1e-12)

    def test_hexagono_radial(self):
        theta = 2 * np.pi * np.arange(6) / 6
        hexagon = Contour(points=np.column_stack([np.cos(theta), np.sin(theta)]))
        nrm = normals(hexagon)
        radial = hexagon.points / np.linalg.norm(hexagon.points, axis=1)[:, None]
        np.testing.assert_allclose(nrm, radial, atol=1e-12)

    def test_circulo_quase_radial(self, circle100):
        nrm = normals(circle100)
        radial = circle100.points / np.linalg.norm(circle100.points, axis=1)[:, None]
        angle = np.degrees(np.arccos(np.clip(np.sum(nrm * radial, axis=1), -1, 1)))
        assert angle.max() < 2.0

    def test_normais_sao_unitarias(self, blob100):
        np.testing.assert_allclose(np.linalg.norm(normals(blob100), axis=1), 1.0)

    def test_reversao_nega_normal_do_percurso(self, blob100):
        r = blob100.reversed()
        mapped = (-np.arange(blob100.n_points)) % blob100.n_points
        left = normals(blob100, outward=False)
        np.testing.assert_allclose(normals(r, outward=False), -left[mapped], atol=1e-12)
        # a normal externa não depende do sentido
        np.testing.assert_allclose(normals(r), normals(blob100)[mapped], atol=1e-12)


class TestBoundaryDistance:
    def test_exemplos_do_quadrado(self, unit_square):
        c = resample(unit_square, 8)
        assert boundary_distance(c, 3, 3) == 0.0
        assert boundary_distance(c, 0, 4) == pytest.approx(2.0)
        assert boundary_distance(c, 0, 7) == pytest.approx(0.5)

    def test_simetrica_e_desigualdade_triangular(self, blob100):
        rng = np.random.default_rng(1)
        for i, j, k in rng.integers(0, blob100.n_points, size=(50, 3)):
            dij = boundary_distance(blob100, i, j)
            assert dij == pytest.approx(boundary_distance(blob100, j, i))
            assert dij <= blob100.length / 2 + 1e-9
            assert dij <= boundary_distance(blob100, i, k) + boundary_distance(blob100, k, j) + 1e-9

    def test_matriz_bate_com_pares(self, blob100):
        d = boundary_distances(blob100, np.array([0, 17, 60]))
        assert d.shape == (100, 3)
        assert d[40, 1] == pytest.approx(boundary_distance(blob100, 40, 17))

    def test_indice_fora(self, unit_square):
        with pytest.raises(InvalidArgumentError):
            boundary_distance(unit_square, 0, 4)


class TestCircleIntersection:
    def test_exemplos(self):
        assert circle_intersection_offset(2.0, math.sqrt(2)) == pytest.approx(1.0)
        assert circle_intersection_offset(2.0, 1.0) == 0.0
        assert circle_intersection_offset(1.0, 0.501) == pytest.approx(math.sqrt(0.501 ** 2 - 0.25))

    def test_crescente_em_r(self):
        values = [circle_intersection_offset(2.0, r) for r in (1.0, 1.1, 1.5, 3.0)]
        assert values == sorted(values)
        assert len(set(values)) == len(values)

    def test_sem_intersecao(self):
        with pytest.raises(NoIntersectionError):
            circle_intersection_offset(2.0, 0.99)
        with pytest.raises(InvalidArgumentError):
            circle_intersection_offset(0.0, 1.0)

    def test_raio_para_deslocamento(self):
        r = radius_for_offset(3.0, 0.03)
        assert circle_intersection_offset(3.0, r) == pytest.approx(0.03)


def test_hausdorff_dos_proprios_vertices(blob100):
    assert hausdorff_to_polyline(blob100.points, blob100) == pytest.approx(0.0, abs=1e-12)


def test_hausdorff_ponto_externo(unit_square):
    assert hausdorff_to_polyline(np.array([[0.5, -2.0]]), unit_square) == pytest.approx(2.0)
