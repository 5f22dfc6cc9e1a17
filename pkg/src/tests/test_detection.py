import numpy as np
import pytest

from core.exceptions import InvalidArgumentError
from models.schemas import MethodEnum, NoisingConfig, ScalarSeries, SmoothingSchedule, WindowConfig
from services import synthetic
from services.detection import (
    DETECTORS,
    detect,
    detect_AI,
    detect_K,
    detect_SK,
    detect_V,
    detect_Vo,
    sliding_extrema,
    window_pairs,
)
from services.descriptors import default_heron_offset
from services.noising import incremental_noising
from services.smoothing import cumulative_curvature


class TestWindow:
    def test_meia_janela_em_pontos(self, circle100):
        # 0.1025 · λ / 2 cobre 5.125 espaçamentos
        pairs = window_pairs(circle100, WindowConfig(window_ratio=0.1025))
        assert set(pairs.tolist()) == {5}

    def test_minimo_de_um_par(self, circle100):
        assert set(window_pairs(circle100, WindowConfig(window_ratio=0.017)).tolist()) == {1}

    def test_mesma_vizinhanca_geometrica_com_mais_pontos(self):
        w = WindowConfig(window_ratio=0.1025)
        assert set(window_pairs(synthetic.circle(400), w).tolist()) == {20}

    def test_janela_menor_que_o_espacamento(self, circle100):
        with pytest.raises(InvalidArgumentError):
            window_pairs(circle100, WindowConfig(window_ratio=0.005))


class TestSlidingExtrema:
    def test_cosseno_tem_dois_extremos(self, circle100):
        s = circle100.arc_positions
        series = ScalarSeries.from_values(np.cos(2 * np.pi * s / circle100.length))
        assert sliding_extrema(series, circle100).indices == (0, 50)

    def test_serie_constante(self, circle100):
        series = ScalarSeries.from_values(np.full(100, 3.0))
        assert len(sliding_extrema(series, circle100)) == 0

    def test_serie_nula(self, circle100):
        assert len(sliding_extrema(ScalarSeries.from_values(np.zeros(100)), circle100)) == 0

    def test_empate_dentro_da_janela(self, circle100):
        values = np.zeros(100)
        values[10] = values[11] = 1.0
        found = sliding_extrema(ScalarSeries.from_values(values), circle100)
        assert 10 not in found.indices and 11 not in found.indices

    def test_tamanho_incompativel(self):
        series = ScalarSeries.from_values(np.arange(100.0))
        with pytest.raises(InvalidArgumentError):
            sliding_extrema(series, synthetic.circle(50))

    def test_metodo_propagado(self, circle100):
        s = circle100.arc_positions
        series = ScalarSeries.from_values(np.cos(2 * np.pi * s / circle100.length))
        assert sliding_extrema(series, circle100, method=MethodEnum.K).method == MethodEnum.K


class TestDetectors:
    @pytest.mark.parametrize("n", [100, 400])
    def test_circulo_sem_ips(self, n):
        c = synthetic.circle(n)
        assert len(detect_Vo(c)) == 0
        assert len(detect_K(c)) == 0
        assert len(detect_SK(c)) == 0

    def test_elipse_nos_eixos(self):
        c = synthetic.ellipse(2.0, 1.0, 200)
        assert detect_Vo(c).indices == (0, 50, 100, 150)

    def test_quadrado_nos_cantos(self, square100):
        assert detect_K(square100).indices == (0, 25, 50, 75)
        assert detect_Vo(square100).indices == (0, 25, 50, 75)

    def test_SK_segue_a_razao_da_janela(self, blob100):
        w = WindowConfig(window_ratio=0.1)
        k = default_heron_offset(blob100.n_points, 0.1)
        assert k != default_heron_offset(blob100.n_points)
        series = cumulative_curvature(blob100, SmoothingSchedule(), k)
        assert detect_SK(blob100, w) == sliding_extrema(series, blob100, w, MethodEnum.SK)

    def test_V_subconjunto_de_Vo(self, star100, blob100, ellipse400):
        for c in (star100, blob100, ellipse400):
            assert set(detect_V(c).indices) <= set(detect_Vo(c).indices)

    def test_V_sem_limiar_igual_a_Vo(self, blob100):
        w = WindowConfig(sharpness_threshold=0.0)
        assert detect_V(blob100, w).indices == detect_Vo(blob100, w).indices

    def test_V_vazio_em_elipse_quase_circular(self):
        c = synthetic.ellipse(1.01, 1.0, 200)
        assert len(detect_V(c)) == 0

    def test_V_normalizacao_por_amplitude(self, star100):
        w = WindowConfig(sharpness_normalization="range", sharpness_threshold=0.0)
        assert detect_V(star100, w).indices == detect_Vo(star100).indices

    def test_K_ganha_pontos_com_noising(self, star100):
        (noised,) = incremental_noising(star100, NoisingConfig(steps=4))[-1:]
        assert len(detect_K(noised)) >= len(detect_K(star100))

    def test_estavel_sob_reversao(self, blob100):
        n = blob100.n_points
        reversed_contour = blob100.reversed()
        for detector in (detect_Vo, detect_K):
            forward = set(detector(blob100).indices)
            backward = {(-i) % n for i in detector(reversed_contour).indices}
            assert forward == backward

    def test_deterministico(self, blob100):
        for method, detector in DETECTORS.items():
            assert detector(blob100).indices == detector(blob100).indices
            assert detector(blob100).method == method


class TestDispatch:
    def test_despacha_por_metodo(self, square100):
        assert detect(MethodEnum.K, square100) == detect_K(square100)
        assert detect("Vo", square100) == detect_Vo(square100)

    def test_sk_usa_agenda(self, square100):
        schedule = SmoothingSchedule(num_steps=2)
        assert detect(MethodEnum.SK, square100, schedule=schedule) == detect_SK(square100, schedule=schedule)

    def test_ai_usa_raio(self, square100):
        assert detect(MethodEnum.AI, square100, ai_radius=10.0) == detect_AI(square100, radius=10.0)

    def test_gt_nao_e_detector(self, square100):
        with pytest.raises(InvalidArgumentError):
            detect(MethodEnum.GT, square100)
