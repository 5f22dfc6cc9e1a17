import os

import pytest

from core.config import Settings, YamlConfigSource


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Diretório com config.yaml próprio e sem variáveis herdadas"""
    monkeypatch.chdir(tmp_path)
    config = tmp_path / "config.yaml"
    config.write_text("detection:\n  window_ratio: 0.017\nexperiment:\n  seed: 5\n", encoding="utf-8")
    monkeypatch.setenv("VERTEXNOISE_CONFIG", str(config))
    for name in ("WINDOW_RATIO", "SEED"):
        monkeypatch.delenv(name, raising=False)
    return tmp_path


class TestPrioridade:
    def test_env_file_vence_o_yaml(self, workdir):
        (workdir / ".env").write_text("WINDOW_RATIO=0.02\n", encoding="utf-8")
        loaded = Settings()
        assert loaded.WINDOW_RATIO == 0.02
        assert loaded.SEED == 5

    def test_variavel_de_ambiente_vence_o_env_file(self, workdir, monkeypatch):
        (workdir / ".env").write_text("WINDOW_RATIO=0.02\n", encoding="utf-8")
        monkeypatch.setenv("WINDOW_RATIO", "0.03")
        assert Settings().WINDOW_RATIO == 0.03

    def test_argumento_explicito_vence_tudo(self, workdir, monkeypatch):
        monkeypatch.setenv("SEED", "7")
        assert Settings(SEED=9).SEED == 9

    def test_yaml_nao_vaza_para_o_ambiente(self, workdir):
        Settings()
        assert "SEED" not in os.environ
        assert "WINDOW_RATIO" not in os.environ

    def test_sem_yaml_usa_padroes(self, workdir, monkeypatch):
        monkeypatch.setenv("VERTEXNOISE_CONFIG", str(workdir / "nada.yaml"))
        assert Settings().SEED == 0


class TestYamlConfigSource:
    def test_achata_pelo_mapeamento(self, workdir):
        values = YamlConfigSource(Settings)()
        assert values == {"WINDOW_RATIO": 0.017, "SEED": 5}

    def test_chaves_desconhecidas_ignoradas(self, workdir):
        path = workdir / "outro.yaml"
        path.write_text("experiment:\n  seed: 3\n  cor: azul\nextra: 1\n", encoding="utf-8")
        assert YamlConfigSource(Settings, path)() == {"SEED": 3}
