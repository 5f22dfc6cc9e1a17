from pydantic.fields import FieldInfo
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict
from typing import Dict, Any, Optional, Tuple, Type
import yaml
import os
from pathlib import Path


def load_yaml_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """Carrega configurações do arquivo YAML"""
    config_path = path or Path(os.environ.get("VERTEXNOISE_CONFIG", "config.yaml"))
    if config_path.exists():
        with open(config_path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    return {}


# Caminho pontuado no YAML -> nome do campo em Settings
YAML_MAPPING = {
    "app.debug": "DEBUG",
    "app.log_level": "LOG_LEVEL",
    "app.jobs": "JOBS",
    "dataset.root": "DATASET_ROOT",
    "dataset.out_dir": "OUT_DIR",
    "experiment.base_points": "BASE_POINTS",
    "experiment.noise_variance": "NOISE_VARIANCE",
    "experiment.seed": "SEED",
    "noising.steps": "NOISING_STEPS",
    "noising.perturbation_ratio": "PERTURBATION_RATIO",
    "noising.side_rule": "SIDE_RULE",
    "detection.window_ratio": "WINDOW_RATIO",
    "detection.sharpness_threshold": "SHARPNESS_THRESHOLD",
    "detection.sharpness_normalization": "SHARPNESS_NORMALIZATION",
    "detection.tie_tolerance": "TIE_TOLERANCE",
    "descriptors.ai_radius": "AI_RADIUS",
    "descriptors.ai_pixel_size": "AI_PIXEL_SIZE",
    "smoothing.step_factor": "SMOOTHING_STEP_FACTOR",
    "smoothing.steps_per_point": "SMOOTHING_STEPS_PER_POINT",
    "coverage.cell_size": "COVERAGE_CELL_SIZE",
}


def _get_nested_value(data: Dict[str, Any], path: str) -> Any:
    """Obtém valor aninhado usando notação de ponto"""
    current = data
    for key in path.split("."):
        if isinstance(current, dict) and key in current:
            current = current[key]
        else:
            return None
    return current


class YamlConfigSource(PydanticBaseSettingsSource):
    """Fonte de menor prioridade: config.yaml achatado pelo YAML_MAPPING"""

    def __init__(self, settings_cls: Type[BaseSettings], path: Optional[Path] = None):
        super().__init__(settings_cls)
        config = load_yaml_config(path)
        self._values = {
            field: value
            for yaml_path, field in YAML_MAPPING.items()
            if (value := _get_nested_value(config, yaml_path)) is not None
        }

    def get_field_value(self, field: FieldInfo, field_name: str) -> Tuple[Any, str, bool]:
        return self._values.get(field_name), field_name, False

    def __call__(self) -> Dict[str, Any]:
        return dict(self._values)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    # App
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    JOBS: int = 1

    # Dataset
    DATASET_ROOT: Optional[Path] = None
    OUT_DIR: Path = Path("results")

    # Experimento
    BASE_POINTS: int = 100
    NOISE_VARIANCE: float = 2.0
    SEED: int = 0

    # Noising
    NOISING_STEPS: int = 4
    PERTURBATION_RATIO: float = 0.01
    SIDE_RULE: str = "outward"

    # Detecção
    WINDOW_RATIO: float = 0.017
    SHARPNESS_THRESHOLD: float = 0.15
    SHARPNESS_NORMALIZATION: str = "mean"
    TIE_TOLERANCE: float = 1e-9

    # Descritores
    AI_RADIUS: float = 15.0
    AI_PIXEL_SIZE: float = 1.0

    # Suavização
    SMOOTHING_STEP_FACTOR: float = 0.25
    SMOOTHING_STEPS_PER_POINT: float = 0.1

    # Cobertura
    COVERAGE_CELL_SIZE: float = 2.0

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # argumentos > ambiente > .env > config.yaml > padrões
        return init_settings, env_settings, dotenv_settings, YamlConfigSource(settings_cls), file_secret_settings

    @property
    def log_level(self) -> str:
        return "DEBUG" if self.DEBUG else self.LOG_LEVEL.upper()


settings = Settings()
