from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Tuple
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist


# ============ ENUMS ============
class MethodEnum(str, Enum):
    VO = "Vo"
    V = "V"
    AI = "AI"
    K = "K"
    SK = "SK"
    GT = "GT"


DETECTION_METHODS: Tuple[MethodEnum, ...] = (
    MethodEnum.VO,
    MethodEnum.V,
    MethodEnum.AI,
    MethodEnum.K,
    MethodEnum.SK,
)


class SideRuleEnum(str, Enum):
    OUTWARD = "outward"
    INWARD = "inward"
    ALTERNATING = "alternating"


class SharpnessNormalizationEnum(str, Enum):
    MEAN = "mean"
    RANGE = "range"


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


# ============ GEOMETRIA ============
class Contour(BaseModel):
    """
    Curva plana fechada como polilinha ordenada.

    O construtor mantém a ordem recebida; `from_points` normaliza para
    sentido anti-horário preservando o primeiro ponto.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray = Field(description="Coordenadas (n, 2) em unidades da forma")

    @field_validator("points", mode="before")
    @classmethod
    def _validar_pontos(cls, value) -> np.ndarray:
        pts = np.array(value, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"esperado array (n, 2), recebido {pts.shape}")
        if len(pts) < 3:
            raise ValueError(f"contorno precisa de pelo menos 3 pontos, recebeu {len(pts)}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordenadas não finitas no contorno")
        steps = np.roll(pts, -1, axis=0) - pts
        repeated = np.flatnonzero(np.hypot(steps[:, 0], steps[:, 1]) == 0)
        if repeated.size:
            raise ValueError(f"pontos consecutivos idênticos no índice {int(repeated[0])}")
        return _readonly(pts)

    @classmethod
    def from_points(cls, points, normalize: bool = True) -> "Contour":
        contour = cls(points=points)
        if normalize and not contour.ccw:
            return contour.reversed()
        return contour

    def reversed(self) -> "Contour":
        """Inverte o sentido de percurso mantendo o ponto 0 no lugar"""
        return Contour(points=np.roll(self.points[::-1], 1, axis=0))

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def closed(self) -> bool:
        return True

    @cached_property
    def edges(self) -> np.ndarray:
        """edges[i] = p[i+1] - p[i], incluindo a aresta de fechamento"""
        return _readonly(np.roll(self.points, -1, axis=0) - self.points)

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        return _readonly(np.hypot(self.edges[:, 0], self.edges[:, 1]))

    @cached_property
    def length(self) -> float:
        return float(self.edge_lengths.sum())

    @cached_property
    def arc_positions(self) -> np.ndarray:
        s = np.zeros(self.n_points)
        s[1:] = np.cumsum(self.edge_lengths[:-1])
        return _readonly(s)

    @cached_property
    def arc_elements(self) -> np.ndarray:
        """ds_j = média das duas arestas adjacentes ao ponto j"""
        return _readonly(0.5 * (np.roll(self.edge_lengths, 1) + self.edge_lengths))

    @cached_property
    def signed_area(self) -> float:
        x, y = self.points[:, 0], self.points[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @property
    def ccw(self) -> bool:
        return self.signed_area > 0

    @cached_property
    def diameter(self) -> float:
        try:
            hull = self.points[ConvexHull(self.points).vertices]
        except Exception:
            hull = self.points
        return float(pdist(hull).max())


class ScalarSeries(BaseModel):
    """Um valor real por ponto do contorno"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    contour_size: int = Field(ge=3)

    @field_validator("values", mode="before")
    @classmethod
    def _validar_valores(cls, value) -> np.ndarray:
        values = np.array(value, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValueError("série contém valores não finitos")
        return _readonly(values)

    @model_validator(mode="after")
    def _validar_tamanho(self):
        if len(self.values) != self.contour_size:
            raise ValueError(
                f"série com {len(self.values)} valores para contorno de {self.contour_size} pontos"
            )
        return self

    @classmethod
    def from_values(cls, values) -> "ScalarSeries":
        values = np.asarray(values, dtype=np.float64)
        return cls(values=values, contour_size=len(values))

    def __len__(self) -> int:
        return self.contour_size


class IPSet(BaseModel):
    """Índices de Interesting Points detectados por um método num contorno"""
    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...] = ()
    method: MethodEnum
    contour_size: int = Field(ge=3)

    @model_validator(mode="after")
    def _validar_indices(self):
        idx = self.indices
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("índices precisam ser estritamente crescentes")
        if idx and (idx[0] < 0 or idx[-1] >= self.contour_size):
            raise ValueError(f"índice fora do contorno de {self.contour_size} pontos")
        return self

    @classmethod
    def from_indices(cls, indices, method: MethodEnum, contour_size: int) -> "IPSet":
        unique = sorted({int(i) for i in np.asarray(indices, dtype=np.int64).reshape(-1)})
        return cls(indices=tuple(unique), method=method, contour_size=contour_size)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.indices)


class GlobalQuantities(BaseModel):
    """φ, φ̇, A e B avaliados em todos os pontos do contorno"""
    model_config = ConfigDict(frozen=True)

    phi: ScalarSeries
    phi_dot: ScalarSeries
    A: ScalarSeries
    B: ScalarSeries

    @model_validator(mode="after")
    def _mesmo_tamanho(self):
        sizes = {s.contour_size for s in (self.phi, self.phi_dot, self.A, self.B)}
        if len(sizes) != 1:
            raise ValueError("séries globais com tamanhos diferentes")
        return self


class CurvatureAtExtrema(BaseModel):
    """Curvatura global κ estimada nos extremos de φ"""
    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...]
    values: Tuple[float, ...]

    @model_validator(mode="after")
    def _pareados(self):
        if len(self.indices) != len(self.values):
            raise ValueError("índices e valores de κ desalinhados")
        return self

    def as_dict(self) -> Dict[int, float]:
        return dict(zip(self.indices, self.values))


# ============ CONFIGURAÇÕES DE MÉTODO ============
class NoisingConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    perturbation_ratio: float = Field(
        default=0.01, ge=0.0, lt=0.5, description="Deslocamento / comprimento da aresta"
    )
    steps: int = Field(default=1, ge=1)
    side_rule: SideRuleEnum = Field(default=SideRuleEnum.OUTWARD)


class WindowConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_ratio: float = Field(default=0.017, gt=0.0, lt=0.5)
    sharpness_threshold: float = Field(default=0.15, ge=0.0)
    sharpness_normalization: SharpnessNormalizationEnum = Field(
        default=SharpnessNormalizationEnum.MEAN
    )
    tie_tolerance: float = Field(default=1e-9, ge=0.0)


class SmoothingSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    step_factor: float = Field(default=0.25, gt=0.0, le=0.5)
    num_steps: Optional[int] = Field(
        default=None, ge=0, description="None = derivado do número de pontos"
    )
    steps_per_point: float = Field(default=0.1, gt=0.0)

    def steps_for(self, n_points: int) -> int:
        if self.num_steps is not None:
            return self.num_steps
        return max(1, int(np.floor(self.steps_per_point * n_points + 0.5)))


class GroundTruth(BaseModel):
    model_config = ConfigDict(frozen=True)

    indices: IPSet
    cumulative: ScalarSeries

    @model_validator(mode="after")
    def _mesmo_contorno(self):
        if self.indices.contour_size != self.cumulative.contour_size:
            raise ValueError("GT e curvatura acumulada em contornos diferentes")
        return self


# ============ AVALIAÇÃO ============
class DensityProfile(BaseModel):
    """Massa de probabilidade normalizada por ponto do contorno"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mass: np.ndarray

    @field_validator("mass", mode="before")
    @classmethod
    def _validar_massa(cls, value) -> np.ndarray:
        mass = np.array(value, dtype=np.float64).reshape(-1)
        if mass.size == 0 or not np.all(np.isfinite(mass)):
            raise ValueError("densidade vazia ou não finita")
        if np.any(mass <= 0):
            raise ValueError("densidade precisa ser estritamente positiva")
        if abs(float(mass.sum()) - 1.0) > 1e-9:
            raise ValueError(f"massa total {mass.sum()!r} diferente de 1")
        return _readonly(mass)

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def __len__(self) -> int:
        return len(self.mass)


class PRCurve(BaseModel):
    """Precisão por posição de recall m = 1..|GT|"""
    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _nao_crescente(self):
        if any(b > a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("curva PR precisa ser não crescente")
        return self

    def __len__(self) -> int:
        return len(self.values)


class PRRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    class_name: str = Field(min_length=1)
    shape_name: str = Field(min_length=1)
    method: MethodEnum
    points: int = Field(ge=3)
    curve: PRCurve


# ============ COBERTURA ============
class CoverageGrid(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    cell_size: float = Field(gt=0.0)
    origin: Tuple[float, float]
    counts: np.ndarray = Field(description="Contagens (linhas = y, colunas = x)")

    @field_validator("counts", mode="before")
    @classmethod
    def _validar_contagens(cls, value) -> np.ndarray:
        counts = np.array(value, dtype=np.int64)
        if counts.ndim != 2:
            raise ValueError("grade de cobertura precisa ser 2D")
        if np.any(counts < 0):
            raise ValueError("contagens negativas na grade")
        return _readonly(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def cell_of(self, points: np.ndarray) -> np.ndarray:
        """Índices (linha, coluna) das células que contêm os pontos"""
        pts = np.atleast_2d(points)
        col = np.floor((pts[:, 0] - self.origin[0]) / self.cell_size).astype(np.int64)
        row = np.floor((pts[:, 1] - self.origin[1]) / self.cell_size).astype(np.int64)
        return np.stack([row, col], axis=1)


class CoverageReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank_correlation: float
    gt_above_median_fraction: float = Field(ge=0.0, le=1.0)
    gt_count: int = Field(ge=0)
    noising_dimension: Optional[float] = None
    smoothing_dimension: Optional[float] = None

    @property
    def hypothesis_holds(self) -> bool:
        return self.rank_correlation > 0 and self.gt_above_median_fraction > 0.5


# ============ DATASET E EXPERIMENTO ============
class ShapeRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    class_name: str = Field(min_length=1)
    shape_name: str = Field(min_length=1)
    contour: Contour
    provenance: Optional[Path] = None

    @property
    def key(self) -> str:
        return f"{self.class_name}/{self.shape_name}"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    dataset_root: Path
    out_dir: Path = Path("results")
    base_points: int = Field(default=100, ge=3)
    noise_variance: float = Field(default=2.0, ge=0.0)
    seed: int = 0
    noising_steps: int = Field(default=4, ge=1)
    perturbation_ratio: float = Field(default=0.01, ge=0.0, lt=0.5)
    side_rule: SideRuleEnum = SideRuleEnum.OUTWARD
    window_ratio: float = Field(default=0.017, gt=0.0, lt=0.5)
    sharpness_threshold: float = Field(default=0.15, ge=0.0)
    sharpness_normalization: SharpnessNormalizationEnum = SharpnessNormalizationEnum.MEAN
    tie_tolerance: float = Field(default=1e-9, ge=0.0)
    ai_radius: float = Field(default=15.0, gt=0.0)
    ai_pixel_size: float = Field(default=1.0, gt=0.0)
    smoothing_step_factor: float = Field(default=0.25, gt=0.0, le=0.5)
    smoothing_steps_per_point: float = Field(default=0.1, gt=0.0)
    methods: Tuple[MethodEnum, ...] = DETECTION_METHODS
    jobs: int = Field(default=1, ge=1)
    plots: bool = True

    @field_validator("methods")
    @classmethod
    def _sem_gt(cls, value: Tuple[MethodEnum, ...]) -> Tuple[MethodEnum, ...]:
        if MethodEnum.GT in value:
            raise ValueError("GT não é um detector")
        if not value:
            raise ValueError("pelo menos um método é necessário")
        # ordem canônica, sem repetição
        return tuple(m for m in DETECTION_METHODS if m in value)

    @property
    def noising(self) -> NoisingConfig:
        return NoisingConfig(
            perturbation_ratio=self.perturbation_ratio,
            steps=self.noising_steps,
            side_rule=self.side_rule,
        )

    @property
    def window(self) -> WindowConfig:
        return WindowConfig(
            window_ratio=self.window_ratio,
            sharpness_threshold=self.sharpness_threshold,
            sharpness_normalization=self.sharpness_normalization,
            tie_tolerance=self.tie_tolerance,
        )

    @property
    def smoothing(self) -> SmoothingSchedule:
        return SmoothingSchedule(
            step_factor=self.smoothing_step_factor,
            steps_per_point=self.smoothing_steps_per_point,
        )


class ShapeResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    class_name: str
    shape_name: str
    gt_count: int = 0
    records: List[PRRecord] = Field(default_factory=list)
    series: Dict[str, List[float]] = Field(default_factory=dict)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class ReproductionSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    shapes: int = Field(ge=0)
    improved_with_noising: int = Field(ge=0, description="Formas em que Vo melhora do nível mais grosso ao mais fino")
    median_improved: bool = Field(description="Mediana de Vo no nível mais fino >= mediana no mais grosso")
    beats_baselines: int = Field(ge=0, description="Formas em que Vo >= AI e K no nível mais fino")
    verdict: str = Field(description="pass, report ou fail")
