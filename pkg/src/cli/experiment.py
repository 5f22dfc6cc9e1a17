"""
Experimento completo sobre um dataset de formas.

Para cada forma: reamostra, calcula o GT, distorce com ruído gaussiano,
aplica o noising incremental e avalia todos os detectores em cada nível
contra a densidade do GT.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.config import settings
from core.exceptions import VertexNoiseError
from models.schemas import (
    ExperimentConfig,
    IPSet,
    MethodEnum,
    PRRecord,
    ReproductionSummary,
    ShapeRecord,
    ShapeResult,
)
from services.dataset_io import iter_dataset, load_shape, write_results
from services.descriptors import (
    area_integral_invariant,
    default_heron_offset,
    heron_curvature,
    var_descriptor,
)
from services.detection import detect
from services.evaluation import density_or_uniform, density_profile, pr_curve
from services.geometry_core import resample
from services.noising import gaussian_distort, incremental_noising
from services.smoothing import GT_POINTS, ground_truth_ips, map_gt_indices
from utils.helpers import shape_seed

logger = logging.getLogger(__name__)

RECALL_HEAD = 3
BASELINES = (MethodEnum.AI, MethodEnum.K)


def config_from_settings(**overrides) -> ExperimentConfig:
    """ExperimentConfig com os valores de settings; argumentos explícitos têm prioridade"""
    values = dict(
        dataset_root=settings.DATASET_ROOT or Path("."),
        out_dir=settings.OUT_DIR,
        base_points=settings.BASE_POINTS,
        noise_variance=settings.NOISE_VARIANCE,
        seed=settings.SEED,
        noising_steps=settings.NOISING_STEPS,
        perturbation_ratio=settings.PERTURBATION_RATIO,
        side_rule=settings.SIDE_RULE,
        window_ratio=settings.WINDOW_RATIO,
        sharpness_threshold=settings.SHARPNESS_THRESHOLD,
        sharpness_normalization=settings.SHARPNESS_NORMALIZATION,
        tie_tolerance=settings.TIE_TOLERANCE,
        ai_radius=settings.AI_RADIUS,
        ai_pixel_size=settings.AI_PIXEL_SIZE,
        smoothing_step_factor=settings.SMOOTHING_STEP_FACTOR,
        smoothing_steps_per_point=settings.SMOOTHING_STEPS_PER_POINT,
        jobs=settings.JOBS,
    )
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _evaluate_shape(record: ShapeRecord, config: ExperimentConfig) -> ShapeResult:
    gt = ground_truth_ips(resample(record.contour, GT_POINTS), config.smoothing, config.window)
    if not len(gt.indices):
        logger.warning(f"⚠️ {record.key}: GT vazio, forma fica fora do PR")
        return ShapeResult(class_name=record.class_name, shape_name=record.shape_name)

    base = resample(record.contour, config.base_points)
    distorted = gaussian_distort(base, config.noise_variance, shape_seed(config.seed, record.key))
    levels = incremental_noising(distorted, config.noising)

    records: List[PRRecord] = []
    for level in levels:
        n = level.n_points
        gt_here = IPSet.from_indices(map_gt_indices(gt, n), MethodEnum.GT, n)
        gt_density = density_profile(gt_here, level)
        for method in config.methods:
            ips = detect(
                method,
                level,
                config.window,
                config.smoothing,
                config.ai_radius,
                config.ai_pixel_size,
            )
            curve = pr_curve(density_or_uniform(ips, level), gt_density, gt_here)
            records.append(
                PRRecord(
                    class_name=record.class_name,
                    shape_name=record.shape_name,
                    method=method,
                    points=n,
                    curve=curve,
                )
            )
            logger.debug(f"{record.key} {method.value}@{n}: {len(ips)} IPs")

    series: Dict[str, List[float]] = {}
    if config.plots:
        finest = levels[-1]
        series = {
            "phi": var_descriptor(finest).values.tolist(),
            "AI": area_integral_invariant(finest, config.ai_radius, config.ai_pixel_size).values.tolist(),
            "K": heron_curvature(
                finest, default_heron_offset(finest.n_points, config.window_ratio)
            ).values.tolist(),
        }

    return ShapeResult(
        class_name=record.class_name,
        shape_name=record.shape_name,
        gt_count=len(gt.indices),
        records=records,
        series=series,
    )


def process_shape(record: ShapeRecord, config: ExperimentConfig) -> ShapeResult:
    """Executa o pipeline numa forma; falhas viram ShapeResult com erro"""
    logger.info(f"🔍 Processando {record.key} ({record.contour.n_points} pontos)")
    try:
        result = _evaluate_shape(record, config)
    except (VertexNoiseError, ValueError, OSError) as e:
        logger.error(f"❌ {record.key}: {e}")
        return ShapeResult(class_name=record.class_name, shape_name=record.shape_name, error=str(e))
    logger.info(f"✅ {record.key}: GT com {result.gt_count} pontos, {len(result.records)} curvas")
    return result


def _load_records(root: Path) -> Tuple[List[ShapeRecord], List[ShapeResult]]:
    records, failures = [], []
    for class_name, path in iter_dataset(root):
        try:
            records.append(load_shape(path, class_name))
        except (VertexNoiseError, ValueError, OSError) as e:
            logger.error(f"❌ {class_name}/{path.name}: {e}")
            failures.append(ShapeResult(class_name=class_name, shape_name=path.stem, error=str(e)))
    return records, failures


def run_shapes(records: Sequence[ShapeRecord], config: ExperimentConfig) -> List[ShapeResult]:
    """Processa as formas em paralelo até config.jobs, preservando a ordem"""
    if config.jobs <= 1 or len(records) <= 1:
        return [process_shape(r, config) for r in records]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        return list(pool.map(process_shape, records, [config] * len(records)))


def _head_score(result: ShapeResult, method: MethodEnum, points: int) -> Optional[float]:
    for record in result.records:
        if record.method == method and record.points == points and len(record.curve):
            return float(np.mean(record.curve.values[:RECALL_HEAD]))
    return None


def reproduction_summary(results: Sequence[ShapeResult]) -> Optional[ReproductionSummary]:
    """
    Compara Vo entre o nível mais grosso e o mais fino, e contra AI e K no mais fino,
    usando a média das posições de recall 1 a 3.
    """
    scored = [r for r in results if r.ok and r.records]
    if not scored:
        return None
    points = sorted({rec.points for r in scored for rec in r.records})
    coarse, fine = points[0], points[-1]

    coarse_scores, fine_scores = [], []
    improved = beats = 0
    for result in scored:
        vo_coarse = _head_score(result, MethodEnum.VO, coarse)
        vo_fine = _head_score(result, MethodEnum.VO, fine)
        if vo_coarse is None or vo_fine is None:
            continue
        coarse_scores.append(vo_coarse)
        fine_scores.append(vo_fine)
        improved += vo_fine >= vo_coarse
        baselines = [_head_score(result, m, fine) for m in BASELINES]
        baselines = [b for b in baselines if b is not None]
        if baselines and all(vo_fine >= b for b in baselines):
            beats += 1

    shapes = len(fine_scores)
    if not shapes:
        return None
    median_improved = bool(np.median(fine_scores) >= np.median(coarse_scores))

    # limiares de 6/9 e 5/9 escalados para o número de formas
    if 9 * beats >= 6 * shapes and median_improved:
        verdict = "pass"
    elif 9 * beats >= 5 * shapes:
        verdict = "report"
    else:
        verdict = "fail"
    return ReproductionSummary(
        shapes=shapes,
        improved_with_noising=improved,
        median_improved=median_improved,
        beats_baselines=beats,
        verdict=verdict,
    )


def cmd_run_experiment(config: ExperimentConfig) -> int:
    """Roda o experimento e grava os resultados; 0 se todas as formas passaram"""
    root = Path(config.dataset_root)
    if not root.is_dir():
        logger.error(f"❌ Dataset não encontrado: {root}")
        return 1

    records, failures = _load_records(root)
    logger.info(f"📂 {len(records)} formas em {root}, métodos {[m.value for m in config.methods]}")

    results = run_shapes(records, config) + failures
    try:
        write_results(results, config.out_dir, plots=config.plots)
    except OSError as e:
        logger.error(f"❌ Falha ao gravar resultados em {config.out_dir}: {e}")
        return 1

    summary = reproduction_summary(results)
    if summary is not None:
        logger.info(
            f"📊 Vo melhora com noising em {summary.improved_with_noising}/{summary.shapes}, "
            f"supera AI e K em {summary.beats_baselines}/{summary.shapes}: {summary.verdict}"
        )

    failed = [r for r in results if not r.ok]
    if failed:
        logger.error(f"❌ {len(failed)} forma(s) com erro")
        return 1
    logger.info("🎉 Experimento concluído")
    return 0
