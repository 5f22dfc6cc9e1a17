"""
Subcomandos que expõem cada etapa em arquivos isolados.

Cada handler recebe o Namespace do argparse e devolve o código de saída.
Saídas vão para --output quando informado, senão para stdout.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from models.schemas import (
    MethodEnum,
    NoisingConfig,
    SmoothingSchedule,
    WindowConfig,
)
from services.coverage import analyze_coverage
from services.dataset_io import (
    contour_to_csv,
    load_contour_csv,
    load_indices,
    trace_binary_image,
    write_dataset,
    write_series,
)
from services.detection import detect
from services.evaluation import density_or_uniform, density_profile, pr_curve
from services.geometry_core import hausdorff_to_polyline, resample
from services.noising import gaussian_distort, incremental_noising
from services.smoothing import GT_POINTS, ground_truth_ips
from services.synthetic import synthetic_suite
from utils.helpers import atomic_write_text, format_float

logger = logging.getLogger(__name__)


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(output, text)
        logger.info(f"✅ Gravado {output}")


def _window(args) -> WindowConfig:
    return WindowConfig(
        window_ratio=args.window_ratio,
        sharpness_threshold=args.sharpness_threshold,
        sharpness_normalization=args.sharpness_normalization,
        tie_tolerance=args.tie_tolerance,
    )


def _schedule(args) -> SmoothingSchedule:
    return SmoothingSchedule(
        step_factor=args.smoothing_step_factor,
        steps_per_point=args.smoothing_steps_per_point,
    )


def _indices_text(indices) -> str:
    return "".join(f"{i}\n" for i in indices)


def _gt_for(contour, args):
    c100 = contour if contour.n_points == GT_POINTS else resample(contour, GT_POINTS)
    return c100, ground_truth_ips(c100, _schedule(args), _window(args))


def cmd_trace(args) -> int:
    _emit(contour_to_csv(trace_binary_image(args.input)), args.output)
    return 0


def cmd_resample(args) -> int:
    _emit(contour_to_csv(resample(load_contour_csv(args.input), args.points)), args.output)
    return 0


def cmd_distort(args) -> int:
    c = load_contour_csv(args.input)
    _emit(contour_to_csv(gaussian_distort(c, args.noise_variance, args.seed)), args.output)
    return 0


def cmd_noise(args) -> int:
    c = load_contour_csv(args.input)
    config = NoisingConfig(
        perturbation_ratio=args.perturbation_ratio,
        steps=args.steps,
        side_rule=args.side_rule,
    )
    levels = incremental_noising(c, config)
    if args.report_hausdorff:
        for step, level in enumerate(levels, start=1):
            distance = hausdorff_to_polyline(level.points, c)
            logger.info(f"passo {step}: {level.n_points} pontos, Hausdorff {distance:.6g} "
                        f"({distance / c.diameter:.3%} do diâmetro)")
    _emit(contour_to_csv(levels[-1]), args.output)
    return 0


def cmd_gt(args) -> int:
    _, gt = _gt_for(load_contour_csv(args.input), args)
    logger.info(f"GT com {len(gt.indices)} pontos")
    _emit(_indices_text(gt.indices.indices), args.output)
    return 0


def cmd_detect(args) -> int:
    c = load_contour_csv(args.input)
    ips = detect(
        MethodEnum(args.method),
        c,
        _window(args),
        _schedule(args),
        args.ai_radius,
        args.ai_pixel_size,
    )
    logger.info(f"{args.method}: {len(ips)} IPs em {c.n_points} pontos")
    _emit(_indices_text(ips.indices), args.output)
    return 0


def cmd_density(args) -> int:
    c = load_contour_csv(args.input)
    ips = load_indices(args.indices, MethodEnum(args.method), c.n_points)
    density = density_or_uniform(ips, c)
    if args.output is None:
        sys.stdout.write("index,mass\n")
        sys.stdout.write("".join(f"{i},{format_float(m)}\n" for i, m in enumerate(density.mass)))
    else:
        write_series(density.mass, args.output, column="mass")
    return 0


def cmd_pr(args) -> int:
    c = load_contour_csv(args.input)
    ips = load_indices(args.indices, MethodEnum(args.method), c.n_points)
    gt = load_indices(args.gt, MethodEnum.GT, c.n_points)
    curve = pr_curve(density_or_uniform(ips, c), density_profile(gt, c), gt)
    lines = ["recall_pos,precision"]
    lines.extend(f"{m},{format_float(v)}" for m, v in enumerate(curve.values, start=1))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_coverage(args) -> int:
    c100, gt = _gt_for(load_contour_csv(args.input), args)
    levels = incremental_noising(
        c100, NoisingConfig(
            perturbation_ratio=args.perturbation_ratio, steps=args.steps, side_rule=args.side_rule
        )
    )
    report = analyze_coverage(c100, gt, levels, _schedule(args), args.cell_size)
    payload = report.model_dump()
    payload["hypothesis_holds"] = report.hypothesis_holds
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.output)
    return 0


def cmd_synth(args) -> int:
    records = synthetic_suite(args.points)
    written = write_dataset(records, args.out_dir)
    logger.info(f"✅ {len(written)} formas sintéticas em {args.out_dir}")
    return 0


STAGES = {
    "trace": cmd_trace,
    "resample": cmd_resample,
    "distort": cmd_distort,
    "noise": cmd_noise,
    "gt": cmd_gt,
    "detect": cmd_detect,
    "density": cmd_density,
    "pr": cmd_pr,
    "coverage": cmd_coverage,
    "synth": cmd_synth,
}
