#!/usr/bin/env python3
"""
CLI do vertexnoise: experimento completo (`run`) e cada etapa isolada.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Adiciona o diretório src ao path
sys.path.insert(0, str(Path(__file__).parent))

from cli.experiment import cmd_run_experiment, config_from_settings  # noqa: E402
from cli.stages import STAGES  # noqa: E402
from core.config import settings  # noqa: E402
from core.exceptions import VertexNoiseError  # noqa: E402
from models.schemas import DETECTION_METHODS, SharpnessNormalizationEnum, SideRuleEnum  # noqa: E402

logger = logging.getLogger(__name__)

METHOD_CHOICES = [m.value for m in DETECTION_METHODS]


def _detection_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("detecção")
    group.add_argument("--window-ratio", type=float, default=settings.WINDOW_RATIO,
                       help="Largura da janela como fração do comprimento do contorno")
    group.add_argument("--sharpness-threshold", type=float, default=settings.SHARPNESS_THRESHOLD,
                       help="Limiar de variação brusca do método V")
    group.add_argument("--sharpness-normalization", choices=[e.value for e in SharpnessNormalizationEnum],
                       default=settings.SHARPNESS_NORMALIZATION, help="Normalização de φ no método V")
    group.add_argument("--tie-tolerance", type=float, default=settings.TIE_TOLERANCE,
                       help="Diferenças menores que isto × max|série| são empates")
    group.add_argument("--ai-radius", type=float, default=settings.AI_RADIUS,
                       help="Raio do disco do invariante integral de área")
    group.add_argument("--ai-pixel-size", type=float, default=settings.AI_PIXEL_SIZE,
                       help="Lado do pixel da rasterização do AI, em unidades de forma")
    group.add_argument("--smoothing-step-factor", type=float, default=settings.SMOOTHING_STEP_FACTOR,
                       help="Fator de cada passo de suavização")
    group.add_argument("--smoothing-steps-per-point", type=float, default=settings.SMOOTHING_STEPS_PER_POINT,
                       help="Passos de suavização por ponto do contorno")
    return parent


def _noising_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("noising")
    group.add_argument("--steps", type=int, default=settings.NOISING_STEPS,
                       help="Passos de noising incremental")
    group.add_argument("--perturbation-ratio", type=float, default=settings.PERTURBATION_RATIO,
                       help="Deslocamento do ponto novo / comprimento da aresta")
    group.add_argument("--side-rule", choices=[e.value for e in SideRuleEnum], default=settings.SIDE_RULE,
                       help="Lado do deslocamento")
    return parent


def _io_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("input", type=Path, help="Arquivo de entrada")
    parent.add_argument("-o", "--output", type=Path, default=None, help="Arquivo de saída (padrão: stdout)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    formatter = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="vertexnoise",
        description="Localização de vértices com o descritor VAR e noising incremental",
        formatter_class=formatter,
    )
    parser.add_argument("--debug", action="store_true", default=settings.DEBUG, help="Log em nível DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    detection, noising, io = _detection_flags(), _noising_flags(), _io_flags()

    run = sub.add_parser("run", parents=[detection], formatter_class=formatter,
                         help="Experimento completo sobre um dataset")
    run.add_argument("--dataset-root", type=Path, default=settings.DATASET_ROOT,
                     help="Raiz do dataset <raiz>/<classe>/<forma>.(csv|pgm) (env DATASET_ROOT)")
    run.add_argument("--out-dir", type=Path, default=settings.OUT_DIR, help="Diretório de resultados")
    run.add_argument("--base-points", type=int, default=settings.BASE_POINTS,
                     help="Pontos do contorno antes do noising")
    run.add_argument("--noise-variance", type=float, default=settings.NOISE_VARIANCE,
                     help="Variância da distorção gaussiana")
    run.add_argument("--seed", type=int, default=settings.SEED, help="Semente global")
    run.add_argument("--noising-steps", type=int, default=settings.NOISING_STEPS,
                     help="Passos de noising incremental")
    run.add_argument("--perturbation-ratio", type=float, default=settings.PERTURBATION_RATIO,
                     help="Deslocamento do ponto novo / comprimento da aresta")
    run.add_argument("--side-rule", choices=[e.value for e in SideRuleEnum], default=settings.SIDE_RULE,
                     help="Lado do deslocamento")
    run.add_argument("--methods", nargs="+", choices=METHOD_CHOICES, default=METHOD_CHOICES,
                     help="Detectores avaliados")
    run.add_argument("--jobs", type=int, default=settings.JOBS, help="Formas processadas em paralelo")
    run.add_argument("--no-plots", action="store_true", help="Não gerar SVGs")

    sub.add_parser("trace", parents=[io], formatter_class=formatter,
                   help="Rastreia a borda de uma silhueta PGM")

    resample = sub.add_parser("resample", parents=[io], formatter_class=formatter,
                              help="Reamostra por comprimento de arco")
    resample.add_argument("--points", type=int, default=settings.BASE_POINTS, help="Pontos de saída")

    distort = sub.add_parser("distort", parents=[io], formatter_class=formatter,
                             help="Distorção gaussiana ao longo das normais")
    distort.add_argument("--noise-variance", type=float, default=settings.NOISE_VARIANCE, help="Variância")
    distort.add_argument("--seed", type=int, default=settings.SEED, help="Semente")

    noise = sub.add_parser("noise", parents=[io, noising], formatter_class=formatter,
                           help="Noising incremental; grava o último nível")
    noise.add_argument("--report-hausdorff", action="store_true",
                       help="Loga a distância de Hausdorff de cada nível ao original")

    sub.add_parser("gt", parents=[io, detection], formatter_class=formatter,
                   help="Ground truth (índices no contorno de 100 pontos)")

    detect = sub.add_parser("detect", parents=[io, detection], formatter_class=formatter,
                            help="Índices de IP de um método")
    detect.add_argument("--method", choices=METHOD_CHOICES, required=True, help="Detector")

    density = sub.add_parser("density", parents=[io], formatter_class=formatter,
                             help="Densidade por ponto a partir de um arquivo de índices")
    density.add_argument("--indices", type=Path, required=True, help="Arquivo de índices")
    density.add_argument("--method", choices=METHOD_CHOICES + ["GT"], default="GT", help="Método dos índices")

    pr = sub.add_parser("pr", parents=[io], formatter_class=formatter, help="Curva PR de um método contra o GT")
    pr.add_argument("--indices", type=Path, required=True, help="Índices do método")
    pr.add_argument("--gt", type=Path, required=True, help="Índices do GT no mesmo contorno")
    pr.add_argument("--method", choices=METHOD_CHOICES, default="Vo", help="Método dos índices")

    coverage = sub.add_parser("coverage", parents=[io, noising, detection], formatter_class=formatter,
                              help="Relatório de cobertura noising × suavização")
    coverage.add_argument("--cell-size", type=float, default=settings.COVERAGE_CELL_SIZE,
                          help="Lado da célula da grade")

    synth = sub.add_parser("synth", formatter_class=formatter, help="Grava o conjunto de formas sintéticas")
    synth.add_argument("out_dir", type=Path, help="Raiz do dataset gerado")
    synth.add_argument("--points", type=int, default=4000, help="Pontos por forma")

    return parser


def _run(args) -> int:
    if args.dataset_root is None:
        logger.error("❌ Informe --dataset-root ou a variável DATASET_ROOT")
        return 1
    config = config_from_settings(
        dataset_root=args.dataset_root,
        out_dir=args.out_dir,
        base_points=args.base_points,
        noise_variance=args.noise_variance,
        seed=args.seed,
        noising_steps=args.noising_steps,
        perturbation_ratio=args.perturbation_ratio,
        side_rule=args.side_rule,
        window_ratio=args.window_ratio,
        sharpness_threshold=args.sharpness_threshold,
        sharpness_normalization=args.sharpness_normalization,
        tie_tolerance=args.tie_tolerance,
        ai_radius=args.ai_radius,
        ai_pixel_size=args.ai_pixel_size,
        smoothing_step_factor=args.smoothing_step_factor,
        smoothing_steps_per_point=args.smoothing_steps_per_point,
        methods=tuple(args.methods),
        jobs=args.jobs,
        plots=not args.no_plots,
    )
    return cmd_run_experiment(config)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    # Configuração de logging
    logging.basicConfig(
        level=logging.DEBUG if args.debug else settings.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )

    try:
        if args.command == "run":
            return _run(args)
        return STAGES[args.command](args)
    except (VertexNoiseError, ValueError, OSError) as e:
        logger.error(f"❌ {args.command}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
