"""
Entrada e saída de contornos e resultados.

- Contornos em CSV "x,y" (formato canônico, ida e volta bit a bit)
- Silhuetas binárias em PGM (P5), rastreadas por vizinhança de Moore
- Dataset em `<raiz>/<classe>/<forma>.(csv|pgm)`
- Resultados: CSV por forma e método, médias por classe, SVGs e manifest.json
"""
import csv
import io
import json
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from PIL import Image
from scipy import ndimage

from core.exceptions import ContourParseError, InvalidArgumentError, TraceError
from models.schemas import Contour, IPSet, MethodEnum, PRCurve, PRRecord, ShapeRecord, ShapeResult
from services.evaluation import average_pr
from services.plots import plot_class_pr, plot_descriptors
from utils.helpers import atomic_write_text, format_float

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RESULT_COLUMNS = ("shape", "method", "points", "recall_pos", "precision")
CLASS_COLUMNS = ("class", "method", "points", "recall_pos", "precision")
CONTOUR_SUFFIXES = (".csv", ".pgm")
PGM_MAGIC = b"P5"
GRAY_THRESHOLD = 128

# Vizinhos de Moore em sentido horário na tela, começando pelo norte (linha, coluna)
MOORE_OFFSETS = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))
WEST = 6


# ============ CONTORNOS EM CSV ============
def _parse_row(line: str, lineno: int) -> Tuple[float, float]:
    fields = [f.strip() for f in line.split(",")]
    if len(fields) != 2:
        raise ContourParseError(f"esperados 2 campos, encontrados {len(fields)}", lineno)
    try:
        x, y = float(fields[0]), float(fields[1])
    except ValueError:
        raise ContourParseError(f"campo não numérico: {line.strip()!r}", lineno)
    if not (np.isfinite(x) and np.isfinite(y)):
        raise ContourParseError("coordenada não finita", lineno)
    return x, y


def parse_contour_text(text: str) -> Contour:
    rows: List[Tuple[float, float]] = []
    linenos: List[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if not rows and line.replace(" ", "").lower() == "x,y":
            continue
        point = _parse_row(line, lineno)
        if rows and point == rows[-1]:
            raise ContourParseError("ponto repetido em sequência", lineno)
        rows.append(point)
        linenos.append(lineno)

    if len(rows) < 3:
        raise ContourParseError(f"contorno precisa de pelo menos 3 pontos, encontrados {len(rows)}",
                                linenos[-1] if linenos else None)
    if rows[0] == rows[-1]:
        raise ContourParseError("último ponto repete o primeiro (contorno já é fechado)", linenos[-1])
    return Contour.from_points(np.array(rows, dtype=np.float64))


def load_contour_csv(path: PathLike) -> Contour:
    """Lê um contorno "x,y" por linha, cabeçalho opcional, e normaliza para anti-horário"""
    return parse_contour_text(Path(path).read_text(encoding="utf-8"))


def contour_to_csv(c: Contour) -> str:
    lines = ["x,y"]
    lines.extend(f"{format_float(x)},{format_float(y)}" for x, y in c.points)
    return "\n".join(lines) + "\n"


def write_contour_csv(c: Contour, path: PathLike) -> Path:
    return atomic_write_text(path, contour_to_csv(c))


# ============ ÍNDICES E SÉRIES ============
def write_indices(ips: IPSet, path: PathLike) -> Path:
    lines = ["index"] + [str(i) for i in ips.indices]
    return atomic_write_text(path, "\n".join(lines) + "\n")


def load_indices(path: PathLike, method: MethodEnum, contour_size: int) -> IPSet:
    """Lê uma coluna de índices 0-based, cabeçalho "index" opcional"""
    values = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = line.strip()
        if not text or (not values and text.lower() == "index"):
            continue
        try:
            values.append(int(text))
        except ValueError:
            raise ContourParseError(f"índice não inteiro: {text!r}", lineno)
    try:
        return IPSet.from_indices(values, method, contour_size)
    except ValueError as e:
        raise InvalidArgumentError(str(e)) from e


def write_series(values: Sequence[float], path: PathLike, column: str = "value") -> Path:
    lines = [f"index,{column}"]
    lines.extend(f"{i},{format_float(v)}" for i, v in enumerate(values))
    return atomic_write_text(path, "\n".join(lines) + "\n")


# ============ SILHUETAS BINÁRIAS ============
def read_binary_image(path: PathLike) -> np.ndarray:
    """PGM binário de 8 bits -> máscara booleana (True = frente, cinza >= 50%)"""
    path = Path(path)
    with open(path, "rb") as f:
        magic = f.read(2)
    if magic != PGM_MAGIC:
        raise TraceError(f"{path.name}: formato não suportado (esperado PGM binário P5)")
    with Image.open(path) as img:
        if img.mode not in ("L", "1"):
            raise TraceError(f"{path.name}: imagem não é de 8 bits em tons de cinza ({img.mode})")
        gray = np.asarray(img.convert("L"))
    return gray >= GRAY_THRESHOLD


def moore_trace(mask: np.ndarray) -> List[Tuple[int, int]]:
    """
    Borda externa do único componente 8-conexo, em (linha, coluna).

    Começa no primeiro pixel de frente em ordem de varredura, com o vizinho a
    oeste como retorno, e para quando o primeiro movimento se repete
    (critério de Jacob: reentrar no início pelo mesmo caminho).
    """
    padded = np.pad(np.asarray(mask, dtype=bool), 1, constant_values=False)
    _, components = ndimage.label(padded, structure=np.ones((3, 3), dtype=bool))
    if components != 1:
        raise TraceError(f"esperado 1 componente de frente, encontrados {components}")

    start = tuple(int(v) for v in np.argwhere(padded)[0])
    current, back_dir = start, WEST
    first_move: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None
    boundary: List[Tuple[int, int]] = []

    for _ in range(8 * padded.size):
        step = None
        for k in range(1, 9):
            d = (back_dir + k) % 8
            candidate = (current[0] + MOORE_OFFSETS[d][0], current[1] + MOORE_OFFSETS[d][1])
            if padded[candidate]:
                prev = MOORE_OFFSETS[(d - 1) % 8]
                back = (current[0] + prev[0] - candidate[0], current[1] + prev[1] - candidate[1])
                step = (candidate, MOORE_OFFSETS.index(back))
                break
        if step is None:
            # pixel isolado
            return [(start[0] - 1, start[1] - 1)]

        move = (current, step[0])
        if first_move is None:
            first_move = move
        elif move == first_move:
            break
        boundary.append((current[0] - 1, current[1] - 1))
        current, back_dir = step
    else:
        raise TraceError("rastreamento não fechou o contorno")
    return boundary


def trace_binary_image(path: PathLike) -> Contour:
    """Contorno externo da silhueta, em coordenadas com y para cima, anti-horário"""
    mask = read_binary_image(path)
    pixels = moore_trace(mask)
    if len(set(pixels)) < 3:
        raise TraceError(f"{Path(path).name}: contorno degenerado com {len(set(pixels))} pixel(s)")
    rows = np.array([p[0] for p in pixels], dtype=np.float64)
    cols = np.array([p[1] for p in pixels], dtype=np.float64)
    points = np.column_stack([cols, (mask.shape[0] - 1) - rows])
    return Contour.from_points(points)


def write_binary_image(mask: np.ndarray, path: PathLike) -> Path:
    """Grava máscara booleana como PGM binário (frente = 255)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8)).save(path, format="PPM")
    return path


# ============ DATASET ============
def load_shape(path: PathLike, class_name: str) -> ShapeRecord:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        contour = load_contour_csv(path)
    elif path.suffix.lower() == ".pgm":
        contour = trace_binary_image(path)
    else:
        raise InvalidArgumentError(f"extensão não suportada: {path.suffix}")
    return ShapeRecord(class_name=class_name, shape_name=path.stem, contour=contour, provenance=path)


def iter_dataset(root: PathLike) -> Iterable[Tuple[str, Path]]:
    """(classe, arquivo) em ordem alfabética de classe e de forma"""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset não encontrado: {root}")
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for shape_path in sorted(class_dir.iterdir()):
            if shape_path.is_file() and shape_path.suffix.lower() in CONTOUR_SUFFIXES:
                yield class_dir.name, shape_path


def load_dataset(root: PathLike) -> List[ShapeRecord]:
    records = []
    for class_name, path in iter_dataset(root):
        records.append(load_shape(path, class_name))
    logger.info(f"✅ {len(records)} formas carregadas de {root}")
    return records


def write_dataset(records: Iterable[ShapeRecord], root: PathLike) -> List[Path]:
    root = Path(root)
    return [
        write_contour_csv(r.contour, root / r.class_name / f"{r.shape_name}.csv")
        for r in records
    ]


# ============ RESULTADOS ============
def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def pr_rows(record: PRRecord, label: str) -> List[Tuple]:
    return [
        (label, record.method.value, record.points, m, format_float(v))
        for m, v in enumerate(record.curve.values, start=1)
    ]


def result_path(out_dir: Path, record: PRRecord) -> Path:
    return out_dir / record.class_name / record.shape_name / f"{record.method.value}_{record.points}.csv"


def write_shape_results(result: ShapeResult, out_dir: PathLike, plots: bool = True) -> List[Path]:
    """Um CSV por (método, pontos) da forma; gravações atômicas"""
    out_dir = Path(out_dir)
    written = []
    for record in result.records:
        text = _csv_text(RESULT_COLUMNS, pr_rows(record, record.shape_name))
        written.append(atomic_write_text(result_path(out_dir, record), text))
    if plots and result.series:
        path = out_dir / result.class_name / result.shape_name / "descriptors.svg"
        written.append(plot_descriptors(f"{result.class_name}/{result.shape_name}", result.series, path))
    return written


def class_averages(results: Sequence[ShapeResult]) -> Dict[str, Dict[Tuple[MethodEnum, int], PRCurve]]:
    grouped: Dict[str, Dict[Tuple[MethodEnum, int], List[PRCurve]]] = defaultdict(lambda: defaultdict(list))
    for result in results:
        for record in result.records:
            grouped[record.class_name][(record.method, record.points)].append(record.curve)
    return {
        class_name: {key: average_pr(curves) for key, curves in by_key.items()}
        for class_name, by_key in grouped.items()
    }


def write_class_averages(results: Sequence[ShapeResult], out_dir: PathLike, plots: bool = True) -> List[Path]:
    out_dir = Path(out_dir)
    written = []
    for class_name, averages in sorted(class_averages(results).items()):
        rows = []
        for (method, points), curve in sorted(averages.items(), key=lambda kv: (kv[0][0].value, kv[0][1])):
            rows.extend(
                (class_name, method.value, points, m, format_float(v))
                for m, v in enumerate(curve.values, start=1)
            )
        written.append(atomic_write_text(out_dir / class_name / "average.csv", _csv_text(CLASS_COLUMNS, rows)))
        if plots:
            written.append(plot_class_pr(class_name, averages, out_dir / class_name / "average_pr.svg"))
    return written


def write_manifest(files: Iterable[Path], out_dir: PathLike) -> Path:
    out_dir = Path(out_dir)
    relative = sorted({Path(f).resolve().relative_to(out_dir.resolve()).as_posix() for f in files})
    return atomic_write_text(out_dir / "manifest.json", json.dumps({"files": relative}, indent=2) + "\n")


def write_results(
    results: Sequence[ShapeResult],
    out_dir: PathLike,
    plots: bool = True,
) -> List[Path]:
    """Grava os resultados de todas as formas e devolve o manifesto de arquivos"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    ok_results = [r for r in results if r.ok]
    files: List[Path] = []
    for result in ok_results:
        files.extend(write_shape_results(result, out_dir, plots))
    files.extend(write_class_averages(ok_results, out_dir, plots))
    write_manifest(files, out_dir)
    logger.info(f"✅ {len(files)} arquivos de resultado em {out_dir}")
    return sorted(files)
