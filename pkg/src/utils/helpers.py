from pathlib import Path
from typing import Union
import math
import os
import tempfile
import zlib

import numpy as np


def round_half_up(value: float) -> int:
    """Arredonda .5 para cima (o round() do Python arredonda para o par)"""
    return int(math.floor(value + 0.5))


def is_power_of_two(value: int) -> bool:
    return value > 0 and (value & (value - 1)) == 0


def shape_seed(seed: int, key: str) -> np.random.SeedSequence:
    """Semente por forma, derivada do nome e não da posição no dataset"""
    return np.random.SeedSequence([seed, zlib.crc32(key.encode("utf-8"))])


def format_float(value: float) -> str:
    """Representação decimal que volta ao mesmo float bit a bit"""
    return repr(float(value))


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Escreve em arquivo temporário no mesmo diretório e troca de uma vez"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
