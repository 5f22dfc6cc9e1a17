"""Hierarquia de erros do vertexnoise."""
from typing import Optional


class VertexNoiseError(Exception):
    """Erro base de todas as operações da biblioteca"""


class InvalidArgumentError(VertexNoiseError, ValueError):
    """Argumento fora do domínio da operação (índice, contagem, janela...)"""


class NoIntersectionError(InvalidArgumentError):
    """Círculos de raio igual não se intersectam (r < d/2)"""


class DegenerateDescriptorError(VertexNoiseError):
    """Descritor indefinido no ponto pedido (ex.: |A| ~ 0, polígono de área nula)"""


class DegenerateMethodError(VertexNoiseError):
    """Método não produziu nenhum IP; densidade indefinida"""


class ContourParseError(VertexNoiseError, ValueError):
    """Arquivo de contorno inválido"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"linha {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class TraceError(VertexNoiseError):
    """Imagem binária sem um único componente rastreável"""
