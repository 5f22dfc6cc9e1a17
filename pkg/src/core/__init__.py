from .config import settings