"""
Иерархия исключений BELE
"""

from typing import Iterable, List, Optional, Tuple


class BeleError(Exception):
    """Базовое исключение пакета"""


class DomainError(BeleError, ValueError):
    """Аргумент вне области определения"""


class SaturationError(DomainError):
    """DMOS не меньше якоря 100·Q, обращение канонической модели невозможно"""


class OrderingError(DomainError):
    """Нарушен порядок узлов кривой преобразования"""


class DimensionError(BeleError, ValueError):
    """Несовпадение размеров или слишком большой радиус ядра"""


class DegenerateInputError(BeleError, ValueError):
    """Вырожденные входные данные (пустая область, постоянный вектор)"""


class RankDeficiencyError(BeleError, ValueError):
    """Матрица плана численно вырождена"""


class ConvergenceError(BeleError, RuntimeError):
    """
    Оптимизатор не сошелся

    Хранит лучшие найденные параметры и невязку.
    """

    def __init__(self, message: str, best_params: Optional[Tuple[float, ...]] = None,
                 residual: Optional[float] = None):
        super().__init__(message)
        self.best_params = best_params
        self.residual = residual


class ManifestError(BeleError, ValueError):
    """Ошибка разбора манифеста с номером строки"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"строка {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingImagesError(BeleError, FileNotFoundError):
    """В манифесте есть ссылки на отсутствующие файлы"""

    def __init__(self, paths: Iterable[str]):
        self.paths: List[str] = [str(p) for p in paths]
        super().__init__("Файлы не найдены: " + ", ".join(self.paths))


class ImageDecodeError(BeleError, ValueError):
    """Изображение не удалось декодировать"""
