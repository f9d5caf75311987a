"""
Пакетная оценка наборов данных: манифест, кэш, отчеты
"""

import csv
import hashlib
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from ..calibration.fusion import FusionCoefficients, predict
from ..core.canonical_model import CanonicalParams, ViewerGeometry, canonical_dmos
from ..core.estimator import BELEEstimator
from ..core.exceptions import BeleError, DegenerateInputError, ManifestError, MissingImagesError
from .stats import MetricReport, metric_report

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("ref_path", "dist_path", "distortion", "level", "dmos")
OUTPUT_COLUMNS = ("row_index", "bele_cold", "cpsnr", "xi_eq", "predicted_dmos", "error")
BLUR_LABELS = ("gaussian_blur", "gblur", "blur")
CACHE_ENV = "BELE_CACHE_DIR"
CACHE_FILE = "scores.jsonl"
MIN_GROUP_SIZE = 3


class ManifestEntry(BaseModel):
    """Строка манифеста"""

    row_index: int
    ref_path: Path
    dist_path: Path
    distortion_type: str
    level: Optional[float] = None
    dmos: Optional[float] = None

    @property
    def is_blur(self) -> bool:
        return self.distortion_type.strip().lower() in BLUR_LABELS


class ScoreRow(BaseModel):
    """Результат оценки одной пары"""

    row_index: int
    distortion: str = ""
    bele_cold: Optional[float] = None
    cpsnr: Optional[float] = None
    xi_eq: Optional[float] = None
    predicted_dmos: Optional[float] = None
    empirical_dmos: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.predicted_dmos is not None


class CalibrationUsed(BaseModel):
    q: float
    tau: float
    fusion: FusionCoefficients


class EvaluationReport(BaseModel):
    """
    Отчет оценки: метрики по типам искажений и в целом

    Группы размером меньше трех перечислены в skipped_groups;
    overall.n равно сумме n по группам и размеров пропущенных групп.
    """

    per_distortion: Dict[str, MetricReport]
    skipped_groups: Dict[str, int] = {}
    overall: MetricReport
    n_failed: int = 0
    calibration: Optional[CalibrationUsed] = None
    rows: List[ScoreRow] = []


def _parse_float(raw: str, column: str, line: int) -> Optional[float]:
    raw = (raw or "").strip()
    if not raw:
        return None
    try:
        value = float(raw)
    except ValueError:
        raise ManifestError(f"столбец {column}: не число '{raw}'", line=line) from None
    if not math.isfinite(value):
        raise ManifestError(f"столбец {column}: неконечное значение '{raw}'", line=line)
    return value


def load_manifest(path: Union[str, Path], check_files: bool = True) -> List[ManifestEntry]:
    """
    Загрузить манифест CSV с заголовком ref_path,dist_path,distortion,level,dmos

    Относительные пути разрешаются от каталога манифеста.

    Args:
        path: путь к манифесту
        check_files: проверять наличие файлов изображений

    Returns:
        Строки манифеста в порядке файла
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Манифест не найден: {path}")
    base = path.parent
    entries: List[ManifestEntry] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError("пустой файл", line=1) from None
        header = [h.strip() for h in header]
        if tuple(header) != MANIFEST_COLUMNS:
            missing = [c for c in MANIFEST_COLUMNS if c not in header]
            detail = f"нет столбцов {', '.join(missing)}" if missing else f"заголовок {header}"
            raise ManifestError(f"ожидался заголовок {','.join(MANIFEST_COLUMNS)}: {detail}",
                                line=1)
        for record in reader:
            line = reader.line_num
            if not any(cell.strip() for cell in record):
                continue
            if len(record) != len(MANIFEST_COLUMNS):
                raise ManifestError(f"ожидалось {len(MANIFEST_COLUMNS)} полей, получено "
                                    f"{len(record)}", line=line)
            ref, dist, distortion, level, dmos = (cell.strip() for cell in record)
            if not ref or not dist:
                raise ManifestError("пустой путь к изображению", line=line)
            entries.append(ManifestEntry(
                row_index=len(entries),
                ref_path=(base / ref) if not Path(ref).is_absolute() else Path(ref),
                dist_path=(base / dist) if not Path(dist).is_absolute() else Path(dist),
                distortion_type=distortion,
                level=_parse_float(level, "level", line),
                dmos=_parse_float(dmos, "dmos", line),
            ))

    missing_paths = []
    for entry in entries if check_files else ():
        for p in (entry.ref_path, entry.dist_path):
            if not p.exists() and str(p) not in missing_paths:
                missing_paths.append(str(p))
    if missing_paths:
        raise MissingImagesError(missing_paths)
    logger.info(f"Манифест загружен: {path} ({len(entries)} строк)")
    return entries


def default_cache_dir() -> Optional[Path]:
    """Каталог кэша из переменной окружения BELE_CACHE_DIR"""
    value = os.environ.get(CACHE_ENV)
    return Path(value) if value else None


class ScoreCache:
    """
    Кэш оценок пар в формате JSON-lines

    Ключ: SHA-256 от байтов эталона, байтов искаженного изображения
    и параметров. Запись только дописыванием.
    """

    def __init__(self, cache_dir: Union[str, Path]):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.cache_dir / CACHE_FILE
        self._entries: Dict[str, Dict[str, Any]] = {}
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        record = json.loads(line)
                        self._entries[record["key"]] = record["value"]
                    except (json.JSONDecodeError, KeyError):
                        logger.warning(f"Поврежденная строка кэша пропущена: {self.path}")
        logger.debug(f"Кэш {self.path}: {len(self._entries)} записей")

    def __len__(self) -> int:
        return len(self._entries)

    @staticmethod
    def make_key(ref_path: Path, dist_path: Path, params_token: str) -> str:
        digest = hashlib.sha256()
        digest.update(Path(ref_path).read_bytes())
        digest.update(b"\0")
        digest.update(Path(dist_path).read_bytes())
        digest.update(b"\0")
        digest.update(params_token.encode("utf-8"))
        return digest.hexdigest()

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        return self._entries.get(key)

    def put(self, key: str, value: Dict[str, Any]) -> None:
        if key in self._entries:
            return
        self._entries[key] = value
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps({"key": key, "value": value}, sort_keys=True) + "\n")


def _params_token(params: CanonicalParams, geometry: ViewerGeometry, conversion) -> str:
    token = {
        "q": params.q,
        "tau": params.tau,
        "geometry": [geometry.tau, geometry.pixels_per_degree, geometry.s_g_arcmin],
        "conversion": conversion.model_dump() if conversion is not None else None,
    }
    return json.dumps(token, sort_keys=True)


def _score_pair(task: Tuple[int, str, str, CanonicalParams, ViewerGeometry, Any]) -> Dict[str, Any]:
    row_index, ref_path, dist_path, params, geometry, conversion = task
    try:
        estimator = BELEEstimator(params, geometry, conversion=conversion)
        score = estimator.score_files(ref_path, dist_path)
    except (BeleError, OSError) as e:
        return {"row_index": row_index, "error": f"{type(e).__name__}: {e}"}
    return {
        "row_index": row_index,
        "bele_cold": score.bele_cold,
        "cpsnr": score.cpsnr,
        "xi_eq": score.xi_eq,
        "empirical_dmos": score.empirical_dmos,
    }


def score_corpus(entries: Sequence[ManifestEntry], params: CanonicalParams,
                 geometry: ViewerGeometry, fusion: FusionCoefficients, workers: int = 1,
                 cache: Optional[ScoreCache] = None, conversion=None) -> List[ScoreRow]:
    """
    Оценить все пары манифеста

    Ошибки отдельных пар записываются в строку и не прерывают пакет.
    Результат упорядочен по номеру строки манифеста.

    Args:
        entries: строки манифеста
        params: параметры канонической модели
        geometry: геометрия просмотра
        fusion: коэффициенты слияния
        workers: число процессов
        cache: кэш оценок
        conversion: кривая ζ → ξ_eq

    Returns:
        Строки оценок
    """
    token = _params_token(params, geometry, conversion)
    results: Dict[int, Dict[str, Any]] = {}
    keys: Dict[int, str] = {}
    tasks = []
    for entry in entries:
        if cache is not None:
            try:
                keys[entry.row_index] = ScoreCache.make_key(entry.ref_path, entry.dist_path, token)
            except OSError as e:
                results[entry.row_index] = {"row_index": entry.row_index,
                                            "error": f"{type(e).__name__}: {e}"}
                continue
            hit = cache.get(keys[entry.row_index])
            if hit is not None:
                results[entry.row_index] = {"row_index": entry.row_index, **hit}
                continue
        tasks.append((entry.row_index, str(entry.ref_path), str(entry.dist_path), params,
                      geometry, conversion))

    logger.info(f"Оценка {len(tasks)} пар ({len(entries) - len(tasks)} из кэша), "
                f"процессов: {workers}")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            computed = list(pool.map(_score_pair, tasks))
    else:
        computed = [_score_pair(task) for task in tasks]

    for outcome in computed:
        index = outcome["row_index"]
        results[index] = outcome
        if "error" in outcome:
            logger.error(f"Строка {index}: {outcome['error']}")
        elif cache is not None:
            cache.put(keys[index], {k: v for k, v in outcome.items() if k != "row_index"})

    labels = {entry.row_index: entry.distortion_type for entry in entries}
    rows = []
    for index in sorted(results):
        outcome = results[index]
        row = ScoreRow(row_index=index, distortion=labels[index])
        if "error" in outcome:
            row.error = outcome["error"]
        else:
            row.bele_cold = outcome["bele_cold"]
            row.cpsnr = outcome["cpsnr"]
            row.xi_eq = outcome["xi_eq"]
            row.empirical_dmos = outcome.get("empirical_dmos")
            row.predicted_dmos = predict(fusion, row.bele_cold, row.cpsnr)
        rows.append(row)
    return rows


def evaluate(rows: Iterable[ScoreRow], targets: Mapping[int, Optional[float]],
             params: Optional[CanonicalParams] = None,
             fusion: Optional[FusionCoefficients] = None) -> EvaluationReport:
    """
    Метрики по типам искажений и по всему набору

    Args:
        rows: строки оценок
        targets: DMOS по номеру строки
        params: использованные параметры канонической модели
        fusion: использованные коэффициенты слияния

    Returns:
        Отчет; группы с n < 3 пропускаются
    """
    ordered = sorted(rows, key=lambda r: r.row_index)
    scored = [r for r in ordered if r.ok and targets.get(r.row_index) is not None]
    n_failed = sum(1 for r in ordered if r.error is not None)
    if len(scored) < MIN_GROUP_SIZE:
        raise DegenerateInputError(f"Для оценки нужно не менее {MIN_GROUP_SIZE} строк "
                                   f"с DMOS, получено {len(scored)}")

    groups: Dict[str, List[ScoreRow]] = {}
    for row in scored:
        groups.setdefault(row.distortion, []).append(row)

    per_distortion: Dict[str, MetricReport] = {}
    skipped: Dict[str, int] = {}
    for name in sorted(groups):
        members = groups[name]
        if len(members) < MIN_GROUP_SIZE:
            logger.warning(f"Группа '{name}' пропущена: n = {len(members)}")
            skipped[name] = len(members)
            continue
        per_distortion[name] = metric_report([r.predicted_dmos for r in members],
                                             [targets[r.row_index] for r in members])

    overall = metric_report([r.predicted_dmos for r in scored],
                            [targets[r.row_index] for r in scored])
    calibration = None
    if params is not None and fusion is not None:
        calibration = CalibrationUsed(q=params.q, tau=params.tau, fusion=fusion)
    report = EvaluationReport(per_distortion=per_distortion, skipped_groups=skipped,
                              overall=overall, n_failed=n_failed, calibration=calibration,
                              rows=ordered)
    logger.info(f"Оценка завершена: n = {overall.n}, RMSE = {overall.rmse:.4f}")
    return report


def _fmt(value: Optional[float]) -> str:
    return "   -   " if value is None else f"{value:7.4f}"


def format_report(report: EvaluationReport) -> str:
    """Текстовая таблица отчета"""
    lines = ["=== ОТЧЕТ ОЦЕНКИ BELE ===", ""]
    if report.calibration is not None:
        c = report.calibration
        lines.append(f"Калибровка: Q = {c.q:.4f}, τ = {c.tau:.4f}, D0 = {c.fusion.d0:.4f}, "
                     f"D1E = {c.fusion.d1_e:.4f}, D1T = {c.fusion.d1_t:.4f}")
        lines.append("")
    lines.append(f"{'Искажение':<24}{'n':>6}  {'RMSE':>7}  {'SROCC':>7}  {'PLCC':>7}")
    for name, metrics in report.per_distortion.items():
        lines.append(f"{name:<24}{metrics.n:>6}  {_fmt(metrics.rmse)}  {_fmt(metrics.srocc)}  "
                     f"{_fmt(metrics.plcc)}")
    o = report.overall
    lines.append(f"{'ВСЕГО':<24}{o.n:>6}  {_fmt(o.rmse)}  {_fmt(o.srocc)}  {_fmt(o.plcc)}")
    for name, size in report.skipped_groups.items():
        lines.append(f"- группа '{name}' пропущена (n = {size})")
    if report.n_failed:
        lines.append(f"- пар с ошибками: {report.n_failed}")
    return "\n".join(lines) + "\n"


def write_scores(rows: Sequence[ScoreRow], path: Union[str, Path], fmt: str = "csv") -> Path:
    """
    Записать строки оценок в CSV или JSON-lines

    Args:
        rows: строки оценок
        path: путь к файлу
        fmt: csv или jsonl

    Returns:
        Путь к файлу
    """
    path = Path(path)
    records = [row.model_dump(include=set(OUTPUT_COLUMNS)) for row in rows]
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(OUTPUT_COLUMNS))
            writer.writeheader()
            for record in records:
                writer.writerow({k: ("" if record[k] is None else record[k])
                                 for k in OUTPUT_COLUMNS})
    elif fmt == "jsonl":
        with open(path, "w", encoding="utf-8") as f:
            for record in records:
                f.write(json.dumps({k: record[k] for k in OUTPUT_COLUMNS}) + "\n")
    else:
        raise ValueError(f"Неизвестный формат вывода: {fmt}")
    logger.info(f"Оценки записаны: {path}")
    return path


class BlurComparisonRow(BaseModel):
    row_index: int
    level: float
    xi: float
    canonical_dmos: float
    empirical_dmos: float
    dmos: Optional[float] = None


class BlurComparison(BaseModel):
    """Каноническая и эмпирическая оценки на парах с гауссовым размытием"""

    rows: List[BlurComparisonRow]
    mean_abs_gap: Optional[float] = None


def blur_comparison(rows: Sequence[ScoreRow], entries: Sequence[ManifestEntry],
                    params: CanonicalParams, geometry: ViewerGeometry) -> BlurComparison:
    """
    Сопоставить d_CAN(ξ = level/s_g) и эмпирическую оценку конвейера

    Args:
        rows: строки оценок
        entries: строки манифеста
        params: параметры канонической модели
        geometry: геометрия просмотра

    Returns:
        Таблица сравнения и средний модуль расхождения
    """
    by_index = {row.row_index: row for row in rows}
    table = []
    for entry in entries:
        row = by_index.get(entry.row_index)
        if not entry.is_blur or entry.level is None or row is None or row.empirical_dmos is None:
            continue
        xi = entry.level / geometry.s_g_pixels
        table.append(BlurComparisonRow(
            row_index=entry.row_index,
            level=entry.level,
            xi=xi,
            canonical_dmos=float(canonical_dmos(params, xi)),
            empirical_dmos=row.empirical_dmos,
            dmos=entry.dmos,
        ))
    gap = None
    if table:
        gap = sum(abs(r.canonical_dmos - r.empirical_dmos) for r in table) / len(table)
    return BlurComparison(rows=table, mean_abs_gap=gap)
