"""
Командная строка BELE
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError

from .calibration import (
    BlurSample,
    CalibrationResult,
    ConversionCurve,
    FusionCoefficients,
    FusionSample,
    conversion_from_canonical,
    cross_sensitivity_report,
    fit_canonical,
    fit_fusion,
)
from .core import CanonicalParams, ViewerGeometry, load_luminance
from .core.estimator import BELEEstimator
from .core.exceptions import BeleError, DegenerateInputError, DomainError
from .evaluation import (
    ScoreCache,
    blur_comparison,
    default_cache_dir,
    evaluate,
    flops_estimate,
    flops_logistic,
    format_gflops,
    format_report,
    load_manifest,
    score_corpus,
    write_scores,
)
from .indices import EdgeIndex
from .render import IsoluminancePalette, render_certainty, render_scatter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NOT_FOUND = 2
EXIT_UNWRITABLE = 3
EXIT_USAGE = 4

SCORE_KEYS = ("bele_cold", "cpsnr", "xi_eq", "predicted_dmos")


class UsageError(Exception):
    """Неверные аргументы командной строки"""


class OutputError(Exception):
    """Невозможно записать результат"""


class RunConfig(BaseModel):
    """Проверенная конфигурация запуска"""

    tau: Optional[float] = Field(default=None, gt=0)
    pixels_per_degree: float = Field(default=60.0, gt=0)
    s_g_arcmin: float = Field(default=2.5, gt=0)
    calibration: Optional[Path] = None
    fusion: Optional[Path] = None
    conversion: Optional[Path] = None
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    out: Optional[Path] = None
    format: Literal["json", "csv", "text"] = "json"
    scatter: bool = False

    def load_calibration(self) -> Optional[CalibrationResult]:
        if self.calibration is None:
            return None
        _require(self.calibration)
        return CalibrationResult.load(self.calibration)

    def load_fusion(self) -> FusionCoefficients:
        if self.fusion is None:
            return FusionCoefficients()
        _require(self.fusion)
        return FusionCoefficients.load(self.fusion)

    def load_conversion(self) -> Optional[ConversionCurve]:
        if self.conversion is None:
            return None
        _require(self.conversion)
        return ConversionCurve.load(self.conversion)

    def resolve(self):
        """Параметры модели и геометрия с учетом файла калибровки"""
        calibration = self.load_calibration()
        tau = self.tau
        if tau is None:
            tau = calibration.tau if calibration is not None else 1.0
        q = calibration.q if calibration is not None else 1.0
        params = CanonicalParams(q=q, tau=tau)
        geometry = ViewerGeometry(tau=tau, pixels_per_degree=self.pixels_per_degree,
                                  s_g_arcmin=self.s_g_arcmin)
        return params, geometry

    def out_dir(self) -> Path:
        directory = self.out or Path(".")
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(f"Каталог вывода недоступен: {directory} ({e})") from e
        return directory


def _require(path: Path) -> None:
    if not Path(path).exists():
        raise FileNotFoundError(f"Файл не найден: {path}")


def _write_text(path: Path, text: str) -> Path:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputError(f"Не удалось записать {path}: {e}") from e
    return Path(path)


def _emit(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, ensure_ascii=False)
    if fmt == "csv":
        keys = list(record)
        return ",".join(keys) + "\n" + ",".join("" if record[k] is None else str(record[k])
                                                 for k in keys)
    return "\n".join(f"{k}: {v}" for k, v in record.items())


def cmd_score(args: argparse.Namespace, config: RunConfig) -> int:
    """Оценить одну пару изображений"""
    params, geometry = config.resolve()
    estimator = BELEEstimator(params, geometry, config.load_fusion(), config.load_conversion())
    result = estimator.score(load_luminance(args.ref), load_luminance(args.dist))
    record = {key: getattr(result, key) for key in SCORE_KEYS}
    print(_emit(record, config.format))
    if config.out is not None:
        _write_text(config.out, json.dumps(record, indent=2))
    return EXIT_OK


def _blur_samples(manifest: Path, geometry: ViewerGeometry) -> List[BlurSample]:
    entries = load_manifest(manifest, check_files=False)
    blur = [e for e in entries if e.is_blur]
    if not blur:
        raise DegenerateInputError("В манифесте нет строк с distortion = gaussian_blur")
    for column in ("level", "dmos"):
        empty = [e.row_index for e in blur if getattr(e, column) is None]
        if empty:
            raise DegenerateInputError(f"Столбец {column} пуст в строках размытия: {empty}")
    return [BlurSample(xi=e.level / geometry.s_g_pixels, dmos=e.dmos) for e in blur]


def cmd_calibrate(args: argparse.Namespace, config: RunConfig) -> int:
    """Подобрать (Q, τ) по строкам гауссова размытия"""
    geometry = ViewerGeometry(pixels_per_degree=config.pixels_per_degree,
                              s_g_arcmin=config.s_g_arcmin)
    result = fit_canonical(_blur_samples(args.manifest, geometry))
    path = _write_text(config.out_dir() / "calibration.json", result.model_dump_json(indent=2))
    print(f"Q = {result.q:.6f}, τ = {result.tau:.6f}, RMSE = {result.residual_rmse:.4f}, "
          f"n = {result.n_samples} → {path}")
    return EXIT_OK


def _score_manifest(args: argparse.Namespace, config: RunConfig, fusion: FusionCoefficients):
    params, geometry = config.resolve()
    entries = load_manifest(args.manifest)
    cache_dir = default_cache_dir() or (config.out_dir() / "cache")
    cache = ScoreCache(cache_dir)
    rows = score_corpus(entries, params, geometry, fusion, workers=config.workers, cache=cache,
                        conversion=config.load_conversion())
    return entries, rows, params, geometry


def cmd_fit_fusion(args: argparse.Namespace, config: RunConfig) -> int:
    """Подобрать коэффициенты слияния по размеченному манифесту"""
    entries, rows, _, _ = _score_manifest(args, config, FusionCoefficients())
    targets = {e.row_index: e.dmos for e in entries}
    samples = [FusionSample(e=r.bele_cold, t=r.cpsnr, dmos=targets[r.row_index])
               for r in rows if r.ok and targets.get(r.row_index) is not None]
    coeffs = fit_fusion(samples)
    path = _write_text(config.out_dir() / "fusion.json", coeffs.model_dump_json(indent=2))
    print(f"D0 = {coeffs.d0:.4f}, D1E = {coeffs.d1_e:.4f}, D1T = {coeffs.d1_t:.4f}, "
          f"RMSE = {coeffs.residual_rmse:.4f} → {path}")
    if len(samples) >= 10:
        try:
            report = cross_sensitivity_report(samples)
            print(f"Доля взаимодействия E·T: {report.interaction_ratio:.3e}")
        except BeleError as e:
            logger.warning(f"Диагностика перекрестной чувствительности невозможна: {e}")
    return EXIT_OK


def cmd_conversion(args: argparse.Namespace, config: RunConfig) -> int:
    """Построить кривую ζ → ξ_eq по канонической модели"""
    params, _ = config.resolve()
    curve = conversion_from_canonical(params, xi_max=args.xi_max, n_knots=args.knots)
    path = _write_text(config.out_dir() / "conversion.json", curve.model_dump_json())
    print(f"Кривая преобразования: {len(curve.knots_zeta)} узлов → {path}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, config: RunConfig) -> int:
    """Оценить размеченный набор и записать отчет"""
    if config.calibration is None or config.fusion is None:
        raise UsageError("Для evaluate нужны --calibration и --fusion")
    fusion = config.load_fusion()
    entries, rows, params, geometry = _score_manifest(args, config, fusion)
    out = config.out_dir()
    if all(r.error is not None for r in rows):
        print(f"Все {len(rows)} пар завершились ошибкой", file=sys.stderr)
        return EXIT_FAILURE

    targets = {e.row_index: e.dmos for e in entries}
    report = evaluate(rows, targets, params, fusion)
    _write_text(out / "report.json", report.model_dump_json(indent=2))
    scores_path = out / ("scores.csv" if config.format == "csv" else "scores.jsonl")
    try:
        write_scores(rows, scores_path, "csv" if config.format == "csv" else "jsonl")
    except OSError as e:
        raise OutputError(f"Не удалось записать {scores_path}: {e}") from e
    comparison = blur_comparison(rows, entries, params, geometry)
    if comparison.rows:
        _write_text(out / "blur_comparison.json", comparison.model_dump_json(indent=2))

    if config.scatter:
        scored = [r for r in rows if r.ok and targets.get(r.row_index) is not None]
        groups = sorted({r.distortion for r in scored})
        for name in groups + [None]:
            members = [r for r in scored if name is None or r.distortion == name]
            stem = "scatter_overall" if name is None else f"scatter_{_safe(name)}"
            try:
                render_scatter([r.predicted_dmos for r in members],
                               [targets[r.row_index] for r in members],
                               [r.distortion for r in members], out / stem,
                               title=name or "overall")
            except OSError as e:
                raise OutputError(f"Не удалось записать диаграмму {stem}: {e}") from e

    if config.format == "text":
        print(format_report(report), end="")
    else:
        print(report.overall.model_dump_json())
    failed = report.n_failed
    if failed:
        print(f"Пар с ошибками: {failed}", file=sys.stderr)
    return EXIT_OK


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name) or "group"


def cmd_certainty_map(args: argparse.Namespace, config: RunConfig) -> int:
    """Записать изолюминантную карту уверенности"""
    params, geometry = config.resolve()
    ref = load_luminance(args.ref)
    dist = load_luminance(args.dist)
    analysis = EdgeIndex(params, geometry).analyze(ref, dist)
    palette = IsoluminancePalette(threshold=analysis.partition.threshold)
    path = config.out or Path("certainty_map.png")
    try:
        render_certainty(analysis.certainty, palette, analysis.lambda_ref, path, dmos=args.dmos,
                         params=params)
    except OSError as e:
        raise OutputError(f"Не удалось записать {path}: {e}") from e
    print(path)
    return EXIT_OK


def cmd_flops(args: argparse.Namespace, config: RunConfig) -> int:
    """Оценки числа операций"""
    try:
        total = flops_estimate(args.n, args.s, args.d, args.p, args.c)
    except DomainError as e:
        raise UsageError(str(e)) from e
    print(f"BELE FLOPs: {total:.10g}")
    if args.n >= 1:
        logistic = flops_logistic(args.n)
        print(f"Logistic FLOPs: {logistic} ({format_gflops(logistic)})")
    return EXIT_OK


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидалось целое число, получено '{text}'") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"значение должно быть ≥ 0, получено {value}")
    return value


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидалось число, получено '{text}'") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"значение должно быть ≥ 0, получено {value}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tau", type=float, help="нормированное расстояние просмотра")
    common.add_argument("--ppd", type=float, default=60.0, help="пикселей на градус")
    common.add_argument("--sg", type=float, default=2.5, help="разброс VRF, угл. минуты")
    common.add_argument("--calibration", type=Path, help="JSON калибровки (Q, τ)")
    common.add_argument("--fusion", type=Path, help="JSON коэффициентов слияния")
    common.add_argument("--conversion", type=Path, help="JSON кривой ζ → ξ_eq")
    common.add_argument("--workers", type=int, help="число процессов")
    common.add_argument("--out", type=Path, help="путь или каталог вывода")
    common.add_argument("--scatter", action="store_true", help="строить диаграммы рассеяния")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--verbose", "-v", action="store_true", help="подробный журнал")

    parser = _Parser(prog="bele", description="Оценка качества изображений BELE")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("score", parents=[common], help="оценить пару изображений")
    p.add_argument("ref", type=Path)
    p.add_argument("dist", type=Path)
    p.set_defaults(handler=cmd_score)

    p = sub.add_parser("calibrate", parents=[common], help="подобрать (Q, τ)")
    p.add_argument("manifest", type=Path)
    p.set_defaults(handler=cmd_calibrate)

    p = sub.add_parser("fit-fusion", parents=[common], help="подобрать коэффициенты слияния")
    p.add_argument("manifest", type=Path)
    p.set_defaults(handler=cmd_fit_fusion)

    p = sub.add_parser("conversion", parents=[common], help="построить кривую ζ → ξ_eq")
    p.add_argument("--xi-max", type=float, default=20.0)
    p.add_argument("--knots", type=int, default=200)
    p.set_defaults(handler=cmd_conversion)

    p = sub.add_parser("evaluate", parents=[common], help="оценить размеченный набор")
    p.add_argument("manifest", type=Path)
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("certainty-map", parents=[common], help="карта уверенности в PNG")
    p.add_argument("ref", type=Path)
    p.add_argument("dist", type=Path)
    p.add_argument("--dmos", type=float, help="DMOS для маркера на шкале")
    p.set_defaults(handler=cmd_certainty_map)

    p = sub.add_parser("flops", parents=[common], help="оценка числа операций")
    p.add_argument("--n", type=_non_negative_int, default=1000)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--d", type=_non_negative_int, default=3)
    p.add_argument("--p", type=_non_negative_int, default=0)
    p.add_argument("--c", type=_non_negative_float, default=0.0)
    p.set_defaults(handler=cmd_flops)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Точка входа

    Returns:
        Код возврата: 0 успех, 1 ошибка вычислений, 2 нет входного файла,
        3 вывод не записывается, 4 неверные аргументы
    """
    try:
        args = build_parser().parse_args(argv)
        config = RunConfig(
            tau=args.tau,
            pixels_per_degree=args.ppd,
            s_g_arcmin=args.sg,
            calibration=args.calibration,
            fusion=args.fusion,
            conversion=args.conversion,
            out=args.out,
            format=args.format,
            scatter=args.scatter,
            **({"workers": args.workers} if args.workers is not None else {}),
        )
    except UsageError as e:
        print(f"bele: ошибка аргументов: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"bele: неверная конфигурация: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        return args.handler(args, config)
    except UsageError as e:
        print(f"bele: ошибка аргументов: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"bele: {e}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except OutputError as e:
        print(f"bele: {e}", file=sys.stderr)
        return EXIT_UNWRITABLE
    except (BeleError, ValidationError, ValueError) as e:
        print(f"bele: ошибка вычислений: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
