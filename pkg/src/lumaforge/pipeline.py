"""Batch orchestration over directories of numbered netpbm frames.

A run ingests a frame sequence, optionally resizes, then takes the grayscale
path (luminance extraction), the color path (per-channel processing), or both:
optional noise injection, optional median/hybrid-median smoothing, brightness
equalization, and pooled PSNR of the result against the clean pre-noise
reference. Artifacts per run: one enhanced frame per input frame and path,
pre/post-enhancement histogram CSVs, and a single metrics report JSON.

Per-frame work is pure and seeded by frame index, so every output byte is a
function of (config, input bytes) alone, never of worker count or scheduling.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigurationError, IngestionError, PipelineStageError
from .luma_equalize import (
    color_histogram,
    enhance_color,
    enhance_with_diagnostics,
    histogram,
)
from .netpbm import read_image, write_image
from .noise_models import NOISE_KINDS, NoiseSpec, apply_noise
from .pixel_core import (
    BT601_WEIGHTS,
    ColorBuffer,
    Dimensions,
    LumaWeights,
    PixelBuffer,
    resize_nearest,
    rgb_to_luma,
)
from .quality_metrics import (
    MetricsReport,
    PsnrResult,
    export_histogram,
    improvement_pct,
    squared_error_total,
)
from .rng import derive_seed
from .smoothing_filters import FilterWindow, hybrid_median_filter, median_filter

FILTER_KINDS = ("median", "hybrid_median")
MODES = ("gray", "color", "both")
PSNR_REFERENCES = ("clean", "noisy")

DEFAULT_RESIZE = Dimensions(rows=144, cols=176)

_U64_MAX = (1 << 64) - 1

# <stem>_<zero-padded index>.<pgm|ppm>; ordering is by parsed index
_FRAME_FILE_RE = re.compile(r"^(?P<stem>.+)_(?P<index>\d+)\.(?P<ext>pgm|ppm)$")

__all__ = [
    "FILTER_KINDS",
    "MODES",
    "DEFAULT_RESIZE",
    "FilterSpec",
    "PipelineConfig",
    "FrameSequence",
    "ingest_frames",
    "run_pipeline",
    "run_stage",
    "sequence_psnr",
    "report_table",
]


@dataclass(frozen=True)
class FilterSpec:
    """Smoothing stage selector: which filter and what window."""

    kind: str
    window: FilterWindow = FilterWindow(3, 3)

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise ConfigurationError(
                f"unknown filter kind {self.kind!r}; expected one of {FILTER_KINDS}"
            )


def _apply_filter(frame: PixelBuffer, spec: FilterSpec) -> PixelBuffer:
    if spec.kind == "median":
        return median_filter(frame, spec.window)
    return hybrid_median_filter(frame, spec.window)


@dataclass
class PipelineConfig:
    """Everything a run needs; serializable to/from a single JSON document.

    Only input_dir and output_dir are required. The per-frame noise seed is
    derived from noise.seed (which from_mapping defaults to the top-level
    seed) and the frame index, so runs are reproducible end to end.
    """

    input_dir: Path
    output_dir: Path
    resize_to: Dimensions | None = DEFAULT_RESIZE
    luma_weights: LumaWeights = BT601_WEIGHTS
    noise: NoiseSpec | None = None
    filter: FilterSpec | None = None
    sigma: float = 0.0
    mode: str = "gray"
    seed: int = 0
    psnr_reference: str = "clean"
    sample_name: str | None = None
    size_label: str | None = None

    def __post_init__(self):
        self.input_dir = Path(self.input_dir)
        self.output_dir = Path(self.output_dir)
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.psnr_reference not in PSNR_REFERENCES:
            raise ConfigurationError(
                f"psnr_reference must be one of {PSNR_REFERENCES}, got {self.psnr_reference!r}"
            )
        if not 0 <= self.seed <= _U64_MAX:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_mapping(self) -> dict:
        """Canonical dict of every config field, defaults resolved."""
        return {
            "input_dir": str(self.input_dir),
            "output_dir": str(self.output_dir),
            "resize_to": None
            if self.resize_to is None
            else {"rows": self.resize_to.rows, "cols": self.resize_to.cols},
            "luma_weights": [
                self.luma_weights.red,
                self.luma_weights.green,
                self.luma_weights.blue,
            ],
            "noise": None
            if self.noise is None
            else {"kind": self.noise.kind, "d": self.noise.d, "seed": self.noise.seed},
            "filter": None
            if self.filter is None
            else {
                "kind": self.filter.kind,
                "window": [self.filter.window.rows, self.filter.window.cols],
            },
            "sigma": self.sigma,
            "mode": self.mode,
            "seed": self.seed,
            "psnr_reference": self.psnr_reference,
            "sample_name": self.sample_name,
            "size_label": self.size_label,
        }

    def digest(self) -> str:
        """sha256 over the canonical JSON form; changes iff any field changes."""
        canonical = json.dumps(self.to_mapping(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("ascii")).hexdigest()

    @classmethod
    def from_mapping(cls, data: dict) -> "PipelineConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
        for required in ("input_dir", "output_dir"):
            if required not in data:
                raise ConfigurationError(f"config is missing required field {required!r}")
        seed = data.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigurationError(f"seed must be an integer, got {seed!r}")
        kwargs: dict = {
            "input_dir": Path(data["input_dir"]),
            "output_dir": Path(data["output_dir"]),
            "seed": seed,
        }
        if "resize_to" in data:
            kwargs["resize_to"] = _parse_dims(data["resize_to"], "resize_to", optional=True)
        if "luma_weights" in data:
            kwargs["luma_weights"] = _parse_weights(data["luma_weights"])
        if "noise" in data and data["noise"] is not None:
            kwargs["noise"] = _parse_noise(data["noise"], default_seed=seed)
        if "filter" in data and data["filter"] is not None:
            kwargs["filter"] = _parse_filter(data["filter"])
        for key in ("sigma", "mode", "psnr_reference", "sample_name", "size_label"):
            if key in data and data[key] is not None:
                kwargs[key] = data[key]
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigurationError(f"{path}: cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path}: config must be a JSON object")
        return cls.from_mapping(data)


def _parse_dims(value, what: str, optional: bool = False) -> Dimensions | None:
    if value is None and optional:
        return None
    if isinstance(value, dict):
        extra = set(value) - {"rows", "cols"}
        if extra or set(value) != {"rows", "cols"}:
            raise ConfigurationError(f"{what} needs exactly rows and cols, got {value!r}")
        return Dimensions(int(value["rows"]), int(value["cols"]))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Dimensions(int(value[0]), int(value[1]))
    raise ConfigurationError(f"{what} must be null, [rows, cols], or {{rows, cols}}, got {value!r}")


def _parse_weights(value) -> LumaWeights:
    if isinstance(value, dict):
        try:
            return LumaWeights(float(value["red"]), float(value["green"]), float(value["blue"]))
        except KeyError as exc:
            raise ConfigurationError(f"luma_weights needs red/green/blue, got {value!r}") from exc
    if isinstance(value, (list, tuple)) and len(value) == 3:
        return LumaWeights(float(value[0]), float(value[1]), float(value[2]))
    raise ConfigurationError(f"luma_weights must be [red, green, blue], got {value!r}")


def _parse_noise(value, default_seed: int) -> NoiseSpec:
    if not isinstance(value, dict):
        raise ConfigurationError(f"noise must be an object, got {value!r}")
    extra = set(value) - {"kind", "d", "seed"}
    if extra:
        raise ConfigurationError(f"unknown noise fields: {sorted(extra)}")
    if "kind" not in value:
        raise ConfigurationError("noise needs a kind")
    return NoiseSpec(
        kind=value["kind"],
        d=float(value.get("d", 0.0)),
        seed=int(value.get("seed", default_seed)),
    )


def _parse_filter(value) -> FilterSpec:
    if not isinstance(value, dict):
        raise ConfigurationError(f"filter must be an object, got {value!r}")
    extra = set(value) - {"kind", "window"}
    if extra:
        raise ConfigurationError(f"unknown filter fields: {sorted(extra)}")
    if "kind" not in value:
        raise ConfigurationError("filter needs a kind")
    window = FilterWindow(3, 3)
    if "window" in value and value["window"] is not None:
        dims = _parse_dims(value["window"], "filter window")
        window = FilterWindow(dims.rows, dims.cols)
    return FilterSpec(kind=value["kind"], window=window)


@dataclass
class FrameSequence:
    """An ordered, uniformly-sized frame stack loaded from one directory.

    Grayscale sources are promoted to color with R = G = B (lossless: the
    luminance of a promoted frame is the original plane). native_kind records
    whether any source file was true color.
    """

    name: str
    frames: list[ColorBuffer]
    source_manifest: list[tuple[int, str]] = field(default_factory=list)
    native_kind: str = "color"


def ingest_frames(directory) -> FrameSequence:
    """Load `<stem>_<index>.pgm|ppm` files in ascending numeric index order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise IngestionError(f"input directory not found: {directory}")
    entries = []
    for path in sorted(directory.iterdir()):
        m = _FRAME_FILE_RE.match(path.name)
        if m:
            entries.append((int(m.group("index")), m.group("stem"), m.group("ext"), path))
    if not entries:
        raise IngestionError(f"no frame files matching <stem>_<index>.pgm|ppm in {directory}")
    stems = {stem for _, stem, _, _ in entries}
    if len(stems) > 1:
        raise IngestionError(
            f"ambiguous sequence in {directory}: multiple stems {sorted(stems)}"
        )
    entries.sort(key=lambda e: e[0])
    indices = [idx for idx, _, _, _ in entries]
    if len(set(indices)) != len(indices):
        dup = next(i for n, i in enumerate(indices[1:], 1) if i == indices[n - 1])
        raise IngestionError(f"duplicate frame index {dup} in {directory}")

    frames: list[ColorBuffer] = []
    manifest: list[tuple[int, str]] = []
    native_kind = "color" if any(ext == "ppm" for _, _, ext, _ in entries) else "gray"
    first_dims: Dimensions | None = None
    for seq_index, (_, _, _, path) in enumerate(entries):
        image = read_image(path)
        if isinstance(image, PixelBuffer):
            image = ColorBuffer.from_planes(image, image, image)
        if first_dims is None:
            first_dims = image.dims
        elif image.dims != first_dims:
            raise IngestionError(
                f"{path.name}: frame dims {image.dims.rows}x{image.dims.cols} do not match "
                f"sequence dims {first_dims.rows}x{first_dims.cols}"
            )
        frames.append(image)
        manifest.append((seq_index, path.name))
    return FrameSequence(
        name=stems.pop(), frames=frames, source_manifest=manifest, native_kind=native_kind
    )


@dataclass
class _FrameOutcome:
    gray_sse: int = 0
    gray_samples: int = 0
    color_sse: int = 0
    color_samples: int = 0


def _frame_noise(spec: NoiseSpec, frame_index: int, slot: int) -> NoiseSpec:
    # slot 0 = grayscale plane, 1..3 = R, G, B channels
    return replace(spec, seed=derive_seed(spec.seed, frame_index, slot))


class _ArtifactWriter:
    """Tracks every path written so a failed run can remove partial outputs."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self._written: list[Path] = []
        self._lock = threading.Lock()

    def _record(self, path: Path) -> Path:
        with self._lock:
            self._written.append(path)
        return path

    def frame(self, image, name: str) -> Path:
        path = self._record(self.out_dir / name)
        write_image(image, path)
        return path

    def histogram_csv(self, hist, name: str) -> Path:
        path = self._record(self.out_dir / name)
        export_histogram(hist, path)
        return path

    def report(self, report: MetricsReport) -> Path:
        path = self._record(self.out_dir / "report.json")
        report.save(path)
        return path

    def paths(self) -> list[Path]:
        with self._lock:
            return list(self._written)

    def remove_all(self) -> None:
        for path in self.paths():
            path.unlink(missing_ok=True)


def _gray_stage(cfg: PipelineConfig, frame: ColorBuffer, index: int):
    """Grayscale path for one frame: luma -> noise -> filter -> enhance."""
    clean = rgb_to_luma(frame, cfg.luma_weights)
    noisy = apply_noise(clean, _frame_noise(cfg.noise, index, 0)) if cfg.noise else clean
    smoothed = _apply_filter(noisy, cfg.filter) if cfg.filter else noisy
    enhanced, diagnostics = enhance_with_diagnostics(smoothed, cfg.sigma)
    reference = noisy if cfg.psnr_reference == "noisy" else clean
    return enhanced, diagnostics.input_histogram, reference


def _color_stage(cfg: PipelineConfig, frame: ColorBuffer, index: int):
    """Color path for one frame: per-channel noise/filter, then equalization."""
    clean = frame
    processed = []
    for slot, plane in enumerate(clean.planes(), start=1):
        if cfg.noise:
            plane = apply_noise(plane, _frame_noise(cfg.noise, index, slot))
        if cfg.filter:
            plane = _apply_filter(plane, cfg.filter)
        processed.append(plane)
    prepared = ColorBuffer.from_planes(*processed)
    enhanced = enhance_color(prepared, cfg.sigma)
    reference = prepared if cfg.psnr_reference == "noisy" else clean
    return enhanced, color_histogram(prepared), reference


def _process_frame(
    cfg: PipelineConfig,
    writer: _ArtifactWriter,
    name: str,
    pad: int,
    index: int,
    frame: ColorBuffer,
) -> _FrameOutcome:
    if cfg.resize_to is not None:
        frame = resize_nearest(frame, cfg.resize_to)
    outcome = _FrameOutcome()
    tag = f"{index:0{pad}d}"
    if cfg.mode in ("gray", "both"):
        enhanced, pre_hist, reference = _gray_stage(cfg, frame, index)
        writer.frame(enhanced, f"{name}_enhanced_{tag}.pgm")
        writer.histogram_csv(pre_hist, f"{name}_gray_hist_pre_{tag}.csv")
        writer.histogram_csv(histogram(enhanced), f"{name}_gray_hist_post_{tag}.csv")
        outcome.gray_sse = squared_error_total(enhanced, reference)
        outcome.gray_samples = enhanced.data.size
    if cfg.mode in ("color", "both"):
        enhanced, pre_hist, reference = _color_stage(cfg, frame, index)
        writer.frame(enhanced, f"{name}_enhanced_{tag}.ppm")
        writer.histogram_csv(pre_hist, f"{name}_color_hist_pre_{tag}.csv")
        writer.histogram_csv(color_histogram(enhanced), f"{name}_color_hist_post_{tag}.csv")
        outcome.color_sse = squared_error_total(enhanced, reference)
        outcome.color_samples = enhanced.data.size
    return outcome


def run_pipeline(cfg: PipelineConfig, jobs: int = 1) -> MetricsReport:
    """Run the full pipeline over one sequence and write all artifacts.

    Frames are processed by a pool of `jobs` workers; per-frame squared-error
    totals are integers merged in frame order, so the pooled PSNR (and every
    output byte) is identical for any worker count. Any stage failure removes
    the partial outputs and raises PipelineStageError with the frame index.
    """
    if jobs < 1:
        raise ConfigurationError(f"jobs must be at least 1, got {jobs}")
    sequence = ingest_frames(cfg.input_dir)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    writer = _ArtifactWriter(out_dir)
    name = cfg.sample_name or sequence.name
    pad = max(3, len(str(len(sequence.frames) - 1)))

    def work(item):
        index, frame = item
        try:
            return _process_frame(cfg, writer, name, pad, index, frame)
        except Exception as exc:
            raise PipelineStageError(f"frame {index}: {exc}") from exc

    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(work, enumerate(sequence.frames)))
        else:
            outcomes = [work(item) for item in enumerate(sequence.frames)]
    except PipelineStageError:
        writer.remove_all()
        raise

    gray_psnr = color_psnr = None
    if cfg.mode in ("gray", "both"):
        sse = sum(o.gray_sse for o in outcomes)
        n = sum(o.gray_samples for o in outcomes)
        gray_psnr = PsnrResult.from_mse(sse / n).psnr_db
    if cfg.mode in ("color", "both"):
        sse = sum(o.color_sse for o in outcomes)
        n = sum(o.color_samples for o in outcomes)
        color_psnr = PsnrResult.from_mse(sse / n).psnr_db

    improvement = None
    if (
        gray_psnr is not None
        and color_psnr is not None
        and math.isfinite(gray_psnr)
        and math.isfinite(color_psnr)
        and color_psnr != 0
    ):
        improvement = improvement_pct(gray_psnr, color_psnr)

    dims = cfg.resize_to if cfg.resize_to is not None else sequence.frames[0].dims
    report = MetricsReport(
        sample_name=name,
        n_frames=len(sequence.frames),
        frame_dims=(dims.rows, dims.cols),
        pipeline_config_digest=cfg.digest(),
        gray_psnr_db=gray_psnr,
        color_psnr_db=color_psnr,
        improvement_pct=improvement,
        size_label=cfg.size_label,
    )
    writer.report(report)
    return report


_STAGE_SUFFIX = {"luma": "luma", "noise": "noisy", "filter": "filtered", "enhance": "enhanced"}


def run_stage(cfg: PipelineConfig, stage: str, jobs: int = 1) -> list[Path]:
    """Run a single stage over the input frames and write the results.

    Stages operate in the sequence's native kind (PGM sources stay grayscale,
    PPM sources are processed per channel), except `luma`, which always writes
    grayscale. `enhance` additionally writes pre/post histogram CSVs. Returns
    the written frame paths in index order.
    """
    if stage not in _STAGE_SUFFIX:
        raise ConfigurationError(f"unknown stage {stage!r}; expected one of {sorted(_STAGE_SUFFIX)}")
    if stage == "noise" and cfg.noise is None:
        raise ConfigurationError("the noise stage needs a noise spec in the config")
    if stage == "filter" and cfg.filter is None:
        raise ConfigurationError("the filter stage needs a filter spec in the config")
    if jobs < 1:
        raise ConfigurationError(f"jobs must be at least 1, got {jobs}")

    sequence = ingest_frames(cfg.input_dir)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    writer = _ArtifactWriter(out_dir)
    name = cfg.sample_name or sequence.name
    pad = max(3, len(str(len(sequence.frames) - 1)))
    suffix = _STAGE_SUFFIX[stage]
    gray_kind = stage == "luma" or sequence.native_kind == "gray"

    def transform_plane(plane: PixelBuffer, index: int, slot: int) -> PixelBuffer:
        if stage == "noise":
            return apply_noise(plane, _frame_noise(cfg.noise, index, slot))
        if stage == "filter":
            return _apply_filter(plane, cfg.filter)
        return plane

    def work(item) -> Path:
        index, frame = item
        try:
            if cfg.resize_to is not None:
                frame = resize_nearest(frame, cfg.resize_to)
            tag = f"{index:0{pad}d}"
            if gray_kind:
                plane = rgb_to_luma(frame, cfg.luma_weights)
                if stage == "enhance":
                    out, diagnostics = enhance_with_diagnostics(plane, cfg.sigma)
                    writer.histogram_csv(diagnostics.input_histogram, f"{name}_gray_hist_pre_{tag}.csv")
                    writer.histogram_csv(histogram(out), f"{name}_gray_hist_post_{tag}.csv")
                else:
                    out = transform_plane(plane, index, 0)
                return writer.frame(out, f"{name}_{suffix}_{tag}.pgm")
            if stage == "enhance":
                out = enhance_color(frame, cfg.sigma)
                writer.histogram_csv(color_histogram(frame), f"{name}_color_hist_pre_{tag}.csv")
                writer.histogram_csv(color_histogram(out), f"{name}_color_hist_post_{tag}.csv")
            else:
                planes = [
                    transform_plane(plane, index, slot)
                    for slot, plane in enumerate(frame.planes(), start=1)
                ]
                out = ColorBuffer.from_planes(*planes)
            return writer.frame(out, f"{name}_{suffix}_{tag}.ppm")
        except PipelineStageError:
            raise
        except Exception as exc:
            raise PipelineStageError(f"frame {index}: {exc}") from exc

    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(work, enumerate(sequence.frames)))
        return [work(item) for item in enumerate(sequence.frames)]
    except PipelineStageError:
        writer.remove_all()
        raise


def sequence_psnr(result: FrameSequence, reference: FrameSequence) -> PsnrResult:
    """Pooled PSNR of one sequence against a same-shaped reference sequence."""
    if len(result.frames) != len(reference.frames):
        raise ConfigurationError(
            f"sequence length mismatch: {len(result.frames)} vs {len(reference.frames)}"
        )
    sse = 0
    samples = 0
    for ours, theirs in zip(result.frames, reference.frames):
        sse += squared_error_total(ours, theirs)
        samples += ours.data.size
    return PsnrResult.from_mse(sse / samples)


def _format_db(value: float | None) -> str:
    if value is None:
        return "n/a"
    if math.isinf(value):
        return "inf"
    return f"{value:.2f}"


def report_table(reports: list[MetricsReport]) -> tuple[str, str]:
    """Render reports as (csv_text, aligned_text), one row per sample.

    The improvement column is recomputed from the gray/color PSNR pair when
    both are present and finite; missing values render as n/a.
    """
    if not reports:
        raise ConfigurationError("report_table needs at least one report")
    header = ["sample", "size", "frames", "gray_psnr_db", "color_psnr_db", "improvement_pct"]
    rows = [header]
    for report in reports:
        improvement = report.improvement_pct
        if (
            report.gray_psnr_db is not None
            and report.color_psnr_db is not None
            and math.isfinite(report.gray_psnr_db)
            and math.isfinite(report.color_psnr_db)
            and report.color_psnr_db != 0
        ):
            improvement = improvement_pct(report.gray_psnr_db, report.color_psnr_db)
        rows.append(
            [
                report.sample_name,
                report.size_label if report.size_label is not None else "n/a",
                str(report.n_frames),
                _format_db(report.gray_psnr_db),
                _format_db(report.color_psnr_db),
                f"{improvement:.2f}" if improvement is not None else "n/a",
            ]
        )
    csv_text = "\n".join(",".join(row) for row in rows) + "\n"
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    aligned = "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    ) + "\n"
    return csv_text, aligned
