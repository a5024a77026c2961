"""Training-data schema, synthetic data generation, CSV I/O and hold-out splits.

A row describes one student's quiz outcome for one subject: correct-answer
counts at basic/medium/high difficulty (bla/mla/hla), the average score
derived from them, and a "<Course>-<Level>" class label.

All randomness comes from numpy's PCG64 generator (``np.random.default_rng``)
so the same seed reproduces the same dataset bit for bit.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LEVELS = ("Beginner", "Intermediate", "Advanced")
DEFAULT_SUBJECTS = ("DSA", "Java", "ML")
DEFAULT_Q_PER_LEVEL = 10

# Documented level cut points on the [0, 10] average-score scale.
INTERMEDIATE_MIN = 4.0
ADVANCED_MIN = 7.0

CSV_COLUMNS = ("subject", "bla", "mla", "hla", "avg_score", "label")


class DatasetError(ValueError):
    """Invalid record, malformed CSV content or a bad generator config."""


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str  # "categorical" or "numeric"


@dataclass(frozen=True)
class Schema:
    attributes: tuple[AttributeSpec, ...]
    label: str = "label"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)


# avg_score is the only numeric attribute; the three counts are treated as
# unordered categories by the classifiers.
DEFAULT_SCHEMA = Schema(
    attributes=(
        AttributeSpec("subject", "categorical"),
        AttributeSpec("bla", "categorical"),
        AttributeSpec("mla", "categorical"),
        AttributeSpec("hla", "categorical"),
        AttributeSpec("avg_score", "numeric"),
    )
)


@dataclass(frozen=True)
class StudentRecord:
    subject: str
    bla: int
    mla: int
    hla: int
    avg_score: float
    label: str


@dataclass(frozen=True)
class Dataset:
    schema: Schema
    rows: tuple[StudentRecord, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def labels(self) -> list[str]:
        return [r.label for r in self.rows]


@dataclass(frozen=True)
class GeneratorConfig:
    subjects: tuple[str, ...] = DEFAULT_SUBJECTS
    q_per_level: int = DEFAULT_Q_PER_LEVEL
    n_records: int = 5000
    noise_rate: float = 0.15
    seed: int = 0

    def __post_init__(self):
        if not self.subjects:
            raise DatasetError("subjects must be non-empty")
        if len(set(self.subjects)) != len(self.subjects):
            raise DatasetError("subjects must be unique")
        if self.q_per_level < 1:
            raise DatasetError("q_per_level must be >= 1")
        if self.n_records < 1:
            raise DatasetError("n_records must be >= 1")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise DatasetError("noise_rate must be in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise DatasetError("seed must fit in 64 unsigned bits")


def compute_average_score(bla: int, mla: int, hla: int, q_per_level: int = DEFAULT_Q_PER_LEVEL) -> float:
    """Weighted average score in [0, 10]: harder levels weigh more (1:2:3).

    At the default 10 questions per level this is exactly
    (bla + 2*mla + 3*hla) / 6.
    """
    for name, value in (("bla", bla), ("mla", mla), ("hla", hla)):
        if value < 0:
            raise DatasetError(f"{name} must be non-negative, got {value}")
        if value > q_per_level:
            raise DatasetError(f"{name} must be <= {q_per_level}, got {value}")
    return (bla + 2 * mla + 3 * hla) * 10 / (6 * q_per_level)


def ground_truth_label(subject: str, avg_score: float, subjects: tuple[str, ...] = DEFAULT_SUBJECTS) -> str:
    """Noise-free labeling rule used by the generator: thresholds at 4.0 / 7.0.

    Comparisons are inclusive on the lower edge of the higher tier.
    """
    if subject not in subjects:
        raise DatasetError(f"unknown subject {subject!r}")
    if not 0.0 <= avg_score <= 10.0:
        raise DatasetError(f"avg_score must be in [0, 10], got {avg_score}")
    if avg_score >= ADVANCED_MIN:
        level = "Advanced"
    elif avg_score >= INTERMEDIATE_MIN:
        level = "Intermediate"
    else:
        level = "Beginner"
    return f"{subject}-{level}"


def parse_label(label: str) -> tuple[str, str]:
    """Split "<Course>-<Level>" into its parts, validating the level token."""
    course, sep, level = label.rpartition("-")
    if not sep or not course or level not in LEVELS:
        raise DatasetError(f"malformed class label {label!r}")
    return course, level


def _adjacent_level(level: str, u: float) -> str:
    # Edge tiers have a single neighbour; Intermediate picks one at random.
    if level == "Beginner":
        return "Intermediate"
    if level == "Advanced":
        return "Intermediate"
    return "Beginner" if u < 0.5 else "Advanced"


def generate_synthetic(config: GeneratorConfig) -> Dataset:
    """Generate a labeled dataset from a per-student proficiency model.

    Per record, in this fixed draw order: subject (uniform), latent skill
    s ~ U[0,1], then bla ~ Binomial(q, min(s+0.25, 1)), mla ~ Binomial(q, s),
    hla ~ Binomial(q, max(s-0.25, 0)), so basic questions are easier than
    hard ones. The label comes from ground_truth_label, then with probability
    noise_rate the level is swapped for an adjacent tier.
    """
    rng = np.random.default_rng(config.seed)
    q = config.q_per_level
    rows = []
    for _ in range(config.n_records):
        subject = config.subjects[int(rng.integers(len(config.subjects)))]
        skill = float(rng.random())
        bla = int(rng.binomial(q, min(skill + 0.25, 1.0)))
        mla = int(rng.binomial(q, skill))
        hla = int(rng.binomial(q, max(skill - 0.25, 0.0)))
        avg = compute_average_score(bla, mla, hla, q)
        label = ground_truth_label(subject, avg, config.subjects)
        if float(rng.random()) < config.noise_rate:
            course, level = parse_label(label)
            u = float(rng.random()) if level == "Intermediate" else 0.0
            label = f"{course}-{_adjacent_level(level, u)}"
        rows.append(StudentRecord(subject, bla, mla, hla, avg, label))
    return Dataset(schema=DEFAULT_SCHEMA, rows=tuple(rows))


def format_score(value: float) -> str:
    """Render a score with at most 6 fractional digits, no trailing zeros."""
    return f"{value:.6f}".rstrip("0").rstrip(".")


def canonical_csv(dataset: Dataset) -> str:
    """The canonical CSV text for a dataset (UTF-8, header + one row per record)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in dataset.rows:
        writer.writerow([r.subject, r.bla, r.mla, r.hla, format_score(r.avg_score), r.label])
    return buf.getvalue()


def dataset_fingerprint(dataset: Dataset) -> str:
    """Row count plus content hash, e.g. "5000:3f9a..."."""
    digest = hashlib.sha256(canonical_csv(dataset).encode("utf-8")).hexdigest()
    return f"{len(dataset)}:{digest[:16]}"


def save_csv(dataset: Dataset, path: str | Path) -> None:
    Path(path).write_text(canonical_csv(dataset), encoding="utf-8")


def load_csv(path: str | Path, q_per_level: int = DEFAULT_Q_PER_LEVEL) -> Dataset:
    """Load a dataset, validating every row; errors carry 1-based line numbers."""
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty file: missing header") from None
    if tuple(header) != CSV_COLUMNS:
        raise DatasetError(f"line 1: bad header {header!r}, expected {','.join(CSV_COLUMNS)}")

    rows = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells:
            continue  # blank trailing line
        if len(cells) != len(CSV_COLUMNS):
            raise DatasetError(f"line {lineno}: expected {len(CSV_COLUMNS)} columns, got {len(cells)}")
        subject, bla_s, mla_s, hla_s, avg_s, label = cells
        if not subject:
            raise DatasetError(f"line {lineno}: empty subject")
        counts = {}
        for name, cell in (("bla", bla_s), ("mla", mla_s), ("hla", hla_s)):
            try:
                counts[name] = int(cell)
            except ValueError:
                raise DatasetError(f"line {lineno}: non-numeric {name} value {cell!r}") from None
        try:
            avg = compute_average_score(counts["bla"], counts["mla"], counts["hla"], q_per_level)
        except DatasetError as exc:
            raise DatasetError(f"line {lineno}: {exc}") from None
        try:
            stored_avg = float(avg_s)
        except ValueError:
            raise DatasetError(f"line {lineno}: non-numeric avg_score value {avg_s!r}") from None
        # The file stores at most 6 fractional digits; anything further off
        # than the rendering error cannot be the derived score.
        if abs(stored_avg - avg) > 5e-7:
            raise DatasetError(
                f"line {lineno}: avg_score {avg_s} does not match value derived from counts ({format_score(avg)})"
            )
        try:
            parse_label(label)
        except DatasetError as exc:
            raise DatasetError(f"line {lineno}: {exc}") from None
        rows.append(StudentRecord(subject, counts["bla"], counts["mla"], counts["hla"], avg, label))
    return Dataset(schema=DEFAULT_SCHEMA, rows=tuple(rows))


def holdout_split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded-permutation split: first floor(n * train_fraction) rows train."""
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(dataset)
    if n == 0:
        raise DatasetError("cannot split an empty dataset")
    n_train = math.floor(n * train_fraction)
    if n_train == 0 or n_train == n:
        raise DatasetError(f"degenerate split: {n} rows at fraction {train_fraction}")
    perm = np.random.default_rng(seed).permutation(n)
    train = tuple(dataset.rows[i] for i in perm[:n_train])
    test = tuple(dataset.rows[i] for i in perm[n_train:])
    return Dataset(dataset.schema, train), Dataset(dataset.schema, test)
