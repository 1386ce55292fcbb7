"""Data generators and the empirical size/power study harness.

Scenarios cover compound-symmetry multivariate normal data (optionally
pushed through ln(y^2) for a heavy-tailed non-normal variant), a
high-dimensional univariate-blocks variant, and the pairwise-independent
but mutually dependent sign-triplet construction. The study runner draws
``reps`` datasets, calibrates each requested statistic by permutation
with a shared per-repetition substream, and reports rejection rates at
level alpha (strict p < alpha, so a p-value exactly at alpha does not
reject).

Seeding: repetition r generates data from substream (seed, r, 0) and all
measures within that repetition share the permutation seed derived from
(seed, r, 1). Sharing resamples across measures makes equal statistics
produce identical decisions repetition by repetition.
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, NotPositiveDefinite, UnsupportedFormat
from .inference import PermutationPlan, adaptive_B, permutation_test, resolve_kind
from .measures import CostGuard
from .sample import BlockSpec, ComponentizedSample

__all__ = [
    "Example",
    "Hypothesis",
    "ScenarioConfig",
    "PowerCell",
    "PowerReport",
    "chol_compound_symmetry",
    "gen_normal_compound",
    "gen_lognormal_sq",
    "gen_sign_triplet",
    "generate_scenario",
    "run_power_study",
    "emit_report",
    "parse_report_csv",
]


class Example(enum.Enum):
    """Built-in scenario families."""

    EX1 = "EX1"  # two 5-d blocks, joint normal
    EX2 = "EX2"  # two 5-d blocks, ln(y^2) of joint normal
    EX3 = "EX3"  # three 5-d blocks, joint normal
    EX4 = "EX4"  # three 5-d blocks, ln(y^2) of joint normal
    EX5 = "EX5"  # d univariate blocks, joint normal
    TRIPLET = "TRIPLET"  # sign-coupled triplet: pairwise independent, mutually dependent


class Hypothesis(enum.Enum):
    NULL = "NULL"
    ALT = "ALT"


_DEFAULTS = {
    # example: (d, block_dim, rho_alt)
    Example.EX1: (2, 5, 0.1),
    Example.EX2: (2, 5, 0.4),
    Example.EX3: (3, 5, 0.1),
    Example.EX4: (3, 5, 0.4),
    Example.EX5: (None, 1, 0.1),
    Example.TRIPLET: (3, 5, None),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """One cell family of the study: scenario, size, measures, seeds."""

    example: Example
    hypothesis: Hypothesis
    n: int
    reps: int
    measures: tuple
    seed: int
    alpha: float = 0.1
    d: int | None = None
    block_dim: int | None = None
    rho: float | None = None
    B: int | None = None
    guard: CostGuard | None = None

    def __post_init__(self):
        object.__setattr__(self, "example", Example(self.example))
        object.__setattr__(self, "hypothesis", Hypothesis(self.hypothesis))
        object.__setattr__(
            self, "measures", tuple(resolve_kind(m) for m in self.measures)
        )
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.measures:
            raise ValueError("need at least one measure")
        d_def, q_def, rho_def = _DEFAULTS[self.example]
        d = self.d if self.d is not None else d_def
        if d is None:
            raise ValueError(f"{self.example.value} needs an explicit d")
        q = self.block_dim if self.block_dim is not None else q_def
        if self.hypothesis is Hypothesis.NULL:
            rho = 0.0
        else:
            rho = self.rho if self.rho is not None else rho_def
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "block_dim", int(q))
        object.__setattr__(self, "rho", rho)
        if self.example is not Example.TRIPLET:
            dim = self.d * self.block_dim
            _check_cs_rho(dim, self.rho)

    @property
    def effective_B(self) -> int:
        return self.B if self.B is not None else adaptive_B(self.n)


def _check_cs_rho(dim: int, rho: float):
    if dim >= 2 and not (-1.0 / (dim - 1) < rho < 1.0):
        raise NotPositiveDefinite(
            f"compound symmetry needs -1/(dim-1) < rho < 1; got rho={rho}, dim={dim}"
        )


def chol_compound_symmetry(dim: int, rho: float) -> np.ndarray:
    """Lower Cholesky factor of the unit-diagonal, constant-off-diagonal matrix."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if dim == 1:
        return np.ones((1, 1))
    _check_cs_rho(dim, rho)
    sigma = np.full((dim, dim), rho)
    np.fill_diagonal(sigma, 1.0)
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def _mvn_cs(n: int, dim: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    if rho == 0.0:
        return rng.standard_normal((n, dim))
    chol = chol_compound_symmetry(dim, rho)
    return rng.standard_normal((n, dim)) @ chol.T


def gen_normal_compound(cfg: ScenarioConfig, rng: np.random.Generator) -> ComponentizedSample:
    """n draws of a compound-symmetry normal, split into d equal blocks."""
    dim = cfg.d * cfg.block_dim
    data = _mvn_cs(cfg.n, dim, cfg.rho, rng)
    return ComponentizedSample(data, BlockSpec((cfg.block_dim,) * cfg.d))


def gen_lognormal_sq(cfg: ScenarioConfig, rng: np.random.Generator) -> ComponentizedSample:
    """Elementwise ln(y^2) of the compound-symmetry normal draw.

    Rows containing an exact zero (a probability-zero event) are redrawn
    so the transform is always finite.
    """
    dim = cfg.d * cfg.block_dim
    y = _mvn_cs(cfg.n, dim, cfg.rho, rng)
    bad = np.any(y == 0.0, axis=1)
    while bad.any():
        y[bad] = _mvn_cs(int(bad.sum()), dim, cfg.rho, rng)
        bad = np.any(y == 0.0, axis=1)
    return ComponentizedSample(np.log(y**2), BlockSpec((cfg.block_dim,) * cfg.d))


def gen_sign_triplet(
    n: int, q: int, rng: np.random.Generator, *, dependent: bool = True
) -> ComponentizedSample:
    """Three q-dimensional blocks (x, y, z), pairwise independent.

    With ``dependent=True`` the first coordinate of z is
    sign(x_1 * y_1) * w with w exponential of mean 1/sqrt(2), so
    (x, y, z) is mutually dependent while every pair stays independent;
    the symmetric-sign exponential has unit variance, matching the other
    coordinates. With ``dependent=False`` the sign is an independent
    fair coin and the triplet is mutually independent.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    x = rng.standard_normal((n, q))
    y = rng.standard_normal((n, q))
    w = rng.exponential(scale=1.0 / math.sqrt(2.0), size=n)
    if dependent:
        prod = x[:, 0] * y[:, 0]
        bad = prod == 0.0
        while bad.any():
            x[bad, 0] = rng.standard_normal(int(bad.sum()))
            y[bad, 0] = rng.standard_normal(int(bad.sum()))
            prod = x[:, 0] * y[:, 0]
            bad = prod == 0.0
        signs = np.sign(prod)
    else:
        signs = rng.choice([-1.0, 1.0], size=n)
    z = np.empty((n, q))
    z[:, 0] = signs * w
    if q > 1:
        z[:, 1:] = rng.standard_normal((n, q - 1))
    return ComponentizedSample(np.hstack([x, y, z]), BlockSpec((q, q, q)))


def generate_scenario(cfg: ScenarioConfig, rng: np.random.Generator) -> ComponentizedSample:
    """One dataset for the scenario."""
    if cfg.example is Example.TRIPLET:
        return gen_sign_triplet(
            cfg.n, cfg.block_dim, rng, dependent=cfg.hypothesis is Hypothesis.ALT
        )
    if cfg.example in (Example.EX2, Example.EX4):
        return gen_lognormal_sq(cfg, rng)
    return gen_normal_compound(cfg, rng)


@dataclass(frozen=True)
class PowerCell:
    """One (scenario, measure) cell of the study."""

    example: str
    hypothesis: str
    n: int
    d: int
    measure: str
    B: int
    reps: int
    rejections: int | None
    rate: float | None
    stderr: float | None
    note: str = ""

    @property
    def skipped(self) -> bool:
        return self.rejections is None


@dataclass(frozen=True)
class PowerReport:
    """Per-cell rejection rates with Monte Carlo standard errors."""

    cells: tuple

    def cell(self, measure) -> PowerCell:
        key = resolve_kind(measure).value
        for c in self.cells:
            if c.measure == key:
                return c
        raise KeyError(f"no cell for measure {key!r}")

    def merged(self, other: "PowerReport") -> "PowerReport":
        return PowerReport(cells=self.cells + other.cells)


def _rep_data_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(rep, 0)))


def _rep_perm_seed(seed: int, rep: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(rep, 1))
    return int(ss.generate_state(1, np.uint64)[0])


def run_power_study(cfg: ScenarioConfig) -> PowerReport:
    """Monte Carlo rejection rates for every requested measure.

    Each repetition generates one dataset shared by all measures and one
    shared permutation seed, then rejects when p < alpha strictly.
    Measures whose exhaustive sums exceed the budget are reported as
    skipped cells rather than silently approximated.
    """
    B = cfg.effective_B
    guard = cfg.guard or CostGuard()
    rejections = {m: 0 for m in cfg.measures}
    skipped: dict = {}
    for rep in range(cfg.reps):
        sample = generate_scenario(cfg, _rep_data_rng(cfg.seed, rep))
        plan = PermutationPlan(B=B, seed=_rep_perm_seed(cfg.seed, rep))
        for m in cfg.measures:
            if m in skipped:
                continue
            try:
                out = permutation_test(sample, m, plan, guard)
            except BudgetExceeded as exc:
                skipped[m] = f"budget exceeded: needs {exc.required:,}, allowed {exc.allowed:,}"
                rejections.pop(m, None)
                continue
            if out.p_value < cfg.alpha:
                rejections[m] += 1
    cells = []
    for m in cfg.measures:
        if m in skipped:
            cells.append(
                PowerCell(
                    example=cfg.example.value,
                    hypothesis=cfg.hypothesis.value,
                    n=cfg.n,
                    d=cfg.d,
                    measure=m.value,
                    B=B,
                    reps=cfg.reps,
                    rejections=None,
                    rate=None,
                    stderr=None,
                    note=skipped[m],
                )
            )
        else:
            k = rejections[m]
            rate = k / cfg.reps
            stderr = math.sqrt(rate * (1.0 - rate) / cfg.reps)
            cells.append(
                PowerCell(
                    example=cfg.example.value,
                    hypothesis=cfg.hypothesis.value,
                    n=cfg.n,
                    d=cfg.d,
                    measure=m.value,
                    B=B,
                    reps=cfg.reps,
                    rejections=k,
                    rate=rate,
                    stderr=stderr,
                )
            )
    return PowerReport(cells=tuple(cells))


_CSV_COLUMNS = (
    "example",
    "hypothesis",
    "n",
    "d",
    "measure",
    "B",
    "reps",
    "rejections",
    "rate",
    "stderr",
    "note",
)


def emit_report(report: PowerReport, format: str = "csv") -> str:
    """Render a report as csv, markdown, or json; csv round-trips losslessly."""
    if format == "csv":
        import csv

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for c in report.cells:
            writer.writerow(
                [
                    c.example,
                    c.hypothesis,
                    c.n,
                    c.d,
                    c.measure,
                    c.B,
                    c.reps,
                    "" if c.rejections is None else c.rejections,
                    "" if c.rate is None else repr(c.rate),
                    "" if c.stderr is None else repr(c.stderr),
                    c.note,
                ]
            )
        return buf.getvalue()
    if format == "markdown":
        lines = [
            "| " + " | ".join(_CSV_COLUMNS[:-1]) + " |",
            "|" + "---|" * (len(_CSV_COLUMNS) - 1),
        ]
        for c in report.cells:
            rate = "-" if c.rate is None else f"{c.rate:.3f}"
            stderr = "-" if c.stderr is None else f"{c.stderr:.3f}"
            rej = "-" if c.rejections is None else str(c.rejections)
            lines.append(
                f"| {c.example} | {c.hypothesis} | {c.n} | {c.d} | {c.measure} "
                f"| {c.B} | {c.reps} | {rej} | {rate} | {stderr} |"
            )
        return "\n".join(lines) + "\n"
    if format == "json":
        rows = [
            {
                "example": c.example,
                "hypothesis": c.hypothesis,
                "n": c.n,
                "d": c.d,
                "measure": c.measure,
                "B": c.B,
                "reps": c.reps,
                "rejections": c.rejections,
                "rate": c.rate,
                "stderr": c.stderr,
                "note": c.note,
            }
            for c in report.cells
        ]
        return json.dumps(rows, indent=2) + "\n"
    raise UnsupportedFormat(f"unknown report format {format!r}")


def parse_report_csv(text: str) -> PowerReport:
    """Inverse of ``emit_report(..., 'csv')``."""
    import csv

    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != _CSV_COLUMNS:
        raise UnsupportedFormat("unrecognized report header")
    cells = []
    for row in rows[1:]:
        rec = dict(zip(_CSV_COLUMNS, row))
        cells.append(
            PowerCell(
                example=rec["example"],
                hypothesis=rec["hypothesis"],
                n=int(rec["n"]),
                d=int(rec["d"]),
                measure=rec["measure"],
                B=int(rec["B"]),
                reps=int(rec["reps"]),
                rejections=None if rec["rejections"] == "" else int(rec["rejections"]),
                rate=None if rec["rate"] == "" else float(rec["rate"]),
                stderr=None if rec["stderr"] == "" else float(rec["stderr"]),
                note=rec["note"],
            )
        )
    return PowerReport(cells=tuple(cells))
