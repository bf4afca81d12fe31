"""Exact error terms of the residue-class counts at geometric checkpoints,
plus least-squares growth exponents.

The tracked quantity is the scaled residual m*N_j(x) - x = m*R_j(x), an
exact integer (no division by m, no floating subtraction), recorded at a
geometric schedule of checkpoints.  Growth exponents come from fitting
log|R| against log x.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .residues import ResidueTally, RootTable, root_table
from .sieve import DEFAULT_SEGMENT_SIZE, PrimeTable, iter_segments

#: Four checkpoints per decade.
DEFAULT_RATIO = 10.0 ** 0.25

#: Fewest nonzero checkpoints a growth fit will accept.
MIN_FIT_POINTS = 5


class InsufficientDataError(ValueError):
    """Too few nonzero checkpoints to fit a growth exponent."""


@dataclass(frozen=True)
class ErrorCheckpoint:
    """scaled_residuals[j] = m*N_j(x) - x; exact integers, summing to zero
    (every n <= x lands in exactly one class)."""

    m: int
    x: int
    scaled_residuals: np.ndarray

    def counts(self) -> np.ndarray:
        """The underlying class counts, reconstructed exactly."""
        return (self.scaled_residuals + self.x) // self.m


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares slope of log|error| vs log x.

    index is the class j for count-error fits and the character k for
    character-sum fits.
    """

    index: int
    alpha_hat: float
    points_used: int
    residual_rms: float


@dataclass
class CheckpointSeries:
    """All checkpoints for one modulus, ascending in x."""

    m: int
    checkpoints: list[ErrorCheckpoint] = field(default_factory=list)

    def to_csv(self, fileobj) -> None:
        """One row per (x, j): header m,x,j,scaled_residual."""
        writer = csv.writer(fileobj, lineterminator="\n")
        writer.writerow(["m", "x", "j", "scaled_residual"])
        for cp in self.checkpoints:
            for j, sr in enumerate(cp.scaled_residuals):
                writer.writerow([self.m, cp.x, j, int(sr)])

    def to_json_obj(self) -> dict:
        """Same fields as the CSV, as a JSON-ready document."""
        rows = [
            {"m": self.m, "x": cp.x, "j": j, "scaled_residual": int(sr)}
            for cp in self.checkpoints
            for j, sr in enumerate(cp.scaled_residuals)
        ]
        return {"m": self.m, "rows": rows}


def checkpoint(tally: ResidueTally) -> ErrorCheckpoint:
    """Snapshot the scaled residuals of a 1-anchored tally."""
    if tally.lo != 1:
        raise ValueError("checkpoints are defined for tallies anchored at 1")
    if tally.x < 1:
        raise ValueError(f"tally is empty (x = {tally.x})")
    if tally.x > (1 << 62) // tally.m:
        raise OverflowError(
            f"x = {tally.x} too large to form exact m*N - x at m = {tally.m}"
        )
    scaled = tally.m * tally.counts - tally.x
    return ErrorCheckpoint(m=tally.m, x=tally.x, scaled_residuals=scaled)


def checkpoint_schedule(x_max: int, ratio: float = DEFAULT_RATIO) -> list[int]:
    """Geometric positions round(10 * ratio^t) up to x_max, deduplicated,
    with x_max itself always included."""
    if x_max < 10:
        raise ValueError(f"x_max must be >= 10, got {x_max}")
    if not ratio > 1.0:
        raise ValueError(f"ratio must be > 1, got {ratio}")
    positions = {x_max}
    t = 0
    while True:
        x = round(10.0 * ratio**t)
        if x > x_max:
            break
        positions.add(x)
        t += 1
    return sorted(positions)


def record_many(
    moduli: Iterable[int],
    x_max: int,
    ratio: float = DEFAULT_RATIO,
    *,
    table: PrimeTable | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> dict[int, CheckpointSeries]:
    """Record checkpoint series for several moduli in one sieve pass.

    The sieve is the expensive part; folding its 8-bit histogram into any
    number of moduli costs ~64 adds per modulus per checkpoint slice.
    """
    moduli = list(dict.fromkeys(moduli))
    if not moduli:
        raise ValueError("need at least one modulus")
    for m in moduli:
        if m < 1:
            raise ValueError(f"modulus must be >= 1, got {m}")
    schedule = checkpoint_schedule(x_max, ratio)
    counts = {m: np.zeros(m, dtype=np.int64) for m in moduli}
    series = {m: CheckpointSeries(m=m) for m in moduli}

    def fold(block: np.ndarray) -> None:
        if len(block) == 0:
            return
        hist = np.bincount(block, minlength=64).astype(np.int64)
        for m in moduli:
            np.add.at(counts[m], np.arange(len(hist)) % m, hist)

    next_cp = 0
    for segment in iter_segments(
        x_max, table=table, segment_size=segment_size, workers=workers
    ):
        start = 0
        while next_cp < len(schedule) and schedule[next_cp] < segment.hi:
            x = schedule[next_cp]
            fold(segment.values[start : x - segment.lo + 1])
            start = x - segment.lo + 1
            for m in moduli:
                tally = ResidueTally(m=m, x=x, counts=counts[m].copy())
                series[m].checkpoints.append(checkpoint(tally))
            next_cp += 1
        fold(segment.values[start:])
    return series


def record_series(
    m: int,
    x_max: int,
    ratio: float = DEFAULT_RATIO,
    *,
    table: PrimeTable | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> CheckpointSeries:
    """Checkpoint series for a single modulus; see record_many."""
    return record_many(
        [m], x_max, ratio, table=table, segment_size=segment_size, workers=workers
    )[m]


def _fit_loglog(xs: list[int], magnitudes: list[float], index: int) -> GrowthFit:
    if len(xs) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need at least {MIN_FIT_POINTS} nonzero checkpoints, have {len(xs)}"
        )
    log_x = np.log(np.asarray(xs, dtype=np.float64))
    log_y = np.log(np.asarray(magnitudes, dtype=np.float64))
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = log_y - (slope * log_x + intercept)
    return GrowthFit(
        index=index,
        alpha_hat=float(slope),
        points_used=len(xs),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
    )


def growth_exponent(series: CheckpointSeries, j: int) -> GrowthFit:
    """Fit log|R_j(x)| against log x over checkpoints where R_j != 0.

    R_j(x) = N_j(x) - x/m is recovered exactly as scaled_residual / m.
    """
    if not 0 <= j < series.m:
        raise ValueError(f"need 0 <= j < m, got j={j}, m={series.m}")
    xs: list[int] = []
    magnitudes: list[float] = []
    for cp in series.checkpoints:
        scaled = int(cp.scaled_residuals[j])
        if scaled != 0:
            xs.append(cp.x)
            magnitudes.append(abs(scaled) / series.m)
    return _fit_loglog(xs, magnitudes, j)


def character_growth_exponent(
    series: CheckpointSeries, k: int, roots: RootTable | None = None
) -> GrowthFit:
    """Same fit for |S_k(x)|, rebuilt from the checkpointed counts."""
    m = series.m
    if not 0 < k < m:
        raise ValueError(f"need 0 < k < m, got k={k}, m={m}")
    if roots is None:
        roots = root_table(m)
    elif roots.m != m:
        raise ValueError(f"root table is for modulus {roots.m}, need {m}")
    weights = roots.powers[(np.arange(m) * k) % m]
    xs: list[int] = []
    magnitudes: list[float] = []
    for cp in series.checkpoints:
        magnitude = abs(complex(np.sum(weights * cp.counts())))
        if magnitude != 0.0:
            xs.append(cp.x)
            magnitudes.append(magnitude)
    return _fit_loglog(xs, magnitudes, k)
