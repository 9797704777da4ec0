"""Per-generation run statistics and CSV emission."""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass


@dataclass
class GenerationStats:
    generation: int
    mean_tree_size: float
    max_tree_size: int
    pool_used_peak: int
    pool_max_used: int
    allocated_slots: int
    best_fitness: float
    mean_fitness: float
    total_opcodes_evaluated: int
    generation_wall_time: float
    worker_busy_times: list[float]
    idle_fraction: float


FIELDS = [f.name for f in dataclasses.fields(GenerationStats)]


def idle_fraction(busy_times: list[float]) -> float:
    """Fraction of worker capacity spent waiting on the slowest worker.

    Each entry is one worker's active span; the phase lasts as long as the
    slowest. A single worker is never idle by definition.
    """
    if len(busy_times) <= 1:
        return 0.0
    span = max(busy_times)
    if span <= 0.0:
        return 0.0
    frac = 1.0 - sum(busy_times) / (len(busy_times) * span)
    return min(1.0, max(0.0, frac))


def effective_cores(nworkers: int, idle: float) -> float:
    return nworkers * (1.0 - idle)


def record_generation(
    generation: int,
    tree_sizes: list[int],
    fitnesses: list[float],
    pool_used_peak: int,
    pool_max_used: int,
    allocated_slots: int,
    total_opcodes: int,
    wall_time: float,
    busy_times: list[float],
) -> GenerationStats:
    """Assemble one fully populated stats row from an engine snapshot."""
    assert tree_sizes and fitnesses
    return GenerationStats(
        generation=generation,
        mean_tree_size=sum(tree_sizes) / len(tree_sizes),
        max_tree_size=max(tree_sizes),
        pool_used_peak=pool_used_peak,
        pool_max_used=pool_max_used,
        allocated_slots=allocated_slots,
        best_fitness=min(fitnesses),
        mean_fitness=sum(fitnesses) / len(fitnesses),
        total_opcodes_evaluated=total_opcodes,
        generation_wall_time=wall_time,
        worker_busy_times=list(busy_times),
        idle_fraction=idle_fraction(busy_times),
    )


def zero_wall_clock(row: GenerationStats) -> GenerationStats:
    """Copy of a row with all wall-clock-derived fields zeroed (golden files)."""
    return dataclasses.replace(
        row,
        generation_wall_time=0.0,
        worker_busy_times=[0.0] * len(row.worker_busy_times),
        idle_fraction=0.0,
    )


def emit_csv(series: list[GenerationStats], path) -> None:
    """Write header plus one row per generation; busy times ';'-joined."""
    if not series:
        raise ValueError("refusing to emit an empty stats series")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FIELDS)
        for row in series:
            writer.writerow(
                [
                    row.generation,
                    repr(row.mean_tree_size),
                    row.max_tree_size,
                    row.pool_used_peak,
                    row.pool_max_used,
                    row.allocated_slots,
                    repr(row.best_fitness),
                    repr(row.mean_fitness),
                    row.total_opcodes_evaluated,
                    repr(row.generation_wall_time),
                    ";".join(repr(t) for t in row.worker_busy_times),
                    repr(row.idle_fraction),
                ]
            )


def parse_csv(path) -> list[GenerationStats]:
    """Read back a file produced by emit_csv."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != FIELDS:
            raise ValueError(f"unexpected CSV header: {header}")
        for rec in reader:
            out.append(
                GenerationStats(
                    generation=int(rec[0]),
                    mean_tree_size=float(rec[1]),
                    max_tree_size=int(rec[2]),
                    pool_used_peak=int(rec[3]),
                    pool_max_used=int(rec[4]),
                    allocated_slots=int(rec[5]),
                    best_fitness=float(rec[6]),
                    mean_fitness=float(rec[7]),
                    total_opcodes_evaluated=int(rec[8]),
                    generation_wall_time=float(rec[9]),
                    worker_busy_times=[float(t) for t in rec[10].split(";") if t],
                    idle_fraction=float(rec[11]),
                )
            )
    return out
