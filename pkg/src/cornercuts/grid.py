"""Exact grid search with local zoom refinement.

A search space is split into *outer* axes (evaluated one point at a time,
e.g. slope parameters) and *inner* axes (handed to the evaluator in bulk,
e.g. a grid of fractional points).  The evaluator may skip infeasible
inner points however it likes; rows come back in canonical grid order no
matter how many worker processes ran.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Optional, Sequence

from .geom2d import rat

Axis = tuple[Fraction, ...]

THREADS_ENV = "CORNERCUTS_THREADS"


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def frange(lo, hi, step) -> Axis:
    """Exact arithmetic progression lo, lo+step, ... <= hi."""
    lo, hi, step = rat(lo), rat(hi), rat(step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    n = int((hi - lo) / step)
    return tuple(lo + k * step for k in range(n + 1))


@dataclass(frozen=True)
class GridRow:
    point: tuple[Fraction, ...]
    value: Fraction
    tag: str = ""
    round: int = 0


@dataclass
class SearchResult:
    rows: list[GridRow] = field(default_factory=list)
    best: Optional[GridRow] = None
    sense: str = "min"
    evaluated: int = 0  # feasible points, whether or not their rows were kept


BlockEval = Callable[[tuple, Sequence[Axis]], list]


def refine_axis(axis: Axis, center: Fraction, zoom: int, span: int) -> Axis:
    """Uniform axis around ``center``, ``zoom`` times finer than locally."""
    vals = sorted(set(map(rat, axis)))
    center = rat(center)
    if len(vals) < 2:
        return (center,)
    i = vals.index(center) if center in vals else None
    gaps = []
    if i is None:
        gaps = [b - a for a, b in zip(vals, vals[1:])]
    else:
        if i > 0:
            gaps.append(vals[i] - vals[i - 1])
        if i + 1 < len(vals):
            gaps.append(vals[i + 1] - vals[i])
    step = max(gaps) / rat(zoom)
    return tuple(center + k * step for k in range(-span, span + 1))


def _better(a, b, sense: str) -> bool:
    """Strict improvement of value ``a`` over ``b`` (None loses to anything)."""
    if b is None:
        return True
    return a < b if sense == "min" else a > b


def _run_block(outer, *, block_eval, inner_axes, keep, sense):
    block = block_eval(outer, inner_axes=inner_axes)
    best = None
    for item in block:
        if best is None or _better(item[1], best[1], sense):
            best = item
    if keep == "all":
        kept = block
    elif keep == "block-best" and best is not None:
        kept = [best]
    else:
        kept = []
    return len(block), kept, best


def _evaluate(block_eval: BlockEval, outer_axes, inner_axes, workers: int, rnd: int,
              keep: str, sense: str):
    outer_points = list(itertools.product(*outer_axes))
    job = partial(_run_block, block_eval=block_eval, inner_axes=tuple(inner_axes),
                  keep=keep, sense=sense)
    if workers > 1 and len(outer_points) > 1:
        chunk = max(1, len(outer_points) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            blocks = list(ex.map(job, outer_points, chunksize=chunk))
    else:
        blocks = [job(p) for p in outer_points]
    rows, count, best = [], 0, None
    for outer, (n, kept, block_best) in zip(outer_points, blocks):
        count += n
        for inner, value, tag in kept:
            rows.append(GridRow(tuple(outer) + tuple(inner), value, tag, rnd))
        if block_best is not None and (best is None or _better(block_best[1], best.value, sense)):
            inner, value, tag = block_best
            best = GridRow(tuple(outer) + tuple(inner), value, tag, rnd)
    return rows, count, best


def grid_search(block_eval: BlockEval, outer_axes: Sequence[Axis], inner_axes: Sequence[Axis] = (),
                *, sense: str = "min", rounds: int = 3, zoom: int = 10, span: int = 3,
                workers: int = 1, keep: str = "all") -> SearchResult:
    """Evaluate the full grid, then zoom ``rounds`` times around the incumbent.

    ``keep`` selects which rows are retained: every feasible point
    ("all"), the best point of each outer cell ("block-best") or none.
    The incumbent is tracked either way.  Ties keep the earliest row, so
    the incumbent is reproducible.
    """
    if keep not in ("all", "block-best", "none"):
        raise ValueError("keep must be 'all', 'block-best' or 'none'")
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    if rounds < 0:
        raise ValueError("refinement rounds must be >= 0")
    outer_axes = [tuple(rat(x) for x in a) for a in outer_axes]
    inner_axes = [tuple(rat(x) for x in a) for a in inner_axes]
    if any(len(a) == 0 for a in outer_axes + inner_axes):
        raise ValueError("empty grid axis")
    res = SearchResult(sense=sense)
    n_outer = len(outer_axes)
    for rnd in range(rounds + 1):
        rows, count, best = _evaluate(block_eval, outer_axes, inner_axes, workers, rnd, keep, sense)
        res.rows.extend(rows)
        res.evaluated += count
        if best is not None and (res.best is None or _better(best.value, res.best.value, sense)):
            res.best = best
        if res.best is None or rnd == rounds:
            break
        c = res.best.point
        outer_axes = [refine_axis(a, c[i], zoom, span) for i, a in enumerate(outer_axes)]
        inner_axes = [refine_axis(a, c[n_outer + i], zoom, span) for i, a in enumerate(inner_axes)]
    return res
