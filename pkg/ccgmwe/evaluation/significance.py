"""One-tailed randomized shuffling test on per-sentence dependency counts.

Each shuffle swaps the (correct, attempted, gold) triples of a sentence
between the two systems with probability one half and recomputes the pooled
F1 difference.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy

from ..errors import ConfigError, DataInconsistencyError

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1000
MAX_EXHAUSTIVE_SENTENCES = 24
TOLERANCE = 1e-12

Counts = Sequence[Tuple[str, int, int, int]]


@dataclass(frozen=True)
class SigResult:
    p_value: float
    observed: float
    iterations: int
    exhaustive: bool

    def __str__(self):
        return format_p(self.p_value)


def format_p(p: float) -> str:
    if p < 0.0001:
        return "p<0.0001"
    return "p={:.4f}".format(p)


def pooled_f1(totals):
    """F1 of pooled ``(correct, attempted, gold)`` totals along the last axis."""
    totals = numpy.asarray(totals, dtype=numpy.float64)
    correct, denominator = totals[..., 0], totals[..., 1] + totals[..., 2]
    with numpy.errstate(divide='ignore', invalid='ignore'):
        return numpy.where(denominator > 0, 2 * correct / denominator, 0.0)


def align(counts_x: Counts, counts_y: Counts) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Per-sentence count matrices of both systems, in the order of ``counts_x``."""
    x = {sid: (c, a, g) for sid, c, a, g in counts_x}
    y = {sid: (c, a, g) for sid, c, a, g in counts_y}
    if set(x) != set(y):
        missing = sorted(set(x) ^ set(y))
        raise DataInconsistencyError("Count files cover different sentences: {}".format(", ".join(missing)))
    if not x:
        raise DataInconsistencyError("Cannot test significance on zero sentences")
    ids = [sid for sid, *_ in counts_x]
    return (numpy.array([x[sid] for sid in ids], dtype=numpy.int64),
            numpy.array([y[sid] for sid in ids], dtype=numpy.int64))


def _count_at_least(x, y, masks, observed) -> int:
    delta = y - x
    masks = masks.astype(numpy.int64)
    shuffled_x = x.sum(axis=0) + masks @ delta
    shuffled_y = y.sum(axis=0) - masks @ delta
    diffs = pooled_f1(shuffled_x) - pooled_f1(shuffled_y)
    return int(numpy.count_nonzero(diffs >= observed - TOLERANCE))


def _exhaustive(x, y, observed) -> int:
    n = len(x)
    bits = numpy.arange(n, dtype=numpy.int64)
    total = 0
    for start in range(0, 2 ** n, BLOCK_SIZE * 64):
        patterns = numpy.arange(start, min(start + BLOCK_SIZE * 64, 2 ** n), dtype=numpy.int64)
        total += _count_at_least(x, y, (patterns[:, None] >> bits) & 1, observed)
    return total


def _sampled_block(x, y, observed, size, seed_sequence) -> int:
    rng = numpy.random.default_rng(seed_sequence)
    return _count_at_least(x, y, rng.integers(0, 2, size=(size, len(x))), observed)


def sig_test(counts_x: Counts, counts_y: Counts, iterations: int = 10000, seed: int = 1,
             exhaustive: Optional[bool] = None, workers: int = 1) -> SigResult:
    """Test whether system X is better than system Y.

    p = (shuffles with a difference >= observed + 1) / (shuffles + 1). All
    2^n swap patterns are enumerated when ``exhaustive`` is set, or when left
    as None and 2^n <= ``iterations``.
    """
    if iterations < 1:
        raise ConfigError("Iterations must be positive")
    if workers < 1:
        raise ConfigError("Workers must be positive")
    x, y = align(counts_x, counts_y)
    n = len(x)
    observed = float(pooled_f1(x.sum(axis=0)) - pooled_f1(y.sum(axis=0)))
    if exhaustive is None:
        exhaustive = n <= MAX_EXHAUSTIVE_SENTENCES and 2 ** n <= iterations
    if exhaustive:
        if n > MAX_EXHAUSTIVE_SENTENCES:
            raise ConfigError("Exhaustive test supports at most {} sentences, got {}".format(
                MAX_EXHAUSTIVE_SENTENCES, n))
        shuffles = 2 ** n
        at_least = _exhaustive(x, y, observed)
    else:
        shuffles = iterations
        sizes = [BLOCK_SIZE] * (iterations // BLOCK_SIZE)
        if iterations % BLOCK_SIZE:
            sizes.append(iterations % BLOCK_SIZE)
        children = numpy.random.SeedSequence(seed).spawn(len(sizes))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                blocks = list(pool.map(lambda job: _sampled_block(x, y, observed, *job), zip(sizes, children)))
        else:
            blocks = [_sampled_block(x, y, observed, size, child) for size, child in zip(sizes, children)]
        at_least = sum(blocks)
    p_value = (at_least + 1) / (shuffles + 1)
    logger.debug("Observed F1 difference %.6f over %d sentences; %d of %d shuffles at least as large",
                 observed, n, at_least, shuffles)
    return SigResult(p_value, observed, shuffles, exhaustive)
