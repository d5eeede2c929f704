"""Seeded Monte Carlo simulator for first-passage statistics.

This is a deliberately independent estimator of the same quantities the
linear-algebra routines compute: walk lengths estimate mean first passage
times, and per-node visit tallies estimate fundamental-matrix entries.
It exists so the two routes can be checked against each other.

Reproducibility contract
------------------------
Walks are simulated in batches of :data:`BATCH_WALKS`.  Batch ``b`` of
the pair ``(source, target)`` draws from a PCG64 generator seeded with
``SeedSequence(entropy=(seed, source, target, b))``, and uniform deviates
are produced from raw 64-bit outputs as ``(raw >> 11) * 2**-53``.  Means
and standard errors are assembled from exact integer sums merged in batch
order, so results depend only on ``seed``, the pair, and the walk count,
never on scheduling or platform.  Growing ``walks_per_pair`` by whole
batches leaves the earlier batches' walks unchanged; resizing within a
partial batch redraws that batch, because draws are vectorised over the
batch's still-active walks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import CapExceededError, DomainError, OutOfRangeError
from .graph import TransitionMatrix
from .validation import check_index, check_transition_matrix

# Walks per RNG substream.  Fixed: changing it would change every result.
BATCH_WALKS = 16384

# Flush visit tallies to the bincount accumulator once this many raw
# (walk, node) index entries are pending, to bound memory on long walks.
_FLUSH_ENTRIES = 1 << 22


@dataclass(frozen=True)
class WalkConfig:
    """Simulation parameters.

    ``seed`` is a nonnegative 64-bit integer.  ``max_steps`` caps a single
    walk's length; hitting the cap raises :class:`CapExceededError` rather
    than silently biasing the estimate.
    """

    seed: int
    walks_per_pair: int = 100_000
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a nonnegative 64-bit integer")
        if int(self.walks_per_pair) < 1:
            raise DomainError("walks_per_pair must be at least 1")
        if int(self.max_steps) < 1:
            raise DomainError("max_steps must be at least 1")


def _uniforms(bitgen: np.random.PCG64, k: int) -> np.ndarray:
    """Top-53-bit uniforms in [0, 1) from raw 64-bit generator output."""
    raw = bitgen.random_raw(k)
    return (raw >> 11) * 2.0**-53


def _cdf_rows(values: np.ndarray) -> np.ndarray:
    """Row-wise CDFs with the tail pinned to exactly 1.

    Pinning every column at or past the last positive-probability entry
    guarantees each draw lands on a positive-probability state even when
    the float row sum falls a few ulp short of 1.
    """
    n = values.shape[1]
    cum = np.cumsum(values, axis=1)
    last = (n - 1) - np.argmax(values[:, ::-1] > 0, axis=1)
    tail = np.arange(n)[None, :] >= last[:, None]
    return np.where(tail, 1.0, cum)


def _simulate_pair(
    values: np.ndarray,
    source: int,
    target: int,
    config: WalkConfig,
    track_visits: bool,
):
    """Run all batches for one (source, target) pair.

    Returns exact integer tallies: walk count, step sum, step square sum,
    and (when tracked) per-node visit sums and square sums.
    """
    n = values.shape[0]
    cdf = _cdf_rows(values)
    total = int(config.walks_per_pair)
    max_steps = int(config.max_steps)

    count = 0
    step_sum = 0
    step_sqsum = 0
    visit_sum = [0] * n if track_visits else None
    visit_sqsum = [0] * n if track_visits else None
    truncated = 0

    walk_ids = np.arange(BATCH_WALKS, dtype=np.int64)
    n_batches = -(-total // BATCH_WALKS)
    for batch in range(n_batches):
        k = min(BATCH_WALKS, total - batch * BATCH_WALKS)
        seq = np.random.SeedSequence(
            entropy=(int(config.seed), int(source), int(target), int(batch))
        )
        bitgen = np.random.PCG64(seq)

        state = np.full(k, source, dtype=np.intp)
        steps = np.zeros(k, dtype=np.int64)
        active = np.arange(k, dtype=np.int64)
        counts = np.zeros(k * n, dtype=np.int64) if track_visits else None
        pending: list[np.ndarray] = []
        pending_len = 0
        if track_visits:
            pending.append(walk_ids[:k] * n + source)
            pending_len = k

        t = 0
        while active.size:
            if t == max_steps:
                truncated += int(active.size)
                break
            t += 1
            u = _uniforms(bitgen, active.size)
            nxt = (cdf[state[active]] > u[:, None]).argmax(axis=1)
            state[active] = nxt
            steps[active] += 1
            if track_visits:
                pending.append(active * n + nxt)
                pending_len += active.size
                if pending_len >= _FLUSH_ENTRIES:
                    counts += np.bincount(
                        np.concatenate(pending), minlength=k * n
                    )
                    pending = []
                    pending_len = 0
            active = active[nxt != target]

        count += k
        step_sum += int(steps.sum())
        step_sqsum += int((steps * steps).sum())
        if track_visits:
            if pending:
                counts += np.bincount(np.concatenate(pending), minlength=k * n)
            per_node = counts.reshape(k, n)
            sums = per_node.sum(axis=0)
            sqsums = (per_node * per_node).sum(axis=0)
            for i in range(n):
                visit_sum[i] += int(sums[i])
                visit_sqsum[i] += int(sqsums[i])

    if truncated:
        raise CapExceededError(truncated, total, max_steps)
    return count, step_sum, step_sqsum, visit_sum, visit_sqsum


def _mean_stderr(count: int, total: int, sqtotal: int) -> tuple[float, float]:
    mean = total / count
    if count < 2:
        return mean, float("nan")
    var = (sqtotal - total * total / count) / (count - 1)
    return mean, math.sqrt(max(var, 0.0) / count)


def _as_transition(m) -> np.ndarray:
    if isinstance(m, TransitionMatrix):
        return m.values
    return check_transition_matrix(m)


def _check_pair(n: int, source: int, target: int) -> tuple[int, int]:
    source = check_index(source, n, "source sector")
    target = check_index(target, n, "target sector")
    if source == target:
        raise OutOfRangeError("source and target must differ")
    return source, target


def simulate_mfpt(m, source: int, target: int, config: WalkConfig) -> tuple[float, float]:
    """Estimate the mean first passage time from ``source`` to ``target``.

    Returns ``(mean, stderr)`` over ``config.walks_per_pair`` simulated
    walks, where ``stderr`` is the sample standard deviation divided by
    the square root of the walk count.
    """
    values = _as_transition(m)
    source, target = _check_pair(values.shape[0], source, target)
    count, ssum, ssq, _, _ = _simulate_pair(values, source, target, config, False)
    return _mean_stderr(count, ssum, ssq)


def simulate_visit_profile(m, source: int, target: int, config: WalkConfig):
    """Estimate expected visits to every node on walks ``source -> target``.

    A walk's tally counts its starting node and each node it steps onto,
    including the final arrival, so the estimate for ``target`` itself is
    exactly 1 and the others estimate absorbing-chain expected visits.
    Returns ``(means, stderrs)`` as float arrays of length ``n``.
    """
    values = _as_transition(m)
    source, target = _check_pair(values.shape[0], source, target)
    count, _, _, vsum, vsq = _simulate_pair(values, source, target, config, True)
    n = values.shape[0]
    means = np.empty(n, dtype=np.float64)
    errs = np.empty(n, dtype=np.float64)
    for i in range(n):
        means[i], errs[i] = _mean_stderr(count, vsum[i], vsq[i])
    return means, errs


def simulate_visits(
    m, source: int, target: int, node: int, config: WalkConfig
) -> tuple[float, float]:
    """Estimate expected visits to ``node`` on walks ``source -> target``."""
    values = _as_transition(m)
    node = check_index(node, values.shape[0], "node")
    means, errs = simulate_visit_profile(m, source, target, config)
    return float(means[node]), float(errs[node])
