"""Process-pool fan-out for Monte Carlo batches keyed by run index."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("QRS_THREADS", "1")))
    except ValueError:
        return 1


def run_blocks(block, args: tuple, runs: int, threads: int = 1) -> Counter:
    """
    Sum ``block(args, start, stop)`` over contiguous run ranges.  Each run
    draws from its own stream, so the result does not depend on ``threads``.
    ``block`` must be a module-level function (it is pickled).
    """
    threads = max(1, int(threads))
    if threads == 1 or runs < 2 * threads:
        return block(args, 0, runs)
    step = -(-runs // threads)
    starts = list(range(0, runs, step))
    total = Counter()
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(block, args, s, min(s + step, runs)) for s in starts]
        for f in futures:
            total.update(f.result())
    return total
