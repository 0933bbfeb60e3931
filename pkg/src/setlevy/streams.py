"""Deterministic random-stream derivation.

Every sampling routine in the package draws from a Philox generator keyed by
(seed, kind, *index).  Streams for distinct keys are independent, so batches
can be produced in any order, or in parallel, with bit-identical results.
"""

from __future__ import annotations

import numpy as np

# Stream kinds.  The codes are part of the reproducibility contract: changing
# them changes every sampled path.
PATH = 0       # one full sample path, indexed by path number
BATCH = 1      # a chunk of Monte Carlo draws, indexed by chunk number
REFINE = 2     # conditional cell splitting, indexed by (path, level, cell)
SUITE = 3      # seed derivation for verification suites


def stream(seed: int, kind: int, *index: int) -> np.random.Generator:
    """Return the generator for stream (seed, kind, *index)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(kind, *index))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, kind: int, *index: int) -> int:
    """Collapse (seed, kind, *index) into a single 64-bit sub-seed."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(kind, *index))
    return int(ss.generate_state(1, np.uint64)[0])
