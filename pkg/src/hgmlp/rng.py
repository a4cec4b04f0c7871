"""Per-purpose random streams derived from one master seed.

Every source of randomness in the package (weight init, dropout masks,
splits, structural perturbation, synthetic data) draws from its own
stream so that changing one knob never reshuffles unrelated draws.
"""

import numpy as np

# Stream identifiers. Values are part of the reproducibility contract:
# renumbering them changes every seeded artifact.
INIT = 0
DROPOUT = 1
SPLIT = 2
PERTURB = 3
SYNTH_STRUCTURE = 4
SYNTH_NOISE = 5
FEATURES = 6


def stream(seed, purpose, index=0):
    """Return a Generator for (seed, purpose, index).

    `index` separates repeated uses of one purpose, e.g. trial k of a
    grid search. Same triple, same stream, bitwise.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(purpose), int(index)))
    return np.random.default_rng(ss)
