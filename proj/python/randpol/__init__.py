"""Randomized-readout actor-critic core operations.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    RandomBasis,
    RunningMeanStd,
    __version__,
    actor_critic_counts,
    default_config_text,
    elu,
    evaluate_checkpoint,
    gae,
    gaussian_entropy,
    gaussian_log_prob,
)
