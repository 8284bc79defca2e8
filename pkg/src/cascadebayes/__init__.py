"""Bayesian network reconstruction from observed information cascades.

Samples the posterior distribution over graphs that could have produced a
set of time-stamped activation cascades, using Metropolis-Hastings moves
over single edges with an exact continuous-time independent-cascade
likelihood. Includes cascade simulation, posterior edge marginals, and
ROC-based evaluation against ground truth.
"""

__version__ = "0.1.0"
