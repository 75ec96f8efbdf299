"""Continuous-time quantum walks and perfect state transfer on weighted graphs."""

from .graphs import (
    SubcubeSpec,
    WeightedGraph,
    build,
    cartesian,
    double_cone,
    half_join,
    join,
    path_hypercubic,
    regularity,
    standard,
    subcube_hypercube,
    uniform_weighting,
)
from .spectral import Spectrum, amplitude, eigendecompose, propagator
from .synth import (
    double_cone_weights,
    halfjoin_no_pst_probe,
    hamming_universal,
    hypercube_subcube_transfer,
)
from .walk import basis_state, certify, evolve, fidelity, scan, subcube_normal_state

__version__ = "0.1.0"
