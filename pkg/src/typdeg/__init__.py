"""Typicality, neutrality, and truth probability over finite structures.

A property is typical in a structure when it holds on a strict majority of
elements, neutral when it holds on exactly half.  The package computes the
proportion of all structures of a given size in which a first-order
property is typical or neutral, and the probability that a sentence holds,
three ways: exhaustive enumeration, exact closed-form counting, and
seeded Monte Carlo estimation; plus sequence/convergence analysis and a
CLI over all of it.
"""

from .analysis import (
    ConvergenceReport,
    SampleBudget,
    SequencePoint,
    build_sequence,
    convergence_report,
    limit_target,
    sequence_to_csv,
)
from .combinatorics import (
    binomial,
    central_binomial_within_bound,
    falling_factorial,
    half_binomial_sum,
    stirling2,
)
from .degrees import (
    Caps,
    CapExceededError,
    DegreeReport,
    neutrality_degree,
    partition_identity_check,
    truth_probability,
    typicality_degree,
)
from .logic import (
    Formula,
    ParseError,
    classify,
    evaluate,
    extension_size,
    parse_property,
    render,
    satisfies_at_least,
)
from .montecarlo import (
    GENERATOR_ID,
    Estimate,
    estimate_degree,
    estimate_truth_probability,
    make_rng,
    wilson_interval,
)
from .structures import (
    DISTINCT,
    FREE,
    FUNCTION,
    GRAPH,
    UNARY,
    Signature,
    Structure,
    decode_structure,
    enumerate_structures,
    predicate_atoms,
    sample_structure,
    structure_count,
    structure_index,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Signature", "Structure", "FREE", "DISTINCT", "UNARY", "FUNCTION", "GRAPH",
    "structure_count", "decode_structure", "structure_index",
    "enumerate_structures", "sample_structure", "predicate_atoms",
    "Formula", "ParseError", "parse_property", "render", "evaluate",
    "extension_size", "classify", "satisfies_at_least",
    "Caps", "CapExceededError", "DegreeReport", "typicality_degree",
    "neutrality_degree", "truth_probability", "partition_identity_check",
    "Estimate", "GENERATOR_ID", "make_rng", "wilson_interval",
    "estimate_degree", "estimate_truth_probability",
    "SequencePoint", "SampleBudget", "ConvergenceReport", "build_sequence",
    "convergence_report", "sequence_to_csv", "limit_target",
    "binomial", "falling_factorial", "stirling2", "half_binomial_sum",
    "central_binomial_within_bound",
]
