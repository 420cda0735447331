"""Exact-integer library for the conjugated Collatz dynamics.

The package verifies, at desk scale and with exact arithmetic, the
structural claims about the accelerated Collatz map transported to
odd-integer positions: the equivalence x ~ 4x-1, the power-of-two branch
recurrences, the chain ("string") partition of the positions, the
forward/backward progression evolutions with their counting identities,
and the 3n+p generalization.
"""

from .core import (
    DEFAULT_TRAJECTORY_STEPS,
    MAX_VALUE,
    WIDTH_BITS,
    Restriction,
    TrajectoryReport,
    WidthExceededError,
    accelerated_step,
    base_equivalent,
    collatz_step,
    conjugate_step,
    conjugate_step_casewise,
    higher_equivalent,
    higher_equivalent_n,
    inverse_lower_step,
    lower_equivalent,
    lower_step,
    odd_of,
    position_of,
    residual_mod3,
    restriction_index,
    restriction_of,
    trajectory_report,
)
from .family import (
    CASE_SYSTEM_PARAMS,
    CASE_SYSTEMS,
    CaseRule,
    Family,
    NonpositiveImageError,
    audit_case_system,
    case_system,
    exceptional_positions,
    family_equivalent,
    family_equivalent_n,
    family_evolve_forward,
    family_step,
    find_cycles,
    lower_branches,
    lower_preimages,
    string_scan,
    two_to_one_audit,
)
from .progressions import (
    Progression,
    SamplingVerdict,
    Signature,
    backward_signature,
    first_recurrence_backward,
    first_recurrence_forward,
    forward_signature,
    image_even_branch,
    image_odd_branch,
    intersect_residue,
    preimage_even_branch,
    preimage_odd_branch,
    sampling_lemma_check,
)
from .strings import (
    CoverageCount,
    EvolutionState,
    PartitionAuditReport,
    StringRecord,
    SweepReport,
    build_string_containing,
    coverage_count,
    evolve_backward,
    evolve_forward,
    expected_coverage,
    intercept_audit,
    partition_audit,
    passage_sweep,
    sweep_report_from_shards,
)

__version__ = "0.1.0"
