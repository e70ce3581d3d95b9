"""boxstab: exact stabbing of axis-parallel boxes by axis-parallel flats.

Exact-rational predicates (stabbing, co-stabbability, containment, slicing),
minimum k-flat transversal and maximum scattered-set solvers with verifiable
certificates, constructive scattered-set extraction (greedy, slicing, strip
refinement, rainbow), an explicit enumerated counterexample family with
machine-checkable nesting witnesses, and a dichotomy experiment harness.
"""

from .core import (
    AxisFlat,
    Box,
    Family,
    FamilySequence,
    Interval,
    Rational,
    Strip,
    box,
    co_stabbable,
    contains,
    cube,
    family_of,
    flat,
    lift_flat,
    overlap_axes,
    rat,
    slice_box,
    stabs,
)
from .counterexample import (
    NestingWitness,
    counterexample_box,
    counterexample_family,
    first_rational_in_box,
    nesting_violation,
    nesting_witness,
    union_prefix_family,
    verify_nesting,
)
from .enumeration import (
    point_index,
    rational_at,
    rational_index,
    rational_point_at,
)
from .experiments import (
    DichotomyReport,
    DichotomyRow,
    GeneratorSpec,
    dichotomy_run,
    generate,
    report_to_csv,
    report_to_json,
)
from .scattered import (
    RainbowCert,
    ScatteredCert,
    StabGraph,
    StripRefinement,
    greedy_scattered,
    max_scattered,
    rainbow_scattered,
    refinement_violation,
    scattered_by_slicing,
    scattered_violation,
    stab_graph,
    strip_refine,
    verify_scattered,
)
from .serialize import (
    DocumentError,
    emit_certificate,
    emit_family,
    emit_sequence,
    parse_certificate,
    parse_family,
    parse_sequence,
)
from .transversal import (
    HeavinessReport,
    TransversalCert,
    canonical_flats,
    greedy_transversal,
    is_t_heavy,
    min_transversal,
    transversal_violation,
    verify_transversal,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
