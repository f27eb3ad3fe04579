"""Linear-optical generation of path-encoded three-photon GHZ states.

Five independent photons enter five interferometer circuits that share a
row of four splitters; conditioning on two mediator detectors leaves the
other three photons entangled.  The package provides the post-selected
pipeline, entanglement analytics of the conditional states, a
distinguishable-photon error model for imperfect two-photon interference,
and a brute-force occupation-number simulator that cross-checks everything.
"""

from .circuit import CircuitLayout, Element, apply_element_single, standard_layout
from .entanglement import (
    EntanglementReport,
    PureState3,
    classify,
    entropy_bits,
    reduce_single,
    three_tangle,
)
from .histories import (
    HistoryEngine,
    enumerate_joint_histories,
    evaluate_coefficient,
    overlap_curves,
    postselect_detectors,
    postselect_single_occupancy,
)
from .ideal import (
    ConditionalOutcome,
    condition_on_pair,
    conditional_outcomes,
    detector_states,
    ghz_up_to_local_phase,
    initial_state,
    postselect_no_invasion,
    run_pipeline,
)
from .states import SparseState, inner_product, normalize, project_rank1, tensor

__version__ = "0.1.0"

__all__ = [
    "CircuitLayout",
    "ConditionalOutcome",
    "Element",
    "EntanglementReport",
    "HistoryEngine",
    "PureState3",
    "SparseState",
    "apply_element_single",
    "classify",
    "condition_on_pair",
    "conditional_outcomes",
    "detector_states",
    "entropy_bits",
    "enumerate_joint_histories",
    "evaluate_coefficient",
    "ghz_up_to_local_phase",
    "initial_state",
    "inner_product",
    "normalize",
    "overlap_curves",
    "postselect_detectors",
    "postselect_no_invasion",
    "postselect_single_occupancy",
    "project_rank1",
    "reduce_single",
    "run_pipeline",
    "standard_layout",
    "tensor",
    "three_tangle",
    "__version__",
]
