"""Multidimensional discrete-time quantum walks with linear-optics coin synthesis."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("optiwalk")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .analysis import (
    Partition,
    entanglement_entropy,
    is_product,
    multidegree_profile,
    reduced_density,
    schmidt_rank,
    von_neumann_entropy,
)
from .dof import (
    DoFDescriptor,
    DoFKind,
    FeasibilityLimits,
    bin_center,
    feasibility_check,
    orthogonality_report,
    time_bin_overlap,
)
from .optics import (
    BeamSplitterArray,
    CoinSpec,
    GlobalPhase,
    OpticalCircuit,
    PolarizationUnitary,
    builtin_coin,
    circuit_to_matrix,
    compile_coin,
    element_census,
    merge_pass,
)
from .unitary_core import (
    CSFactors,
    WavePlateAngles,
    bs,
    cs_decompose,
    embed_u4,
    haar_unitary,
    hwp,
    is_unitary,
    qwp,
    su2_synthesize,
)
from .walk import (
    StepBudgetError,
    WalkConfig,
    WalkState,
    WindowOverflowError,
    apply_coin,
    apply_shift,
    evolve,
    marginal,
    probability_distribution,
    spread,
    step,
)
