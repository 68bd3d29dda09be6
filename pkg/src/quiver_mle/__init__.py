"""Generic MLE existence for integrated PCA through star-quiver decompositions."""

from .dw import EngineError, dw_decomposition, kronecker_canonical, resolve_adjacent_pair, WorkingSequence
from .ipca import (
    EngineDisagreement,
    IpcaInstance,
    MleVerdict,
    Stability,
    check_condition_c,
    check_condition_d,
    decompose,
    mle_verdict,
    star_quiver,
)
from .oracle import (
    Decomposition,
    GenericOracle,
    generic_decomposition,
    generic_ext,
    generic_hom,
    generic_sigma_stable,
    is_generic_subdim,
    is_schur_root,
)
from .probe import (
    ProbeConfig,
    ProbeReport,
    SampleData,
    flip_flop,
    lambda_scale,
    minimize_trace_det_one,
    pca_closed_form,
    sample_representation,
)
from .quiver import (
    CyclicQuiverError,
    NotARootError,
    Quiver,
    QuiverError,
    RootClass,
    classify_root,
    euler_form,
    schofield_weight,
    weight_apply,
)

__version__ = "0.1.0"
