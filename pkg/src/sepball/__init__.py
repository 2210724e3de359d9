"""Frobenius-ball separability certificates for multipartite density matrices."""

from .criteria import (
    CertificationResult,
    PseudopureBound,
    ScalingReport,
    Verdict,
    certify_normalized,
    certify_real_separable,
    certify_unnormalized,
    in_g_cone,
    in_rlin,
    mu,
    normalized_radii,
    pseudopure_threshold,
    scaling_report,
    separable_ball_radius,
)
from .errors import (
    DimensionError,
    NotHermitianError,
    NumericalFailure,
    ScanCapExceeded,
    SepballError,
    TraceError,
)
from .hermitian import (
    MultipartiteStructure,
    apply_blockwise,
    block,
    frobenius_norm,
    hermitian,
    is_psd,
    operator_norm,
    partial_trace,
    partial_transpose,
    purity,
    tensor,
)
from .nmr import Bound, NmrScenario, ThresholdReport, eta_from_physics, pseudopure_polarization, qubit_threshold
from .oracle import Decomposition, ppt_check, search_decomposition, sqrt2_fixture_check
from .states import StateSpec, build, pseudopure, rng_from_seed, thermal_qubits, werner

__version__ = "0.1.0"
