"""Graph-signal sampling and reconstruction toolkit.

Core layers: graph containers and the graph Fourier transform (``graphs``),
filters in both domains (``filters``), vertex/frequency sampling operators
(``sampling``), subspace models and recovery (``recovery``), sampling-set
selection (``selection``), graph-regularized matrix completion
(``completion``), synthetic generators and experiment drivers
(``generators``, ``experiments``). The ``service`` subpackage exposes the
toolkit over HTTP; ``cli`` is a thin client for it.
"""
from .errors import (
    BudgetTooLarge,
    DimensionMismatch,
    GraphSampError,
    IndexOutOfRange,
    InsufficientSupport,
    IntervalTooSmall,
    InvalidSpec,
    ModelInvalid,
    NonFiniteKernel,
    NonSymmetricOperator,
    NotDivisible,
    SingularInformationMatrix,
    SingularSystem,
    SolverDiverged,
)
from .graphs import (
    Graph,
    GraphSignal,
    SignalDomain,
    SpectralDecomposition,
    VariationOperatorKind,
    build_laplacian,
    connected_components,
    decompose_graph,
    eigendecompose,
    gft,
    igft,
)
from .filters import (
    ChebyshevApprox,
    PolynomialFilter,
    SpectralKernel,
    apply_spectral_filter,
    apply_vertex_filter,
    chebyshev_apply,
    chebyshev_fit,
    chebyshev_interval,
    estimate_lambda_max,
    localized_operator,
    resolve_kernel,
)
from .sampling import (
    FrequencySampler,
    SamplingMatrixView,
    VertexSampler,
    fold_spectrum,
    frequency_sample,
    frequency_sampler_view,
    identity_view,
    vertex_sample,
    vertex_sampler_view,
)
from .recovery import (
    Bandlimited,
    PeriodicSpectrum,
    PiecewiseConstant,
    RecoveryReport,
    SpectralShapes,
    build_generator,
    check_ds_condition,
    pgs_correction_kernel,
    recover,
    recover_bandlimited_vertex,
    recover_periodic_frequency,
    regularized_recover,
    synthesize,
)
from .selection import (
    Criterion,
    SelectionResult,
    coherence_distribution,
    error_covariance,
    greedy_select,
    greedy_select_localized,
    greedy_select_regularized,
    random_select,
)
from .completion import (
    CompletionProblem,
    active_sample_greedy,
    apply_system,
    bl_cross_sample,
    dglr_objective,
    dglr_solve,
)
from .generators import Community, Complete, Cycle, Path, RandomSensor, gen_graph
from .experiments import EXPERIMENT_IDS, ExperimentConfig, ExperimentResult, run_experiment
from .selftest import run_selftest

__version__ = "0.1.0"
