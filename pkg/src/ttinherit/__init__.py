"""Tensor-train subtensor sampling: incoherence and conditioning inheritance.

The package measures how the key spectral properties of a tensor train —
unfolding incoherence and condition numbers — survive fiber-wise sampling
(keeping a subset of rows of an unfolding, or a row/column submatrix of it),
and verifies numerically that the sampled objects obey the known
inheritance inequalities.  All large-tensor work runs on the low-rank
interface factors; nothing ever materializes a full unfolding.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    GenerationError,
    NumericError,
    RankZeroError,
    SamplingError,
    SearchError,
    SingularityError,
    StructuralError,
    TrialError,
    TTInheritError,
)
from .multiindex import (
    IndexSet,
    Shape,
    delinearize,
    derived_rng,
    derived_seed,
    kron_extend,
    linearize,
    sample_without_replacement,
)
from .linalg import (
    DEFAULT_RANK_TOL,
    ThinSVD,
    condition_number,
    numerical_rank,
    pinv_spectral_norm,
    row_two_inf_norm,
    thin_qr,
    thin_svd,
)
from .tt import (
    TTTensor,
    column_submatrix,
    entry,
    left_interface,
    right_interface,
    row_restrict,
    submatrix_svd,
    to_dense,
    tt_rank_numerical,
    tt_svd_from_dense,
    unfolding_svd,
    validate,
)
from .container import load_tt, save_tt
from .properties import (
    ALPHA_1,
    IncoherencePair,
    InheritanceRecord,
    UnfoldingReport,
    alpha_i,
    alpha_it,
    beta_i,
    check_column_sampling_bounds,
    check_rank_preservation,
    check_row_sampling_bounds,
    incoherence,
    tt_incoherence,
)
from .generators import KINDS, GeneratorSpec, generate
from .experiment import (
    BoxplotSummary,
    ExperimentConfig,
    ExperimentResult,
    TrialResult,
    desk_preset,
    paper_preset,
    param_grid,
    run_experiment,
    run_trial,
    summarize_boxplot,
    write_outputs,
)

__all__ = [
    "__version__",
    # errors
    "TTInheritError",
    "DomainError",
    "StructuralError",
    "NumericError",
    "SamplingError",
    "RankZeroError",
    "SingularityError",
    "CapacityError",
    "SearchError",
    "GenerationError",
    "TrialError",
    "ConfigError",
    # multiindex
    "Shape",
    "IndexSet",
    "linearize",
    "delinearize",
    "kron_extend",
    "sample_without_replacement",
    "derived_rng",
    "derived_seed",
    # linalg
    "DEFAULT_RANK_TOL",
    "ThinSVD",
    "thin_qr",
    "thin_svd",
    "numerical_rank",
    "pinv_spectral_norm",
    "row_two_inf_norm",
    "condition_number",
    # tt + container
    "TTTensor",
    "validate",
    "entry",
    "to_dense",
    "left_interface",
    "right_interface",
    "unfolding_svd",
    "submatrix_svd",
    "tt_rank_numerical",
    "row_restrict",
    "column_submatrix",
    "tt_svd_from_dense",
    "save_tt",
    "load_tt",
    # properties
    "ALPHA_1",
    "IncoherencePair",
    "UnfoldingReport",
    "InheritanceRecord",
    "incoherence",
    "tt_incoherence",
    "alpha_it",
    "alpha_i",
    "beta_i",
    "check_rank_preservation",
    "check_row_sampling_bounds",
    "check_column_sampling_bounds",
    # generators
    "KINDS",
    "GeneratorSpec",
    "generate",
    # experiment
    "ExperimentConfig",
    "TrialResult",
    "BoxplotSummary",
    "ExperimentResult",
    "param_grid",
    "desk_preset",
    "paper_preset",
    "run_trial",
    "run_experiment",
    "summarize_boxplot",
    "write_outputs",
]
