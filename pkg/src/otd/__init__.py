"""Overcomplete symmetric order-3 tensor decomposition and its
method-of-moments applications: blind deconvolution of discrete
mixtures and parameter estimation for Gaussian mixtures with one shared
covariance.
"""

from .cumulants import (
    SampleSet,
    center,
    k3_fast,
    k3_naive,
    read_samples_csv,
    read_samples_json,
    sample_mean,
    second_moment,
    write_samples_csv,
    write_samples_json,
)
from .decompose import (
    DecompositionConfig,
    DecompositionResult,
    decompose,
    estimate_scales,
)
from .exceptions import (
    AttemptsExhausted,
    ComplexSpectrum,
    EigNonConvergence,
    FileFormatError,
    InfeasibleParameters,
    NonPositiveSingularVector,
    OtdError,
    ProbeDegenerate,
    RankDeficientComponents,
    RankTooLow,
    SingularPencil,
    SvdNonConvergence,
)
from .jennrich import JennrichConfig, diagonalize
from .linalg import (
    EigResult,
    SvdResult,
    eig_nonsymmetric,
    min_singular_pair,
    pseudoinverse,
    svd,
)
from .mixtures import (
    DeconvolutionConfig,
    DiscreteMixtureParams,
    GmmParams,
    blind_deconvolve,
    covariance_backout,
    decouple,
    estimate_gmm,
    psd_project,
)
from .synth import (
    MatchReport,
    NoiseSpec,
    gen_components,
    gen_mixture,
    match_components,
    perturb_tensor,
    robust_kruskal_rank,
    sample_mixture,
)
from .tensor import (
    ComponentMatrix,
    SymTensor3,
    contract,
    deflate,
    frobenius_distance,
    from_components,
    read_components_json,
    read_tensor_json,
    trilinear,
    write_components_json,
    write_tensor_json,
)

__version__ = "0.1.0"
