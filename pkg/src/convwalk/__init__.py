"""Convolution random walks on finite groups: ergodicity and mixing verdicts."""

from .classify import (
    ClassifyOptions,
    CorpusSpec,
    ErgodicityReport,
    arc_family_demo,
    classify,
    coset_witness,
    covering_index,
    default_corpus,
    noncompact_witness,
    verify_corpus,
)
from .errors import (
    ConvwalkError,
    GroupMismatchError,
    InputError,
    NumericalDegeneracy,
    TheoremViolation,
)
from .estimators import ErgodicityClassifier, LeftConvolution, SpectralFeatures
from .fourier import (
    Representation,
    adapted_fs_check,
    builtin_irreps,
    characters,
    fs_transform,
    matrix_coefficient,
    orthogonality_check,
    peter_weyl_check,
)
from .group import (
    FiniteGroup,
    GroupSpec,
    Subgroup,
    build_group,
    cyclic,
    dihedral,
    direct_product,
    generated_subgroup,
    minimal_normal_coset,
    normal_closure,
    parse_group_spec,
    symmetric,
)
from .measure import (
    Measure,
    ProbabilityMeasure,
    ZMeasure,
    adjoint,
    cesaro,
    convolve,
    dirac,
    haar,
    parse_measure,
    power,
    support,
    tv_norm,
    uniform_on,
)
from .operator import (
    fixed_space_dim,
    lambda1,
    lambda1_zero,
    norm_sweep,
    op_norm_zero,
    spectral_projection_at_one,
    spectrum,
    unimodular_spectrum,
)

__version__ = "0.1.0"
