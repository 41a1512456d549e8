"""Exact computation with enveloping semigroups of finite dynamical systems."""

from .cosgrid import GridModel, build_grid, iterate_adjoint, weak_star_limit_check
from .envelope import (
    Budget,
    ClassificationReport,
    MatrixSemigroup,
    Verdict,
    ZeroCertificate,
    classify,
    convex_koehler_zero,
    ellis,
    jacobs,
    kernel_image_check,
    koehler,
    minimal_unique_check,
    report_to_json_dict,
    zero_rank,
)
from .nets import (
    NetSample,
    abel,
    cesaro,
    cesaro_net,
    constant_net,
    detect_limit,
    folner_box,
    folner_net,
    interleave,
    verify_net,
)
from .operators import (
    Measure,
    OperatorMatrix,
    adjoint_matrix,
    adjoint_on_measure,
    decomposition_check,
    fixed_space,
    invariant_measures,
    koopman_matrix,
    separation_check,
)
from .subshift import (
    FIRST_COORDINATE,
    BinaryWord,
    CylinderFunction,
    WindowSystem,
    block_boundary,
    cesaro_trace,
    classify_subshift,
    fixed_windows,
    rolandex_prefix,
    window_closure,
    windows_system,
)
from .systems import (
    FiniteSystem,
    cyclic_shift_system,
    is_transitive,
    minimal_sets,
    orbit,
    random_system,
    transitivity,
)
from .transforms import (
    SizeCapError,
    Transformation,
    TransSemigroup,
    center,
    generate_closure,
    idempotents,
    kernel,
    left_zeros,
    restriction_epimorphism,
    factor_epimorphism,
    right_zeros,
    zero,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
