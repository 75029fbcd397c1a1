"""Numerical toolkit for the half-Laplacian Liouville equation on the line,
its circle pullback with a point defect at -i, holomorphic disk maps built
from boundary data, and the curve-topology machinery (rotation index, words
of Blank, Seifert splitting) behind curvature-quantization checks.

Hot kernels (pairwise segment intersection, mesh shortest paths, winding
counts) are JIT-compiled; set LIOUVILLE_DISK_NO_NUMBA=1 to force the
numpy/scipy fallback path.  LIOUVILLE_DISK_THREADS caps scan parallelism.
"""

__version__ = "0.1.0"

from .spectral import (  # noqa: F401
    PeriodicGrid,
    SingularField,
    SpectralRep,
    analyze,
    green_convolve,
    grid_angles,
    half_laplacian,
    hilbert,
    poisson_extend,
    singular_half_laplacian,
    synthesize,
)
from .line import (  # noqa: F401
    CurvatureData,
    LineField,
    asymptotic_slope,
    line_integral,
    pull_back,
    pv_half_laplacian_line,
    stereo_inverse,
    stereo_project,
    transfer_equation,
)
from .disk import (  # noqa: F401
    BoundaryTrace,
    DiskMap,
    analytic_completion,
    blaschke_fixture,
    boundary_curvature,
    boundary_polyline,
    build_phi,
    conformal_distance,
    curvature_mass,
    mobius_recenter,
)
from .curves import (  # noqa: F401
    PolyCurve,
    corner_angle_check,
    jitter,
    rotation_index,
    self_intersections,
)
from .arrangement import Arrangement, build_arrangement  # noqa: F401
from .blank import (  # noqa: F401
    BlankWord,
    blank_word,
    contract,
    extendability_check,
    seifert_decompose,
)
from .quant import (  # noqa: F401
    Bubble,
    BubbleParams,
    bubble,
    classify_case,
    concentration_scan,
    detect_blowup,
    lambda_audit,
    pinching_probe,
    verify_solution,
)
