"""gfc: gradient-domain image editing via spectral Poisson solves.

Reconstructs images from gradient or Laplacian fields with a single
Fourier-domain convolution against a numerically inverted difference stencil,
and builds editing tools (seamless blending, gradient thresholding,
edge-map merging) on top of that solver.
"""

from .fields import (
    FieldStats,
    MultiChannelImage,
    VectorField,
    as_field,
    crop_pad,
    pad_zero,
    stats,
)
from .diffops import (
    LAPLACE_KERNEL,
    divergence,
    divergence_periodic,
    gaussian_blur,
    gradient,
    gradient_periodic,
    laplacian,
    laplacian_periodic,
    magnitude_orientation,
    recompose,
)
from .spectral import (
    DIRAC_STAMP,
    LAPLACE_STAMP,
    SOBEL_X_STAMP,
    SOBEL_Y_STAMP,
    DipoleSpectra,
    GreenSpectrum,
    KernelStamp,
    build_dipole_spectra,
    build_green_spectrum,
    cached_dipole_spectra,
    cached_green_spectrum,
    convolve_spectral,
    embed_stamp,
    invert_kernel,
)
from .solver import (
    SolveOptions,
    SolveReport,
    roundtrip_check,
    solve_batch,
    solve_gradient,
    solve_laplacian,
)
from .editing import (
    BlendJob,
    EdgeMap,
    MergeEdit,
    MergeParams,
    ThresholdEdit,
    color_correct,
    gdie_pipeline,
    gdm_merge,
    poisson_blend,
    threshold_gradient,
)
from .oracle import (
    circulant_apply,
    dense_poisson_solve,
    field_rmse,
    jacobi_solve,
    orthogonality_residual,
)
from .bench import (
    BenchRecord,
    parallel_batch_times,
    perturbation_benchmark,
    scaling_ratios,
    timing_scaling,
    write_csv,
)

__version__ = "0.1.0"
