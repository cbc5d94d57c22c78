"""Local Laplacian filtering with a bit-exact model of a streaming accelerator.

The package has a floating-point reference filter, a fixed-point model of
the hardware datapath (shift-add convolutions, table-driven remapping,
per-coefficient sub-images) and a cycle-level model of how nine processing
units share one input link.
"""

from .convolution import Kernel3, conv3_ref, conv3_shift_add, pipeline_trace, sau
from .errors import (
    DepthError,
    DimensionMismatchError,
    GeometryError,
    ImageIOError,
    LLFError,
    NoProgressError,
    ValidationError,
)
from .hwsim import (
    ReplicationPlan,
    StreamConfig,
    emit_sim_csv,
    simulate_lpus,
    simulate_replication,
    sweep_bandwidth,
)
from .imfile import load_image, save_image
from .llf import (
    LpuConfig,
    SubImageSpec,
    llf_accel_model,
    llf_accel_model_q,
    llf_coefficient,
    llf_reference,
    llf_reference_rgb,
    run_lpu,
)
from .metrics import QualityReport, psnr
from .pyramid import Pyramid, collapse, downsample, gaussian_pyramid, laplacian_pyramid, upsample
from .remap import RemapLut, RemapParams, build_lut, remap_lut_apply, remap_pixel

__version__ = "0.1.0"
