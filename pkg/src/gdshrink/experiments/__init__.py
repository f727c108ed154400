from .multidim import (
    MultiDimDesign,
    axis_variances,
    build_multidim_design,
    full_rank_design,
    grid_coords,
    rank_one_design,
)
from .reconstruction import (
    ReconstructionResult,
    dst_baseline,
    has_improvement_trend,
    psnr,
    psnr_trend,
    reconstruct_sweep,
)
from .signals import SignalSource, SynthSpec, resolve
