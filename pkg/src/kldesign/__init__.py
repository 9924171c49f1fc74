"""Space-filling designs of minimal Kullback-Leibler information to the uniform law."""

from ._backend import DEFAULT as BACKEND
from .criteria import CriteriaReport, coverage, discrepancy_centered_l2, discrepancy_l2, evaluate_all, mindist, mst_stats
from .design import Design, DesignFormatError, SeededRng, read_design, uniform_point, validate, write_design
from .entropy import (
    EULER_GAMMA,
    DegenerateKernelError,
    KernelSpec,
    ZeroDistanceError,
    bandwidth,
    entropy_mc,
    entropy_mc_uniform,
    entropy_nn,
    epanechnikov_alpha,
    kernel_eval,
    kernel_support_probability,
    unit_ball_volume,
    update_after_exchange,
)
from .generators import GeneratorSpec, gen_halton, gen_hammersley, gen_lhs, gen_optimized, gen_random, generate
from .optimizer import Objective, OptimizerConfig, Trace, exchange_run, mindist_objective, multi_start

__version__ = "0.1.0"
