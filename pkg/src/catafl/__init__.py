"""Cumulative AFL entropy laboratory for quantized perturbed cat maps."""

from .bounds import (
    BoundReport,
    abelian_saturation,
    commutant_saturation,
    dimensional_bounds,
    pseudospin_saturation,
)
from .classical import (
    CatMapParams,
    TorusPoint,
    iterate_classical,
    ks_entropy,
    lyapunov_exponents,
    perturbed_step,
)
from .engine import (
    EntropyTrace,
    PurifiedState,
    afl_rate_estimate,
    afl_step,
    block_diagonal_entropy,
    cumulative_afl_trace,
    environment_state,
    initial_sigma,
    partial_trace_purifier,
    partial_trace_system,
    sector_additivity_check,
    state_entropy,
    tensor_additivity_check,
)
from .numerics import (
    Spectrum,
    haar_random_unitary,
    hermitian_eigenvalues,
    shannon_entropy,
    von_neumann_entropy,
)
from .partitions import (
    DIRECT_SUM,
    IDENTITY_SPIN,
    MEASURE_Z,
    SECTOR_RESOLVED,
    Partition,
    commutant_partition,
    random_projective,
    symmetric_partition,
    tensor_partition,
)
from .quantize import QuantizedMap, gauss_average, quantize
from .symmetry import (
    AlgebraDecomposition,
    ChargeDecomposition,
    CommutationClass,
    PseudospinFrame,
    SymmetryOp,
    charge_decompose,
    classify_inversion,
    inversion,
    momentum_shift,
    pseudospin_decompose,
    shift_inversion_algebra,
)

__version__ = "0.1.0"
