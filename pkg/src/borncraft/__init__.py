"""borncraft: exact output distributions of small quantum circuits, their
query oracles, and provably-correct subspace-recovery learners, with a
reproducible experiment harness."""

__version__ = "0.1.0"

from .gf2 import (
    AffineSubspace,
    BitMatrix,
    BitVec,
    in_affine_span,
    max_independent_subset,
    nullspace,
    rank,
    solve,
)
from .circuit import (
    Circuit,
    Gate,
    T_NOISE_RATE,
    depth,
    format_circuit,
    parity_circuit,
    parse_circuit,
    random_circuit,
    route_nearest_neighbor,
)
from .statevector import (
    DenseDist,
    StateVector,
    circuit_unitary,
    opnorm_tv_check,
    run_state,
    sv_distribution,
)
from .stabilizer import StabTableau, simulate_clifford, support
from .dist import (
    AffineUniform,
    Dense,
    Dist,
    FunctionDist,
    NoisyParity,
    ParityCorrelation,
    PointMass,
    Product,
    SampleOracle,
    StatOracle,
    dist_from_json,
    dist_to_json,
    embed,
    marginalize,
    tv,
    uniform,
)
from .learn import (
    LearnReport,
    LearnedAffine,
    closure_learn,
    lpn_brute_force,
    recover_affine,
    sq_correlation_learner,
)
from .harness import (
    ExperimentResult,
    ExperimentSpec,
    InfeasibleGridError,
    run,
    trial_rng,
    wilson_interval,
    wilson_sigma,
)

__all__ = [
    "AffineSubspace",
    "AffineUniform",
    "BitMatrix",
    "BitVec",
    "Circuit",
    "Dense",
    "DenseDist",
    "Dist",
    "ExperimentResult",
    "ExperimentSpec",
    "FunctionDist",
    "Gate",
    "InfeasibleGridError",
    "LearnReport",
    "LearnedAffine",
    "NoisyParity",
    "ParityCorrelation",
    "PointMass",
    "Product",
    "SampleOracle",
    "StatOracle",
    "StateVector",
    "T_NOISE_RATE",
    "circuit_unitary",
    "closure_learn",
    "depth",
    "dist_from_json",
    "dist_to_json",
    "embed",
    "format_circuit",
    "in_affine_span",
    "lpn_brute_force",
    "marginalize",
    "max_independent_subset",
    "nullspace",
    "opnorm_tv_check",
    "parity_circuit",
    "parse_circuit",
    "random_circuit",
    "rank",
    "recover_affine",
    "route_nearest_neighbor",
    "run",
    "run_state",
    "simulate_clifford",
    "solve",
    "sq_correlation_learner",
    "StabTableau",
    "support",
    "sv_distribution",
    "trial_rng",
    "tv",
    "uniform",
    "wilson_interval",
    "wilson_sigma",
]
