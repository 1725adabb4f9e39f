"""Phase-space numerics for beam-splitter states, Wigner entropies and
interference formulas in a truncated Fock basis."""

from .bs_states import (
    BSStateSpec,
    bs_mixture_wigner,
    bs_output_operator,
    check_routes,
    elementary_bs_state_operator,
    elementary_bs_wigner,
    husimi_bs_wigner,
    unbalanced_bs_wigner,
)
from .entropy import (
    EntropyReport,
    conjecture_margin_scan,
    p_norm,
    renyi_bound,
    renyi_entropy,
    shannon_entropy,
)
from .fock import (
    OperatorMatrix,
    PureState,
    TwoModeOperator,
    beam_splitter_unitary,
    coherent_state,
    displaced_parity,
    displacement_matrix,
    fock_state,
    gaussian_pure_state,
    mixture,
    parity_matrix,
    partial_trace,
    squeeze_matrix,
    superposition,
    thermal_state,
)
from .interference import (
    ResidualReport,
    fourier_duality_check,
    hbar_scaled_inner_check,
    lemma1_check,
    lieb_norm_check,
    verify_cross,
    verify_general,
    verify_inner,
    verify_outer,
)
from .phase_space import (
    PhaseField,
    PhaseSpaceGrid,
    convolve,
    cross_wigner,
    fourier_transform,
    husimi,
    inverse_weyl,
    marginals,
    rescale,
    symplectic_fourier,
    weyl_transform,
    wigner,
)

__all__ = [
    "BSStateSpec",
    "bs_mixture_wigner",
    "bs_output_operator",
    "check_routes",
    "elementary_bs_state_operator",
    "elementary_bs_wigner",
    "husimi_bs_wigner",
    "unbalanced_bs_wigner",
    "EntropyReport",
    "conjecture_margin_scan",
    "p_norm",
    "renyi_bound",
    "renyi_entropy",
    "shannon_entropy",
    "OperatorMatrix",
    "PureState",
    "TwoModeOperator",
    "beam_splitter_unitary",
    "coherent_state",
    "displaced_parity",
    "displacement_matrix",
    "fock_state",
    "gaussian_pure_state",
    "mixture",
    "parity_matrix",
    "partial_trace",
    "squeeze_matrix",
    "superposition",
    "thermal_state",
    "ResidualReport",
    "fourier_duality_check",
    "hbar_scaled_inner_check",
    "lemma1_check",
    "lieb_norm_check",
    "verify_cross",
    "verify_general",
    "verify_inner",
    "verify_outer",
    "PhaseField",
    "PhaseSpaceGrid",
    "convolve",
    "cross_wigner",
    "fourier_transform",
    "husimi",
    "inverse_weyl",
    "marginals",
    "rescale",
    "symplectic_fourier",
    "weyl_transform",
    "wigner",
]

__version__ = "0.1.0"
