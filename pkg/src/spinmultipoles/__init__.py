"""Majorana constellations, phase-space densities and multipole spectra of
pure spin-S states."""

__version__ = "0.1.0"

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .analysis import (
    ChampionRecord,
    NamedState,
    SearchResult,
    catalog_get,
    max_multipole_search,
    random_state,
    spectrum_report,
)
from .angular import (
    cg_band,
    cg_exact,
    clebsch_gordan,
    multipole_norm,
    spin_cartesian,
    tensor_operator,
)
from .convert import (
    constellation_from_state,
    husimi,
    husimi_grid,
    rotate_state,
    state_from_constellation,
    state_from_elementary,
    stellar_coefficients,
    stellar_eval,
)
from .core import (
    ZETA_INF,
    Constellation,
    DomainError,
    RotationSU2,
    SpinLabel,
    SpinState,
    Star,
    constellation_from_dict,
    constellation_to_dict,
    rotate_constellation,
    state_equiv,
    state_from_dict,
    state_to_dict,
    stereographic_to_sphere,
)
from .multipoles import (
    MultipoleSpectrum,
    coherent_multipole_closed_form,
    coherent_spectrum_lengths,
    exact_multipole_lengths,
    multipoles_from_constellation,
    multipoles_from_state,
    noon_extreme_multipole,
    one_design_residual,
    peak_rank_continuous,
    star_addition_update,
    stokes_moment_z,
    stokes_vector,
)
from .transitions import (
    TransitionSpec,
    ring_constellation,
    ring_multipoles_closed_form,
    spread_constellation,
    spread_elementary_closed_form,
    spread_small_t_quadratic,
    spread_state_closed_form,
    transition_sweep,
)

__all__ = [
    "KERNEL_IMPLEMENTATION",
    "ZETA_INF",
    "ChampionRecord",
    "Constellation",
    "DomainError",
    "MultipoleSpectrum",
    "NamedState",
    "RotationSU2",
    "SearchResult",
    "SpinLabel",
    "SpinState",
    "Star",
    "TransitionSpec",
    "__version__",
    "catalog_get",
    "cg_band",
    "cg_exact",
    "clebsch_gordan",
    "coherent_multipole_closed_form",
    "coherent_spectrum_lengths",
    "constellation_from_dict",
    "constellation_from_state",
    "constellation_to_dict",
    "exact_multipole_lengths",
    "husimi",
    "husimi_grid",
    "max_multipole_search",
    "multipole_norm",
    "multipoles_from_constellation",
    "multipoles_from_state",
    "noon_extreme_multipole",
    "one_design_residual",
    "peak_rank_continuous",
    "random_state",
    "ring_constellation",
    "ring_multipoles_closed_form",
    "rotate_constellation",
    "rotate_state",
    "spectrum_report",
    "spin_cartesian",
    "spread_constellation",
    "spread_elementary_closed_form",
    "spread_small_t_quadratic",
    "spread_state_closed_form",
    "star_addition_update",
    "state_equiv",
    "state_from_constellation",
    "state_from_dict",
    "state_from_elementary",
    "state_to_dict",
    "stellar_coefficients",
    "stellar_eval",
    "stereographic_to_sphere",
    "stokes_moment_z",
    "stokes_vector",
    "tensor_operator",
    "transition_sweep",
]
