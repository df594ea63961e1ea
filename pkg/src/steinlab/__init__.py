"""Rearrangements, Lorentz-type norms and Fourier inequalities on grids."""

__version__ = "0.1.0"

from .gridfn import GridFunction, GridSpec, StepFunction, as_grid_function  # noqa: E402
from .rearrange import dyadic_samples, rearrangement_1d, repeated_rearrangement  # noqa: E402
from .norms import (  # noqa: E402
    anisotropic_lorentz_norm,
    frak_norm,
    lorentz_norm,
    mixed_lorentz_norm,
    n_norm,
    phi_functional,
)
from .fourier import fourier_transform, inverse_fourier_transform, plancherel_defect  # noqa: E402
from .maximal import box_maximal_average, maximal_grid  # noqa: E402
from .corpus import CorpusSpec, generate  # noqa: E402

__all__ = [
    "GridFunction", "GridSpec", "StepFunction", "as_grid_function",
    "rearrangement_1d", "repeated_rearrangement", "dyadic_samples",
    "lorentz_norm", "frak_norm", "phi_functional", "anisotropic_lorentz_norm",
    "n_norm", "mixed_lorentz_norm",
    "fourier_transform", "inverse_fourier_transform", "plancherel_defect",
    "box_maximal_average", "maximal_grid",
    "CorpusSpec", "generate",
]
