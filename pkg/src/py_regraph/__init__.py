"""A desk-scale laboratory for uniform random regular graphs.

Sampling, local resampling by switchings, Green's functions with
tree-extension approximations and the Kesten--McKay law, plus the
Monte-Carlo experiments that measure eigenvalue rigidity and the
concentration of the Stieltjes transform.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("python-regraph")
except PackageNotFoundError:
    __version__ = "0.0.0"

from .graph import GraphError, RegularGraph, SamplingBudgetExceeded, sample_uniform
from .greens import GreensError, GreensMatrix, greens, q_of, sc_residuals
from .km import classical_locations, m_d, m_sc, rho_d
from .models import LawParams, ModelValidationError, RunConfig, SpectralPoint
from .resampling import apply_switch, sample_resampling_data
from .settings import Settings, load_settings
from .treeext import tree_extension_P, x_ell, y_ell
from .woodbury import woodbury_delta

__all__ = [
    "Settings",
    "load_settings",
    "RegularGraph",
    "GraphError",
    "SamplingBudgetExceeded",
    "sample_uniform",
    "GreensMatrix",
    "GreensError",
    "greens",
    "q_of",
    "sc_residuals",
    "rho_d",
    "m_sc",
    "m_d",
    "classical_locations",
    "tree_extension_P",
    "x_ell",
    "y_ell",
    "apply_switch",
    "sample_resampling_data",
    "woodbury_delta",
    "LawParams",
    "RunConfig",
    "SpectralPoint",
    "ModelValidationError",
]
