# modules/__init__.py
from .kernel_models import KernelModel, hardy_model, model_from_onb, standard_model
from .matrix_calculus import HermitianMatrix, absolute_value, apply_spectral, spectral_radius
from .berezin_core import berezin_norm, berezin_number, min_t_berezin, t_berezin_norm
from .block_operators import BlockOperator, direct_sum_model
from .orlicz import OrliczFn, custom_orlicz, factor_pair, power_orlicz
from .bound_catalog import BOUND_IDS, BoundReport
# The verification sub-package has its own __init__.py

__all__ = [
    "kernel_models", "matrix_calculus", "berezin_core", "block_operators",
    "orlicz", "bound_catalog", "cli_reports", "verification",
    "KernelModel", "hardy_model", "model_from_onb", "standard_model",
    "HermitianMatrix", "absolute_value", "apply_spectral", "spectral_radius",
    "berezin_norm", "berezin_number", "min_t_berezin", "t_berezin_norm",
    "BlockOperator", "direct_sum_model",
    "OrliczFn", "custom_orlicz", "factor_pair", "power_orlicz",
    "BOUND_IDS", "BoundReport",
]
