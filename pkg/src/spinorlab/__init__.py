"""Hecke eigenvalues of genus-2 Siegel eigenforms from local Satake data.

Local values, closed-form generating-series certificates, weighted moments,
sign statistics and B-free sieves, driven by real or synthetic forms.
"""

from .errors import SpinorError
from .satake import EigenForm, SatakeLocal, from_alphas, from_traces, recover_local, synth_form

__all__ = [
    "EigenForm",
    "SatakeLocal",
    "SpinorError",
    "from_alphas",
    "from_traces",
    "recover_local",
    "synth_form",
]
