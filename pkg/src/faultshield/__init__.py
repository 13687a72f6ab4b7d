"""Bit-exact emulation of recomputation-based fault detection for word-wise
Barrett reduction inside a Cooley-Tukey NTT butterfly."""

from .arith import (
    PARAM_SETS,
    ParamError,
    Params,
    barrett_step,
    make_params,
    named_params,
    oracle_modmul,
    reduce_canonical,
    split_words,
)
from .campaign import CampaignConfig, CampaignStats, run_campaign
from .faults import FaultSpec, Kind, NotApplicable, Site, inject, miss_oracle, run_trial
from .mbrfd import ReductionTrace, mbrfd
from .ntt import Poly, TwiddleTable, find_psi, gen_twiddles, ntt_forward, ntt_reference
from .overhead import ResourceCount, overhead_pct, sec
from .recomp import Scheme, SwapChoice, compare, swap_bits, swap_delta

__version__ = "0.1.0"
