"""Word-wise Barrett multiplication with a parallel recomputation path."""
from __future__ import annotations

from dataclasses import dataclass, field

from .arith import Params, split_words
from .recomp import (
    RENO_MODES,
    RESO_MODES,
    Scheme,
    SwapChoice,
    _reno_core,
    _reso_core,
    _reswo_core,
    compare,
    reno_remainder,
    reso_remainder,
    reswo_remainder,
    select_swap,
    swap_pairs,
)

MODES = ("corrected", "paper_literal")


@dataclass(slots=True)
class IterationRecord:
    i: int
    j: int
    c: int
    r: int
    r_f: int
    flag: bool


@dataclass
class ReductionTrace:
    records: list[IterationRecord] = field(default_factory=list)
    rho: int = 0
    rho_f: int = 0
    aggregate_flag: bool = False

    @property
    def any_flag(self) -> bool:
        """Per-iteration (strict) detection: some r differed from its r_f."""
        return any(rec.flag for rec in self.records)


def recompute(aw: int, bw: int, i: int, j: int, params: Params, scheme: Scheme, *,
              counter: int = 0, swap: SwapChoice | None = None,
              reno_mode: str = "consistent", reso_mode: str = "consistent") -> int:
    """Dispatch one word pair to the selected recomputation unit."""
    scheme = Scheme.parse(scheme)
    if scheme is Scheme.RESWO:
        return reswo_remainder(aw, bw, i, j, select_swap(params.w, counter, swap), params)
    if scheme is Scheme.RENO:
        return reno_remainder(aw, bw, i, j, params, reno_mode)
    return reso_remainder(aw, bw, i, j, params, reso_mode)


def _unit(scheme: Scheme, params: Params, swap, reno_mode: str, reso_mode: str):
    """Unchecked per-iteration unit: (aw, bw, shift, counter) -> r_f."""
    if scheme is Scheme.RESWO:
        if swap is not None:
            if max(swap.i_prime, swap.j_prime) >= params.w:
                raise ValueError(f"swap positions {swap} must be < w={params.w}")
            return lambda aw, bw, shift, n: _reswo_core(aw, bw, shift, swap, params)
        pairs = swap_pairs(params.w)
        if not pairs:
            raise ValueError("RESWO needs w >= 2 to swap two bits")
        npairs = len(pairs)
        return lambda aw, bw, shift, n: _reswo_core(aw, bw, shift, pairs[n % npairs], params)
    if scheme is Scheme.RENO:
        if reno_mode not in RENO_MODES:
            raise ValueError(f"RENO mode must be one of {RENO_MODES}")
        return lambda aw, bw, shift, n: _reno_core(aw, bw, shift, params, reno_mode)
    if reso_mode not in RESO_MODES:
        raise ValueError(f"RESO mode must be one of {RESO_MODES}")
    return lambda aw, bw, shift, n: _reso_core(aw, bw, shift, params, reso_mode)


# rho < q and a Barrett remainder is < 2q, so three conditional subtractors
# always suffice; a corrupted r_f simply stays out of range
COND_SUBS = 3


def _cond_sub(x: int, q: int) -> int:
    for _ in range(COND_SUBS):
        if x >= q:
            x -= q
    return x


def _accumulate(rho: int, r: int, q: int, mode: str) -> int:
    if mode == "corrected":
        return _cond_sub(rho + r, q)
    # the original loop body verbatim, with the modulus in place of "n"
    rho = rho + r - q if r > q else rho + r
    return rho - q if rho > q else rho


def mbrfd(alpha: int, beta: int, params: Params, scheme: Scheme | str = Scheme.RESWO,
          mode: str = "corrected", *, swap: SwapChoice | None = None, swap_offset: int = 0,
          reno_mode: str = "consistent", reso_mode: str = "consistent",
          reduce_each: bool = True, recomp_alpha: int | None = None,
          recomp_beta: int | None = None) -> tuple[int, ReductionTrace]:
    """Multiply alpha*beta mod q word by word, recomputing every step.

    The main Barrett path reads (alpha, beta); the recomputation path reads
    (recomp_alpha, recomp_beta), which default to the same operands. Keeping
    them separate models the distinct recompute-side registers, so a fault
    can be injected into one path only.

    In "corrected" mode rho is reduced to [0, q) after every accumulation
    (or once at the end with reduce_each=False) and equals alpha*beta mod q.
    "paper_literal" applies the single strict-greater-than subtraction of the
    original pseudocode and can leave rho == q or above.
    """
    scheme = Scheme.parse(scheme)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    ra = alpha if recomp_alpha is None else recomp_alpha
    rb = beta if recomp_beta is None else recomp_beta
    a_words, b_words = split_words(alpha, params), split_words(beta, params)
    fa_words, fb_words = split_words(ra, params), split_words(rb, params)
    q, w, words = params.q, params.w, params.words
    unit = _unit(scheme, params, swap, reno_mode, reso_mode)
    accumulate = mode == "paper_literal" or reduce_each
    corrected = accumulate and mode == "corrected"

    mu, k, kmask, q3 = params.mu, params.k, (1 << params.k) - 1, 3 * q
    trace = ReductionTrace()
    records = trace.records
    rho = rho_f = 0
    counter = swap_offset
    for i in range(words):
        for j in range(words):
            shift = (i + j) * w
            c = (a_words[i] * b_words[j]) << shift
            r = c - (((c * mu) >> k) & kmask) * q  # same step as barrett_step
            assert 0 <= r < q3
            r_f = unit(fa_words[i], fb_words[j], shift, counter)
            counter += 1
            if corrected:
                rho = _cond_sub(rho + r, q)
                rho_f = _cond_sub(rho_f + r_f, q)
            elif accumulate:
                rho = _accumulate(rho, r, q, mode)
                rho_f = _accumulate(rho_f, r_f, q, mode)
            else:
                rho += r
                rho_f += r_f
            records.append(IterationRecord(i, j, c, r, r_f, r != r_f))
    if not accumulate:
        rho %= q
        rho_f = rho_f % q if rho_f >= 0 else rho_f
    trace.rho, trace.rho_f = rho, rho_f
    trace.aggregate_flag = compare(rho, rho_f)
    return rho, trace
