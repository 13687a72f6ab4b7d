"""Array version of the MBRFD word loop for Monte-Carlo campaigns.

Same word loop, same quotient slices and same recomputation datapaths as
the scalar code, evaluated over int64 arrays so that a million trials take
seconds. Tests check it trial-for-trial against the scalar implementation.
"""
from __future__ import annotations

import numpy as np

from .arith import Params
from .mbrfd import COND_SUBS, MODES
from .recomp import RENO_MODES, RESO_MODES, Scheme, SwapChoice, select_swap

MAX_L = 24
_LIMB = 25
_LIMB_MASK = (1 << _LIMB) - 1


def supports(params: Params) -> bool:
    return params.l <= MAX_L


def mul_shift(x: np.ndarray, mu: int, shift: int, xbits: int, add: int = 0) -> np.ndarray:
    """floor((x*mu + add) / 2^shift) for 0 <= x < 2^xbits, exact in int64.

    When x*mu may exceed 63 bits the product is assembled from 25-bit limbs.
    """
    if xbits + mu.bit_length() <= 62:
        return (x * np.int64(mu) + np.int64(add)) >> shift
    assert xbits <= 2 * _LIMB and mu < (1 << 2 * _LIMB) and add < (1 << 2 * _LIMB)
    assert shift >= _LIMB
    x1, x0 = x >> _LIMB, x & _LIMB_MASK
    m1, m0 = np.int64(mu >> _LIMB), np.int64(mu & _LIMB_MASK)
    low = x0 * m0 + np.int64(add)
    mid = x1 * m0 + x0 * m1 + (low >> _LIMB)
    high = x1 * m1
    if shift >= 2 * _LIMB:
        return (high + (mid >> _LIMB)) >> (shift - 2 * _LIMB)
    return high * np.int64(1 << (2 * _LIMB - shift)) + (mid >> (shift - _LIMB))


def barrett_step(c: np.ndarray, params: Params) -> np.ndarray:
    kmask = np.int64((1 << params.k) - 1)
    qhat = mul_shift(c, params.mu, params.k, 2 * params.l) & kmask
    return c - qhat * np.int64(params.q)


def _reswo(aw, bw, shift, choice: SwapChoice, params: Params):
    bi = (aw >> choice.i_prime) & 1
    bj = (aw >> choice.j_prime) & 1
    differ = bi ^ bj
    swapped = aw ^ (differ << choice.i_prime) ^ (differ << choice.j_prime)
    Delta = (bi - bj) * np.int64((1 << choice.i_prime) - (1 << choice.j_prime))
    cf = (swapped * bw + Delta * bw) << shift
    return barrett_step(cf, params)


def _reno(aw, bw, shift, params: Params, mode: str):
    cf = (-aw * bw) * np.int64(1 << shift)  # negative product, signed shift
    c_hat = -cf
    if mode == "consistent":
        return barrett_step(c_hat, params)
    # floor of the negative slice equals minus the ceiling of the positive one
    ceil_q = mul_shift(c_hat, params.mu, params.k, 2 * params.l, add=(1 << params.k) - 1)
    return c_hat - ceil_q * np.int64(params.q)


def _reso(aw, bw, shift, params: Params, mode: str):
    cf = ((aw << 1) * (bw << 1)) << shift
    kmask = np.int64((1 << params.k) - 1)
    qhat = mul_shift(cf, params.mu, params.k + 2, 2 * params.l + 2) & kmask
    q = params.q << 2 if mode == "consistent" else params.q
    return (cf - qhat * np.int64(q)) >> 2


def _cond_sub(x: np.ndarray, q: int) -> np.ndarray:
    for _ in range(COND_SUBS):
        x = np.where(x >= q, x - q, x)
    return x


def _accumulate(rho, r, q: int, mode: str):
    if mode == "corrected":
        return _cond_sub(rho + r, q)
    rho = np.where(r > q, rho + r - q, rho + r)
    return np.where(rho > q, rho - q, rho)


def batch_mbrfd(alpha, beta, rec_alpha, rec_beta, params: Params,
                scheme: Scheme | str = Scheme.RESWO, mode: str = "corrected", *,
                swap: SwapChoice | None = None, swap_offset: int = 0,
                reno_mode: str = "consistent", reso_mode: str = "consistent",
                reduce_each: bool = True):
    """Returns (rho, rho_f, strict) arrays for a batch of operand pairs.

    strict is True where any single iteration had r != r_f.
    """
    if not supports(params):
        raise ValueError(f"array kernel supports l <= {MAX_L} (got l={params.l})")
    scheme = Scheme.parse(scheme)
    if mode not in MODES or reno_mode not in RENO_MODES or reso_mode not in RESO_MODES:
        raise ValueError("unknown mode")
    arrs = [np.asarray(v, dtype=np.int64) for v in (alpha, beta, rec_alpha, rec_beta)]
    alpha, beta, rec_alpha, rec_beta = arrs
    w, q = params.w, params.q
    wmask = np.int64((1 << w) - 1)
    accumulate = mode == "paper_literal" or reduce_each

    rho = np.zeros_like(alpha)
    rho_f = np.zeros_like(alpha)
    strict = np.zeros(alpha.shape, dtype=bool)
    counter = swap_offset
    for i in range(params.words):
        aw, faw = (alpha >> (i * w)) & wmask, (rec_alpha >> (i * w)) & wmask
        for j in range(params.words):
            bw, fbw = (beta >> (j * w)) & wmask, (rec_beta >> (j * w)) & wmask
            shift = (i + j) * w
            r = barrett_step((aw * bw) << shift, params)
            if scheme is Scheme.RESWO:
                r_f = _reswo(faw, fbw, shift, select_swap(w, counter, swap), params)
            elif scheme is Scheme.RENO:
                r_f = _reno(faw, fbw, shift, params, reno_mode)
            else:
                r_f = _reso(faw, fbw, shift, params, reso_mode)
            counter += 1
            strict |= r != r_f
            if accumulate:
                rho = _accumulate(rho, r, q, mode)
                rho_f = _accumulate(rho_f, r_f, q, mode)
            else:
                rho = rho + r
                rho_f = rho_f + r_f
    if not accumulate:
        rho = rho % q
        rho_f = np.where(rho_f >= 0, rho_f % q, rho_f)
    return rho, rho_f, strict


def batch_miss(alpha, beta, alpha_f, beta_f, q: int) -> np.ndarray:
    """True where alpha_f*beta_f == alpha*beta (mod q), from exact residues."""
    assert q < (1 << 31)
    qq = np.int64(q)
    faulty = (alpha_f % qq) * (beta_f % qq) % qq
    clean = (alpha % qq) * (beta % qq) % qq
    return faulty == clean
