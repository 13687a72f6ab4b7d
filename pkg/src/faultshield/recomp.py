"""Recomputation units that produce the alternative remainder r_f.

Each unit receives one word pair and its indices and returns a value that,
absent faults, equals the main-path Barrett remainder bit for bit.
"""
from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass
from itertools import combinations

from .arith import Params, bit_slice, check_wide


class Scheme(str, enum.Enum):
    RESWO = "RESWO"
    RENO = "RENO"
    RESO = "RESO"

    @classmethod
    def parse(cls, name) -> "Scheme":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise ValueError(f"unknown scheme {name!r}; choose from RESWO, RENO, RESO") from None


RENO_MODES = ("consistent", "negative_slice")
RESO_MODES = ("consistent", "paper_literal")


@dataclass(frozen=True)
class SwapChoice:
    i_prime: int
    j_prime: int

    def __post_init__(self):
        if self.i_prime == self.j_prime:
            raise ValueError("swap positions must differ")
        if self.i_prime < 0 or self.j_prime < 0:
            raise ValueError("swap positions must be non-negative")


@dataclass(frozen=True)
class SwapDelta:
    delta: int
    Delta: int


@lru_cache(maxsize=None)
def swap_pairs(w: int) -> tuple[SwapChoice, ...]:
    """All unordered bit-position pairs of a w-bit word, lexicographic."""
    return tuple(SwapChoice(a, b) for a, b in combinations(range(w), 2))


def select_swap(w: int, counter: int, fixed: SwapChoice | None = None) -> SwapChoice:
    """Swap pair for the `counter`-th unit invocation: cycles through all pairs."""
    if fixed is not None:
        return fixed
    pairs = swap_pairs(w)
    if not pairs:
        raise ValueError("RESWO needs w >= 2 to swap two bits")
    return pairs[counter % len(pairs)]


def _check_word(word: int, w: int, choice: SwapChoice | None = None):
    if not 0 <= word < (1 << w):
        raise ValueError(f"word {word} outside [0, 2^{w})")
    if choice is not None and max(choice.i_prime, choice.j_prime) >= w:
        raise ValueError(f"swap positions {choice} must be < w={w}")


def _word_width(word: int, choice: SwapChoice) -> int:
    return max(word.bit_length(), choice.i_prime + 1, choice.j_prime + 1)


def swap_bits(word: int, choice: SwapChoice, w: int | None = None) -> int:
    w = _word_width(word, choice) if w is None else w
    _check_word(word, w, choice)
    differ = ((word >> choice.i_prime) ^ (word >> choice.j_prime)) & 1
    return word ^ (differ << choice.i_prime) ^ (differ << choice.j_prime)


def swap_delta(word: int, choice: SwapChoice, w: int | None = None) -> SwapDelta:
    """Correction term with swap_bits(word) + Delta == word."""
    w = _word_width(word, choice) if w is None else w
    _check_word(word, w, choice)
    delta = ((word >> choice.i_prime) & 1) - ((word >> choice.j_prime) & 1)
    return SwapDelta(delta, delta * ((1 << choice.i_prime) - (1 << choice.j_prime)))


def _check_pair(aw: int, bw: int, i: int, j: int, params: Params):
    _check_word(aw, params.w)
    _check_word(bw, params.w)
    if not (0 <= i < params.words and 0 <= j < params.words):
        raise ValueError(f"word indices ({i}, {j}) outside [0, {params.words})")


def _reswo_core(aw: int, bw: int, shift: int, choice: SwapChoice, params: Params) -> int:
    ip, jp = choice.i_prime, choice.j_prime
    differ = ((aw >> ip) ^ (aw >> jp)) & 1
    swapped = aw ^ (differ << ip) ^ (differ << jp)
    Delta = (((aw >> ip) & 1) - ((aw >> jp) & 1)) * ((1 << ip) - (1 << jp))
    cf = (swapped * bw + Delta * bw) << shift
    check_wide(cf, params)
    return cf - bit_slice(cf * params.mu, params.k, params.k) * params.q


def reswo_remainder(aw: int, bw: int, i: int, j: int, choice: SwapChoice, params: Params) -> int:
    _check_pair(aw, bw, i, j, params)
    _check_word(aw, params.w, choice)
    swapped = swap_bits(aw, choice, params.w)
    corr = swap_delta(aw, choice, params.w)
    assert swapped + corr.Delta == aw
    return _reswo_core(aw, bw, (i + j) * params.w, choice, params)


def _to_signed(x: int, width: int) -> int:
    return x - (1 << width) if x >> (width - 1) else x


def _negate(x: int, width: int) -> int:
    """Two's-complement negation inside a `width`-bit register."""
    mask = (1 << width) - 1
    return (~x + 1) & mask


def reno_remainder(aw: int, bw: int, i: int, j: int, params: Params,
                   mode: str = "consistent") -> int:
    """Negate-multiply-negate recomputation.

    The multiplier sees -aw in a (2k+2)-bit two's-complement register. In
    "consistent" mode the exit negation runs before the quotient slice, so
    the slice is taken on the recovered positive product. "negative_slice"
    slices the negative product directly and negates afterwards; floor
    versus ceiling then leaves r_f one q below r whenever c*mu is not a
    multiple of 2^k.
    """
    if mode not in RENO_MODES:
        raise ValueError(f"RENO mode must be one of {RENO_MODES}")
    _check_pair(aw, bw, i, j, params)
    return _reno_core(aw, bw, (i + j) * params.w, params, mode)


def _reno_core(aw: int, bw: int, shift: int, params: Params, mode: str) -> int:
    width = 2 * params.k + 2
    mask = (1 << width) - 1
    neg_a = _negate(aw, width)
    cf = (_to_signed(neg_a, width) * bw) & mask
    cf = (cf << shift) & mask
    if mode == "consistent":
        c_hat = _to_signed(_negate(cf, width), width)
        assert 0 <= c_hat < (1 << (2 * params.l))
        return c_hat - bit_slice(c_hat * params.mu, params.k, params.k) * params.q
    signed_cf = _to_signed(cf, width)
    qhat = (signed_cf * params.mu) >> params.k  # arithmetic shift: floor
    r_neg = signed_cf - qhat * params.q
    return _to_signed(_negate(r_neg & mask, width), width)


def reso_remainder(aw: int, bw: int, i: int, j: int, params: Params,
                   mode: str = "consistent") -> int:
    """Shifted-operand recomputation.

    Both words are shifted left one bit, so the product carries a factor of
    4 and the quotient slice moves up two bits. "consistent" subtracts 4q so
    the final two-bit right shift yields r exactly; "paper_literal"
    subtracts q unscaled and reports what comes out.
    """
    if mode not in RESO_MODES:
        raise ValueError(f"RESO mode must be one of {RESO_MODES}")
    _check_pair(aw, bw, i, j, params)
    return _reso_core(aw, bw, (i + j) * params.w, params, mode)


def _reso_core(aw: int, bw: int, shift: int, params: Params, mode: str) -> int:
    cf = ((aw << 1) * (bw << 1)) << shift
    check_wide(cf, params)
    qhat = bit_slice(cf * params.mu, params.k + 2, params.k)
    if mode == "consistent":
        scaled = cf - qhat * (params.q << 2)
        assert scaled & 3 == 0, "shifted remainder must be exactly 4r"
    else:
        scaled = cf - qhat * params.q
    return scaled >> 2


def compare(r: int, r_f: int) -> bool:
    """Fault flag: raised when the two remainders disagree."""
    return r != r_f
