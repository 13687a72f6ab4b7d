"""Word-wise Barrett arithmetic: parameters, word splitting, one reduction step.

All values are plain Python ints. Hardware register widths are emulated with
explicit masks and range assertions rather than a wrapper type.
"""
from __future__ import annotations

from dataclasses import dataclass


class ParamError(ValueError):
    """Raised when a parameter set violates a structural constraint."""


def _is_pow2(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


@dataclass(frozen=True)
class Params:
    l: int
    w: int
    q: int
    mu: int
    k: int
    n: int = 0

    def __post_init__(self):
        if self.w < 1 or self.w > self.l:
            raise ParamError(f"w must satisfy 1 <= w <= l (w={self.w}, l={self.l})")
        if self.l % self.w:
            raise ParamError(f"w must divide l (w={self.w}, l={self.l})")
        if not 1 < self.q < (1 << self.l):
            raise ParamError(f"q must satisfy 1 < q < 2^l (q={self.q}, l={self.l})")
        if self.k != 2 * self.l:
            raise ParamError("k must equal 2*l")
        if self.mu != (1 << (2 * self.l)) // self.q:
            raise ParamError("mu must equal floor(2^(2l) / q)")
        if self.n < 0 or (self.n and not _is_pow2(self.n)):
            raise ParamError(f"n must be a power of two (n={self.n})")

    @property
    def words(self) -> int:
        """Number of w-bit words per operand."""
        return self.l // self.w

    @property
    def wide_bits(self) -> int:
        # product register plus RESO scaling and RENO sign/guard headroom
        return 2 * self.k + 4


def make_params(l: int, w: int, q: int, n: int = 0) -> Params:
    if w < 1 or l < 1:
        raise ParamError("l and w must be positive")
    if l % w:
        raise ParamError(f"w must divide l (w={w}, l={l})")
    if not 1 < q < (1 << l):
        raise ParamError(f"q must satisfy 1 < q < 2^l (q={q}, l={l})")
    if n and not _is_pow2(n):
        raise ParamError(f"n must be a power of two (n={n})")
    return Params(l=l, w=w, q=q, mu=(1 << (2 * l)) // q, k=2 * l, n=n)


# Named sets: n and q as used by each scheme, l the narrowest width covering q.
# 4 does not divide 14, so the 14-bit sets default to w=7.
PARAM_SETS = {
    "kyber": dict(l=12, w=4, q=3329, n=256),
    "dilithium": dict(l=24, w=4, q=8380417, n=256),
    "falcon": dict(l=14, w=7, q=12289, n=512),
    "ntru": dict(l=14, w=7, q=12289, n=2048),
}


def named_params(name: str, **overrides) -> Params:
    try:
        base = dict(PARAM_SETS[name.lower()])
    except KeyError:
        raise ParamError(f"unknown parameter set {name!r}; choose from {sorted(PARAM_SETS)}") from None
    base.update({key: val for key, val in overrides.items() if val is not None})
    return make_params(**base)


def check_wide(value: int, params: Params) -> int:
    """Assert that `value` fits the widest product register."""
    assert 0 <= value < (1 << params.wide_bits), f"register overflow: {value:#x}"
    return value


def split_words(x: int, params: Params) -> list[int]:
    """Split an l-bit operand into l/w words, least significant first."""
    if not 0 <= x < (1 << params.l):
        raise ValueError(f"operand {x} outside [0, 2^{params.l})")
    mask = (1 << params.w) - 1
    return [(x >> (i * params.w)) & mask for i in range(params.words)]


def bit_slice(x: int, lo: int, width: int) -> int:
    """Bits [lo + width - 1 .. lo] of a non-negative x."""
    return (x >> lo) & ((1 << width) - 1)


def quotient_estimate(c: int, params: Params) -> int:
    return bit_slice(c * params.mu, params.k, params.k)


def barrett_step(c: int, params: Params) -> int:
    """One Barrett step: c minus the sliced quotient estimate times q.

    The result is congruent to c but not canonical; it lies in [0, 3q).
    """
    if not 0 <= c < (1 << (2 * params.l)):
        raise ValueError(f"c={c} outside [0, 2^{2 * params.l})")
    check_wide(c, params)
    r = c - quotient_estimate(c, params) * params.q
    assert 0 <= r < 3 * params.q
    return r


def reduce_canonical(r: int, q: int) -> int:
    if q <= 1:
        raise ValueError("q must exceed 1")
    if r < 0:
        raise ValueError("r must be non-negative")
    while r >= q:
        r -= q
    return r


def oracle_modmul(a: int, b: int, q: int) -> int:
    """Exact (a*b) mod q with a full-width product; no estimation."""
    if q <= 1:
        raise ValueError("q must exceed 1")
    if a < 0 or b < 0:
        raise ValueError("operands must be non-negative")
    return (a * b) % q
