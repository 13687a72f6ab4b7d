"""Operand bit-flip fault model and single-trial execution."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .arith import Params
from .mbrfd import mbrfd
from .recomp import Scheme


class NotApplicable(ValueError):
    """The fault description has no meaning (a burst of fewer than two bits)."""


class Site(str, enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    BOTH = "both"


class Kind(str, enum.Enum):
    RANDOM = "random"
    BURST = "burst"


def parse_site(value) -> Site:
    if isinstance(value, Site):
        return value
    aliases = {"a": Site.ALPHA, "b": Site.BETA, "ab": Site.BOTH, "alpha&beta": Site.BOTH}
    text = str(value).lower()
    try:
        return aliases.get(text) or Site(text)
    except ValueError:
        raise ValueError(f"unknown fault site {value!r}; choose from alpha, beta, both") from None


def parse_kind(value) -> Kind:
    try:
        return value if isinstance(value, Kind) else Kind(str(value).lower())
    except ValueError:
        raise ValueError(f"unknown fault kind {value!r}; choose from random, burst") from None


# How a BOTH-site fault is spread over the two operands: one draw over the
# 2l-bit concatenation alpha||beta, or eta flips in each operand separately.
BOTH_SPLITS = ("concat", "per_operand")


@dataclass(frozen=True)
class FaultSpec:
    site: Site
    kind: Kind
    eta: int
    l: int
    both_split: str = "concat"

    def __post_init__(self):
        object.__setattr__(self, "site", parse_site(self.site))
        object.__setattr__(self, "kind", parse_kind(self.kind))
        if self.both_split not in BOTH_SPLITS:
            raise ValueError(f"both_split must be one of {BOTH_SPLITS}")
        if self.eta < 0:
            raise ValueError("eta must be non-negative")
        if self.eta > self.draw_width:
            raise ValueError(f"eta={self.eta} exceeds the {self.draw_width} available positions")

    @property
    def draw_width(self) -> int:
        """Width of the bit field a single draw is taken from."""
        if self.site is Site.BOTH and self.both_split == "concat":
            return 2 * self.l
        return self.l

    @property
    def applicable(self) -> bool:
        return not (self.kind is Kind.BURST and self.eta < 2)


def _draw(kind: Kind, eta: int, width: int, rng: np.random.Generator) -> list[int]:
    if kind is Kind.RANDOM:
        return [int(p) for p in rng.choice(width, size=eta, replace=False)]
    start = int(rng.integers(0, width - eta + 1))
    return list(range(start, start + eta))


def sample_positions(spec: FaultSpec, rng: np.random.Generator) -> frozenset[int]:
    """Bit positions to flip.

    Positions index alpha (or beta) directly for single-operand sites. For
    BOTH they index the 2l-bit word alpha||beta: beta occupies bits
    [0, l) and alpha bits [l, 2l).
    """
    if not spec.applicable:
        raise NotApplicable(f"a burst needs at least two bits (eta={spec.eta})")
    if spec.eta == 0:
        return frozenset()
    if spec.site is Site.BOTH and spec.both_split == "per_operand":
        low = _draw(spec.kind, spec.eta, spec.l, rng)
        high = _draw(spec.kind, spec.eta, spec.l, rng)
        return frozenset(low + [p + spec.l for p in high])
    return frozenset(_draw(spec.kind, spec.eta, spec.draw_width, rng))


def inject(value: int, positions, width: int | None = None) -> int:
    """Flip the given bit positions of value."""
    mask = 0
    for p in positions:
        if p < 0 or (width is not None and p >= width):
            raise ValueError(f"bit position {p} outside operand width {width}")
        mask |= 1 << p
    return value ^ mask


def apply_fault(alpha: int, beta: int, spec: FaultSpec, positions) -> tuple[int, int]:
    l = spec.l
    if spec.site is Site.ALPHA:
        return inject(alpha, positions, l), beta
    if spec.site is Site.BETA:
        return alpha, inject(beta, positions, l)
    joined = inject((alpha << l) | beta, positions, 2 * l)
    return joined >> l, joined & ((1 << l) - 1)


@dataclass(frozen=True)
class TrialOutcome:
    detected: bool
    corrupted: bool
    positions: frozenset[int]
    operands: tuple[int, int]
    faulty_operands: tuple[int, int]
    strict_detected: bool | None = None


def evaluate_trial(alpha: int, beta: int, alpha_f: int, beta_f: int, params: Params,
                   scheme: Scheme | str, *, symmetric: bool = False,
                   **mbrfd_opts) -> tuple[bool, bool, bool]:
    """Run one fault experiment; returns (detected, corrupted, strict_detected).

    The faulty operands feed the main Barrett path and the recomputation
    path reads the clean ones. With symmetric=True both paths see the
    faulty operands, which by construction never raises a flag.
    """
    rec_a, rec_b = (alpha_f, beta_f) if symmetric else (alpha, beta)
    rho, trace = mbrfd(alpha_f, beta_f, params, scheme, recomp_alpha=rec_a,
                       recomp_beta=rec_b, **mbrfd_opts)
    clean_rho, _ = mbrfd(alpha, beta, params, scheme, **mbrfd_opts)
    return trace.aggregate_flag, rho != clean_rho, trace.any_flag


def run_trial(params: Params, scheme: Scheme | str, spec: FaultSpec,
              rng: np.random.Generator, *, symmetric: bool = False,
              **mbrfd_opts) -> TrialOutcome:
    if spec.l != params.l:
        raise ValueError(f"fault spec width l={spec.l} does not match params l={params.l}")
    alpha = int(rng.integers(0, 1 << params.l))
    beta = int(rng.integers(0, 1 << params.l))
    positions = sample_positions(spec, rng)
    alpha_f, beta_f = apply_fault(alpha, beta, spec, positions)
    detected, corrupted, strict = evaluate_trial(alpha, beta, alpha_f, beta_f, params, scheme,
                                                 symmetric=symmetric, **mbrfd_opts)
    return TrialOutcome(detected, corrupted, positions, (alpha, beta), (alpha_f, beta_f), strict)


def miss_oracle(outcome: TrialOutcome, q: int) -> bool:
    """True when the fault leaves the product unchanged mod q (undetectable)."""
    a, b = outcome.operands
    af, bf = outcome.faulty_operands
    return (af * bf - a * b) % q == 0
