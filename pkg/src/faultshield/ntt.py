"""Iterative Cooley-Tukey forward NTT with a fault-detecting twiddle multiplier."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .arith import Params, oracle_modmul
from .mbrfd import mbrfd
from .recomp import Scheme


class UnsupportedParams(ValueError):
    """The (n, q) pair admits no primitive 2n-th root of unity."""


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def _log2(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise UnsupportedParams(f"n={n} is not a power of two")
    return n.bit_length() - 1


def max_supported_n(q: int) -> int:
    """Largest power-of-two n with q = 1 mod 2n (0 if none)."""
    if (q - 1) % 2:
        return 0
    n = 1
    while (q - 1) % (4 * n) == 0:
        n *= 2
    return n


def find_psi(n: int, q: int) -> int:
    """Smallest psi >= 2 whose multiplicative order mod q is exactly 2n."""
    _log2(n)
    if not _is_prime(q):
        raise UnsupportedParams(f"q={q} is not prime")
    if (q - 1) % (2 * n):
        hint = max_supported_n(q)
        raise UnsupportedParams(
            f"q={q} is not 1 mod 2n={2 * n}; the largest supported n for this q is {hint}")
    for psi in range(2, q):
        # order divides 2n (a power of two) and is not a divisor of n
        if pow(psi, n, q) == q - 1:
            return psi
    raise UnsupportedParams(f"no primitive {2 * n}-th root of unity mod {q}")


def bit_reverse_index(x: int, bits: int) -> int:
    if not 0 <= x < (1 << bits):
        raise ValueError(f"{x} does not fit in {bits} bits")
    out = 0
    for _ in range(bits):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


@dataclass(frozen=True)
class TwiddleTable:
    omega: tuple[int, ...]
    psi: int
    q: int
    n: int


def gen_twiddles(n: int, q: int) -> TwiddleTable:
    """Powers of psi stored at bit-reversed positions.

    With this layout the butterfly at level m, block i multiplies by
    omega[m + i] = psi^bitrev(m + i), which makes the transform the
    evaluation of the input at the odd powers psi^(2*bitrev(idx) + 1).
    """
    psi = find_psi(n, q)
    bits = _log2(n)
    omega = tuple(pow(psi, bit_reverse_index(idx, bits), q) for idx in range(n))
    return TwiddleTable(omega=omega, psi=psi, q=q, n=n)


@dataclass
class Poly:
    coeffs: list[int]

    def validate(self, n: int, q: int) -> None:
        if len(self.coeffs) != n:
            raise ValueError(f"polynomial has {len(self.coeffs)} coefficients, expected {n}")
        for idx, a in enumerate(self.coeffs):
            if not 0 <= a < q:
                raise ValueError(f"coefficient {idx}={a} not in [0, {q})")


@dataclass(frozen=True)
class StageRecord:
    stage: int
    m: int
    i: int
    j: int
    U: int
    V: int | None = None
    fault_flag: bool = False
    outputs: tuple[int, int] | None = None


@dataclass
class ButterflyTrace:
    records: list[StageRecord] = field(default_factory=list)

    @property
    def butterfly_count(self) -> int:
        return len(self.records) // 3


@dataclass
class NTTResult:
    poly: Poly
    fault_count: int
    trace: ButterflyTrace | None = None


# (butterfly index, operand, twiddle) -> operands seen by the main Barrett path
FaultHook = Callable[[int, int, int], tuple[int, int]]
ON_FAULT = ("flag", "recompute")


def _check_inputs(poly: Poly, table: TwiddleTable, q: int):
    poly.validate(table.n, table.q)
    if q != table.q:
        raise ValueError(f"modulus mismatch: params q={q}, table q={table.q}")


def ntt_forward(poly: Poly, table: TwiddleTable, params: Params,
                scheme: Scheme | str = Scheme.RESWO, record_trace: bool = False, *,
                fault_hook: FaultHook | None = None, on_fault: str = "flag",
                **mbrfd_opts) -> NTTResult:
    """Forward transform with every twiddle product routed through MBRFD.

    fault_hook, when given, corrupts the operands entering the main Barrett
    path of a butterfly; the recomputation path keeps the clean values. A
    raised flag is counted. With on_fault="recompute" the butterfly then
    takes the recompute-path value instead of the main-path one.
    """
    _check_inputs(poly, table, params.q)
    if params.n and params.n != table.n:
        raise ValueError(f"degree mismatch: params n={params.n}, table n={table.n}")
    if on_fault not in ON_FAULT:
        raise ValueError(f"on_fault must be one of {ON_FAULT}")
    scheme = Scheme.parse(scheme)
    q, n = params.q, table.n
    a = list(poly.coeffs)
    trace = ButterflyTrace() if record_trace else None
    faults = 0
    butterfly = 0

    t, m = n // 2, 1
    while m < n:
        k = 0
        for i in range(m):
            r = table.omega[m + i]
            for j in range(k, k + t):
                U = a[j]
                if trace is not None:
                    trace.records.append(StageRecord(1, m, i, j, U))
                op, tw = a[j + t], r
                if fault_hook is not None:
                    op, tw = fault_hook(butterfly, op, tw)
                V, rt = mbrfd(op, tw, params, scheme, recomp_alpha=a[j + t],
                              recomp_beta=r, **mbrfd_opts)
                if rt.aggregate_flag:
                    faults += 1
                    if on_fault == "recompute":
                        V = rt.rho_f
                if trace is not None:
                    trace.records.append(StageRecord(2, m, i, j, U, V, rt.aggregate_flag))
                a[j] = (U + V) % q
                a[j + t] = (U - V) % q
                if trace is not None:
                    trace.records.append(StageRecord(3, m, i, j, U, V, rt.aggregate_flag,
                                                     (a[j], a[j + t])))
                butterfly += 1
            k += 2 * t
        t //= 2
        m *= 2
    return NTTResult(Poly(a), faults, trace)


def ntt_reference(poly: Poly, table: TwiddleTable, q: int) -> Poly:
    """Same loop nest with exact modular products: the correctness oracle."""
    _check_inputs(poly, table, q)
    n = table.n
    a = list(poly.coeffs)
    t, m = n // 2, 1
    while m < n:
        k = 0
        for i in range(m):
            r = table.omega[m + i]
            for j in range(k, k + t):
                U = a[j]
                V = oracle_modmul(a[j + t], r, q)
                a[j] = (U + V) % q
                a[j + t] = (U - V) % q
            k += 2 * t
        t //= 2
        m *= 2
    return Poly(a)
