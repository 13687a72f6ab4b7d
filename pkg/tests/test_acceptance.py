"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import io
import random
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from faultshield.arith import make_params, named_params, oracle_modmul
from faultshield.campaign import CHUNK, CampaignConfig, cell_trials, run_campaign
from faultshield.cli import main
from faultshield.faults import FaultSpec, Kind, Site
from faultshield.mbrfd import mbrfd
from faultshield.ntt import Poly, gen_twiddles, ntt_forward, ntt_reference
from faultshield.overhead import ResourceCount, render_exact, sec
from faultshield.recomp import Scheme, swap_bits, swap_delta, swap_pairs
from faultshield.tables import stats_to_csv

# every campaign run here feeds the oracle-agreement criterion
_oracle_log = []


@pytest.fixture
def verdict(capsys):
    def emit(number, label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {label} {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def test_c1_fault_free_soundness(verdict):
    pairs = 100_000
    rng = random.Random(1)
    bad = 0
    start = time.perf_counter()
    for name in ("kyber", "dilithium", "falcon", "ntru"):
        p = named_params(name)
        top = 1 << p.l
        operands = [(rng.randrange(top), rng.randrange(top)) for _ in range(pairs)]
        for scheme in Scheme:
            for a, b in operands:
                rho, trace = mbrfd(a, b, p, scheme)
                if rho != oracle_modmul(a, b, p.q) or trace.any_flag or trace.aggregate_flag:
                    bad += 1
    elapsed = time.perf_counter() - start
    verdict(1, "fault-free soundness", bad == 0,
            f"({bad} failures over {12 * pairs} products, {elapsed:.0f}s)")


def test_c2_swap_identity(verdict):
    failures = 0
    for aw, bw in product(range(16), repeat=2):
        for choice in swap_pairs(4):
            swapped, corr = swap_bits(aw, choice, 4), swap_delta(aw, choice, 4)
            failures += swapped * bw + corr.Delta * bw != aw * bw
    bws = np.arange(256, dtype=np.int64)
    checked = 0
    for choice in swap_pairs(8):
        for aw in range(256):
            swapped, corr = swap_bits(aw, choice, 8), swap_delta(aw, choice, 8)
            failures += int(np.count_nonzero(swapped * bws + corr.Delta * bws != aw * bws))
            checked += len(bws)
    verdict(2, "swapped-product identity", failures == 0,
            f"({failures} failures; w=4 all 6 pairs x 256, w=8 {checked} cases)")


def test_c3_single_bit_efficiency(verdict):
    cfg = CampaignConfig(schemes=["RESWO"], l=24, ws=[4], q=3329, etas=[1], sites=["alpha"],
                         kinds=["random"], samples=1_500_000)
    st, = run_campaign(cfg)
    _oracle_log.append(("single-bit", st.oracle_mismatches))
    analytic = 100 * (1 - Fraction(5040, 1 << 24))
    ok = abs(st.efficiency - 99.97) <= 0.01
    verdict(3, "alpha single-bit efficiency", ok,
            f"({st.efficiency:.4f}% vs 99.97 +- 0.01; analytic {float(analytic):.4f}%)")


def test_c4_grid_band(verdict):
    cfg = CampaignConfig(schemes=list(Scheme), l=24, ws=[4], q=3329, etas=[3, 5, 11, 17, 23],
                         sites=list(Site), kinds=list(Kind), samples=100_000)
    stats = run_campaign(cfg)
    _oracle_log.append(("grid", sum(st.oracle_mismatches for st in stats)))
    effs = [st.efficiency for st in stats]
    outside = [st for st in stats if not 99.90 <= st.efficiency < 100.0]
    verdict(4, "grid band [99.90, 100.00)", not outside and len(stats) == 90,
            f"({len(stats)} cells, min {min(effs):.4f}, max {max(effs):.4f}, "
            f"{len(outside)} outside)")


def test_c5_word_size_invariance(verdict):
    differing = 0
    cells = 0
    mismatches = 0
    for scheme, eta, site, kind in product(Scheme, (1, 3, 11, 23), Site, Kind):
        spec = FaultSpec(site, kind, eta, 24)
        if not spec.applicable:
            continue
        runs = [cell_trials(make_params(24, w, 3329), scheme, spec, 20_000) for w in (4, 8, 24)]
        cells += 1
        mismatches += sum(int(np.count_nonzero(r.detected == r.miss)) for r in runs)
        differing += any(not np.array_equal(runs[0].detected, r.detected) for r in runs[1:])
    _oracle_log.append(("w-invariance", mismatches))
    verdict(5, "w-invariance of detection bits", differing == 0,
            f"({cells} cells x 20000 trials at w=4,8,24; {differing} cells differ)")


def test_c6_miss_oracle(verdict):
    # cells from criteria 3-5 plus a burst/both campaign at l=12 with the scalar engine
    cfg = CampaignConfig(schemes=list(Scheme), l=12, ws=[4], q=3329, etas=[2, 5],
                         sites=list(Site), kinds=list(Kind), samples=3000)
    stats = run_campaign(cfg, engine="scalar")
    _oracle_log.append(("scalar", sum(st.oracle_mismatches for st in stats)))
    total = sum(n for _, n in _oracle_log)
    verdict(6, "detected == not(q | a'b' - ab)", total == 0,
            f"({total} disagreements across {[name for name, _ in _oracle_log]})")


def _random_polys(n, q, count, seed):
    rng = random.Random(seed)
    return [Poly([rng.randrange(q) for _ in range(n)]) for _ in range(count)]


def test_c7_ntt_oracle(verdict):
    bad = 0
    schemes = list(Scheme)
    for n, q, name in ((512, 12289, "falcon"), (256, 8380417, "dilithium")):
        p = named_params(name, n=n)
        table = gen_twiddles(n, q)
        for idx, poly in enumerate(_random_polys(n, q, 100, n)):
            res = ntt_forward(poly, table, p, schemes[idx % 3])
            bad += res.poly != ntt_reference(poly, table, q) or res.fault_count != 0
        impulse = ntt_forward(Poly([1] + [0] * (n - 1)), table, p).poly.coeffs
        bad += impulse != [1] * n
        x, y = _random_polys(n, q, 2, 7)
        fx, fy = (ntt_forward(v, table, p).poly.coeffs for v in (x, y))
        fsum = ntt_forward(Poly([(a + 3 * b) % q for a, b in zip(x.coeffs, y.coeffs)]),
                           table, p).poly.coeffs
        bad += fsum != [(a + 3 * b) % q for a, b in zip(fx, fy)]
    p = make_params(4, 2, 5, 2)
    table = gen_twiddles(2, 5)
    for coeffs in product(range(5), repeat=2):
        for scheme in schemes:
            bad += ntt_forward(Poly(list(coeffs)), table, p, scheme).poly != \
                ntt_reference(Poly(list(coeffs)), table, 5)
    verdict(7, "NTT equals reference", bad == 0, f"({bad} mismatches)")


def test_c8_overhead_math(verdict):
    out = io.StringIO()
    code = main(["report", "--format", "csv"], out)
    rows = [line.split(",") for line in out.getvalue().splitlines()]
    area = [r for r in rows if r[:3] == ["RESWO", "kyber", "area"]]
    cost = sec(ResourceCount(luts=972, ffs=239, dsps=2, brams=1))
    ok = code == 0 and len(area) == 1 and area[0][3] == "9.07" and cost == Fraction(672875, 1000)
    verdict(8, "overhead and SEC", ok,
            f"(OH area {area[0][3] if area else '?'}%, SEC {render_exact(cost)})")


def test_c9_determinism(verdict):
    cfg = CampaignConfig(schemes=["RESWO", "RESO"], l=24, ws=[4, 8], q=3329, etas=[1, 5],
                         sites=["alpha", "both"], kinds=list(Kind), samples=2 * CHUNK + 123,
                         seed=2024)
    one = stats_to_csv(run_campaign(cfg, workers=1))
    three = stats_to_csv(run_campaign(cfg, workers=3))
    verdict(9, "byte-identical CSV across worker counts", one == three,
            f"({len(one)} bytes, workers 1 vs 3)")
