from itertools import product

import pytest
from hypothesis import given, strategies as st

from faultshield.arith import barrett_step, make_params, named_params
from faultshield.recomp import (
    Scheme,
    SwapChoice,
    reno_remainder,
    reso_remainder,
    reswo_remainder,
    select_swap,
    swap_bits,
    swap_delta,
    swap_pairs,
)


def test_swap_pair_enumeration():
    assert len(swap_pairs(4)) == 6
    assert len(swap_pairs(8)) == 28
    assert swap_pairs(4)[0] == SwapChoice(0, 1)
    assert swap_pairs(1) == ()
    with pytest.raises(ValueError):
        select_swap(1, 0)
    assert select_swap(4, 7) == SwapChoice(0, 2)
    fixed = SwapChoice(3, 1)
    assert select_swap(4, 99, fixed) is fixed


def test_swap_choice_validation():
    with pytest.raises(ValueError):
        SwapChoice(2, 2)
    with pytest.raises(ValueError):
        SwapChoice(-1, 2)


def test_swap_examples():
    assert swap_bits(0b0001, SwapChoice(0, 3), 4) == 0b1000
    d = swap_delta(0b0001, SwapChoice(0, 3), 4)
    assert (d.delta, d.Delta) == (1, -7)
    with pytest.raises(ValueError):
        swap_bits(16, SwapChoice(0, 1), 4)
    with pytest.raises(ValueError):
        swap_bits(3, SwapChoice(0, 4), 4)


@pytest.mark.parametrize("w", [4, 8])
def test_swap_identity_exhaustive(w):
    # the swapped word plus its correction rebuilds the original, so the
    # swapped product plus Delta*bw is the true product
    for choice in swap_pairs(w):
        for aw in range(1 << w):
            swapped = swap_bits(aw, choice, w)
            corr = swap_delta(aw, choice, w)
            assert swapped + corr.Delta == aw
            assert corr.delta in (-1, 0, 1)
            assert swap_bits(swapped, choice, w) == aw
            for bw in range(0, 1 << w, 1 if w == 4 else 17):
                assert swapped * bw + corr.Delta * bw == aw * bw


@pytest.mark.parametrize("scheme", list(Scheme))
def test_units_match_barrett_exhaustive_small(scheme):
    p = make_params(8, 4, 251)
    for aw, bw, i, j in product(range(16), range(16), range(2), range(2)):
        c = (aw * bw) << ((i + j) * 4)
        r = barrett_step(c, p)
        if scheme is Scheme.RESWO:
            for choice in swap_pairs(4):
                assert reswo_remainder(aw, bw, i, j, choice, p) == r
        elif scheme is Scheme.RENO:
            assert reno_remainder(aw, bw, i, j, p) == r
        else:
            assert reso_remainder(aw, bw, i, j, p) == r


@given(st.sampled_from(["kyber", "dilithium", "falcon", "ntru"]), st.data())
def test_units_match_barrett(name, data):
    p = named_params(name)
    aw = data.draw(st.integers(0, (1 << p.w) - 1))
    bw = data.draw(st.integers(0, (1 << p.w) - 1))
    i = data.draw(st.integers(0, p.words - 1))
    j = data.draw(st.integers(0, p.words - 1))
    r = barrett_step((aw * bw) << ((i + j) * p.w), p)
    choice = data.draw(st.sampled_from(swap_pairs(p.w)))
    assert reswo_remainder(aw, bw, i, j, choice, p) == r
    assert reno_remainder(aw, bw, i, j, p) == r
    assert reso_remainder(aw, bw, i, j, p) == r


def test_reno_negative_slice_is_one_q_low():
    p = named_params("kyber")
    seen_low = 0
    for aw, bw in product(range(16), repeat=2):
        r = barrett_step((aw * bw) << 8, p)
        r_f = reno_remainder(aw, bw, 1, 1, p, "negative_slice")
        assert r_f in (r, r - p.q)
        seen_low += r_f == r - p.q
    assert seen_low > 0


def test_reso_paper_literal_differs():
    p = named_params("kyber")
    diffs = sum(reso_remainder(aw, bw, 2, 2, p, "paper_literal") !=
                barrett_step((aw * bw) << 16, p)
                for aw, bw in product(range(16), repeat=2))
    assert diffs > 0


def test_units_reject_bad_inputs():
    p = named_params("kyber")
    with pytest.raises(ValueError):
        reno_remainder(16, 1, 0, 0, p)
    with pytest.raises(ValueError):
        reso_remainder(1, 1, 3, 0, p)
    with pytest.raises(ValueError):
        reno_remainder(1, 1, 0, 0, p, "bogus")
    with pytest.raises(ValueError):
        reswo_remainder(1, 1, 0, 0, SwapChoice(0, 4), p)


def test_scheme_parse():
    assert Scheme.parse("reno") is Scheme.RENO
    with pytest.raises(ValueError):
        Scheme.parse("RESX")
