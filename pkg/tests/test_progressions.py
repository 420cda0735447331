import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatz_strings import (
    Progression,
    backward_signature,
    first_recurrence_backward,
    first_recurrence_forward,
    forward_signature,
    image_even_branch,
    image_odd_branch,
    intersect_residue,
    preimage_even_branch,
    preimage_odd_branch,
    sampling_lemma_check,
)


def test_progression_validation_and_membership():
    p = Progression(5, 12)
    assert p.contains(5) and p.contains(29)
    assert not p.contains(6) and not p.contains(1)
    assert p.elements_in(6, 30) == [17, 29]
    assert p.count_in(6, 30) == 2
    with pytest.raises(ValueError):
        Progression(0, 3)
    with pytest.raises(ValueError):
        Progression(1, 0)


def test_intersect_residue_examples():
    assert intersect_residue(Progression(2, 3), 0, 2) == Progression(2, 6)
    assert intersect_residue(Progression(3, 4), 0, 3) == Progression(3, 12)
    assert intersect_residue(Progression(1, 4), 1, 4) == Progression(1, 4)


def test_intersect_residue_empty():
    # even progression cannot meet an odd residue class mod 2
    assert intersect_residue(Progression(2, 2), 1, 2) is None


def test_intersect_residue_elementwise():
    cases = [(Progression(2, 3), 0, 2), (Progression(3, 4), 0, 3),
             (Progression(7, 12), 1, 3), (Progression(5, 6), 3, 4)]
    for p, r, mod in cases:
        q = intersect_residue(p, r, mod)
        want = [x for t in range(400) if (x := p.element(t)) % mod == r % mod][:100]
        if q is None:
            assert not want
        else:
            assert [q.element(t) for t in range(100)] == want


@given(st.integers(1, 50), st.integers(1, 40), st.integers(0, 59), st.integers(1, 60))
@settings(max_examples=300)
def test_intersect_residue_matches_filter(a, b, r, mod):
    p = Progression(a, b)
    q = intersect_residue(p, r, mod)
    want = [x for t in range(6 * mod) if (x := p.element(t)) % mod == r % mod][:30]
    if q is None:
        assert not want
    else:
        assert [q.element(t) for t in range(len(want))] == want


def test_branch_images_match_published_first_generations():
    assert image_even_branch(Progression(2, 6)) == Progression(3, 9)
    assert image_odd_branch(Progression(5, 12)) == Progression(4, 9)
    assert preimage_even_branch(Progression(3, 12)) == Progression(2, 8)
    assert preimage_odd_branch(Progression(7, 12)) == Progression(9, 16)


def test_branch_images_are_elementwise():
    from collatz_strings import inverse_lower_step, lower_step

    fwd = [(image_even_branch, Progression(4, 18)),
           (image_odd_branch, Progression(13, 36))]
    for fn, dom in fwd:
        img = fn(dom)
        for t in range(50):
            assert img.element(t) == lower_step(dom.element(t))
    back = [(preimage_even_branch, Progression(9, 48)),
            (preimage_odd_branch, Progression(25, 48))]
    for fn, dom in back:
        img = fn(dom)
        for t in range(50):
            assert img.element(t) == inverse_lower_step(dom.element(t))


def test_branch_interval_transport():
    assert image_even_branch(Progression(2, 6)).interval == 9  # 6 -> 3*6/2
    assert image_odd_branch(Progression(1, 12)).interval == 9  # 12 -> 3*12/4
    assert preimage_even_branch(Progression(3, 9)).interval == 6  # 9 -> 2*9/3
    assert preimage_odd_branch(Progression(1, 9)).interval == 12  # 9 -> 4*9/3


def test_branch_domain_preconditions_are_enforced():
    with pytest.raises(ValueError):
        image_even_branch(Progression(3, 6))  # odd intercept
    with pytest.raises(ValueError):
        image_even_branch(Progression(2, 3))  # odd interval leaks out of the branch
    with pytest.raises(ValueError):
        image_odd_branch(Progression(3, 4))  # 3 mod 4 intercept
    with pytest.raises(ValueError):
        preimage_even_branch(Progression(3, 4))  # interval not 0 mod 3
    with pytest.raises(ValueError):
        preimage_odd_branch(Progression(2, 9))  # intercept not 1 mod 3


def test_sampling_lemma_examples():
    assert sampling_lemma_check(2, 3, 3).holds
    assert sampling_lemma_check(3, 2, 4).holds
    with pytest.raises(ValueError):
        sampling_lemma_check(2, 1, 2)  # period shares a factor with the base


def test_sampling_lemma_grid():
    from math import gcd

    for base in (2, 3):
        for power in range(1, 7):
            for period in range(1, 10):
                if gcd(period, base) != 1:
                    continue
                assert sampling_lemma_check(base, power, period).holds


def test_sampling_lemma_probe_too_short():
    with pytest.raises(ValueError):
        sampling_lemma_check(2, 3, 3, probe_len=10)


def test_forward_signature_examples():
    sig = forward_signature(2, 2)
    assert sig.steps == (1, 4) and sig.truncated
    assert sig.tags == ("even", "terminal[4]")
    assert sig.recurrence_gap == 32

    sig = forward_signature(1, 1)
    assert sig.steps == (2,) and not sig.truncated
    assert sig.recurrence_gap == 4

    sig = forward_signature(5, 3)
    assert sig.steps == (2, 1, 1) and not sig.truncated


def test_backward_signature_examples():
    sig = backward_signature(7, 4)
    assert sig.steps == (1, 0, 0, 1) and not sig.truncated
    assert sig.tags == ("up", "down", "down", "up")
    assert sig.recurrence_gap == 81

    sig = backward_signature(10, 3)
    assert sig.steps == (1, 1, 2) and sig.truncated
    assert sig.recurrence_gap == 27

    sig = backward_signature(3, 1)
    assert sig.steps == (0,)


def test_first_recurrence_anchors():
    assert first_recurrence_forward(2, 2) == 2 + 32 == 34
    assert first_recurrence_forward(1, 1) == 5
    assert first_recurrence_backward(7, 4) == 7 + 81 == 88
    assert first_recurrence_backward(3, 1) == 6
    assert first_recurrence_backward(10, 3) == 37


def test_first_recurrence_forward_matches_prediction():
    for x, n in [(5, 3), (2, 4), (11, 2), (17, 3), (100, 5), (37, 1)]:
        sig = forward_signature(x, n)
        assert first_recurrence_forward(x, n) == x + sig.recurrence_gap


def test_first_recurrence_backward_matches_prediction():
    for x, n in [(10, 3), (4, 4), (22, 5), (100, 6), (2, 3), (55, 2)]:
        sig = backward_signature(x, n)
        assert first_recurrence_backward(x, n) == x + sig.recurrence_gap


def test_recurrent_position_really_shares_the_signature():
    for x, n in [(2, 2), (7, 4), (13, 3), (29, 4)]:
        fwd = forward_signature(x, n)
        at = first_recurrence_forward(x, n)
        assert forward_signature(at, len(fwd.steps)).steps == fwd.steps
        bwd = backward_signature(x, n)
        at = first_recurrence_backward(x, n)
        assert backward_signature(at, len(bwd.steps)).steps == bwd.steps


def test_signature_rejects_nonpositive_steps():
    with pytest.raises(ValueError):
        forward_signature(2, 0)
    with pytest.raises(ValueError):
        backward_signature(2, 0)
