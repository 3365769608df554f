import itertools

import pytest

from flagtype.flags import Composition
from flagtype.classifier import (classify, theorem17_match, normalize_triple,
                                 gates_fired, sq_free_cover, FINITE, INFINITE,
                                 IFF_SQ, EMPIRICAL, Verdict)


def C(*parts):
    return Composition(parts)


def test_bruhat_and_k4():
    assert classify(5, [(3,)]).status == FINITE
    assert classify(5, [(3,), (1, 2)]).status == FINITE
    assert classify(2, [(1,), (1,), (1,), (1,)]).status == INFINITE
    assert classify(4, [(1,)] * 5).status == INFINITE
    assert classify(1, [(1,), (1,), (1,), (1,)]).status == FINITE


def test_spec_examples():
    v = classify(3, [(2,), (2,), (2,)], "finite")
    assert v.status == INFINITE
    v = classify(7, [(7,), (4,), (1, 1, 1, 4)], "unknown")
    assert v.status == FINITE
    assert any("III-4" in t for t in v.trace)
    v = classify(5, [(1,), (2, 3), (1, 1, 1, 1, 1)], "unknown")
    assert v.status == IFF_SQ
    assert any("I-2" in t for t in v.trace)
    assert any("gate" in t for t in v.trace)


def test_theorem17_match_examples():
    assert theorem17_match(6, C(6), C(4), C(1, 2, 3)) == "III-3"
    assert theorem17_match(6, C(6), C(4), C(2, 2, 2)) is None
    assert theorem17_match(5, C(1), C(4), C(1, 1)) == "I-1"
    assert theorem17_match(4, C(4), C(4), C(4)) == "II"
    assert theorem17_match(8, C(8), C(4), C(1, 1, 1, 5)) == "III-4"
    assert theorem17_match(8, C(8), C(5), C(2, 2)) == "III-2"
    assert theorem17_match(8, C(8), C(5), C(7,)) == "III-1"


def test_normalize_triple():
    anns = normalize_triple([C(1), C(3), C(2, 2)])
    assert len(anns) == 6
    singles = [a for a in anns if a["a"] == (1,)]
    assert singles and all("a-single" in a["notes"] for a in singles)


def test_gates():
    assert gates_fired(5, [C(1), C(2, 3), C(1, 1, 1, 1, 1)]) == \
        ["gate-max-first-part"]
    assert "gate-two-two-step" in gates_fired(5, [C(5), C(1, 1),
                                                  C(1, 1, 1, 1, 1)])
    assert "gate-mid-subspace-four-steps" in gates_fired(
        7, [C(7), C(3), C(1, 1, 1, 1)])
    assert gates_fired(6, [C(6), C(4), C(1, 2, 3)]) == []


def test_square_class_sensitivity():
    triple = [(5,), (1, 1), (1, 1, 1, 1, 1)]
    assert classify(5, triple, "finite").status == FINITE
    assert classify(5, triple, "infinite").status == INFINITE
    assert classify(5, triple, "unknown").status == IFF_SQ


def test_sq_free_coverage():
    assert sq_free_cover(6, [C(6), C(4), C(1, 2, 3)]) is not None
    assert sq_free_cover(7, [C(7), C(3), C(1, 1, 1)]) is not None
    assert sq_free_cover(5, [C(5), C(1, 1), C(2, 3)]) is not None
    assert sq_free_cover(6, [C(6), C(6), C(2, 2, 2)]) is None
    # trailing unit step below a maximal space is free
    assert sq_free_cover(7, [C(7), C(4), C(2, 4, 1)]) is not None


def test_small_n_policy():
    assert classify(3, [(2,), (2,), (1, 2)]).status == INFINITE
    assert classify(3, [(1, 2), (1, 2), (1, 2)]).status == INFINITE
    assert classify(3, [(3,), (1,), (3,)]).status == FINITE
    assert classify(3, [(1,), (1, 1), (3,)]).status == FINITE
    assert classify(2, [(1, 1), (1, 1), (1, 1)]).status == EMPIRICAL
    assert classify(3, [(1,), (1, 1), (1, 2)]).status == EMPIRICAL


def test_permutation_invariance_grid():
    shapes = [[(4,), (2, 2), (1, 1, 1, 1)], [(1,), (4,), (2, 2)],
              [(4,), (4,), (1, 3)], [(2,), (1, 1), (2, 2)],
              [(4,), (1,), (1, 1, 1, 1)]]
    for n in (4, 5, 6, 8):
        for comps in shapes:
            try:
                base = classify(n, comps).status
            except ValueError:
                continue
            for perm in itertools.permutations(comps):
                assert classify(n, list(perm)).status == base


def test_coarsening_monotonicity():
    # if (g1+g2, g3) is infinite then (g1, g2, g3) is infinite
    import itertools as it
    n = 6
    others = [[(6,), (4,)], [(6,), (6,)], [(1,), (4,)]]
    for g1, g2, g3 in it.product([1, 2], repeat=3):
        if g1 + g2 + g3 > n:
            continue
        for rest in others:
            coarse = classify(n, rest + [(g1 + g2, g3)], "infinite").status
            fine = classify(n, rest + [(g1, g2, g3)], "infinite").status
            if coarse == INFINITE:
                assert fine == INFINITE, (rest, (g1, g2, g3), coarse, fine)


def test_verdict_requires_trace():
    with pytest.raises(ValueError):
        Verdict(FINITE, [])
    v = classify(7, [(7,), (4,), (1, 1, 1, 4)])
    assert v.to_json()["verdict"] == FINITE


def test_input_validation():
    with pytest.raises(ValueError):
        classify(3, [(4,), (1,), (1,)])
    with pytest.raises(ValueError):
        classify(3, [(2,), (2,), (2,)], "sometimes")
    with pytest.raises(ValueError):
        classify(3, [])
