import random

import pytest

from flagtype.linalg import identity, inverse
from flagtype.geometry import (standard_isotropic, coordinate_subspace,
                               group_generators, random_group_element,
                               w_element, bruhat_cell)
from flagtype.flags import (Composition, validate, validate_tuple, act,
                            enumerate_chains, enumerate_chains_ambient,
                            enumerate_subspaces, BudgetExceeded,
                            tuple_to_json)

from oracles import isotropic_subspaces


def test_composition_validation():
    c = Composition([2, 1])
    assert c.dims == (2, 3)
    c.check(3)
    with pytest.raises(ValueError):
        c.check(2)
    with pytest.raises(ValueError):
        Composition([0, 1])
    with pytest.raises(ValueError):
        Composition([])


def test_validate_examples():
    n, q = 3, 3
    e = lambda idx: coordinate_subspace(q, 2 * n, idx)
    good = (e([1]), e([1, 2]))
    assert validate(good, Composition([1, 1]), n) is None
    bad_iso = (e([1]), e([1, 6]))
    msg = validate(bad_iso, Composition([1, 1]), n)
    assert msg is not None and "isotropy" in msg
    msg = validate((e([1]),), Composition([2]), n)
    assert msg is not None and "dimension" in msg
    msg = validate((e([1]), e([2, 3])), Composition([1, 1]), n)
    assert msg is not None and "nesting" in msg
    msg = validate_tuple((good, (e([2]),)), [Composition([1, 1]),
                                             Composition([1])], n)
    assert msg is None


def test_enumeration_counts_against_oracle():
    # naive all-subspaces-filtered oracle at n = 2
    for q in (3, 5):
        for dim in (1, 2):
            mine = enumerate_subspaces(q, 4, dim, iso_n=2)
            oracle = isotropic_subspaces(q, 2, dim)
            assert sorted(s.rows for s in mine) == \
                sorted(s.rows for s in oracle)
    assert len(enumerate_chains(3, 2, Composition([2]))) == 8
    assert len(enumerate_chains(3, 2, Composition([1]))) == 16
    assert len(enumerate_chains(3, 3, Composition([3]))) == 80


def test_enumeration_deterministic():
    a = enumerate_chains(3, 2, Composition([1, 1]))
    b = enumerate_chains(3, 2, Composition([1, 1]))
    assert a == b
    assert len(a) == len(set(a))
    for ch in a:
        assert validate(ch, Composition([1, 1]), 2) is None


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_chains(5, 3, Composition([3]), budget=100)


def test_gl_flag_enumeration():
    assert len(enumerate_chains_ambient(3, 3, Composition([1, 1, 1]))) == 52
    assert len(enumerate_chains_ambient(5, 3, Composition([1, 1, 1]))) == 186


def test_act_examples_and_roundtrip():
    n, q = 2, 3
    u0 = standard_isotropic(q, n, 0)
    f = ((u0,),)
    assert act(identity(q, 2 * n), f) == f
    w1 = w_element(q, n, 1)
    img = act(w1, f)
    assert bruhat_cell(img[0][0], n) == 1
    rng = random.Random(0)
    gens = group_generators(q, n)
    chains = enumerate_chains(q, n, Composition([1, 1]))
    for _ in range(200):
        g = random_group_element(q, n, rng, gens=gens)
        ch = chains[rng.randrange(len(chains))]
        f = ((ch[0],), ch)
        assert act(inverse(g), act(g, f)) == f
        assert validate_tuple(act(g, f), [Composition([1]),
                                          Composition([1, 1])], n) is None


def test_tuple_json():
    n, q = 2, 3
    u0 = standard_isotropic(q, n, 0)
    j = tuple_to_json(((u0,),), n, q)
    assert j["n"] == n and j["q"] == q
    assert j["chains"][0][0]["basis"] == [[1, 0, 0, 0], [0, 1, 0, 0]]
