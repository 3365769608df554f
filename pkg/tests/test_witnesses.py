import pytest

from flagtype.linalg import canonicalize, identity
from flagtype.flags import validate_tuple, act
from flagtype.witnesses import (FAMILIES, build, compositions,
                                equivariance_check, separation_check,
                                family_classes)


def test_all_families_validate_small_field():
    for fid, fam in FAMILIES.items():
        for q in (3, 5):
            lam = fam.lambda_domain(q, fam.n_min)[0]
            build(fid, fam.n_min, lam, q)  # validity asserted inside


def test_o4_l31_4_vectors():
    # U_{4,lambda} = <f1 + lam f3, f2 - lam f4> at n = 2 (f_i = e_i)
    ft = build("O4_L31_4", 2, 2, 5)
    u4 = ft[3][0]
    want = canonicalize(5, 4, [[1, 0, 2, 0], [0, 1, 0, -2]])
    assert u4 == want


def test_o6_l322_vectors():
    # U_+^{2,lambda} = <f1+f3, lam f2 + f3>
    ft = build("O6_L322_sq", 3, 2, 5)
    top = ft[2][1]
    want = canonicalize(5, 6, [[1, 0, 1, 0, 0, 0], [0, 2, 1, 0, 0, 0]])
    assert top == want
    v = ft[0][0]
    assert v == canonicalize(5, 6, [[0, 1, 0, 1, 0, 0],
                                    [0, 0, 1, 0, -1, 0],
                                    [0, 0, 0, 0, 0, 1]])


def test_o5_embedding_preserves_form():
    # phi uses the 1/2 coefficient; the built tuple must be valid over
    # every supported field and over the rationals
    ft = build("O5emb_L33p", 3, 1, 3)
    ft5 = build("O5emb_L33p", 3, 1, 5)
    first = ft5[0][0]
    assert first.dim == 1
    # over GF(5): e3 + (1/2) e4 = e3 + 3 e4 shows up in the first factor
    vec = first.rows[0]
    assert vec[2] == 1 and vec[3] == 3


def test_padding_at_larger_n():
    # O6_L32p at n = 4 pads each factor with U_[l]
    ft = build("O6_L32p", 4, 1, 3)
    comps = compositions("O6_L32p")
    assert validate_tuple(ft, comps, 4) is None
    # padded spaces contain e_1 up to the pad length... the first factor
    # has dim 2 and no padding is needed; dims already enforced by validate


def test_lambda_domain_and_errors():
    fam = FAMILIES["O4_L31_0"]
    assert fam.lambda_domain(5, 2) == [0, 1, 2, 3, 4]
    assert fam.lambda_domain(5, 3) == [0, 2, 3, 4]  # lambda != 1 once padded
    with pytest.raises(ValueError):
        build("O4_L31_0", 1, 0, 3)          # n too small
    with pytest.raises(ValueError):
        build("O6_L322_sq", 3, 0, 3)        # lambda outside F^x
    with pytest.raises(ValueError):
        build("O10_L323_sq", 4, 1, 3)       # n below minimum


def test_equivariance_identity_and_spec_example():
    cert = equivariance_check("O6_L322_sq", 2, 1, 5)
    assert cert["ok"] and cert["target"] == 2
    assert cert["g"] == identity(5, 6)
    cert = equivariance_check("O6_L322_sq", 1, 2, 5)
    assert cert["ok"] and cert["target"] == 4
    ft1 = build("O6_L322_sq", 3, 1, 5)
    ft4 = build("O6_L322_sq", 3, 4, 5)
    assert act(cert["g"], ft1) == ft4


def test_separation_spec_examples():
    v, g = separation_check("O4_L31_4", 2, 3, 5)
    assert v == "No"
    v, g = separation_check("O4_L31_4", 2, 2, 5)
    assert v == "Yes" and g == identity(5, 4)
    # Lemma 3.2' permits collisions only within {mu, 1-mu}: mu = 3 differs
    v, g = separation_check("O6_L32p", 2, 3, 5)
    assert v == "No"
    v, _ = separation_check("O8_L32_i", 1, 2, 3)
    assert v == "Infeasible"


def test_family_classes_o4_q3():
    for i in range(5):
        classes, _ = family_classes("O4_L31_%d" % i, 3)
        assert len(classes) == 3  # all lambda in F_3 pairwise distinct


def test_square_class_partition_q3():
    classes, _ = family_classes("O6_L322_sq", 3)
    assert sorted(map(sorted, classes)) == [[1], [2]]
