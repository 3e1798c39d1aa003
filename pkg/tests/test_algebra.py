import pytest

from tml.algebra import (algebra_evaluate, check_tma_laws, m4_algebra,
                         product_algebra)
from tml.syntax import parse


@pytest.fixture(scope="module")
def m4():
    return m4_algebra()


def test_m4_passes_all_laws(m4):
    report = check_tma_laws(m4)
    assert report.all_pass, str(report)


def test_identity_box_fails_first_axiom(m4):
    broken = m4.__class__(
        carrier=m4.carrier, meet=m4.meet, join=m4.join, neg=m4.neg,
        box={a: a for a in m4.carrier}, zero=m4.zero)
    report = check_tma_laws(broken)
    check = report.by_name("modal_axiom_box_meet_neg")
    assert not check.holds
    assert check.witness == ("n",)  # n & ~n = n, not 0


def test_product_is_closed_under_the_laws(m4):
    square = product_algebra(m4, m4)
    assert len(square.carrier) == 16
    assert square.neg[("1", "0")] == ("0", "1")
    assert square.box[("1", "b")] == ("1", "0")
    report = check_tma_laws(square)
    assert report.all_pass, "\n".join(str(c) for c in report.failing())


def test_report_enumerates_expected_laws(m4):
    names = {c.name for c in check_tma_laws(m4).checks}
    must_have = {
        "or_commutative", "and_associative", "distributive_meet_over_join",
        "neg_involution", "de_morgan_join",
        "modal_axiom_box_meet_neg", "modal_axiom_neg_box_meet",
        "neg_box_join_is_top", "box_join_neg", "box_excluded_middle",
        "box_non_contradiction", "box_decreasing", "box_preserves_top",
        "box_preserves_bottom", "box_idempotent", "box_distributes_over_meet",
        "box_join_boxed", "box_of_neg_box", "meet_with_box_neg",
        "box_of_boxed_meet", "box_of_boxed_join", "box_join_implication",
    }
    assert must_have <= names


def test_algebra_evaluate_componentwise(m4):
    square = product_algebra(m4, m4)
    f = parse("#(p | q)")
    got = algebra_evaluate(f, {"p": ("1", "0"), "q": ("n", "1")}, square)
    assert got == (m4.box[m4.join[("1", "n")]], m4.box[m4.join[("0", "1")]])


def test_one_is_neg_zero(m4):
    assert m4.one == "1"
    square = product_algebra(m4, m4)
    assert square.one == ("1", "1")
