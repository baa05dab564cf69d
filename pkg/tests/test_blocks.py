import random
from dataclasses import replace

import pytest

from ansulator import _linalg as la
from ansulator.blocks import (
    MCGWord,
    TorusVector,
    apply_word,
    check_mcg_relations,
    letter_matrix,
    mcg_relation_report,
    random_word,
    rho,
    torus_pairing,
    xi_handlebody,
)
from ansulator.category import builtin_category
from ansulator.category.data import charge_conjugation
from ansulator.errors import CategoryMismatch, MalformedData, NotModular, NotVerified
from ansulator.exactnum import Cyclotomic
from ansulator.frobenius import TrivialFrobenius, group_algebra
from ansulator.selftest import random_valid_algebra

Z = Cyclotomic.zeta


def test_word_parsing_and_matrix():
    w = MCGWord.parse("S.T.Ti.T^-1")
    assert w.letters == ("S", "T", "Ti", "Ti")
    assert str(w) == "S.T.Ti.Ti"
    assert MCGWord.parse("").letters == ()
    assert MCGWord(("S",)).matrix == ((0, -1), (1, 0))
    assert MCGWord.T_power(-3).letters == ("Ti",) * 3
    assert (MCGWord(("S",)) + MCGWord(("T",))).letters == ("S", "T")
    with pytest.raises(MalformedData):
        MCGWord.parse("S.X")


def test_word_matrices_have_determinant_one():
    rng = random.Random(3)
    for _ in range(50):
        (a, b), (c, d) = random_word(rng).matrix
        assert a * d - b * c == 1


def test_st_cubed_is_s_squared_in_sl2z():
    assert MCGWord.parse("S.T.S.T.S.T").matrix == MCGWord.parse("S.S").matrix == ((-1, 0), (0, -1))


def test_rho_t_fibonacci(fib):
    T = rho(fib, MCGWord(("T",)))
    assert T[0][0] == 1 and T[0][1] == 0 and T[1][0] == 0
    assert T[1][1] == Z(5, 2)


def test_empty_word_is_identity(ising):
    assert rho(ising, MCGWord(())) == la.identity(3)


def test_s_squared_is_charge_conjugation(ising, toric, semion):
    for d in (ising, toric, semion):
        assert rho(d, MCGWord.parse("S.S")) == charge_conjugation(d)
    # every Ising simple is self dual
    assert charge_conjugation(ising) == la.identity(3)


def test_charge_conjugation_nontrivial_for_z3():
    z3 = builtin_category("z3")
    C = charge_conjugation(z3)
    assert C[1][2] == 1 and C[1][1] == 0
    assert rho(z3, MCGWord.parse("S.S")) == C


@pytest.mark.parametrize("name", ["fibonacci", "toric", "ising", "su2_3", "dz3", "semion"])
def test_mcg_relations(name):
    d = builtin_category(name)
    report = mcg_relation_report(d)
    assert all(report.values()), report


def test_toric_anomaly_is_one(toric):
    assert toric.sdata.anomaly == 1
    S, T = letter_matrix(toric, "S"), letter_matrix(toric, "T")
    ST = la.matmul(S, T)
    assert la.matmul(la.matmul(ST, ST), ST) == la.matmul(S, S)


def test_stale_twist_breaks_relations(ising):
    # conjugated sigma twist with the old S-data kept: (ST)^3 = kappa S^2 must fail
    twist = (ising.twist[0], ising.twist[1].conj(), ising.twist[2])
    stale = replace(ising, twist=twist, smatrix=ising.sdata)
    assert not check_mcg_relations(stale)
    assert not mcg_relation_report(stale)["(ST)^3 = kappa S^2"]


def test_non_modular_has_no_s():
    d = builtin_category("pointed:4:2")
    with pytest.raises(NotModular):
        letter_matrix(d, "S")
    with pytest.raises(NotModular):
        check_mcg_relations(d)
    # T alone is still defined
    assert len(letter_matrix(d, "T")) == d.rank


def test_apply_word_matches_rho(ising):
    rng = random.Random(11)
    v = TorusVector(ising, (Cyclotomic.rational(1), Z(8), Cyclotomic.rational(-2)))
    for _ in range(20):
        w = random_word(rng, 8)
        assert apply_word(ising, w, v).coeffs == tuple(la.matvec(rho(ising, w), list(v.coeffs)))


def test_xi_trivial_is_unit_basis(fib):
    assert xi_handlebody(TrivialFrobenius(fib)) == TorusVector.basis(fib, 0)


def test_xi_toric_boson(toric):
    xi = xi_handlebody(group_algebra(toric, ["e"]))
    assert xi == TorusVector.basis(toric, "1") + TorusVector.basis(toric, "e")
    assert xi["m"] == 0


def test_xi_group_algebra_dz3():
    d = builtin_category("dz3")
    F = group_algebra(d, ["0_0", "1_0", "2_0"])
    xi = xi_handlebody(F)
    assert {d.labels[a] for a in range(d.rank) if xi.coeffs[a]} == {"0_0", "1_0", "2_0"}
    assert all(xi.coeffs[a] == 1 for a in F.support)


def test_xi_is_t_invariant():
    rng = random.Random(5)
    T = MCGWord(("T",))
    for _ in range(10):
        F = random_valid_algebra(rng)
        xi = xi_handlebody(F)
        assert apply_word(F.category, T, xi) == xi


def test_xi_gauge_invariant():
    rng = random.Random(8)
    for _ in range(10):
        F = random_valid_algebra(rng)
        assert xi_handlebody(F) == xi_handlebody(group_algebra(F.category, F.support))


def test_xi_linear_in_unit_and_counit(toric):
    F = group_algebra(toric, ["e"])
    base = xi_handlebody(F, check=False)
    c = Cyclotomic.rational(3) * Z(8)
    assert xi_handlebody(replace(F, eta=F.eta * c), check=False) == base * c
    assert xi_handlebody(replace(F, eps=F.eps * c), check=False) == base * c


def test_xi_rejects_invalid(toric):
    F = group_algebra(toric, ["e"])
    with pytest.raises(NotVerified):
        xi_handlebody(replace(F, eta=F.eta * 2))


def test_xi_rejects_unnormalized(toric):
    F = group_algebra(toric, ["e"])
    two = Cyclotomic.rational(2)
    G = replace(F, delta={k: v / two for k, v in F.delta.items()}, eps=F.eps * two, lam_prime=two.inv())
    with pytest.raises(NotVerified):
        xi_handlebody(G)


def test_torus_pairing(toric, fib):
    e0 = TorusVector.basis(toric, "1")
    ee = TorusVector.basis(toric, "e")
    assert torus_pairing(e0, e0) == 1
    assert torus_pairing(e0, ee) == 0
    assert torus_pairing(ee, ee) == 1


def test_torus_pairing_uses_duals():
    z3 = builtin_category("z3")
    one, two = TorusVector.basis(z3, "1"), TorusVector.basis(z3, "2")
    assert torus_pairing(one, two) == 1
    assert torus_pairing(one, one) == 0


def test_torus_pairing_category_mismatch(toric, fib):
    with pytest.raises(CategoryMismatch):
        torus_pairing(TorusVector.basis(toric, 0), TorusVector.basis(fib, 0))
    with pytest.raises(CategoryMismatch):
        TorusVector.basis(toric, 0) + TorusVector.basis(fib, 0)


def test_torus_vector_shape_and_json(fib):
    with pytest.raises(MalformedData):
        TorusVector(fib, (1, 2, 3))
    v = TorusVector(fib, (1, 0))
    assert v.to_json()["1"] == Cyclotomic.rational(1).to_json()
    assert repr(TorusVector.zero(fib)) == "0"
