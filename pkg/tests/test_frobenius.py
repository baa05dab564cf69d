import json
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from ansulator.category import builtin_category, builtin_names
from ansulator.errors import (
    CocycleObstruction,
    NotASubgroup,
    NotIsotropic,
    NotSpecial,
    SchemaError,
    ValidationError,
)
from ansulator.exactnum import Cyclotomic
from ansulator.frobenius import (
    PointedFrobenius,
    TrivialFrobenius,
    frobenius_from_json,
    frobenius_to_json,
    gauge_transform,
    group_algebra,
    invertible_subgroups,
    load_frobenius,
    mu_delta_components,
    renormalize_special,
    save_frobenius,
    verify_frobenius,
)
from ansulator.selftest import admissible_algebras, perturb, random_valid_algebra

ONE = Cyclotomic.rational(1)


def invariants(F):
    return {v.invariant for v in verify_frobenius(F)}


def test_toric_group_algebra(toric):
    F = group_algebra(toric, ["e"])
    assert F.support == (0, 1)
    assert verify_frobenius(F) == []
    assert F.lam == 2 and F.lam_prime == 1
    assert F.eps * F.eta == 2
    assert set(mu_delta_components(F).values()) == {1}


def test_trivial_subgroup_behaves_like_trivial_algebra(fib, toric):
    for d in (fib, toric):
        F = group_algebra(d, [])
        assert F.support == (0,)
        assert verify_frobenius(F) == []
        assert F.lam == 1 and F.lam_prime == 1
    assert verify_frobenius(TrivialFrobenius(fib)) == []
    T = TrivialFrobenius(fib)
    assert T.lam == 1 and T.lam_prime == 1 and T.support == (0,)


def test_group_algebra_errors(semion, toric, fib):
    with pytest.raises(NotIsotropic):
        group_algebra(semion, ["s"])
    with pytest.raises(NotIsotropic):
        group_algebra(toric, ["f"])
    with pytest.raises(NotASubgroup):
        group_algebra(toric, ["e", "m"])  # missing f = e x m
    with pytest.raises(NotASubgroup):
        group_algebra(fib, ["tau"])
    with pytest.raises(NotASubgroup):
        group_algebra(builtin_category("ising"), ["sigma"])


def test_cocycle_obstruction():
    # Z2^3 with an isotropic Klein subgroup on which the braiding is a nontrivial alternating form;
    # only a twisted group algebra could live there
    d = builtin_category("pointed:2,2,2:0,0,0:1,0,1")
    H = (0, 2, 5, 7)
    assert all(d.twist[a] == 1 for a in H)
    with pytest.raises(CocycleObstruction):
        group_algebra(d, H)
    with pytest.raises(NotIsotropic):
        group_algebra(builtin_category("pointed:2:2"), [1])


def test_odd_parameter_families():
    # odd p gives a nontrivial associator on the whole group; every accepted algebra must still verify
    for spec in ("pointed:8:1", "pointed:4:1", "pointed:6:1", "pointed:8:3"):
        d = builtin_category(spec)
        for H in invertible_subgroups(d):
            try:
                F = group_algebra(d, H)
            except (NotIsotropic, CocycleObstruction):
                continue
            assert verify_frobenius(F) == []


def test_subgroup_enumeration(toric):
    assert invertible_subgroups(toric) == [(0,), (0, 1), (0, 1, 2, 3), (0, 2), (0, 3)]
    assert invertible_subgroups(builtin_category("z6")) == [(0,), (0, 1, 2, 3, 4, 5), (0, 2, 4), (0, 3)]
    assert invertible_subgroups(builtin_category("fibonacci")) == [(0,)]
    # Z4 x Z4 has 15 subgroups
    assert len(invertible_subgroups(builtin_category("dz4"))) == 15


@pytest.mark.parametrize("name", builtin_names())
def test_every_admissible_group_algebra_verifies(name):
    for F in admissible_algebras(builtin_category(name)):
        assert verify_frobenius(F) == []


def test_negative_example_mu_ee(toric):
    F = group_algebra(toric, ["e"])
    bad = F.with_scalar("mu", (1, 1), Cyclotomic.rational(-1))
    found = invariants(bad)
    assert found
    # m(e,e) = -1 is still a commutative 2-cocycle; the Frobenius and special relations catch it
    assert "special-product" in found
    assert found <= {"frobenius-left", "frobenius-right", "special-product", "associativity", "commutativity"}


def test_each_axiom_can_fail(toric):
    F = group_algebra(toric, ["e"])
    assert "unit" in invariants(F.with_scalar("eta", value=Cyclotomic.rational(3)))
    assert "counit" in invariants(F.with_scalar("eps", value=Cyclotomic.rational(3)))
    assert "special-unit" in invariants(replace(F, lam=Cyclotomic.rational(5)))
    assert "special-product" in invariants(replace(F, lam_prime=Cyclotomic.rational(5)))
    missing = dict(F.mu)
    del missing[1, 1]
    assert invariants(replace(F, mu=missing)) == {"structure-table"}
    assert "support-subgroup" in invariants(replace(F, support=(0, 2, 1)[:2] + (3,)))


def test_commutativity_violation_on_nonsymmetric_table():
    d = builtin_category("dz3")
    F = group_algebra(d, [1, 2])
    G = gauge_transform(F, {1: Cyclotomic.rational(2), 2: Cyclotomic.rational(5)})
    assert verify_frobenius(G) == []
    bad = G.with_scalar("mu", (1, 2), G.mu[1, 2] * 7).with_scalar("mu", (2, 1), G.mu[2, 1])
    assert "commutativity" in invariants(bad)


def test_renormalize_special(toric):
    F = group_algebra(toric, ["e"])
    raw = replace(F, delta={k: ONE for k in F.delta}, eps=ONE, lam=ONE, lam_prime=Cyclotomic.rational(2))
    assert set(mu_delta_components(raw).values()) == {2}
    R = renormalize_special(raw)
    assert all(v == Fraction(1, 2) for v in R.delta.values())
    assert R.eps == 2 * raw.eps
    assert R.lam_prime == 1 and R.lam == 2
    assert renormalize_special(R) is R
    assert renormalize_special(F) is F
    T = TrivialFrobenius(toric)
    assert renormalize_special(T) is T


def test_renormalize_rejects_degenerate(toric):
    F = group_algebra(toric, ["e"])
    zero = replace(F, delta={k: Cyclotomic.rational(0) for k in F.delta})
    with pytest.raises(NotSpecial):
        renormalize_special(zero)


def test_gauge_transforms_preserve_validity():
    rng = random.Random(7)
    for _ in range(30):
        F = random_valid_algebra(rng)
        assert verify_frobenius(F) == []
        assert F.lam_prime == 1


def test_perturbations_always_detected():
    rng = random.Random(11)
    for _ in range(100):
        F = random_valid_algebra(rng)
        G, where = perturb(F, rng)
        assert verify_frobenius(G), where


def test_file_round_trip(tmp_path, toric):
    F = gauge_transform(group_algebra(toric, ["e"]), {1: Cyclotomic.rational(3)})
    path = tmp_path / "F.json"
    save_frobenius(F, path)
    G = load_frobenius(path, builtin_category)
    assert G.category is toric
    assert G.support == F.support and G.mu == F.mu and G.delta == F.delta
    assert G.eta == F.eta and G.eps == F.eps and G.lam == F.lam and G.lam_prime == F.lam_prime


def test_loader_refuses_invalid_unless_allowed(tmp_path, toric):
    F = group_algebra(toric, ["e"])
    obj = frobenius_to_json(F)
    obj["eta"] = Cyclotomic.rational(5).to_json()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    with pytest.raises(ValidationError) as info:
        load_frobenius(path, builtin_category)
    assert "unit" in {v.invariant for v in info.value.violations}
    G = load_frobenius(path, builtin_category, allow_invalid=True)
    assert isinstance(G, PointedFrobenius) and verify_frobenius(G)


def test_loader_schema_errors(toric):
    obj = frobenius_to_json(group_algebra(toric, ["e"]))
    broken = dict(obj)
    del broken["eps"]
    with pytest.raises(SchemaError) as info:
        frobenius_from_json(broken, builtin_category)
    assert info.value.pointer == "/eps"
    broken = json.loads(json.dumps(obj))
    broken["mu"][0][1] = "nope"
    with pytest.raises(SchemaError) as info:
        frobenius_from_json(broken, builtin_category)
    assert info.value.pointer == "/mu/0/1"


def test_optional_lambda_fields(toric):
    obj = frobenius_to_json(group_algebra(toric, ["e"]))
    del obj["lambda"], obj["lambda_prime"]
    F = frobenius_from_json(obj, builtin_category)
    assert F.lam == 2 and F.lam_prime == 1
