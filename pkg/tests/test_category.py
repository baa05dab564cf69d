import json
from dataclasses import replace

import numpy as np
import pytest

from ansulator import _linalg as la
from ansulator.category import (
    FusionData,
    builtin_category,
    builtin_names,
    category_from_json,
    category_to_json,
    charge_conjugation,
    compute_smatrix,
    is_modular,
    load_category,
    pointed,
    save_category,
    su2_level,
    validate_fusion_data,
    verlinde_consistency,
)
from ansulator.errors import (
    InconsistentPointedData,
    MalformedData,
    NotModular,
    SchemaError,
    UnsupportedSpec,
    ValidationError,
)
from ansulator.exactnum import Cyclotomic, sqrt_of_integer, zeta

ALL = builtin_names()


def names_of(problems):
    return {v.invariant for v in problems}


@pytest.mark.parametrize("name", ALL)
def test_builtins_are_valid_and_modular(name):
    d = builtin_category(name)
    assert validate_fusion_data(d) == []
    assert is_modular(d)
    s = d.sdata
    L = d.rank
    # s~ symmetric with first row the quantum dimensions
    assert all(s.stilde[a][b] == s.stilde[b][a] for a in range(L) for b in range(L))
    assert all(s.stilde[0][a] == d.qdim[a] for a in range(L))
    assert s.gauss_plus * s.gauss_minus == d.global_dim_sq
    D2 = d.global_dim_sq
    assert la.matmul(s.stilde, s.stilde) == la.scale(charge_conjugation(d), D2)


@pytest.mark.parametrize("name", ["fibonacci", "ising", "toric", "su2_3", "su2_8", "z7", "dz3"])
def test_verlinde(name):
    assert verlinde_consistency(builtin_category(name))


def test_fibonacci_data(fib):
    tau = 1
    d = fib.qdim[tau]
    assert d * d == d + 1
    assert d == -zeta(5, 2) - zeta(5, 3)
    assert fib.twist[tau] == zeta(5, 2)
    assert fib.sdata.stilde == [[1, d], [d, -1]]
    assert fib.total_dim ** 2 == 2 + d


def test_ising_data(ising):
    sigma, psi = 1, 2
    assert ising.qdim[sigma] ** 2 == 2
    assert ising.twist[psi] == -1
    assert ising.total_dim == 2
    assert ising.twist[sigma] == zeta(16)


def test_toric_smatrix_is_the_braiding_bicharacter(toric):
    assert [t for t in toric.twist] == [1, 1, 1, -1]
    pd = toric.pointed
    for a in range(4):
        for b in range(4):
            mono = pd.braiding_value(pd.element_of[b], pd.element_of[a]) * pd.braiding_value(
                pd.element_of[a], pd.element_of[b])
            assert toric.sdata.stilde[a][b] == mono.inv()
            assert toric.sdata.stilde[a][b] in (1, -1)
    assert toric.sdata.anomaly == 1


def test_su2_formulas():
    for k in range(1, 9):
        d = su2_level(k)
        q = zeta(2 * (k + 2))
        for j in range(k + 1):
            assert d.qdim[j] * (q - q.inv()) == q ** (j + 1) - q.inv() ** (j + 1)
            assert d.twist[j] == zeta(4 * (k + 2), j * (j + 2))
        assert d.total_dim ** 2 == d.global_dim_sq
    with pytest.raises(UnsupportedSpec):
        su2_level(9)


def test_su2_2_is_a_galois_conjugate_of_ising(ising):
    d = builtin_category("su2_2")
    assert np.array_equal(d.fusion, ising.fusion)
    # theta_1 = exp(2 pi i * 3/16) rather than Ising's exp(2 pi i / 16)
    assert list(d.twist) == [1, zeta(16, 3), -1]


def test_unit_category():
    d = pointed((1,), (0,), name="unit")
    assert d.rank == 1
    assert validate_fusion_data(d) == []
    s = compute_smatrix(d)
    assert s.stilde == [[1]] and s.gauss_plus == 1 and s.gauss_minus == 1 and s.anomaly == 1


def test_z4_with_transparent_label_is_not_modular():
    d = builtin_category("pointed:4:2")
    assert validate_fusion_data(d) == []
    assert list(d.twist) == [1, zeta(4), 1, zeta(4)]
    assert not is_modular(d)
    with pytest.raises(NotModular):
        verlinde_consistency(d)


def test_stale_derived_data_detected(fib):
    bad = replace(fib, twist=(Cyclotomic.rational(1), Cyclotomic.rational(1)))
    assert "derived-data" in names_of(validate_fusion_data(bad))


def test_verlinde_detects_wrong_fusion(fib):
    N = np.array(fib.fusion)
    N[1, 1, 1] = 2
    bad = replace(fib, fusion=N, smatrix=None)
    assert not verlinde_consistency(bad)
    assert "qdim-fusion" in names_of(validate_fusion_data(bad))


def test_validation_reports(fib, ising):
    N = np.array(fib.fusion)
    N[0, 1, 1] = 0
    assert "unit-fusion" in names_of(validate_fusion_data(replace(fib, fusion=N, smatrix=None)))
    assert "dual-twist" not in names_of(validate_fusion_data(ising))
    bad_qdim = replace(ising, qdim=(ising.qdim[0], -ising.qdim[1], ising.qdim[2]), smatrix=None)
    assert "qdim-real-positive" in names_of(validate_fusion_data(bad_qdim))
    bad_D = replace(ising, total_dim=Cyclotomic.rational(-2), smatrix=None)
    assert "total-dim-positive" in names_of(validate_fusion_data(bad_D))
    bad_theta = replace(fib, twist=(fib.twist[0], fib.twist[1] * 2), smatrix=None)
    assert "twist-root-of-unity" in names_of(validate_fusion_data(bad_theta))


def test_pointed_braiding_checked_against_twists(toric):
    bad = replace(toric, twist=(toric.twist[0], toric.twist[1], toric.twist[2], toric.twist[3] * -1), smatrix=None)
    assert "pointed-twist" in names_of(validate_fusion_data(bad))


def test_malformed_inputs(fib):
    with pytest.raises(MalformedData):
        replace(fib, fusion=np.zeros((2, 2)))
    with pytest.raises(MalformedData):
        replace(fib, dual=(0, 5))
    with pytest.raises(MalformedData):
        replace(fib, twist=(fib.twist[0],))


def test_pointed_constructors():
    d = pointed((3,), twists=[Cyclotomic.rational(1), zeta(3), zeta(3)], name="z3-twists")
    assert validate_fusion_data(d) == []
    assert is_modular(d)
    with pytest.raises(InconsistentPointedData):
        # theta must be a quadratic form: theta(2) = theta(1)^4
        pointed((3,), twists=[Cyclotomic.rational(1), zeta(3), Cyclotomic.rational(1)])
    with pytest.raises((InconsistentPointedData, UnsupportedSpec)):
        pointed((3,), (1,))  # p * n must be even
    with pytest.raises(UnsupportedSpec):
        builtin_category("pointed:65:0")
    with pytest.raises(UnsupportedSpec):
        builtin_category("nonsense")


def test_pointed_odd_p_has_nontrivial_associator():
    d = builtin_category("semion")
    pd = d.pointed
    assert pd.omega_value(1, 1, 1) == -1
    assert pd.braiding_value(1, 1) == zeta(4)


def test_label_lookup(toric):
    assert toric.label_index("e") == 1
    assert toric.label_index(3) == 3
    assert toric.label_index("2") == 2
    with pytest.raises(KeyError):
        toric.label_index("x")


@pytest.mark.parametrize("name", ["fibonacci", "ising", "toric", "su2_4", "three_fermion", "dz3", "semion"])
def test_file_round_trip(name, tmp_path):
    d = builtin_category(name)
    path = tmp_path / f"{name}.json"
    save_category(d, path)
    assert load_category(path) == d
    assert category_from_json(json.loads(path.read_text())) == d


def _fib_json(fib):
    return category_to_json(fib)


def test_missing_dual_schema_error(fib):
    obj = _fib_json(fib)
    del obj["dual"]
    with pytest.raises(SchemaError) as info:
        category_from_json(obj)
    assert info.value.pointer == "/dual"


def test_unknown_key_rejected(fib):
    obj = _fib_json(fib)
    obj["colour"] = "blue"
    with pytest.raises(SchemaError) as info:
        category_from_json(obj)
    assert info.value.pointer == "/colour"


def test_unknown_label_pointer(fib):
    obj = _fib_json(fib)
    obj["fusion"][0][2] = "sigma"
    with pytest.raises(SchemaError) as info:
        category_from_json(obj)
    assert info.value.pointer == "/fusion/0/2"


def test_bad_scalar_schema(fib):
    obj = _fib_json(fib)
    obj["qdim"]["tau"]["coeffs"][0] = "0.5"
    with pytest.raises(SchemaError) as info:
        category_from_json(obj)
    assert info.value.pointer.startswith("/qdim/tau/coeffs")


def test_dual_twist_violation_in_file():
    z3 = builtin_category("z3")
    obj = category_to_json(z3)
    assert obj["dual"] == ["0", "2", "1"]
    obj["twist"]["2"] = Cyclotomic.rational(1).to_json()
    with pytest.raises(ValidationError) as info:
        category_from_json(obj)
    assert "dual-twist" in {v.invariant for v in info.value.violations}
    assert "dual-twist" in str(info.value)


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_category(path)


def test_fsymbols_extension_point(fib):
    obj = _fib_json(fib)
    obj["fsymbols"] = []
    assert category_from_json(obj) == fib


def test_equality_ignores_cached_smatrix(fib):
    assert replace(fib, smatrix=None) == fib
    assert fib.__hash__ is None


def test_d_is_explicit_and_checked(fib):
    bad = replace(fib, total_dim=sqrt_of_integer(3), smatrix=None)
    assert "total-dim-square" in names_of(validate_fusion_data(bad))


def test_fusion_immutable(fib):
    with pytest.raises(ValueError):
        fib.fusion[0, 0, 0] = 3


def test_rational_twist_table_gauss_sum(toric):
    assert toric.sdata.gauss_plus == 2 and toric.sdata.gauss_minus == 2
    fib = builtin_category("fibonacci")
    # kappa = exp(2 pi i * 14/40) for Fibonacci (central charge 14/5)
    assert fib.sdata.anomaly == zeta(40, 14)
