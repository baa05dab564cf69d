"""Named property checks shared by the ``selftest`` command and the test suite.

Every check is deterministic for a given seed: randomness comes from a
``random.Random`` seeded with the seed and the check name, and reports carry
no timings.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .blocks import MCGWord, TorusVector, apply_word, check_mcg_relations, random_word, xi_handlebody
from .category import builtin_category, builtin_names, category_from_json, category_to_json
from .category.data import is_modular, validate_fusion_data, verlinde_consistency
from .errors import AnsulatorError
from .exactnum import Cyclotomic, zeta
from .frobenius import (
    TrivialFrobenius,
    gauge_transform,
    group_algebra,
    invertible_subgroups,
    mu_delta_components,
    renormalize_special,
    verify_frobenius,
)
from .manifolds import (
    HeegaardPresentation,
    build_v_M_F,
    double_coset_transform,
    invariant,
    kappa_power,
    lens_presentation,
    numeric_invariant,
    projective_exponent,
    s1xs2,
    s3,
)
from .oracle import ChainSurgery, brute_force_xi, gauss_sum_lens, plumbing_invariant

DEFAULT_SEED = 20240531
LENS_MAX_P = 12
GAUSS_MAX_P = 20
GAUSS_MAX_ORDER = 16
FIELD_ORDERS = (3, 4, 5, 8, 12, 16, 20)
FIELD_TRIPLES = 1000


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "details": self.details}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


class _Failure(Exception):
    def __init__(self, **data):
        super().__init__(data)
        self.data = data


def _fail(**data):
    raise _Failure(**{k: str(v) if isinstance(v, Cyclotomic) else v for k, v in data.items()})


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


# -- shared fixtures ------------------------------------------------------------


def all_builtins():
    return [builtin_category(n) for n in builtin_names()]


def modular_builtins():
    return [d for d in all_builtins() if is_modular(d)]


def admissible_algebras(category):
    """The group algebra of every subgroup that admits one."""
    out = []
    for H in invertible_subgroups(category):
        try:
            out.append(group_algebra(category, H))
        except AnsulatorError:
            continue
    return out


def shipped_algebras(category):
    return [TrivialFrobenius(category), *admissible_algebras(category)]


_RANDOM_SHAPES = ((2,), (3,), (4,), (5,), (6,), (8,), (2, 2), (2, 4), (3, 3), (4, 4), (2, 2, 2))


def random_pointed_category(rng: random.Random):
    orders = rng.choice(_RANDOM_SHAPES)
    diag = []
    for n in orders:
        choices = [p for p in range(2 * n) if (p * n) % 2 == 0]
        diag.append(rng.choice(choices))
    cross = [rng.randrange(math.gcd(orders[i], orders[j])) for i in range(len(orders)) for j in range(i + 1, len(orders))]
    spec = "pointed:" + ",".join(map(str, orders)) + ":" + ",".join(map(str, diag))
    if cross:
        spec += ":" + ",".join(map(str, cross))
    return builtin_category(spec)


def _random_unit(rng: random.Random) -> Cyclotomic:
    value = Fraction(rng.choice((-1, 1)) * rng.randint(1, 5), rng.randint(1, 5))
    return Cyclotomic.rational(value) * zeta(8, rng.randrange(8))


def random_valid_algebra(rng: random.Random, category=None):
    """A gauge-transformed group algebra over a random admissible subgroup."""
    while True:
        cat = category or random_pointed_category(rng)
        algebras = admissible_algebras(cat)
        nontrivial = [F for F in algebras if F.order > 1]
        F = rng.choice(nontrivial or algebras)
        return gauge_transform(F, {a: _random_unit(rng) for a in F.support})


def perturb(F, rng: random.Random):
    """Multiply one structure scalar by a factor different from 1."""
    factor = _random_unit(rng)
    while factor == 1:
        factor = _random_unit(rng)
    choice = rng.randrange(2 * F.order ** 2 + 2)
    keys = sorted(F.mu)
    if choice < len(keys):
        k = keys[choice]
        return F.with_scalar("mu", k, F.mu[k] * factor), ("mu", k)
    choice -= len(keys)
    if choice < len(keys):
        k = keys[choice]
        return F.with_scalar("delta", k, F.delta[k] * factor), ("delta", k)
    if choice == len(keys):
        return F.with_scalar("eta", value=F.eta * factor), ("eta",)
    return F.with_scalar("eps", value=F.eps * factor), ("eps",)


# -- the checks -------------------------------------------------------------------


def check_s3_anchor(seed):
    values = {}
    for d in modular_builtins():
        v = invariant(d, TrivialFrobenius(d), s3()).value
        if v != d.total_dim.inv():
            _fail(category=d.name, value=v, expected=d.total_dim.inv())
        values[d.name] = str(v)
    fib = builtin_category("fibonacci")
    golden = fib.qdim[1]
    if fib.total_dim ** 2 != 2 + golden:
        _fail(category="fibonacci", reason="D^2 != 2 + phi")
    for name in ("ising", "toric"):
        if values[name] != "1/2":
            _fail(category=name, value=values[name], expected="1/2")
    return {"categories": len(values)}


def check_s1xs2_anchor(seed):
    count = 0
    for d in all_builtins():
        for F in shipped_algebras(d):
            v = invariant(d, F, s1xs2()).value
            if v != 1:
                _fail(category=d.name, support=_support(F), value=v)
            count += 1
    return {"pairs": count}


def check_sl2z_relations(seed):
    for d in modular_builtins():
        if not check_mcg_relations(d):
            _fail(category=d.name)
    return {"categories": len(modular_builtins())}


def lens_kappa_table():
    """(category, p, q) -> measured n with heegaard = oracle * kappa^n."""
    table = {}
    for d in modular_builtins():
        F = TrivialFrobenius(d)
        kappa = d.sdata.anomaly
        for p in range(1, LENS_MAX_P + 1):
            for q in range(0 if p == 1 else 1, p):
                if math.gcd(p, q) != 1:
                    continue
                pres = lens_presentation(p, q)
                m = len(pres.framings)
                h = invariant(d, F, pres).value
                o = plumbing_invariant(d, ChainSurgery(pres.framings))
                n = kappa_power(h, o, kappa, m + 2)
                if n is None:
                    _fail(category=d.name, p=p, q=q, heegaard=h, oracle=o)
                table[d.name, p, q] = n
    return table


def check_lens_oracle(seed):
    t1 = lens_kappa_table()
    t2 = lens_kappa_table()
    if t1 != t2:
        _fail(reason="kappa powers differ between reruns")
    return {"cases": len(t1), "max_abs_n": max(abs(n) for n in t1.values())}


def gauss_categories():
    return [d for d in modular_builtins()
            if d.pointed is not None and len(d.pointed.elements) == d.rank and d.rank <= GAUSS_MAX_ORDER]


def check_gauss_sum(seed):
    cases = 0
    for d in gauss_categories():
        kappa = d.sdata.anomaly
        for p in range(-GAUSS_MAX_P, GAUSS_MAX_P + 1):
            lhs = plumbing_invariant(d, ChainSurgery((p,)))
            sign = (p > 0) - (p < 0)
            rhs = gauss_sum_lens(d, p) * (kappa ** -sign if sign else 1)
            if lhs != rhs:
                _fail(category=d.name, p=p, plumbing=lhs, gauss=rhs)
            cases += 1
    return {"categories": len(gauss_categories()), "cases": cases}


def check_frobenius_verifier(seed, extra=()):
    rng = _rng(seed, "frobenius-verifier")
    count = 0
    for d in all_builtins():
        for F in admissible_algebras(d):
            problems = verify_frobenius(F)
            if problems:
                _fail(category=d.name, support=_support(F), violations=[str(v) for v in problems])
            count += 1
    for i, F in enumerate(extra):
        problems = verify_frobenius(F)
        if problems:
            _fail(source=f"extra algebra {i}", category=F.category.name,
                  violations=[str(v) for v in problems[:5]])
    for trial in range(100):
        F = random_valid_algebra(rng)
        if verify_frobenius(F):
            _fail(trial=trial, reason="unperturbed random algebra fails verification")
        G, where = perturb(F, rng)
        if not verify_frobenius(G):
            _fail(trial=trial, category=F.category.name, perturbed=list(map(str, where)))
    return {"group_algebras": count, "extra": len(extra), "perturbations": 100}


def check_renormalize(seed):
    rng = _rng(seed, "renormalize-special")
    for trial in range(20):
        F = random_valid_algebra(rng, builtin_category(rng.choice(["toric", "dz3", "dz4", "z8", "z9"])))
        # an unnormalized version: delta scaled by 1/c (so lambda' = 1/c), counit adjusted
        c = _random_unit(rng)
        G = replace(F, delta={k: v / c for k, v in F.delta.items()}, eps=F.eps * c,
                    lam=F.eps * c * F.eta, lam_prime=c.inv())
        if verify_frobenius(G):
            _fail(trial=trial, reason="rescaled algebra should verify")
        R = renormalize_special(G)
        if verify_frobenius(R) or R.lam_prime != 1 or set(mu_delta_components(R).values()) != {1}:
            _fail(trial=trial, reason="renormalized algebra is not special with mu delta = id")
        if renormalize_special(R) is not R:
            _fail(trial=trial, reason="renormalize_special is not idempotent")
        if xi_handlebody(R) != xi_handlebody(F):
            _fail(trial=trial, reason="handlebody vector depends on the normalization")
    return {"trials": 20}


def check_xi_cross(seed):
    rng = _rng(seed, "xi-cross-check")
    count = 0
    for d in all_builtins():
        for F in shipped_algebras(d):
            if xi_handlebody(F) != brute_force_xi(F):
                _fail(category=d.name, support=_support(F))
            count += 1
    toric = builtin_category("toric")
    want = TorusVector.basis(toric, "1") + TorusVector.basis(toric, "e")
    if xi_handlebody(group_algebra(toric, ["e"])) != want:
        _fail(reason="toric k[{0,e}] does not give e_0 + e_e")
    for trial in range(50):
        F = random_valid_algebra(rng)
        if xi_handlebody(F) != brute_force_xi(F):
            _fail(trial=trial, category=F.category.name, support=_support(F))
    return {"shipped": count, "random": 50}


def check_handlebody_invariance(seed):
    T = MCGWord(("T",))
    for d in modular_builtins():
        for F in shipped_algebras(d):
            xi = xi_handlebody(F)
            if apply_word(d, T, xi) != xi:
                _fail(category=d.name, support=_support(F))
    return {"categories": len(modular_builtins())}


def check_double_coset(seed):
    rng = _rng(seed, "double-coset-invariance")
    cases = 0
    for d in modular_builtins():
        algebras = shipped_algebras(d)
        for _ in range(100):
            w = random_word(rng, 12)
            m, n = rng.randint(-5, 5), rng.randint(-5, 5)
            F = rng.choice(algebras)
            v = build_v_M_F(d, F, HeegaardPresentation(w))
            before = numeric_invariant(v).value
            after = numeric_invariant(double_coset_transform(v, m, n)).value
            if before != after:
                _fail(category=d.name, word=str(w), m=m, n=n, support=_support(F), before=before, after=after)
            cases += 1
    return {"cases": cases}


_RELATORS = (
    ("insert", ("S", "S", "S", "S")),
    ("insert", ("T", "Ti")),
    ("insert", ("Ti", "T")),
    ("insert", ("S", "T", "S", "T", "S", "T", "S", "S")),
    ("replace", ("S", "S"), ("S", "T", "S", "T", "S", "T")),
)


def related_word(w: MCGWord, rng: random.Random) -> MCGWord:
    letters = list(w.letters)
    for _ in range(rng.randint(1, 3)):
        move = rng.choice(_RELATORS)
        if move[0] == "replace":
            spots = [i for i in range(len(letters) - 1) if tuple(letters[i:i + 2]) == move[1]]
            if spots:
                i = rng.choice(spots)
                letters[i:i + 2] = move[2]
                continue
            move = _RELATORS[0]
        i = rng.randint(0, len(letters))
        letters[i:i] = move[1]
    return MCGWord(tuple(letters))


def check_isotopy(seed):
    rng = _rng(seed, "isotopy-invariance")
    cats = sorted(modular_builtins(), key=lambda d: d.rank)
    small = [d for d in cats if d.rank <= 4]
    for trial in range(50):
        d = cats[trial % len(cats)] if trial < len(cats) else rng.choice(small)
        w1 = random_word(rng, 8)
        w2 = related_word(w1, rng)
        if w1.matrix != w2.matrix:
            _fail(trial=trial, reason="relator changed the SL(2,Z) matrix", w1=str(w1), w2=str(w2))
        n = projective_exponent(w2, w1, d)
        if n is None:
            _fail(trial=trial, category=d.name, w1=str(w1), w2=str(w2))
        kappa = d.sdata.anomaly
        factor = kappa ** n if n >= 0 else kappa.inv() ** -n
        for F in shipped_algebras(d):
            v1 = invariant(d, F, HeegaardPresentation(w1)).value
            v2 = invariant(d, F, HeegaardPresentation(w2)).value
            if v2 != v1 * factor:
                _fail(trial=trial, category=d.name, w1=str(w1), w2=str(w2), n=n)
    return {"pairs": 50}


def toric_lens_brute(p: int) -> Fraction:
    """<e_0, S T^p S xi> for toric code and F = k[{0,e}] with plain rational 4x4 matrices."""
    coords = [(0, 0), (1, 0), (0, 1), (1, 1)]  # 1, e, m, f
    S = [[Fraction((-1) ** (a[0] * b[1] + a[1] * b[0]), 2) for b in coords] for a in coords]
    T = [[Fraction((-1) ** (a[0] * a[1])) if a == b else Fraction(0) for b in coords] for a in coords]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(4)) for j in range(4)] for i in range(4)]

    M = S
    for _ in range(p):
        M = mul(M, T)
    M = mul(M, S)
    xi = [Fraction(1), Fraction(1), Fraction(0), Fraction(0)]
    return sum(M[0][j] * xi[j] for j in range(4))


def check_toric_lens(seed):
    toric = builtin_category("toric")
    F = group_algebra(toric, ["e"])
    for p in (1, 2, 3):
        pipeline = invariant(toric, F, lens_presentation(p, 1)).value
        brute = toric_lens_brute(p)
        if pipeline != 1 or brute != 1:
            _fail(p=p, pipeline=pipeline, brute=str(brute))
    return {"values": {str(p): "1" for p in (1, 2, 3)}}


def check_presentation_independence(seed):
    cases = 0
    for name in ("fibonacci", "ising", "semion", "toric", "su2_2", "su2_3", "z5"):
        d = builtin_category(name)
        for F in shipped_algebras(d):
            for p in range(2, LENS_MAX_P + 1):
                for q in range(1, p):
                    if math.gcd(p, q) != 1:
                        continue
                    a, b = lens_presentation(p, q, "hj"), lens_presentation(p, q, "nearest")
                    va, vb = invariant(d, F, a).value, invariant(d, F, b).value
                    if kappa_power(va, vb, d.sdata.anomaly, len(a.word) + len(b.word)) is None:
                        _fail(category=name, p=p, q=q, hj=va, nearest=vb)
                    cases += 1
    return {"cases": cases}


def _random_element(rng: random.Random, order: int) -> Cyclotomic:
    return Cyclotomic(order, [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(order)])


def check_exact_arithmetic(seed):
    rng = _rng(seed, "exact-arithmetic")
    worst = 0.0
    for N in FIELD_ORDERS:
        for trial in range(FIELD_TRIPLES):
            x, y, z = (_random_element(rng, N) for _ in range(3))
            if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
                _fail(order=N, trial=trial, law="associativity", x=x, y=y, z=z)
            if x + y != y + x or x * y != y * x:
                _fail(order=N, trial=trial, law="commutativity", x=x, y=y)
            if x * (y + z) != x * y + x * z:
                _fail(order=N, trial=trial, law="distributivity", x=x, y=y, z=z)
            if x and x * x.inv() != 1:
                _fail(order=N, trial=trial, law="inverse", x=x)
            cx, cy = complex(x), complex(y)
            err = max(abs(complex(x * y) - cx * cy), abs(complex(x + y) - (cx + cy)))
            worst = max(worst, err)
            if err > 1e-10:
                _fail(order=N, trial=trial, law="embedding", x=x, y=y, error=err)
    return {"orders": list(FIELD_ORDERS), "triples_per_order": FIELD_TRIPLES}


def check_category_data(seed):
    for d in all_builtins():
        problems = validate_fusion_data(d)
        if problems:
            _fail(category=d.name, violations=[str(v) for v in problems])
        if category_from_json(category_to_json(d)) != d:
            _fail(category=d.name, reason="JSON round trip changed the data")
        if is_modular(d) and not verlinde_consistency(d):
            _fail(category=d.name, reason="Verlinde formula fails")
    return {"categories": len(builtin_names())}


def _support(F) -> list[str]:
    return [F.category.labels[a] for a in F.support]


CHECKS: dict[str, Callable] = {
    "exact-arithmetic": check_exact_arithmetic,
    "category-data": check_category_data,
    "s3-anchor": check_s3_anchor,
    "s1xs2-anchor": check_s1xs2_anchor,
    "sl2z-relations": check_sl2z_relations,
    "lens-oracle-agreement": check_lens_oracle,
    "gauss-sum-oracle": check_gauss_sum,
    "frobenius-verifier": check_frobenius_verifier,
    "renormalize-special": check_renormalize,
    "xi-cross-check": check_xi_cross,
    "handlebody-invariance": check_handlebody_invariance,
    "double-coset-invariance": check_double_coset,
    "isotopy-invariance": check_isotopy,
    "toric-lens-values": check_toric_lens,
    "presentation-independence": check_presentation_independence,
}


def run_check(name: str, seed: int = DEFAULT_SEED, **kwargs) -> CheckResult:
    try:
        details = CHECKS[name](seed, **kwargs)
    except _Failure as exc:
        return CheckResult(name, False, counterexample=exc.data)
    except AnsulatorError as exc:
        return CheckResult(name, False, counterexample={"error": type(exc).__name__, "message": str(exc)})
    return CheckResult(name, True, details=details)


def run_selftest(seed: int = DEFAULT_SEED, extra_algebras=(), only=None) -> list[CheckResult]:
    results = []
    for name in CHECKS:
        if only and name not in only:
            continue
        kwargs = {"extra": tuple(extra_algebras)} if name == "frobenius-verifier" else {}
        results.append(run_check(name, seed, **kwargs))
    return results
