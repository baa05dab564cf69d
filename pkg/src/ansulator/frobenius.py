"""Special symmetric commutative Frobenius algebras supported on invertible simples.

An algebra F = sum_{a in H} X_a over a subgroup H of invertible labels is
described by one scalar per Hom component:

* ``mu[a, b]``    X_a (x) X_b -> X_ab
* ``delta[a, b]`` X_ab -> X_a (x) X_b
* ``eta``         I -> X_0
* ``eps``         X_0 -> I

Every axiom is then a scalar identity involving only the associator
omega and the braiding c of the pointed part.  Keys of ``mu``/``delta`` are
label indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Union

from ._schema import validate
from .category.data import FusionData, Violation
from .errors import CocycleObstruction, NotASubgroup, NotIsotropic, NotSpecial, SchemaError, ValidationError
from .exactnum import Cyclotomic

ONE = Cyclotomic.rational(1)


@dataclass(frozen=True, eq=False)
class TrivialFrobenius:
    """F = I with all structure maps identities."""

    category: FusionData

    @property
    def support(self) -> tuple[int, ...]:
        return (0,)

    @property
    def lam(self) -> Cyclotomic:
        return ONE

    @property
    def lam_prime(self) -> Cyclotomic:
        return ONE


@dataclass(frozen=True, eq=False)
class PointedFrobenius:
    category: FusionData
    support: tuple[int, ...]
    mu: dict
    eta: Cyclotomic
    delta: dict
    eps: Cyclotomic
    lam: Cyclotomic
    lam_prime: Cyclotomic

    @property
    def order(self) -> int:
        return len(self.support)

    def with_scalar(self, kind: str, key=None, value=None) -> "PointedFrobenius":
        """Copy with one structure scalar replaced (``kind`` in mu, delta, eta, eps)."""
        if kind in ("mu", "delta"):
            table = dict(getattr(self, kind))
            table[key] = value
            return replace(self, **{kind: table})
        return replace(self, **{kind: value})


Frobenius = Union[TrivialFrobenius, PointedFrobenius]


class _SupportGroup:
    """Group law, associator and braiding restricted to a set of labels."""

    def __init__(self, category: FusionData, support: Iterable[int]):
        self.labels = tuple(support)
        pd = category.pointed
        self.pointed = pd
        if pd is None:
            if self.labels != (0,):
                raise NotASubgroup(f"{category.name} has no pointed data; only the trivial subgroup exists")
            self.g = {0: 0}
        else:
            missing = [a for a in self.labels if a not in pd.element_of]
            if missing:
                raise NotASubgroup(f"labels {missing} are not invertible group elements")
            self.g = {a: pd.element_of[a] for a in self.labels}

    def mul(self, a: int, b: int) -> int:
        if self.pointed is None:
            return 0
        return self.pointed.elements[self.pointed.add_table[self.g[a], self.g[b]]]

    def inv(self, a: int) -> int:
        if self.pointed is None:
            return 0
        return self.pointed.elements[self.pointed.neg[self.g[a]]]

    def omega(self, a: int, b: int, c: int) -> Cyclotomic:
        if self.pointed is None:
            return ONE
        return self.pointed.omega_value(self.g[a], self.g[b], self.g[c])

    def braid(self, a: int, b: int) -> Cyclotomic:
        if self.pointed is None:
            return ONE
        return self.pointed.braiding_value(self.g[a], self.g[b])

    def closure_problems(self) -> list[str]:
        s = set(self.labels)
        out = []
        if not self.labels or self.labels[0] != 0:
            out.append("support must start with the unit label 0")
        for a in self.labels:
            if self.inv(a) not in s:
                out.append(f"inverse of {a} missing")
            for b in self.labels:
                if self.mul(a, b) not in s:
                    out.append(f"product of {a} and {b} missing")
        return out


def _resolve_labels(category: FusionData, labels) -> tuple[int, ...]:
    idx = [category.label_index(x) for x in labels]
    if 0 not in idx:
        idx.insert(0, 0)
    rest = sorted(set(idx) - {0})
    return (0, *rest)


def group_algebra(category: FusionData, H) -> PointedFrobenius:
    """The group algebra k[H] normalized so that mu delta = id_F."""
    support = _resolve_labels(category, H)
    grp = _SupportGroup(category, support)
    problems = grp.closure_problems()
    if problems:
        raise NotASubgroup("; ".join(problems))
    for a in support:
        if category.twist[a] != 1:
            raise NotIsotropic(f"theta_{category.labels[a]} = {category.twist[a]} is not 1")
    for a in support:
        for b in support:
            if grp.braid(a, b) != 1:
                raise CocycleObstruction(
                    f"braiding c({category.labels[a]},{category.labels[b]}) is nontrivial on the support; "
                    "a twisted group algebra would be required"
                )
            for c in support:
                if grp.omega(a, b, c) != 1:
                    raise CocycleObstruction("the associator is not identically 1 on the support")
    n = len(support)
    pairs = [(a, b) for a in support for b in support]
    return PointedFrobenius(
        category=category,
        support=support,
        mu={p: ONE for p in pairs},
        eta=ONE,
        delta={p: Cyclotomic.rational(Fraction(1, n)) for p in pairs},
        eps=Cyclotomic.rational(n),
        lam=Cyclotomic.rational(n),
        lam_prime=ONE,
    )


def mu_delta_components(F: PointedFrobenius) -> dict[int, Cyclotomic]:
    """The scalar by which mu o delta acts on each summand X_c."""
    grp = _SupportGroup(F.category, F.support)
    out = {c: Cyclotomic.rational(0) for c in F.support}
    for a in F.support:
        for b in F.support:
            c = grp.mul(a, b)
            out[c] = out[c] + F.mu[a, b] * F.delta[a, b]
    return out


def verify_frobenius(F: Frobenius) -> list[Violation]:
    """Every violated axiom as a report entry; empty iff F is special symmetric commutative."""
    if isinstance(F, TrivialFrobenius):
        return []
    out: list[Violation] = []
    cat = F.category
    try:
        grp = _SupportGroup(cat, F.support)
    except NotASubgroup as exc:
        return [Violation("support-subgroup", tuple(F.support), str(exc))]
    for problem in grp.closure_problems():
        out.append(Violation("support-subgroup", (), problem))
    if out:
        return out
    H = F.support
    pairs = [(a, b) for a in H for b in H]
    for name in ("mu", "delta"):
        table = getattr(F, name)
        if set(table) != set(pairs):
            out.append(Violation("structure-table", (name,), "needs exactly one entry per pair in the support"))
    if out:
        return out
    m, dl, e, eps, mul, om, br = F.mu, F.delta, F.eta, F.eps, grp.mul, grp.omega, grp.braid

    for a in H:
        if e * m[0, a] != 1 or e * m[a, 0] != 1:
            out.append(Violation("unit", (a,), "mu(eta (x) id) = id = mu(id (x) eta) fails"))
        if eps * dl[0, a] != 1 or eps * dl[a, 0] != 1:
            out.append(Violation("counit", (a,), "(eps (x) id) delta = id = (id (x) eps) delta fails"))
    for a in H:
        for b in H:
            ab = mul(a, b)
            if m[b, a] * br(a, b) != m[a, b]:
                out.append(Violation("commutativity", (a, b), "mu o c_{F,F} != mu"))
            if dl[a, b] * br(a, b) != dl[b, a]:
                out.append(Violation("cocommutativity", (a, b), "c_{F,F} o delta != delta"))
            for c in H:
                w = om(a, b, c)
                bc = mul(b, c)
                if m[a, b] * m[ab, c] != w * m[b, c] * m[a, bc]:
                    out.append(Violation("associativity", (a, b, c), "mu(mu (x) id) != mu(id (x) mu) alpha"))
                if w * dl[a, b] * dl[ab, c] != dl[b, c] * dl[a, bc]:
                    out.append(Violation("coassociativity", (a, b, c), "alpha(delta (x) id)delta != (id (x) delta)delta"))
                # (id (x) mu) alpha (delta (x) id) = delta mu on X_{ab} (x) X_c -> X_a (x) X_{bc}
                if dl[a, b] * w * m[b, c] != m[ab, c] * dl[a, bc]:
                    out.append(Violation("frobenius-left", (a, b, c), "(id (x) mu)(delta (x) id) != delta mu"))
                # (mu (x) id) alpha^-1 (id (x) delta) = delta mu on X_a (x) X_{bc} -> X_{ab} (x) X_c
                if m[a, b] * dl[b, c] != w * m[a, bc] * dl[ab, c]:
                    out.append(Violation("frobenius-right", (a, b, c), "(mu (x) id)(id (x) delta) != delta mu"))
    for a in H:
        if cat.twist[a] != 1:
            out.append(Violation("twist-trivial", (a,), f"theta = {cat.twist[a]} on the support"))
        ai = grp.inv(a)
        pairing = eps * m[a, ai]
        if not pairing:
            out.append(Violation("pairing-nondegenerate", (a,), "eps o mu vanishes on X_a (x) X_a*"))
        elif eps * m[ai, a] * br(a, ai) != pairing:
            out.append(Violation("pairing-symmetric", (a,), "eps o mu o c != eps o mu"))
    lam = eps * e
    if not lam:
        out.append(Violation("special-unit", (), "eps eta = 0"))
    elif lam != F.lam:
        out.append(Violation("special-unit", (), f"stored lambda {F.lam} but eps eta = {lam}"))
    comps = mu_delta_components(F)
    values = list(comps.values())
    if any(v != values[0] for v in values):
        out.append(Violation("special-product", (), "mu delta is not a multiple of id_F"))
    elif not values[0]:
        out.append(Violation("special-product", (), "mu delta = 0"))
    elif values[0] != F.lam_prime:
        out.append(Violation("special-product", (), f"stored lambda' {F.lam_prime} but mu delta = {values[0]}"))
    return out


def renormalize_special(F: Frobenius) -> Frobenius:
    """Rescale delta by 1/lambda' and eps by lambda' so that mu delta = id_F."""
    if isinstance(F, TrivialFrobenius):
        return F
    comps = list(mu_delta_components(F).values())
    lp = comps[0]
    if not lp or any(v != lp for v in comps):
        raise NotSpecial("mu delta is not a nonzero multiple of the identity")
    if lp == 1:
        return F
    inv = lp.inv()
    eps = F.eps * lp
    return replace(F, delta={k: v * inv for k, v in F.delta.items()}, eps=eps, lam=eps * F.eta, lam_prime=ONE)


def gauge_transform(F: PointedFrobenius, factors: dict[int, Cyclotomic]) -> PointedFrobenius:
    """Rescale the inclusion of each summand X_a by ``factors[a]`` (an isomorphic algebra)."""
    f = {a: factors.get(a, ONE) for a in F.support}
    grp = _SupportGroup(F.category, F.support)
    mu, delta = {}, {}
    for (a, b), v in F.mu.items():
        ratio = f[a] * f[b] / f[grp.mul(a, b)]
        mu[a, b] = v * ratio
        delta[a, b] = F.delta[a, b] / ratio
    return replace(F, mu=mu, delta=delta, eta=F.eta / f[0], eps=F.eps * f[0])


# -- files --------------------------------------------------------------------


def frobenius_to_json(F: PointedFrobenius) -> dict:
    names = F.category.labels

    def table(t):
        return [[names[a], names[b], v.to_json()] for (a, b), v in sorted(t.items())]

    return {
        "category": F.category.name,
        "support": [names[a] for a in F.support],
        "mu": table(F.mu),
        "eta": F.eta.to_json(),
        "delta": table(F.delta),
        "eps": F.eps.to_json(),
        "lambda": F.lam.to_json(),
        "lambda_prime": F.lam_prime.to_json(),
    }


def save_frobenius(F: PointedFrobenius, path) -> None:
    Path(path).write_text(json.dumps(frobenius_to_json(F), indent=1) + "\n")


def frobenius_from_json(obj, resolve: Callable[[str], FusionData], *, allow_invalid: bool = False) -> PointedFrobenius:
    validate(obj, "frobenius")
    cat = resolve(obj["category"])

    def label(name, pointer):
        if name not in cat.labels:
            raise SchemaError(pointer, f"unknown label {name!r}")
        return cat.labels.index(name)

    support = tuple(label(x, f"/support/{i}") for i, x in enumerate(obj["support"]))
    tables = {}
    for key in ("mu", "delta"):
        tables[key] = {
            (label(a, f"/{key}/{i}/0"), label(b, f"/{key}/{i}/1")): Cyclotomic.from_json(v)
            for i, (a, b, v) in enumerate(obj[key])
        }
    eta, eps = Cyclotomic.from_json(obj["eta"]), Cyclotomic.from_json(obj["eps"])
    F = PointedFrobenius(
        category=cat, support=support, mu=tables["mu"], eta=eta, delta=tables["delta"], eps=eps,
        lam=Cyclotomic.from_json(obj["lambda"]) if "lambda" in obj else eps * eta,
        lam_prime=Cyclotomic.from_json(obj["lambda_prime"]) if "lambda_prime" in obj else ONE,
    )
    if not allow_invalid:
        problems = verify_frobenius(F)
        if problems:
            raise ValidationError(problems)
    return F


def load_frobenius(path, resolve: Callable[[str], FusionData], *, allow_invalid: bool = False) -> PointedFrobenius:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    return frobenius_from_json(obj, resolve, allow_invalid=allow_invalid)


def invertible_subgroups(category: FusionData) -> list[tuple[int, ...]]:
    """Every subgroup of the invertible labels, as sorted label tuples starting at 0."""
    pd = category.pointed
    if pd is None:
        return [(0,)]
    add = pd.add_table
    n = pd.size

    def closure(gens: frozenset) -> frozenset:
        group = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = int(add[x, g])
                if y not in group:
                    group.add(y)
                    frontier.append(y)
        return frozenset(group)

    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        H = frontier.pop()
        for g in range(n):
            if g not in H:
                K = closure(H | {g})
                if K not in found:
                    found.add(K)
                    frontier.append(K)
    return sorted(tuple(sorted(pd.elements[g] for g in H)) for H in found)
