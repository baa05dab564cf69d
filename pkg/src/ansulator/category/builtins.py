"""Built-in example categories: Fibonacci, Ising, SU(2)_k and pointed families."""

from __future__ import annotations

import math
import re
from dataclasses import replace

import numpy as np

from ..errors import InconsistentPointedData, UnsupportedSpec
from ..exactnum import Cyclotomic, sqrt_of_integer, zeta
from .data import FusionData, compute_smatrix, harmonize, validate_fusion_data
from .pointed import MAX_GROUP_ORDER, PointedData, abelian_cocycle, element_coords, params_from_twists

MAX_SU2_LEVEL = 8


def _finish(name, labels, dual, fusion, twist, qdim, total_dim, pointed=None) -> FusionData:
    order = math.lcm(*(x.order for x in (*twist, *qdim, total_dim)))
    d = FusionData(
        name=name,
        labels=tuple(labels),
        dual=tuple(dual),
        fusion=fusion,
        twist=harmonize(twist, order),
        qdim=harmonize(qdim, order),
        total_dim=total_dim.promote(order),
        pointed=pointed,
    )
    return replace(d, smatrix=compute_smatrix(d))


def _z2_part(elements, diag) -> PointedData:
    M, omega, braid = abelian_cocycle((2,), (diag,))
    return PointedData(orders=(2,), elements=tuple(elements), root_order=M, omega=omega, braiding=braid)


def fibonacci() -> FusionData:
    fusion = np.zeros((2, 2, 2), dtype=np.int64)
    fusion[0, 0, 0] = fusion[0, 1, 1] = fusion[1, 0, 1] = 1
    fusion[1, 1, 0] = fusion[1, 1, 1] = 1
    golden = -zeta(5, 2) - zeta(5, 3)
    return _finish(
        "fibonacci", ["1", "tau"], [0, 1], fusion,
        twist=[Cyclotomic.rational(1), zeta(5, 2)],
        qdim=[Cyclotomic.rational(1), golden],
        total_dim=zeta(20) + zeta(20, 19),  # 2 cos(pi/10)
    )


def ising() -> FusionData:
    fusion = np.zeros((3, 3, 3), dtype=np.int64)
    one, sigma, psi = 0, 1, 2
    for a in range(3):
        fusion[one, a, a] = fusion[a, one, a] = 1
    fusion[sigma, sigma, one] = fusion[sigma, sigma, psi] = 1
    fusion[sigma, psi, sigma] = fusion[psi, sigma, sigma] = 1
    fusion[psi, psi, one] = 1
    root2 = zeta(8) + zeta(8, 7)
    return _finish(
        "ising", ["1", "sigma", "psi"], [0, 1, 2], fusion,
        twist=[Cyclotomic.rational(1), zeta(16), Cyclotomic.rational(-1)],
        qdim=[Cyclotomic.rational(1), root2, Cyclotomic.rational(1)],
        total_dim=Cyclotomic.rational(2),
        pointed=_z2_part([one, psi], 2),
    )


def su2_level(k: int) -> FusionData:
    """SU(2) at level k; label j is twice the spin."""
    if not isinstance(k, int) or not 1 <= k <= MAX_SU2_LEVEL:
        raise UnsupportedSpec(f"su2 level must be in 1..{MAX_SU2_LEVEL}, got {k!r}")
    n = k + 2
    q = zeta(2 * n)
    qinv = q.inv()
    denom_inv = (q - qinv).inv()
    qdim = [(q ** (j + 1) - qinv ** (j + 1)) * denom_inv for j in range(k + 1)]
    twist = [zeta(4 * n, j * (j + 2)) for j in range(k + 1)]
    fusion = np.zeros((k + 1,) * 3, dtype=np.int64)
    for a in range(k + 1):
        for b in range(k + 1):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                fusion[a, b, c] = 1
    # D = sqrt(n/2) / sin(pi/n) with sin(pi/n) = (q - q^-1) / 2i
    total_dim = sqrt_of_integer(2 * n) * zeta(4) * denom_inv
    return _finish(
        f"su2_{k}", [str(j) for j in range(k + 1)], list(range(k + 1)), fusion,
        twist=twist, qdim=qdim, total_dim=total_dim,
        pointed=_z2_part([0, k], k % 4),
    )


def pointed(orders, diag=None, cross=None, *, twists=None, names=None, name=None) -> FusionData:
    """Pointed braided category on a product of cyclic groups.

    Either give quadratic-form parameters (``diag``, ``cross``; see
    :func:`abelian_cocycle`) or explicit ``twists`` per group element, from
    which the parameters are recovered and then checked.
    """
    orders = tuple(int(n) for n in orders)
    size = math.prod(orders)
    if not orders or size > MAX_GROUP_ORDER or min(orders) < 1:
        raise UnsupportedSpec(f"pointed groups must have order between 1 and {MAX_GROUP_ORDER}")
    if twists is not None:
        twists = list(twists)
        derived = params_from_twists(orders, twists)
        if diag is not None and tuple(diag) != derived[0]:
            raise InconsistentPointedData("twists disagree with the given diagonal parameters")
        diag, cross = derived
    if diag is None:
        raise UnsupportedSpec("pointed categories need diag parameters or twists")
    M, omega, braid = abelian_cocycle(orders, diag, cross)
    coords = element_coords(orders)
    if names is None:
        names = [str(c[0]) if len(orders) == 1 else "_".join(map(str, c)) for c in coords]
    pd = PointedData(orders=orders, elements=tuple(range(size)), root_order=M, omega=omega, braiding=braid)
    theta = [pd.twist_value(g) for g in range(size)]
    if twists is not None and any(t != s for t, s in zip(theta, twists)):
        raise InconsistentPointedData("twists are not a quadratic form of the supported shape")
    add = pd.add_table
    fusion = np.zeros((size,) * 3, dtype=np.int64)
    for a in range(size):
        for b in range(size):
            fusion[a, b, add[a, b]] = 1
    label = name or "pointed:" + ",".join(map(str, orders)) + ":" + ",".join(map(str, diag)) + (
        ":" + ",".join(map(str, cross)) if cross else "")
    return _finish(
        label, names, [int(x) for x in pd.neg], fusion,
        twist=theta, qdim=[Cyclotomic.rational(1)] * size,
        total_dim=sqrt_of_integer(size), pointed=pd,
    )


def cyclic(n: int) -> FusionData:
    """Z_n with q(j) = zeta_{2n}^(j^2) (n even) or zeta_n^(j^2) (n odd); always modular."""
    return pointed((n,), (1 if n % 2 == 0 else 2,), name=f"z{n}")


_NAMED = {
    "fibonacci": fibonacci,
    "ising": ising,
    "semion": lambda: pointed((2,), (1,), names=["1", "s"], name="semion"),
    "toric": lambda: pointed((2, 2), (0, 0), (1,), names=["1", "e", "m", "f"], name="toric"),
    "double_semion": lambda: pointed((2, 2), (1, 3), names=["1", "s", "sbar", "b"], name="double_semion"),
    "three_fermion": lambda: pointed((2, 2), (2, 2), (1,), names=["1", "f1", "f2", "f3"], name="three_fermion"),
    "dz3": lambda: pointed((3, 3), (0, 0), (1,), name="dz3"),
    "dz4": lambda: pointed((4, 4), (0, 0), (1,), name="dz4"),
}
for _k in range(1, MAX_SU2_LEVEL + 1):
    _NAMED[f"su2_{_k}"] = (lambda k: lambda: su2_level(k))(_k)
for _n in range(2, 10):
    _NAMED[f"z{_n}"] = (lambda n: lambda: cyclic(n))(_n)

_CACHE: dict[str, FusionData] = {}


def builtin_names() -> list[str]:
    return list(_NAMED)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def builtin_category(spec: str) -> FusionData:
    """Resolve a builtin spec string.

    Accepted forms: a registered name (``fibonacci``, ``ising``, ``su2_3``,
    ``toric``, ``z5`` ...), ``su2:<k>``, ``z<n>`` for n <= 64, and
    ``pointed:<orders>:<diag>[:<cross>]`` with comma-separated integers.
    """
    spec = spec.strip()
    if spec in _CACHE:
        return _CACHE[spec]
    try:
        if spec in _NAMED:
            d = _NAMED[spec]()
        elif m := re.fullmatch(r"su2[:_](\d+)", spec):
            d = su2_level(int(m.group(1)))
        elif m := re.fullmatch(r"z(\d+)", spec):
            d = cyclic(int(m.group(1)))
        elif spec.startswith("pointed:"):
            parts = spec.split(":")[1:]
            if len(parts) not in (2, 3):
                raise UnsupportedSpec("pointed spec is pointed:<orders>:<diag>[:<cross>]")
            d = pointed(_ints(parts[0]), _ints(parts[1]), _ints(parts[2]) if len(parts) == 3 else None)
        else:
            raise UnsupportedSpec(f"unknown builtin category {spec!r}")
    except ValueError as exc:
        if isinstance(exc, (UnsupportedSpec, InconsistentPointedData)):
            raise
        raise UnsupportedSpec(str(exc)) from exc
    problems = validate_fusion_data(d)
    if problems:
        raise InconsistentPointedData("; ".join(map(str, problems)))
    _CACHE[spec] = d
    return d
