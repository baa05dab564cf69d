"""Pointed braided data: finite abelian groups with an abelian 3-cocycle.

Associator and braiding values are roots of unity and are stored as integer
exponents of ``zeta_M`` (``M = root_order``).  That keeps the cocycle and
hexagon checks in integer arithmetic, vectorized with numpy, which matters
for groups of order up to 64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from ..errors import InconsistentPointedData, MalformedData
from ..exactnum import Cyclotomic, root_of_unity_exponent

MAX_GROUP_ORDER = 64


def element_coords(orders: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Group elements in mixed-radix order, first coordinate varying fastest."""
    return [tuple(reversed(t)) for t in product(*(range(n) for n in reversed(orders)))]


@dataclass(frozen=True, eq=False)
class PointedData:
    orders: tuple[int, ...]
    elements: tuple[int, ...]  # label index of each group element
    root_order: int
    omega: np.ndarray  # (n, n, n) exponents of zeta_M
    braiding: np.ndarray  # (n, n) exponents of zeta_M
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = math.prod(self.orders)
        if len(self.elements) != n:
            raise MalformedData(f"pointed data lists {len(self.elements)} elements for a group of order {n}")
        if self.omega.shape != (n, n, n) or self.braiding.shape != (n, n):
            raise MalformedData("pointed omega/braiding tables have the wrong shape")
        for arr in (self.omega, self.braiding):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def coords(self) -> list[tuple[int, ...]]:
        return element_coords(self.orders)

    @cached_property
    def add_table(self) -> np.ndarray:
        index = {c: i for i, c in enumerate(self.coords)}
        n = self.size
        table = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(self.coords):
            for j, b in enumerate(self.coords):
                table[i, j] = index[tuple((x + y) % m for x, y, m in zip(a, b, self.orders))]
        table.setflags(write=False)
        return table

    @cached_property
    def neg(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1)

    @cached_property
    def element_of(self) -> dict[int, int]:
        return {lab: g for g, lab in enumerate(self.elements)}

    def _zeta(self, k: int) -> Cyclotomic:
        powers = self._cache.get("powers")
        if powers is None:
            powers = [Cyclotomic.zeta(self.root_order, j) for j in range(self.root_order)]
            self._cache["powers"] = powers
        return powers[int(k) % self.root_order]

    def omega_value(self, a: int, b: int, c: int) -> Cyclotomic:
        """omega on group elements (not label indices)."""
        return self._zeta(self.omega[a, b, c])

    def braiding_value(self, a: int, b: int) -> Cyclotomic:
        return self._zeta(self.braiding[a, b])

    def twist_value(self, a: int) -> Cyclotomic:
        return self._zeta(self.braiding[a, a])

    def same_as(self, other: "PointedData") -> bool:
        if self.orders != other.orders or self.elements != other.elements:
            return False
        m = math.lcm(self.root_order, other.root_order)
        fa, fb = m // self.root_order, m // other.root_order
        return bool(
            np.array_equal((self.omega * fa) % m, (other.omega * fb) % m)
            and np.array_equal((self.braiding * fa) % m, (other.braiding * fb) % m)
        )

    # -- consistency checks (return lists of offending element triples) -----

    def cocycle_failures(self, limit: int = 5) -> list[tuple[int, int, int, int]]:
        """Elements (a,b,c,d) violating d(omega) = 1."""
        W, A, M = self.omega, self.add_table, self.root_order
        bad = []
        for a in range(self.size):
            lhs = W + W[a][A] + W[a][:, :, None]
            rhs = W[A[a]] + W[a][:, A]
            hits = np.argwhere((lhs - rhs) % M != 0)
            bad.extend((a, *map(int, h)) for h in hits[: limit - len(bad)])
            if len(bad) >= limit:
                break
        return bad

    def hexagon_failures(self, limit: int = 5) -> list[tuple[str, int, int, int]]:
        W, C, A, M = self.omega, self.braiding, self.add_table, self.root_order
        ia, ib, ic = np.indices((self.size,) * 3)
        first = W[ib, ic, ia] + C[ia, A[ib, ic]] + W[ia, ib, ic] - C[ia, ic] - W[ib, ia, ic] - C[ia, ib]
        second = -W[ic, ia, ib] + C[A[ia, ib], ic] - W[ia, ib, ic] - C[ia, ic] + W[ia, ic, ib] - C[ib, ic]
        bad = []
        for tag, arr in (("hexagon-1", first), ("hexagon-2", second)):
            for h in np.argwhere(arr % M != 0)[:limit]:
                bad.append((tag, *map(int, h)))
        return bad[:limit]


def abelian_cocycle(orders, diag, cross=None) -> tuple[int, np.ndarray, np.ndarray]:
    """Explicit (omega, braiding) realizing a quadratic form on a product of cyclics.

    The form is q(x) = prod_i zeta_{2 n_i}^(diag_i x_i^2) * prod_{i<j}
    zeta_{gcd(n_i, n_j)}^(cross_ij x_i x_j); ``cross`` lists the i<j entries
    in lexicographic order.  Returns ``(M, omega, braiding)`` as exponent tables.
    """
    orders = tuple(int(n) for n in orders)
    diag = tuple(int(p) for p in diag)
    if len(diag) != len(orders):
        raise InconsistentPointedData("need one diagonal parameter per cyclic factor")
    pairs = [(i, j) for i in range(len(orders)) for j in range(i + 1, len(orders))]
    cross = tuple(int(r) for r in (cross or [0] * len(pairs)))
    if len(cross) != len(pairs):
        raise InconsistentPointedData(f"need {len(pairs)} cross parameters, got {len(cross)}")
    for n, p in zip(orders, diag):
        if n < 1:
            raise InconsistentPointedData("cyclic orders must be positive")
        if (n * p) % 2:
            raise InconsistentPointedData(
                f"zeta_{2 * n}^({p} x^2) is not well defined on Z_{n}: order times parameter must be even"
            )
    M = math.lcm(2, *(2 * n for n in orders), *(math.gcd(orders[i], orders[j]) for i, j in pairs))
    coords = np.array(element_coords(orders), dtype=np.int64).reshape(-1, len(orders))
    n_el = coords.shape[0]
    braid = np.zeros((n_el, n_el), dtype=np.int64)
    omega = np.zeros((n_el, n_el, n_el), dtype=np.int64)
    for i, (n, p) in enumerate(zip(orders, diag)):
        x = coords[:, i]
        braid += p * (M // (2 * n)) * np.outer(x, x)
        carry = (x[:, None] + x[None, :]) >= n
        omega += (M // 2) * p * x[:, None, None] * carry[None, :, :]
    for (i, j), r in zip(pairs, cross):
        g = math.gcd(orders[i], orders[j])
        braid += r * (M // g) * np.outer(coords[:, i], coords[:, j])
    return M, omega % M, braid % M


def params_from_twists(orders, twists) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (diag, cross) parameters from twist values on each group element."""
    orders = tuple(orders)
    coords = element_coords(orders)
    index = {c: k for k, c in enumerate(coords)}
    if len(twists) != len(coords):
        raise InconsistentPointedData("need one twist per group element")

    def unit(i):
        return tuple(1 if k == i else 0 for k in range(len(orders)))

    diag = []
    for i, n in enumerate(orders):
        k = root_of_unity_exponent(twists[index[unit(i)]], 2 * n)
        if k is None:
            raise InconsistentPointedData(f"twist of generator {i} is not a {2 * n}-th root of unity")
        diag.append(k)
    cross = []
    for i in range(len(orders)):
        for j in range(i + 1, len(orders)):
            g = math.gcd(orders[i], orders[j])
            both = tuple(1 if k in (i, j) else 0 for k in range(len(orders)))
            ratio = twists[index[both]] / (twists[index[unit(i)]] * twists[index[unit(j)]])
            k = root_of_unity_exponent(ratio, g)
            if k is None:
                raise InconsistentPointedData(f"twists of generators {i},{j} are not compatible with Z_{g}")
            cross.append(k)
    return tuple(diag), tuple(cross)
