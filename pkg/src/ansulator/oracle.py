"""Independent reference computations: chain surgery, Gauss sums, literal spine contraction.

Nothing here goes through the SL(2,Z) matrices or the handlebody-vector code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .category.data import FusionData, is_modular
from .errors import BadParameters, NotModular, NotPointed, NotVerified
from .exactnum import Cyclotomic

ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)


def inertia(matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix, by congruence."""
    B = [[Fraction(x) for x in row] for row in matrix]
    n = len(B)
    live = list(range(n))
    pos = neg = 0
    while live:
        piv = next((i for i in live if B[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in live for j in live if i != j and B[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/column i += row/column j makes B[i][i] = 2 B[i][j]
            for k in range(n):
                B[i][k] += B[j][k]
            for k in range(n):
                B[k][i] += B[k][j]
            piv = i
        p = B[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        live.remove(piv)
        for i in live:
            f = B[i][piv] / p
            if f:
                for k in live:
                    B[i][k] -= f * B[piv][k]
            B[i][piv] = Fraction(0)
        for k in live:
            B[piv][k] = Fraction(0)
    return pos, neg, n - pos - neg


@dataclass(frozen=True)
class ChainSurgery:
    """Surgery on a chain of unknots with framings a_1..a_m, neighbours Hopf-linked."""

    framings: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "framings", tuple(int(a) for a in self.framings))

    @property
    def linking_matrix(self) -> list[list[int]]:
        m = len(self.framings)
        return [[self.framings[i] if i == j else (1 if abs(i - j) == 1 else 0) for j in range(m)] for i in range(m)]

    @property
    def signature_data(self) -> tuple[int, int, int]:
        return inertia(self.linking_matrix)

    @property
    def signature(self) -> int:
        p, n, _ = self.signature_data
        return p - n


def _require_modular(category: FusionData) -> None:
    if not is_modular(category):
        raise NotModular(f"{category.name} is not modular")


def _power(x: Cyclotomic, n: int) -> Cyclotomic:
    return x ** n if n >= 0 else x.inv() ** -n


def _chain_weights(category: FusionData, framings):
    d, theta = category.qdim, category.twist
    dinv = [q.inv() for q in d]
    s = category.sdata.stilde
    L = category.rank
    vertex = [[_power(theta[c], a) * d[c] * d[c] for c in range(L)] for a in framings]
    edge = [[s[b][c] * dinv[b] * dinv[c] for c in range(L)] for b in range(L)]
    return vertex, edge


def _normalization(category: FusionData, c: ChainSurgery) -> Cyclotomic:
    kappa = category.sdata.anomaly
    m = len(c.framings)
    return _power(kappa, -c.signature) * _power(category.total_dim, -(m + 1))


def plumbing_invariant(category: FusionData, c: ChainSurgery) -> Cyclotomic:
    """kappa^-sigma D^(-m-1) sum over colourings, contracted along the chain."""
    _require_modular(category)
    if not c.framings:
        return category.total_dim.inv()
    vertex, edge = _chain_weights(category, c.framings)
    L = category.rank
    acc = vertex[0]
    for w in vertex[1:]:
        acc = [sum((acc[b] * edge[b][x] for b in range(L)), ZERO) * w[x] for x in range(L)]
    return _normalization(category, c) * sum(acc, ZERO)


def plumbing_invariant_enumerated(category: FusionData, c: ChainSurgery) -> Cyclotomic:
    """The same sum by explicit enumeration of all colourings (small chains only)."""
    _require_modular(category)
    vertex, edge = _chain_weights(category, c.framings)
    total = ZERO
    for colours in itertools.product(range(category.rank), repeat=len(c.framings)):
        term = ONE
        for i, x in enumerate(colours):
            term = term * vertex[i][x]
            if i:
                term = term * edge[colours[i - 1]][x]
        total = total + term
    return _normalization(category, c) * total


def gauss_sum_lens(category: FusionData, p: int) -> Cyclotomic:
    """D^-2 sum_{g in A} theta_g^p, enumerating the group and its quadratic form."""
    pd = category.pointed
    if pd is None or len(pd.elements) != category.rank:
        raise NotPointed(f"{category.name} is not pointed")
    _require_modular(category)
    total = sum((_power(pd.twist_value(g), p) for g in range(pd.size)), ZERO)
    return total / (category.total_dim * category.total_dim)


def brute_force_xi(F):
    """Contract the structure tensors of the spine skein literally.

    The tensors are indexed by support labels: eta[c], Delta[c][a][b],
    M[a][b][c], eps[c], each zero off the fusion rule.  The skein is
    eps_c' M[x][y][c'] Delta[c][x][y] eta[c] with the leg x routed once
    around the handle, which records the colour x of the core circle.
    """
    from .blocks import TorusVector
    from .frobenius import TrivialFrobenius, verify_frobenius

    cat = F.category
    if isinstance(F, TrivialFrobenius):
        return TorusVector(cat, tuple(ONE if a == 0 else ZERO for a in range(cat.rank)))
    if verify_frobenius(F):
        raise NotVerified("Frobenius algebra fails verification")
    H = list(F.support)
    L = cat.rank
    N = cat.fusion
    eta = [F.eta if c == 0 else ZERO for c in range(L)]
    eps = [F.eps if c == 0 else ZERO for c in range(L)]

    def delta(c, a, b):
        return F.delta[a, b] if a in H and b in H and N[a, b, c] else ZERO

    def mu(a, b, c):
        return F.mu[a, b] if a in H and b in H and N[a, b, c] else ZERO

    coeffs = [ZERO] * L
    for c in range(L):
        if not eta[c]:
            continue
        for x in range(L):
            for y in range(L):
                split = eta[c] * delta(c, x, y)
                if not split:
                    continue
                for c2 in range(L):
                    if eps[c2]:
                        coeffs[x] = coeffs[x] + split * mu(x, y, c2) * eps[c2]
    return TorusVector(cat, tuple(coeffs))


def chain_for_lens(p: int, q: int, expansion: str = "hj") -> ChainSurgery:
    from .manifolds import lens_presentation

    pres = lens_presentation(p, q, expansion)
    if pres.framings is None:
        raise BadParameters("presentation has no surgery chain")
    return ChainSurgery(pres.framings)
