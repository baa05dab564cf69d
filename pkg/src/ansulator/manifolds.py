"""Genus-1 Heegaard presentations, the vector v_M^F and its numeric invariant.

A presentation is a gluing word w; M = H' glued to H along rho(w).  The
lens space L(p,q) uses the chain a_1..a_m of a continued fraction
p/q = a_1 - 1/(a_2 - 1/(... - 1/a_m)) and the word

    S T^{a_1} S T^{a_2} ... S T^{a_m} S

which is the same chain the surgery oracle evaluates.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import _linalg as la
from .blocks import MCGWord, TorusVector, apply_word, letter_matrix, rho, torus_pairing, xi_handlebody
from .category.data import FusionData
from .errors import BadParameters, MalformedData
from .exactnum import Cyclotomic

EXPANSIONS = ("hj", "nearest")
AMBIGUITY = "kappa_power"


@dataclass(frozen=True)
class HeegaardPresentation:
    word: MCGWord
    genus: int = 1
    display_name: str | None = None
    # surgery chain the word was generated from, when known
    framings: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.genus != 1:
            raise BadParameters("only genus-1 presentations are supported")
        if not isinstance(self.word, MCGWord):
            raise MalformedData("word must be an MCGWord")

    @property
    def name(self) -> str:
        return self.display_name or f"word:{self.word}"


@dataclass(frozen=True, eq=False)
class SkeinVectorPresentation:
    category: FusionData
    frobenius: object
    presentation: HeegaardPresentation
    left: TorusVector
    right: TorusVector


@dataclass(frozen=True, eq=False)
class InvariantValue:
    value: Cyclotomic
    anomaly: Cyclotomic
    ambiguity_note: str = field(default="canonical only up to multiplication by an integer power of kappa")


def continued_fraction(p: int, q: int, expansion: str = "hj") -> list[int]:
    """Terms a_i of p/q = a_1 - 1/(a_2 - ...), rounding up ("hj") or to the nearest integer."""
    if expansion not in EXPANSIONS:
        raise BadParameters(f"expansion must be one of {EXPANSIONS}")
    if q == 0:
        raise BadParameters("q must be nonzero for a continued fraction")
    x = Fraction(p, q)
    out = []
    while True:
        a = math.ceil(x) if expansion == "hj" else math.floor(x + Fraction(1, 2))
        out.append(a)
        if x == a:
            return out
        x = 1 / (a - x)


def chain_value(framings) -> Fraction:
    """p/q of a chain, the inverse of :func:`continued_fraction`."""
    x = None
    for a in reversed(framings):
        x = Fraction(a) if x is None else a - 1 / x
    return x


def word_from_chain(framings) -> MCGWord:
    letters = ["S"]
    for a in framings:
        letters += MCGWord.T_power(a).letters
        letters.append("S")
    return MCGWord(tuple(letters))


def lens_presentation(p: int, q: int, expansion: str = "hj") -> HeegaardPresentation:
    """L(p,q); (1,0) is S^3 with word S and (0,±1) is S^1 x S^2 with the empty word."""
    if not isinstance(p, int) or not isinstance(q, int) or p < 0:
        raise BadParameters("lens parameters must be integers with p >= 0")
    if math.gcd(p, q) != 1:
        raise BadParameters(f"gcd({p}, {q}) must be 1")
    name = f"L({p},{q})"
    if p == 0:
        return HeegaardPresentation(MCGWord(()), display_name=name, framings=(0,))
    if p == 1 and q == 0:
        return HeegaardPresentation(MCGWord(("S",)), display_name=name, framings=())
    if p >= 2:
        q %= p
    chain = tuple(continued_fraction(p, q, expansion))
    return HeegaardPresentation(word_from_chain(chain), display_name=name, framings=chain)


def s3() -> HeegaardPresentation:
    return lens_presentation(1, 0)


def s1xs2() -> HeegaardPresentation:
    return lens_presentation(0, 1)


def parse_manifold(spec: str) -> HeegaardPresentation:
    """``s3``, ``s1xs2``, ``lens:p,q[,expansion]`` or ``word:S.T.Ti``."""
    spec = spec.strip()
    if spec == "s3":
        return s3()
    if spec == "s1xs2":
        return s1xs2()
    if m := re.fullmatch(r"lens:(-?\d+),(-?\d+)(?:,(\w+))?", spec):
        return lens_presentation(int(m.group(1)), int(m.group(2)), m.group(3) or "hj")
    if spec.startswith("word:"):
        return HeegaardPresentation(MCGWord.parse(spec[5:]), display_name=spec)
    raise BadParameters(f"unrecognized manifold spec {spec!r}")


def build_v_M_F(category: FusionData, F, pres: HeegaardPresentation) -> SkeinVectorPresentation:
    if F.category is not category and F.category != category:
        raise BadParameters("Frobenius algebra lives in a different category")
    xi = xi_handlebody(F)
    return SkeinVectorPresentation(
        category=category,
        frobenius=F,
        presentation=pres,
        left=TorusVector.basis(category, 0),
        right=apply_word(category, pres.word, xi),
    )


def numeric_invariant(v: SkeinVectorPresentation) -> InvariantValue:
    letter_matrix(v.category, "S")  # NotModular for non-modular input, even for pure T words
    return InvariantValue(value=torus_pairing(v.left, v.right), anomaly=v.category.sdata.anomaly)


def invariant(category: FusionData, F, pres: HeegaardPresentation) -> InvariantValue:
    return numeric_invariant(build_v_M_F(category, F, pres))


def double_coset_transform(v: SkeinVectorPresentation, m: int, n: int) -> SkeinVectorPresentation:
    """Replace the gluing word w by T^m w T^n."""
    if m == 0 and n == 0:
        return v
    old = v.presentation
    word = MCGWord.T_power(m) + old.word + MCGWord.T_power(n)
    pres = HeegaardPresentation(word, display_name=old.display_name)
    return build_v_M_F(v.category, v.frobenius, pres)


def kappa_power(value: Cyclotomic, reference: Cyclotomic, kappa: Cyclotomic, bound: int) -> int | None:
    """Smallest |n| <= bound with value = reference * kappa^n (n = 0 preferred, then -1, 1, ...)."""
    kinv = kappa.inv()
    up = down = reference
    if value == reference:
        return 0
    for k in range(1, bound + 1):
        down = down * kinv
        if value == down:
            return -k
        up = up * kappa
        if value == up:
            return k
    return None


def projective_exponent(w1: MCGWord, w2: MCGWord, category: FusionData) -> int | None:
    """n with rho(w1) = kappa^n rho(w2) and |n| <= len(w1) + len(w2), or None."""
    r1, r2 = rho(category, w1), rho(category, w2)
    kappa = category.sdata.anomaly
    L = category.rank
    # locate a nonzero entry of r2 to fix the candidate scalar
    pos = next(((i, j) for i in range(L) for j in range(L) if r2[i][j]), None)
    if pos is None:
        return 0 if all(not x for row in r1 for x in row) else None
    i, j = pos
    n = kappa_power(r1[i][j], r2[i][j], kappa, len(w1) + len(w2))
    if n is None:
        return None
    factor = kappa ** n if n >= 0 else kappa.inv() ** -n
    return n if r1 == la.scale(r2, factor) else None


def isotopy_word_equivalence(w1: MCGWord, w2: MCGWord, category: FusionData) -> bool:
    return projective_exponent(w1, w2, category) is not None
