"""Genus-1 block space: torus vectors, the projective SL(2,Z) action and the handlebody vector."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from . import _linalg as la
from .category.data import FusionData, charge_conjugation, is_modular
from .errors import CategoryMismatch, MalformedData, NotModular, NotVerified
from .exactnum import Cyclotomic

LETTERS = ("S", "T", "Ti")
_LETTER_MATRIX = {"S": ((0, -1), (1, 0)), "T": ((1, 1), (0, 1)), "Ti": ((1, -1), (0, 1))}
_ALIASES = {"S": "S", "T": "T", "Ti": "Ti", "T^-1": "Ti", "T-1": "Ti", "t": "Ti"}


def _mat2(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


@dataclass(frozen=True)
class MCGWord:
    """A word in S, T, T^-1; products read left to right as matrix products."""

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        bad = [x for x in letters if x not in LETTERS]
        if bad:
            raise MalformedData(f"unknown mapping class letters {bad}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> "MCGWord":
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(_ALIASES[x] for x in text.split(".")))
        except KeyError as exc:
            raise MalformedData(f"unknown mapping class letter {exc.args[0]!r}") from exc

    @classmethod
    def T_power(cls, n: int) -> "MCGWord":
        return cls(("T",) * n if n >= 0 else ("Ti",) * -n)

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        m = ((1, 0), (0, 1))
        for x in self.letters:
            m = _mat2(m, _LETTER_MATRIX[x])
        return m

    def __add__(self, other: "MCGWord") -> "MCGWord":
        return MCGWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return ".".join(self.letters)


@dataclass(frozen=True, eq=False)
class TorusVector:
    """Coordinates in the basis e_a of core circles coloured by simples."""

    category: FusionData
    coeffs: tuple[Cyclotomic, ...]

    def __post_init__(self):
        coeffs = tuple(c if isinstance(c, Cyclotomic) else Cyclotomic.rational(c) for c in self.coeffs)
        if len(coeffs) != self.category.rank:
            raise MalformedData(f"torus vector needs {self.category.rank} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def basis(cls, category: FusionData, label) -> "TorusVector":
        a = category.label_index(label)
        return cls(category, tuple(la.ONE if b == a else la.ZERO for b in range(category.rank)))

    @classmethod
    def zero(cls, category: FusionData) -> "TorusVector":
        return cls(category, (la.ZERO,) * category.rank)

    def _same(self, other: "TorusVector") -> None:
        if not _same_category(self.category, other.category):
            raise CategoryMismatch("torus vectors belong to different categories")

    def __add__(self, other):
        self._same(other)
        return TorusVector(self.category, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._same(other)
        return TorusVector(self.category, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TorusVector(self.category, tuple(-x for x in self.coeffs))

    def __mul__(self, scalar):
        return TorusVector(self.category, tuple(x * scalar for x in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TorusVector):
            return NotImplemented
        return _same_category(self.category, other.category) and self.coeffs == other.coeffs

    __hash__ = None

    def __getitem__(self, label):
        return self.coeffs[self.category.label_index(label)]

    def to_json(self) -> dict:
        return {name: c.to_json() for name, c in zip(self.category.labels, self.coeffs)}

    def __repr__(self):
        terms = [f"({c})*e_{n}" for n, c in zip(self.category.labels, self.coeffs) if c]
        return " + ".join(terms) or "0"


def _same_category(a: FusionData, b: FusionData) -> bool:
    return a is b or a == b


# -- the SL(2,Z) action -------------------------------------------------------

_cache_lock = threading.Lock()


def _letters_for(category: FusionData) -> dict:
    # per-instance cache living next to the category's other cached properties
    with _cache_lock:
        return category.__dict__.setdefault("_rho_letters", {})


def letter_matrix(category: FusionData, letter: str):
    """rho of a single letter, cached per category instance."""
    entry = _letters_for(category)
    m = entry.get(letter)
    if m is not None:
        return m
    L = category.rank
    if letter == "S":
        if not is_modular(category):
            raise NotModular(f"{category.name} is not modular; rho(S) is undefined")
        m = category.sdata.s_normalized
    elif letter == "T":
        m = [[category.twist[a] if a == b else la.ZERO for b in range(L)] for a in range(L)]
    elif letter == "Ti":
        m = [[category.twist_inv[a] if a == b else la.ZERO for b in range(L)] for a in range(L)]
    else:
        raise MalformedData(f"unknown letter {letter!r}")
    entry[letter] = m
    return m


def _require_modular(category: FusionData) -> None:
    letter_matrix(category, "S")


def rho(category: FusionData, w: MCGWord):
    """The exact matrix rho(w) = rho(x_1) rho(x_2) ... rho(x_k)."""
    out = la.identity(category.rank)
    for x in w.letters:
        out = la.matmul(out, letter_matrix(category, x))
    return out


def apply_word(category: FusionData, w: MCGWord, v: TorusVector) -> TorusVector:
    """rho(w) v, applying letters right to left; diagonal letters cost O(rank)."""
    coeffs = list(v.coeffs)
    for x in reversed(w.letters):
        if x == "T":
            coeffs = [c * t for c, t in zip(coeffs, category.twist)]
        elif x == "Ti":
            coeffs = [c * t for c, t in zip(coeffs, category.twist_inv)]
        else:
            coeffs = la.matvec(letter_matrix(category, "S"), coeffs)
    return TorusVector(category, tuple(coeffs))


def mcg_relation_report(category: FusionData) -> dict[str, bool]:
    """Each standard relation of the projective action, checked exactly."""
    _require_modular(category)
    S, T = letter_matrix(category, "S"), letter_matrix(category, "T")
    C = charge_conjugation(category)
    S2 = la.matmul(S, S)
    ST = la.matmul(S, T)
    ST3 = la.matmul(la.matmul(ST, ST), ST)
    kappa = category.sdata.anomaly
    return {
        "S^2 = C": S2 == C,
        "(ST)^3 = kappa S^2": ST3 == la.scale(S2, kappa),
        "CT = TC": la.matmul(C, T) == la.matmul(T, C),
        "S^4 = id": la.matmul(S2, S2) == la.identity(category.rank),
    }


def check_mcg_relations(category: FusionData) -> bool:
    return all(mcg_relation_report(category).values())


def xi_handlebody(F, *, check: bool = True) -> TorusVector:
    """The handlebody vector: sum over a in H of e dl(a,a^-1) m(a,a^-1) eps e_a.

    With ``check`` the algebra must verify and satisfy mu delta = id_F.
    """
    from .frobenius import TrivialFrobenius, _SupportGroup, verify_frobenius

    cat = F.category
    if isinstance(F, TrivialFrobenius):
        return TorusVector.basis(cat, 0)
    if check:
        problems = verify_frobenius(F)
        if problems:
            raise NotVerified("Frobenius algebra fails verification: " + "; ".join(map(str, problems[:3])))
        if F.lam_prime != 1:
            raise NotVerified("mu delta must be id_F; call renormalize_special first")
    grp = _SupportGroup(cat, F.support)
    coeffs = [la.ZERO] * cat.rank
    for a in F.support:
        ai = grp.inv(a)
        coeffs[a] = F.eta * F.delta[a, ai] * F.mu[a, ai] * F.eps
    return TorusVector(cat, tuple(coeffs))


def torus_pairing(v: TorusVector, w: TorusVector) -> Cyclotomic:
    """Bilinear pairing with <e_a, e_b> = 1 exactly when b is dual to a."""
    if not _same_category(v.category, w.category):
        raise CategoryMismatch("torus vectors belong to different categories")
    dual = v.category.dual
    total = la.ZERO
    for a, x in enumerate(v.coeffs):
        if x:
            total = total + x * w.coeffs[dual[a]]
    return total


def random_word(rng, max_len: int = 12) -> MCGWord:
    n = rng.randint(0, max_len)
    return MCGWord(tuple(rng.choice(LETTERS) for _ in range(n)))

