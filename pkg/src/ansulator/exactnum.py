"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A :class:`Cyclotomic` stores an element of Q(zeta_N) in canonical form: the
remainder modulo the N-th cyclotomic polynomial, written as integer
numerators over one positive common denominator.  Equality is therefore a
plain tuple comparison, and values of different orders are compared after
embedding both into Q(zeta_lcm).

The complex embedding zeta_N -> exp(2 pi i / N) is only used for display,
for floating-point cross-checks and for deciding the sign of a real value
that is already known exactly to be nonzero.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import mpmath

from .errors import MalformedData, ZeroInverse

__all__ = [
    "Cyclotomic",
    "cyclotomic_polynomial",
    "cyc_reduce",
    "cyc_mul",
    "cyc_inv",
    "cyc_conj",
    "cyc_embed",
    "euler_phi",
    "is_positive_real",
    "root_of_unity_exponent",
    "sqrt_of_integer",
    "zeta",
]

_RATIONAL_RE = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _divide_monic(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact quotient of integer polynomials (low-to-high), ``den`` monic."""
    num = list(num)
    dq = len(den) - 1
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quot[i - dq] = c
            for j in range(dq + 1):
                num[i - dq + j] -= c * den[j]
    if any(num[:dq]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the monic n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _divide_monic(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _ramanujan_sums(n: int) -> tuple[int, ...]:
    # trace of zeta_n^k over Q
    phi = euler_phi(n)
    out = []
    for k in range(phi):
        g = math.gcd(k, n)
        out.append(_mobius(n // g) * phi // euler_phi(n // g))
    return tuple(out)


def _reduce_ints(coeffs: list[int], order: int) -> list[int]:
    """Remainder of an integer polynomial modulo the (monic) cyclotomic polynomial."""
    modulus = cyclotomic_polynomial(order)
    phi = len(modulus) - 1
    a = list(coeffs)
    for i in range(len(a) - 1, phi - 1, -1):
        c = a[i]
        if c:
            base = i - phi
            for j in range(phi):
                mj = modulus[j]
                if mj:
                    a[base + j] -= c * mj
    if len(a) < phi:
        a.extend([0] * (phi - len(a)))
    return a[:phi]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise MalformedData(f"not an exact rational: {value!r}")
        return Fraction(value.replace(" ", ""))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Cyclotomic:
    """Immutable element of Q(zeta_N).

    ``Cyclotomic(N, coeffs)`` reads ``coeffs`` as sum_k coeffs[k] * zeta_N^k;
    any length is accepted and indices are taken modulo N.
    """

    __slots__ = ("order", "_num", "_den")

    def __init__(self, order: int, coeffs: Iterable = ()):
        if not isinstance(order, int) or order < 1:
            raise MalformedData(f"cyclotomic order must be a positive integer, got {order!r}")
        folded = [Fraction(0)] * order
        for k, c in enumerate(coeffs):
            folded[k % order] += _as_fraction(c)
        den = math.lcm(*(c.denominator for c in folded)) if folded else 1
        nums = [c.numerator * (den // c.denominator) for c in folded]
        self._set(order, _reduce_ints(nums, order), den)

    def _set(self, order: int, nums: list[int], den: int) -> None:
        g = math.gcd(den, *nums)
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        if not any(nums):
            den = 1
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_num", tuple(nums))
        object.__setattr__(self, "_den", den)

    @classmethod
    def _raw(cls, order: int, nums: list[int], den: int) -> "Cyclotomic":
        """Build from integer numerators, reducing modulo the cyclotomic polynomial."""
        obj = cls.__new__(cls)
        obj._set(order, _reduce_ints(nums, order), den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic values are immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "Cyclotomic":
        nums = [0] * order
        nums[power % order] = 1
        return cls._raw(order, nums, 1)

    @classmethod
    def rational(cls, value, order: int = 1) -> "Cyclotomic":
        fr = _as_fraction(value)
        return cls._raw(order, [fr.numerator], fr.denominator)

    @classmethod
    def from_json(cls, obj) -> "Cyclotomic":
        if not isinstance(obj, dict) or set(obj) != {"order", "coeffs"}:
            raise MalformedData("cyclotomic JSON must be {'order': N, 'coeffs': [...]}")
        order, coeffs = obj["order"], obj["coeffs"]
        if not isinstance(order, int) or isinstance(order, bool) or order < 1:
            raise MalformedData(f"bad cyclotomic order {order!r}")
        if not isinstance(coeffs, list) or len(coeffs) != order:
            raise MalformedData(f"expected exactly {order} coefficient strings")
        if not all(isinstance(c, str) for c in coeffs):
            raise MalformedData("cyclotomic coefficients must be strings 'p/q'")
        return cls(order, coeffs)

    # -- views --------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Canonical coefficient vector of length ``order``."""
        out = [Fraction(n, self._den) for n in self._num]
        out.extend([Fraction(0)] * (self.order - len(out)))
        return tuple(out)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- field embedding ----------------------------------------------------

    def promote(self, order: int) -> "Cyclotomic":
        """Image in Q(zeta_order) under zeta_N -> zeta_order^(order/N)."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"Q(zeta_{self.order}) does not embed in Q(zeta_{order})")
        step = order // self.order
        nums = [0] * order
        for k, c in enumerate(self._num):
            nums[k * step] = c
        return Cyclotomic._raw(order, nums, self._den)

    @staticmethod
    def _coerce(value) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, Rational)) and not isinstance(value, bool):
            return Cyclotomic.rational(value)
        return NotImplemented

    def _common(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if self.order == other.order:
            return self, other
        order = math.lcm(self.order, other.order)
        return self.promote(order), other.promote(order)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        if a._den == b._den:
            nums = [x + y for x, y in zip(a._num, b._num)]
            den = a._den
        else:
            den = math.lcm(a._den, b._den)
            fa, fb = den // a._den, den // b._den
            nums = [x * fa + y * fb for x, y in zip(a._num, b._num)]
        out = Cyclotomic.__new__(Cyclotomic)
        out._set(a.order, nums, den)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Cyclotomic.__new__(Cyclotomic)
        out._set(self.order, [-x for x in self._num], self._den)
        return out

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        if b.is_rational() or a.is_rational():
            if a.is_rational():
                a, b = b, a
            k = b._num[0]
            out = Cyclotomic.__new__(Cyclotomic)
            out._set(a.order, [x * k for x in a._num], a._den * b._den)
            return out
        left = [(i, x) for i, x in enumerate(a._num) if x]
        right = [(j, y) for j, y in enumerate(b._num) if y]
        prod = [0] * (2 * len(a._num) - 1)
        for i, x in left:
            for j, y in right:
                prod[i + j] += x * y
        return Cyclotomic._raw(a.order, prod, a._den * b._den)

    __rmul__ = __mul__

    def inv(self) -> "Cyclotomic":
        """Multiplicative inverse: the product of the other Galois conjugates over the norm."""
        if self.is_zero():
            raise ZeroInverse(f"{self} has no inverse")
        if self.is_rational():
            return Cyclotomic.rational(Fraction(self._den, self._num[0]), self.order)
        N = self.order
        others = Cyclotomic.rational(1, N)
        for k in range(2, N):
            if math.gcd(k, N) == 1:
                others = others * self._galois(k)
        norm = self * others
        if not norm.is_rational():  # pragma: no cover - the norm lies in Q
            raise ArithmeticError("norm computation left the rationals")
        return others * Cyclotomic.rational(Fraction(norm._den, norm._num[0]), N)

    def _galois(self, k: int) -> "Cyclotomic":
        """The automorphism zeta_N -> zeta_N^k."""
        nums = [0] * self.order
        for i, c in enumerate(self._num):
            if c:
                nums[(i * k) % self.order] += c
        return Cyclotomic._raw(self.order, nums, self._den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base, exponent = self.inv(), -exponent
        result = Cyclotomic.rational(1, self.order)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugation zeta_N -> zeta_N^(N-1)."""
        nums = [0] * self.order
        for k, c in enumerate(self._num):
            nums[(-k) % self.order] += c
        return Cyclotomic._raw(self.order, nums, self._den)

    def reduce(self) -> "Cyclotomic":
        # values are kept canonical, so this is the identity on the representation
        return self

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        # Normalized trace down to Q does not depend on the ambient order.
        sums = _ramanujan_sums(self.order)
        tr = sum(c * s for c, s in zip(self._num, sums))
        return hash(Fraction(tr, self._den * euler_phi(self.order)))

    # -- numerics -----------------------------------------------------------

    def embed(self, precision: int = 53) -> tuple[mpmath.mpf, mpmath.mpf]:
        with mpmath.workprec(precision + 16):
            total = mpmath.mpc(0)
            for k, c in enumerate(self._num):
                if c:
                    total += c * mpmath.expjpi(mpmath.mpf(2 * k) / self.order)
            total /= self._den
        with mpmath.workprec(precision):
            return +total.real, +total.imag

    def __complex__(self):
        total = 0j
        for k, c in enumerate(self._num):
            if c:
                total += c * cmath.exp(2j * math.pi * k / self.order)
        return total / self._den

    def __float__(self):
        if not self.is_rational():
            raise TypeError("only rational values convert to float; use complex()")
        return self._num[0] / self._den

    def __repr__(self):
        return f"Cyclotomic({self.order}, {self})"

    def __str__(self):
        if self.is_rational():
            return str(Fraction(self._num[0], self._den))
        terms = []
        for k, n in enumerate(self._num):
            if not n:
                continue
            c = Fraction(n, self._den)
            mono = "" if k == 0 else (f"E({self.order})" if k == 1 else f"E({self.order})^{k}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


# -- module-level operations ------------------------------------------------


def zeta(order: int, power: int = 1) -> Cyclotomic:
    return Cyclotomic.zeta(order, power)


def cyc_reduce(x: Cyclotomic) -> Cyclotomic:
    return x.reduce()


def cyc_mul(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    return x * y


def cyc_inv(x: Cyclotomic) -> Cyclotomic:
    return x.inv()


def cyc_conj(x: Cyclotomic) -> Cyclotomic:
    return x.conj()


def cyc_embed(x: Cyclotomic, precision: int = 53) -> tuple[mpmath.mpf, mpmath.mpf]:
    return x.embed(precision)


def is_positive_real(x: Cyclotomic, precision: int = 128, margin: float = 1e-20) -> bool:
    """Exactly real (conjugation-fixed) and numerically above ``margin``."""
    if x.conj() != x:
        return False
    re_part, im_part = x.embed(precision)
    return abs(im_part) < margin and re_part > margin


def root_of_unity_exponent(x: Cyclotomic, modulus: int) -> int | None:
    """Return k with x == zeta_modulus^k exactly, or None."""
    z = complex(x)
    if abs(abs(z) - 1) > 1e-9:
        return None
    k = round(cmath.phase(z) * modulus / (2 * math.pi)) % modulus
    return k if Cyclotomic.zeta(modulus, k) == x else None


def _squarefree_split(n: int) -> tuple[int, list[int]]:
    square, primes, p, m = 1, [], 2, n
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            square *= p
        if m % p == 0:
            primes.append(p)
            m //= p
        p += 1
    if m > 1:
        primes.append(m)
    return square, primes


def _legendre(a: int, p: int) -> int:
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_of_integer(n: int) -> Cyclotomic:
    """Positive square root of a positive integer as an explicit cyclotomic element.

    Built from sqrt(2) = zeta_8 + zeta_8^-1 and quadratic Gauss sums for odd
    primes, then checked by squaring.
    """
    if n < 1:
        raise ValueError("sqrt_of_integer needs a positive integer")
    square, primes = _squarefree_split(n)
    root = Cyclotomic.rational(square)
    for p in primes:
        if p == 2:
            factor = zeta(8) + zeta(8, 7)
        else:
            gauss = Cyclotomic(p, [0] + [_legendre(k, p) for k in range(1, p)])
            factor = gauss if p % 4 == 1 else -zeta(4) * gauss
        root = root * factor
    if root * root != n or not is_positive_real(root):
        raise ArithmeticError(f"square root construction failed for {n}")
    return root
