"""Skeletal ribbon fusion category data, S-data and validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .. import _linalg as la
from ..errors import MalformedData, NotModular
from ..exactnum import Cyclotomic, is_positive_real
from .pointed import PointedData

# positivity of an exactly-real value is decided at this working precision
POSITIVITY_BITS = 128
POSITIVITY_MARGIN = 1e-20


@dataclass(frozen=True)
class Violation:
    invariant: str
    where: tuple = ()
    message: str = ""

    def __str__(self):
        loc = f" at {self.where}" if self.where else ""
        return f"{self.invariant}{loc}: {self.message}"


@dataclass(frozen=True, eq=False)
class SMatrixData:
    stilde: list[list[Cyclotomic]]
    s_normalized: list[list[Cyclotomic]]
    gauss_plus: Cyclotomic
    gauss_minus: Cyclotomic
    anomaly: Cyclotomic

    def same_as(self, other: "SMatrixData") -> bool:
        return (
            self.stilde == other.stilde
            and self.gauss_plus == other.gauss_plus
            and self.gauss_minus == other.gauss_minus
            and self.anomaly == other.anomaly
        )


@dataclass(frozen=True, eq=False)
class FusionData:
    """Skeletal ribbon fusion category; label 0 is the monoidal unit.

    ``smatrix`` is an optional cache of derived S-data.  It is not part of
    equality and is recomputed whenever absent.
    """

    name: str
    labels: tuple[str, ...]
    dual: tuple[int, ...]
    fusion: np.ndarray
    twist: tuple[Cyclotomic, ...]
    qdim: tuple[Cyclotomic, ...]
    total_dim: Cyclotomic
    pointed: PointedData | None = None
    smatrix: SMatrixData | None = field(default=None, repr=False)

    def __post_init__(self):
        fusion = np.asarray(self.fusion)
        if fusion.dtype == object or fusion.ndim != 3:
            raise MalformedData("fusion must be a rank-3 integer tensor")
        object.__setattr__(self, "fusion", fusion.astype(np.int64))
        self.fusion.setflags(write=False)
        L = len(self.labels)
        if fusion.shape != (L, L, L):
            raise MalformedData(f"fusion tensor has shape {fusion.shape}, expected {(L, L, L)}")
        for name, seq in (("dual", self.dual), ("twist", self.twist), ("qdim", self.qdim)):
            if len(seq) != L:
                raise MalformedData(f"{name} has {len(seq)} entries for {L} labels")
        if any(not isinstance(a, (int, np.integer)) or not 0 <= a < L for a in self.dual):
            raise MalformedData("dual references a label index out of range")
        if self.pointed is not None and any(not 0 <= a < L for a in self.pointed.elements):
            raise MalformedData("pointed data references a label index out of range")

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def global_dim_sq(self) -> Cyclotomic:
        return sum((d * d for d in self.qdim), Cyclotomic.rational(0))

    @cached_property
    def twist_inv(self) -> tuple[Cyclotomic, ...]:
        return tuple(t.inv() for t in self.twist)

    @cached_property
    def _computed_sdata(self) -> SMatrixData:
        return compute_smatrix(self)

    @cached_property
    def _modular(self) -> bool:
        return la.rank(self.sdata.stilde) == self.rank

    @property
    def sdata(self) -> SMatrixData:
        """Stored S-data if present, otherwise computed (and cached)."""
        return self.smatrix if self.smatrix is not None else self._computed_sdata

    def label_index(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            if 0 <= label < self.rank:
                return int(label)
            raise KeyError(label)
        if label in self.labels:
            return self.labels.index(label)
        if label.lstrip("-").isdigit() and 0 <= int(label) < self.rank:
            return int(label)
        raise KeyError(f"unknown label {label!r} in {self.name}")

    def invertible_labels(self) -> list[int]:
        return [a for a in range(self.rank) if self.qdim[a] == 1 and self.fusion[a, self.dual[a]].sum() == 1]

    def __eq__(self, other):
        if not isinstance(other, FusionData):
            return NotImplemented
        same_pointed = (self.pointed is None and other.pointed is None) or (
            self.pointed is not None and other.pointed is not None and self.pointed.same_as(other.pointed)
        )
        return (
            self.name == other.name
            and self.labels == other.labels
            and tuple(self.dual) == tuple(other.dual)
            and np.array_equal(self.fusion, other.fusion)
            and self.twist == other.twist
            and self.qdim == other.qdim
            and self.total_dim == other.total_dim
            and same_pointed
        )

    __hash__ = None


def compute_smatrix(d: FusionData) -> SMatrixData:
    """s~_ab = sum_c N[a*][b][c] theta_c / (theta_a theta_b) d_c, Gauss sums and anomaly."""
    L = d.rank
    N = d.fusion
    tinv = d.twist_inv
    stilde = []
    for a in range(L):
        row = []
        ad = d.dual[a]
        for b in range(L):
            acc = Cyclotomic.rational(0)
            for c in np.nonzero(N[ad, b])[0]:
                acc = acc + int(N[ad, b, c]) * d.twist[c] * d.qdim[c]
            row.append(acc * tinv[a] * tinv[b])
        stilde.append(row)
    dinv = d.total_dim.inv()
    dsq = [q * q for q in d.qdim]
    p_plus = sum((t * q for t, q in zip(d.twist, dsq)), Cyclotomic.rational(0))
    p_minus = sum((t * q for t, q in zip(tinv, dsq)), Cyclotomic.rational(0))
    return SMatrixData(
        stilde=stilde,
        s_normalized=la.scale(stilde, dinv),
        gauss_plus=p_plus,
        gauss_minus=p_minus,
        anomaly=p_plus * dinv,
    )


def is_modular(d: FusionData) -> bool:
    return d._modular


def charge_conjugation(d: FusionData) -> list[list[Cyclotomic]]:
    return [[la.ONE if b == d.dual[a] else la.ZERO for b in range(d.rank)] for a in range(d.rank)]


def verlinde_consistency(d: FusionData) -> bool:
    """N[a][b][c] == sum_x s_ax s_bx conj(s_cx) / s_0x for every triple."""
    if not is_modular(d):
        raise NotModular(f"{d.name} is not modular")
    s = d.sdata.s_normalized
    L = d.rank
    inv0 = [s[0][x].inv() for x in range(L)]
    left = [[[s[a][x] * s[b][x] * inv0[x] for x in range(L)] for b in range(L)] for a in range(L)]
    sbar = [[s[c][x].conj() for x in range(L)] for c in range(L)]
    for a in range(L):
        for b in range(a, L):
            for c in range(L):
                total = Cyclotomic.rational(0)
                for x in range(L):
                    total = total + left[a][b][x] * sbar[c][x]
                if total != int(d.fusion[a, b, c]):
                    return False
    return True


def _check_fusion(d: FusionData, out: list[Violation]) -> None:
    N, L = d.fusion, d.rank
    if (N < 0).any():
        out.append(Violation("fusion-nonnegative", tuple(map(int, np.argwhere(N < 0)[0]))))
    eye = np.eye(L, dtype=np.int64)
    for a in range(L):
        if not np.array_equal(N[0, a], eye[a]):
            out.append(Violation("unit-fusion", (0, a), "N[0][a][c] must be delta_ac"))
        if not np.array_equal(N[a, 0], eye[a]):
            out.append(Violation("unit-fusion", (a, 0), "N[a][0][c] must be delta_ac"))
    if d.dual[0] != 0:
        out.append(Violation("dual-involution", (0,), "the unit must be self-dual"))
    for a in range(L):
        if d.dual[d.dual[a]] != a:
            out.append(Violation("dual-involution", (a,), "(a*)* must equal a"))
        for b in range(L):
            want = 1 if b == d.dual[a] else 0
            if N[a, b, 0] != want:
                out.append(Violation("dual-fusion", (a, b), f"N[a][b][0] = {N[a, b, 0]}, expected {want}"))
    for a in range(L):
        lhs = np.einsum("be,ecd->bcd", N[a], N)
        rhs = np.einsum("bcf,fd->bcd", N, N[a])
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            out.append(Violation("fusion-associativity", (a, *map(int, bad[0])), "(ab)c != a(bc) multiplicities"))


def _check_scalars(d: FusionData, out: list[Violation]) -> None:
    L = d.rank
    if d.twist[0] != 1:
        out.append(Violation("unit-twist", (0,), "theta of the unit must be 1"))
    for a in range(L):
        t = d.twist[a]
        if t * t.conj() != 1 or t ** (2 * t.order) != 1:
            out.append(Violation("twist-root-of-unity", (a,), f"theta = {t}"))
        if d.twist[d.dual[a]] != t:
            out.append(Violation("dual-twist", (a, d.dual[a]), "theta_{a*} must equal theta_a"))
    if d.qdim[0] != 1:
        out.append(Violation("unit-qdim", (0,), "d_0 must be 1"))
    for a in range(L):
        if not is_positive_real(d.qdim[a], POSITIVITY_BITS, POSITIVITY_MARGIN):
            out.append(Violation("qdim-real-positive", (a,), f"d = {d.qdim[a]}"))
    for a in range(L):
        for b in range(a, L):
            total = sum((int(d.fusion[a, b, c]) * d.qdim[c] for c in range(L) if d.fusion[a, b, c]),
                        Cyclotomic.rational(0))
            if total != d.qdim[a] * d.qdim[b]:
                out.append(Violation("qdim-fusion", (a, b), "d_a d_b != sum_c N_ab^c d_c"))
    if d.total_dim * d.total_dim != d.global_dim_sq:
        out.append(Violation("total-dim-square", (), "D^2 != sum_a d_a^2"))
    if not is_positive_real(d.total_dim, POSITIVITY_BITS, POSITIVITY_MARGIN):
        out.append(Violation("total-dim-positive", (), f"D = {d.total_dim}"))


def _check_pointed(d: FusionData, out: list[Violation]) -> None:
    pd = d.pointed
    if pd.elements[0] != 0:
        out.append(Violation("pointed-closure", (0,), "the group identity must be the unit label"))
    if len(set(pd.elements)) != len(pd.elements):
        out.append(Violation("pointed-closure", (), "group elements must map to distinct labels"))
        return
    A = pd.add_table
    for g, a in enumerate(pd.elements):
        if d.qdim[a] != 1:
            out.append(Violation("pointed-closure", (a,), "invertible labels need d = 1"))
        if d.dual[a] != pd.elements[pd.neg[g]]:
            out.append(Violation("pointed-closure", (a,), "dual disagrees with the group inverse"))
        for h, b in enumerate(pd.elements):
            if d.fusion[a, b, pd.elements[A[g, h]]] != 1 or d.fusion[a, b].sum() != 1:
                out.append(Violation("pointed-closure", (a, b), "fusion of invertibles must follow the group law"))
                break
        if pd.twist_value(g) != d.twist[a]:
            out.append(Violation("pointed-twist", (a,), "theta_a must equal the braiding c(a,a)"))
    for fail in pd.cocycle_failures():
        out.append(Violation("pointed-cocycle", tuple(pd.elements[x] for x in fail), "omega is not a 3-cocycle"))
    for tag, *idx in pd.hexagon_failures():
        out.append(Violation("pointed-" + tag, tuple(pd.elements[x] for x in idx), "hexagon relation fails"))


def validate_fusion_data(d: FusionData) -> list[Violation]:
    """Every violated invariant, with label indices; an empty list means valid."""
    out: list[Violation] = []
    _check_fusion(d, out)
    if any(v.invariant in ("unit-fusion", "dual-involution") for v in out):
        return out
    _check_scalars(d, out)
    if d.pointed is not None:
        _check_pointed(d, out)
    if d.smatrix is not None:
        fresh = compute_smatrix(d)
        if not d.smatrix.same_as(fresh):
            out.append(Violation("derived-data", (), "stored S-data disagrees with recomputation"))
    return out


def harmonize(values: Sequence[Cyclotomic], order: int) -> tuple[Cyclotomic, ...]:
    return tuple(v.promote(order) for v in values)
