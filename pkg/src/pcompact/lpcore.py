"""Truncated sequence-space arithmetic.

Vectors are plain complex numpy arrays.  A truncated element of a
sequence space carries a finite prefix together with an exact bound on
the norm of the omitted tail, so every norm computed here is an interval
``[lower, upper]`` rather than a point value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

INF = math.inf

#: default absolute tolerance on certificate residuals
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Exponent:
    """A summability exponent p in [1, inf]."""

    p: float

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError(f"exponent must satisfy p >= 1, got {self.p}")

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    def conjugate(self) -> "Exponent":
        """Hoelder conjugate q with 1/p + 1/q = 1."""
        if self.p == 1.0:
            return Exponent(INF)
        if self.is_inf:
            return Exponent(1.0)
        return Exponent(self.p / (self.p - 1.0))

    def __float__(self) -> float:
        return self.p


def as_exponent(p) -> Exponent:
    if isinstance(p, Exponent):
        return p
    if p == "inf":
        return Exponent(INF)
    return Exponent(float(p))


def conjugate_exponent(p) -> Exponent:
    return as_exponent(p).conjugate()


def as_vec(x) -> np.ndarray:
    """Coerce scalars / sequences to a 1-d complex array."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1)
    if a.ndim != 1:
        raise ValueError(f"expected a vector, got shape {a.shape}")
    return a


def vec_norm(x, p) -> float:
    """l_p norm of a finite vector (max semantics for p = inf)."""
    a = np.abs(np.asarray(x, dtype=np.complex128)).ravel()
    if a.size == 0:
        return 0.0
    pe = as_exponent(p)
    if pe.is_inf:
        return float(a.max())
    if pe.p == 1.0:
        return float(a.sum())
    # scale by the max entry so tiny values do not underflow when powered
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if pe.p == 2.0:
        s = a / m
        return float(m * np.sqrt((s * s).sum()))
    return float(m * (((a / m) ** pe.p).sum() ** (1.0 / pe.p)))


def seq_norm(vectors: Sequence, p, item_norm=None) -> float:
    """l_p norm of a finite sequence of vectors, i.e. the l_p(E) norm.

    ``item_norm`` computes the norm of each entry; defaults to the
    Euclidean norm when entries are vectors of a Hilbert space stand-in
    and |.| for scalars.  For the sequence spaces used here the entries
    live in l_p themselves, so pass ``item_norm=lambda v: vec_norm(v, p)``.
    """
    if item_norm is None:
        item_norm = lambda v: float(np.linalg.norm(np.atleast_1d(v)))
    norms = np.array([item_norm(v) for v in vectors], dtype=float)
    return vec_norm(norms, p)


@dataclass
class TailedSequence:
    """Finite prefix of an l_p element plus an exact tail-norm bound.

    ``tail_norm`` bounds the l_p norm of the omitted infinite tail; zero
    means the object is a finitely supported sequence, exactly.
    """

    prefix: list = field(default_factory=list)
    p: Exponent = field(default_factory=lambda: Exponent(1.0))
    tail_norm: float = 0.0

    def __post_init__(self):
        self.p = as_exponent(self.p)
        self.prefix = [np.asarray(v, dtype=np.complex128) for v in self.prefix]
        if self.tail_norm < 0:
            raise ValueError("tail_norm must be nonnegative")

    def prefix_norms(self) -> np.ndarray:
        return np.array(
            [vec_norm(np.atleast_1d(v), self.p) for v in self.prefix], dtype=float
        )

    def norm_interval(self) -> tuple[float, float]:
        """Certified interval for the full l_p norm.

        Lower end is the exact prefix norm N; upper end is
        ``(N**p + tail_norm**p)**(1/p)`` (max semantics at p = inf).
        """
        lower = vec_norm(self.prefix_norms(), self.p)
        if self.tail_norm == 0.0:
            return lower, lower
        if self.p.is_inf:
            return lower, max(lower, self.tail_norm)
        pe = self.p.p
        upper = (lower ** pe + self.tail_norm ** pe) ** (1.0 / pe)
        return lower, upper


def lp_norm(s: TailedSequence) -> tuple[float, float]:
    return s.norm_interval()


def holder_pairing(alpha, x) -> complex:
    """Sum alpha_n * x_n for finite scalar sequences."""
    a = as_vec(alpha)
    b = as_vec(x)
    n = min(a.size, b.size)
    return complex(np.dot(a[:n], b[:n]))
