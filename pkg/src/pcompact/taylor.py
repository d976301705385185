"""Taylor models of entire functions at desk scale.

A model is a finite list of homogeneous components at a base point plus
an optional declared tail law kappa_bound(m) <= c1 * c2**m for the
degrees beyond the window.  Every "for all m" statement is split into an
exact finite-window check and a closed-form tail sum, so verdicts are
certificates, never extrapolations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DivergentSeminorm, RadiusExceeded
from .lpcore import INF, as_vec, vec_norm
from .homopoly import HomPolynomial, kappa_bounds, taylor_component
from .pconvex import BoundPair


@dataclass
class ClosedFormComponent:
    """Stand-in for a component whose bound pair is known in closed form
    (used when materializing the coefficients would exceed the dimension
    cap; the certificates need no linear algebra)."""

    degree: int
    lower: float
    upper: float
    note: str = ""


@dataclass
class TailLaw:
    c1: float
    c2: float


@dataclass
class DivergenceCertificate:
    """Witness that the per-degree lower bounds grow too fast for any
    finite radius.

    kind "power": lower(m) >= m**(exponent*m), so lower(m)**(1/m) is
    unbounded.  kind "partial_sums": an explicit divergent coefficient
    series with linear partial sums (the slice-at-a-point obstruction).
    """

    kind: str
    data: dict = field(default_factory=dict)

    def verify(self) -> bool:
        if self.kind == "power":
            expo = self.data["exponent"]
            lowers = self.data.get("lowers", {})
            return expo > 0 and all(
                abs(lo - m ** (expo * m)) <= 1e-9 * max(1.0, lo)
                for m, lo in lowers.items()
            )
        if self.kind == "partial_sums":
            sums = self.data["partial_sums"]
            rate = self.data.get("rate", 1.0)
            diffs = np.diff(np.asarray(sums, dtype=float))
            return len(sums) >= 2 and np.all(diffs >= rate * (1 - 1e-12))
        return False


class Verdict(Enum):
    CERTIFIED_YES = "yes"
    CERTIFIED_NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PCompactVerdict:
    verdict: Verdict
    eps: float | None = None
    certificate: object = None


@dataclass
class TaylorModel:
    base_point: np.ndarray
    components: list  # HomPolynomial or ClosedFormComponent, degrees increasing
    tail: TailLaw | None = None
    family_tag: str | None = None
    divergence: DivergenceCertificate | None = None

    def __post_init__(self):
        self.base_point = as_vec(self.base_point)
        degs = [component_degree(c) for c in self.components]
        if degs != sorted(degs) or len(set(degs)) != len(degs):
            raise ValueError("component degrees must be strictly increasing")

    @property
    def max_degree(self) -> int:
        return max((component_degree(c) for c in self.components), default=0)


def component_degree(comp) -> int:
    if isinstance(comp, ClosedFormComponent):
        return comp.degree
    return comp.m


def component_bounds(comp, p, dom_p=1, n_sphere: int = 256,
                     seed: int = 0) -> BoundPair:
    if isinstance(comp, ClosedFormComponent):
        return BoundPair(lower=comp.lower, upper=comp.upper)
    kb = kappa_bounds(comp, p, dom_p=dom_p, n_sphere=n_sphere, seed=seed)
    return kb.bounds


@dataclass
class RadiusWindow:
    window_lower: float  # certified lower estimate of the radius over the window
    window_upper: float  # upper estimate from the lower bounds
    per_degree: list  # (degree, BoundPair)


def radius_window(tm: TaylorModel, p, dom_p=1, n_sphere: int = 256,
                  seed: int = 0) -> RadiusWindow:
    """Finite-window proxy for the reciprocal growth rate of the
    per-degree bounds.  The true limsup is explicitly not computed: with
    only finitely many degrees the estimates bracket the radius over the
    window and nothing more."""
    per = []
    hi_rate = 0.0  # max upper^{1/m}
    lo_rate = 0.0  # max lower^{1/m}
    for comp in tm.components:
        m = component_degree(comp)
        if m == 0:
            continue
        b = component_bounds(comp, p, dom_p, n_sphere, seed)
        per.append((m, b))
        if b.upper > 0:
            hi_rate = max(hi_rate, b.upper ** (1.0 / m))
        if b.lower > 0:
            lo_rate = max(lo_rate, b.lower ** (1.0 / m))
    window_lower = INF if hi_rate == 0.0 else 1.0 / hi_rate
    window_upper = INF if lo_rate == 0.0 else 1.0 / lo_rate
    return RadiusWindow(window_lower=window_lower, window_upper=window_upper,
                        per_degree=per)


def pcompact_at(tm: TaylorModel, p, dom_p=1, n_sphere: int = 256,
                seed: int = 0) -> PCompactVerdict:
    """Certified verdict on pointwise compactness-by-summability at the
    model's base point.

    NO requires a structural divergence certificate (finite windows can
    never certify an infinite growth rate); YES requires a radius witness
    for the window combined with a convergent tail."""
    if tm.divergence is not None and tm.divergence.verify():
        return PCompactVerdict(Verdict.CERTIFIED_NO, certificate=tm.divergence)

    rw = radius_window(tm, p, dom_p, n_sphere, seed)
    if tm.tail is None:
        # finite-degree model: finitely many certified summable images
        eps = 1.0 if math.isinf(rw.window_lower) else 0.5 * rw.window_lower
        return PCompactVerdict(Verdict.CERTIFIED_YES, eps=eps)
    if tm.tail.c2 > 0:
        eps = 0.5 * min(rw.window_lower, 1.0 / tm.tail.c2)
        if eps > 0 and eps * tm.tail.c2 < 1.0:
            return PCompactVerdict(Verdict.CERTIFIED_YES, eps=eps)
    return PCompactVerdict(Verdict.INCONCLUSIVE)


def ball_image_bound(tm: TaylorModel, eps: float, p, dom_p=1,
                     n_sphere: int = 256, seed: int = 0) -> float:
    """Upper bound on the hull size of the image of the eps-ball around
    the base point: sum of eps^m per-degree upper bounds plus the
    closed-form tail."""
    rw = radius_window(tm, p, dom_p, n_sphere, seed)
    if eps >= rw.window_lower:
        raise RadiusExceeded(
            f"eps={eps} is not below the window radius estimate "
            f"{rw.window_lower}")
    total = 0.0
    for m, b in rw.per_degree:
        total += eps ** m * b.upper
    if tm.tail is not None:
        M = tm.max_degree
        r = eps * tm.tail.c2
        if r >= 1.0:
            raise RadiusExceeded("tail series diverges at this eps")
        total += tm.tail.c1 * r ** (M + 1) / (1.0 - r)
    return total


@dataclass
class NullSequence:
    """Positive sequence decreasing to zero: explicit prefix, then
    geometric decay from the last prefix entry."""

    prefix: list
    ratio: float = 0.5

    def __call__(self, m: int) -> float:
        if m < len(self.prefix):
            return float(self.prefix[m])
        last = float(self.prefix[-1]) if self.prefix else 1.0
        return last * self.ratio ** (m - len(self.prefix) + 1)


def seminorm_e(tm: TaylorModel, K, a: NullSequence, p, dom_p=1,
               n_sphere: int = 256, seed: int = 0) -> float:
    """Upper evaluation of the inflation-family seminorm
    sum_m (size of the degree-m image of K + a_m B).

    Uses the scaling law: the degree-m image of a ball of radius c has
    size c^m kappa, with c = max norm over K plus a_m."""
    if tm.base_point.size and vec_norm(tm.base_point, dom_p) != 0.0:
        raise ValueError("seminorm is defined for models based at 0")
    k_max = max((vec_norm(k, dom_p) for k in K), default=0.0)
    total = 0.0
    degrees = []
    for comp in tm.components:
        m = component_degree(comp)
        b = component_bounds(comp, p, dom_p, n_sphere, seed)
        c = k_max + a(m)
        total += c ** m * b.upper
        degrees.append(m)
    if tm.tail is not None:
        M = tm.max_degree
        c_tail = k_max + a(M + 1)  # a is nonincreasing beyond the window
        r = c_tail * tm.tail.c2
        if r >= 1.0:
            raise DivergentSeminorm(
                f"tail ratio {r} >= 1; the seminorm series fails its tail test")
        total += tm.tail.c1 * r ** (M + 1) / (1.0 - r)
    return total


def summability_at_zero(tm: TaylorModel, K, eps: float, p, dom_p=1,
                        n_sphere: int = 256, seed: int = 0) -> bool:
    """Summability criterion over inflated compact sets: true when the
    upper bounds give a convergent series (which certifies pointwise
    compactness-by-summability everywhere the model is valid); false when
    the lower bounds already diverge or no convergent tail exists."""
    if tm.divergence is not None and tm.divergence.verify():
        return False
    k_max = max((vec_norm(k, dom_p) for k in K), default=0.0)
    c = k_max + eps
    lower_terms = []
    for comp in tm.components:
        m = component_degree(comp)
        b = component_bounds(comp, p, dom_p, n_sphere, seed)
        lower_terms.append(c ** m * b.lower)
    if tm.tail is None:
        return True
    if len(lower_terms) >= 2 and lower_terms[-1] > lower_terms[0] and \
            lower_terms[-1] > 1.0:
        return False  # window lower bounds are already growing
    return c * tm.tail.c2 < 1.0


def reexpand(tm: TaylorModel, new_base, max_degree: int | None = None) -> TaylorModel:
    """Re-expansion of a finite-degree model at a new base point, degree
    by degree via exact Taylor components."""
    shift = as_vec(new_base) - tm.base_point
    mats = [c for c in tm.components if isinstance(c, HomPolynomial)]
    if len(mats) != len(tm.components):
        raise ValueError("re-expansion needs materialized components")
    M = tm.max_degree if max_degree is None else max_degree
    out = []
    for l in range(M + 1):
        acc = None
        for P in mats:
            if P.m < l:
                continue
            comp = taylor_component(P, shift, l)
            acc = comp if acc is None else acc.add(comp)
        if acc is not None and acc.terms:
            out.append(acc)
    return TaylorModel(base_point=as_vec(new_base), components=out,
                       tail=tm.tail, family_tag=tm.family_tag)
