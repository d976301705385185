"""Two explicit families of Taylor models on sequence space showing the
limits of pointwise compactness-by-summability.

Family A has a finite radius window collapsing to 0: per-degree lower
certificates grow like m**(m/(2p)).  Family B has unit radius at the
origin yet fails at the first basis vector, witnessed by a divergent
coefficient series with exactly linear partial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionCap
from .lpcore import as_exponent
from .homopoly import HomPolynomial
from .taylor import (
    ClosedFormComponent,
    DivergenceCertificate,
    TailLaw,
    TaylorModel,
)

DEFAULT_DIM_CAP = 153  # 1 + 2 + 6 + 24 + 120: blocks for degrees up to 5


@dataclass
class SigmaPartition:
    """Consecutive disjoint index blocks of factorial sizes 1, 2, 6, 24, ...

    Zero-based: block m (m >= 1) holds the m! coordinates starting right
    after block m-1.
    """

    m_max: int

    def start(self, m: int) -> int:
        return sum(math.factorial(k) for k in range(1, m))

    def block(self, m: int) -> range:
        if not (1 <= m <= self.m_max):
            raise IndexError(f"block {m} outside 1..{self.m_max}")
        s = self.start(m)
        return range(s, s + math.factorial(m))

    @property
    def total(self) -> int:
        return self.start(self.m_max + 1)

    def blocks(self):
        return [self.block(m) for m in range(1, self.m_max + 1)]


def example_A_kappa(m: int, p) -> float:
    """Closed form m**(m/(2p)): both the lower certificate value and the
    generator-cover upper bound coincide there."""
    pe = as_exponent(p)
    return float(m) ** (m / (2.0 * pe.p))


def example_B_lower(m: int) -> float:
    """Probe value (1-eps)**(m-2) * eps**2 at eps = 2/m (0**0 = 1)."""
    eps = 2.0 / m
    base = 1.0 - eps
    return (base ** (m - 2) if m > 2 else 1.0) * eps ** 2


def _diag_power_component(m: int, dim: int, sigma: range, coeff: float,
                          lead_exp: int, tag: str, p,
                          norm_pow_p: float) -> HomPolynomial:
    """coeff * sum_{j in sigma} x_0**lead_exp * x_j**(m - lead_exp) e_j.

    ``norm_pow_p`` is the exact value of sum_j |coeff|**p (the p-th power
    of the generator-sequence norm), carried so bound computations can
    use the closed form instead of re-rounding |coeff|**p.
    """
    terms = {}
    for j in sigma:
        if lead_exp == 0:
            mono = ((j, m),)
        elif j == 0:
            mono = ((0, m),)
        else:
            mono = ((0, lead_exp), (j, m - lead_exp))
        terms[(j, mono)] = terms.get((j, mono), 0) + coeff
    return HomPolynomial(m=m, dom_dim=dim, cod_dim=dim, terms=terms,
                         tag=tag,
                         tag_data={"sigma": list(sigma),
                                   "built_p": as_exponent(p).p,
                                   "gens_norm_pow_p": norm_pow_p})


def build_example_A(m_max: int, p, dim_cap: int = DEFAULT_DIM_CAP) -> TaylorModel:
    """Degrees 1..m_max, component m = (m**(m/2)/m!)**(1/p) times the
    diagonal power map over block m.  Attaches the power-law divergence
    certificate lower(m) = m**(m/(2p))."""
    pe = as_exponent(p)
    sigma = SigmaPartition(m_max)
    if sigma.total > dim_cap:
        raise DimensionCap(
            f"blocks through degree {m_max} need dimension {sigma.total} "
            f"> cap {dim_cap}")
    dim = sigma.total
    comps = []
    for m in range(1, m_max + 1):
        coeff = (float(m) ** (m / 2.0) / math.factorial(m)) ** (1.0 / pe.p)
        comps.append(_diag_power_component(
            m, dim, sigma.block(m), coeff, lead_exp=0, tag="A", p=pe,
            norm_pow_p=float(m) ** (m / 2.0)))
    cert = DivergenceCertificate(
        kind="power",
        data={
            "exponent": 1.0 / (2.0 * pe.p),
            "lowers": {m: example_A_kappa(m, pe) for m in range(2, m_max + 1)},
        },
    )
    return TaylorModel(base_point=np.zeros(dim), components=comps,
                       tail=None, family_tag="A", divergence=cert)


def build_example_B(m_max: int, p, dim_cap: int = DEFAULT_DIM_CAP) -> TaylorModel:
    """Degrees 2..m_max, component m = (1/m!)**(1/p) x_0**(m-2) times the
    diagonal square map over block m; its generator cover has size exactly
    1, so the tail law is c1 = c2 = 1.

    Components whose block exceeds the dimension cap are carried in
    closed form (upper 1, lower the probe value): their certificates need
    no coefficients, so the degree window is not capped.
    """
    if m_max < 2:
        raise ValueError("family B starts at degree 2")
    pe = as_exponent(p)
    m_fit = 1
    while m_fit < m_max and SigmaPartition(m_fit + 1).total <= dim_cap:
        m_fit += 1
    sigma = SigmaPartition(max(m_fit, 2))
    if sigma.total > dim_cap:
        raise DimensionCap(
            f"even the degree-2 block needs dimension {sigma.total} "
            f"> cap {dim_cap}")
    dim = sigma.total
    comps = []
    for m in range(2, m_max + 1):
        if m <= m_fit:
            coeff = (1.0 / math.factorial(m)) ** (1.0 / pe.p)
            comps.append(_diag_power_component(
                m, dim, sigma.block(m), coeff, lead_exp=m - 2, tag="B", p=pe,
                norm_pow_p=1.0))
        else:
            comps.append(ClosedFormComponent(
                degree=m, lower=example_B_lower(m), upper=1.0,
                note="closed-form block beyond the dimension cap"))
    return TaylorModel(base_point=np.zeros(dim), components=comps,
                       tail=TailLaw(c1=1.0, c2=1.0), family_tag="B")


def example_B_partial_sums(m_max: int) -> list:
    """Partial sums sum_{2<=m<=M} |block m| * (1/m!) for M = 2..m_max.

    Each block contributes m! * (1/m!) = 1, so the M-th partial sum is
    exactly M - 1: the coefficient series of the degree-2 component of
    the re-expansion at e_1 diverges linearly.
    """
    sums = []
    acc = 0.0
    for m in range(2, m_max + 1):
        acc += math.factorial(m) * (1.0 / math.factorial(m))
        sums.append(acc)
    return sums


def example_B_at_e1_certificate(p, m_max: int) -> DivergenceCertificate:
    """Linear-partial-sum witness that no summable generator sequence can
    cover the degree-2 image at base point e_1."""
    if m_max < 3:
        raise ValueError("need at least two block contributions")
    return DivergenceCertificate(
        kind="partial_sums",
        data={"partial_sums": example_B_partial_sums(m_max), "rate": 1.0,
              "p": as_exponent(p).p},
    )


def build_example_B_at_e1(m_max: int, p,
                          dim_cap: int = DEFAULT_DIM_CAP) -> TaylorModel:
    """Family-B model re-based at e_1 carrying the divergence certificate;
    components are carried in closed form (only the certificate matters
    at this base point)."""
    comps = [ClosedFormComponent(degree=m, lower=example_B_lower(m), upper=1.0,
                                 note="re-based closed form")
             for m in range(2, m_max + 1)]
    sigma2 = SigmaPartition(2)
    base = np.zeros(sigma2.total)
    base[0] = 1.0
    return TaylorModel(base_point=base, components=comps,
                       tail=TailLaw(c1=1.0, c2=1.0), family_tag="B",
                       divergence=example_B_at_e1_certificate(p, max(m_max, 3)))
