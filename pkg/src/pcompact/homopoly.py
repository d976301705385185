"""Homogeneous polynomials between coordinate spaces.

Coefficients are stored sparsely: a term is (output coordinate, monomial)
where the monomial is a sorted tuple of (variable, exponent) pairs with
exponents summing to the degree.  Evaluation goes through the compiled
kernel backend; coefficient-level operations (directional slices, Taylor
components, linearization) are exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import DegreeTooLow, DimensionCap, DimensionMismatch, IndexOutOfRange
from .lpcore import as_exponent, as_vec, vec_norm
from .pconvex import (
    BoundPair,
    GeneratorSet,
    best_disjoint_certificate,
    min_norm_representation,
    mp_lower_disjoint,
)

Mono = tuple  # tuple of (var, exp) pairs, sorted by var


def _norm_mono(mono) -> Mono:
    d = {}
    for v, e in mono:
        if e:
            d[int(v)] = d.get(int(v), 0) + int(e)
    return tuple(sorted(d.items()))


def mono_degree(mono: Mono) -> int:
    return sum(e for _, e in mono)


def mono_from_dense(multi) -> Mono:
    return tuple((v, int(e)) for v, e in enumerate(multi) if e)


def mono_to_dense(mono: Mono, dim: int) -> list:
    out = [0] * dim
    for v, e in mono:
        out[v] = e
    return out


def multinomial(m: int, mono: Mono) -> int:
    c = math.factorial(m)
    for _, e in mono:
        c //= math.factorial(e)
    return c


@dataclass
class HomPolynomial:
    """m-homogeneous polynomial C^dom -> C^cod in coefficient form."""

    m: int
    dom_dim: int
    cod_dim: int
    terms: dict  # (out, mono) -> complex coefficient
    tag: str | None = None
    tag_data: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (out, mono), c in self.terms.items():
            mono = _norm_mono(mono)
            if mono_degree(mono) != self.m:
                raise ValueError(
                    f"term {mono} has degree {mono_degree(mono)}, expected {self.m}"
                )
            if not (0 <= out < self.cod_dim):
                raise ValueError(f"output coordinate {out} out of range")
            if c != 0:
                clean[(out, mono)] = complex(c)
        self.terms = clean
        self._compiled = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, m, dom_dim, cod_dim):
        return cls(m=m, dom_dim=dom_dim, cod_dim=cod_dim, terms={})

    @classmethod
    def from_dense_terms(cls, m, dom_dim, cod_dim, dense_terms, **kw):
        """dense_terms: iterable of (out, multi_index_list, coeff)."""
        terms = {}
        for out, multi, c in dense_terms:
            key = (int(out), mono_from_dense(multi))
            terms[key] = terms.get(key, 0) + complex(c)
        return cls(m=m, dom_dim=dom_dim, cod_dim=cod_dim, terms=terms, **kw)

    @classmethod
    def rank_one(cls, xprime, m, y):
        """P(x) = <xprime, x>^m * y, tagged for the analytic fast path."""
        xp = as_vec(xprime)
        yv = as_vec(y)
        terms = {}
        for mono, c in _power_monos(xp, m):
            for out in range(yv.size):
                if yv[out] != 0:
                    key = (out, mono)
                    terms[key] = terms.get(key, 0) + c * yv[out]
        return cls(m=m, dom_dim=xp.size, cod_dim=yv.size, terms=terms,
                   tag="rank_one", tag_data={"xprime": xp, "y": yv})

    # -- evaluation ----------------------------------------------------------

    def _compile(self):
        if self._compiled is None:
            items = sorted(self.terms.items())
            ptr = [0]
            vars_, exps, coeffs, outs = [], [], [], []
            for (out, mono), c in items:
                for v, e in mono:
                    vars_.append(v)
                    exps.append(e)
                ptr.append(len(vars_))
                coeffs.append(c)
                outs.append(out)
            self._compiled = (
                np.asarray(ptr, dtype=np.int64),
                np.asarray(vars_, dtype=np.int64),
                np.asarray(exps, dtype=np.int64),
                np.asarray(coeffs, dtype=np.complex128),
                np.asarray(outs, dtype=np.int64),
            )
        return self._compiled

    def eval_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.complex128)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.dom_dim:
            raise DimensionMismatch(
                f"points have dim {X.shape[1]}, polynomial domain {self.dom_dim}"
            )
        ptr, vars_, exps, coeffs, outs = self._compile()
        return backend.batch_eval(ptr, vars_, exps, coeffs, outs, X, self.cod_dim)

    def __call__(self, x) -> np.ndarray:
        return self.eval_batch(as_vec(x))[0]

    # -- algebra -------------------------------------------------------------

    def scale(self, c) -> "HomPolynomial":
        return HomPolynomial(
            m=self.m, dom_dim=self.dom_dim, cod_dim=self.cod_dim,
            terms={k: v * c for k, v in self.terms.items()},
        )

    def add(self, other: "HomPolynomial") -> "HomPolynomial":
        if (self.m, self.dom_dim, self.cod_dim) != \
                (other.m, other.dom_dim, other.cod_dim):
            raise DimensionMismatch("polynomial shapes differ")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return HomPolynomial(m=self.m, dom_dim=self.dom_dim,
                             cod_dim=self.cod_dim, terms=terms)


def _power_monos(xp: np.ndarray, m: int):
    """Monomials of <xp, x>^m with multinomial coefficients, sparse in the
    support of xp."""
    support = [v for v in range(xp.size) if xp[v] != 0]
    out = []

    def rec(idx, left, mono, coeff):
        if idx == len(support):
            if left == 0:
                out.append((tuple(mono), coeff))
            return
        v = support[idx]
        if idx == len(support) - 1:
            rec(idx + 1, 0, mono + ([(v, left)] if left else []),
                coeff * xp[v] ** left / math.factorial(left))
            return
        for e in range(left + 1):
            rec(idx + 1, left - e, mono + ([(v, e)] if e else []),
                coeff * xp[v] ** e / math.factorial(e))

    if m == 0:
        return [((), 1.0 + 0j)]
    rec(0, m, [], complex(math.factorial(m)))
    return out


def eval_poly(P: HomPolynomial, x) -> np.ndarray:
    return P(x)


# ---------------------------------------------------------------------------
# directional slice (companion polynomial)


def companion(P: HomPolynomial, a) -> HomPolynomial:
    """The (m-1)-homogeneous slice x -> sym(P)(a, x, ..., x).

    Computed exactly on coefficients via the directional derivative
    (1/m) d/dt P(x + t a) |_{t=0}.
    """
    if P.m < 1:
        raise DegreeTooLow("companion needs degree >= 1")
    a = as_vec(a)
    if a.size != P.dom_dim:
        raise DimensionMismatch("direction dimension mismatch")
    terms = {}
    for (out, mono), c in P.terms.items():
        for i, (v, e) in enumerate(mono):
            if a[v] == 0:
                continue
            if e == 1:
                new = mono[:i] + mono[i + 1:]
            else:
                new = mono[:i] + ((v, e - 1),) + mono[i + 1:]
            key = (out, new)
            terms[key] = terms.get(key, 0) + c * e * a[v] / P.m
    return HomPolynomial(m=P.m - 1, dom_dim=P.dom_dim, cod_dim=P.cod_dim,
                         terms=terms)


def companion_filter_batch(P: HomPolynomial, a, X) -> np.ndarray:
    """Slice values via the weighted roots-of-unity filter:
    sum_{j=1..m} r^j P((m-1) r^j x + a) / (m^2 (m-1)^(m-1))."""
    if P.m < 2:
        raise DegreeTooLow("filter needs degree >= 2")
    a = as_vec(a)
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 1:
        X = X[None, :]
    m = P.m
    acc = np.zeros((X.shape[0], P.cod_dim), dtype=np.complex128)
    for j in range(1, m + 1):
        r = cmath.exp(2j * cmath.pi * j / m)
        acc += r * P.eval_batch((m - 1) * r * X + a[None, :])
    return acc / (m ** 2 * (m - 1) ** (m - 1))


def companion_filter_batch_printed(P: HomPolynomial, a, X) -> np.ndarray:
    """Uncorrected filter variant (no spectral weight, j up to m-1); kept
    so its output can be logged next to the corrected one."""
    if P.m < 2:
        raise DegreeTooLow("filter needs degree >= 2")
    a = as_vec(a)
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 1:
        X = X[None, :]
    m = P.m
    acc = np.zeros((X.shape[0], P.cod_dim), dtype=np.complex128)
    for j in range(1, m):
        r = cmath.exp(2j * cmath.pi * j / m)
        acc += P.eval_batch((m - 1) * r * X + a[None, :])
    return acc / (m ** 2 * (m - 1) ** (m - 1))


def taylor_component(P: HomPolynomial, a, l: int) -> HomPolynomial:
    """Degree-l component of the expansion of P at a:
    binom(m, m-l) * iterated slice in the direction a."""
    if not (0 <= l <= P.m):
        raise IndexOutOfRange(f"l={l} outside 0..{P.m}")
    Q = P
    for _ in range(P.m - l):
        Q = companion(Q, a)
    return Q.scale(math.comb(P.m, P.m - l))


# ---------------------------------------------------------------------------
# probes


def make_probes(dim: int, dom_p=1, n_sphere: int = 512, seed: int = 0,
                include_pairs: bool = True, basis_cap: int | None = None):
    """Probe points on/in the unit ball of the chosen domain norm:
    all signed basis vectors, normalized two-coordinate combinations, and
    seeded samples of the unit sphere."""
    dom_p = as_exponent(dom_p)
    rng = np.random.default_rng(seed)
    probes = []
    nb = dim if basis_cap is None else min(dim, basis_cap)
    for i in range(nb):
        e = np.zeros(dim, dtype=np.complex128)
        e[i] = 1.0
        probes.append(e.copy())
        e[i] = -1.0
        probes.append(e.copy())
    if include_pairs and dim >= 2:
        scale = 2.0 ** (-1.0 if dom_p.p == 1.0 else -1.0 / dom_p.p)
        if dom_p.is_inf:
            scale = 1.0
        for i in range(min(nb, 8)):
            for j in range(i + 1, min(nb, 8)):
                for si in (1.0, -1.0):
                    for sj in (1.0, -1.0):
                        e = np.zeros(dim, dtype=np.complex128)
                        e[i], e[j] = si * scale, sj * scale
                        probes.append(e)
    if n_sphere > 0:
        Z = rng.standard_normal((n_sphere, dim))
        for z in Z:
            v = z.astype(np.complex128)
            nrm = vec_norm(v, dom_p)
            if nrm > 0:
                probes.append(v / nrm)
    return probes


def sup_norm_probe(P: HomPolynomial, dom_p=1, cod_p=2, n_sphere: int = 512,
                   seed: int = 0) -> float:
    """Probe-based lower estimate of the supremum norm over the dom ball."""
    probes = make_probes(P.dom_dim, dom_p, n_sphere, seed)
    Y = P.eval_batch(np.stack(probes))
    pe = as_exponent(cod_p)
    if pe.is_inf:
        vals = np.abs(Y).max(axis=1)
    else:
        vals = backend.abs_pow_sum(Y, pe.p) ** (1.0 / pe.p)
    return float(vals.max())


# ---------------------------------------------------------------------------
# kappa bounds


@dataclass
class KappaBound:
    poly: HomPolynomial
    bounds: BoundPair
    sample_budget: int
    loose: bool = False


def monomial_generators(P: HomPolynomial, p, dom_p=1) -> GeneratorSet:
    """Analytic cover of the ball image by monomial coefficient columns.

    For x in the unit l_1 ball the coefficient sequence (x^alpha)_alpha has
    l_1 norm at most 1 (multinomial theorem), hence lies in every B_lq;
    the columns therefore witness an upper bound for any p.  Other domain
    norms are handled through the l_1 embedding constant d^(1-1/dom_p).
    """
    p = as_exponent(p)
    dom_p = as_exponent(dom_p)
    cols = {}
    for (out, mono), c in P.terms.items():
        v = cols.setdefault(mono, np.zeros(P.cod_dim, dtype=np.complex128))
        v[out] += c
    if not cols:
        gens = [np.zeros(P.cod_dim, dtype=np.complex128)]
    else:
        if dom_p.p == 1.0:
            scale = 1.0
        elif dom_p.is_inf:
            scale = float(P.dom_dim) ** P.m
        else:
            scale = float(P.dom_dim) ** (P.m * (1.0 - 1.0 / dom_p.p))
        gens = [scale * cols[k] for k in sorted(cols)]
    return GeneratorSet(gens=gens, p=p)


def membership_coefficients(P: HomPolynomial, x) -> np.ndarray:
    """Coefficients (x^alpha) aligned with monomial_generators' columns."""
    x = as_vec(x)
    monos = sorted({mono for (_, mono) in P.terms}) or [()]
    out = np.empty(len(monos), dtype=np.complex128)
    for i, mono in enumerate(monos):
        v = 1.0 + 0j
        for var, e in mono:
            v *= x[var] ** e
        out[i] = v
    return out


def kappa_bounds(P: HomPolynomial, p, dom_p=1, n_sphere: int = 512,
                 seed: int = 0, gap_flag_ratio: float = 10.0) -> KappaBound:
    """Certified sandwich for the hull size of the unit-ball image.

    Lower side: disjoint-coordinate certificate over probe images.
    Upper side: analytic generator cover (rank-one segment or monomial
    columns, with family-specific probes when the polynomial is tagged).
    """
    p = as_exponent(p)
    dom_p = as_exponent(dom_p)

    if P.tag == "rank_one":
        xp = P.tag_data["xprime"]
        y = P.tag_data["y"]
        dual = dom_p.conjugate()
        c = vec_norm(xp, dual) ** P.m
        G = GeneratorSet(gens=[c * y], p=p)
        upper = G.lp_norm()
        # the image is the segment {t * c * y : |t| <= 1}; probe at a
        # maximizer of the functional
        probes = [_dual_maximizer(xp, dom_p)]
    else:
        G = monomial_generators(P, p, dom_p=dom_p)
        upper = G.lp_norm()
        # diagonal families carry the exact power sum of their generator
        # norms; evaluating the closed form avoids re-rounding |c|**p
        if not p.is_inf and dom_p.p == 1.0 and \
                P.tag_data.get("built_p") == p.p and \
                "gens_norm_pow_p" in P.tag_data:
            upper = P.tag_data["gens_norm_pow_p"] ** (1.0 / p.p)
        probes = make_probes(P.dom_dim, dom_p, n_sphere, seed)
        if P.tag == "B":
            probes = probes + _family_b_probes(P)

    images = [P(x) for x in probes]
    cert = best_disjoint_certificate(images, p)
    lower = mp_lower_disjoint(images, cert)
    bounds = BoundPair(lower=lower, upper=max(upper, lower),
                       lower_witness={"probes": probes, "certificate": cert},
                       upper_witness={"generators": G})
    loose = lower > 0 and upper / max(lower, 1e-300) > gap_flag_ratio
    return KappaBound(poly=P, bounds=bounds, sample_budget=n_sphere, loose=loose)


def _dual_maximizer(xp: np.ndarray, dom_p) -> np.ndarray:
    """Unit vector x with <xp, x> = ||xp||_(dual of dom_p)."""
    a = np.abs(xp)
    ph = np.ones_like(xp)
    nz = a > 0
    ph[nz] = np.conj(xp[nz]) / a[nz]
    if dom_p.p == 1.0:
        x = np.zeros_like(xp)
        i = int(np.argmax(a))
        x[i] = ph[i]
        return x
    if dom_p.is_inf:
        return ph
    q = dom_p.conjugate().p
    w = a ** (q - 1.0)
    nrm = vec_norm(w, dom_p)
    return ph * w / nrm if nrm > 0 else np.zeros_like(xp)


def _family_b_probes(P: HomPolynomial):
    sigma = P.tag_data.get("sigma", [])
    m = P.m
    eps = 2.0 / m if m > 2 else 1.0
    probes = []
    for j in sigma:
        x = np.zeros(P.dom_dim, dtype=np.complex128)
        x[0] = 1.0 - eps
        x[j] = eps
        probes.append(x)
    return probes


def verify_upper_witness(P: HomPolynomial, G: GeneratorSet, probes,
                         tol: float = 1e-8):
    """Run the membership solver on probe images against the witness."""
    residuals, norms = [], []
    for x in probes:
        primal, _ = min_norm_representation(G, P(x), tol=max(tol, 1e-12))
        residuals.append(primal.residual)
        norms.append(primal.alpha_q_norm)
    return {"max_residual": max(residuals), "max_alpha_norm": max(norms),
            "valid": max(residuals) <= tol and max(norms) <= 1 + tol}


# ---------------------------------------------------------------------------
# linearization


def linearize(P: HomPolynomial, cap: int = 5000):
    """Matrix of the induced linear map on the symmetric m-th power.

    Returns (matrix, monomial basis, lift) with lift(x) the coefficient
    vector of x^m; the contract matrix @ lift(x) == P(x) holds exactly.
    """
    n_basis = math.comb(P.dom_dim + P.m - 1, P.m)
    if n_basis > cap:
        raise DimensionCap(f"symmetric power dimension {n_basis} exceeds {cap}")
    basis = sorted(_all_monos(P.dom_dim, P.m))
    index = {mono: i for i, mono in enumerate(basis)}
    M = np.zeros((P.cod_dim, n_basis), dtype=np.complex128)
    for (out, mono), c in P.terms.items():
        M[out, index[mono]] += c / multinomial(P.m, mono)

    def lift(x):
        x = as_vec(x)
        v = np.empty(n_basis, dtype=np.complex128)
        for i, mono in enumerate(basis):
            t = complex(multinomial(P.m, mono))
            for var, e in mono:
                t *= x[var] ** e
            v[i] = t
        return v

    return M, basis, lift


def _all_monos(dim: int, m: int):
    if m == 0:
        yield ()
        return
    if dim == 1:
        yield ((0, m),)
        return

    def rec(var, left, acc):
        if var == dim - 1:
            yield tuple(acc + ([(var, left)] if left else []))
            return
        for e in range(left, -1, -1):
            yield from rec(var + 1, left - e, acc + ([(var, e)] if e else []))

    yield from rec(0, m, [])


# ---------------------------------------------------------------------------
# quasi-nuclearity certificates


@dataclass
class QNuclearCertificate:
    """Functionals dominating an operator coordinatewise:
    ||T x||^p <= sum_n |<x'_n, x>|^p on every probe."""

    functionals: list
    p: object

    def __post_init__(self):
        self.p = as_exponent(self.p)
        self.functionals = [as_vec(f) for f in self.functionals]

    def nu_upper(self, dual_p) -> float:
        norms = [vec_norm(f, dual_p) for f in self.functionals]
        return vec_norm(np.asarray(norms), self.p)


def qnuclear_check(T, cert: QNuclearCertificate, probes, cod_p,
                   dual_p, tol: float = 1e-9):
    """Check the domination inequality on the probes and report the
    certificate's sequence norm (an upper bound for the quasi-nuclear
    norm when valid)."""
    T = np.asarray(T, dtype=np.complex128)
    cod_p = as_exponent(cod_p)
    p = cert.p.p
    worst = -math.inf
    for x in probes:
        x = as_vec(x)
        lhs = vec_norm(T @ x, cod_p) ** p
        rhs = sum(abs(np.sum(f * x)) ** p for f in cert.functionals)
        worst = max(worst, lhs - rhs)
    return {
        "valid": worst <= tol,
        "max_violation": worst,
        "nu_upper": cert.nu_upper(dual_p),
    }


# ---------------------------------------------------------------------------
# holomorphy-type inequality report


def holotype_check(P: HomPolynomial, a, p, dom_p=1, n_sphere: int = 128,
                   seed: int = 0):
    """Report the geometric re-expansion inequalities for the slice and
    for every Taylor component of P at a.

    Each row compares a certified lower bound for the component against
    the constant times the certified upper bound for P; a violation would
    falsify one of the certificates, so callers treat it as an error.
    """
    p = as_exponent(p)
    a = as_vec(a)
    anorm = vec_norm(a, dom_p)
    kb = kappa_bounds(P, p, dom_p=dom_p, n_sphere=n_sphere, seed=seed)
    rows = []
    Pa = companion(P, a)
    if Pa.m >= 0:
        kb_a = kappa_bounds(Pa, p, dom_p=dom_p, n_sphere=n_sphere, seed=seed)
        bound = math.e * anorm * kb.bounds.upper
        rows.append({"which": "slice", "lower": kb_a.bounds.lower,
                     "allowed": bound, "ok": kb_a.bounds.lower <= bound + 1e-9})
    m = P.m
    for j in range(1, m + 1):
        Pj = taylor_component(P, a, j)
        kb_j = kappa_bounds(Pj, p, dom_p=dom_p, n_sphere=n_sphere, seed=seed)
        bound = (2.0 * math.e) ** m * anorm ** (m - j) * kb.bounds.upper
        rows.append({"which": f"component_{j}", "lower": kb_j.bounds.lower,
                     "allowed": bound, "ok": kb_j.bounds.lower <= bound + 1e-9})
    return {"base_bounds": kb, "a_norm": anorm, "rows": rows,
            "ok": all(r["ok"] for r in rows)}
