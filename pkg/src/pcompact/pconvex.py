"""p-convex hulls: membership certificates, size bounds and the
block/split amplification sequence.

A candidate hull is a finite generator sequence (x_n) with exponent p;
membership of a point x means x = sum alpha_n x_n with ||alpha||_q <= 1,
q the conjugate exponent.  The minimum-norm representation problem is
solved with certified primal/dual witnesses so that every bound produced
here can be re-verified independently of the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .errors import (
    DivergentSum,
    Infeasible,
    InvalidCertificate,
    MassExhausted,
    NotCovered,
)
from .lpcore import Exponent, as_exponent, as_vec, seq_norm, vec_norm

DEFAULT_EPS = 1e-3


# ---------------------------------------------------------------------------
# data types


@dataclass
class GeneratorSet:
    """Candidate generator sequence witnessing a p-convex hull."""

    gens: list
    p: Exponent

    def __post_init__(self):
        self.p = as_exponent(self.p)
        self.gens = [as_vec(g) for g in self.gens]
        if not self.gens:
            raise ValueError("generator set must be nonempty")
        dims = {g.size for g in self.gens}
        if len(dims) != 1:
            raise ValueError("generators must share one dimension")

    @property
    def q(self) -> Exponent:
        return self.p.conjugate()

    @property
    def dim(self) -> int:
        return self.gens[0].size

    def matrix(self) -> np.ndarray:
        """dim x n matrix with the generators as columns."""
        return np.stack(self.gens, axis=1)

    def lp_norm(self, ambient_p=None) -> float:
        """l_p(E) norm of the sequence; entry norms default to l_p."""
        ap = self.p if ambient_p is None else as_exponent(ambient_p)
        return seq_norm(self.gens, self.p, item_norm=lambda v: vec_norm(v, ap))


@dataclass
class MembershipCertificate:
    alpha: np.ndarray
    residual: float
    alpha_q_norm: float
    converged: bool = True

    def is_valid(self, tol: float) -> bool:
        return self.residual <= tol and self.alpha_q_norm <= 1.0 + tol

    def verify(self, G: GeneratorSet, x) -> tuple[float, float]:
        """Recompute (residual, alpha_q_norm) from scratch."""
        A = G.matrix()
        r = float(np.linalg.norm(A @ self.alpha - as_vec(x)))
        return r, vec_norm(self.alpha, G.q)


@dataclass
class DualCertificate:
    lam: np.ndarray
    value: float

    def verify(self, G: GeneratorSet) -> float:
        """Return ||A^H lam||_p; must be <= 1 + tol for validity."""
        return vec_norm(G.matrix().conj().T @ self.lam, G.p)


@dataclass
class BoundPair:
    lower: float
    upper: float
    lower_witness: object = None
    upper_witness: object = None

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise InvalidCertificate(
                f"lower bound {self.lower} exceeds upper bound {self.upper}"
            )


@dataclass
class DisjointCoordCertificate:
    """Pairs (point index, coordinate index) with distinct coordinates.

    Sums |K[i][j]|^p over the pairs; no generator sequence covering K can
    have l_p norm below the resulting value (Hoelder on each coordinate,
    then summing over the pairwise-distinct coordinates).
    """

    pairs: list
    p: Exponent

    def __post_init__(self):
        self.p = as_exponent(self.p)
        coords = [c for _, c in self.pairs]
        if len(coords) != len(set(coords)):
            raise InvalidCertificate("coordinate indices must be pairwise distinct")

    def value(self, K) -> float:
        pts = [as_vec(x) for x in K]
        s = 0.0
        for i, c in self.pairs:
            s += abs(pts[i][c]) ** self.p.p
        return s ** (1.0 / self.p.p)


# ---------------------------------------------------------------------------
# minimum-norm representation


def _lq_subgradient(alpha: np.ndarray, q: float) -> np.ndarray:
    n = vec_norm(alpha, q)
    if n == 0.0:
        return np.zeros_like(alpha)
    a = np.abs(alpha)
    if math.isinf(q):
        g = np.where(a >= a.max() * (1 - 1e-12), 1.0, 0.0)
        g = g / g.sum()
        return g * _phase(alpha)
    return (a / n) ** (q - 1.0) * _phase(alpha)


def _phase(alpha: np.ndarray) -> np.ndarray:
    a = np.abs(alpha)
    out = np.ones_like(alpha)
    nz = a > 0
    out[nz] = alpha[nz] / a[nz]
    return out


def _dual_from_primal(A: np.ndarray, x: np.ndarray, alpha: np.ndarray, q: float,
                      p: float) -> DualCertificate:
    """Fit lambda to the optimality condition and rescale to feasibility."""
    g = _lq_subgradient(alpha, q)
    lam, *_ = np.linalg.lstsq(A.conj().T, g, rcond=None)
    s = vec_norm(A.conj().T @ lam, p)
    if s <= 0:
        return DualCertificate(lam=np.zeros_like(x), value=0.0)
    lam = lam / s
    val = float(np.real(np.vdot(lam, x)))
    if val < 0:
        lam, val = -lam, -val
    return DualCertificate(lam=lam, value=val)


def _solve_weighted(A: np.ndarray, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    # minimize sum w_i |a_i|^2 subject to A a = x
    Winv = 1.0 / w
    M = (A * Winv[None, :]) @ A.conj().T
    mu = np.linalg.lstsq(M, x, rcond=None)[0]
    return Winv * (A.conj().T @ mu)


def _polish_smooth(A, x, alpha0, q):
    """L-BFGS polish of min ||alpha||_q over the affine solution set."""
    from scipy.linalg import null_space

    N = null_space(A)
    if N.size == 0:
        return alpha0
    n = alpha0.size
    k = N.shape[1]
    is_complex = np.iscomplexobj(A) and (
        np.abs(A.imag).max() > 0 or np.abs(x.imag).max() > 0
    )

    def unpack(t):
        if is_complex:
            return alpha0 + N @ (t[:k] + 1j * t[k:])
        return alpha0 + N @ t

    def fg(t):
        a = unpack(t)
        nrm = vec_norm(a, q)
        if nrm == 0:
            return 0.0, np.zeros_like(t)
        g_alpha = (np.abs(a) / nrm) ** (q - 1.0) * _phase(a)
        gN = N.conj().T @ g_alpha
        if is_complex:
            grad = np.concatenate([gN.real, gN.imag])
        else:
            grad = gN.real
        return nrm, grad

    t0 = np.zeros(2 * k if is_complex else k)
    res = scipy.optimize.minimize(fg, t0, jac=True, method="L-BFGS-B",
                                  options={"maxiter": 500, "ftol": 1e-14,
                                           "gtol": 1e-12})
    a = unpack(res.x)
    if vec_norm(a, q) < vec_norm(alpha0, q):
        return a
    return alpha0


def _min_norm_linf_real(A, x):
    """min ||alpha||_inf s.t. A alpha = x, real data, via an LP."""
    d, n = A.shape
    # variables [alpha, t]
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_eq = np.hstack([A, np.zeros((d, 1))])
    A_ub = np.vstack([
        np.hstack([np.eye(n), -np.ones((n, 1))]),
        np.hstack([-np.eye(n), -np.ones((n, 1))]),
    ])
    b_ub = np.zeros(2 * n)
    bounds = [(None, None)] * n + [(0, None)]
    res = scipy.optimize.linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=x,
                                 bounds=bounds, method="highs")
    if not res.success:
        raise Infeasible("infinity-norm LP reported infeasibility")
    alpha = res.x[:n]
    lam = np.asarray(res.eqlin.marginals, dtype=float)
    return alpha, -lam


def _min_norm_l1_real(A, x):
    """min ||alpha||_1 s.t. A alpha = x, real data, via an LP."""
    d, n = A.shape
    c = np.ones(2 * n)
    A_eq = np.hstack([A, -A])
    res = scipy.optimize.linprog(c, A_eq=A_eq, b_eq=x,
                                 bounds=[(0, None)] * 2 * n, method="highs")
    if not res.success:
        raise Infeasible("l1 LP reported infeasibility")
    alpha = res.x[:n] - res.x[n:]
    lam = np.asarray(res.eqlin.marginals, dtype=float)
    return alpha, -lam


def min_norm_representation(G: GeneratorSet, x, tol: float = 1e-9,
                            max_iter: int = 300):
    """Minimum l_q-norm coefficients representing x over the generators.

    Returns a (MembershipCertificate, DualCertificate) pair.  The primal
    witness satisfies A alpha = x up to ``residual``; the dual witness
    satisfies ||A^H lam||_p <= 1 so its value Re<lam, x> lower-bounds the
    optimum.  Raises Infeasible when x lies outside the generator span.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = as_vec(x)
    if x.size != G.dim:
        raise ValueError(f"dimension mismatch: {x.size} vs {G.dim}")
    A = G.matrix()
    q = G.q.p
    p = G.p.p

    # span membership is a rank question: check the unconstrained projection
    alpha_ls, _, _, _ = np.linalg.lstsq(A, x, rcond=None)
    base_resid = float(np.linalg.norm(A @ alpha_ls - x))
    if base_resid > tol * max(1.0, float(np.linalg.norm(x))):
        raise Infeasible(
            f"projection residual {base_resid:.3e} exceeds tolerance; "
            "point is outside the generator span"
        )

    is_real = float(np.abs(A.imag).max(initial=0.0)) == 0.0 and \
        float(np.abs(x.imag).max(initial=0.0)) == 0.0

    if math.isinf(q) and is_real:
        alpha, lam = _min_norm_linf_real(A.real, x.real)
        alpha = alpha.astype(np.complex128)
        dual = _rescaled_dual(A, x, lam.astype(np.complex128), p)
        return _package(A, x, alpha, q, dual, tol)

    if q == 1.0 and is_real:
        alpha, lam = _min_norm_l1_real(A.real, x.real)
        alpha = alpha.astype(np.complex128)
        dual = _rescaled_dual(A, x, lam.astype(np.complex128), p)
        return _package(A, x, alpha, q, dual, tol)

    if q == 2.0:
        alpha = np.linalg.pinv(A) @ x
        dual = _dual_from_primal(A, x, alpha, q, p)
        return _package(A, x, alpha, q, dual, tol)

    # iteratively reweighted least squares, complex-safe
    q_eff = min(q, 64.0) if math.isinf(q) else q
    alpha = alpha_ls
    eps = max(1.0, float(np.abs(alpha).max(initial=0.0)))
    damping = 1.0 if q_eff <= 2.0 else min(1.0, 2.0 / (q_eff - 1.0))
    best = None
    for it in range(max_iter):
        w = (np.abs(alpha) ** 2 + eps ** 2) ** ((q_eff - 2.0) / 2.0)
        w = np.clip(w, 1e-14, 1e14)
        try:
            alpha_new = _solve_weighted(A, x, w)
        except np.linalg.LinAlgError:
            break
        alpha = alpha + damping * (alpha_new - alpha)
        eps = max(eps * 0.7, 1e-14)
        if it % 10 == 9 or it == max_iter - 1:
            dual = _dual_from_primal(A, x, alpha, q_eff, p)
            gap = vec_norm(alpha, q) - dual.value
            if best is None or gap < best[0]:
                best = (gap, alpha.copy(), dual)
            if gap <= tol * max(1.0, dual.value):
                break
    if best is None:
        dual = _dual_from_primal(A, x, alpha, q_eff, p)
        best = (vec_norm(alpha, q) - dual.value, alpha, dual)

    gap, alpha, dual = best
    if gap > tol * max(1.0, dual.value) and not math.isinf(q):
        alpha = _polish_smooth(A, x, alpha, q)
        dual2 = _dual_from_primal(A, x, alpha, q, p)
        if dual2.value > dual.value:
            dual = dual2
    return _package(A, x, alpha, q, dual, tol)


def _rescaled_dual(A, x, lam, p):
    s = vec_norm(A.conj().T @ lam, p)
    if s <= 0:
        return DualCertificate(lam=lam, value=0.0)
    lam = lam / s
    val = float(np.real(np.vdot(lam, x)))
    if val < 0:
        lam, val = -lam, -val
    return DualCertificate(lam=lam, value=val)


def _package(A, x, alpha, q, dual, tol):
    resid = float(np.linalg.norm(A @ alpha - x))
    primal = MembershipCertificate(
        alpha=alpha, residual=resid, alpha_q_norm=vec_norm(alpha, q),
    )
    primal.converged = (primal.alpha_q_norm - dual.value) <= \
        10 * tol * max(1.0, dual.value)
    return primal, dual


# ---------------------------------------------------------------------------
# size bounds


def mp_upper(K, G: GeneratorSet, tol: float = 1e-8, ambient_p=None) -> BoundPair:
    """Certified upper bound on the hull size of K via the generators.

    Every point of K must pass the membership test; the bound is the
    l_p norm of the generator sequence.
    """
    certs = []
    for i, x in enumerate(K):
        primal, _ = min_norm_representation(G, x, tol=max(tol, 1e-12))
        if primal.residual > tol * max(1.0, vec_norm(x, 2)):
            raise NotCovered(
                f"point {i}: representation residual {primal.residual:.3e}",
                point_index=i,
            )
        if primal.alpha_q_norm > 1.0 + tol:
            raise NotCovered(
                f"point {i}: coefficient norm {primal.alpha_q_norm:.6f} > 1",
                point_index=i,
            )
        certs.append(primal)
    upper = G.lp_norm(ambient_p=ambient_p)
    return BoundPair(lower=0.0, upper=upper,
                     upper_witness={"generators": G, "memberships": certs})


def mp_lower_disjoint(K, cert: DisjointCoordCertificate) -> float:
    """Lower bound on the hull size of K from a disjoint-coordinate
    certificate; recomputed from K, never trusted from the caller."""
    pts = [as_vec(x) for x in K]
    for i, c in cert.pairs:
        if not (0 <= i < len(pts)) or not (0 <= c < pts[i].size):
            raise InvalidCertificate(f"pair ({i},{c}) out of range")
    return cert.value(K)


def best_disjoint_certificate(K, p) -> DisjointCoordCertificate:
    """Greedy certificate: per coordinate, the point maximizing |x_c|."""
    pts = [as_vec(x) for x in K]
    p = as_exponent(p)
    dim = pts[0].size
    M = np.abs(np.stack(pts, axis=0))  # (npts, dim)
    pairs = []
    for c in range(dim):
        i = int(np.argmax(M[:, c]))
        if M[i, c] > 0:
            pairs.append((i, c))
    if not pairs:
        pairs = [(0, 0)]
    return DisjointCoordCertificate(pairs=pairs, p=p)


# ---------------------------------------------------------------------------
# diagonal merge


@dataclass
class MergedGenerators:
    gens: GeneratorSet
    bound: float
    order: list = field(default_factory=list)


def _zigzag(sizes):
    """Boustrophedon enumeration of the (family, index) grid, matching the
    column-major arrow diagram: anti-diagonal s visits families in
    ascending order when s is even, descending when s is odd."""
    total = sum(sizes)
    emitted = 0
    out = []
    s = 2
    while emitted < total:
        js = range(1, s)
        cells = [(j, s - j) for j in js]
        if s % 2 == 1:
            cells.reverse()
        for j, n in cells:
            if j <= len(sizes) and n <= sizes[j - 1]:
                out.append((j, n))
                emitted += 1
        s += 1
    return out


def merge_diagonal(reps, eps: float = DEFAULT_EPS, p=None, cap: float = 1e12):
    """Interleave per-set generator sequences into one sequence covering
    the sumset {sum x_j : x_j in K_j}.

    ``reps`` is a list of (GeneratorSet, M_j) with M_j a certified upper
    bound for the j-th set.  Families are rescaled by M_j^{-1/q} (by 1
    when p = 1), enumerated along anti-diagonals, and globally scaled by
    (sum M_j)^{1/q}; the merged l_p norm is certified to stay below
    (sum M_j)^{1/q} (sum M_j + eps)^{1/p}.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not reps:
        raise ValueError("need at least one generator set")
    p = as_exponent(reps[0][0].p if p is None else p)
    q = p.conjugate()
    Ms = [float(M) for _, M in reps]
    S = sum(Ms)
    if S > cap:
        raise DivergentSum(f"sum of bounds {S} exceeds cap {cap}")
    for j, (G, M) in enumerate(reps, start=1):
        if M <= 0:
            raise ValueError("bounds must be positive")
        allowed = (M ** p.p + eps * M ** (p.p - 1.0) / 2 ** j) ** (1.0 / p.p)
        if G.lp_norm() > allowed * (1 + 1e-12):
            raise InvalidCertificate(
                f"family {j}: generator norm {G.lp_norm():.6g} exceeds "
                f"declared bound {M:.6g} beyond the eps slack"
            )

    lam = [1.0 if p.p == 1.0 else M ** (-1.0 / q.p) for M in Ms]
    scale = 1.0 if p.p == 1.0 else S ** (1.0 / q.p)
    order = _zigzag([len(G.gens) for G, _ in reps])
    merged = [scale * lam[j - 1] * reps[j - 1][0].gens[n - 1] for j, n in order]
    G = GeneratorSet(gens=merged, p=p)
    bound = scale * (S + eps) ** (1.0 / p.p)
    return MergedGenerators(gens=G, bound=bound, order=order)


# ---------------------------------------------------------------------------
# amplification sequence (block/split construction)


@dataclass
class GeometricTail:
    """Exact law for the omitted entries: entry N+k equals first*ratio**k
    for k = 0, 1, ... where N is the prefix length."""

    first: float
    ratio: float

    def __post_init__(self):
        if not (0 < self.ratio < 1) or self.first < 0:
            raise ValueError("need first >= 0 and ratio in (0,1)")

    def mass(self) -> float:
        return self.first / (1.0 - self.ratio)


@dataclass
class BetaBlock:
    sigma: tuple  # threshold index range (a, b), inclusive
    n_split: int  # 1-based index of the split entry
    t_split: float
    c: float  # growth factor for this block
    target: float  # S_sigma(1/2)
    recomputed: float  # directly recomputed block mass under beta^{-1}


@dataclass
class BetaReport:
    beta: np.ndarray  # over entries 1..n_last (completed blocks)
    blocks: list
    delta: float
    ratio_bound: float  # (1+delta)/(1-delta)
    completed_ratio_norm: float  # sum over completed blocks of beta^{-1}|x|
    telescoping_residual: float
    partial: bool = False


def _half_block_sum(a: int, b: int, r: float) -> float:
    # sum_{n=a}^{b} r^n, exact closed form
    return (r ** a - r ** (b + 1)) / (1.0 - r)


def beta_construct(prefix, tail: GeometricTail | None = None,
                   eps: float = DEFAULT_EPS, max_blocks: int = 12,
                   max_terms: int = 100000) -> BetaReport:
    """Amplification sequence beta in (0,1] with sum |x_n|/beta_n bounded
    by (1+eps) times the input mass, built block by block.

    The input must have strictly positive prefix entries; the tail, when
    present, is an exact geometric law whose entries are materialized on
    demand.  Without a tail (finite support) no amplification is needed
    and beta is identically one on the support.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    xs = [float(x) for x in prefix]
    if any(x <= 0 for x in xs):
        raise ValueError("prefix entries must be strictly positive")

    total = sum(xs) + (tail.mass() if tail is not None else 0.0)
    if total <= 0:
        raise ValueError("zero mass input")
    delta = 0.999 * eps / (2.0 + eps)
    rr = (1.0 + delta) / 2.0

    if tail is None:
        beta = np.ones(len(xs))
        return BetaReport(beta=beta, blocks=[], delta=delta,
                          ratio_bound=(1 + delta) / (1 - delta),
                          completed_ratio_norm=sum(xs) / total,
                          telescoping_residual=0.0)

    # normalize to unit mass and materialize entries lazily
    n_prefix = len(xs)

    def entry(n):  # 1-based
        while len(xs) < n:
            k = len(xs) - n_prefix
            xs.append(tail.first * tail.ratio ** k)
        return xs[n - 1] / total

    blocks = []
    carry = 0.0  # (1 - t) * x at the previous split
    nxt = 1  # next unconsumed entry
    m_prev = 0  # last threshold index consumed
    cs = []
    raw = []  # per-block raw data for finalizing beta
    try:
        for _ in range(max_blocks + 1):
            # smallest block end with S_sigma(1/2) above the pending mass
            first_mass = carry + entry(nxt)
            m = m_prev + 1
            while _half_block_sum(m_prev + 1, m, 0.5) <= first_mass:
                m += 1
                if m - m_prev > 64:
                    raise MassExhausted("block threshold cannot be met")
            target = _half_block_sum(m_prev + 1, m, 0.5)
            # accumulate entries until the target is reached
            acc = carry
            n = nxt - 1
            inner = []
            while True:
                n += 1
                if n > max_terms:
                    raise MassExhausted("materialization cap hit")
                xv = entry(n)
                if acc + xv >= target:
                    t = (target - acc) / xv
                    break
                acc += xv
                inner.append(n)
            c = _half_block_sum(m_prev + 1, m, rr) / target
            raw.append({"sigma": (m_prev + 1, m), "n_split": n, "t": t,
                        "c": c, "target": target, "inner": inner,
                        "carry_in": carry, "first": nxt})
            cs.append(c)
            carry = (1.0 - t) * entry(n)
            nxt = n + 1
            m_prev = m
    except MassExhausted:
        if len(raw) < 2:
            raise
        # fall through with the blocks built so far, flagged partial
        partial = True
    else:
        partial = False

    # the final raw block only exists to finalize beta at the previous split
    usable = raw[:-1]
    if not usable:
        raise MassExhausted("no complete block", partial=raw)

    n_last = usable[-1]["n_split"]
    inv_beta = np.ones(n_last)
    for j, blk in enumerate(usable):
        c = blk["c"]
        c_next = raw[j + 1]["c"]
        for n in blk["inner"]:
            inv_beta[n - 1] = c
        ns = blk["n_split"]
        inv_beta[ns - 1] = blk["t"] * c + (1.0 - blk["t"]) * c_next

    beta = 1.0 / inv_beta

    # direct recomputation, block by block
    finalized = []
    total_mass = 0.0
    for blk in usable:
        c = blk["c"]
        s = blk["carry_in"] * c
        for n in range(blk["first"], blk["n_split"]):
            s += c * entry(n)
        s += blk["t"] * c * entry(blk["n_split"])
        total_mass += s
        finalized.append(BetaBlock(
            sigma=blk["sigma"], n_split=blk["n_split"], t_split=blk["t"],
            c=c, target=blk["target"], recomputed=s,
        ))

    # telescoping identity: completed block sums plus the closed-form
    # remainder reproduce rr/(1-rr) = (1+delta)/(1-delta)
    m_last = usable[-1]["sigma"][1]
    partial_sum = sum(_half_block_sum(a, b, rr) for (a, b) in
                      (blk["sigma"] for blk in usable))
    remainder = rr ** (m_last + 1) / (1.0 - rr)
    residual = abs(partial_sum + remainder - rr / (1.0 - rr))

    return BetaReport(beta=beta, blocks=finalized, delta=delta,
                      ratio_bound=(1 + delta) / (1 - delta),
                      completed_ratio_norm=total_mass,
                      telescoping_residual=residual, partial=partial)


def beta_construct_lp(prefix, tail: GeometricTail | None, p,
                      eps: float = DEFAULT_EPS, **kw) -> BetaReport:
    """General-exponent wrapper: run the unit-mass construction on
    z_n = x_n^p / ||x||_p^p and take the p-th root of the result."""
    p = as_exponent(p)
    if p.p == 1.0:
        return beta_construct(prefix, tail, eps, **kw)
    xs = np.asarray([float(v) for v in prefix])
    z = xs ** p.p
    ztail = None
    if tail is not None:
        ztail = GeometricTail(first=tail.first ** p.p, ratio=tail.ratio ** p.p)
    rep = beta_construct(z, ztail, eps, **kw)
    rep.beta = rep.beta ** (1.0 / p.p)
    return rep
