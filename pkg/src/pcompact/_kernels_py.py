"""Pure-numpy reference implementation of the evaluation kernels.

The compiled extension (``_kernels_cy``) mirrors these signatures; see
``backend`` for the selection logic.  Terms are stored CSR-style: term
``t`` owns the (variable, exponent) pairs in ``ptr[t]:ptr[t+1]``.
"""

from __future__ import annotations

import numpy as np


def batch_eval(ptr, vars_, exps, coeffs, outs, X, cod):
    """Evaluate a sparse homogeneous polynomial at many points.

    Parameters
    ----------
    ptr : (T+1,) int array, term boundaries into vars_/exps
    vars_, exps : (nnz,) int arrays, variable index and its exponent
    coeffs : (T,) complex array
    outs : (T,) int array, output coordinate of each term
    X : (N, d) complex array of evaluation points
    cod : output dimension

    Returns (N, cod) complex array.
    """
    X = np.ascontiguousarray(X, dtype=np.complex128)
    n = X.shape[0]
    Y = np.zeros((n, cod), dtype=np.complex128)
    for t in range(len(coeffs)):
        lo, hi = ptr[t], ptr[t + 1]
        mono = np.full(n, coeffs[t], dtype=np.complex128)
        for k in range(lo, hi):
            v, e = vars_[k], exps[k]
            col = X[:, v]
            if e == 1:
                mono = mono * col
            else:
                mono = mono * col ** int(e)
        Y[:, outs[t]] += mono
    return Y


def abs_pow_sum(Y, p):
    """Row-wise sum of |Y|**p (the core of batched l_p norms)."""
    A = np.abs(np.asarray(Y))
    return (A ** p).sum(axis=1)
