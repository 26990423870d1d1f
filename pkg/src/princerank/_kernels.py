"""Hot loops for the law of motion and discounted utility.

Two interchangeable backends live here. The numba backend compiles the
explicit loops with ``@njit``; the numpy backend evaluates the same
quantities with array operations. Set ``PRINCERANK_DISABLE_NUMBA=1`` before
import to force the numpy path (also used automatically when numba is not
installed).
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("PRINCERANK_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

# status codes returned by the discounted-sum kernels
OK = 0
CAP_REACHED = 1

# per-term relative rounding allowance added to the analytic tail so the
# reported bound also covers floating-point summation error
_ROUND = 8.0 * np.finfo(np.float64).eps


# --------------------------------------------------------------------------
# numpy backend
# --------------------------------------------------------------------------

def weighted_matrix_np(T, beta, mu, lam):
    M = np.where(T < 0.0, mu, beta)
    np.fill_diagonal(M, lam)
    return T * M


def step_np(W, s):
    # products summed in index order, like the loop kernel; BLAS matvec may
    # fuse multiply-adds per row and break exact symmetries, which unstable
    # modes such as mutual destruction then amplify
    out = (W * s).sum(axis=1)
    out[out < 0.0] = 0.0
    return out


def utility_np(s, alpha):
    m = s.max() if s.size else 0.0
    if m <= 0.0:
        return np.zeros_like(s)
    x = s / m
    return x**alpha * m ** (alpha - 2.0) / np.dot(x, x)


def discounted_np(W, s0, alpha, delta, ratio, tol, cap, fixed):
    """Return (values, horizon, tail, status) for one structure.

    ``ratio`` is delta * g**(alpha - 2) for the structure's growth factor g.
    The reported tail is the analytic bound on the omitted terms plus a
    rounding allowance for the terms summed. When ``fixed`` > 0 exactly that
    many steps are summed and the tail is still reported.
    """
    s = s0.copy()
    acc = np.zeros_like(s)
    disc = 1.0
    geo = ratio / (1.0 - ratio)
    limit = fixed if fixed > 0 else cap
    tail = np.inf
    for t in range(1, limit + 1):
        s = step_np(W, s)
        disc *= delta
        acc += disc * utility_np(s, alpha)
        tail = (1.0 - delta) * (s.sum() ** (alpha - 2.0) * disc * geo + t * _ROUND * acc.max())
        if fixed <= 0 and tail < tol:
            return (1.0 - delta) * acc, t, tail, OK
    status = OK if fixed > 0 else CAP_REACHED
    return (1.0 - delta) * acc, limit, tail, status


def discounted_focal_batch_np(Ws, s0, focal, alpha, delta, ratios, tol, cap):
    """Focal agent's discounted utility for a stack of weighted matrices.

    All candidates are advanced together until every one has met its own
    tail bound, so each value is at least as accurate as a solo run.
    """
    k, n, _ = Ws.shape
    S = np.broadcast_to(s0, (k, n)).copy()
    acc = np.zeros(k)
    geo = ratios / (1.0 - ratios)
    disc = 1.0
    for t in range(1, cap + 1):
        S = (Ws * S[:, None, :]).sum(axis=2)
        S[S < 0.0] = 0.0
        disc *= delta
        m = S.max(axis=1)
        alive = m > 0.0
        u = np.zeros(k)
        if alive.any():
            X = S[alive] / m[alive, None]
            u[alive] = (
                X[:, focal] ** alpha * m[alive] ** (alpha - 2.0) / np.einsum("ki,ki->k", X, X)
            )
        acc += disc * u
        tail = (1.0 - delta) * (S.sum(axis=1) ** (alpha - 2.0) * disc * geo + t * _ROUND * acc)
        if np.all(tail < tol):
            return (1.0 - delta) * acc, OK
    return (1.0 - delta) * acc, CAP_REACHED


# --------------------------------------------------------------------------
# numba backend
# --------------------------------------------------------------------------

def _weighted_matrix_loop(T, beta, mu, lam):
    n = T.shape[0]
    W = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                W[i, j] = lam * T[i, j]
            elif T[i, j] < 0.0:
                W[i, j] = mu * T[i, j]
            else:
                W[i, j] = beta * T[i, j]
    return W


def _step_loop(W, s):
    n = s.shape[0]
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += W[i, j] * s[j]
        out[i] = acc if acc > 0.0 else 0.0
    return out


def _utility_loop(s, alpha):
    n = s.shape[0]
    u = np.zeros(n)
    m = 0.0
    for i in range(n):
        if s[i] > m:
            m = s[i]
    if m <= 0.0:
        return u
    den = 0.0
    for i in range(n):
        x = s[i] / m
        den += x * x
    scale = m ** (alpha - 2.0) / den
    for i in range(n):
        u[i] = (s[i] / m) ** alpha * scale
    return u


def _discounted_loop(W, s0, alpha, delta, ratio, tol, cap, fixed):
    n = s0.shape[0]
    s = s0.copy()
    acc = np.zeros(n)
    disc = 1.0
    geo = ratio / (1.0 - ratio)
    limit = fixed if fixed > 0 else cap
    tail = np.inf
    for t in range(1, limit + 1):
        s = _step_loop(W, s)
        disc *= delta
        u = _utility_loop(s, alpha)
        total = 0.0
        top = 0.0
        for i in range(n):
            acc[i] += disc * u[i]
            total += s[i]
            if acc[i] > top:
                top = acc[i]
        tail = (1.0 - delta) * (total ** (alpha - 2.0) * disc * geo + t * _ROUND * top)
        if fixed <= 0 and tail < tol:
            return (1.0 - delta) * acc, t, tail, 0
    status = 0 if fixed > 0 else 1
    return (1.0 - delta) * acc, limit, tail, status


def _discounted_focal_batch_loop(Ws, s0, focal, alpha, delta, ratios, tol, cap):
    k = Ws.shape[0]
    out = np.empty(k)
    status = 0
    for c in range(k):
        vals, _, _, st = _discounted_loop(Ws[c], s0, alpha, delta, ratios[c], tol, cap, 0)
        out[c] = vals[focal]
        if st != 0:
            status = st
    return out, status


# wrapped whenever numba is importable so the benchmark can time both paths;
# compilation is lazy, so a disabled backend costs nothing
HAVE_NUMBA = numba is not None
if HAVE_NUMBA:
    _jit = numba.njit(cache=True)
    _weighted_matrix_loop = _jit(_weighted_matrix_loop)
    _step_loop = _jit(_step_loop)
    _utility_loop = _jit(_utility_loop)
    _discounted_loop = _jit(_discounted_loop)
    _discounted_focal_batch_loop = _jit(_discounted_focal_batch_loop)


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def weighted_matrix(T, beta, mu, lam):
    if USE_NUMBA:
        return _weighted_matrix_loop(T, float(beta), float(mu), float(lam))
    return weighted_matrix_np(T, beta, mu, lam)


def step(W, s):
    if USE_NUMBA:
        return _step_loop(W, s)
    return step_np(W, s)


def utility(s, alpha):
    if USE_NUMBA:
        return _utility_loop(s, float(alpha))
    return utility_np(s, alpha)


def discounted(W, s0, alpha, delta, ratio, tol, cap, fixed=0):
    if USE_NUMBA:
        return _discounted_loop(W, s0, float(alpha), float(delta), float(ratio), float(tol), int(cap), int(fixed))
    return discounted_np(W, s0, alpha, delta, ratio, tol, cap, fixed)


def discounted_focal_batch(Ws, s0, focal, alpha, delta, ratios, tol, cap):
    if USE_NUMBA:
        return _discounted_focal_batch_loop(
            np.ascontiguousarray(Ws), s0, int(focal), float(alpha), float(delta),
            np.ascontiguousarray(ratios, dtype=np.float64), float(tol), int(cap),
        )
    return discounted_focal_batch_np(Ws, s0, focal, alpha, delta, ratios, tol, cap)
