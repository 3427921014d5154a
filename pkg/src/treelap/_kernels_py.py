"""NumPy implementations of the hot kernels.

This module mirrors the compiled extension ``treelap._kernels`` function for
function; :mod:`treelap.kernels` picks whichever is available.  Everything
here works on plain float scalars and contiguous float64 arrays -- no package
types -- so both backends stay trivially interchangeable.

Tree layout: breadth-first heap order, children of node ``i`` at
``m*i + 1 .. m*i + m``.  Child sums run left-to-right within each node (the
reshape/sum below reduces sequentially for the small m used here), matching
the fixed reduction order of the compiled backend.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _level_starts(m: int, depth: int) -> np.ndarray:
    starts = np.empty(depth + 2, dtype=np.int64)
    starts[0] = 0
    size = 1
    for k in range(depth + 1):
        starts[k + 1] = starts[k] + size
        size *= m
    return starts


def _inv_p_powers(p: float, depth: int) -> np.ndarray:
    return p ** -np.arange(depth + 1, dtype=float)


# ---------------------------------------------------------------------------
# Shooting recurrence
# ---------------------------------------------------------------------------

def shoot_trace(beta: float, p: float, lam: float, depth: int):
    """Level recurrence from u0 = 1, u1 = 1 - lam, through the ghost level.

    Runs in the cancellation-free difference form: with
    g_k = (u_k - u_{k+1}) * p**(-k), the level equation is exactly
    g_k = g_{k-1} + lam * u_k / (1 - beta), g_0 = lam, so positive
    quantities accumulate and the decaying tail keeps full relative
    precision (the textbook three-term form hits a floating fixed point
    once the true level decrement drops below one ulp).

    Returns ``(u, first_nonpos)``; ``u`` has depth + 2 entries (ghost
    included), ``first_nonpos`` is -1 when the trace stays positive.
    Entries after an early sign change are left at zero.
    """
    u = np.zeros(depth + 2)
    u[0] = 1.0
    g = lam
    u[1] = 1.0 - lam
    if u[1] <= 0.0:
        return u, 1
    one_m_beta = 1.0 - beta
    pk = p
    for k in range(1, depth + 1):
        g = g + lam * u[k] / one_m_beta
        u[k + 1] = u[k] - pk * g
        if u[k + 1] <= 0.0:
            return u, k + 1
        pk *= p
    return u, -1


def eigenfunction_tail(beta: float, p: float, lam: float, depth: int) -> np.ndarray:
    """Level eigenvector at ``lam`` from a backward sweep off the ghost level.

    The backward direction is the stable one for the decaying solution, so
    the reported function stays strictly positive and strictly decreasing all
    the way down instead of drowning in the bounded-mode admixture that any
    forward trace at a bisection midpoint carries.  Normalized to u_0 = 1.
    """
    y = np.zeros(depth + 2)
    y[depth] = 1.0
    one_m_beta = 1.0 - beta
    for k in range(depth, 0, -1):
        y[k - 1] = ((1.0 - lam * p ** k) * y[k] - beta * y[k + 1]) / one_m_beta
    u = np.empty(depth + 1)
    y0 = y[0]
    pk = 1.0
    for k in range(depth + 1):
        u[k] = pk * y[k] / y0
        pk *= p
    return u


# ---------------------------------------------------------------------------
# Operator application
# ---------------------------------------------------------------------------

def chain_laplacian(u: np.ndarray, beta: float, p: float) -> np.ndarray:
    depth = u.size - 1
    invp = _inv_p_powers(p, depth)
    ghost = np.concatenate([u, [0.0]])
    out = np.empty_like(u)
    out[0] = ghost[1] - u[0]
    if depth >= 1:
        out[1:] = (beta * u[:-1] + (1.0 - beta) * ghost[2:] - u[1:]) * invp[1:]
    return out


def tree_laplacian(u: np.ndarray, m: int, depth: int, beta: float, p: float) -> np.ndarray:
    starts = _level_starts(m, depth)
    invp = _inv_p_powers(p, depth)
    out = np.empty_like(u)
    csum = np.zeros_like(u)
    for k in range(depth):
        csum[starts[k]:starts[k + 1]] = (
            u[starts[k + 1]:starts[k + 2]].reshape(-1, m).sum(axis=1))
    out[0] = csum[0] / m - u[0]
    for k in range(1, depth + 1):
        sl = slice(starts[k], starts[k + 1])
        par = np.repeat(u[starts[k - 1]:starts[k]], m)
        out[sl] = (beta * par + (1.0 - beta) / m * csum[sl] - u[sl]) * invp[k]
    return out


# ---------------------------------------------------------------------------
# Backward Euler evolution
# ---------------------------------------------------------------------------

def _condensation(beta: float, p: float, dt: float, depth: int):
    """Per-level coefficients of the one-shot leaf-to-root elimination of
    (I - dt * Delta): parent coupling, child-sum gain (times m already
    folded out), and the condensed diagonal."""
    invp = _inv_p_powers(p, depth)
    diag = 1.0 + dt * invp
    diag[0] = 1.0 + dt
    cpar = dt * invp * beta
    cpar[0] = 0.0
    gchm = dt * invp * (1.0 - beta)   # child gain summed over the m children
    gchm[0] = dt
    dmod = np.empty(depth + 1)
    dmod[depth] = diag[depth]
    for k in range(depth - 1, -1, -1):
        dmod[k] = diag[k] - gchm[k] * cpar[k + 1] / dmod[k + 1]
    return cpar, gchm, dmod


def chain_implicit_evolve(f: np.ndarray, beta: float, p: float,
                          dt: float, nsteps: int) -> np.ndarray:
    depth = f.size - 1
    cpar, gchm, dmod = _condensation(beta, p, dt, depth)
    states = np.empty((nsteps + 1, f.size))
    states[0] = f
    u = f.copy()
    for n in range(1, nsteps + 1):
        rhs = u.copy()
        for k in range(depth - 1, -1, -1):
            rhs[k] += gchm[k] * rhs[k + 1] / dmod[k + 1]
        u[0] = rhs[0] / dmod[0]
        for k in range(1, depth + 1):
            u[k] = (rhs[k] + cpar[k] * u[k - 1]) / dmod[k]
        states[n] = u
    return states


def tree_implicit_evolve(f: np.ndarray, m: int, depth: int, beta: float, p: float,
                         dt: float, nsteps: int) -> np.ndarray:
    starts = _level_starts(m, depth)
    cpar, gchm, dmod = _condensation(beta, p, dt, depth)
    states = np.empty((nsteps + 1, f.size))
    states[0] = f
    u = f.copy()
    for n in range(1, nsteps + 1):
        rhs = u.copy()
        for k in range(depth - 1, -1, -1):
            csum = rhs[starts[k + 1]:starts[k + 2]].reshape(-1, m).sum(axis=1)
            rhs[starts[k]:starts[k + 1]] += (gchm[k] / m) * csum / dmod[k + 1]
        u[0] = rhs[0] / dmod[0]
        for k in range(1, depth + 1):
            par = np.repeat(u[starts[k - 1]:starts[k]], m)
            u[starts[k]:starts[k + 1]] = (rhs[starts[k]:starts[k + 1]] + cpar[k] * par) / dmod[k]
        states[n] = u
    return states


# ---------------------------------------------------------------------------
# Fixed-point iteration on the evolution integral operator
# ---------------------------------------------------------------------------

def _panel_weights(q: np.ndarray, dt: float):
    """Exact integrals of the exponential kernel against the linear hat
    weights on one panel: I += w0 * g(left) + w1 * g(right) after decaying
    the running integral by exp(-q dt).  Series branch kills the z - (1 -
    e^{-z}) cancellation for small z."""
    z = q * dt
    dec = np.exp(-z)
    em = -np.expm1(-z)
    small = z < 0.02
    zs = np.where(small, z, 1.0)
    series = 0.5 - zs / 6.0 + zs**2 / 24.0 - zs**3 / 120.0 + zs**4 / 720.0
    frac = np.where(small, series, (z - em) / np.where(small, 1.0, z * z))
    w1 = dt * frac
    w0 = em / q - w1
    return dec, w0, w1


def _picard_sweeps(f, states, g_of, q, dt, nsteps, tol, max_iter):
    dec, w0, w1 = _panel_weights(q, dt)
    t = np.arange(nsteps + 1) * dt
    ef = np.exp(-np.outer(t, q))
    U = states
    diff = np.inf
    for it in range(1, max_iter + 1):
        G = g_of(U) + q[None, :] * U
        Unew = np.empty_like(U)
        Unew[0] = f
        integral = np.zeros_like(q)
        for j in range(1, nsteps + 1):
            integral = integral * dec + w0 * G[j - 1] + w1 * G[j]
            Unew[j] = ef[j] * f + integral
        diff = float(np.max(np.abs(Unew - U)))
        U = Unew
        if diff <= tol:
            return U, it, diff
    return U, max_iter, diff


def tree_picard_solve(f: np.ndarray, m: int, depth: int, beta: float, p: float,
                      dt: float, nsteps: int, tol: float, max_iter: int):
    starts = _level_starts(m, depth)
    invp = _inv_p_powers(p, depth)
    q = np.empty(f.size)
    for k in range(depth + 1):
        q[starts[k]:starts[k + 1]] = invp[k]

    def g_of(U):
        out = np.empty_like(U)
        csum = np.zeros_like(U)
        for k in range(depth):
            csum[:, starts[k]:starts[k + 1]] = (
                U[:, starts[k + 1]:starts[k + 2]].reshape(U.shape[0], -1, m).sum(axis=2))
        out[:, 0] = csum[:, 0] / m - U[:, 0]
        for k in range(1, depth + 1):
            sl = slice(starts[k], starts[k + 1])
            par = np.repeat(U[:, starts[k - 1]:starts[k]], m, axis=1)
            out[:, sl] = (beta * par + (1.0 - beta) / m * csum[:, sl] - U[:, sl]) * invp[k]
        return out

    U0 = np.tile(f, (nsteps + 1, 1))
    return _picard_sweeps(f, U0, g_of, q, dt, nsteps, tol, max_iter)


def chain_picard_solve(f: np.ndarray, beta: float, p: float,
                       dt: float, nsteps: int, tol: float, max_iter: int):
    depth = f.size - 1
    invp = _inv_p_powers(p, depth)

    def g_of(U):
        ghost = np.zeros((U.shape[0], U.shape[1] + 1))
        ghost[:, :-1] = U
        out = np.empty_like(U)
        out[:, 0] = ghost[:, 1] - U[:, 0]
        if depth >= 1:
            out[:, 1:] = (beta * U[:, :-1] + (1.0 - beta) * ghost[:, 2:] - U[:, 1:]) * invp[1:]
        return out

    U0 = np.tile(f, (nsteps + 1, 1))
    return _picard_sweeps(f, U0, g_of, invp.copy(), dt, nsteps, tol, max_iter)
