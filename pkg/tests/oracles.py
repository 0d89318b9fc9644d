"""Slow reference implementations written straight from the definitions.

Every function loops over explicit cubes with plain Python so it shares no
code path with the vectorized library.
"""
from __future__ import annotations

import math

import numpy as np


def cubes(depth):
    for k in range(depth + 1):
        for j in range(1 << k):
            yield k, j


def leaves(depth, cube):
    k, j = cube
    size = 1 << (depth - k)
    return range(j * size, (j + 1) * size)


def mean(values, depth, cube):
    idx = list(leaves(depth, cube))
    return sum(values[i] for i in idx) / len(idx)


def depth_of(values):
    return int(round(math.log2(len(values))))


def maximal(values):
    d = depth_of(values)
    out = [0.0] * len(values)
    for c in cubes(d):
        a = mean([abs(v) for v in values], d, c)
        for i in leaves(d, c):
            out[i] = max(out[i], a)
    return out


def maximal_local(values, cube):
    """``M_d(w chi_Q)`` restricted to ``Q`` (only subcubes of ``Q`` matter)."""
    d = depth_of(values)
    k0, j0 = cube
    out = {i: 0.0 for i in leaves(d, cube)}
    for k in range(k0, d + 1):
        span = 1 << (k - k0)
        for j in range(j0 * span, (j0 + 1) * span):
            a = mean(values, d, (k, j))
            for i in leaves(d, (k, j)):
                out[i] = max(out[i], a)
    return out


def ap(values, p):
    d = depth_of(values)
    sigma = [v ** (-1.0 / (p - 1)) for v in values]
    return max(mean(values, d, c) * mean(sigma, d, c) ** (p - 1) for c in cubes(d))


def hruscev(values):
    d = depth_of(values)
    logs = [math.log(v) for v in values]
    return max(mean(values, d, c) * math.exp(-mean(logs, d, c)) for c in cubes(d))


def wilson(values):
    d = depth_of(values)
    best = 0.0
    for c in cubes(d):
        loc = maximal_local(values, c)
        mass = sum(values[i] for i in leaves(d, c))
        best = max(best, sum(loc.values()) / mass)
    return best


def a1(values):
    d = depth_of(values)
    return max(mean(values, d, c) / min(values[i] for i in leaves(d, c)) for c in cubes(d))


def bp_pair(w, sigma, p):
    d = depth_of(w)
    logs = [math.log(s) for s in sigma]
    b = max(mean(w, d, c) * mean(sigma, d, c) ** p * math.exp(-mean(logs, d, c)) for c in cubes(d))
    a = max(mean(w, d, c) * mean(sigma, d, c) ** (p - 1) for c in cubes(d))
    return b, a


def bmo(f, w=None):
    """Inner infimum by trying every leaf value as the constant (the optimum is a data point)."""
    d = depth_of(f)
    w = [1.0] * len(f) if w is None else list(w)
    best = 0.0
    for c in cubes(d):
        idx = list(leaves(d, c))
        mass = sum(w[i] for i in idx)
        cost = min(sum(abs(f[i] - f[q]) * w[i] for i in idx) for q in idx) / mass
        best = max(best, cost)
    return best


def rhi_worst(values, r):
    d = depth_of(values)
    return max(mean([v ** r for v in values], d, c) ** (1 / r) / mean(values, d, c) for c in cubes(d))


def weighted_maximal(f, sigma):
    d = depth_of(f)
    out = [0.0] * len(f)
    for c in cubes(d):
        idx = list(leaves(d, c))
        a = sum(abs(f[i]) * sigma[i] for i in idx) / sum(sigma[i] for i in idx)
        for i in idx:
            out[i] = max(out[i], a)
    return out


def cz_cubes(f, lam):
    """Maximal cubes with average > lam, by checking every cube and its ancestors."""
    d = depth_of(f)
    picked = []
    for k, j in cubes(d):
        if mean(f, d, (k, j)) <= lam:
            continue
        if any(mean(f, d, (a, j >> (k - a))) > lam for a in range(k)):
            continue
        picked.append((k, j))
    return picked


def principal(sigma, root=(0, 0)):
    """Stopping cubes: maximal subcubes whose average exceeds twice the parent's."""
    d = depth_of(sigma)
    out = [root]
    stack = [root]
    while stack:
        top = stack.pop()
        ref = mean(sigma, d, top)
        k0, j0 = top
        found = []
        for k in range(k0 + 1, d + 1):
            span = 1 << (k - k0)
            for j in range(j0 * span, (j0 + 1) * span):
                if mean(sigma, d, (k, j)) <= 2 * ref:
                    continue
                if any(
                    mean(sigma, d, (a, j >> (k - a))) > 2 * ref for a in range(k0 + 1, k)
                ):
                    continue
                found.append((k, j))
        out.extend(found)
        stack.extend(found)
    return sorted(out)


def weak_norm(g, w):
    n = len(g)
    best = 0.0
    for lam in sorted(set(abs(x) for x in g)):
        # sup over lambda just below each level value
        mass = sum(w[i] for i in range(n) if abs(g[i]) >= lam) / n
        best = max(best, lam * mass)
    return best


def shift_matrix(depth, m, n, coeff_of, h_of, k_of, levels):
    """Dense matrix of ``sum_K |K|^{-1} sum_{I,J} c <f, h_I^J> k_J^I`` by brute force.

    ``coeff_of(k, a, i, j)``, ``h_of(k, a, i, j) -> (left, right)`` and
    ``k_of(k, a, j, i) -> (left, right)`` describe the block of ``(k, a)``.
    """
    N = 1 << depth
    T = np.zeros((N, N))
    leaf = 1.0 / N
    for k in levels:
        for a in range(1 << k):
            K_len = 2.0 ** -k
            for i in range(1 << m):
                I = (k + m, a * (1 << m) + i)
                Il, Ir = (I[0] + 1, 2 * I[1]), (I[0] + 1, 2 * I[1] + 1)
                for j in range(1 << n):
                    J = (k + n, a * (1 << n) + j)
                    Jl, Jr = (J[0] + 1, 2 * J[1]), (J[0] + 1, 2 * J[1] + 1)
                    c = coeff_of(k, a, i, j)
                    hl, hr = h_of(k, a, i, j)
                    kl, kr = k_of(k, a, j, i)
                    row = np.zeros(N)
                    if J[0] == depth:
                        # leaf-level profile must be constant on J
                        row[list(leaves(depth, J))] = kl
                    else:
                        row[list(leaves(depth, Jl))] = kl
                        row[list(leaves(depth, Jr))] = kr
                    col = np.zeros(N)
                    if I[0] == depth:
                        col[list(leaves(depth, I))] = hl * leaf
                    else:
                        col[list(leaves(depth, Il))] = hl * leaf
                        col[list(leaves(depth, Ir))] = hr * leaf
                    T += (c / K_len) * np.outer(row, col)
    return T


def petermichl_matrix(depth):
    """Petermichl shift from its definition: coefficients ``+1`` (left child) and ``-1`` (right child)."""
    return shift_matrix(
        depth,
        0,
        1,
        lambda k, a, i, j: 1.0 if j == 0 else -1.0,
        lambda *_: (1.0, -1.0),
        lambda *_: (1.0, -1.0),
        range(depth - 1),
    )


def weighted_operator_norm(T, w):
    """``sup ||Tf||_{L^2(w)} / ||f||_{L^2(w)}`` via the generalized eigenproblem."""
    from scipy.linalg import eigh

    W = np.diag(w)
    vals = eigh(T.T @ W @ T, W, eigvals_only=True)
    return float(np.sqrt(max(vals.max(), 0.0)))
