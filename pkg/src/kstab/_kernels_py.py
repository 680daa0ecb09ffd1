"""Pure-Python (numpy) float volume kernel, used when the compiled core is absent.

Points are processed in bulk: at each round they are grouped by their current
support mask, and each group's Gram system is solved in one batched call.
"""

from __future__ import annotations

import numpy as np

TOL = 1e-10


def grid_volumes(gram: np.ndarray, curves: np.ndarray, extra: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Volumes of the divisors in ``points`` (one coefficient row each).

    ``curves`` are the candidate support curves, ``extra`` the further
    classes a positive part must meet nonnegatively (including ``-K``).
    """
    G = np.asarray(gram, dtype=float)
    C = np.asarray(curves, dtype=float).reshape(-1, G.shape[0])
    X = np.asarray(extra, dtype=float).reshape(-1, G.shape[0])
    D = np.atleast_2d(np.asarray(points, dtype=float))
    n_pts, m = D.shape[0], C.shape[0]
    gc = C @ G
    cc = gc @ C.T
    b = D @ gc.T
    mask = b < -TOL
    coef = np.zeros((n_pts, m))
    alive = np.ones(n_pts, dtype=bool)
    for _ in range(m + 1):
        coef[:] = 0.0
        groups, inverse = np.unique(mask, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        for g, s in enumerate(groups):
            if not s.any():
                continue
            idx = np.nonzero((inverse == g) & alive)[0]
            if idx.size == 0:
                continue
            sub = cc[np.ix_(s, s)]
            if np.linalg.eigvalsh(sub).max() >= -TOL:
                alive[idx] = False
                continue
            a = np.linalg.solve(sub, b[np.ix_(idx, np.nonzero(s)[0])].T).T
            bad = (a < -TOL).any(axis=1)
            alive[idx[bad]] = False
            coef[np.ix_(idx, np.nonzero(s)[0])] = a
        pc = b - coef @ cc
        new = (pc < -TOL) & ~mask & alive[:, None]
        if not new.any():
            break
        mask |= new
    P = D - coef @ C
    if X.size:
        alive &= ~((P @ (X @ G).T) < -TOL).any(axis=1)
    vol = np.einsum("ij,jk,ik->i", P, G, P)
    vol[~alive] = 0.0
    return np.maximum(vol, 0.0)
