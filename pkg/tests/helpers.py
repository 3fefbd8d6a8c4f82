"""Cached builders shared by the test modules; the large sets are slow to make."""

from functools import lru_cache

import numpy as np

from hdivbasis import assembly, checks

KINDS = ("quad", "hex", "tri", "tet")
ORDERS = (1, 2, 3, 4)


def sets(orders=ORDERS):
    """Every (kind, order, variant) combination, tet in both kinds."""
    out = []
    for kind in KINDS:
        for p in orders:
            if kind == "tet":
                out += [(kind, p, "first"), (kind, p, "second")]
            else:
                out.append((kind, p, None))
    return out


@lru_cache(maxsize=None)
def basis(kind, p, variant=None):
    return checks.build(kind, p, variant)


@lru_cache(maxsize=None)
def mass(kind, p, variant=None, path=assembly.EXACT):
    return assembly.mass_matrix(basis(kind, p, variant), path)


@lru_cache(maxsize=None)
def stiffness(kind, p, variant=None, path=assembly.EXACT):
    return assembly.stiffness_matrix(basis(kind, p, variant), path)


def interior_points(kind, n, rng):
    """``n`` random points strictly inside the reference element."""
    dim = 2 if kind in ("quad", "tri") else 3
    pts = []
    while len(pts) < n:
        x = rng.uniform(0.05, 0.95, dim)
        if kind in ("tri", "tet") and x.sum() > 0.95:
            continue
        pts.append(x)
    return np.array(pts)
