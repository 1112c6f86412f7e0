"""Fuzzy c-means clustering.

Alternating optimization of the weighted within-cluster scatter

    J = sum_i sum_j  u_ij^m * ||z_i - v_j||^2

where each data point i carries a membership u_ij in [0, 1] to every
cluster j and each row of U sums to 1. One iteration recomputes the
centroids from the current memberships,

    v_j = sum_i u_ij^m z_i / sum_i u_ij^m,

then refreshes the memberships from the new centroids,

    u_ij = 1 / sum_k (||z_i - v_j|| / ||z_i - v_k||)^(2/(m-1)).

A point coinciding with a centroid gets a crisp membership of 1 to that
centroid (the limit of the update rule). Iteration stops when the largest
elementwise change in U drops below eps or after max_iter rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError

DEFAULT_FUZZIFIER = 2.0
DEFAULT_EPS = 1e-6
DEFAULT_MAX_ITER = 300


@dataclass(frozen=True)
class FcmResult:
    """Outcome of one fuzzy c-means fit.

    centroids has shape (C, d); memberships has shape (n, C) with rows
    summing to 1; objective_history holds the objective value after every
    full (centroid, membership) update and is non-increasing.
    """

    centroids: np.ndarray
    memberships: np.ndarray
    objective_history: tuple[float, ...]
    iterations: int
    converged: bool


def _validate_points(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or len(pts) == 0:
        raise DataError("points must be a non-empty (n, d) array")
    if not np.isfinite(pts).all():
        raise NumericalError("fuzzy c-means input contains non-finite values")
    return pts


def _memberships_from_dist2(dist2: np.ndarray, m: float) -> np.ndarray:
    """Membership update given squared distances (n, C)."""
    exponent = 1.0 / (m - 1.0)
    u = np.zeros_like(dist2)
    singular = dist2 <= 0.0
    singular_rows = singular.any(axis=1)
    if singular_rows.any():
        # crisp assignment to the (first) coincident centroid
        first = np.argmax(singular[singular_rows], axis=1)
        u[np.where(singular_rows)[0], first] = 1.0
    regular = ~singular_rows
    if regular.any():
        inv = dist2[regular] ** -exponent
        u[regular] = inv / inv.sum(axis=1, keepdims=True)
    return u


def _dist2(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def fcm_membership(
    point: np.ndarray, centroids: np.ndarray, m: float = DEFAULT_FUZZIFIER
) -> np.ndarray:
    """Membership vector of a single point to the given centroids."""
    if m <= 1.0:
        raise DataError(f"fuzzifier must be > 1, got {m}")
    cents = np.asarray(centroids, dtype=float)
    if cents.ndim == 1:
        cents = cents[:, None]
    if len(cents) == 0:
        raise DataError("need at least one centroid")
    pt = np.asarray(point, dtype=float).reshape(1, -1)
    if not np.isfinite(pt).all():
        raise NumericalError("non-finite point")
    return _memberships_from_dist2(_dist2(pt, cents), m)[0]


def fcm_objective(
    points: np.ndarray,
    centroids: np.ndarray,
    memberships: np.ndarray,
    m: float = DEFAULT_FUZZIFIER,
) -> float:
    """Weighted within-cluster scatter J for given points, centroids, U."""
    pts = _validate_points(points)
    cents = np.asarray(centroids, dtype=float)
    if cents.ndim == 1:
        cents = cents[:, None]
    u = np.asarray(memberships, dtype=float)
    if u.shape != (len(pts), len(cents)):
        raise DataError(
            f"membership shape {u.shape} does not match {len(pts)} points x {len(cents)} clusters"
        )
    return float(((u**m) * _dist2(pts, cents)).sum())


def fcm_fit(
    points: np.ndarray,
    n_clusters: int,
    m: float = DEFAULT_FUZZIFIER,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
) -> FcmResult:
    """Fit fuzzy c-means with a seeded random row-stochastic start for U.

    Deterministic given identical inputs and seed. Each iteration performs
    the centroid update followed by the membership update; convergence is
    declared when max |U_new - U_old| < eps.
    """
    pts = _validate_points(points)
    n = len(pts)
    if n_clusters < 1:
        raise DataError(f"need at least one cluster, got {n_clusters}")
    if n < n_clusters:
        raise DataError(f"{n} points cannot support {n_clusters} clusters")
    if m <= 1.0:
        raise DataError(f"fuzzifier must be > 1, got {m}")
    if eps <= 0:
        raise DataError(f"eps must be positive, got {eps}")

    rng = np.random.default_rng(seed)
    u = rng.random((n, n_clusters))
    u /= u.sum(axis=1, keepdims=True)

    # only read back before the first proper update in the degenerate case
    # where a membership column starts all-zero
    centroids = pts[:n_clusters].copy()
    history: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        weights = u**m
        mass = weights.sum(axis=0)
        dead = mass <= 0.0
        if dead.any():
            # a cluster no point belongs to keeps its previous centroid
            alive = ~dead
            centroids[alive] = (weights[:, alive].T @ pts) / mass[alive][:, None]
        else:
            centroids = (weights.T @ pts) / mass[:, None]
        dist2 = _dist2(pts, centroids)
        u_new = _memberships_from_dist2(dist2, m)
        history.append(float(((u_new**m) * dist2).sum()))
        delta = np.abs(u_new - u).max()
        u = u_new
        if delta < eps:
            converged = True
            break

    return FcmResult(
        centroids=centroids,
        memberships=u,
        objective_history=tuple(history),
        iterations=iterations,
        converged=converged,
    )
