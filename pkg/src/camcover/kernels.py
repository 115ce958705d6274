"""Visibility kernels shared by the coverage evaluator and the optimizer.

Every kernel exists twice: a loop version compiled with numba and a
vectorized numpy version. The public names at the bottom of the module are
bound to one or the other according to :data:`camcover._accel.USE_NUMBA`;
both implementations stay importable for benchmarking and cross-checks.

Point arrays are ``(P, 3)`` rows of ``(x, y, rho)``. Camera arrays are
``(N, 3)`` rows of ``(vx, vy, theta)``; a genome is the same data flattened
to length ``3N``.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

DEFAULT_EPS_ANGLE = 1e-9


# -- numba path ---------------------------------------------------------------


@njit
def _visible_one(vx, vy, cth, sth, px, py, nx, ny, d_min, d_max, half_angle, eps, sin_eps):
    wx = px - vx
    wy = py - vy
    depth = -sth * wx + cth * wy
    if depth < d_min or depth > d_max:
        return False
    lateral = cth * wx + sth * wy
    if math.atan2(abs(lateral), depth) > half_angle + eps:
        return False
    return wx * nx + wy * ny < -sin_eps * math.hypot(wx, wy)


@njit
def _visibility_matrix_nb(cams, pts, d_min, d_max, half_angle, eps):
    n_pts = pts.shape[0]
    n_cam = cams.shape[0]
    out = np.zeros((n_pts, n_cam), dtype=np.bool_)
    sin_eps = math.sin(eps)
    for i in range(n_cam):
        vx = cams[i, 0]
        vy = cams[i, 1]
        cth = math.cos(cams[i, 2])
        sth = math.sin(cams[i, 2])
        for j in range(n_pts):
            out[j, i] = _visible_one(
                vx, vy, cth, sth, pts[j, 0], pts[j, 1],
                math.cos(pts[j, 2]), math.sin(pts[j, 2]),
                d_min, d_max, half_angle, eps, sin_eps,
            )
    return out


@njit
def _covered_mask_nb(cams, pts, d_min, d_max, half_angle, eps):
    n_pts = pts.shape[0]
    n_cam = cams.shape[0]
    sin_eps = math.sin(eps)
    cth = np.empty(n_cam)
    sth = np.empty(n_cam)
    for i in range(n_cam):
        cth[i] = math.cos(cams[i, 2])
        sth[i] = math.sin(cams[i, 2])
    out = np.zeros(n_pts, dtype=np.bool_)
    for j in range(n_pts):
        nx = math.cos(pts[j, 2])
        ny = math.sin(pts[j, 2])
        for i in range(n_cam):
            if _visible_one(cams[i, 0], cams[i, 1], cth[i], sth[i], pts[j, 0], pts[j, 1],
                            nx, ny, d_min, d_max, half_angle, eps, sin_eps):
                out[j] = True
                break
    return out


@njit
def _batch_cost_nb(genomes, pts, d_min, d_max, half_angle, eps):
    n_batch = genomes.shape[0]
    n_cam = genomes.shape[1] // 3
    n_pts = pts.shape[0]
    sin_eps = math.sin(eps)
    nx = np.empty(n_pts)
    ny = np.empty(n_pts)
    for j in range(n_pts):
        nx[j] = math.cos(pts[j, 2])
        ny[j] = math.sin(pts[j, 2])
    cth = np.empty(n_cam)
    sth = np.empty(n_cam)
    out = np.zeros(n_batch, dtype=np.int64)
    for b in range(n_batch):
        g = genomes[b]
        for i in range(n_cam):
            cth[i] = math.cos(g[3 * i + 2])
            sth[i] = math.sin(g[3 * i + 2])
        total = 0
        for j in range(n_pts):
            for i in range(n_cam):
                if _visible_one(g[3 * i], g[3 * i + 1], cth[i], sth[i], pts[j, 0], pts[j, 1],
                                nx[j], ny[j], d_min, d_max, half_angle, eps, sin_eps):
                    total += 1
                    break
        out[b] = total
    return out


# -- numpy path ---------------------------------------------------------------


def _visibility_np(vx, vy, theta, px, py, rho, d_min, d_max, half_angle, eps):
    # all arguments broadcast against each other
    cth = np.cos(theta)
    sth = np.sin(theta)
    wx = px - vx
    wy = py - vy
    depth = -sth * wx + cth * wy
    lateral = cth * wx + sth * wy
    in_depth = (depth >= d_min) & (depth <= d_max)
    with np.errstate(invalid="ignore"):
        in_angle = np.arctan2(np.abs(lateral), depth) <= half_angle + eps
    front = wx * np.cos(rho) + wy * np.sin(rho) < -math.sin(eps) * np.hypot(wx, wy)
    return in_depth & in_angle & front


def _visibility_matrix_np(cams, pts, d_min, d_max, half_angle, eps):
    cams = np.asarray(cams, dtype=float)
    pts = np.asarray(pts, dtype=float)
    return _visibility_np(
        cams[None, :, 0], cams[None, :, 1], cams[None, :, 2],
        pts[:, None, 0], pts[:, None, 1], pts[:, None, 2],
        d_min, d_max, half_angle, eps,
    )


def _covered_mask_np(cams, pts, d_min, d_max, half_angle, eps):
    return _visibility_matrix_np(cams, pts, d_min, d_max, half_angle, eps).any(axis=1)


def _batch_cost_np(genomes, pts, d_min, d_max, half_angle, eps, chunk=64):
    genomes = np.asarray(genomes, dtype=float)
    pts = np.asarray(pts, dtype=float)
    n_batch = genomes.shape[0]
    out = np.empty(n_batch, dtype=np.int64)
    px = pts[None, :, None, 0]
    py = pts[None, :, None, 1]
    rho = pts[None, :, None, 2]
    for lo in range(0, n_batch, chunk):
        cams = genomes[lo:lo + chunk].reshape(-1, genomes.shape[1] // 3, 3)
        vis = _visibility_np(
            cams[:, None, :, 0], cams[:, None, :, 1], cams[:, None, :, 2],
            px, py, rho, d_min, d_max, half_angle, eps,
        )
        out[lo:lo + chunk] = vis.any(axis=2).sum(axis=1)
    return out


# -- dispatch -------------------------------------------------------------------


def _prep(arr, width):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != width:
        raise ValueError(f"expected an array of shape (n, {width}), got {arr.shape}")
    return arr


if USE_NUMBA:
    _IMPL = (_visibility_matrix_nb, _covered_mask_nb, _batch_cost_nb)
else:
    _IMPL = (_visibility_matrix_np, _covered_mask_np, _batch_cost_np)


def visibility_matrix(cams, pts, d_min, d_max, half_angle, eps=DEFAULT_EPS_ANGLE):
    """Boolean ``(P, N)`` matrix; entry ``[j, i]`` tells whether camera i sees point j."""
    return _IMPL[0](_prep(cams, 3), _prep(pts, 3), float(d_min), float(d_max), float(half_angle), float(eps))


def covered_mask(cams, pts, d_min, d_max, half_angle, eps=DEFAULT_EPS_ANGLE):
    """Per-point flag: seen by at least one camera."""
    return _IMPL[1](_prep(cams, 3), _prep(pts, 3), float(d_min), float(d_max), float(half_angle), float(eps))


def batch_cost(genomes, pts, d_min, d_max, half_angle, eps=DEFAULT_EPS_ANGLE):
    """Number of covered points for each genome row of ``genomes`` (shape ``(B, 3N)``)."""
    genomes = np.ascontiguousarray(np.atleast_2d(genomes), dtype=np.float64)
    if genomes.shape[1] % 3:
        raise ValueError(f"genome length {genomes.shape[1]} is not a multiple of 3")
    return _IMPL[2](genomes, _prep(pts, 3), float(d_min), float(d_max), float(half_angle), float(eps))
