# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Metropolis kernels.

Mirror of ``_purepy.py`` operation for operation: same accumulation order,
same RNG draw pattern (PCG64 next_double / standard normal), so both
backends produce bit-identical trajectories.  Built with -ffp-contract=off;
keep the arithmetic in sync with the reference when editing either file.
"""

from libc.math cimport exp, log, sqrt, cos, pi
from cpython.pycapsule cimport PyCapsule_GetPointer

import numpy as np

cimport numpy as cnp
from numpy.random cimport bitgen_t

cnp.import_array()

BACKEND_NAME = "compiled"

MOVE_BALL = 0
MOVE_CUBE = 1
MOVE_GAUSSIAN = 2

MOVE_CODES = {"uniform_ball": MOVE_BALL, "uniform_cube": MOVE_CUBE,
              "gaussian": MOVE_GAUSSIAN}

_DUMMY_ETA = np.zeros((1, 1))


cdef inline bitgen_t *_get_bitgen(object rng):
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef inline double _draw_normal(bitgen_t *bg):
    # Box-Muller from two uniforms; kept in sync with _purepy._draw_normal
    cdef double u1 = 1.0 - bg.next_double(bg.state)
    cdef double u2 = bg.next_double(bg.state)
    return sqrt(-2.0 * log(u1)) * cos(2.0 * pi * u2)


cdef inline void _draw(bitgen_t *bg, double radius, int move_code,
                       double *ddx, double *ddy, double *ddz):
    cdef double dx, dy, dz
    if move_code == MOVE_BALL:
        while True:
            dx = 2.0 * bg.next_double(bg.state) - 1.0
            dy = 2.0 * bg.next_double(bg.state) - 1.0
            dz = 2.0 * bg.next_double(bg.state) - 1.0
            if dx * dx + dy * dy + dz * dz <= 1.0:
                break
        ddx[0] = radius * dx
        ddy[0] = radius * dy
        ddz[0] = radius * dz
    elif move_code == MOVE_CUBE:
        ddx[0] = radius * (2.0 * bg.next_double(bg.state) - 1.0)
        ddy[0] = radius * (2.0 * bg.next_double(bg.state) - 1.0)
        ddz[0] = radius * (2.0 * bg.next_double(bg.state) - 1.0)
    else:
        ddx[0] = radius * _draw_normal(bg)
        ddy[0] = radius * _draw_normal(bg)
        ddz[0] = radius * _draw_normal(bg)


cdef void _full_energy_c(double[:, ::1] pos, double h, double a, double r,
                         double sqrt_eps, double[:, ::1] eta,
                         bint exclude_adj, double *out):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j
    cdef double e_h = 0.0, e_a = 0.0, e_r = 0.0, e_d = 0.0
    cdef double xi, yi, zi, dx, dy, dz, r2, i2, i6
    cdef bint has_pair = (a != 0.0) or (r != 0.0) or (sqrt_eps != 0.0)
    cdef bint adjacent
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = xi - pos[j, 0]
            dy = yi - pos[j, 1]
            dz = zi - pos[j, 2]
            r2 = dx * dx + dy * dy + dz * dz
            adjacent = j == i + 1
            if adjacent:
                e_h += h * r2
            if has_pair and not (exclude_adj and adjacent):
                i2 = 1.0 / r2
                i6 = i2 * i2 * i2
                if a != 0.0:
                    e_a -= a * i6
                if r != 0.0:
                    e_r += r * (i6 * i6)
                if sqrt_eps != 0.0:
                    e_d += sqrt_eps * eta[i, j] * i6
    out[0] = e_h
    out[1] = e_a
    out[2] = e_r
    out[3] = e_d


cdef bint _move_terms_c(double[:, ::1] pos, Py_ssize_t site,
                        double nx, double ny, double nz,
                        double h, double a, double r, double sqrt_eps,
                        double[:, ::1] eta, bint has_eta, bint exclude_adj,
                        double floor2, double *out):
    """Fills out[0..3] with (dh, da, dr, dd); returns the singular flag."""
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t j
    cdef double x = pos[site, 0]
    cdef double y = pos[site, 1]
    cdef double z = pos[site, 2]
    cdef double dh = 0.0, da = 0.0, dr = 0.0, dd = 0.0
    cdef double dx, dy, dz, r2o, dxn, dyn, dzn, r2n, i2o, i6o, i2n, i6n
    cdef bint has_pair = (a != 0.0) or (r != 0.0) or (sqrt_eps != 0.0)
    cdef bint adjacent
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    out[3] = 0.0
    if not has_pair:
        for j in range(site - 1, site + 2, 2):
            if 0 <= j < n:
                dx = x - pos[j, 0]
                dy = y - pos[j, 1]
                dz = z - pos[j, 2]
                r2o = dx * dx + dy * dy + dz * dz
                dxn = nx - pos[j, 0]
                dyn = ny - pos[j, 1]
                dzn = nz - pos[j, 2]
                r2n = dxn * dxn + dyn * dyn + dzn * dzn
                dh += h * (r2n - r2o)
        out[0] = dh
        return False
    for j in range(n):
        if j == site:
            continue
        dx = x - pos[j, 0]
        dy = y - pos[j, 1]
        dz = z - pos[j, 2]
        r2o = dx * dx + dy * dy + dz * dz
        dxn = nx - pos[j, 0]
        dyn = ny - pos[j, 1]
        dzn = nz - pos[j, 2]
        r2n = dxn * dxn + dyn * dyn + dzn * dzn
        adjacent = (j == site - 1) or (j == site + 1)
        if adjacent:
            dh += h * (r2n - r2o)
        if not (exclude_adj and adjacent):
            if r2n < floor2 or r2o < floor2:
                out[0] = dh
                out[1] = da
                out[2] = dr
                out[3] = dd
                return True
            i2o = 1.0 / r2o
            i6o = i2o * i2o * i2o
            i2n = 1.0 / r2n
            i6n = i2n * i2n * i2n
            if a != 0.0:
                da -= a * (i6n - i6o)
            if r != 0.0:
                dr += r * (i6n * i6n - i6o * i6o)
            if sqrt_eps != 0.0:
                dd += sqrt_eps * eta[site, j] * (i6n - i6o)
    out[0] = dh
    out[1] = da
    out[2] = dr
    out[3] = dd
    return False


def full_energy(pos, h, a, r, sqrt_eps, eta, exclude_adj):
    """Energy components (harmonic, attractive, repulsive, disorder)."""
    cdef double[:, ::1] pos_mv = pos
    cdef double[:, ::1] eta_mv
    cdef double out[4]
    if eta is not None:
        eta_mv = eta
    else:
        eta_mv = _DUMMY_ETA
    _full_energy_c(pos_mv, h, a, r, sqrt_eps, eta_mv, exclude_adj, out)
    return out[0], out[1], out[2], out[3]


def move_delta(pos, site, nx, ny, nz, h, a, r, sqrt_eps, eta, exclude_adj, d_min):
    """Energy change of moving `site` to (nx, ny, nz); returns (delta, singular)."""
    cdef double[:, ::1] pos_mv = pos
    cdef double[:, ::1] eta_mv
    cdef bint has_eta = eta is not None
    cdef double out[4]
    cdef bint singular
    if has_eta:
        eta_mv = eta
    else:
        eta_mv = _DUMMY_ETA
    singular = _move_terms_c(pos_mv, site, nx, ny, nz, h, a, r, sqrt_eps,
                             eta_mv, has_eta, exclude_adj, d_min * d_min, out)
    return out[0] + out[1] + out[2] + out[3], bool(singular)


def draw_displacement(rng, radius, move_code):
    """One trial displacement; consumes the same stream as the fallback."""
    cdef bitgen_t *bg = _get_bitgen(rng)
    cdef double ddx, ddy, ddz
    with rng.bit_generator.lock:
        _draw(bg, radius, move_code, &ddx, &ddy, &ddz)
    return ddx, ddy, ddz


def mean_sq_step(radius, move_code):
    """<|delta|^2> of the trial distribution (used by the drift formula)."""
    if move_code == MOVE_BALL:
        return 0.6 * radius * radius
    if move_code == MOVE_CUBE:
        return radius * radius
    if move_code == MOVE_GAUSSIAN:
        return 3.0 * radius * radius
    raise ValueError(f"unknown move code {move_code}")


def run_sweeps(pos, eta, h, a, r, sqrt_eps, exclude_adj, beta, radius,
               move_code, accept_all, random_order, n_sweeps, rng,
               record_stride, snaps, snap_times, e_rec, energy_acc,
               resync_every, d_min, t_start):
    """Advance `pos` by n_sweeps full Metropolis sweeps, in place.

    Semantics identical to the pure-Python reference; see _purepy.run_sweeps.
    Returns (accepted, proposed, singular_rejects, n_recorded).
    """
    cdef double[:, ::1] pos_mv = pos
    cdef double[:, ::1] eta_mv
    cdef bint has_eta = eta is not None
    cdef double[::1] acc_mv = energy_acc
    cdef double[:, :, ::1] snaps_mv
    cdef long long[::1] times_mv
    cdef double[:, ::1] erec_mv
    cdef bint do_record = record_stride > 0
    cdef Py_ssize_t n = pos_mv.shape[0]
    cdef Py_ssize_t sweep, idx, site, i, jswap, k, tmp
    cdef long long t
    cdef double ddx, ddy, ddz, nx, ny, nz, de, u
    cdef double floor2 = d_min * d_min
    cdef double out[4]
    cdef double esync[4]
    cdef bint singular, accept
    cdef long accepted = 0
    cdef long singular_rejects = 0
    cdef Py_ssize_t n_rec = 0
    cdef int move_c = move_code
    cdef bint acc_all = accept_all
    cdef bint rand_order = random_order
    cdef long long resync = resync_every
    cdef long long tstart = t_start
    cdef long long n_sw = n_sweeps
    cdef double beta_c = beta
    cdef double radius_c = radius
    cdef double h_c = h, a_c = a, r_c = r, se_c = sqrt_eps
    cdef bint excl = exclude_adj
    cdef Py_ssize_t[::1] order
    cdef bitgen_t *bg = _get_bitgen(rng)

    if has_eta:
        eta_mv = eta
    else:
        eta_mv = _DUMMY_ETA
    if do_record:
        snaps_mv = snaps
        times_mv = snap_times
        erec_mv = e_rec
    order = np.arange(n, dtype=np.intp)

    with rng.bit_generator.lock:
        for sweep in range(n_sw):
            if rand_order:
                for i in range(n - 1, 0, -1):
                    jswap = <Py_ssize_t>(bg.next_double(bg.state) * (i + 1))
                    tmp = order[i]
                    order[i] = order[jswap]
                    order[jswap] = tmp
            for idx in range(n):
                site = order[idx]
                _draw(bg, radius_c, move_c, &ddx, &ddy, &ddz)
                nx = pos_mv[site, 0] + ddx
                ny = pos_mv[site, 1] + ddy
                nz = pos_mv[site, 2] + ddz
                singular = _move_terms_c(pos_mv, site, nx, ny, nz, h_c, a_c,
                                         r_c, se_c, eta_mv, has_eta, excl,
                                         floor2, out)
                de = out[0] + out[1] + out[2] + out[3]
                if acc_all:
                    accept = not singular
                else:
                    u = bg.next_double(bg.state)
                    if singular:
                        accept = False
                    elif de <= 0.0:
                        accept = True
                    else:
                        accept = u < exp(-beta_c * de)
                if singular:
                    singular_rejects += 1
                if accept:
                    pos_mv[site, 0] = nx
                    pos_mv[site, 1] = ny
                    pos_mv[site, 2] = nz
                    acc_mv[0] += out[0]
                    acc_mv[1] += out[1]
                    acc_mv[2] += out[2]
                    acc_mv[3] += out[3]
                    accepted += 1
            t = tstart + sweep + 1
            if resync > 0 and t % resync == 0:
                _full_energy_c(pos_mv, h_c, a_c, r_c, se_c, eta_mv, excl, esync)
                acc_mv[0] = esync[0]
                acc_mv[1] = esync[1]
                acc_mv[2] = esync[2]
                acc_mv[3] = esync[3]
            if do_record and (sweep + 1) % record_stride == 0:
                for i in range(n):
                    snaps_mv[n_rec, i, 0] = pos_mv[i, 0]
                    snaps_mv[n_rec, i, 1] = pos_mv[i, 1]
                    snaps_mv[n_rec, i, 2] = pos_mv[i, 2]
                times_mv[n_rec] = t
                erec_mv[n_rec, 0] = acc_mv[0]
                erec_mv[n_rec, 1] = acc_mv[1]
                erec_mv[n_rec, 2] = acc_mv[2]
                erec_mv[n_rec, 3] = acc_mv[3]
                n_rec += 1
    return accepted, int(n_sw) * int(n), singular_rejects, n_rec
