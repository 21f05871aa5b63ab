"""Pure-Python Metropolis kernels: the reference for the compiled core.

``_core.pyx`` mirrors every loop here operation for operation (same
accumulation order, same RNG draw pattern, no FMA contraction) so that both
backends produce bit-identical trajectories from the same seed.  Edit the
two files together.

Move codes: 0 = uniform ball, 1 = uniform cube, 2 = gaussian.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

MOVE_BALL = 0
MOVE_CUBE = 1
MOVE_GAUSSIAN = 2

MOVE_CODES = {"uniform_ball": MOVE_BALL, "uniform_cube": MOVE_CUBE,
              "gaussian": MOVE_GAUSSIAN}


def full_energy(pos, h, a, r, sqrt_eps, eta, exclude_adj):
    """Energy components (harmonic, attractive, repulsive, disorder).

    No coincidence-floor check here; callers wanting validation use
    model.total_energy.
    """
    n = pos.shape[0]
    e_h = 0.0
    e_a = 0.0
    e_r = 0.0
    e_d = 0.0
    has_pair = (a != 0.0) or (r != 0.0) or (sqrt_eps != 0.0)
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
    return e_h, e_a, e_r, e_d


def move_delta(pos, site, nx, ny, nz, h, a, r, sqrt_eps, eta, exclude_adj, d_min):
    """Energy change of moving `site` to (nx, ny, nz).

    Returns (delta_total, singular); `singular` means some pair distance
    around the moved site fell below d_min and the value is unusable.
    """
    dh, da, dr, dd, singular = _move_terms(
        pos, site, nx, ny, nz, h, a, r, sqrt_eps, eta, exclude_adj,
        d_min * d_min)
    return dh + da + dr + dd, singular


def _move_terms(pos, site, nx, ny, nz, h, a, r, sqrt_eps, eta, exclude_adj, floor2):
    n = pos.shape[0]
    has_pair = (a != 0.0) or (r != 0.0) or (sqrt_eps != 0.0)
    x = pos[site, 0]
    y = pos[site, 1]
    z = pos[site, 2]
    dh = 0.0
    da = 0.0
    dr = 0.0
    dd = 0.0
    if not has_pair:
        # harmonic-only fast path: bonds of `site` are the only terms
        for j in (site - 1, site + 1):
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
        return dh, 0.0, 0.0, 0.0, False
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
                return dh, da, dr, dd, True
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
    return dh, da, dr, dd, False


def _draw_normal(rng):
    # Box-Muller from two uniforms; kept in sync with the compiled core
    u1 = 1.0 - rng.random()
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def draw_displacement(rng, radius, move_code):
    """One trial displacement; consumes the same stream as the compiled core."""
    if move_code == MOVE_BALL:
        while True:
            dx = 2.0 * rng.random() - 1.0
            dy = 2.0 * rng.random() - 1.0
            dz = 2.0 * rng.random() - 1.0
            if dx * dx + dy * dy + dz * dz <= 1.0:
                return radius * dx, radius * dy, radius * dz
    if move_code == MOVE_CUBE:
        return (radius * (2.0 * rng.random() - 1.0),
                radius * (2.0 * rng.random() - 1.0),
                radius * (2.0 * rng.random() - 1.0))
    if move_code == MOVE_GAUSSIAN:
        return (radius * _draw_normal(rng),
                radius * _draw_normal(rng),
                radius * _draw_normal(rng))
    raise ValueError(f"unknown move code {move_code}")


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

    One sweep proposes one move per site.  Running energy components live
    in energy_acc (length-4 array, updated in place and resynchronized
    from scratch every `resync_every` sweeps).  When record_stride > 0,
    snapshots/times/energies are appended into the preallocated arrays
    after every record_stride-th sweep.

    Returns (accepted, proposed, singular_rejects, n_recorded).
    """
    n = pos.shape[0]
    floor2 = d_min * d_min
    has_pair = (a != 0.0) or (r != 0.0) or (sqrt_eps != 0.0)
    accepted = 0
    singular_rejects = 0
    n_rec = 0
    order = list(range(n))
    for sweep in range(n_sweeps):
        if random_order:
            for i in range(n - 1, 0, -1):
                jswap = int(rng.random() * (i + 1))
                order[i], order[jswap] = order[jswap], order[i]
        for idx in range(n):
            site = order[idx]
            ddx, ddy, ddz = draw_displacement(rng, radius, move_code)
            nx = pos[site, 0] + ddx
            ny = pos[site, 1] + ddy
            nz = pos[site, 2] + ddz
            dh, da, dr, dd, singular = _move_terms(
                pos, site, nx, ny, nz, h, a, r, sqrt_eps, eta,
                exclude_adj, floor2)
            de = dh + da + dr + dd
            if accept_all:
                accept = not singular
            else:
                u = rng.random()
                if singular:
                    accept = False
                elif de <= 0.0:
                    accept = True
                else:
                    accept = u < math.exp(-beta * de)
            if singular:
                singular_rejects += 1
            if accept:
                pos[site, 0] = nx
                pos[site, 1] = ny
                pos[site, 2] = nz
                energy_acc[0] += dh
                energy_acc[1] += da
                energy_acc[2] += dr
                energy_acc[3] += dd
                accepted += 1
        t = t_start + sweep + 1
        if resync_every > 0 and t % resync_every == 0:
            e_h, e_a, e_r, e_d = full_energy(pos, h, a, r, sqrt_eps, eta,
                                             exclude_adj)
            energy_acc[0] = e_h
            energy_acc[1] = e_a
            energy_acc[2] = e_r
            energy_acc[3] = e_d
        if record_stride > 0 and (sweep + 1) % record_stride == 0:
            snaps[n_rec] = pos
            snap_times[n_rec] = t
            e_rec[n_rec, 0] = energy_acc[0]
            e_rec[n_rec, 1] = energy_acc[1]
            e_rec[n_rec, 2] = energy_acc[2]
            e_rec[n_rec, 3] = energy_acc[3]
            n_rec += 1
    return accepted, n_sweeps * n, singular_rejects, n_rec
