"""Numba-compiled kernels.  Import only succeeds when numba is installed;
:mod:`qpe_lab.kernels` guards the import and falls back to numpy.

Density-matrix updates run in place on 2x2 / 4x4 index blocks; positions are
*bit positions* in the basis index (qubit q on an m-qubit register sits at bit
m-1-q).  The trajectory sampler runs whole shots inside one compiled loop.
"""

import numpy as np
from numba import njit

_SIG_CACHE = True


@njit(cache=_SIG_CACHE, nogil=True, inline="always")
def _insert_zero_bit(x, pos):
    # spread bits of x so that bit `pos` of the result is 0
    high = (x >> pos) << (pos + 1)
    return high | (x & ((1 << pos) - 1))


@njit(cache=_SIG_CACHE, nogil=True)
def u1_rho_inplace(rho, u, pos):
    dim = rho.shape[0]
    half = dim >> 1
    mask = 1 << pos
    u00, u01 = u[0, 0], u[0, 1]
    u10, u11 = u[1, 0], u[1, 1]
    v00, v01 = np.conj(u00), np.conj(u01)
    v10, v11 = np.conj(u10), np.conj(u11)
    for rr in range(half):
        r0 = _insert_zero_bit(rr, pos)
        r1 = r0 | mask
        for cc in range(half):
            c0 = _insert_zero_bit(cc, pos)
            c1 = c0 | mask
            a = rho[r0, c0]
            b = rho[r0, c1]
            c = rho[r1, c0]
            d = rho[r1, c1]
            e = u00 * a + u01 * c
            f = u00 * b + u01 * d
            g = u10 * a + u11 * c
            h = u10 * b + u11 * d
            rho[r0, c0] = e * v00 + f * v01
            rho[r0, c1] = e * v10 + f * v11
            rho[r1, c0] = g * v00 + h * v01
            rho[r1, c1] = g * v10 + h * v11


@njit(cache=_SIG_CACHE, nogil=True)
def kraus1_rho_inplace(rho, ks, pos):
    dim = rho.shape[0]
    half = dim >> 1
    mask = 1 << pos
    nk = ks.shape[0]
    for rr in range(half):
        r0 = _insert_zero_bit(rr, pos)
        r1 = r0 | mask
        for cc in range(half):
            c0 = _insert_zero_bit(cc, pos)
            c1 = c0 | mask
            a = rho[r0, c0]
            b = rho[r0, c1]
            c = rho[r1, c0]
            d = rho[r1, c1]
            s00 = 0.0 + 0.0j
            s01 = 0.0 + 0.0j
            s10 = 0.0 + 0.0j
            s11 = 0.0 + 0.0j
            for k in range(nk):
                k00, k01 = ks[k, 0, 0], ks[k, 0, 1]
                k10, k11 = ks[k, 1, 0], ks[k, 1, 1]
                e = k00 * a + k01 * c
                f = k00 * b + k01 * d
                g = k10 * a + k11 * c
                h = k10 * b + k11 * d
                s00 += e * np.conj(k00) + f * np.conj(k01)
                s01 += e * np.conj(k10) + f * np.conj(k11)
                s10 += g * np.conj(k00) + h * np.conj(k01)
                s11 += g * np.conj(k10) + h * np.conj(k11)
            rho[r0, c0] = s00
            rho[r0, c1] = s01
            rho[r1, c0] = s10
            rho[r1, c1] = s11


@njit(cache=_SIG_CACHE, nogil=True)
def u2_rho_inplace(rho, u, pos_a, pos_b):
    dim = rho.shape[0]
    quarter = dim >> 2
    lo = min(pos_a, pos_b)
    hi = max(pos_a, pos_b)
    offs = np.empty(4, np.int64)
    for la in range(2):
        for lb in range(2):
            offs[(la << 1) | lb] = (la << pos_a) | (lb << pos_b)
    blk = np.empty((4, 4), np.complex128)
    tmp = np.empty((4, 4), np.complex128)
    for rr in range(quarter):
        base_r = _insert_zero_bit(_insert_zero_bit(rr, lo), hi)
        for cc in range(quarter):
            base_c = _insert_zero_bit(_insert_zero_bit(cc, lo), hi)
            for i in range(4):
                ri = base_r + offs[i]
                for j in range(4):
                    blk[i, j] = rho[ri, base_c + offs[j]]
            for i in range(4):
                for j in range(4):
                    acc = 0.0 + 0.0j
                    for k in range(4):
                        acc += u[i, k] * blk[k, j]
                    tmp[i, j] = acc
            for i in range(4):
                ri = base_r + offs[i]
                for j in range(4):
                    acc = 0.0 + 0.0j
                    for k in range(4):
                        acc += tmp[i, k] * np.conj(u[j, k])
                    rho[ri, base_c + offs[j]] = acc


@njit(cache=_SIG_CACHE, nogil=True)
def _u1_psi_inplace(psi, u, pos):
    half = psi.shape[0] >> 1
    mask = 1 << pos
    u00, u01 = u[0, 0], u[0, 1]
    u10, u11 = u[1, 0], u[1, 1]
    for rr in range(half):
        i0 = _insert_zero_bit(rr, pos)
        i1 = i0 | mask
        a = psi[i0]
        b = psi[i1]
        psi[i0] = u00 * a + u01 * b
        psi[i1] = u10 * a + u11 * b


@njit(cache=_SIG_CACHE, nogil=True)
def _u2_psi_inplace(psi, u, pos_a, pos_b):
    quarter = psi.shape[0] >> 2
    lo = min(pos_a, pos_b)
    hi = max(pos_a, pos_b)
    offs = np.empty(4, np.int64)
    for la in range(2):
        for lb in range(2):
            offs[(la << 1) | lb] = (la << pos_a) | (lb << pos_b)
    amps = np.empty(4, np.complex128)
    for rr in range(quarter):
        base = _insert_zero_bit(_insert_zero_bit(rr, lo), hi)
        for i in range(4):
            amps[i] = psi[base + offs[i]]
        for i in range(4):
            acc = 0.0 + 0.0j
            for k in range(4):
                acc += u[i, k] * amps[k]
            psi[base + offs[i]] = acc


@njit(cache=_SIG_CACHE, nogil=True)
def trajectory_outcomes(instr, mats1, mats2, kraus, uniforms, m, n_est):
    shots = uniforms.shape[0]
    dim = 1 << m
    nk = kraus.shape[0]
    n_instr = instr.shape[0]
    out = np.empty(shots, np.int64)
    psi = np.empty(dim, np.complex128)
    cand = np.empty((nk, dim), np.complex128)
    weight = np.empty(nk, np.float64)
    for s in range(shots):
        for i in range(dim):
            psi[i] = 0.0
        psi[0] = 1.0
        site = 0
        for t in range(n_instr):
            kind = instr[t, 0]
            if kind == 0:
                _u1_psi_inplace(psi, mats1[instr[t, 1]], m - 1 - instr[t, 2])
            elif kind == 1:
                _u2_psi_inplace(
                    psi,
                    mats2[instr[t, 1]],
                    m - 1 - instr[t, 2],
                    m - 1 - instr[t, 3],
                )
            else:
                pos = m - 1 - instr[t, 2]
                for k in range(nk):
                    for i in range(dim):
                        cand[k, i] = psi[i]
                    _u1_psi_inplace(cand[k], kraus[k], pos)
                    acc = 0.0
                    for i in range(dim):
                        acc += cand[k, i].real ** 2 + cand[k, i].imag ** 2
                    weight[k] = acc
                u = uniforms[s, site]
                site += 1
                choice = nk - 1
                cum = 0.0
                for k in range(nk):
                    cum += weight[k]
                    if cum > u:
                        choice = k
                        break
                inv = 1.0 / np.sqrt(weight[choice])
                for i in range(dim):
                    psi[i] = cand[choice, i] * inv
        u = uniforms[s, site]
        idx = dim - 1
        cum = 0.0
        for i in range(dim):
            cum += psi[i].real ** 2 + psi[i].imag ** 2
            if cum > u:
                idx = i
                break
        k_out = 0
        for j in range(n_est):
            k_out |= ((idx >> (m - 1 - j)) & 1) << j
        out[s] = k_out
    return out
