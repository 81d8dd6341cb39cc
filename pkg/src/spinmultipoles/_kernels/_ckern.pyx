# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: simultaneous root iteration, phase-space grids,
and the banded bilinear contraction used by the spectrum engines."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, log, log1p, sqrt


cdef inline double _cabs(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def aberth_iterate(const cnp.complex128_t[::1] coeffs, cnp.complex128_t[::1] roots,
                   int max_iter, double tol):
    """Simultaneous root refinement (Aberth-Ehrlich), in place on `roots`.

    Returns the number of sweeps used, or -1 if the tolerance was not
    reached within `max_iter`.
    """
    cdef int n = coeffs.shape[0] - 1
    cdef int m = roots.shape[0]
    cdef int it, i, j, k, all_done
    cdef double complex z, p, dp, newton, s, d, w, denom
    cdef double aw

    for it in range(max_iter):
        all_done = 1
        for i in range(m):
            z = roots[i]
            p = coeffs[n]
            dp = 0
            for k in range(n - 1, -1, -1):
                dp = dp * z + p
                p = p * z + coeffs[k]
            if dp == 0:
                roots[i] = z * (1 + 1e-8) + 1e-8
                all_done = 0
                continue
            newton = p / dp
            s = 0
            for j in range(m):
                if j != i:
                    d = z - roots[j]
                    if _cabs(d) < 1e-300:
                        d = 1e-150
                    s = s + 1.0 / d
            denom = 1.0 - newton * s
            if denom == 0:
                denom = 1e-150
            w = newton / denom
            roots[i] = z - w
            aw = _cabs(w)
            if aw > tol * (1.0 + _cabs(roots[i])):
                all_done = 0
        if all_done:
            return it + 1
    return -1


def husimi_logq(const cnp.complex128_t[::1] coeffs, const cnp.complex128_t[::1] rev,
                const cnp.complex128_t[::1] z, int two_s, double[::1] out):
    """log of the phase-space density at each point of `z`, written to `out`."""
    cdef int npts = z.shape[0]
    cdef int i, k
    cdef double complex zz, w, p
    cdef double r2, la, ap

    for i in range(npts):
        zz = z[i]
        r2 = zz.real * zz.real + zz.imag * zz.imag
        if r2 <= 1.0:
            w = zz.conjugate()
            p = coeffs[two_s]
            for k in range(two_s - 1, -1, -1):
                p = p * w + coeffs[k]
            ap = _cabs(p)
            la = log(ap) if ap > 0 else -INFINITY
        else:
            w = 1.0 / zz.conjugate()
            p = rev[two_s]
            for k in range(two_s - 1, -1, -1):
                p = p * w + rev[k]
            ap = _cabs(p)
            la = 0.5 * two_s * log(r2) + (log(ap) if ap > 0 else -INFINITY)
        out[i] = 2.0 * la - two_s * log1p(r2)


def band_contract(const cnp.complex128_t[:, ::1] psi, const double[::1] cg,
                  int lo, int q, cnp.complex128_t[::1] out):
    """out[b] = sum_j cg[j] * conj(psi[b, lo+j]) * psi[b, lo+q+j]."""
    cdef int nb = psi.shape[0]
    cdef int length = cg.shape[0]
    cdef int b, j
    cdef double complex acc

    for b in range(nb):
        acc = 0
        for j in range(length):
            acc = acc + cg[j] * psi[b, lo + j].conjugate() * psi[b, lo + q + j]
        out[b] = acc
