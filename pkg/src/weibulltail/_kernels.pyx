# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled estimator-curve kernel. See ``_kernels_py.py`` for the reference twin."""

import numpy as np

from libc.math cimport NAN, fabs


def tail_curves(const double[::1] u, const double[::1] lnj, const double[::1] llnj, Py_ssize_t kmax):
    if u.shape[0] < kmax + 1 or lnj.shape[0] < kmax or llnj.shape[0] < kmax:
        raise ValueError("input arrays are shorter than kmax requires")

    tilde_a = np.full(kmax, np.nan)
    check_a = np.full(kmax, np.nan)
    hat_a = np.full(kmax, np.nan)
    bhat_a = np.full(kmax, np.nan)
    amse_a = np.full(kmax, np.nan)
    cdef double[::1] tilde = tilde_a
    cdef double[::1] check = check_a
    cdef double[::1] hat = hat_a
    cdef double[::1] bhat = bhat_a
    cdef double[::1] amse = amse_a

    cdef double sz = 0.0, csz = 0.0
    cdef double num = 0.0, cnum = 0.0
    cdef double den = 0.0, cden = 0.0
    cdef double mw = 0.0, mz = 0.0, m2 = 0.0, cwz = 0.0
    cdef double d, z, t, zbar, w, dw, dz, a, slope, bx, th
    cdef Py_ssize_t k, jj

    with nogil:
        for k in range(1, kmax + 1):
            d = u[k - 1] - u[k]
            z = k * lnj[k - 1] * d

            t = sz + z
            if fabs(sz) >= fabs(z):
                csz += (sz - t) + z
            else:
                csz += (z - t) + sz
            sz = t
            zbar = (sz + csz) / k
            check[k - 1] = zbar

            w = 1.0 / lnj[k - 1]
            if k == 1:
                mw = w
                mz = z
                continue
            dw = w - mw
            mw += dw / k
            dz = z - mz
            mz += dz / k
            m2 += dw * (w - mw)
            cwz += dw * (z - mz)

            jj = k - 1
            a = jj * (u[jj - 1] - u[jj])
            t = num + a
            if fabs(num) >= fabs(a):
                cnum += (num - t) + a
            else:
                cnum += (a - t) + num
            num = t
            a = jj * (llnj[jj - 1] - llnj[jj])
            t = den + a
            if fabs(den) >= fabs(a):
                cden += (den - t) + a
            else:
                cden += (a - t) + den
            den = t
            tilde[k - 1] = (num + cnum) / (den + cden)

            slope = cwz / m2
            bx = slope * mw
            th = zbar - bx
            bhat[k - 1] = slope / lnj[k - 1]
            hat[k - 1] = th
            amse[k - 1] = th * th / k + bx * bx

    return tilde_a, check_a, hat_a, bhat_a, amse_a
