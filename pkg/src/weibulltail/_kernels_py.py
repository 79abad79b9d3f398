"""Pure-Python twin of ``_kernels.pyx``.

Every floating-point operation happens in the same order as in the
compiled kernel, so both backends return identical curves. Keep the two
files in lockstep.
"""

import math

import numpy as np


def tail_curves(u, lnj, llnj, kmax):
    """Estimator curves for k = 1..kmax in one pass over the upper spacings.

    Args:
        u: log order statistics in descending order, ``u[j-1] = log X_{n-j+1,n}``;
            at least ``kmax + 1`` entries.
        lnj: ``log(n/j)`` for j = 1..kmax.
        llnj: ``log(log(n/j))`` for j = 1..kmax.
        kmax: largest number of upper order statistics.

    Returns:
        Five float arrays of length ``kmax`` indexed by ``k - 1``: theta_tilde,
        theta_check, theta_hat, b_hat and amse_hat. Entries at k = 1 are NaN
        except theta_check.
    """
    if len(u) < kmax + 1 or len(lnj) < kmax or len(llnj) < kmax:
        raise ValueError("input arrays are shorter than kmax requires")
    u = [float(v) for v in u[: kmax + 1]]
    lnj = [float(v) for v in lnj[:kmax]]
    llnj = [float(v) for v in llnj[:kmax]]
    nan = math.nan
    tilde = [nan] * kmax
    check = [nan] * kmax
    hat = [nan] * kmax
    bhat = [nan] * kmax
    amse = [nan] * kmax

    # Neumaier-compensated running sums: (sum, correction)
    sz = csz = 0.0
    num = cnum = 0.0
    den = cden = 0.0
    # running means and centered co-moments of w_j = 1/log(n/j) and Z_j
    mw = mz = m2 = cwz = 0.0

    for k in range(1, kmax + 1):
        d = u[k - 1] - u[k]
        z = k * lnj[k - 1] * d

        t = sz + z
        if abs(sz) >= abs(z):
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

        # sum_{i<=k}(u_i - u_k) = sum_{j<k} j * (u_j - u_{j+1}), all terms >= 0
        jj = k - 1
        a = jj * (u[jj - 1] - u[jj])
        t = num + a
        if abs(num) >= abs(a):
            cnum += (num - t) + a
        else:
            cnum += (a - t) + num
        num = t
        a = jj * (llnj[jj - 1] - llnj[jj])
        t = den + a
        if abs(den) >= abs(a):
            cden += (den - t) + a
        else:
            cden += (a - t) + den
        den = t
        tilde[k - 1] = (num + cnum) / (den + cden)

        # LS line of Z on x_j = log(n/k) * w_j; slope * mean(x) is free of log(n/k)
        slope = cwz / m2
        bx = slope * mw
        th = zbar - bx
        bhat[k - 1] = slope / lnj[k - 1]
        hat[k - 1] = th
        amse[k - 1] = th * th / k + bx * bx

    return (
        np.array(tilde),
        np.array(check),
        np.array(hat),
        np.array(bhat),
        np.array(amse),
    )
