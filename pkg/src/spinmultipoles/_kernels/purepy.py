"""Pure-python twins of the compiled kernels (numpy vectorized).

Same signatures and in-place semantics as `_ckern`; selected automatically
when the extension is unavailable or SPINMULTIPOLES_PURE is set.
"""

from __future__ import annotations

import numpy as np


def aberth_iterate(coeffs: np.ndarray, roots: np.ndarray, max_iter: int, tol: float) -> int:
    """Simultaneous root refinement (Aberth-Ehrlich), in place on `roots`.

    `coeffs` is the full coefficient vector, lowest order first, with a
    nonzero leading entry.  Returns the number of sweeps used, or -1 if the
    tolerance was not reached within `max_iter`.
    """
    n = coeffs.shape[0] - 1
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    for it in range(max_iter):
        z = roots
        p = np.full_like(z, coeffs[n])
        for k in range(n - 1, -1, -1):
            p = p * z + coeffs[k]
        dp = np.full_like(z, dcoeffs[n - 1])
        for k in range(n - 2, -1, -1):
            dp = dp * z + dcoeffs[k]
        bad = dp == 0
        if bad.any():
            roots[bad] = roots[bad] * (1 + 1e-8) + 1e-8
            continue
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        tiny = np.abs(diff) < 1e-300
        if tiny.any():
            diff[tiny] = 1e-150
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        denom = 1.0 - newton * s
        denom[denom == 0] = 1e-150
        w = newton / denom
        roots -= w
        if np.all(np.abs(w) <= tol * (1.0 + np.abs(roots))):
            return it + 1
    return -1


def husimi_logq(coeffs: np.ndarray, rev: np.ndarray, z: np.ndarray, two_s: int, out: np.ndarray) -> None:
    """log of the phase-space density at each point of `z`, written to `out`.

    `coeffs` are the characteristic-polynomial coefficients (lowest first,
    length two_s + 1) and `rev` the same reversed; points with |z| > 1 are
    evaluated through the reversed polynomial so nothing overflows.
    """
    r2 = z.real**2 + z.imag**2
    inner = r2 <= 1.0
    la = np.empty(z.shape[0], dtype=float)

    w = np.conj(z[inner])
    p = np.full_like(w, coeffs[two_s])
    for k in range(two_s - 1, -1, -1):
        p = p * w + coeffs[k]
    with np.errstate(divide="ignore"):
        la[inner] = np.log(np.abs(p))

    w = 1.0 / np.conj(z[~inner])
    p = np.full_like(w, rev[two_s])
    for k in range(two_s - 1, -1, -1):
        p = p * w + rev[k]
    with np.errstate(divide="ignore"):
        la[~inner] = 0.5 * two_s * np.log(r2[~inner]) + np.log(np.abs(p))

    out[:] = 2.0 * la - two_s * np.log1p(r2)


def band_contract(psi: np.ndarray, cg: np.ndarray, lo: int, q: int, out: np.ndarray) -> None:
    """out[b] = sum_j cg[j] * conj(psi[b, lo+j]) * psi[b, lo+q+j]."""
    length = cg.shape[0]
    seg1 = psi[:, lo : lo + length]
    seg2 = psi[:, lo + q : lo + q + length]
    np.matmul(np.conj(seg1) * seg2, cg.astype(complex), out=out)
