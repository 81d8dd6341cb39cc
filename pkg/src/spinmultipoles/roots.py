"""Polynomial root extraction tuned for characteristic star polynomials.

Multiple roots are first located by the simultaneous Aberth-Ehrlich
iteration (whose root estimates of a d-fold root scatter on a ring of
radius ~eps^(1/d)), then restored to a single root with multiplicity by
clustering at that adaptive radius, refining the cluster on the (d-1)-th
derivative, and validating that the leading d Taylor coefficients all
vanish relative to their rounding bounds.  The claimed multiset is finally
checked by re-expanding the polynomial; on mismatch the raw simple roots
are returned unharmed.
"""

from __future__ import annotations

import math

import numpy as np

from ._kernels import impl
from .core import DomainError
from .sympoly import elementary_scaled

ABERTH_TOL = 1e-13
ABERTH_MAX_ITER = 200


#### scalar polynomial helpers


def _taylor_terms(coeffs: np.ndarray, z: complex, n_terms: int) -> np.ndarray:
    """First n_terms Taylor coefficients p^(j)(z)/j! by synthetic division."""
    c = np.array(coeffs, dtype=complex)
    out = np.zeros(n_terms, dtype=complex)
    for j in range(n_terms):
        deg = c.shape[0] - 1
        b = np.empty(c.shape[0], dtype=complex)
        b[deg] = c[deg]
        for k in range(deg - 1, -1, -1):
            b[k] = c[k] + z * b[k + 1]
        out[j] = b[0]
        c = b[1:]
        if c.shape[0] == 0:
            break
    return out


def _taylor_bounds(abs_coeffs: np.ndarray, r: float, n_terms: int) -> np.ndarray:
    """Magnitude bounds sum_k |c_k| C(k,j) r^(k-j) for each Taylor order j."""
    return _taylor_terms(abs_coeffs.astype(complex), r, n_terms).real


def _taylor_ok(coeffs, abs_coeffs, mu, d, tau) -> bool:
    t = _taylor_terms(coeffs, mu, d)
    b = _taylor_bounds(abs_coeffs, abs(mu), d)
    return all(abs(t[j]) <= tau * b[j] + 1e-300 for j in range(d))


def _newton_on_derivative(coeffs, mu, d, iters=60):
    """Drive the (d-1)-th derivative to zero starting from mu."""
    for _ in range(iters):
        t = _taylor_terms(coeffs, mu, d + 1)
        if t[d] == 0:
            break
        step = t[d - 1] / (d * t[d])
        mu = mu - step
        if abs(step) <= 1e-15 * (1.0 + abs(mu)):
            break
    return mu


def _newton_simple(coeffs, z, iters=4):
    """Plain Newton polish of a simple root."""
    for _ in range(iters):
        t = _taylor_terms(coeffs, z, 2)
        if t[1] == 0:
            break
        step = t[0] / t[1]
        z = z - step
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


def _deflate(coeffs, mu, d):
    c = np.array(coeffs, dtype=complex)
    for _ in range(d):
        deg = c.shape[0] - 1
        b = np.empty(c.shape[0], dtype=complex)
        b[deg] = c[deg]
        for k in range(deg - 1, -1, -1):
            b[k] = c[k] + mu * b[k + 1]
        c = b[1:]
    return c


#### clustering


def _clusters(points: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage components at the given relative radius."""
    n = points.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    diff = np.abs(points[:, None] - points[None, :])
    scale = np.maximum(1.0, np.maximum(np.abs(points)[:, None], np.abs(points)[None, :]))
    ii, jj = np.nonzero(diff <= radius * scale)
    for i, j in zip(ii.tolist(), jj.tolist()):
        if i < j:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


#### solver


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0] - 1
    r = abs(coeffs[0] / coeffs[n]) ** (1.0 / n)
    r = min(max(r, 1e-6), 1e6)
    j = np.arange(n)
    # irrational angular offset and mild radial stagger break the symmetric
    # configurations (ring states) that can trap the simultaneous iteration
    angles = 2.0 * np.pi * (j + 0.5) / n + 0.4
    radii = r * (1.0 + 0.01 * ((j * 0.6180339887498949) % 1.0))
    return radii * np.exp(1j * angles)


def _aberth_solve(coeffs: np.ndarray, init: np.ndarray | None = None) -> np.ndarray:
    n = coeffs.shape[0] - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    if init is None or init.shape[0] != n:
        init = _initial_guesses(coeffs)
    roots = np.array(init, dtype=complex)
    status = impl.aberth_iterate(np.ascontiguousarray(coeffs, dtype=complex), roots, ABERTH_MAX_ITER, ABERTH_TOL)
    if status == -1:
        roots = np.roots(coeffs[::-1]).astype(complex)
    return roots


def _restore_multiplicities(poly: np.ndarray, raw: np.ndarray) -> list[tuple[complex, int]]:
    accepted: list[tuple[complex, int]] = []
    work = np.array(raw, dtype=complex)
    # estimates from the original solve; simple roots are emitted from here,
    # because re-solves on deflated polynomials lose accuracy
    kept = [complex(z) for z in raw]
    orig = np.array(poly, dtype=complex)
    poly = np.array(poly, dtype=complex)
    abs_poly = np.abs(poly)
    while work.shape[0] > 1:
        hit = None
        n_work = work.shape[0]
        # largest hypotheses first, so complete multiplets peel off intact
        for d in range(n_work, 1, -1):
            radius = 5.0 * ABERTH_TOL ** (1.0 / d)
            for cl in _clusters(work, radius):
                if len(cl) < d:
                    continue
                mu0 = complex(work[cl].mean())
                # cheap gates before the expensive refinement
                p0 = _taylor_terms(poly, mu0, 1)[0]
                b0 = _taylor_bounds(abs_poly, abs(mu0), 1)[0]
                if abs(p0) > 1e-6 * b0:
                    continue
                if not _taylor_ok(poly, abs_poly, mu0, d, tau=1e-3):
                    continue
                mu = _newton_on_derivative(poly, mu0, d)
                if not _taylor_ok(poly, abs_poly, mu, d, tau=1e-9):
                    continue
                hit = (mu, d, cl)
                break
            if hit:
                break
        if hit is None:
            break
        mu, d, cl = hit
        accepted.append((mu, d))
        poly = _deflate(poly, mu, d)
        abs_poly = np.abs(poly)
        order = np.argsort(np.abs(work[cl] - mu))
        drop = {cl[k] for k in order[:d].tolist()}
        rest = np.array([work[i] for i in range(n_work) if i not in drop], dtype=complex)
        keep_idx = np.argsort([abs(z - mu) for z in kept])[d:]
        kept = [kept[i] for i in sorted(keep_idx.tolist())]
        if rest.shape[0] and poly.shape[0] > 1:
            # re-solve only to expose further multiplets among the remainder;
            # these positions are never emitted
            work = _aberth_solve(poly, init=rest)
        else:
            work = rest
    # multiplet centers are re-refined on the original polynomial (detection
    # after the first deflation ran on deflated coefficients), and simple
    # roots come from the original solve, polished in place
    final = [(_newton_on_derivative(orig, mu, d), d) for mu, d in accepted]
    final += [(complex(_newton_simple(orig, z)), 1) for z in kept]
    return final


def _verify_multiset(monic_target: np.ndarray, pairs: list[tuple[complex, int]], tol: float) -> bool:
    """Re-expand the claimed multiset and compare coefficient by coefficient.

    Each row is judged against the largest magnitude that coefficient can
    reach for roots of these moduli (the absolute-value expansion), so a
    handful of remote stars does not drown the small coefficients, and
    honest restorations of remote multiplets are not rejected for rounding
    incurred during re-expansion.
    """
    n = monic_target.shape[0] - 1
    roots: list[complex] = []
    for z, m in pairs:
        roots.extend([z] * m)
    if len(roots) != n:
        return False
    e, _ = elementary_scaled(roots)
    recon = np.array([(-1.0) ** (n - k) * e[n - k] for k in range(n + 1)])
    lead = recon[n]
    if lead == 0 or not np.isfinite(lead):
        return False
    recon = recon / lead
    eb, _ = elementary_scaled([abs(z) for z in roots])
    bound = np.abs(np.array([eb[n - k] for k in range(n + 1)]))
    if not (bound[n] > 0.0 and math.isfinite(bound[n])):
        return False
    bound = bound / bound[n]
    if not (np.all(np.isfinite(recon)) and np.all(np.isfinite(bound))):
        return False
    return bool(np.all(np.abs(recon - monic_target) <= tol * bound + tol))


def _merge_close(pairs: list[tuple[complex, int]], radius: float) -> list[tuple[complex, int]]:
    """Belt-and-braces merge of still-coincident entries (weighted centroid)."""
    if len(pairs) <= 1:
        return pairs
    pts = np.array([z for z, _ in pairs])
    merged: list[tuple[complex, int]] = []
    for cl in _clusters(pts, radius):
        w = np.array([pairs[i][1] for i in cl], dtype=float)
        mu = complex((pts[cl] * w).sum() / w.sum())
        merged.append((mu, int(w.sum())))
    return merged


def roots_with_multiplicity(coeffs, cluster_tol: float = 1e-6) -> list[tuple[complex, int]]:
    """All roots of the polynomial, with multiplicities summing to the degree.

    `coeffs` is lowest-order first and must have a nonzero leading entry.
    Exact zeros at the low end are returned as a root at 0 with the
    corresponding multiplicity (no floating tolerance involved).
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.shape[0] < 2:
        raise DomainError("need a polynomial of degree >= 1")
    if c[-1] == 0:
        raise DomainError("leading coefficient must be nonzero")
    c = c / np.max(np.abs(c))
    out: list[tuple[complex, int]] = []
    first_nonzero = int(np.nonzero(c)[0][0])
    if first_nonzero > 0:
        out.append((0j, first_nonzero))
        c = c[first_nonzero:]
    if c.shape[0] == 1:
        return out
    raw = _aberth_solve(c)
    restored = _restore_multiplicities(c, raw)
    monic = c / c[-1]
    if not _verify_multiset(monic, restored, tol=1e-8):
        restored = [(complex(z), 1) for z in raw]
    return out + _merge_close(restored, cluster_tol)
