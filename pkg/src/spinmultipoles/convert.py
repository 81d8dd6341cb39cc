"""Conversions between amplitudes, star constellations and the
characteristic polynomial, plus phase-space (Husimi-type) evaluation.

The characteristic polynomial of a state is
    f(z) = sum_k sqrt(C(2S, k)) psi_{k-S} z^k,
its roots are the stereographic star coordinates, and each star at
infinity lowers the degree by one.  States assembled from constellations
carry a deterministic global phase: the coefficient of the highest
finite-star power is real and positive.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ._kernels import impl
from .core import (
    ZETA_INF,
    Constellation,
    DomainError,
    RotationSU2,
    SpinLabel,
    SpinState,
    Star,
    is_infinite,
    rotate_constellation,
)
from .roots import roots_with_multiplicity
from .sympoly import elementary_scaled

# stars farther than this from the plane origin make the plain coefficient
# assembly ill-conditioned; a rigid rotation moves them inboard first
CONDITION_LIMIT = 1e3


@lru_cache(maxsize=None)
def _sqrt_binoms(two_s: int) -> np.ndarray:
    v = np.array([math.sqrt(math.comb(two_s, k)) for k in range(two_s + 1)])
    v.flags.writeable = False
    return v


def stellar_coefficients(state: SpinState) -> np.ndarray:
    """Coefficients of the characteristic polynomial, lowest order first."""
    return _sqrt_binoms(state.spin.two_s) * state.amps


def stellar_eval(state: SpinState, zeta) -> complex:
    """Value of the characteristic polynomial at a finite point."""
    if zeta is ZETA_INF:
        raise DomainError("characteristic polynomial is evaluated at finite points only")
    coeffs = stellar_coefficients(state)
    acc = 0j
    for c in coeffs[::-1]:
        acc = acc * zeta + c
    return complex(acc)


#### constellation -> state


def state_from_elementary(spin: SpinLabel, e, n_infinite: int = 0) -> SpinState:
    """Assemble the state whose finite stars have the given elementary
    symmetric polynomials (any overall scale; e[0] need not be 1)."""
    e = np.asarray(e, dtype=complex)
    r = spin.two_s - n_infinite
    if e.shape != (r + 1,):
        raise DomainError(f"need e_0..e_{r} for {r} finite stars, got shape {e.shape}")
    f = np.zeros(spin.two_s + 1, dtype=complex)
    signs = np.where((r - np.arange(r + 1)) % 2 == 0, 1.0, -1.0)
    f[: r + 1] = signs * e[::-1]
    amps = f / _sqrt_binoms(spin.two_s)
    norm = np.linalg.norm(amps)
    if not (norm > 0.0 and math.isfinite(norm)):
        raise DomainError("constellation coefficients overflowed; rotate it inboard first")
    return SpinState(spin, _fix_phase(amps / norm, r))


def _fix_phase(amps: np.ndarray, lead_index: int) -> np.ndarray:
    lead = amps[lead_index]
    if abs(lead) > 0.0:
        amps = amps * (lead.conjugate() / abs(lead))
    return amps


def state_from_constellation(c: Constellation, *, condition_rotation: bool = True) -> SpinState:
    """The (projective) state whose stars are exactly the given multiset."""
    finite = c.finite_zetas()
    if condition_rotation and finite and max(abs(z) for z in finite) > CONDITION_LIMIT:
        return _conditioned_state(c)
    e, _ = elementary_scaled(finite)
    return state_from_elementary(c.spin, e, c.n_infinite)


def _conditioned_state(c: Constellation) -> SpinState:
    candidates = [
        RotationSU2.from_axis_angle((0.0, 1.0, 0.0), math.pi / 2),
        RotationSU2.from_axis_angle((1.0, 0.0, 0.0), math.pi / 2),
        RotationSU2.from_axis_angle((0.31622777, 0.9486833, 0.0), 1.91),
    ]
    best = None
    for r in candidates:
        rc = rotate_constellation(c, r)
        worst = max((abs(z) for z in rc.finite_zetas()), default=0.0)
        if best is None or worst < best[0]:
            best = (worst, r, rc)
    _, r, rc = best
    inner = state_from_constellation(rc, condition_rotation=False)
    rotated_back = rotate_state(inner, r.inverse())
    return SpinState(c.spin, _fix_phase(rotated_back.amps, c.spin.two_s - c.n_infinite))


#### state -> constellation


def constellation_from_state(state: SpinState, cluster_tol: float = 1e-6) -> Constellation:
    """Extract the 2S stars (with multiplicity and points at infinity)."""
    two_s = state.spin.two_s
    if two_s == 0:
        return Constellation(state.spin, ())
    coeffs = stellar_coefficients(state)
    scale = float(np.max(np.abs(coeffs)))
    coeffs = coeffs / scale
    r = two_s
    while r > 0 and abs(coeffs[r]) <= 1e-12:
        r -= 1
    n_inf = two_s - r
    zetas: list = [ZETA_INF] * n_inf
    if r >= 1:
        for root, mult in roots_with_multiplicity(coeffs[: r + 1], cluster_tol=cluster_tol):
            zetas.extend([root] * mult)
    return Constellation(state.spin, tuple(Star.from_zeta(z) for z in zetas))


#### rigid rotation of a state


def rotate_state(state: SpinState, r: RotationSU2) -> SpinState:
    """Rotate so the stars move by the Moebius action of `r`.

    Exact homographic substitution on the characteristic polynomial:
    f'(z) = sum_k f_k (conj(alpha) z - beta)^k (conj(beta) z + alpha)^(2S-k).
    """
    two_s = state.spin.two_s
    f = stellar_coefficients(state)
    a, b = r.alpha, r.beta
    lin_a = np.array([-b, a.conjugate()])  # conj(alpha) z - beta, low first
    lin_b = np.array([a, b.conjugate()])  # conj(beta) z + alpha, low first
    # powers of the two linear factors, built incrementally
    pow_a = [np.array([1.0 + 0j])]
    pow_b = [np.array([1.0 + 0j])]
    for _ in range(two_s):
        pow_a.append(np.convolve(pow_a[-1], lin_a))
        pow_b.append(np.convolve(pow_b[-1], lin_b))
    out = np.zeros(two_s + 1, dtype=complex)
    for k in range(two_s + 1):
        if f[k] == 0:
            continue
        out += f[k] * np.convolve(pow_a[k], pow_b[two_s - k])
    amps = out / _sqrt_binoms(two_s)
    return SpinState(state.spin, amps)


#### phase-space density


def _point_coord(p):
    """Stereographic coordinate of a phase-space point given as a Star, the
    infinity sentinel, or a plain complex number."""
    if isinstance(p, Star):
        return ZETA_INF if p.is_infinite else p.zeta
    if is_infinite(p):
        return ZETA_INF
    z = complex(p)
    if math.isnan(z.real) or math.isnan(z.imag):
        raise DomainError("phase-space point is NaN")
    if math.isinf(z.real) or math.isinf(z.imag):
        return ZETA_INF
    return z


def husimi(state: SpinState, points) -> np.ndarray:
    """Phase-space density Q at each given sphere point.

    Points may be Stars or plain stereographic coordinates.  A point with
    coordinate z labels the coherent state |z>, and
    Q(z) = |<z|psi>|^2 = |f(conj(z))|^2 / (1+|z|^2)^(2S) with f the
    characteristic polynomial.  Q therefore vanishes exactly at the
    complex-conjugate coordinate of every star, and a coherent state
    scores 1 at its own label point.  Evaluation is in log-magnitude
    space (reversed polynomial outside the unit disk), so arbitrarily
    remote points and large spins do not overflow.
    """
    coeffs = np.ascontiguousarray(stellar_coefficients(state))
    rev = np.ascontiguousarray(coeffs[::-1])
    coords = [_point_coord(p) for p in points]
    out = np.empty(len(coords), dtype=float)
    kernel_idx = []
    for i, zeta in enumerate(coords):
        if zeta is ZETA_INF:
            out[i] = abs(coeffs[-1]) ** 2
        elif zeta == 0:
            out[i] = abs(coeffs[0]) ** 2
        else:
            kernel_idx.append(i)
    if kernel_idx:
        z = np.ascontiguousarray([coords[i] for i in kernel_idx], dtype=complex)
        logq = np.empty(len(kernel_idx), dtype=float)
        impl.husimi_logq(coeffs, rev, z, state.spin.two_s, logq)
        out[kernel_idx] = np.exp(logq)
    return out


def husimi_grid(state: SpinState, n_theta: int = 181, n_phi: int = 360):
    """Q on a regular (theta, phi) product grid; returns (thetas, phis, Q).

    thetas include both poles; phis cover [0, 2pi) without the endpoint.
    Same point convention as `husimi`.
    """
    if n_theta < 2 or n_phi < 1:
        raise DomainError("grid needs at least 2 colatitudes and 1 azimuth")
    coeffs = np.ascontiguousarray(stellar_coefficients(state))
    rev = np.ascontiguousarray(coeffs[::-1])
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.arange(n_phi) * (2.0 * math.pi / n_phi)
    q = np.empty((n_theta, n_phi), dtype=float)
    # interior rows through the kernel at z = tan(theta/2) e^{-i phi}
    radii = np.tan(thetas[1:-1] / 2.0)
    z = (radii[:, None] * np.exp(-1j * phis)[None, :]).ravel()
    logq = np.empty(z.shape[0], dtype=float)
    impl.husimi_logq(coeffs, rev, np.ascontiguousarray(z), state.spin.two_s, logq)
    q[1:-1, :] = np.exp(logq).reshape(n_theta - 2, n_phi)
    q[0, :] = abs(coeffs[0]) ** 2
    q[-1, :] = abs(coeffs[-1]) ** 2
    return thetas, phis, q
