"""Parametrized star families connecting the coherent and NOON extremes.

Two smooth motions of the constellation are provided, each with closed-form
symmetric polynomials / multipole lengths next to the generic pipeline:

* ring family: all 2S stars share one polar angle and sit equally spaced in
  azimuth.  At angle 0 they stack at the north pole (coherent); at pi/2 they
  form the equatorial NOON configuration; at pi they stack at the south pole.
* spreading family: the stars start stacked at zeta = 1 and slide apart along
  the equator at equal rates, all arriving in NOON position at t = 1.  The
  unidirectional variant moves every star the same way round; the symmetric
  variant spreads them in both directions about zeta = 1, which makes its
  elementary symmetric polynomials real.

The two spreading variants occupy the same positions up to a rigid rotation
about z, so their multipole lengths coincide at every t.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .convert import state_from_elementary
from .core import ZETA_INF, Constellation, DomainError, SpinLabel, SpinState
from .multipoles import (
    coherent_spectrum_lengths,
    multipoles_from_constellation,
    multipoles_from_state,
)

__all__ = [
    "TransitionSpec",
    "ring_constellation",
    "ring_multipoles_closed_form",
    "spread_constellation",
    "spread_elementary_closed_form",
    "spread_small_t_quadratic",
    "spread_state_closed_form",
    "transition_sweep",
]

TRANSITION_KINDS = ("ring", "spread_unidirectional", "spread_symmetric")

_PARAM_HI = {
    "ring": math.pi,
    "spread_unidirectional": 1.0,
    "spread_symmetric": 1.0,
}


@dataclass(frozen=True)
class TransitionSpec:
    """One point on a named transition family.

    ``parameter`` is the polar angle in [0, pi] for the ring family and the
    spreading fraction in [0, 1] for both spreading families.
    """

    kind: str
    spin: SpinLabel
    parameter: float

    def __post_init__(self):
        if self.kind not in TRANSITION_KINDS:
            raise DomainError(
                f"unknown transition kind {self.kind!r}; expected one of {TRANSITION_KINDS}"
            )
        object.__setattr__(self, "parameter", float(self.parameter))
        hi = _PARAM_HI[self.kind]
        if not 0.0 <= self.parameter <= hi:
            raise DomainError(
                f"{self.kind} parameter must lie in [0, {hi:g}], got {self.parameter}"
            )

    def constellation(self) -> Constellation:
        if self.kind == "ring":
            return ring_constellation(self.spin, self.parameter)
        return spread_constellation(
            self.spin, self.parameter, symmetric=self.kind == "spread_symmetric"
        )


#### ring family


def _check_polar(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"polar angle must lie in [0, pi], got {theta}")
    return theta


def ring_constellation(spin: SpinLabel, theta: float) -> Constellation:
    """All 2S stars equally spaced around the circle of polar angle theta."""
    theta = _check_polar(theta)
    two_s = spin.two_s
    if theta == math.pi:
        return Constellation.from_zetas(two_s, [ZETA_INF] * two_s)
    tau = math.tan(theta / 2.0)
    zetas = [tau * cmath.exp(2j * math.pi * j / two_s) for j in range(1, two_s + 1)]
    return Constellation.from_zetas(two_s, zetas)


def ring_multipoles_closed_form(spin: SpinLabel, theta: float) -> np.ndarray:
    """Multipole lengths rho_K^2, K = 0..2S, of the ring configuration.

    Even ranks below 2S keep their coherent-state values for every angle; odd
    ranks are damped by the square of (x-1)/(x+1) with x = tan(theta/2)^(4S);
    the top rank absorbs the rest of the unit sum.  The damping factor is
    evaluated through 1/x on the southern half so it never overflows.
    """
    theta = _check_polar(theta)
    two_s = spin.two_s
    if two_s < 2:
        raise DomainError("the ring family needs at least two stars")
    tau = math.tan(theta / 2.0)
    if tau <= 1.0:
        x = tau ** (2 * two_s)
        bracket = (x - 1.0) / (x + 1.0)
    else:
        y = (1.0 / tau) ** (2 * two_s)
        bracket = (1.0 - y) / (1.0 + y)
    out = coherent_spectrum_lengths(spin).copy()
    out[1:two_s:2] *= bracket * bracket
    out[two_s] = max(0.0, 1.0 - float(out[:two_s].sum()))
    return out


#### spreading family


def _check_fraction(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"spreading fraction must lie in [0, 1], got {t}")
    return t


def spread_constellation(spin: SpinLabel, t: float, symmetric: bool = False) -> Constellation:
    """Equatorial stars a fraction t of the way from stacked to equally spaced.

    Unidirectional: zeta_j = exp(2*pi*i*t*j / 2S), j = 1..2S.  Symmetric: the
    exponents are recentered to j - (2S+1)/2, spreading the stars both ways
    about zeta = 1 (half-integer offsets when the star count is even — an
    extension of the odd-count rule that keeps the spacing, and hence all
    multipole lengths, identical to the unidirectional family).
    """
    t = _check_fraction(t)
    two_s = spin.two_s
    shift = 0.5 * (two_s + 1) if symmetric else 0.0
    zetas = [
        cmath.exp(2j * math.pi * t * (j - shift) / two_s) for j in range(1, two_s + 1)
    ]
    return Constellation.from_zetas(two_s, zetas)


def _sym_sine_product(two_s: int, t: float, order: int) -> float:
    # e_order of the symmetric family as a product of sine ratios; every
    # denominator argument stays inside (0, pi) for t in (0, 1], and the
    # matching numerator zero at t = 1 is what sends e_k -> 0 for k < 2S.
    if t == 0.0:
        return float(math.comb(two_s, order))
    step = math.pi * t / two_s
    acc = 1.0
    for i in range(1, order + 1):
        acc *= math.sin(step * (two_s - order + i)) / math.sin(step * i)
    return acc


def _uni_phase(two_s: int, t: float, order: int) -> complex:
    return cmath.exp(1j * math.pi * t * order * (two_s + 1) / two_s)


def spread_elementary_closed_form(
    spin: SpinLabel, t: float, order: int, symmetric: bool = False
) -> complex:
    """Closed-form elementary symmetric polynomial e_order of the spread stars.

    Symmetric family: a real product of sine ratios, e.g.
    e_1(t) = sin(pi t) / sin(pi t / 2S).  The unidirectional value is the same
    magnitude times the rigid-rotation phase exp(i pi t order (2S+1) / 2S).
    Only orders 1..3 are part of the contract; higher orders should go through
    the polynomial pipeline.
    """
    if order not in (1, 2, 3):
        raise DomainError(f"closed form covers orders 1..3, got {order}")
    t = _check_fraction(t)
    val = _sym_sine_product(spin.two_s, t, order)
    if symmetric:
        return complex(val)
    return _uni_phase(spin.two_s, t, order) * val


def spread_state_closed_form(spin: SpinLabel, t: float, symmetric: bool = False) -> SpinState:
    """The spread-family state assembled from closed-form polynomials only.

    No root finding is involved: all 2S elementary symmetric polynomials come
    from the sine-ratio products and the state follows by direct coefficient
    assembly, which makes this an independent cross-check of the pipeline.
    """
    t = _check_fraction(t)
    two_s = spin.two_s
    e = np.array(
        [_sym_sine_product(two_s, t, k) for k in range(two_s + 1)], dtype=complex
    )
    if not symmetric:
        e *= np.array([_uni_phase(two_s, t, k) for k in range(two_s + 1)])
    return state_from_elementary(spin, e)


def spread_small_t_quadratic(spin: SpinLabel, order: int) -> float:
    """Coefficient c_j in e_j(t) = C(2S,j) - c_j t^2 + O(t^4), symmetric family.

    c_j = C(2S-2, j-1) * pi^2 (4S^2 - 1) / (12 S); the quartic remainder is
    what the acceptance checks probe by Richardson comparison.
    """
    if not isinstance(order, int) or order < 1:
        raise DomainError(f"expansion order must be a positive integer, got {order}")
    two_s = spin.two_s
    if two_s < 2 or order > two_s:
        return 0.0
    scale = math.pi * math.pi * (two_s * two_s - 1) / (6.0 * two_s)
    return math.comb(two_s - 2, order - 1) * scale


#### sweeps


def _closed_form_lengths(kind: str, spin: SpinLabel, param: float) -> np.ndarray:
    if kind == "ring":
        return ring_multipoles_closed_form(spin, param)
    state = spread_state_closed_form(spin, param, symmetric=kind == "spread_symmetric")
    return multipoles_from_state(state).lengths_sq()


def transition_sweep(
    kind: str, spin: SpinLabel, samples: int
) -> list[tuple[float, int, float, float]]:
    """Tabulate pipeline vs closed-form multipole lengths along one family.

    Returns one row (parameter, K, rho_sq_pipeline, rho_sq_closed_form) per
    rank and sample, parameters spaced evenly over the family's full range.
    Both columns are always emitted so any drift between the generic pipeline
    and the closed forms is visible in the output itself.  Each sample is
    independent, so callers may shard the parameter grid freely.
    """
    if kind not in TRANSITION_KINDS:
        raise DomainError(
            f"unknown transition kind {kind!r}; expected one of {TRANSITION_KINDS}"
        )
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")
    rows = []
    for param in np.linspace(0.0, _PARAM_HI[kind], samples):
        param = float(param)
        spec = TransitionSpec(kind, spin, param)
        pipeline = multipoles_from_constellation(spec.constellation()).lengths_sq()
        closed = _closed_form_lengths(kind, spin, param)
        for k in range(spin.two_s + 1):
            rows.append((param, k, float(pipeline[k]), float(closed[k])))
    return rows
