"""Multipole spectra, spin-moment diagnostics, and closed-form benchmarks.

A pure state of spin S decomposes onto the irreducible tensor basis as
rho = sum_{K,q} rho_Kq T_Kq with K = 0..2S.  The squared lengths
rho_K^2 = sum_q |rho_Kq|^2 are rotation invariants; their sum is the
purity Tr rho^2 = 1, and the monopole is pinned at 1/(2S+1).  Both facts
are verified at construction time rather than assumed.

Spin moments <S_z^n> are evaluated directly from the elementary symmetric
functions of the star coordinates (no amplitude assembly); transverse
components come from rotating the constellation so the requested axis
becomes z.  Stars at the south pole (infinite coordinate) break the
symmetric-function route, so those constellations are first rotated to a
chart where every coordinate is finite and the moment is taken along the
rotated image of z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

import numpy as np

from ._kernels import impl
from .angular import cg_band, cg_exact, multipole_norm, spin_cartesian
from .convert import state_from_constellation
from .core import (
    Constellation,
    DomainError,
    RotationSU2,
    SpinLabel,
    SpinState,
    rotate_constellation,
)
from .sympoly import elementary_scaled

__all__ = [
    "MultipoleSpectrum",
    "multipoles_from_state",
    "multipoles_from_constellation",
    "exact_multipole_lengths",
    "coherent_multipole_closed_form",
    "coherent_spectrum_lengths",
    "peak_rank_continuous",
    "noon_extreme_multipole",
    "star_addition_update",
    "one_design_residual",
    "stokes_moment_z",
    "stokes_vector",
    "dipole_length_sq_from_spin_vector",
]

_SUM_RULE_TOL = 1e-10
_HERMITICITY_TOL = 1e-12
_SPARSE_AMP_LIMIT = 4


@dataclass(frozen=True)
class MultipoleSpectrum:
    """Full set of tensor components rho_Kq of a pure spin state.

    Construction validates three structural facts and raises DomainError
    if any fails:

    * the monopole rho_00 equals 1/sqrt(2S+1),
    * rho_{K,-q} == (-1)^q conj(rho_Kq) entrywise (components for +q and
      -q are always computed independently upstream, so this is a real
      cross-check, not a tautology),
    * the squared lengths sum to 1 (purity of a pure state).
    """

    spin: SpinLabel
    components: Mapping[tuple[int, int], complex]
    _lengths: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        two_s = self.spin.two_s
        comps = dict(self.components)
        expected = {(k, q) for k in range(two_s + 1) for q in range(-k, k + 1)}
        if set(comps) != expected:
            raise DomainError("multipole spectrum is missing components")
        mono = comps[(0, 0)]
        if abs(mono - 1.0 / math.sqrt(two_s + 1)) > 1e-9:
            raise DomainError(f"monopole component off its pinned value: {mono}")
        for (k, q), val in comps.items():
            if q < 0:
                continue
            mirror = comps[(k, -q)]
            if abs(mirror - (-1) ** q * val.conjugate()) > _HERMITICITY_TOL:
                raise DomainError(
                    f"hermiticity violated at (K={k}, q={q}): "
                    f"{mirror} vs {val.conjugate()}"
                )
        lengths = np.zeros(two_s + 1)
        for (k, q), val in comps.items():
            lengths[k] += abs(val) ** 2
        if abs(lengths.sum() - 1.0) > _SUM_RULE_TOL:
            raise DomainError(
                f"multipole lengths sum to {lengths.sum()!r}, expected 1 (purity)"
            )
        lengths.flags.writeable = False
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_lengths", lengths)

    def component(self, k: int, q: int) -> complex:
        try:
            return self.components[(k, q)]
        except KeyError:
            raise DomainError(f"no component (K={k}, q={q})") from None

    def length_sq(self, k: int) -> float:
        if not 0 <= k <= self.spin.two_s:
            raise DomainError(f"rank {k} outside 0..{self.spin.two_s}")
        return float(self._lengths[k])

    def lengths_sq(self) -> np.ndarray:
        return self._lengths

    def peak_rank(self) -> int:
        """Rank K >= 1 with the largest squared length (monopole excluded)."""
        return int(np.argmax(self._lengths[1:])) + 1


def _components_sparse(state: SpinState) -> dict[tuple[int, int], complex]:
    two_s = state.spin.two_s
    amps = state.amps
    comps = {
        (k, q): 0j for k in range(two_s + 1) for q in range(-k, k + 1)
    }
    support = np.flatnonzero(np.abs(amps) > 0)
    for k1 in support:
        for k2 in support:
            q = int(k2 - k1)
            pair = amps[k1].conjugate() * amps[k2]
            for k in range(abs(q), two_s + 1):
                cg = cg_exact(
                    two_s, 2 * int(k1) - two_s, 2 * k, 2 * q, two_s, 2 * int(k2) - two_s
                ).float_value
                if cg != 0.0:
                    comps[(k, q)] += multipole_norm(two_s, k) * cg * pair
    return comps


def _components_banded(state: SpinState) -> dict[tuple[int, int], complex]:
    two_s = state.spin.two_s
    psi = state.amps[None, :]
    out = np.empty(1, dtype=complex)
    comps: dict[tuple[int, int], complex] = {}
    for k in range(two_s + 1):
        scale = multipole_norm(two_s, k)
        for q in range(-k, k + 1):
            lo, band = cg_band(two_s, k, q)
            impl.band_contract(psi, band, lo, q, out)
            comps[(k, q)] = scale * complex(out[0])
    return comps


def multipoles_from_state(state: SpinState) -> MultipoleSpectrum:
    """Tensor decomposition of a pure state (validated at construction)."""
    support = int(np.count_nonzero(state.amps))
    if support <= _SPARSE_AMP_LIMIT:
        comps = _components_sparse(state)
    else:
        comps = _components_banded(state)
    return MultipoleSpectrum(state.spin, comps)


def multipoles_from_constellation(constellation: Constellation) -> MultipoleSpectrum:
    return multipoles_from_state(state_from_constellation(constellation))


# ----------------------------------------------------------------------
# exact-rational lengths


def _as_exact_pair(value) -> tuple[Fraction, Fraction]:
    if isinstance(value, tuple):
        re, im = value
        return Fraction(re), Fraction(im)
    if isinstance(value, complex):
        return Fraction(value.real), Fraction(value.imag)
    return Fraction(value), Fraction(0)


def exact_multipole_lengths(two_s: int, amps: Sequence) -> list[Fraction]:
    """Squared multipole lengths as exact rationals.

    ``amps`` holds the (unnormalised) amplitudes as anything Fraction
    accepts, or ``(re, im)`` pairs / complex for non-real entries.  Works
    whenever every ratio of coupling coefficients inside one (K, q) band
    is a perfect rational square -- which covers states supported on few
    basis levels (basis states, superpositions of extremal levels,
    origin-pinned coherent states).  Raises DomainError when a surd-ratio
    obstruction makes the exact route impossible.
    """
    if two_s < 0 or len(amps) != two_s + 1:
        raise DomainError("amplitude list must have length 2S+1")
    pairs = [_as_exact_pair(a) for a in amps]
    norm2 = sum(re * re + im * im for re, im in pairs)
    if norm2 == 0:
        raise DomainError("state amplitudes are all zero")
    support = [k for k, (re, im) in enumerate(pairs) if re != 0 or im != 0]
    lengths: list[Fraction] = []
    for k in range(two_s + 1):
        total = Fraction(0)
        for q in range(k + 1):
            terms = []
            for k1 in support:
                k2 = k1 + q
                if k2 > two_s or k2 not in support:
                    continue
                ss = cg_exact(
                    two_s, 2 * k1 - two_s, 2 * k, 2 * q, two_s, 2 * k2 - two_s
                ).signed_square
                if ss != 0:
                    terms.append((k1, k2, ss))
            if not terms:
                continue
            ref = abs(terms[0][2])
            re_acc = Fraction(0)
            im_acc = Fraction(0)
            for k1, k2, ss in terms:
                ratio = abs(ss) / ref
                rn, rd = isqrt(ratio.numerator), isqrt(ratio.denominator)
                if rn * rn != ratio.numerator or rd * rd != ratio.denominator:
                    raise DomainError(
                        "exact evaluation impossible: coupling ratio "
                        f"{ratio} at (K={k}, q={q}) is not a perfect square"
                    )
                coef = Fraction(rn, rd) if ss > 0 else -Fraction(rn, rd)
                re1, im1 = pairs[k1]
                re2, im2 = pairs[k2]
                re_acc += coef * (re1 * re2 + im1 * im2)
                im_acc += coef * (re1 * im2 - im1 * re2)
            mod2 = ref * (re_acc * re_acc + im_acc * im_acc)
            total += mod2 if q == 0 else 2 * mod2
        lengths.append(Fraction(2 * k + 1, two_s + 1) * total / (norm2 * norm2))
    return lengths


# ----------------------------------------------------------------------
# closed-form spectra


def coherent_multipole_closed_form(spin: SpinLabel, k: int, exact: bool = False):
    """Squared length rho_K^2 of a spin coherent state (all stars together)."""
    two_s = spin.two_s
    if not 0 <= k <= two_s:
        raise DomainError(f"rank {k} outside 0..{two_s}")
    if exact:
        return Fraction(
            (2 * k + 1) * math.factorial(two_s) ** 2,
            math.factorial(two_s - k) * math.factorial(two_s + k + 1),
        )
    return math.exp(
        math.log(2 * k + 1)
        + 2 * math.lgamma(two_s + 1)
        - math.lgamma(two_s - k + 1)
        - math.lgamma(two_s + k + 2)
    )


def coherent_spectrum_lengths(spin: SpinLabel) -> np.ndarray:
    return np.array(
        [coherent_multipole_closed_form(spin, k) for k in range(spin.two_s + 1)]
    )


def peak_rank_continuous(spin: SpinLabel) -> float:
    """Real-valued stationary rank of the coherent spectrum, sqrt(S+1/2)-1/2.

    The integer peak of the actual spectrum is one of the two integers
    bracketing this value.
    """
    return math.sqrt(spin.two_s / 2.0 + 0.5) - 0.5


def noon_extreme_multipole(spin: SpinLabel, exact: bool = False):
    """Squared length of the top rank K = 2S for the two-antipodal-cluster
    state (equal superposition of the extremal levels).

    Integer S gives 1/2 + 1/binom(4S, 2S); half-integer S gives exactly 1/2.
    """
    two_s = spin.two_s
    if two_s < 1:
        raise DomainError("need at least one star")
    if two_s % 2 == 1:
        value = Fraction(1, 2)
    else:
        value = Fraction(1, 2) + Fraction(1, math.comb(2 * two_s, two_s))
    return value if exact else float(value)


def star_addition_update(spin: SpinLabel, zeta: complex) -> np.ndarray:
    """Spectrum of the constellation with 2S-1 stars at the north pole and
    one movable star at coordinate ``zeta``.

    Closed form: every length is a quadratic polynomial in |zeta|^2 whose
    rank dependence enters only through the prefactor and the coefficient
    ((K^2+K-2S)/(2S))^2 of the quartic term.
    """
    two_s = spin.two_s
    if two_s < 1:
        raise DomainError("need at least one star")
    a2 = abs(zeta) ** 2
    psi4 = (1.0 + a2 / two_s) ** -2
    out = np.empty(two_s + 1)
    for k in range(two_s + 1):
        log_c = (
            math.log(2 * k + 1)
            + 2 * math.lgamma(two_s)
            - math.lgamma(two_s - k + 1)
            - math.lgamma(two_s + k + 2)
        )
        bracket = (
            float(two_s * two_s)
            + 2.0 * two_s * a2
            + ((k * k + k - two_s) / two_s) ** 2 * a2 * a2
        )
        out[k] = math.exp(log_c) * psi4 * bracket
    return out


def one_design_residual(constellation: Constellation) -> float:
    """Norm of the summed star unit vectors; zero iff the constellation is
    a spherical 1-design (vanishing dipole in the point-mass sense)."""
    return float(np.linalg.norm(constellation.unit_vectors().sum(axis=0)))


# ----------------------------------------------------------------------
# spin moments straight from the star coordinates

_CHART_ROTATIONS = (
    RotationSU2.from_axis_angle((0.0, 1.0, 0.0), math.pi / 2),
    RotationSU2.from_axis_angle((1.0, 0.0, 0.0), math.pi / 2),
    RotationSU2.from_axis_angle((0.316227766016838, 0.948683298050514, 0.0), 1.91),
)


def _finite_chart(constellation: Constellation):
    """A rotation moving every star off the south pole, plus the image."""
    for rot in _CHART_ROTATIONS:
        rotated = rotate_constellation(constellation, rot)
        if rotated.n_infinite == 0:
            return rot, rotated
    # A constellation can occupy all fixed pivots; sweep a deterministic
    # low-discrepancy family of axes until one chart works.
    golden = (1 + math.sqrt(5)) / 2
    for j in range(1, 64):
        u = (j * golden) % 1.0
        v = (j * math.sqrt(2)) % 1.0
        theta = math.acos(1 - 2 * u)
        phi = 2 * math.pi * v
        axis = (
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )
        rot = RotationSU2.from_axis_angle(axis, math.pi / 2)
        rotated = rotate_constellation(constellation, rot)
        if rotated.n_infinite == 0:
            return rot, rotated
    raise DomainError("could not find a chart with all stars finite")


def _moment_z_finite(constellation: Constellation, n: int) -> float:
    two_s = constellation.spin.two_s
    e, _ = elementary_scaled(constellation.finite_zetas())
    e = np.asarray(e) / np.max(np.abs(e))
    num = 0.0
    den = 0.0
    half = two_s / 2.0
    for k in range(two_s + 1):
        w = abs(e[two_s - k]) ** 2 / math.comb(two_s, k)
        den += w
        num += (k - half) ** n * w
    return num / den


def _moment_rotated_axis(constellation: Constellation, n: int) -> float:
    """<(m.S)^n> where m is the rotated image of z, for constellations that
    need a chart change to clear stars off the south pole."""
    rot, rotated = _finite_chart(constellation)
    state = state_from_constellation(rotated)
    v = rot.spin_half_matrix()
    sxh, syh, szh = spin_cartesian(SpinLabel(1))
    m_half = v @ szh @ v.conj().T
    mhat = np.array(
        [2.0 * np.trace(m_half @ comp).real for comp in (sxh, syh, szh)]
    )
    sx, sy, sz = spin_cartesian(constellation.spin)
    op = mhat[0] * sx + mhat[1] * sy + mhat[2] * sz
    vec = state.amps.copy()
    for _ in range(n):
        vec = op @ vec
    return float(np.vdot(state.amps, vec).real)


def stokes_moment_z(constellation: Constellation, n: int, auto_rotate: bool = True) -> float:
    """<S_z^n> evaluated from the elementary symmetric functions of the
    star coordinates, with no amplitude assembly on the finite-star path.

    Stars at the south pole have no finite coordinate; with
    ``auto_rotate`` the constellation is moved to a finite chart and the
    moment is taken along the rotated axis, otherwise this raises.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"moment order must be a non-negative integer, got {n}")
    n = int(n)
    if constellation.n_infinite == 0:
        return _moment_z_finite(constellation, n)
    if not auto_rotate:
        raise DomainError(
            "constellation has stars at the south pole; pass auto_rotate=True "
            "or rotate it to a finite chart first"
        )
    return _moment_rotated_axis(constellation, n)


# In the ascending-m amplitude convention, rotating the constellation by
# +pi/2 about y (resp. x) turns the z-moment into <S_x> (resp. <S_y>).
_TO_X_AXIS = RotationSU2.from_axis_angle((0.0, 1.0, 0.0), math.pi / 2)
_TO_Y_AXIS = RotationSU2.from_axis_angle((1.0, 0.0, 0.0), math.pi / 2)


def stokes_vector(constellation: Constellation) -> np.ndarray:
    """(<S_x>, <S_y>, <S_z>) via the z-moment of suitably rotated copies."""
    return np.array(
        [
            stokes_moment_z(rotate_constellation(constellation, _TO_X_AXIS), 1),
            stokes_moment_z(rotate_constellation(constellation, _TO_Y_AXIS), 1),
            stokes_moment_z(constellation, 1),
        ]
    )


def dipole_length_sq_from_spin_vector(spin: SpinLabel, spin_vector) -> float:
    """rho_1^2 from the mean spin vector: 3|<S>|^2 / (S(S+1)(2S+1))."""
    two_s = spin.two_s
    s = two_s / 2.0
    vec = np.asarray(spin_vector, dtype=float)
    return float(3.0 * vec @ vec / (s * (s + 1.0) * (two_s + 1.0)))
