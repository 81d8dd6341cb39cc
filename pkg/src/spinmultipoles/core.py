"""Domain types: spin labels, states, stars, constellations, rotations.

Conventions (binding for the whole package):

* amplitude vectors are indexed k = S + m ascending, k = 0 .. 2S;
* the stereographic coordinate of the sphere point (theta, phi) is
  zeta = tan(theta/2) * exp(-i*phi), with theta = pi (south pole) mapped
  to a distinguished point at infinity;
* an SU(2) element (alpha, beta) acts on star coordinates by the Moebius map
  zeta -> (alpha*zeta + beta) / (-conj(beta)*zeta + conj(alpha)), which
  rotates star unit vectors by exactly the SO(3) rotation returned by
  `RotationSU2.from_axis_angle`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """Raised when an operation is asked to violate a documented invariant."""


#### extended complex plane


class _PointAtInfinity:
    """The single point at infinity of the extended complex plane."""

    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZETA_INF"


ZETA_INF = _PointAtInfinity()
ExtendedComplex = "complex | _PointAtInfinity"


def is_infinite(zeta) -> bool:
    return zeta is ZETA_INF


#### spin labels and states


@dataclass(frozen=True)
class SpinLabel:
    """Spin quantum number, stored doubled so half-integers stay exact."""

    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, (int, np.integer)) or self.two_s < 0:
            raise DomainError(f"two_s must be a non-negative integer, got {self.two_s!r}")
        object.__setattr__(self, "two_s", int(self.two_s))

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def dimension(self) -> int:
        return self.two_s + 1

    def m_values(self) -> np.ndarray:
        """All m from -S to S ascending (floats; exact for the doubled grid)."""
        return (np.arange(self.dimension) - self.s).astype(float)


@dataclass(frozen=True)
class SpinState:
    """Normalized pure state; amps[k] = psi_{k-S} in the ascending-m basis."""

    spin: SpinLabel
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.spin.dimension,):
            raise DomainError(
                f"amplitude vector has length {amps.shape}, expected {self.spin.dimension}"
            )
        norm = np.linalg.norm(amps)
        if not norm > 0.0:
            raise DomainError("zero state cannot be normalized")
        if abs(norm - 1.0) > 1e-12:
            amps = amps / norm
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amps(cls, two_s: int, amps) -> "SpinState":
        return cls(SpinLabel(two_s), np.asarray(amps, dtype=complex))

    def overlap(self, other: "SpinState") -> complex:
        if other.spin != self.spin:
            raise DomainError("states have different spins")
        return complex(np.vdot(self.amps, other.amps))


def state_equiv(a: SpinState, b: SpinState, tol: float = 1e-10) -> bool:
    """Projective equality: |<a|b>| > 1 - tol."""
    return abs(a.overlap(b)) > 1.0 - tol


#### stars


@dataclass(frozen=True)
class Star:
    """A point on the unit sphere in both angle and stereographic form."""

    theta: float
    phi: float
    zeta: object  # complex, or ZETA_INF when theta == pi

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Star":
        theta = float(theta)
        phi = float(phi)
        if theta < -1e-12 or theta > math.pi + 1e-12:
            raise DomainError(f"theta = {theta} outside [0, pi]")
        theta = min(max(theta, 0.0), math.pi)
        if theta == 0.0:
            return cls(0.0, 0.0, 0.0 + 0.0j)
        if theta == math.pi:
            return cls(math.pi, 0.0, ZETA_INF)
        phi = phi % TWO_PI
        zeta = math.tan(theta / 2.0) * cmath.exp(-1j * phi)
        return cls(theta, phi, zeta)

    @classmethod
    def from_zeta(cls, zeta) -> "Star":
        if is_infinite(zeta):
            return cls(math.pi, 0.0, ZETA_INF)
        zeta = complex(zeta)
        if not (math.isfinite(zeta.real) and math.isfinite(zeta.imag)):
            if math.isnan(zeta.real) or math.isnan(zeta.imag):
                raise DomainError("star coordinate is NaN")
            return cls(math.pi, 0.0, ZETA_INF)  # complex infinity = south pole
        r = abs(zeta)
        theta = 2.0 * math.atan(r)
        if r == 0.0:
            return cls(0.0, 0.0, 0.0 + 0.0j)
        phi = (-cmath.phase(zeta)) % TWO_PI
        return cls(theta, phi, zeta)

    @classmethod
    def from_unit_vector(cls, v) -> "Star":
        x, y, z = (float(c) for c in v)
        theta = math.acos(min(1.0, max(-1.0, z)))
        phi = math.atan2(y, x) % TWO_PI
        return cls.from_angles(theta, phi)

    @property
    def is_infinite(self) -> bool:
        return is_infinite(self.zeta)

    def antipode(self) -> "Star":
        """The diametrically opposite sphere point (zeta -> -1/conj(zeta))."""
        if self.is_infinite:
            return Star.from_zeta(0j)
        if self.zeta == 0:
            return Star.from_zeta(ZETA_INF)
        return Star.from_zeta(-1.0 / self.zeta.conjugate())

    def unit_vector(self) -> np.ndarray:
        if self.is_infinite:
            return np.array([0.0, 0.0, -1.0])
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


def stereographic_to_sphere(zeta) -> Star:
    """Map an extended-complex coordinate to its sphere point."""
    return Star.from_zeta(zeta)


def chordal_distance(a: Star, b: Star) -> float:
    """3D Euclidean distance between the star unit vectors."""
    return float(np.linalg.norm(a.unit_vector() - b.unit_vector()))


#### constellations


@dataclass(frozen=True)
class Constellation:
    """Unordered multiset of exactly 2S stars (infinite stars kept explicit)."""

    spin: SpinLabel
    stars: tuple

    def __post_init__(self):
        stars = tuple(self.stars)
        if len(stars) != self.spin.two_s:
            raise DomainError(
                f"constellation needs exactly {self.spin.two_s} stars, got {len(stars)}"
            )
        object.__setattr__(self, "stars", stars)

    @classmethod
    def from_zetas(cls, two_s: int, zetas) -> "Constellation":
        return cls(SpinLabel(two_s), tuple(Star.from_zeta(z) for z in zetas))

    @classmethod
    def from_angles(cls, two_s: int, pairs) -> "Constellation":
        return cls(SpinLabel(two_s), tuple(Star.from_angles(t, p) for t, p in pairs))

    def finite_zetas(self) -> list:
        return [s.zeta for s in self.stars if not s.is_infinite]

    @property
    def n_infinite(self) -> int:
        return sum(1 for s in self.stars if s.is_infinite)

    def unit_vectors(self) -> np.ndarray:
        return np.array([s.unit_vector() for s in self.stars])

    def matches(self, other: "Constellation", tol: float = 1e-8) -> bool:
        """Multiset equality under chordal distance `tol`."""
        return self.match_distance(other) < tol

    def match_distance(self, other: "Constellation") -> float:
        """Largest pairwise chordal distance under the best star pairing.

        Greedy nearest-neighbour first; on an ambiguous (tied) greedy step the
        optimal assignment is solved instead, since degenerate stars make the
        greedy order ill-defined.
        """
        if other.spin != self.spin:
            raise DomainError("constellations have different spins")
        if self.spin.two_s == 0:
            return 0.0
        va, vb = self.unit_vectors(), other.unit_vectors()
        dist = np.linalg.norm(va[:, None, :] - vb[None, :, :], axis=2)
        n = dist.shape[0]
        used = np.zeros(n, dtype=bool)
        worst = 0.0
        for i in range(n):
            row = np.where(used, np.inf, dist[i])
            j = int(np.argmin(row))
            near = np.isclose(row, row[j], rtol=0.0, atol=1e-12).sum()
            if near > 1:
                return self._assignment_distance(dist)
            used[j] = True
            worst = max(worst, float(row[j]))
        return worst

    @staticmethod
    def _assignment_distance(dist: np.ndarray) -> float:
        from scipy.optimize import linear_sum_assignment

        rows, cols = linear_sum_assignment(dist)
        return float(dist[rows, cols].max())


#### rotations


@dataclass(frozen=True)
class RotationSU2:
    """Cayley-Klein pair (alpha, beta) with |alpha|^2 + |beta|^2 = 1."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if not norm > 0.0:
            raise DomainError("alpha = beta = 0 is not a rotation")
        object.__setattr__(self, "alpha", a / norm)
        object.__setattr__(self, "beta", b / norm)

    @classmethod
    def identity(cls) -> "RotationSU2":
        return cls(1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> "RotationSU2":
        """Rotation by `angle` about the unit 3-vector `axis` (right-handed,
        acting on star unit vectors)."""
        ax = np.asarray(axis, dtype=float)
        norm = np.linalg.norm(ax)
        if not norm > 0.0:
            raise DomainError("rotation axis must be nonzero")
        nx, ny, nz = ax / norm
        half = angle / 2.0
        alpha = math.cos(half) - 1j * nz * math.sin(half)
        beta = (1j * nx + ny) * math.sin(half)
        return cls(alpha, beta)

    @classmethod
    def from_euler_zyz(cls, a: float, b: float, c: float) -> "RotationSU2":
        """R = Rz(a) Ry(b) Rz(c) on star unit vectors (c applied first)."""
        rz1 = cls.from_axis_angle((0.0, 0.0, 1.0), a)
        ry = cls.from_axis_angle((0.0, 1.0, 0.0), b)
        rz2 = cls.from_axis_angle((0.0, 0.0, 1.0), c)
        return rz1.compose(ry).compose(rz2)

    def compose(self, other: "RotationSU2") -> "RotationSU2":
        """Rotation equal to applying `other` first, then self."""
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return RotationSU2(a1 * a2 - b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def inverse(self) -> "RotationSU2":
        return RotationSU2(self.alpha.conjugate(), -self.beta)

    def mobius(self, zeta):
        """Fractional-linear action on a stereographic coordinate."""
        a, b = self.alpha, self.beta
        if is_infinite(zeta):
            if b == 0:
                return ZETA_INF
            return a / (-b.conjugate())
        num = a * zeta + b
        den = -b.conjugate() * zeta + a.conjugate()
        if den == 0:
            return ZETA_INF
        return num / den

    def spin_half_matrix(self) -> np.ndarray:
        """The induced unitary on (psi_{-1/2}, psi_{+1/2}) amplitude pairs."""
        a, b = self.alpha, self.beta
        return np.array([[a, -b], [b.conjugate(), a.conjugate()]])

    def so3_matrix(self) -> np.ndarray:
        """The SO(3) matrix this rotation applies to star unit vectors."""
        cols = []
        for axis in np.eye(3):
            star = Star.from_unit_vector(axis)
            cols.append(Star.from_zeta(self.mobius(star.zeta)).unit_vector())
        return np.column_stack(cols)


def rotate_constellation(c: Constellation, r: RotationSU2) -> Constellation:
    """Rigidly rotate every star by the Moebius action of `r`."""
    return Constellation(c.spin, tuple(Star.from_zeta(r.mobius(s.zeta)) for s in c.stars))


#### JSON forms (angles authoritative for constellations)


def state_to_dict(s: SpinState) -> dict:
    return {
        "two_s": s.spin.two_s,
        "amps": [[float(a.real), float(a.imag)] for a in s.amps],
    }


def state_from_dict(d: dict) -> SpinState:
    try:
        two_s = int(d["two_s"])
        amps = [complex(re, im) for re, im in d["amps"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed state object: {exc}") from exc
    return SpinState.from_amps(two_s, amps)


def constellation_to_dict(c: Constellation) -> dict:
    return {
        "two_s": c.spin.two_s,
        "stars": [{"theta": float(s.theta), "phi": float(s.phi)} for s in c.stars],
    }


def constellation_from_dict(d: dict) -> Constellation:
    try:
        two_s = int(d["two_s"])
        pairs = [(float(s["theta"]), float(s["phi"])) for s in d["stars"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed constellation object: {exc}") from exc
    return Constellation.from_angles(two_s, pairs)
