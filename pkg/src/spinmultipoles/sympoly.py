"""Elementary symmetric polynomials of finite star coordinates.

A `SymPolySet` keeps e_0 .. e_n of the n finite roots together with the
count of roots at infinity that were set aside.  e_0 is exactly 1; no
rescaling is performed here, so magnitudes can overflow for |zeta| large
and n big — callers that need huge products (state assembly) use their own
scaled accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError


@dataclass(frozen=True)
class SymPolySet:
    """e[j] = sum over j-subsets of the finite roots of their product."""

    e: np.ndarray
    n_infinite: int = 0

    def __post_init__(self):
        e = np.asarray(self.e, dtype=complex)
        if e.ndim != 1 or e.shape[0] < 1:
            raise DomainError("need at least e_0")
        if e[0] != 1.0:
            raise DomainError("e_0 must be exactly 1")
        if self.n_infinite < 0:
            raise DomainError("negative infinity count")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "e", e)

    @property
    def n_finite(self) -> int:
        return self.e.shape[0] - 1


def elementary_from_roots(roots) -> SymPolySet:
    """Build all e_j of the given finite roots by the one-root recurrence."""
    roots = [complex(z) for z in roots]
    e = np.zeros(len(roots) + 1, dtype=complex)
    e[0] = 1.0
    for i, z in enumerate(roots):
        # prepend root z: e_j <- e_j + z * e_{j-1}, done top-down via slices
        e[1 : i + 2] = e[1 : i + 2] + z * e[0 : i + 1]
    return SymPolySet(e)


def add_root(s: SymPolySet, zeta) -> SymPolySet:
    """Return the set extended by one finite root (O(n) update)."""
    zeta = complex(zeta)
    n = s.n_finite
    e = np.zeros(n + 2, dtype=complex)
    e[: n + 1] = s.e
    e[1:] = e[1:] + zeta * e[:-1]
    return SymPolySet(e, s.n_infinite)


def power_sums_from_elementary(s: SymPolySet, up_to: int | None = None) -> np.ndarray:
    """Newton's identities: p_1 .. p_K from e_1 .. e_n (index 0 unused).

    Returns an array p with p[0] = n (the zeroth power sum) and p[k] for
    k = 1 .. up_to.  Power sums of the finite roots only.
    """
    n = s.n_finite
    k_max = n if up_to is None else int(up_to)
    if k_max < 0:
        raise DomainError("negative order")
    e = np.zeros(max(n, k_max) + 1, dtype=complex)
    e[: n + 1] = s.e
    p = np.zeros(k_max + 1, dtype=complex)
    p[0] = n
    for k in range(1, k_max + 1):
        acc = ((-1) ** (k - 1)) * k * e[k]
        for i in range(1, k):
            acc += ((-1) ** (i - 1)) * e[i] * p[k - i]
        p[k] = acc
    return p


def elementary_from_power_sums(p, n: int) -> SymPolySet:
    """Invert Newton's identities: e_1 .. e_n from p_1 .. p_n.

    `p` is indexed like the output of `power_sums_from_elementary` (p[0]
    ignored, p[k] = k-th power sum).
    """
    p = np.asarray(p, dtype=complex)
    if p.shape[0] < n + 1:
        raise DomainError(f"need power sums up to order {n}")
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0 + 0.0j
        for i in range(1, k + 1):
            acc += ((-1) ** (i - 1)) * e[k - i] * p[i]
        e[k] = acc / k
    return SymPolySet(e)


def elementary_scaled(roots) -> tuple[np.ndarray, float]:
    """All e_j divided by a common factor exp(log_scale), overflow-safe.

    Intended for coefficient assembly where only the direction of the
    vector matters (states are normalized afterwards); entries whose true
    relative size is below ~1e-300 may flush to zero.
    """
    roots = [complex(z) for z in roots]
    e = np.zeros(len(roots) + 1, dtype=complex)
    e[0] = 1.0
    log_scale = 0.0
    for i, z in enumerate(roots):
        e[1 : i + 2] = e[1 : i + 2] + z * e[0 : i + 1]
        m = float(np.max(np.abs(e[: i + 2])))
        if m > 1e250:
            e /= m
            log_scale += math.log(m)
    return e, log_scale


def origin_multiplicity(s: SymPolySet, tol: float = 1e-12) -> int:
    """Number of roots at zeta = 0, read off as vanishing top-order e's.

    d roots at the origin force e_n = ... = e_{n-d+1} = 0 while e_{n-d}
    stays finite; the count of consecutive (relatively) vanishing
    highest-order values is therefore the origin multiplicity.
    """
    n = s.n_finite
    scale = float(np.max(np.abs(s.e))) or 1.0
    d = 0
    for j in range(n, 0, -1):
        if abs(s.e[j]) <= tol * scale:
            d += 1
        else:
            break
    return d
