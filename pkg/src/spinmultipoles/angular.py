"""Exact Clebsch-Gordan coefficients and irreducible tensor operators.

Every coefficient is produced as an exact rational *signed square* (the
square of the coefficient carrying the coefficient's sign), evaluated with
pure integer arithmetic: the alternating Racah sum is accumulated over a
common denominator so only a single big-integer ratio is reduced at the
end.  Floats are derived from the exact value, never the other way round.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import DomainError, SpinLabel


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


def _check_pair(two_j: int, two_m: int, name: str) -> None:
    if two_j < 0:
        raise DomainError(f"{name}: negative angular momentum {two_j}")
    if (two_j + two_m) % 2 != 0:
        raise DomainError(f"{name}: projection parity mismatch ({two_j}, {two_m})")
    if abs(two_m) > two_j:
        raise DomainError(f"{name}: |m| exceeds j ({two_j}, {two_m})")


def _signed_square(tj1, tm1, tj2, tm2, tj3, tm3) -> tuple[int, Fraction]:
    """(sign, |C|^2) of the coupling coefficient <j1 m1; j2 m2 | j3 m3>."""
    t1 = (tj1 + tj2 - tj3) // 2
    t2 = (tj1 - tj2 + tj3) // 2
    t3 = (-tj1 + tj2 + tj3) // 2
    j_sum_p1 = (tj1 + tj2 + tj3) // 2 + 1
    b1 = (tj1 - tm1) // 2
    b2 = (tj1 + tm1) // 2
    b3 = (tj2 - tm2) // 2
    b4 = (tj2 + tm2) // 2
    b5 = (tj3 - tm3) // 2
    b6 = (tj3 + tm3) // 2
    x = (tj3 - tj2 + tm1) // 2
    y = (tj3 - tj1 - tm2) // 2
    kmin = max(0, -x, -y)
    kmax = min(t1, b1, b4)
    if kmax < kmin:
        return 0, Fraction(0)

    # alternating sum over the common denominator
    #   D = kmax! (t1-kmin)! (b1-kmin)! (b4-kmin)! (x+kmax)! (y+kmax)!
    # with integer weights M_k = D / D_k updated multiplicatively
    m_k = (
        (_fact(kmax) // _fact(kmin))
        * (_fact(x + kmax) // _fact(x + kmin))
        * (_fact(y + kmax) // _fact(y + kmin))
    )
    acc = 0
    k = kmin
    while True:
        acc += m_k if k % 2 == 0 else -m_k
        if k == kmax:
            break
        m_k = m_k * ((t1 - k) * (b1 - k) * (b4 - k)) // ((k + 1) * (x + k + 1) * (y + k + 1))
        k += 1
    if acc == 0:
        return 0, Fraction(0)
    den = (
        _fact(kmax)
        * _fact(t1 - kmin)
        * _fact(b1 - kmin)
        * _fact(b4 - kmin)
        * _fact(x + kmax)
        * _fact(y + kmax)
    )
    num = (
        _fact(t1) * _fact(t2) * _fact(t3)
        * _fact(b1) * _fact(b2) * _fact(b3)
        * _fact(b4) * _fact(b5) * _fact(b6)
    )
    square = Fraction((tj3 + 1) * num * acc * acc, _fact(j_sum_p1) * den * den)
    return (1 if acc > 0 else -1), square


@dataclass(frozen=True)
class CGValue:
    """Exact signed square of a coefficient plus its derived float."""

    signed_square: Fraction
    float_value: float


@dataclass(frozen=True)
class CGKey:
    """Coupling <S m; K q | S m_out> addressed with doubled quantum numbers."""

    two_s: int
    two_m: int
    two_k: int
    two_q: int
    two_m_out: int

    def __post_init__(self):
        _check_pair(self.two_s, self.two_m, "(S, m)")
        _check_pair(self.two_k, self.two_q, "(K, q)")
        _check_pair(self.two_s, self.two_m_out, "(S, m_out)")
        if self.two_k % 2 != 0:
            raise DomainError("multipole order K must be an integer")
        if self.two_k > 2 * self.two_s:
            raise DomainError(f"K = {self.two_k // 2} exceeds 2S = {self.two_s}")
        if self.two_m_out != self.two_m + self.two_q:
            raise DomainError("m_out must equal m + q")


_ZERO = CGValue(Fraction(0), 0.0)
_cg_cache: dict[tuple, CGValue] = {}
_cg_lock = threading.Lock()


def cg_exact(two_j1: int, two_m1: int, two_j2: int, two_m2: int, two_j: int, two_m: int) -> CGValue:
    """General exact coupling coefficient <j1 m1; j2 m2 | j m>.

    Selection-rule failures (projection sum, triangle rule) return an exact
    zero; malformed quantum numbers raise.
    """
    key = (two_j1, two_m1, two_j2, two_m2, two_j, two_m)
    with _cg_lock:
        hit = _cg_cache.get(key)
    if hit is not None:
        return hit
    _check_pair(two_j1, two_m1, "(j1, m1)")
    _check_pair(two_j2, two_m2, "(j2, m2)")
    _check_pair(two_j, two_m, "(j, m)")
    if (
        two_m != two_m1 + two_m2
        or (two_j1 + two_j2 + two_j) % 2 != 0
        or two_j < abs(two_j1 - two_j2)
        or two_j > two_j1 + two_j2
    ):
        value = _ZERO
    else:
        sign, square = _signed_square(two_j1, two_m1, two_j2, two_m2, two_j, two_m)
        value = CGValue(sign * square, sign * math.sqrt(float(square)))
    with _cg_lock:
        _cg_cache[key] = value
    return value


def clebsch_gordan(key: CGKey) -> CGValue:
    """Exact coefficient for the spin-conserving family <S m; K q | S m+q>."""
    return cg_exact(key.two_s, key.two_m, key.two_k, key.two_q, key.two_s, key.two_m_out)


#### float bands and dense operators


_band_cache: dict[tuple, tuple[int, np.ndarray]] = {}
_band_lock = threading.Lock()


def cg_band(two_s: int, k: int, q: int) -> tuple[int, np.ndarray]:
    """All <S m; K q | S m+q> floats along the m band, as (lo, values).

    `values[i]` belongs to amplitude index lo + i (i.e. m = lo + i - S);
    the band covers every index where both m and m+q are valid.
    """
    key = (two_s, k, q)
    with _band_lock:
        hit = _band_cache.get(key)
    if hit is not None:
        return hit
    if k < 0 or k > two_s:
        raise DomainError(f"multipole order K = {k} outside 0..2S")
    if abs(q) > k:
        raise DomainError(f"|q| = {abs(q)} exceeds K = {k}")
    lo = max(0, -q)
    hi = min(two_s, two_s - q)
    vals = np.empty(hi - lo + 1, dtype=float)
    for i, kidx in enumerate(range(lo, hi + 1)):
        two_m = 2 * kidx - two_s
        vals[i] = cg_exact(two_s, two_m, 2 * k, 2 * q, two_s, two_m + 2 * q).float_value
    vals.flags.writeable = False
    out = (lo, vals)
    with _band_lock:
        _band_cache[key] = out
    return out


@lru_cache(maxsize=None)
def _spin_cartesian_cached(two_s: int):
    d = two_s + 1
    m = (np.arange(d) - two_s / 2.0).astype(float)
    sz = np.diag(m).astype(complex)
    s = two_s / 2.0
    raise_elems = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))
    sp = np.zeros((d, d), dtype=complex)
    sp[np.arange(1, d), np.arange(d - 1)] = raise_elems
    sm = sp.conj().T
    sx = (sp + sm) / 2.0
    sy = (sp - sm) / 2.0j
    for a in (sx, sy, sz):
        a.flags.writeable = False
    return sx, sy, sz


def spin_cartesian(spin: SpinLabel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (S_x, S_y, S_z) on the ascending-m basis (read-only, shared)."""
    return _spin_cartesian_cached(spin.two_s)


_tensor_cache: dict[tuple, np.ndarray] = {}
_tensor_lock = threading.Lock()


def multipole_norm(two_s: int, k: int) -> float:
    return math.sqrt((2 * k + 1) / (two_s + 1))


def tensor_operator(spin: SpinLabel, k: int, q: int) -> np.ndarray:
    """Dense irreducible tensor component T_Kq on the ascending-m basis.

    Normalized so that Tr(T_Kq T_K'q'^dagger) = delta_KK' delta_qq'; the
    returned array is read-only and shared, copy before mutating.
    """
    key = (spin.two_s, k, q)
    with _tensor_lock:
        hit = _tensor_cache.get(key)
    if hit is not None:
        return hit
    lo, vals = cg_band(spin.two_s, k, q)
    t = np.zeros((spin.dimension, spin.dimension), dtype=complex)
    scale = multipole_norm(spin.two_s, k)
    for i, kidx in enumerate(range(lo, lo + vals.shape[0])):
        t[kidx + q, kidx] = scale * vals[i]
    t.flags.writeable = False
    with _tensor_lock:
        _tensor_cache[key] = t
    return t
