"""Independent oracles used by the test suite.

Everything in this module is deliberately written the "dumb" way — dense
matrices, brute-force combinatorics, direct inner products — so that the
library's optimized implementations are checked against code that shares
no machinery with them.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

#### dense spin operators


def spin_matrices(two_s: int):
    """Return (sz, sp, sm) dense matrices in the ascending-m basis."""
    d = two_s + 1
    s = two_s / 2
    m = np.arange(d) - s
    sz = np.diag(m).astype(complex)
    # S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>
    up = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))
    sp = np.zeros((d, d), dtype=complex)
    sp[np.arange(1, d), np.arange(d - 1)] = up
    sm = sp.conj().T
    return sz, sp, sm


def spin_xyz(two_s: int):
    sz, sp, sm = spin_matrices(two_s)
    sx = (sp + sm) / 2
    sy = (sp - sm) / (2j)
    return sx, sy, sz


def sz_moment_dense(amps: np.ndarray, n: int) -> float:
    two_s = len(amps) - 1
    m = np.arange(two_s + 1) - two_s / 2
    return float(np.sum(m**n * np.abs(np.asarray(amps)) ** 2))


#### brute-force Clebsch-Gordan oracle (coupling construction)
#
# Couples j1 with j2 and extracts <j1 m1; j2 m2 | J M> by building the J
# highest-weight vector as the kernel of J+ restricted to the M = J subspace,
# fixing the Condon-Shortley phase (largest-m1 component positive), and
# lowering with J-.  Completely independent of any closed-form formula.


def _single_spin_lower(two_j: int, two_m: int) -> float:
    j = two_j / 2
    m = two_m / 2
    return math.sqrt(j * (j + 1) - m * (m - 1))


def _single_spin_raise(two_j: int, two_m: int) -> float:
    j = two_j / 2
    m = two_m / 2
    return math.sqrt(j * (j + 1) - m * (m + 1))


def cg_coupling_table(two_j1: int, two_j2: int, two_j: int) -> dict:
    """CG table for j1 (x) j2 -> J as {(two_m1, two_m2): float}."""
    if not (abs(two_j1 - two_j2) <= two_j <= two_j1 + two_j2):
        return {}

    def m_pairs(two_m_total):
        out = []
        for two_m1 in range(-two_j1, two_j1 + 1, 2):
            two_m2 = two_m_total - two_m1
            if -two_j2 <= two_m2 <= two_j2:
                out.append((two_m1, two_m2))
        return out

    top = m_pairs(two_j)
    above = m_pairs(two_j + 2)
    if not above:
        # stretched coupling J = j1 + j2: the top pair is the whole subspace
        vec = {top[0]: 1.0}
    else:
        raise_mat = np.zeros((len(above), len(top)))
        for col, (two_m1, two_m2) in enumerate(top):
            if two_m1 + 2 <= two_j1:
                row = above.index((two_m1 + 2, two_m2))
                raise_mat[row, col] += _single_spin_raise(two_j1, two_m1)
            if two_m2 + 2 <= two_j2:
                row = above.index((two_m1, two_m2 + 2))
                raise_mat[row, col] += _single_spin_raise(two_j2, two_m2)
        # each J appears exactly once in j1 (x) j2, so the kernel is 1-dim
        _, _, vt = np.linalg.svd(raise_mat)
        null = vt[-1].conj()
        # Condon-Shortley: component with the largest m1 is positive
        idx = max(range(len(top)), key=lambda i: (abs(null[i]) > 1e-14, top[i][0]))
        null = null / null[idx]
        null = null / np.linalg.norm(null)
        vec = {pair: float(null[i].real) for i, pair in enumerate(top)}

    table = {}
    two_m_total = two_j
    j = two_j / 2
    while True:
        for (two_m1, two_m2), val in vec.items():
            table[(two_m1, two_m2)] = val
        if two_m_total == -two_j:
            break
        mt = two_m_total / 2
        norm = math.sqrt(j * (j + 1) - mt * (mt - 1))
        nxt = {}
        for (two_m1, two_m2), val in vec.items():
            if two_m1 - 2 >= -two_j1:
                key = (two_m1 - 2, two_m2)
                nxt[key] = nxt.get(key, 0.0) + val * _single_spin_lower(two_j1, two_m1)
            if two_m2 - 2 >= -two_j2:
                key = (two_m1, two_m2 - 2)
                nxt[key] = nxt.get(key, 0.0) + val * _single_spin_lower(two_j2, two_m2)
        vec = {k: v / norm for k, v in nxt.items()}
        two_m_total -= 2
    return table


def cg_oracle(two_j1, two_m1, two_j2, two_m2, two_j, two_m) -> float:
    """Single coefficient <j1 m1; j2 m2 | J M> from the coupling construction."""
    if two_m1 + two_m2 != two_m:
        return 0.0
    if abs(two_m1) > two_j1 or abs(two_m2) > two_j2 or abs(two_m) > two_j:
        return 0.0
    return cg_coupling_table(two_j1, two_j2, two_j).get((two_m1, two_m2), 0.0)


def tensor_op_oracle(two_s: int, k: int, q: int) -> np.ndarray:
    """Dense T_Kq built from the oracle CG table."""
    d = two_s + 1
    mat = np.zeros((d, d), dtype=complex)
    table = cg_coupling_table(two_s, 2 * k, two_s)
    for two_m in range(-two_s, two_s + 1, 2):
        two_mp = two_m + 2 * q
        if abs(two_mp) > two_s:
            continue
        c = table.get((two_m, 2 * q), 0.0)
        mat[(two_mp + two_s) // 2, (two_m + two_s) // 2] = c
    return math.sqrt((2 * k + 1) / (two_s + 1)) * mat


def multipoles_trace_oracle(amps: np.ndarray) -> dict:
    """rho_Kq = Tr(rho T_Kq^dagger) with explicit dense matrices."""
    amps = np.asarray(amps, dtype=complex)
    two_s = len(amps) - 1
    rho = np.outer(amps, amps.conj())
    out = {}
    for k in range(0, two_s + 1):
        for q in range(-k, k + 1):
            t = tensor_op_oracle(two_s, k, q)
            out[(k, q)] = complex(np.trace(rho @ t.conj().T))
    return out


def multipole_lengths_oracle(amps: np.ndarray) -> np.ndarray:
    comp = multipoles_trace_oracle(amps)
    two_s = len(np.asarray(amps)) - 1
    lengths = np.zeros(two_s + 1)
    for (k, q), v in comp.items():
        lengths[k] += abs(v) ** 2
    return lengths


#### elementary symmetric polynomials, the slow way


def elementary_brute(roots, j: int) -> complex:
    if j == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for combo in itertools.combinations(roots, j):
        total += math.prod(combo)
    return total


#### coherent states and the Husimi function by direct inner product


def coherent_amps(two_s: int, z0: complex) -> np.ndarray:
    """Amplitudes of |z0>, psi_k proportional to sqrt(C(2S,k)) z0^k."""
    k = np.arange(two_s + 1)
    amps = np.array([math.sqrt(math.comb(two_s, int(kk))) for kk in k], dtype=complex)
    amps *= np.power(complex(z0), k)
    return amps / np.linalg.norm(amps)


def probe_amps(two_s: int, z) -> np.ndarray:
    """Coherent state |z> labeled by the sphere point z (its 2S stars sit
    at the diametrically related root -1/z).

    `z = None` stands for the point at infinity (all weight on the highest
    amplitude).
    """
    if z is None:
        out = np.zeros(two_s + 1, dtype=complex)
        out[-1] = 1.0
        return out
    return coherent_amps(two_s, complex(z))


def husimi_direct(amps, z) -> float:
    """|<coherent labeled z | state>|^2 by direct inner product."""
    amps = np.asarray(amps, dtype=complex)
    coh = probe_amps(len(amps) - 1, z)
    return float(abs(np.vdot(coh, amps)) ** 2)


#### random geometry helpers


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    zs = rng.uniform(-1.0, 1.0, n)
    phis = rng.uniform(0.0, 2 * np.pi, n)
    sin_t = np.sqrt(1 - zs**2)
    return np.column_stack([sin_t * np.cos(phis), sin_t * np.sin(phis), zs])


def angles_from_unit_vector(v) -> tuple:
    theta = math.acos(max(-1.0, min(1.0, float(v[2]))))
    phi = math.atan2(float(v[1]), float(v[0])) % (2 * math.pi)
    return theta, phi


def match_cost(vecs_a: np.ndarray, vecs_b: np.ndarray) -> float:
    """Max chordal distance under the optimal pairing of two star sets."""
    from scipy.optimize import linear_sum_assignment

    dist = np.linalg.norm(vecs_a[:, None, :] - vecs_b[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(dist)
    return float(dist[rows, cols].max())


#### exact closed forms evaluated with Fractions (independent arithmetic)


def coherent_length_exact(two_s: int, k: int) -> Fraction:
    """(2K+1) (2S)!^2 / ((2S-K)! (2S+K+1)!) as an exact rational."""
    return Fraction(
        (2 * k + 1) * math.factorial(two_s) ** 2,
        math.factorial(two_s - k) * math.factorial(two_s + k + 1),
    )


def noon_last_length_exact(two_s: int) -> Fraction:
    if two_s % 2 == 0:
        return Fraction(1, 2) + Fraction(1, math.comb(2 * two_s, two_s))
    return Fraction(1, 2)
