"""Experiment drivers: random sampling, champion search, and named states.

The central routine scans random pure states for the largest squared
multipole length at every rank, with the coherent and NOON states always
injected into the pool so the known extremes are lower bounds by
construction rather than probabilistic observations.  Sampling is batched,
each batch drawing from its own child of the master seed, which makes the
result reproducible bit for bit regardless of how many worker threads run
the batches.

A small named-state catalog covers the recurring reference states:
``coherent(z0)``, ``noon``, ``basis(m)``, and the file-backed ``king``
configurations (Platonic-solid constellations whose low multipoles vanish
up to a declared order, re-verified every time they are loaded).
"""

from __future__ import annotations

import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from ._kernels import impl
from .angular import cg_band, multipole_norm
from .convert import constellation_from_state, state_from_constellation, state_from_elementary
from .core import ZETA_INF, Constellation, DomainError, SpinLabel, SpinState
from .multipoles import (
    coherent_multipole_closed_form,
    multipoles_from_state,
    noon_extreme_multipole,
)

__all__ = [
    "ChampionRecord",
    "NamedState",
    "SearchResult",
    "catalog_get",
    "max_multipole_search",
    "random_state",
    "spectrum_report",
]

SAMPLERS = ("haar", "stars")
_BATCH = 512


#### random states


def _haar_batch(two_s: int, rng: np.random.Generator, count: int) -> np.ndarray:
    amps = rng.standard_normal((count, two_s + 1)) + 1j * rng.standard_normal(
        (count, two_s + 1)
    )
    amps /= np.linalg.norm(amps, axis=1, keepdims=True)
    return amps


def _stars_batch(two_s: int, rng: np.random.Generator, count: int) -> np.ndarray:
    # stars independently uniform on the sphere; assembled without root finding
    cos_t = rng.uniform(-1.0, 1.0, (count, two_s))
    phis = rng.uniform(0.0, 2.0 * math.pi, (count, two_s))
    out = np.empty((count, two_s + 1), dtype=complex)
    for i in range(count):
        pairs = zip(np.arccos(cos_t[i]), phis[i])
        c = Constellation.from_angles(two_s, pairs)
        out[i] = state_from_constellation(c).amps
    return out


def _sample_batch(two_s: int, rng, sampler: str, count: int) -> np.ndarray:
    if sampler == "haar":
        return _haar_batch(two_s, rng, count)
    return _stars_batch(two_s, rng, count)


def random_state(spin: SpinLabel, rng_seed: int, sampler: str = "haar") -> SpinState:
    """One reproducible random pure state (same seed, same state).

    ``haar`` draws unitarily invariant amplitudes (independent complex
    Gaussians, normalized); ``stars`` instead scatters the 2S stars uniformly
    over the sphere, which is a different measure on states.
    """
    if sampler not in SAMPLERS:
        raise DomainError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")
    rng = np.random.default_rng(rng_seed)
    amps = _sample_batch(spin.two_s, rng, sampler, 1)[0]
    return SpinState.from_amps(spin.two_s, amps)


#### batched multipole lengths


def _batch_lengths_sq(two_s: int, amps: np.ndarray) -> np.ndarray:
    """Squared multipole lengths for a whole batch of amplitude rows."""
    count = amps.shape[0]
    out = np.empty((count, two_s + 1))
    buf = np.empty(count, dtype=complex)
    for k in range(two_s + 1):
        acc = np.zeros(count)
        for q in range(k + 1):
            lo, band = cg_band(two_s, k, q)
            impl.band_contract(amps, band, lo, q, buf)
            weight = buf.real**2 + buf.imag**2
            acc += weight if q == 0 else 2.0 * weight
        out[:, k] = acc * multipole_norm(two_s, k) ** 2
    return out


#### the search


@dataclass(frozen=True)
class ChampionRecord:
    """Best state found for one multipole rank, with its full spectrum."""

    k: int
    best_value: float
    best_state: SpinState
    best_constellation: Constellation
    spectrum: np.ndarray


@dataclass(frozen=True)
class SearchResult:
    spin: SpinLabel
    per_k: tuple[ChampionRecord, ...]
    samples: int
    seed: int
    sampler: str

    def __post_init__(self):
        two_s = self.spin.two_s
        if tuple(rec.k for rec in self.per_k) != tuple(range(two_s + 1)):
            raise DomainError("search result must carry one champion per rank 0..2S")
        for rec in self.per_k:
            floor = coherent_multipole_closed_form(self.spin, rec.k)
            if rec.best_value < floor - 1e-12:
                raise DomainError(
                    f"rank {rec.k} champion {rec.best_value} fell below the injected "
                    f"coherent baseline {floor}"
                )
        noon_floor = noon_extreme_multipole(self.spin)
        if self.per_k[two_s].best_value < noon_floor - 1e-12:
            raise DomainError("top-rank champion fell below the injected NOON baseline")

    def best_values(self) -> np.ndarray:
        return np.array([rec.best_value for rec in self.per_k])

    def to_json(self) -> dict:
        return {
            "two_s": self.spin.two_s,
            "samples": self.samples,
            "seed": self.seed,
            "sampler": self.sampler,
            "champions": [
                {
                    "K": rec.k,
                    "best_value": rec.best_value,
                    "amps_re": [float(a.real) for a in rec.best_state.amps],
                    "amps_im": [float(a.imag) for a in rec.best_state.amps],
                    "stars": [
                        "inf" if s.is_infinite else [s.zeta.real, s.zeta.imag]
                        for s in rec.best_constellation.stars
                    ],
                    "spectrum": [float(x) for x in rec.spectrum],
                }
                for rec in self.per_k
            ],
        }


def _lex_key(amps: np.ndarray) -> tuple:
    return tuple(float(x) for pair in zip(amps.real, amps.imag) for x in pair)


def _scan_batch(two_s: int, amps: np.ndarray):
    lengths = _batch_lengths_sq(two_s, amps)
    idx = np.argmax(lengths, axis=0)
    return [(float(lengths[idx[k], k]), amps[idx[k]], lengths[idx[k]]) for k in range(two_s + 1)]


def max_multipole_search(
    spin: SpinLabel,
    n_samples: int,
    seed: int,
    sampler: str = "haar",
    threads: int = 1,
) -> SearchResult:
    """Largest squared multipole length per rank over a random sample pool.

    Deterministic for a given (seed, n_samples, sampler) triple: every batch
    of 512 samples draws from its own child stream of the master seed, and
    the per-rank reduction runs in batch order with exact ties broken by
    lexicographic amplitude comparison, so thread count does not change the
    result.  Coherent and NOON states are appended to the pool after the
    random batches.
    """
    if sampler not in SAMPLERS:
        raise DomainError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")
    if n_samples < 1:
        raise DomainError(f"need at least one sample, got {n_samples}")
    if threads < 1:
        raise DomainError(f"thread count must be positive, got {threads}")
    two_s = spin.two_s
    if two_s < 1:
        raise DomainError("the search needs at least one star (two_s >= 1)")
    counts = [_BATCH] * (n_samples // _BATCH)
    if n_samples % _BATCH:
        counts.append(n_samples % _BATCH)
    streams = np.random.SeedSequence(seed).spawn(len(counts))

    def run(args):
        stream, count = args
        rng = np.random.default_rng(stream)
        return _scan_batch(two_s, _sample_batch(two_s, rng, sampler, count))

    if threads == 1:
        batch_results = map(run, zip(streams, counts))
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        try:
            batch_results = list(pool.map(run, zip(streams, counts)))
        finally:
            pool.shutdown()

    # injected baselines join the pool last, in a fixed order
    baselines = np.zeros((2, two_s + 1), dtype=complex)
    baselines[0, -1] = 1.0
    baselines[1, 0] = baselines[1, -1] = 1.0 / math.sqrt(2.0)
    injected = _scan_batch(two_s, baselines)

    best: list[tuple[float, np.ndarray, np.ndarray] | None] = [None] * (two_s + 1)
    for cands in list(batch_results) + [injected]:
        for k, (val, amps, lengths) in enumerate(cands):
            if (
                best[k] is None
                or val > best[k][0]
                or (val == best[k][0] and _lex_key(amps) < _lex_key(best[k][1]))
            ):
                best[k] = (val, amps, lengths)

    records = []
    for k, (val, amps, lengths) in enumerate(best):
        state = SpinState.from_amps(two_s, amps)
        spectrum = lengths.copy()
        spectrum.flags.writeable = False
        records.append(
            ChampionRecord(k, val, state, constellation_from_state(state), spectrum)
        )
    return SearchResult(spin, tuple(records), n_samples, int(seed), sampler)


#### named-state catalog


@dataclass(frozen=True)
class NamedState:
    name: str
    spin: SpinLabel
    source: str  # "builtin" | "file"
    state: SpinState


_COHERENT_RE = re.compile(r"\Acoherent\((?P<arg>[^)]+)\)\Z")
_BASIS_RE = re.compile(r"\Abasis\((?P<arg>[^)]+)\)\Z")


def _parse_projection(arg: str, two_s: int) -> int:
    try:
        m = Fraction(arg)
    except ValueError as exc:
        raise DomainError(f"cannot parse spin projection {arg!r}") from exc
    two_m = 2 * m
    if two_m.denominator != 1:
        raise DomainError(f"projection {arg} is not a half-integer")
    two_m = int(two_m)
    if abs(two_m) > two_s or (two_m - two_s) % 2 != 0:
        raise DomainError(
            f"projection {arg} does not belong to the spin-{two_s}/2 ladder"
        )
    return two_m


def _king_payload(two_s: int) -> dict:
    folder = resources.files("spinmultipoles") / "data" / "kings"
    available = []
    for entry in sorted(folder.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".json"):
            continue
        payload = json.loads(entry.read_text())
        if payload["two_s"] == two_s:
            return payload
        available.append(payload["two_s"])
    raise DomainError(
        f"no king constellation on file for two_s={two_s}; available: {sorted(available)}"
    )


def _king_state(spin: SpinLabel) -> SpinState:
    payload = _king_payload(spin.two_s)
    zetas = [ZETA_INF if s == "inf" else complex(s[0], s[1]) for s in payload["stars"]]
    state = state_from_constellation(Constellation.from_zetas(spin.two_s, zetas))
    order = payload["anticoherence_order"]
    lengths = multipoles_from_state(state).lengths_sq()
    bad = [k for k in range(1, order + 1) if lengths[k] >= 1e-8]
    if bad:
        raise DomainError(
            f"king file {payload['name']!r} declares order {order} but ranks {bad} "
            "have non-vanishing multipoles"
        )
    return state


def catalog_get(name: str, spin: SpinLabel) -> NamedState:
    """Look up a reference state by name.

    Built in: ``coherent(z0)`` (all stars at the stereographic point z0, with
    ``inf`` accepted), ``noon``, ``basis(m)`` (single spin level, m given as
    an integer, decimal, or fraction).  ``king`` loads the stored constellation
    for this spin and re-verifies its declared anticoherence order.
    """
    key = name.strip()
    two_s = spin.two_s
    if key == "noon":
        if two_s < 1:
            raise DomainError("the NOON state needs at least one star")
        # the equatorial ring's stars are the 2S-th roots of unity, so the
        # elementary symmetric values are exactly (1, 0, ..., 0, -(-1)^{2S});
        # assembling from them keeps the middle amplitudes exactly zero
        # (the root pipeline would leave ~1e-16 dust there, which matters
        # to the big-rational spectrum path)
        e = np.zeros(two_s + 1, dtype=complex)
        e[0] = 1.0
        e[two_s] = 1.0 if two_s % 2 else -1.0
        return NamedState(key, spin, "builtin", state_from_elementary(spin, e))
    if key == "king":
        return NamedState(key, spin, "file", _king_state(spin))
    m = _COHERENT_RE.match(key)
    if m:
        arg = m.group("arg").strip()
        if arg.lower() == "inf":
            zetas = [ZETA_INF] * two_s
        else:
            try:
                z0 = complex(arg)
            except ValueError as exc:
                raise DomainError(f"cannot parse coherent-state center {arg!r}") from exc
            zetas = [z0] * two_s
        c = Constellation.from_zetas(two_s, zetas)
        return NamedState(key, spin, "builtin", state_from_constellation(c))
    m = _BASIS_RE.match(key)
    if m:
        two_m = _parse_projection(m.group("arg").strip(), two_s)
        amps = np.zeros(two_s + 1, dtype=complex)
        amps[(two_m + two_s) // 2] = 1.0
        return NamedState(key, spin, "builtin", SpinState.from_amps(two_s, amps))
    raise DomainError(
        f"unknown catalog name {name!r}; expected coherent(z0), noon, basis(m), or king"
    )


def spectrum_report(
    states: list[NamedState], normalize_excluding_monopole: bool = False
) -> list[tuple[str, int, float]]:
    """Rows (name, K, rho_K^2) for a group of same-spin states.

    With ``normalize_excluding_monopole`` the K >= 1 entries of every state
    are rescaled to sum to 1 (the fixed monopole row is reported unchanged),
    which makes states of very different peak ranks comparable on one plot.
    """
    if not states:
        raise DomainError("nothing to report")
    spins = {ns.spin.two_s for ns in states}
    if len(spins) != 1:
        raise DomainError(f"refusing to mix spins in one report, got two_s in {sorted(spins)}")
    rows = []
    for ns in states:
        lengths = multipoles_from_state(ns.state).lengths_sq().copy()
        if normalize_excluding_monopole:
            tail = lengths[1:].sum()
            if tail > 0.0:
                lengths[1:] /= tail
        rows.extend((ns.name, k, float(v)) for k, v in enumerate(lengths))
    return rows
