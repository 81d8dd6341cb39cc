import json
import math

import numpy as np
import numpy.testing as npt
import pytest

from helpers import multipole_lengths_oracle
from spinmultipoles.analysis import (
    _batch_lengths_sq,
    catalog_get,
    max_multipole_search,
    random_state,
    spectrum_report,
)
from spinmultipoles.core import DomainError, SpinLabel
from spinmultipoles.multipoles import (
    coherent_multipole_closed_form,
    multipoles_from_constellation,
    multipoles_from_state,
    noon_extreme_multipole,
)


class TestRandomState:
    def test_reproducible_golden_amps(self):
        got = random_state(SpinLabel(2), 123).amps
        want = [
            -0.49518753 + 0.09711014j,
            -0.18412641 + 0.46069864j,
            0.64477885 + 0.28891763j,
        ]
        npt.assert_allclose(got, want, atol=1e-8)

    def test_star_sampler_golden_amps(self):
        got = random_state(SpinLabel(2), 123, "stars").amps
        want = [
            -0.5157925 - 0.35180486j,
            -0.27881478 + 0.69629196j,
            0.21824587 + 0.0j,
        ]
        npt.assert_allclose(got, want, atol=1e-8)

    @pytest.mark.parametrize("sampler", ["haar", "stars"])
    @pytest.mark.parametrize("two_s", [1, 4, 9])
    def test_normalized(self, two_s, sampler):
        for seed in (0, 7, 91):
            amps = random_state(SpinLabel(two_s), seed, sampler).amps
            assert abs(np.linalg.norm(amps) - 1.0) < 1e-12

    def test_mean_dipole_matches_independent_sampler(self):
        # same Haar mean from a structurally different legacy generator
        n = 4000
        rs = np.random.RandomState(17)
        oracle = np.empty(n)
        for i in range(n):
            a = rs.normal(size=3) + 1j * rs.normal(size=3)
            oracle[i] = multipole_lengths_oracle(a / np.linalg.norm(a))[1]
        ours = np.array(
            [
                multipoles_from_state(random_state(SpinLabel(2), seed)).length_sq(1)
                for seed in range(n)
            ]
        )
        se = math.hypot(oracle.std(ddof=1), ours.std(ddof=1)) / math.sqrt(n)
        assert abs(ours.mean() - oracle.mean()) < 3 * se

    def test_bad_sampler(self):
        with pytest.raises(DomainError):
            random_state(SpinLabel(2), 0, sampler="bures")


class TestBatchLengths:
    def test_matches_oracle_rows(self):
        rng = np.random.default_rng(31)
        amps = rng.standard_normal((8, 10)) + 1j * rng.standard_normal((8, 10))
        amps /= np.linalg.norm(amps, axis=1, keepdims=True)
        got = _batch_lengths_sq(9, amps)
        for i in range(8):
            npt.assert_allclose(got[i], multipole_lengths_oracle(amps[i]), atol=1e-12)


class TestSearch:
    def test_deterministic(self):
        a = max_multipole_search(SpinLabel(5), 700, seed=9)
        b = max_multipole_search(SpinLabel(5), 700, seed=9)
        npt.assert_array_equal(a.best_values(), b.best_values())
        for ra, rb in zip(a.per_k, b.per_k):
            npt.assert_array_equal(ra.best_state.amps, rb.best_state.amps)

    def test_thread_count_does_not_change_result(self):
        a = max_multipole_search(SpinLabel(6), 1200, seed=4, threads=1)
        b = max_multipole_search(SpinLabel(6), 1200, seed=4, threads=3)
        npt.assert_array_equal(a.best_values(), b.best_values())
        for ra, rb in zip(a.per_k, b.per_k):
            npt.assert_array_equal(ra.best_state.amps, rb.best_state.amps)

    def test_injected_floors(self):
        spin = SpinLabel(7)
        res = max_multipole_search(spin, 900, seed=21)
        for rec in res.per_k:
            assert rec.best_value >= coherent_multipole_closed_form(spin, rec.k) - 1e-12
        assert res.per_k[-1].best_value >= noon_extreme_multipole(spin) - 1e-12

    def test_qubit_best_is_coherent(self):
        res = max_multipole_search(SpinLabel(1), 64, seed=5)
        npt.assert_allclose(res.best_values(), [0.5, 0.5], atol=1e-12)

    def test_stars_sampler(self):
        spin = SpinLabel(4)
        res = max_multipole_search(spin, 600, seed=3, sampler="stars")
        assert res.sampler == "stars"
        for rec in res.per_k:
            assert rec.best_value >= coherent_multipole_closed_form(spin, rec.k) - 1e-12

    def test_champion_records_are_consistent(self):
        spin = SpinLabel(5)
        res = max_multipole_search(spin, 300, seed=13)
        assert [rec.k for rec in res.per_k] == list(range(6))
        assert res.samples == 300 and res.seed == 13
        for rec in res.per_k:
            assert abs(rec.spectrum.sum() - 1.0) < 1e-10
            assert abs(rec.spectrum[rec.k] - rec.best_value) < 1e-12
            # the stored constellation reproduces the champion's spectrum
            relit = multipoles_from_constellation(rec.best_constellation).lengths_sq()
            npt.assert_allclose(relit, rec.spectrum, atol=1e-7)

    def test_json_payload(self):
        res = max_multipole_search(SpinLabel(3), 200, seed=8)
        payload = res.to_json()
        text = json.dumps(payload)  # must be serializable as-is
        back = json.loads(text)
        assert back["two_s"] == 3 and back["seed"] == 8 and back["sampler"] == "haar"
        assert len(back["champions"]) == 4
        champ = back["champions"][2]
        amps = np.array(champ["amps_re"]) + 1j * np.array(champ["amps_im"])
        npt.assert_array_equal(amps, res.per_k[2].best_state.amps)
        assert all(len(c["spectrum"]) == 4 for c in back["champions"])

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            max_multipole_search(SpinLabel(4), 0, seed=1)
        with pytest.raises(DomainError):
            max_multipole_search(SpinLabel(4), 10, seed=1, sampler="grid")
        with pytest.raises(DomainError):
            max_multipole_search(SpinLabel(4), 10, seed=1, threads=0)
        with pytest.raises(DomainError):
            max_multipole_search(SpinLabel(0), 10, seed=1)


class TestCatalog:
    def test_coherent_center_points(self):
        north = catalog_get("coherent(0)", SpinLabel(6)).state.amps
        south = catalog_get("coherent(inf)", SpinLabel(6)).state.amps
        npt.assert_array_equal(north, np.eye(7)[-1])
        npt.assert_array_equal(south, np.eye(7)[0])

    def test_coherent_generic_center(self):
        ns = catalog_get("coherent(1+1j)", SpinLabel(4))
        lengths = multipoles_from_state(ns.state).lengths_sq()
        want = [coherent_multipole_closed_form(SpinLabel(4), k) for k in range(5)]
        npt.assert_allclose(lengths, want, rtol=1e-12)

    def test_noon_sits_on_the_equator(self):
        from spinmultipoles.convert import constellation_from_state

        ns = catalog_get("noon", SpinLabel(12))
        c = constellation_from_state(ns.state)
        assert c.n_infinite == 0
        vecs = c.unit_vectors()
        assert np.max(np.abs(vecs[:, 2])) < 1e-8

    def test_basis_levels(self):
        assert catalog_get("basis(3)", SpinLabel(6)).state.amps[6] == 1.0
        assert catalog_get("basis(-3)", SpinLabel(6)).state.amps[0] == 1.0
        assert catalog_get("basis(1/2)", SpinLabel(5)).state.amps[3] == 1.0
        assert catalog_get("basis(0.5)", SpinLabel(5)).state.amps[3] == 1.0

    def test_basis_rejects_foreign_levels(self):
        with pytest.raises(DomainError):
            catalog_get("basis(4)", SpinLabel(6))
        with pytest.raises(DomainError):
            catalog_get("basis(1/2)", SpinLabel(6))
        with pytest.raises(DomainError):
            catalog_get("basis(x)", SpinLabel(6))

    def test_coherent_parse_error(self):
        with pytest.raises(DomainError):
            catalog_get("coherent(one)", SpinLabel(4))

    def test_unknown_name(self):
        with pytest.raises(DomainError, match="unknown catalog name"):
            catalog_get("ghz", SpinLabel(4))

    @pytest.mark.parametrize(
        "two_s,order", [(4, 2), (6, 3), (8, 3), (12, 5)]
    )
    def test_kings_load_and_verify(self, two_s, order):
        ns = catalog_get("king", SpinLabel(two_s))
        assert ns.source == "file"
        lengths = multipoles_from_state(ns.state).lengths_sq()
        assert np.all(lengths[1 : order + 1] < 1e-8)
        assert lengths[order + 1] > 1e-3

    def test_king_missing_spin(self):
        with pytest.raises(DomainError, match="no king constellation"):
            catalog_get("king", SpinLabel(5))

    def test_king_validation_rejects_false_declaration(self, monkeypatch):
        import spinmultipoles.analysis as mod

        fake = {
            "name": "fake",
            "two_s": 2,
            "anticoherence_order": 1,
            "stars": [[0.0, 0.0], [0.0, 0.0]],
        }
        monkeypatch.setattr(mod, "_king_payload", lambda two_s: fake)
        with pytest.raises(DomainError, match="non-vanishing"):
            catalog_get("king", SpinLabel(2))

    def test_source_marking(self):
        assert catalog_get("noon", SpinLabel(4)).source == "builtin"
        assert catalog_get("king", SpinLabel(4)).source == "file"


class TestSpectrumReport:
    def test_unnormalized_rows_obey_sum_rule(self):
        rows = spectrum_report([catalog_get("coherent(0)", SpinLabel(12))])
        assert len(rows) == 13
        assert abs(sum(v for _, _, v in rows) - 1.0) < 1e-10

    def test_noon_has_zero_odd_entries(self):
        rows = spectrum_report([catalog_get("noon", SpinLabel(12))])
        for _, k, v in rows:
            if k % 2 == 1 and k < 12:
                assert v < 1e-12

    def test_king_gap_then_signal(self):
        rows = {k: v for _, k, v in spectrum_report([catalog_get("king", SpinLabel(12))])}
        assert all(rows[k] < 1e-8 for k in range(1, 6))
        assert rows[6] > 1e-2

    def test_normalized_tail(self):
        rows = spectrum_report(
            [catalog_get("noon", SpinLabel(8)), catalog_get("king", SpinLabel(8))],
            normalize_excluding_monopole=True,
        )
        tails = {}
        monopoles = {}
        for name, k, v in rows:
            if k == 0:
                monopoles[name] = v
            else:
                tails[name] = tails.get(name, 0.0) + v
        for total in tails.values():
            assert abs(total - 1.0) < 1e-12
        for mono in monopoles.values():
            assert abs(mono - 1.0 / 9.0) < 1e-12

    def test_error_paths(self):
        with pytest.raises(DomainError):
            spectrum_report([])
        with pytest.raises(DomainError, match="mix spins"):
            spectrum_report(
                [catalog_get("noon", SpinLabel(4)), catalog_get("noon", SpinLabel(6))]
            )
