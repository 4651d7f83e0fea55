import numpy as np
import pytest

from hapsim.geometry import (
    FAR_FIELD_FACTOR,
    LinkGeometry,
    ScenarioLayout,
    link_distances,
    min_hap_separation,
)


class TestMinHapSeparation:
    def test_reference_spacing(self):
        # 18 km link at 6.25 mm wavelength with 0.1 m ground spacing.
        assert min_hap_separation(18000.0, 0.00625, 1.0, 0.1) == 1125.0

    def test_unit_inputs(self):
        assert min_hap_separation(1.0, 1.0, 1.0, 1.0) == 1.0

    def test_double_beta_halves_spacing(self):
        assert min_hap_separation(18000.0, 0.00625, 2.0, 0.1) == pytest.approx(
            562.5, rel=1e-12)

    @pytest.mark.parametrize("field", range(4))
    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_non_positive_inputs_rejected(self, field, bad):
        args = [18000.0, 0.00625, 1.0, 0.1]
        args[field] = bad
        names = ["link_distance_m", "wavelength_m", "dof_beta", "gs_spacing_m"]
        with pytest.raises(ValueError, match=names[field]):
            min_hap_separation(*args)

    def test_linear_in_distance_and_wavelength(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            dist, wl, beta, gs = rng.uniform(0.1, 100.0, size=4)
            c = rng.uniform(0.5, 8.0)
            base = min_hap_separation(dist, wl, beta, gs)
            assert min_hap_separation(c * dist, wl, beta, gs) == pytest.approx(
                c * base, rel=1e-12)
            assert min_hap_separation(dist, c * wl, beta, gs) == pytest.approx(
                c * base, rel=1e-12)

    def test_inverse_in_beta_and_gs_spacing(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            dist, wl, beta, gs = rng.uniform(0.1, 100.0, size=4)
            c = rng.uniform(0.5, 8.0)
            base = min_hap_separation(dist, wl, beta, gs)
            assert min_hap_separation(dist, wl, c * beta, gs) == pytest.approx(
                base / c, rel=1e-12)
            assert min_hap_separation(dist, wl, beta, c * gs) == pytest.approx(
                base / c, rel=1e-12)


class TestLinkDistances:
    @pytest.mark.parametrize("hap,relay,gs,expected", [
        (18000.0, 15500.0, 0.0, (18000.0, 2500.0, 15500.0)),
        (2.0, 1.0, 0.0, (2.0, 1.0, 1.0)),
        (18000.0, 14000.0, 0.0, (18000.0, 4000.0, 14000.0)),
    ])
    def test_reference_triples(self, hap, relay, gs, expected):
        assert link_distances(hap, relay, gs) == expected

    def test_sum_identity_is_exact(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            gs = rng.uniform(0.0, 50.0)
            relay = gs + rng.uniform(1e-3, 2e4)
            hap = relay + rng.uniform(1e-3, 2e4)
            d_sd, d_sr, d_rd = link_distances(hap, relay, gs)
            assert d_sd == d_sr + d_rd
            assert d_sr > 0.0 and d_rd > 0.0

    def test_ordering_violations_rejected(self):
        with pytest.raises(ValueError, match="altitude"):
            link_distances(15000.0, 17000.0, 0.0)
        with pytest.raises(ValueError, match="altitude"):
            link_distances(18000.0, 5.0, 10.0)


class TestLinkGeometry:
    def test_far_field_enforced(self):
        with pytest.raises(ValueError, match="far-field|exceed"):
            LinkGeometry(40.0, 0.00625, 0.0, 0.0, 0.5, 0.5)

    def test_far_field_boundary(self):
        # Exactly at 100x spacing is still too close.
        with pytest.raises(ValueError):
            LinkGeometry(FAR_FIELD_FACTOR * 0.5, 0.00625, 0.0, 0.0, 0.5, 0.1)
        LinkGeometry(FAR_FIELD_FACTOR * 0.5 + 1.0, 0.00625, 0.0, 0.0, 0.5, 0.1)

    @pytest.mark.parametrize("key", ["link_distance_m", "wavelength_m",
                                     "rx_spacing_m", "tx_spacing_m"])
    def test_non_positive_fields_rejected(self, key):
        kwargs = dict(link_distance_m=1000.0, wavelength_m=0.00625,
                      aoa_rad=0.3, aod_rad=0.2, rx_spacing_m=0.003,
                      tx_spacing_m=0.003)
        kwargs[key] = 0.0
        with pytest.raises(ValueError, match=key):
            LinkGeometry(**kwargs)


class TestScenarioLayout:
    def test_distances(self):
        lay = ScenarioLayout(hap_altitude_m=18000.0, relay_altitude_m=15500.0)
        assert (lay.d_sd_m, lay.d_sr_m, lay.d_rd_m) == (18000.0, 2500.0, 15500.0)

    def test_gs_offset(self):
        lay = ScenarioLayout(hap_altitude_m=18000.0, relay_altitude_m=9000.0,
                             gs_altitude_m=1000.0)
        assert lay.d_sd_m == 17000.0
        assert lay.d_rd_m == 8000.0

    @pytest.mark.parametrize("hap,relay,gs", [
        (18000.0, 18000.0, 0.0),
        (18000.0, 19000.0, 0.0),
        (18000.0, 500.0, 1000.0),
    ])
    def test_ordering_rejected(self, hap, relay, gs):
        with pytest.raises(ValueError, match="altitude"):
            ScenarioLayout(hap_altitude_m=hap, relay_altitude_m=relay,
                           gs_altitude_m=gs)

    def test_negative_gs_altitude_rejected(self):
        with pytest.raises(ValueError, match="gs_altitude_m"):
            ScenarioLayout(hap_altitude_m=18000.0, relay_altitude_m=9000.0,
                           gs_altitude_m=-1.0)

    def test_fields_coerced_to_float(self):
        lay = ScenarioLayout(hap_altitude_m=18000, relay_altitude_m=9000)
        assert isinstance(lay.hap_altitude_m, float)
        assert lay == ScenarioLayout(hap_altitude_m=18000.0,
                                     relay_altitude_m=9000.0)
