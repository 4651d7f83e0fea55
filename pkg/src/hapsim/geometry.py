"""Placement geometry for the relayed network.

Ground stations sit below a tethered relay balloon, which sits below the
aerial platforms.  All links in the vertical plane are summarized by three
slant distances (source-destination, source-relay, relay-destination) and by
the antenna spacings that control the line-of-sight channel phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Plane-wave steering vectors are only meaningful well beyond the array
# aperture; links shorter than this multiple of the largest spacing are
# rejected.
FAR_FIELD_FACTOR = 100.0


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class LinkGeometry:
    """Geometry of a single transmitter-receiver link.

    Angles are the arrival/departure angles measured at the receive and
    transmit arrays, in radians.  Spacings are element separations in meters.
    """

    link_distance_m: float
    wavelength_m: float
    aoa_rad: float
    aod_rad: float
    rx_spacing_m: float
    tx_spacing_m: float

    def __post_init__(self) -> None:
        for key in ("link_distance_m", "wavelength_m", "aoa_rad", "aod_rad",
                    "rx_spacing_m", "tx_spacing_m"):
            object.__setattr__(self, key, float(getattr(self, key)))
        _require_positive("link_distance_m", self.link_distance_m)
        _require_positive("wavelength_m", self.wavelength_m)
        _require_positive("rx_spacing_m", self.rx_spacing_m)
        _require_positive("tx_spacing_m", self.tx_spacing_m)
        widest = max(self.rx_spacing_m, self.tx_spacing_m)
        if not self.link_distance_m > FAR_FIELD_FACTOR * widest:
            raise ValueError(
                "link_distance_m must exceed "
                f"{FAR_FIELD_FACTOR:g} x max antenna spacing "
                f"({FAR_FIELD_FACTOR * widest:g} m), got {self.link_distance_m:g} m"
            )


@dataclass(frozen=True)
class ScenarioLayout:
    """Vertical placement of the ground stations, relay, and platforms."""

    hap_altitude_m: float
    relay_altitude_m: float
    hap_spacing_m: float = 1125.0
    gs_spacing_m: float = 0.1
    gs_altitude_m: float = 0.0

    def __post_init__(self) -> None:
        for key in ("hap_altitude_m", "relay_altitude_m", "hap_spacing_m",
                    "gs_spacing_m", "gs_altitude_m"):
            object.__setattr__(self, key, float(getattr(self, key)))
        _require_positive("hap_altitude_m", self.hap_altitude_m)
        _require_positive("relay_altitude_m", self.relay_altitude_m)
        _require_positive("hap_spacing_m", self.hap_spacing_m)
        _require_positive("gs_spacing_m", self.gs_spacing_m)
        if self.gs_altitude_m < 0.0 or not math.isfinite(self.gs_altitude_m):
            raise ValueError(
                f"gs_altitude_m must be non-negative, got {self.gs_altitude_m!r}"
            )
        if not self.gs_altitude_m < self.relay_altitude_m < self.hap_altitude_m:
            raise ValueError(
                "altitudes must satisfy gs_altitude_m < relay_altitude_m < "
                f"hap_altitude_m, got ({self.gs_altitude_m:g}, "
                f"{self.relay_altitude_m:g}, {self.hap_altitude_m:g})"
            )

    @property
    def d_sd_m(self) -> float:
        return self.hap_altitude_m - self.gs_altitude_m

    @property
    def d_sr_m(self) -> float:
        return self.hap_altitude_m - self.relay_altitude_m

    @property
    def d_rd_m(self) -> float:
        return self.relay_altitude_m - self.gs_altitude_m


def min_hap_separation(
    link_distance_m: float,
    wavelength_m: float,
    dof_beta: float,
    gs_spacing_m: float,
) -> float:
    """Smallest platform separation that keeps line-of-sight streams resolvable.

    For a link of length L the spacing solves d_HAP = L * wavelength /
    (beta * d_GS), the standard full-rank condition for line-of-sight MIMO
    over a uniform linear array pair.

    Args:
        link_distance_m: platform to ground-station distance L in meters.
        wavelength_m: carrier wavelength in meters.
        dof_beta: multiplexing-order parameter beta (1 keeps every stream).
        gs_spacing_m: ground-station antenna spacing in meters.

    Returns:
        Required platform antenna spacing in meters.
    """
    link_distance_m = _require_positive("link_distance_m", link_distance_m)
    wavelength_m = _require_positive("wavelength_m", wavelength_m)
    dof_beta = _require_positive("dof_beta", dof_beta)
    gs_spacing_m = _require_positive("gs_spacing_m", gs_spacing_m)
    return link_distance_m * wavelength_m / (dof_beta * gs_spacing_m)


def link_distances(
    hap_altitude_m: float,
    relay_altitude_m: float,
    gs_altitude_m: float = 0.0,
) -> tuple[float, float, float]:
    """Slant distances (d_SD, d_SR, d_RD) for a vertically stacked layout.

    The returned triple satisfies d_SD == d_SR + d_RD exactly: d_SR is formed
    as the floating-point difference (d_SD - d_RD) and d_SD is re-assembled
    from the two parts.
    """
    layout = ScenarioLayout(
        hap_altitude_m=hap_altitude_m,
        relay_altitude_m=relay_altitude_m,
        gs_altitude_m=gs_altitude_m,
    )
    d_rd = layout.d_rd_m
    d_sr = layout.d_sd_m - d_rd
    return d_sr + d_rd, d_sr, d_rd
