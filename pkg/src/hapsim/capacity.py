"""Sum-rate expressions for the relayed X network.

The decode-and-forward capacity of the two-hop network is

    C = [M*N / (M + N - 1)] * min(C1, C2),

where C1 sums one zero-forced stream per platform on the uplink and C2 does
the same per ground station on the downlink.  The multiplexing-order helper
dof() returns the high-SNR slope M*N*A / (M + N - 1), which carries the
per-node antenna count and is deliberately a separate quantity from the
capacity prefactor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import ScenarioLayout
from .zfcore import zf_all_streams, zf_stream_snr

_LN2 = math.log(2.0)

# Whether the configured SNR scale applies before or after the 1/d^2 path factor.
SNR_REFERENCE_CHOICES = ("pre_path_loss", "post_path_loss")


def _as_float_tuple(value, count: int, key: str) -> tuple[float, ...]:
    if value is None:
        raise ValueError(f"{key} must be a number or a per-link list, got None")
    if np.isscalar(value):
        items = [float(value)] * count
    else:
        items = [float(v) for v in value]
    if len(items) != count:
        raise ValueError(f"{key} must have {count} entries, got {len(items)}")
    for v in items:
        if not math.isfinite(v):
            raise ValueError(f"{key} entries must be finite, got {v!r}")
    return tuple(items)


@dataclass(frozen=True)
class NetworkConfig:
    """Full scenario description for one network.

    num_haps (M) platforms each talk to num_gs (N) ground stations through a
    relay carrying relay_antennas elements; every non-relay node has
    antennas_per_node (A) elements.  Rician factors and reference gains are
    per-link tuples; scalars are broadcast.  kappa_direct_db and
    ref_gain_direct parameterize the direct platform-to-ground channels of
    the no-relay baseline and default to the uplink values.
    """

    num_haps: int
    num_gs: int
    antennas_per_node: int
    layout: ScenarioLayout
    relay_antennas: int | None = None
    hap_power: float = 1.0
    relay_power: float = 1.0
    noise_power: float = 1.0
    streams_per_tx: int | None = None
    kappa_up_db: tuple[float, ...] | float = 30.0
    kappa_down_db: tuple[float, ...] | float = 15.0
    kappa_direct_db: tuple[float, ...] | float | None = None
    ref_gain_up: tuple[float, ...] | float = 1.0
    ref_gain_down: tuple[float, ...] | float = 1.0
    ref_gain_direct: tuple[float, ...] | float | None = None
    wavelength_m: float = 0.00625
    rx_spacing_m: float | None = None
    tx_spacing_m: float | None = None
    aoa_deg: float = 30.0
    aod_deg: float = 30.0
    all_streams: bool = False
    snr_reference: str = "pre_path_loss"

    def __post_init__(self) -> None:
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        m, n, a = int(self.num_haps), int(self.num_gs), int(self.antennas_per_node)
        if m < 1 or n < 1 or a < 1:
            raise ValueError(
                "num_haps, num_gs, antennas_per_node must be >= 1, got "
                f"({m}, {n}, {a})"
            )
        set_("num_haps", m)
        set_("num_gs", n)
        set_("antennas_per_node", a)
        required = self.required_relay_antennas
        relay = required if self.relay_antennas is None else int(self.relay_antennas)
        if relay < required:
            raise ValueError(
                f"relay_antennas must be >= (M-1)(N-1) = {required}, got {relay}"
            )
        set_("relay_antennas", relay)
        for key in ("hap_power", "relay_power", "noise_power"):
            v = float(getattr(self, key))
            if not v > 0.0 or not math.isfinite(v):
                raise ValueError(f"{key} must be positive, got {v!r}")
            set_(key, v)
        if self.streams_per_tx is not None:
            s = int(self.streams_per_tx)
            if s < 1:
                raise ValueError(f"streams_per_tx must be >= 1, got {s}")
            set_("streams_per_tx", s)
        set_("kappa_up_db", _as_float_tuple(self.kappa_up_db, m, "kappa_up_db"))
        set_("kappa_down_db", _as_float_tuple(self.kappa_down_db, n, "kappa_down_db"))
        direct = self.kappa_up_db if self.kappa_direct_db is None else self.kappa_direct_db
        set_("kappa_direct_db", _as_float_tuple(direct, m, "kappa_direct_db"))
        set_("ref_gain_up", _as_float_tuple(self.ref_gain_up, m, "ref_gain_up"))
        set_("ref_gain_down", _as_float_tuple(self.ref_gain_down, n, "ref_gain_down"))
        gdir = self.ref_gain_up if self.ref_gain_direct is None else self.ref_gain_direct
        set_("ref_gain_direct", _as_float_tuple(gdir, m, "ref_gain_direct"))
        for key in ("ref_gain_up", "ref_gain_down", "ref_gain_direct"):
            if any(not v > 0.0 for v in getattr(self, key)):
                raise ValueError(f"{key} entries must be positive")
        wl = float(self.wavelength_m)
        if not wl > 0.0:
            raise ValueError(f"wavelength_m must be positive, got {wl!r}")
        set_("wavelength_m", wl)
        half = wl / 2.0
        set_("rx_spacing_m",
             half if self.rx_spacing_m is None else float(self.rx_spacing_m))
        set_("tx_spacing_m",
             half if self.tx_spacing_m is None else float(self.tx_spacing_m))
        if not self.rx_spacing_m > 0.0 or not self.tx_spacing_m > 0.0:
            raise ValueError("antenna spacings must be positive")
        if self.snr_reference not in SNR_REFERENCE_CHOICES:
            raise ValueError(
                f"snr_reference must be one of {SNR_REFERENCE_CHOICES}, "
                f"got {self.snr_reference!r}"
            )
        set_("all_streams", bool(self.all_streams))

    @property
    def required_relay_antennas(self) -> int:
        """Relay element count needed to align (M-1)(N-1) interference streams."""
        return max(1, (self.num_haps - 1) * (self.num_gs - 1))

    @property
    def dof_prefactor(self) -> float:
        """Capacity prefactor M*N / (M + N - 1); carries no antenna count."""
        return self.num_haps * self.num_gs / (self.num_haps + self.num_gs - 1)

    def uplink_streams(self) -> int:
        """N_T on the uplink: configured override or the uplink column count."""
        return self.streams_per_tx or self.antennas_per_node

    def downlink_streams(self) -> int:
        """N_T on the downlink: configured override or the relay column count."""
        return self.streams_per_tx or self.relay_antennas


@dataclass(frozen=True)
class CapacityBreakdown:
    """Per-hop rates and their min-cut combination, all in bits/s/Hz."""

    uplink_rate: float
    downlink_rate: float
    dof_prefactor: float
    total: float = field(init=False)

    def __post_init__(self) -> None:
        if self.uplink_rate < 0.0 or self.downlink_rate < 0.0:
            raise ValueError("hop rates must be non-negative")
        if not self.dof_prefactor > 0.0:
            raise ValueError("dof_prefactor must be positive")
        object.__setattr__(
            self, "total",
            self.dof_prefactor * min(self.uplink_rate, self.downlink_rate))


def dof(num_tx: int, num_rx: int, antennas: int) -> float:
    """Degrees of freedom M*N*A / (M + N - 1) of the M x N network."""
    m, n, a = int(num_tx), int(num_rx), int(antennas)
    if m < 1 or n < 1 or a < 1:
        raise ValueError(f"counts must be >= 1, got ({m}, {n}, {a})")
    return m * n * a / (m + n - 1)


def asymptotic_capacity(dof_beta: float, snr_linear: float) -> float:
    """Leading high-SNR term beta * log2(snr), in bits/s/Hz."""
    if not float(dof_beta) > 0.0:
        raise ValueError(f"dof_beta must be positive, got {dof_beta!r}")
    if not float(snr_linear) > 1.0:
        raise ValueError(f"snr_linear must exceed 1, got {snr_linear!r}")
    return float(dof_beta) * math.log2(float(snr_linear))


def hop_sum_rate(channels: Sequence[np.ndarray], power: float, noise: float,
                 streams: int | None = None, all_streams: bool = False) -> float:
    """Sum of log2(1 + snr) over the zero-forced streams of one hop.

    Each channel contributes its first column's ZF SNR at scale
    power / (noise * N_T), where N_T is `streams` when given and the
    channel's column count otherwise.  With all_streams=True every column
    contributes instead of just the first.

    Raises:
        SingularChannelError: some channel has correlated columns.
    """
    if not float(power) > 0.0:
        raise ValueError(f"power must be positive, got {power!r}")
    if not float(noise) > 0.0:
        raise ValueError(f"noise must be positive, got {noise!r}")
    total = 0.0
    for h in channels:
        h = np.asarray(h, dtype=np.complex128)
        n_t = int(streams) if streams is not None else h.shape[1]
        scale = float(power) / (float(noise) * n_t)
        if all_streams:
            snrs = [s.snr_linear for s in zf_all_streams(h, scale)]
        else:
            snrs = [zf_stream_snr(h, 0, scale).snr_linear]
        total += float(np.sum(np.log1p(snrs)) / _LN2)
    return total


def df_capacity(uplink_channels: Sequence[np.ndarray],
                downlink_channels: Sequence[np.ndarray],
                cfg: NetworkConfig) -> CapacityBreakdown:
    """Decode-and-forward network capacity from explicit channel lists.

    Args:
        uplink_channels: M matrices, platform i to relay.
        downlink_channels: N matrices, relay to ground station j.
        cfg: scenario supplying powers, noise, and stream counts.

    Returns:
        CapacityBreakdown; total = [M*N/(M+N-1)] * min(C1, C2).
    """
    if len(uplink_channels) != cfg.num_haps:
        raise ValueError(
            f"expected {cfg.num_haps} uplink channels, got {len(uplink_channels)}"
        )
    if len(downlink_channels) != cfg.num_gs:
        raise ValueError(
            f"expected {cfg.num_gs} downlink channels, got {len(downlink_channels)}"
        )
    c1 = hop_sum_rate(uplink_channels, cfg.hap_power, cfg.noise_power,
                      cfg.streams_per_tx, cfg.all_streams)
    c2 = hop_sum_rate(downlink_channels, cfg.relay_power, cfg.noise_power,
                      cfg.streams_per_tx, cfg.all_streams)
    return CapacityBreakdown(c1, c2, cfg.dof_prefactor)


def no_relay_baseline(direct_channels: Sequence[Sequence[np.ndarray]],
                      cfg: NetworkConfig) -> float:
    """Orthogonal time-sharing rate without the relay, in bits/s/Hz.

    Each of the M*N platform-to-ground pairs is active for a 1/(M*N) time
    share and zero-forces all of its own streams; no cross-pair interference
    is modeled because the pairs never transmit simultaneously.
    """
    if len(direct_channels) != cfg.num_haps:
        raise ValueError(
            f"expected {cfg.num_haps} rows of direct channels, "
            f"got {len(direct_channels)}"
        )
    total = 0.0
    for row in direct_channels:
        if len(row) != cfg.num_gs:
            raise ValueError(
                f"expected {cfg.num_gs} direct channels per row, got {len(row)}"
            )
        for h in row:
            h = np.asarray(h, dtype=np.complex128)
            n_t = cfg.streams_per_tx or h.shape[1]
            scale = cfg.hap_power / (cfg.noise_power * n_t)
            snrs = [s.snr_linear for s in zf_all_streams(h, scale)]
            total += float(np.sum(np.log1p(snrs)) / _LN2)
    return total / (cfg.num_haps * cfg.num_gs)
