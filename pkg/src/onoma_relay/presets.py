"""Parameter sets of the six rate-versus-a2 / rate-versus-SNR figures."""
from __future__ import annotations

from dataclasses import dataclass

from .channel import RicianLink
from .rates import SystemParams, db_to_linear

K_FACTORS = (2.0, 5.0, 5.0)  # (SD, SR, RD)


@dataclass(frozen=True)
class FigurePreset:
    id: str
    a2: float
    snr_db: float
    omega_sd: float
    omega_sr: float
    omega_rd: float
    variable: str  # "a2" or "snr"
    start: float
    stop: float
    step: float
    k_sd: float = K_FACTORS[0]
    k_sr: float = K_FACTORS[1]
    k_rd: float = K_FACTORS[2]

    @property
    def rho(self) -> float:
        return db_to_linear(self.snr_db)

    @property
    def mean_power_sd(self) -> float:
        return self.omega_sd**2

    @property
    def mean_power_sr(self) -> float:
        return self.omega_sr**2

    @property
    def mean_power_rd(self) -> float:
        return self.omega_rd**2

    def links(self) -> tuple[RicianLink, RicianLink, RicianLink]:
        return (
            RicianLink.from_amplitude(self.k_sd, self.omega_sd),
            RicianLink.from_amplitude(self.k_sr, self.omega_sr),
            RicianLink.from_amplitude(self.k_rd, self.omega_rd),
        )

    def system(self, a2: float | None = None, snr_db: float | None = None) -> SystemParams:
        return SystemParams.from_db(self.a2 if a2 is None else a2,
                                    self.snr_db if snr_db is None else snr_db)


def _a2_sweep(fid, snr_db, omega_relay):
    return FigurePreset(fid, 0.1, snr_db, 3.0, omega_relay, omega_relay, "a2", 0.1, 0.4, 0.05)


def _snr_sweep(fid, omega_relay):
    return FigurePreset(fid, 0.1, 5.0, 3.0, omega_relay, omega_relay, "snr", 5.0, 15.0, 1.0)


PRESETS: dict[str, FigurePreset] = {
    p.id: p
    for p in (
        _a2_sweep("fig4", 20.0, 6.0),
        _a2_sweep("fig5", 30.0, 6.0),
        _a2_sweep("fig6", 20.0, 12.0),
        _a2_sweep("fig7", 30.0, 12.0),
        _snr_sweep("fig8", 6.0),
        _snr_sweep("fig9", 12.0),
    )
}


def preset_table() -> dict[str, FigurePreset]:
    return dict(PRESETS)
