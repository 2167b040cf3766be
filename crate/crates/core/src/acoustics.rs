//! Underwater acoustic link budget.
//!
//! All quantities follow the usual sonar-equation conventions: levels in dB
//! re 1 µPa at 1 m, frequencies in kHz for the absorption model, distances in
//! metres. The absorption coefficient is in dB/km, so the path length is
//! converted to kilometres before it is applied.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source-level constant of the active sonar equation (dB re 1 µPa @ 1 m per W).
pub const SOURCE_LEVEL_REF_DB: f64 = 170.8;

/// Acoustic constants shared by the energy-transfer and uplink models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// Energy-transfer carrier, kHz.
    pub f_wet: f64,
    /// Data uplink carrier, kHz.
    pub f_data: f64,
    /// AUV projector electrical input power, W.
    pub p_elec: f64,
    /// AUV projector electro-acoustic efficiency.
    pub eta: f64,
    /// Node transmitter electro-acoustic efficiency.
    pub eta_tx: f64,
    /// AUV projector directivity index, dB.
    pub di: f64,
    /// Node transmitter directivity index, dB.
    pub di_tx: f64,
    /// Geometric spreading factor (1.5 = practical spreading).
    pub k_s: f64,
    /// Receiving voltage sensitivity, dB re 1 V/µPa.
    pub rvs: f64,
    /// Harvester load resistance, Ω.
    pub r_p: f64,
    pub eta_harv: f64,
    /// Number of harvesting hydrophones per node.
    pub n_hyd: u32,
    pub bandwidth_hz: f64,
    pub rate_bps: f64,
    /// Flat ambient noise power spectral density, dB re 1 µPa²/Hz.
    pub nl_psd: f64,
    /// Noise level subtracted in the energy-transfer received level, dB.
    pub wet_noise_db: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            f_wet: 70.0,
            f_data: 50.0,
            p_elec: 5.0,
            eta: 0.7,
            eta_tx: 0.7,
            di: 10.0,
            di_tx: 10.0,
            k_s: 1.5,
            rvs: -150.0,
            r_p: 125.0,
            eta_harv: 0.8,
            n_hyd: 4,
            bandwidth_hz: 1000.0,
            rate_bps: 12_000.0,
            nl_psd: 50.0,
            wet_noise_db: 0.0,
        }
    }
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in (0, 1], got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        unit_interval("eta", self.eta)?;
        unit_interval("eta_tx", self.eta_tx)?;
        unit_interval("eta_harv", self.eta_harv)?;
        positive("f_wet", self.f_wet)?;
        positive("f_data", self.f_data)?;
        positive("p_elec", self.p_elec)?;
        positive("r_p", self.r_p)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("rate_bps", self.rate_bps)?;
        positive("k_s", self.k_s)?;
        if self.n_hyd == 0 {
            return Err(Error::Config("n_hyd must be at least 1".into()));
        }
        for (name, v) in [
            ("di", self.di),
            ("di_tx", self.di_tx),
            ("rvs", self.rvs),
            ("nl_psd", self.nl_psd),
            ("wet_noise_db", self.wet_noise_db),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Level radiated by the AUV projector.
    pub fn auv_source_level(&self) -> f64 {
        // p_elec and eta are validated positive, so this cannot fail.
        SOURCE_LEVEL_REF_DB + 10.0 * self.p_elec.log10() + 10.0 * self.eta.log10() + self.di
    }

    /// In-band noise level seen by the uplink receiver.
    pub fn uplink_noise_db(&self) -> f64 {
        noise_level_band(self.nl_psd, self.bandwidth_hz)
    }
}

/// Thorp's seawater absorption, dB/km, for `f_khz` in kHz.
pub fn thorp_absorption(f_khz: f64) -> Result<f64> {
    if !(f_khz >= 0.0) {
        return Err(Error::Domain(format!("frequency must be non-negative, got {f_khz}")));
    }
    let f2 = f_khz * f_khz;
    Ok(0.11 * f2 / (f2 + 1.0) + 44.0 * f2 / (f2 + 4100.0) + 2.75e-4 * f2 + 0.003)
}

/// Source level of a projector driven with `p_elec` watts.
pub fn source_level(p_elec: f64, eta: f64, di: f64) -> Result<f64> {
    if !(p_elec > 0.0) {
        return Err(Error::Domain(format!("electrical power must be positive, got {p_elec}")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("efficiency must lie in (0, 1], got {eta}")));
    }
    Ok(SOURCE_LEVEL_REF_DB + 10.0 * p_elec.log10() + 10.0 * eta.log10() + di)
}

/// Spreading plus absorption loss over `d_m` metres at `f_khz`.
///
/// Spreading is referenced to 1 m; absorption uses the path length in km.
pub fn attenuation(d_m: f64, f_khz: f64, k_s: f64) -> Result<f64> {
    if !(d_m >= 1.0) {
        return Err(Error::Domain(format!(
            "distance {d_m} m is inside the 1 m reference sphere"
        )));
    }
    if !(f_khz > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {f_khz}")));
    }
    Ok(k_s * 10.0 * d_m.log10() + (d_m / 1000.0) * thorp_absorption(f_khz)?)
}

/// Sonar equation: RL = SL - AL - NL.
pub fn received_level(sl: f64, al: f64, nl: f64) -> f64 {
    sl - al - nl
}

/// Noise level integrated over a flat band.
pub fn noise_level_band(nl_psd: f64, bandwidth_hz: f64) -> f64 {
    nl_psd + 10.0 * bandwidth_hz.log10()
}

/// Electrical power available at a node receiving level `rl`.
pub fn harvest_power(rl: f64, params: &ChannelParams) -> f64 {
    params.eta_harv * f64::from(params.n_hyd) * 10f64.powf((rl + params.rvs) / 10.0)
        / (4.0 * params.r_p)
}

pub fn harvest_energy(p_harv: f64, tau_charging: f64) -> f64 {
    p_harv * tau_charging
}

/// Shannon-limited SNR needed to carry `rate_bps` over `bandwidth_hz`.
pub fn required_snr_db(rate_bps: f64, bandwidth_hz: f64) -> f64 {
    10.0 * ((rate_bps / bandwidth_hz).exp2() - 1.0).log10()
}

/// Transmit power a node needs to reach the AUV at distance `d_m`.
pub fn required_uplink_power(d_m: f64, params: &ChannelParams) -> Result<f64> {
    let tl = attenuation(d_m, params.f_data, params.k_s)?;
    let sl_req =
        required_snr_db(params.rate_bps, params.bandwidth_hz) + tl + params.uplink_noise_db();
    let exponent =
        (sl_req - SOURCE_LEVEL_REF_DB - 10.0 * params.eta_tx.log10() - params.di_tx) / 10.0;
    Ok(10f64.powf(exponent))
}

pub fn required_uplink_energy(p_trans: f64, tau_data: f64) -> f64 {
    p_trans * tau_data
}

/// Energy a node collects in `tau` seconds from an AUV `d_m` metres away.
pub fn wet_energy_at(d_m: f64, tau: f64, params: &ChannelParams) -> Result<f64> {
    let al = attenuation(d_m, params.f_wet, params.k_s)?;
    let rl = received_level(params.auv_source_level(), al, params.wet_noise_db);
    Ok(harvest_energy(harvest_power(rl, params), tau))
}

/// Energy a node spends to deliver one slot of data to an AUV `d_m` metres away.
pub fn uplink_energy_at(d_m: f64, tau: f64, params: &ChannelParams) -> Result<f64> {
    Ok(required_uplink_energy(required_uplink_power(d_m, params)?, tau))
}
