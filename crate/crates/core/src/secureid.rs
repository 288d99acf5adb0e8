//! Secure identification over a wiretapped Gaussian link: the achievable
//! identification rate is lower-bounded by the common-randomness capacity of
//! the legitimate pair whenever the wiretap channel sustains a positive
//! secrecy rate.

use alloc::format;

use crate::channel::{siso_capacity, ChannelSpec, Convention, SisoChannelSpec};
use crate::error::{CrError, Result};
use crate::math;
use crate::optimizer::{cr_capacity_detailed, OptimizerConfig};
use crate::prob::JointPmf;

/// Recorded next to every emitted bound: the secrecy rate used by the gate is
/// the difference of the two links' Gaussian capacities, which is exact for
/// this degraded pair but is an assumption, not a derived fact, here.
pub const SECRECY_ASSUMPTION: &str =
    "secrecy_capacity = max(0, C(P, noise_main) - C(P, noise_eve)) per signalling convention";

/// Legitimate and eavesdropper links sharing one transmit power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WiretapSpec {
    pub power_budget: f64,
    pub noise_var_main: f64,
    pub noise_var_eve: f64,
}

impl WiretapSpec {
    pub fn new(power_budget: f64, noise_var_main: f64, noise_var_eve: f64) -> Result<Self> {
        if !(power_budget.is_finite() && power_budget >= 0.0) {
            return Err(CrError::Domain(format!("power budget {power_budget} must be >= 0")));
        }
        for (name, v) in [("main", noise_var_main), ("eavesdropper", noise_var_eve)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CrError::Domain(format!("{name} noise variance {v} must be > 0")));
            }
        }
        Ok(WiretapSpec { power_budget, noise_var_main, noise_var_eve })
    }

    pub fn main_link(&self) -> SisoChannelSpec {
        SisoChannelSpec { power_budget: self.power_budget, noise_var: self.noise_var_main }
    }

    pub fn eve_link(&self) -> SisoChannelSpec {
        SisoChannelSpec { power_budget: self.power_budget, noise_var: self.noise_var_eve }
    }
}

/// Difference-of-capacities secrecy rate, clipped at zero. Zero exactly when
/// the eavesdropper's link is at least as clean as the legitimate one.
pub fn secrecy_capacity(spec: &WiretapSpec, convention: Convention) -> f64 {
    let main = siso_capacity(spec.main_link(), convention);
    let eve = siso_capacity(spec.eve_link(), convention);
    math::fmax(0.0, main - eve)
}

/// Outcome of the gated bound: when the gate is closed no rate is claimed.
#[derive(Debug, Clone, PartialEq)]
pub struct SecureIdBound {
    pub bound: Option<f64>,
    pub applicable: bool,
}

/// Lower bound on the secure identification rate: the common-randomness
/// capacity of the source over the legitimate link, claimed only when the
/// wiretap pair sustains a positive secrecy rate.
pub fn secure_id_lower_bound(
    source: &JointPmf,
    spec: &WiretapSpec,
    config: &OptimizerConfig,
) -> Result<SecureIdBound> {
    let applicable = secrecy_capacity(spec, Convention::Real) > 0.0;
    if !applicable {
        return Ok(SecureIdBound { bound: None, applicable: false });
    }
    let report = cr_capacity_detailed(
        source,
        &ChannelSpec::Siso(spec.main_link()),
        Convention::Real,
        config,
    )?;
    Ok(SecureIdBound { bound: Some(report.value), applicable: true })
}

/// How much the source correlation buys beyond plain randomized encoding:
/// the gated bound minus the legitimate link's own capacity, clipped at zero.
/// Errors when the gate is closed, since no claim exists to compare.
pub fn identification_gain(
    source: &JointPmf,
    spec: &WiretapSpec,
    config: &OptimizerConfig,
) -> Result<f64> {
    let b = secure_id_lower_bound(source, spec, config)?;
    match b.bound {
        Some(v) => {
            let baseline = siso_capacity(spec.main_link(), Convention::Real);
            Ok(math::fmax(0.0, v - baseline))
        }
        None => Err(CrError::NotApplicable(
            "no secrecy rate: the eavesdropper's link is at least as clean as the main link"
                .into(),
        )),
    }
}

/// Block bookkeeping of the identification scheme at block length n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeAccounting {
    pub n: usize,
    /// Total channel uses: the data block plus the tag block.
    pub m: usize,
    /// Tag block length, ceil(sqrt(n)).
    pub tag_block: usize,
    /// Wiretap code size ceil(e^{sqrt(n) * eps_id}).
    pub wiretap_code_size: u64,
}

/// Splits a block of n uses into data and tag parts and sizes the wiretap
/// code that protects the tag.
pub fn scheme_accounting(n: usize, eps_id: f64) -> Result<SchemeAccounting> {
    if n == 0 {
        return Err(CrError::Domain("block length must be >= 1".into()));
    }
    if !(eps_id.is_finite() && eps_id >= 0.0) {
        return Err(CrError::Domain(format!("identification slack {eps_id} must be >= 0")));
    }
    let isq = n.isqrt();
    let tag_block = if isq * isq == n { isq } else { isq + 1 };
    let exponent = math::sqrt(n as f64) * eps_id;
    if exponent > 43.0 {
        // e^43 overflows the u64 code size
        return Err(CrError::Config(format!(
            "wiretap code size e^{exponent:.1} exceeds the representable range"
        )));
    }
    let size = math::ceil(math::exp(exponent));
    Ok(SchemeAccounting { n, m: n + tag_block, tag_block, wiretap_code_size: size as u64 })
}
