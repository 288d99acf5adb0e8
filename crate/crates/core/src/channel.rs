//! Gaussian channel capacities: scalar links under both real and complex
//! signalling conventions, waterfilling over MIMO eigenmodes, and the power
//! at which the binary source's agreement rate saturates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{CrError, Result};
use crate::math;
use crate::prob::binary_entropy_f;

/// Signalling convention for Gaussian capacities. `Real` gives
/// `ln(1 + snr) / 2` per use, `Complex` gives `ln(1 + snr)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Real,
    Complex,
}

/// Scalar Gaussian link with an average power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SisoChannelSpec {
    pub power_budget: f64,
    pub noise_var: f64,
}

impl SisoChannelSpec {
    pub fn new(power_budget: f64, noise_var: f64) -> Result<Self> {
        if !(power_budget.is_finite() && power_budget >= 0.0) {
            return Err(CrError::Domain(format!("power budget {power_budget} must be >= 0")));
        }
        if !(noise_var.is_finite() && noise_var > 0.0) {
            return Err(CrError::Domain(format!("noise variance {noise_var} must be > 0")));
        }
        Ok(SisoChannelSpec { power_budget, noise_var })
    }
}

/// MIMO Gaussian link: channel matrix H (receive x transmit), total transmit
/// power budget, and per-antenna noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoChannelSpec {
    h: Vec<Complex64>,
    rows: usize,
    cols: usize,
    pub power_budget: f64,
    pub noise_var: f64,
}

impl MimoChannelSpec {
    pub fn new(
        h: Vec<Complex64>,
        rows: usize,
        cols: usize,
        power_budget: f64,
        noise_var: f64,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 || h.len() != rows * cols {
            return Err(CrError::DimensionMismatch(format!(
                "channel matrix: {} entries cannot be {rows} x {cols}",
                h.len()
            )));
        }
        if h.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CrError::Domain("channel matrix has non-finite entries".into()));
        }
        if !(power_budget.is_finite() && power_budget >= 0.0) {
            return Err(CrError::Domain(format!("power budget {power_budget} must be >= 0")));
        }
        if !(noise_var.is_finite() && noise_var > 0.0) {
            return Err(CrError::Domain(format!("noise variance {noise_var} must be > 0")));
        }
        Ok(MimoChannelSpec { h, rows, cols, power_budget, noise_var })
    }

    pub fn from_real(
        h: &[f64],
        rows: usize,
        cols: usize,
        power_budget: f64,
        noise_var: f64,
    ) -> Result<Self> {
        let hc = h.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(hc, rows, cols, power_budget, noise_var)
    }

    pub fn identity(n: usize, power_budget: f64, noise_var: f64) -> Result<Self> {
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            h[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self::new(h, n, n, power_budget, noise_var)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.h
    }
}

/// Either flavour of channel; the optimizer only ever needs the resulting
/// rate budget.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Siso(SisoChannelSpec),
    Mimo(MimoChannelSpec),
}

/// Result of waterfilling a power budget over channel eigenmodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillAllocation {
    /// Singular values of H, descending.
    pub singular_values: Vec<f64>,
    /// Optimal per-mode transmit powers, same order.
    pub powers: Vec<f64>,
    /// Common water level w; mode l gets max(0, w - noise/sv_l^2).
    pub water_level: f64,
}

/// Singular values of a complex matrix via one-sided Jacobi, descending.
///
/// Returns an error if the matrix is numerically rank deficient, since the
/// waterfilling consumer divides by squared singular values.
pub fn singular_values(h: &MimoChannelSpec) -> Result<Vec<f64>> {
    // one-sided Jacobi orthogonalizes columns; run on the thinner side
    let (m, n, at) = if h.rows >= h.cols {
        (h.rows, h.cols, false)
    } else {
        (h.cols, h.rows, true)
    };
    let mut a = vec![Complex64::new(0.0, 0.0); m * n];
    for r in 0..h.rows {
        for c in 0..h.cols {
            let v = h.h[r * h.cols + c];
            if at {
                a[c * h.rows + r] = v.conj();
            } else {
                a[r * h.cols + c] = v;
            }
        }
    }
    let col = |a: &[Complex64], j: usize, i: usize| a[i * n + j];

    let fro2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if fro2 == 0.0 {
        return Err(CrError::Numerical("channel matrix is zero, no usable eigenmodes".into()));
    }
    let off_tol = 1e-28 * fro2;

    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut hpp = 0.0;
                let mut hqq = 0.0;
                let mut hpq = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let ap = col(&a, p, i);
                    let aq = col(&a, q, i);
                    hpp += ap.norm_sqr();
                    hqq += aq.norm_sqr();
                    hpq += ap.conj() * aq;
                }
                if hpq.norm_sqr() <= off_tol * 1e-2 || hpq.norm_sqr() <= 1e-30 * hpp * hqq {
                    continue;
                }
                rotated = true;
                // absorb the phase so the 2x2 problem is real symmetric
                let r = hpq.norm();
                let phase = hpq / r;
                let tau = (hqq - hpp) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..m {
                    let ap = a[i * n + p];
                    let aq = a[i * n + q] * phase.conj();
                    a[i * n + p] = ap * c - aq * s;
                    a[i * n + q] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut svs: Vec<f64> = (0..n)
        .map(|j| {
            let nrm2: f64 = (0..m).map(|i| col(&a, j, i).norm_sqr()).sum();
            math::sqrt(nrm2)
        })
        .collect();
    svs.sort_by(|x, y| y.total_cmp(x));

    let smax = svs[0];
    let rank_tol = (h.rows.max(h.cols) as f64) * smax * 1e-12;
    if svs.iter().any(|&s| s <= rank_tol) {
        return Err(CrError::Numerical(format!(
            "channel matrix is rank deficient (smallest singular value {:.3e} vs scale {:.3e})",
            svs[svs.len() - 1],
            smax
        )));
    }
    Ok(svs)
}

/// Waterfills `power` over modes with gains `svs` and noise `noise_var`:
/// powers `max(0, w - noise/sv^2)` with w chosen by bisection so they sum to
/// the budget, to absolute accuracy 1e-12 on w.
pub(crate) fn waterfill_over_modes(
    svs: &[f64],
    power: f64,
    noise_var: f64,
) -> WaterfillAllocation {
    let costs: Vec<f64> = svs.iter().map(|&s| noise_var / (s * s)).collect();
    let cmax = costs.iter().fold(0.0_f64, |a, &b| math::fmax(a, b));
    if power <= 0.0 {
        let cmin = costs.iter().fold(f64::INFINITY, |a, &b| math::fmin(a, b));
        return WaterfillAllocation {
            singular_values: svs.to_vec(),
            powers: vec![0.0; svs.len()],
            water_level: cmin,
        };
    }
    let spend = |w: f64| -> f64 { costs.iter().map(|&c| math::fmax(0.0, w - c)).sum() };
    let mut lo = 0.0;
    let mut hi = cmax + power;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if spend(mid) < power {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    let powers: Vec<f64> = costs.iter().map(|&c| math::fmax(0.0, w - c)).collect();
    WaterfillAllocation { singular_values: svs.to_vec(), powers, water_level: w }
}

/// Optimal power allocation for a MIMO spec: SVD, then waterfilling.
pub fn waterfill(spec: &MimoChannelSpec) -> Result<WaterfillAllocation> {
    let svs = singular_values(spec)?;
    Ok(waterfill_over_modes(&svs, spec.power_budget, spec.noise_var))
}

/// Scalar Gaussian capacity in nats per use under the chosen convention.
pub fn siso_capacity(spec: SisoChannelSpec, convention: Convention) -> f64 {
    let snr = spec.power_budget / spec.noise_var;
    match convention {
        Convention::Real => 0.5 * math::ln_1p(snr),
        Convention::Complex => math::ln_1p(snr),
    }
}

/// MIMO capacity in nats per use (complex convention): waterfilled sum of
/// per-mode rates.
pub fn mimo_capacity(spec: &MimoChannelSpec) -> Result<f64> {
    let alloc = waterfill(spec)?;
    let mut c = 0.0;
    for (s, p) in alloc.singular_values.iter().zip(alloc.powers.iter()) {
        c += math::ln_1p(s * s * p / spec.noise_var);
    }
    Ok(c)
}

/// Power at which a real Gaussian link's capacity reaches the conditional
/// entropy h(mu) of the binary source: `noise_var * (e^{2 h(mu)} - 1)`.
/// Beyond this power the agreement rate is pinned at ln 2.
pub fn p_star(mu: f64, noise_var: f64) -> Result<f64> {
    if !(noise_var.is_finite() && noise_var > 0.0) {
        return Err(CrError::Domain(format!("noise variance {noise_var} must be > 0")));
    }
    let h = binary_entropy_f(mu)?;
    Ok(noise_var * math::exp_m1(2.0 * h))
}
