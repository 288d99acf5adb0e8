//! Monte-Carlo simulator of the one-shot agreement protocol: terminal A sees
//! the X-word, picks a jointly typical codeword from a doubly indexed type
//! codebook, sends the row index over the rate-limited channel, and terminal
//! B recovers the codeword from its Y-word and the received row. The agreed
//! value is the codeword itself; either side may land on the distinguished
//! abort value instead.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::channel::{siso_capacity, Convention, SisoChannelSpec};
use crate::error::{CrError, Result};
use crate::math;
use crate::prob::{AuxJoint, JointPmf};

const CODEBOOK_TAG: u64 = 0x636f_6465_626f_6f6b;
const LINK_TAG: u64 = 0x6c69_6e6b_7365_6564;
const TRIAL_TAG: u64 = 0x7472_6961_6c73_6564;

/// Maximal codebook footprint in symbols; larger requests are refused.
const MEMORY_CAP: f64 = 1e8;

/// Slack added to every typicality comparison so exact-rational counts are
/// not rejected by float noise.
const TYPE_EPS: f64 = 1e-12;

/// z for two-sided 95% intervals.
const Z95: f64 = 1.959963984540054;

/// How the row index travels from A to B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMode {
    /// Delivered intact whenever ln(N1)/n is within the link capacity,
    /// otherwise flipped to a uniformly random wrong row half the time.
    Ideal,
    /// An actual Gaussian random code: one iid N(0, P) word per row,
    /// nearest-neighbour decoding at the receiver.
    AwgnRandomCode,
}

/// Everything a protocol run needs.
#[derive(Debug, Clone)]
pub struct SchemeParams {
    pub n: usize,
    pub delta: f64,
    pub aux: AuxJoint,
    pub source: JointPmf,
    pub channel: SisoChannelSpec,
    pub mode: ChannelMode,
    pub trials: usize,
    pub seed: u64,
}

/// The doubly indexed codebook: `n1 * n2` words of length `n` over the
/// auxiliary alphabet, each an independently shuffled copy of the same
/// n-type.
#[derive(Debug, Clone)]
pub struct Codebook {
    words: Vec<u8>,
    pub n1: usize,
    pub n2: usize,
    pub n: usize,
}

impl Codebook {
    pub fn word(&self, i: usize, j: usize) -> &[u8] {
        let off = (i * self.n2 + j) * self.n;
        &self.words[off..off + self.n]
    }
}

/// Result of the encoding step: the chosen codeword index if any, and the
/// row index actually transmitted (row 0 on fallback).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOutcome {
    pub index: Option<(usize, usize)>,
    pub transmit_row: usize,
}

/// Result of the decoding step: the unique typical column if exactly one
/// exists, plus how many columns passed the test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub j: Option<usize>,
    pub candidates: usize,
}

/// Aggregated protocol statistics over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Fraction of trials where the two agreed values differ.
    pub est_mismatch: f64,
    /// Wilson 95% interval for the mismatch probability.
    pub mismatch_ci: (f64, f64),
    /// Plug-in entropy of terminal A's value with Miller-Madow correction,
    /// per source symbol.
    pub est_entropy_rate: f64,
    /// Fraction of trials where the channel delivered the wrong row.
    pub channel_error_rate: f64,
    /// Fraction of trials where the encoder found no typical codeword.
    pub encoder_fallback_rate: f64,
    /// Fraction of trials where the decoder saw two or more typical columns.
    pub decode_ambiguity_rate: f64,
    /// Fraction of trials with a mismatch despite a correct channel.
    pub decode_mismatch_rate: f64,
    pub trials: usize,
    pub n1: usize,
    pub n2: usize,
}

fn validate_params(p: &SchemeParams) -> Result<()> {
    if p.n == 0 {
        return Err(CrError::Config("block length must be >= 1".into()));
    }
    if !(p.delta > 0.0 && p.delta <= 1.0) {
        return Err(CrError::Config(format!("typicality width {} must lie in (0, 1]", p.delta)));
    }
    if p.trials == 0 {
        return Err(CrError::Config("trial count must be >= 1".into()));
    }
    if p.aux.nx() != p.source.nx() {
        return Err(CrError::DimensionMismatch(format!(
            "auxiliary joint has {} source letters, source has {}",
            p.aux.nx(),
            p.source.nx()
        )));
    }
    if p.aux.nu() * p.aux.nx() > 32 || p.aux.nu() * p.source.ny() > 32 || p.source.nx() > 8 {
        return Err(CrError::Unsupported(
            "protocol simulation is sized for small alphabets (|U| x |X| and |U| x |Y| up to 32)"
                .into(),
        ));
    }
    let px = p.source.marginal_x();
    for (x, &m) in p.aux.marginal_x().iter().enumerate() {
        if math::abs(m - px.prob(x)) > 1e-6 {
            return Err(CrError::InvalidDistribution(format!(
                "auxiliary joint's X-marginal {m} at letter {x} disagrees with the source's {}",
                px.prob(x)
            )));
        }
    }
    Ok(())
}

/// P(U,Y) induced by the auxiliary joint through the source's channel.
fn aux_uy(p: &SchemeParams) -> Vec<f64> {
    let w = p.source.conditional_y_given_x();
    let (nu, nx, ny) = (p.aux.nu(), p.aux.nx(), p.source.ny());
    let mut uy = vec![0.0; nu * ny];
    for x in 0..nx {
        for y in 0..ny {
            let wyx = w.prob(y, x);
            for u in 0..nu {
                uy[u * ny + y] += p.aux.prob(u, x) * wyx;
            }
        }
    }
    uy
}

fn mutual_information_of(table: &[f64], rows: usize, cols: usize) -> f64 {
    let mut mr = vec![0.0; rows];
    let mut mc = vec![0.0; cols];
    for r in 0..rows {
        for c in 0..cols {
            mr[r] += table[r * cols + c];
            mc[c] += table[r * cols + c];
        }
    }
    crate::prob::entropy_slice(&mr) + crate::prob::entropy_slice(&mc)
        - crate::prob::entropy_slice(table)
}

/// Codebook shape from the auxiliary joint's rates:
/// N1 = ceil(e^{n (I(U;X) - I(U;Y) + 3 delta)}), N2 = ceil(e^{n (I(U;Y) - 2 delta)}).
pub fn scheme_sizes(p: &SchemeParams) -> Result<(usize, usize)> {
    validate_params(p)?;
    let iux = p.aux.mutual_information_ux();
    let uy = aux_uy(p);
    let iuy = mutual_information_of(&uy, p.aux.nu(), p.source.ny());
    let e1 = p.n as f64 * (iux - iuy + 3.0 * p.delta);
    let e2 = p.n as f64 * (iuy - 2.0 * p.delta);
    if e1 > 21.0 || e2 > 21.0 {
        return Err(CrError::Config(format!(
            "codebook would need e^{:.1} rows or columns; shrink n or delta",
            math::fmax(e1, e2)
        )));
    }
    let n1 = math::ceil(math::exp(e1)) as usize;
    let n2 = math::ceil(math::exp(e2)) as usize;
    let n1 = n1.max(1);
    let n2 = n2.max(1);
    if (n1 as f64) * (n2 as f64) * (p.n as f64) > MEMORY_CAP {
        return Err(CrError::Config(format!(
            "codebook of {n1} x {n2} words of length {} exceeds the {MEMORY_CAP:.0}-symbol cap; \
             shrink n or delta",
            p.n
        )));
    }
    Ok((n1, n2))
}

/// Rounds a pmf to an n-type by largest remainder; the result deviates from
/// the target by less than 1/n in every coordinate.
fn round_to_type(probs: &[f64], n: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = probs.iter().map(|&p| libm::floor(p * n as f64) as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut rem: Vec<(f64, usize)> = probs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p * n as f64 - counts[i] as f64, i))
        .collect();
    // largest fractional part first; ties to the smaller symbol
    rem.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for k in 0..(n - assigned) {
        counts[rem[k % rem.len()].1] += 1;
    }
    counts
}

/// Builds the codebook: every word carries the same n-type rounded from the
/// auxiliary U-marginal, shuffled independently per (row, column) with a
/// seed derived from the scheme seed and the word's coordinates.
pub fn build_codebooks(p: &SchemeParams) -> Result<Codebook> {
    let (n1, n2) = scheme_sizes(p)?;
    let pu = p.aux.marginal_u();
    let counts = round_to_type(&pu, p.n);
    for (u, &c) in counts.iter().enumerate() {
        if math::abs(c as f64 / p.n as f64 - pu[u]) > 1.0 / p.n as f64 + TYPE_EPS {
            return Err(CrError::Config(format!(
                "no n-type within 1/n of the auxiliary marginal at block length {}; \
                 pick an n compatible with the marginal",
                p.n
            )));
        }
    }
    let mut base = Vec::with_capacity(p.n);
    for (u, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            base.push(u as u8);
        }
    }
    let cb_seed = math::hash64(p.seed ^ CODEBOOK_TAG);
    let mut words = vec![0u8; n1 * n2 * p.n];
    for i in 0..n1 {
        for j in 0..n2 {
            let key = ((i as u64) << 32) | j as u64;
            let mut rng = ChaCha12Rng::seed_from_u64(math::hash64(cb_seed ^ key));
            let mut w = base.clone();
            // Fisher-Yates
            for k in (1..w.len()).rev() {
                let r = rng.gen_range(0..=k);
                w.swap(k, r);
            }
            let off = (i * n2 + j) * p.n;
            words[off..off + p.n].copy_from_slice(&w);
        }
    }
    Ok(Codebook { words, n1, n2, n: p.n })
}

struct Targets {
    px: Vec<f64>,
    p_ux: Vec<f64>,
    p_uy: Vec<f64>,
    nu: usize,
    nx: usize,
    ny: usize,
}

impl Targets {
    fn new(p: &SchemeParams) -> Targets {
        let (nu, nx, ny) = (p.aux.nu(), p.aux.nx(), p.source.ny());
        let mut p_ux = vec![0.0; nu * nx];
        for u in 0..nu {
            for x in 0..nx {
                p_ux[u * nx + x] = p.aux.prob(u, x);
            }
        }
        Targets {
            px: p.source.marginal_x().probs().to_vec(),
            p_ux,
            p_uy: aux_uy(p),
            nu,
            nx,
            ny,
        }
    }

    fn x_typical(&self, x: &[u8], delta: f64) -> bool {
        let n = x.len() as f64;
        let mut counts = [0usize; 8];
        for &s in x {
            counts[s as usize] += 1;
        }
        (0..self.nx).all(|v| math::abs(counts[v] as f64 / n - self.px[v]) <= delta + TYPE_EPS)
    }

    fn ux_typical(&self, u: &[u8], x: &[u8], delta: f64) -> bool {
        let n = u.len() as f64;
        let mut counts = [0usize; 32];
        for (&su, &sx) in u.iter().zip(x.iter()) {
            counts[su as usize * self.nx + sx as usize] += 1;
        }
        (0..self.nu * self.nx)
            .all(|c| math::abs(counts[c] as f64 / n - self.p_ux[c]) <= delta + TYPE_EPS)
    }

    fn uy_typical(&self, u: &[u8], y: &[u8], delta: f64) -> bool {
        let n = u.len() as f64;
        let mut counts = [0usize; 32];
        for (&su, &sy) in u.iter().zip(y.iter()) {
            counts[su as usize * self.ny + sy as usize] += 1;
        }
        (0..self.nu * self.ny)
            .all(|c| math::abs(counts[c] as f64 / n - self.p_uy[c]) <= delta + TYPE_EPS)
    }
}

fn encode_with(targets: &Targets, x: &[u8], cb: &Codebook, delta: f64) -> EncodeOutcome {
    if !targets.x_typical(x, delta) {
        return EncodeOutcome { index: None, transmit_row: 0 };
    }
    for i in 0..cb.n1 {
        for j in 0..cb.n2 {
            if targets.ux_typical(cb.word(i, j), x, delta) {
                return EncodeOutcome { index: Some((i, j)), transmit_row: i };
            }
        }
    }
    EncodeOutcome { index: None, transmit_row: 0 }
}

fn decode_with(targets: &Targets, y: &[u8], i_tilde: usize, cb: &Codebook, delta: f64) -> DecodeOutcome {
    let mut hit = None;
    let mut candidates = 0;
    for j in 0..cb.n2 {
        if targets.uy_typical(cb.word(i_tilde, j), y, delta) {
            candidates += 1;
            if hit.is_none() {
                hit = Some(j);
            }
        }
    }
    DecodeOutcome { j: if candidates == 1 { hit } else { None }, candidates }
}

/// Terminal A's encoder: checks the X-word's own typicality, then scans the
/// codebook in ascending (row, column) order for the first jointly typical
/// codeword. On failure the fallback transmits row 0 and the agreed value is
/// the abort symbol.
pub fn terminal_a_encode(x_seq: &[u8], codebook: &Codebook, params: &SchemeParams) -> Result<EncodeOutcome> {
    validate_params(params)?;
    if x_seq.len() != params.n {
        return Err(CrError::DimensionMismatch(format!(
            "x word of length {} in a block-{} scheme",
            x_seq.len(),
            params.n
        )));
    }
    if x_seq.iter().any(|&s| s as usize >= params.source.nx()) {
        return Err(CrError::Domain("x word contains symbols outside the source alphabet".into()));
    }
    Ok(encode_with(&Targets::new(params), x_seq, codebook, params.delta))
}

/// Terminal B's decoder: within the received row, keep the columns whose
/// codeword is jointly typical with the Y-word; succeed only if exactly one
/// survives.
pub fn terminal_b_decode(
    y_seq: &[u8],
    i_tilde: usize,
    codebook: &Codebook,
    params: &SchemeParams,
) -> Result<DecodeOutcome> {
    validate_params(params)?;
    if y_seq.len() != params.n {
        return Err(CrError::DimensionMismatch(format!(
            "y word of length {} in a block-{} scheme",
            y_seq.len(),
            params.n
        )));
    }
    if i_tilde >= codebook.n1 {
        return Err(CrError::DimensionMismatch(format!(
            "row index {i_tilde} outside the {} rows",
            codebook.n1
        )));
    }
    if y_seq.iter().any(|&s| s as usize >= params.source.ny()) {
        return Err(CrError::Domain("y word contains symbols outside the source alphabet".into()));
    }
    Ok(decode_with(&Targets::new(params), y_seq, i_tilde, codebook, params.delta))
}

/// The index channel from A to B.
pub struct ChannelLink {
    mode: ChannelMode,
    n1: usize,
    n: usize,
    rate_ok: bool,
    noise_sd: f64,
    /// Gaussian code words, row-major, only in AwgnRandomCode mode.
    code: Vec<f64>,
}

impl ChannelLink {
    /// Draws the per-run Gaussian code (in AWGN mode) from the scheme seed.
    pub fn new(params: &SchemeParams, n1: usize) -> Result<ChannelLink> {
        let rate = math::ln(n1 as f64) / params.n as f64;
        let cap = siso_capacity(params.channel, Convention::Real);
        let mut code = Vec::new();
        if params.mode == ChannelMode::AwgnRandomCode {
            let sd = math::sqrt(params.channel.power_budget);
            let dist = Normal::new(0.0, sd).map_err(|_| {
                CrError::Domain("power budget must be finite and >= 0".into())
            })?;
            let mut rng = ChaCha12Rng::seed_from_u64(math::hash64(params.seed ^ LINK_TAG));
            code = (0..n1 * params.n).map(|_| dist.sample(&mut rng)).collect();
        }
        Ok(ChannelLink {
            mode: params.mode,
            n1,
            n: params.n,
            rate_ok: rate <= cap,
            noise_sd: math::sqrt(params.channel.noise_var),
            code,
        })
    }

    /// Sends row index i, returns the row index the receiver decides on.
    pub fn transmit_index(&self, i: usize, rng: &mut ChaCha12Rng) -> usize {
        match self.mode {
            ChannelMode::Ideal => {
                if self.rate_ok || self.n1 == 1 {
                    i
                } else if rng.gen::<f64>() < 0.5 {
                    i
                } else {
                    // uniformly wrong
                    let w = rng.gen_range(0..self.n1 - 1);
                    if w >= i {
                        w + 1
                    } else {
                        w
                    }
                }
            }
            ChannelMode::AwgnRandomCode => {
                let tx = &self.code[i * self.n..(i + 1) * self.n];
                let mut y = Vec::with_capacity(self.n);
                for &t in tx {
                    let z: f64 = rng.sample(rand_distr::StandardNormal);
                    y.push(t + self.noise_sd * z);
                }
                let mut best = 0;
                let mut best_d = f64::INFINITY;
                for k in 0..self.n1 {
                    let cw = &self.code[k * self.n..(k + 1) * self.n];
                    let mut d = 0.0;
                    for (a, b) in cw.iter().zip(y.iter()) {
                        let e = a - b;
                        d += e * e;
                    }
                    if d < best_d {
                        best_d = d;
                        best = k;
                    }
                }
                best
            }
        }
    }
}

fn wilson(successes: usize, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = Z95 * math::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    (((center - half) / denom).max(0.0), ((center + half) / denom).min(1.0))
}

/// Wilson 95% interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(CrError::Domain(format!("{successes} successes out of {trials} trials")));
    }
    Ok(wilson(successes, trials))
}

/// Runs the full protocol: draw source words, encode, transmit the row index,
/// decode, and compare the two agreed values (codeword or abort) as
/// sequences. Deterministic in the scheme seed.
pub fn run_simulation(params: &SchemeParams) -> Result<SimReport> {
    validate_params(params)?;
    let codebook = build_codebooks(params)?;
    let link = ChannelLink::new(params, codebook.n1)?;
    let targets = Targets::new(params);

    // cumulative source distribution over (x, y) cells
    let cells: Vec<f64> = params.source.table().to_vec();
    let ny = params.source.ny();
    let mut cdf = Vec::with_capacity(cells.len());
    let mut acc = 0.0;
    for &c in &cells {
        acc += c;
        cdf.push(acc);
    }

    let trial_base = math::hash64(params.seed ^ TRIAL_TAG);
    let mut mismatches = 0usize;
    let mut channel_errors = 0usize;
    let mut fallbacks = 0usize;
    let mut ambiguities = 0usize;
    let mut decode_mismatches = 0usize;
    let mut histogram: BTreeMap<Vec<u8>, u64> = BTreeMap::new();

    let mut x = vec![0u8; params.n];
    let mut y = vec![0u8; params.n];
    for t in 0..params.trials {
        let mut rng = ChaCha12Rng::seed_from_u64(math::hash64(trial_base ^ t as u64));
        for k in 0..params.n {
            let r: f64 = rng.gen();
            let mut cell = cells.len() - 1;
            for (c, &edge) in cdf.iter().enumerate() {
                if r < edge {
                    cell = c;
                    break;
                }
            }
            x[k] = (cell / ny) as u8;
            y[k] = (cell % ny) as u8;
        }

        let enc = encode_with(&targets, &x, &codebook, params.delta);
        let i_tilde = link.transmit_index(enc.transmit_row, &mut rng);
        let dec = decode_with(&targets, &y, i_tilde, &codebook, params.delta);

        let k_val: &[u8] = match enc.index {
            Some((i, j)) => codebook.word(i, j),
            None => &[],
        };
        let l_val: &[u8] = match dec.j {
            Some(j) => codebook.word(i_tilde, j),
            None => &[],
        };
        let mismatch = k_val != l_val;
        let cherr = i_tilde != enc.transmit_row;
        if mismatch {
            mismatches += 1;
        }
        if cherr {
            channel_errors += 1;
        }
        if enc.index.is_none() {
            fallbacks += 1;
        }
        if dec.candidates >= 2 {
            ambiguities += 1;
        }
        if mismatch && !cherr {
            decode_mismatches += 1;
        }
        *histogram.entry(k_val.to_vec()).or_insert(0) += 1;
    }

    let nt = params.trials as f64;
    let mut h = 0.0;
    for &c in histogram.values() {
        let p = c as f64 / nt;
        if p > 0.0 {
            h -= p * math::ln(p);
        }
    }
    // Miller-Madow bias correction
    h += (histogram.len().saturating_sub(1)) as f64 / (2.0 * nt);

    Ok(SimReport {
        est_mismatch: mismatches as f64 / nt,
        mismatch_ci: wilson(mismatches, params.trials),
        est_entropy_rate: h / params.n as f64,
        channel_error_rate: channel_errors as f64 / nt,
        encoder_fallback_rate: fallbacks as f64 / nt,
        decode_ambiguity_rate: ambiguities as f64 / nt,
        decode_mismatch_rate: decode_mismatches as f64 / nt,
        trials: params.trials,
        n1: codebook.n1,
        n2: codebook.n2,
    })
}
