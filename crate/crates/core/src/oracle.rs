//! Slow but independently trustworthy references for the optimizer: an
//! exhaustive grid search over conditional distributions, a one-parameter
//! binary-symmetric lower bound family, a finite-difference gradient check,
//! a multi-letter information identity check, and the directional witness
//! of the feasible set's nonconvexity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CrError, Result};
use crate::math;
use crate::optimizer::{grad_theta, ExtEval, Multipliers};
use crate::prob::{binary_entropy_f, entropy_slice, AuxJoint, JointPmf, MASS_ZERO};

/// Exhaustive-search resolution schedule: a full scan at `coarse_step`, then
/// `refine_rounds` local zooms shrinking the step by `refine_factor` each
/// time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub coarse_step: f64,
    pub refine_rounds: u32,
    pub refine_factor: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { coarse_step: 0.01, refine_rounds: 2, refine_factor: 10 }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if !(self.coarse_step > 0.0 && self.coarse_step <= 0.5) {
            return Err(CrError::Config(format!(
                "coarse step {} must lie in (0, 0.5]",
                self.coarse_step
            )));
        }
        if self.refine_factor < 2 {
            return Err(CrError::Config("refine factor must be >= 2".into()));
        }
        if self.refine_rounds > 6 {
            return Err(CrError::Config("more than 6 refine rounds is never useful".into()));
        }
        Ok(())
    }
}

fn h3(v: &[f64; 3]) -> f64 {
    let mut h = 0.0;
    for &p in v {
        if p > MASS_ZERO {
            h -= p * math::ln(p);
        }
    }
    h
}

/// Context for evaluating candidate conditionals a = P(U|X=0), b = P(U|X=1).
struct CondEval {
    px: [f64; 2],
    py: Vec<f64>,
    /// pxgy[y] = P(X=0 | Y=y); the X=1 weight is its complement.
    px0_given_y: Vec<f64>,
    bmin: f64,
}

impl CondEval {
    fn new(source: &JointPmf, cap_budget: f64) -> Result<CondEval> {
        if source.nx() != 2 {
            return Err(CrError::Unsupported(format!(
                "exhaustive search supports binary sources only, got |X| = {}",
                source.nx()
            )));
        }
        if !(cap_budget.is_finite() && cap_budget >= 0.0) {
            return Err(CrError::Domain(format!("rate budget {cap_budget} must be >= 0")));
        }
        let pxm = source.marginal_x();
        let pym = source.marginal_y();
        let h_x_given_y = entropy_slice(source.table()) - entropy_slice(pym.probs());
        let ny = source.ny();
        let mut px0_given_y = vec![0.0; ny];
        for y in 0..ny {
            let p = pym.prob(y);
            px0_given_y[y] = if p > MASS_ZERO { source.prob(0, y) / p } else { 0.5 };
        }
        Ok(CondEval {
            px: [pxm.prob(0), pxm.prob(1)],
            py: pym.probs().to_vec(),
            px0_given_y,
            bmin: math::fmin(cap_budget, h_x_given_y),
        })
    }

    /// (I(U;X), I(U;X|Y)) for the candidate pair.
    fn score(&self, a: &[f64; 3], b: &[f64; 3]) -> (f64, f64) {
        let [p0, p1] = self.px;
        let pu = [
            p0 * a[0] + p1 * b[0],
            p0 * a[1] + p1 * b[1],
            p0 * a[2] + p1 * b[2],
        ];
        let h_u_given_x = p0 * h3(a) + p1 * h3(b);
        let iux = h3(&pu) - h_u_given_x;
        let mut h_u_given_y = 0.0;
        for (y, &py) in self.py.iter().enumerate() {
            if py <= MASS_ZERO {
                continue;
            }
            let q0 = self.px0_given_y[y];
            let q1 = 1.0 - q0;
            let mix = [
                q0 * a[0] + q1 * b[0],
                q0 * a[1] + q1 * b[1],
                q0 * a[2] + q1 * b[2],
            ];
            h_u_given_y += py * h3(&mix);
        }
        (iux, h_u_given_y - h_u_given_x)
    }

    fn feasible(&self, condmi: f64) -> bool {
        condmi <= self.bmin + 1e-9
    }

    fn theta_of(&self, a: &[f64; 3], b: &[f64; 3]) -> [f64; 6] {
        [
            a[0] * self.px[0],
            a[1] * self.px[0],
            a[2] * self.px[0],
            b[0] * self.px[1],
            b[1] * self.px[1],
            b[2] * self.px[1],
        ]
    }
}

fn lex_less(a: &[f64; 6], b: &[f64; 6]) -> bool {
    for i in 0..6 {
        if a[i] < b[i] {
            return true;
        }
        if a[i] > b[i] {
            return false;
        }
    }
    false
}

struct Best {
    value: f64,
    a: [f64; 3],
    b: [f64; 3],
    theta: [f64; 6],
    found: bool,
}

impl Best {
    fn new() -> Best {
        Best { value: f64::NEG_INFINITY, a: [0.0; 3], b: [0.0; 3], theta: [0.0; 6], found: false }
    }

    fn offer(&mut self, ev: &CondEval, a: &[f64; 3], b: &[f64; 3], value: f64) {
        let theta = ev.theta_of(a, b);
        let better = value > self.value
            || (value == self.value && self.found && lex_less(&theta, &self.theta));
        if !self.found || better {
            self.value = value;
            self.a = *a;
            self.b = *b;
            self.theta = theta;
            self.found = true;
        }
    }
}

fn simplex3_grid(m: usize) -> Vec<[f64; 3]> {
    let inv = 1.0 / m as f64;
    let mut pts = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for i in 0..=m {
        for j in 0..=(m - i) {
            pts.push([i as f64 * inv, j as f64 * inv, (m - i - j) as f64 * inv]);
        }
    }
    pts
}

/// All simplex points within `radius` steps of `center` in the first two
/// coordinates, third coordinate balancing the sum; off-simplex combinations
/// are dropped.
fn simplex3_ball(center: &[f64; 3], step: f64, radius: i64) -> Vec<[f64; 3]> {
    let mut pts = Vec::new();
    for di in -radius..=radius {
        for dj in -radius..=radius {
            let i = center[0] + di as f64 * step;
            let j = center[1] + dj as f64 * step;
            let k = 1.0 - i - j;
            if i >= -1e-15 && j >= -1e-15 && k >= -1e-15 {
                pts.push([math::fmax(i, 0.0), math::fmax(j, 0.0), math::fmax(k, 0.0)]);
            }
        }
    }
    pts
}

fn scan(ev: &CondEval, cand_a: &[[f64; 3]], cand_b: &[[f64; 3]], best: &mut Best) {
    for a in cand_a {
        for b in cand_b {
            let (iux, condmi) = ev.score(a, b);
            if ev.feasible(condmi) {
                best.offer(ev, a, b, iux);
            }
        }
    }
}

/// Exhaustive reference for the common-randomness program on binary sources:
/// scans all pairs of conditionals P(U|X=0), P(U|X=1) on a simplex grid, then
/// zooms locally around the best grid point and around the binary-symmetric
/// family's optimum. Ties go to the lexicographically smallest joint. Returns
/// the best value and its joint.
pub fn brute_force_cr(
    source: &JointPmf,
    cap_budget: f64,
    grid: &GridSpec,
) -> Result<(f64, AuxJoint)> {
    grid.validate()?;
    let ev = CondEval::new(source, cap_budget)?;
    let m = libm::round(1.0 / grid.coarse_step) as usize;
    if m < 2 {
        return Err(CrError::Config(format!(
            "coarse step {} leaves fewer than 3 grid levels",
            grid.coarse_step
        )));
    }

    let mut best = Best::new();
    let pts = simplex3_grid(m);
    scan(&ev, &pts, &pts, &mut best);

    // lineage seeded by the binary-symmetric family at its bisected optimum
    let mu_eff = source.prob(0, 1) + source.prob(1, 0);
    let mut bsc = Best::new();
    if (0.0..=0.5 + 1e-12).contains(&mu_eff) {
        let alpha = bsc_family_alpha(math::fmin(mu_eff, 0.5), cap_budget)?;
        let a = [1.0 - alpha, alpha, 0.0];
        let b = [alpha, 1.0 - alpha, 0.0];
        let (iux, condmi) = ev.score(&a, &b);
        if ev.feasible(condmi) {
            bsc.offer(&ev, &a, &b, iux);
        }
    }

    let mut step = grid.coarse_step;
    for _ in 0..grid.refine_rounds {
        step /= grid.refine_factor as f64;
        let radius = grid.refine_factor as i64;
        for lineage in [&mut best, &mut bsc] {
            if !lineage.found {
                continue;
            }
            let ball_a = simplex3_ball(&lineage.a, step, radius);
            let ball_b = simplex3_ball(&lineage.b, step, radius);
            scan(&ev, &ball_a, &ball_b, lineage);
        }
    }

    if bsc.found
        && (bsc.value > best.value
            || (bsc.value == best.value && best.found && lex_less(&bsc.theta, &best.theta)))
    {
        best = bsc;
    }
    if !best.found {
        // the independent joint is always feasible, so this cannot happen for
        // a valid source; guard anyway
        return Err(CrError::Numerical("no feasible grid point found".into()));
    }
    Ok((best.value, AuxJoint::from_raw(best.theta.to_vec(), 2)))
}

/// The alpha solving h(mu * alpha) - h(alpha) = min(budget, h(mu)) within the
/// binary-symmetric auxiliary family U = X xor Bernoulli(alpha).
fn bsc_family_alpha(mu: f64, cap_budget: f64) -> Result<f64> {
    let f = binary_entropy_f(mu)?;
    let target = math::fmin(cap_budget, f);
    if target >= f {
        return Ok(0.0);
    }
    let lhs = |alpha: f64| -> f64 {
        let conv = mu * (1.0 - alpha) + alpha * (1.0 - mu);
        entropy_slice(&[conv, 1.0 - conv]) - entropy_slice(&[alpha, 1.0 - alpha])
    };
    let mut lo = 0.0;
    let mut hi = 0.5;
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Best agreement rate within the binary-symmetric auxiliary family
/// U = X xor Bernoulli(alpha): solves the rate constraint for alpha by
/// bisection and returns ln 2 - h(alpha). A lower bound on the true optimum,
/// tight on this source family. Budgets at or above h(mu) give ln 2 exactly;
/// budget 0 gives 0.
pub fn bsc_family_bound(mu: f64, cap_budget: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&mu) {
        return Err(CrError::Domain(format!("crossover mu = {mu} outside [0, 1/2]")));
    }
    if !(cap_budget.is_finite() && cap_budget >= 0.0) {
        return Err(CrError::Domain(format!("rate budget {cap_budget} must be >= 0")));
    }
    let alpha = bsc_family_alpha(mu, cap_budget)?;
    Ok(core::f64::consts::LN_2 - entropy_slice(&[alpha, 1.0 - alpha]))
}

/// Central-difference check of the primal gradient at an interior point:
/// returns the largest relative error across coordinates. Requires every
/// entry of `theta` to stay at least ten steps away from the boundary so the
/// differences never cross the probability floor.
pub fn finite_diff_check(
    theta: &AuxJoint,
    lambda: &Multipliers,
    source: &JointPmf,
    cap_budget: f64,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CrError::Domain(format!("difference step {step} must be positive")));
    }
    if theta.entries().iter().any(|&t| t < 10.0 * step) {
        return Err(CrError::Domain(
            "finite differences need interior points: every entry must be >= 10 * step".into(),
        ));
    }
    let analytic = grad_theta(theta, lambda, source, cap_budget)?;
    let ext = ExtEval::new(source, cap_budget)?;
    let mut worst = 0.0;
    for i in 0..theta.entries().len() {
        let mut plus = theta.entries().to_vec();
        let mut minus = plus.clone();
        plus[i] += step;
        minus[i] -= step;
        let fd = (ext.l_ext(&plus, &lambda.values) - ext.l_ext(&minus, &lambda.values))
            / (2.0 * step);
        let rel = math::abs(fd - analytic[i]) / math::fmax(math::abs(analytic[i]), 1e-6);
        worst = math::fmax(worst, rel);
    }
    Ok(worst)
}

/// Joint distribution of (S, R, X_1..X_n, Y_1..Y_n) on small alphabets,
/// flattened with S slowest and the Y-word fastest.
#[derive(Debug, Clone)]
pub struct MultiStepJoint {
    probs: Vec<f64>,
    r_card: usize,
    x_card: usize,
    y_card: usize,
    n: usize,
}

impl MultiStepJoint {
    pub fn new(
        probs: Vec<f64>,
        s_card: usize,
        r_card: usize,
        x_card: usize,
        y_card: usize,
        n: usize,
    ) -> Result<Self> {
        if n == 0 || n > 3 {
            return Err(CrError::Unsupported(format!("word length {n} outside 1..=3")));
        }
        if s_card == 0 || r_card == 0 || x_card == 0 || y_card == 0 {
            return Err(CrError::DimensionMismatch("empty alphabet".into()));
        }
        if s_card > 4 || r_card > 4 || x_card > 3 || y_card > 3 {
            return Err(CrError::Unsupported(
                "alphabets larger than 4/4/3/3 are not supported here".into(),
            ));
        }
        let want = s_card * r_card * x_card.pow(n as u32) * y_card.pow(n as u32);
        if probs.len() != want {
            return Err(CrError::DimensionMismatch(format!(
                "{} atoms given, {} required by the alphabet sizes",
                probs.len(),
                want
            )));
        }
        let mut sum = 0.0;
        for &p in &probs {
            if !p.is_finite() || p < 0.0 {
                return Err(CrError::InvalidDistribution(format!(
                    "atom mass {p} is negative or non-finite"
                )));
            }
            sum += p;
        }
        if math::abs(sum - 1.0) >= 1e-9 {
            return Err(CrError::InvalidDistribution(format!(
                "total mass {sum} deviates from 1 by more than 1e-9"
            )));
        }
        let probs = if sum != 1.0 {
            probs.iter().map(|p| p / sum).collect()
        } else {
            probs
        };
        Ok(MultiStepJoint { probs, r_card, x_card, y_card, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

struct DecodedAtom {
    s: u64,
    r: u64,
    xs: [u64; 3],
    ys: [u64; 3],
    p: f64,
}

fn entropy_of_map(m: &BTreeMap<(u64, u64), f64>) -> f64 {
    let mut h = 0.0;
    for &p in m.values() {
        if p > MASS_ZERO {
            h -= p * math::ln(p);
        }
    }
    h
}

/// I(S; A | V) from atoms, with A and V computed per atom by the closures.
fn cond_mi_of(atoms: &[DecodedAtom], f_a: impl Fn(&DecodedAtom) -> u64, f_v: impl Fn(&DecodedAtom) -> u64) -> f64 {
    let mut m_sav: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let mut m_av: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let mut m_sv: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let mut m_v: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for at in atoms {
        let a = f_a(at);
        let v = f_v(at);
        *m_sav.entry((at.s * 1_000_003 + a, v)).or_insert(0.0) += at.p;
        *m_av.entry((a, v)).or_insert(0.0) += at.p;
        *m_sv.entry((at.s, v)).or_insert(0.0) += at.p;
        *m_v.entry((0, v)).or_insert(0.0) += at.p;
    }
    entropy_of_map(&m_sv) + entropy_of_map(&m_av) - entropy_of_map(&m_sav) - entropy_of_map(&m_v)
}

/// Residual of the chain-rule decomposition
///   I(S; X^n | R) - I(S; Y^n | R)
///     = sum_i [ I(S; X_i | X^{i-1}, Y_{i+1..n}, R) - I(S; Y_i | X^{i-1}, Y_{i+1..n}, R) ],
/// which holds for every joint distribution. Small alphabets, n <= 3.
pub fn lemma1_check(joint: &MultiStepJoint, n: usize) -> Result<f64> {
    if n != joint.n {
        return Err(CrError::DimensionMismatch(format!(
            "n = {n} disagrees with the joint's word length {}",
            joint.n
        )));
    }
    let (xc, yc) = (joint.x_card as u64, joint.y_card as u64);
    let xn = joint.x_card.pow(n as u32);
    let yn = joint.y_card.pow(n as u32);
    let mut atoms = Vec::with_capacity(joint.probs.len());
    for (idx, &p) in joint.probs.iter().enumerate() {
        let iy = (idx % yn) as u64;
        let rest = idx / yn;
        let ix = (rest % xn) as u64;
        let rest = rest / xn;
        let r = (rest % joint.r_card) as u64;
        let s = (rest / joint.r_card) as u64;
        let mut xs = [0u64; 3];
        let mut ys = [0u64; 3];
        let mut vx = ix;
        let mut vy = iy;
        for k in (0..n).rev() {
            xs[k] = vx % xc;
            vx /= xc;
            ys[k] = vy % yc;
            vy /= yc;
        }
        atoms.push(DecodedAtom { s, r, xs, ys, p });
    }

    let word = |vals: &[u64; 3], lo: usize, hi: usize, card: u64| -> u64 {
        let mut w = 0;
        for k in lo..hi {
            w = w * card + vals[k];
        }
        w
    };

    let lhs = cond_mi_of(&atoms, |a| word(&a.xs, 0, n, xc), |a| a.r)
        - cond_mi_of(&atoms, |a| word(&a.ys, 0, n, yc), |a| a.r);

    let mut rhs = 0.0;
    for i in 0..n {
        // conditioning word: x-prefix before i, y-suffix after i, and r
        let fv = |a: &DecodedAtom| -> u64 {
            let px = word(&a.xs, 0, i, xc);
            let sy = word(&a.ys, i + 1, n, yc);
            (px * 1000 + sy) * 10 + a.r
        };
        rhs += cond_mi_of(&atoms, |a| a.xs[i], fv) - cond_mi_of(&atoms, |a| a.ys[i], fv);
    }
    Ok(math::abs(lhs - rhs))
}

/// Directional curvature witness of the feasible set at an interior joint:
/// sum over cells of (theta - P_U) / (theta * P_U). Strictly negative on the
/// interior, which certifies that the unconstrained maximizer set is curved
/// rather than flat.
pub fn nonconvexity_witness(theta: &AuxJoint) -> Result<f64> {
    if theta.entries().iter().any(|&t| t <= MASS_ZERO) {
        return Err(CrError::Domain(
            "witness needs an interior joint: some entry is zero or below the mass floor".into(),
        ));
    }
    let pu = theta.marginal_u();
    let mut w = 0.0;
    for x in 0..theta.nx() {
        for u in 0..theta.nu() {
            let t = theta.prob(u, x);
            w += (t - pu[u]) / (t * pu[u]);
        }
    }
    Ok(w)
}
