//! Primal-dual solver for the common-randomness program
//!
//!   maximize I(U;X)  over joints P(U,X) with U-X-Y Markov
//!   subject to I(U;X|Y) <= min(rate budget, H(X|Y))
//!              sum_u P(U=u, X=x) = P(X=x) for every x
//!
//! cast as a min-max Lagrangian game: the primal player descends g0 = -I(U;X)
//! plus multiplier-weighted constraints over the probability simplex, the dual
//! player ascends the multipliers over the nonnegative orthant, both with
//! AdaGrad step sizes. A grid-based certificate bounds the distance from
//! equilibrium after the fact.
//!
//! Two flavours are provided: `run_convex` iterates on the continuous simplex
//! and is the workhorse; `run_nonconvex` replaces the primal player with an
//! enumerated best-response oracle over a simplex grid, which survives the
//! nonconvexity of the feasible set at the price of grid resolution.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma};

use crate::channel::{mimo_capacity, siso_capacity, ChannelSpec, Convention};
use crate::error::{CrError, Result};
use crate::math;
use crate::prob::{cond_mi_markov, entropy_slice, AuxJoint, ConditionalPmf, JointPmf, MASS_ZERO};

/// Multipliers are capped here when the equilibrium certificate is formed,
/// matching the cap used in its derivation.
pub const LAMBDA_MAX: f64 = 100.0;

/// Grid resolution used for the certificate's inner minimization.
pub const CERT_RESOLUTION: f64 = 0.05;

/// Feasibility slack accepted when harvesting iterates as candidate solutions.
const FEAS_TOL: f64 = 1e-6;

/// Tight slack used by the grid oracle and the polish stage.
const FEAS_TIGHT: f64 = 1e-9;

/// Dual variables of the game: one multiplier for the rate constraint and a
/// (+,-) pair per source letter for the marginal equalities.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    pub values: Vec<f64>,
}

impl Multipliers {
    pub fn zeros(nx: usize) -> Self {
        Multipliers { values: vec![0.0; 2 * nx + 1] }
    }
}

/// Hyperparameters of the primal-dual iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Iteration count T.
    pub iterations: usize,
    /// Primal AdaGrad scale.
    pub eta_theta: f64,
    /// Dual AdaGrad scale.
    pub eta_lambda: f64,
    /// Primal AdaGrad regularizer inside the square root.
    pub tau_theta: f64,
    /// Dual AdaGrad regularizer.
    pub tau_lambda: f64,
    /// Independent restarts taken by `cr_capacity`.
    pub restarts: usize,
    /// Master seed; restarts derive child seeds from it deterministically.
    pub seed: u64,
    /// Probability floor used only inside logarithm arguments.
    pub floor: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            iterations: 5000,
            eta_theta: 0.316,
            eta_lambda: 0.1,
            tau_theta: 1e-8,
            tau_lambda: 1e-8,
            restarts: 4,
            seed: 11,
            floor: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(CrError::Config("iteration count must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(CrError::Config("restart count must be >= 1".into()));
        }
        for (name, v) in [
            ("eta_theta", self.eta_theta),
            ("eta_lambda", self.eta_lambda),
            ("tau_theta", self.tau_theta),
            ("tau_lambda", self.tau_lambda),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CrError::Config(format!("{name} = {v} must be positive and finite")));
            }
        }
        if !(self.floor > 0.0 && self.floor <= 1e-6) {
            return Err(CrError::Config(format!(
                "log floor {} must lie in (0, 1e-6]",
                self.floor
            )));
        }
        Ok(())
    }
}

/// Full record of one primal-dual run.
#[derive(Debug, Clone)]
pub struct OptRun {
    /// Primal iterates theta^(t), one per iteration, pre-update.
    pub thetas: Vec<AuxJoint>,
    /// Dual iterates lambda^(t), aligned with `thetas`.
    pub lambdas: Vec<Multipliers>,
    /// Lagrangian value at each (theta^(t), lambda^(t)).
    pub lagrangian_trace: Vec<f64>,
    /// A-posteriori equilibrium certificate; >= 0 up to roundoff, and small
    /// exactly when the averaged play is near a saddle point.
    pub nash_gap: f64,
    /// Largest I(U;X) among harvested feasible candidates (0 for the
    /// independent joint, which is always a candidate).
    pub best_value: f64,
    /// The joint achieving `best_value`; feasible within 1e-6.
    pub best_theta: AuxJoint,
}

/// Outcome of `cr_capacity_detailed`: the rate plus its context.
#[derive(Debug, Clone)]
pub struct CrCapacityReport {
    /// Best feasible I(U;X) across restarts, clipped to [0, H(X)].
    pub value: f64,
    /// Certificate of the restart that produced `value`.
    pub nash_gap: f64,
    /// Channel rate budget that constrained the run, in nats per use.
    pub budget: f64,
    /// Maximizing joint.
    pub best_theta: AuxJoint,
}

// ---------------------------------------------------------------------------
// constraint evaluations and gradients (public, true formulas)
// ---------------------------------------------------------------------------

/// Objective g0 = -I(U;X) of the given joint.
pub fn eval_g0(theta: &AuxJoint) -> f64 {
    -theta.mutual_information_ux()
}

/// Rate constraint g1 = I(U;X|Y) - min(cap_budget, H(X|Y)), with the source
/// supplying both the channel P(Y|X) and the entropy cap.
pub fn eval_g1(theta: &AuxJoint, source: &JointPmf, cap_budget: f64) -> Result<f64> {
    if cap_budget < 0.0 || !cap_budget.is_finite() {
        return Err(CrError::Domain(format!("rate budget {cap_budget} must be >= 0")));
    }
    let w = source.conditional_y_given_x();
    let bmin = math::fmin(cap_budget, source_h_x_given_y(source));
    Ok(cond_mi_markov(theta, &w)? - bmin)
}

/// Marginal equality constraints as (+,-) pairs: for each source letter x,
/// `sum_u theta(u,x) - px(x)` and its negation, in x order.
pub fn eval_marginal_constraints(theta: &AuxJoint, px: &[f64]) -> Result<Vec<f64>> {
    if px.len() != theta.nx() {
        return Err(CrError::DimensionMismatch(format!(
            "marginal target has {} letters, joint has {}",
            px.len(),
            theta.nx()
        )));
    }
    let cols = theta.marginal_x();
    let mut out = Vec::with_capacity(2 * px.len());
    for x in 0..px.len() {
        let d = cols[x] - px[x];
        out.push(d);
        out.push(-d);
    }
    Ok(out)
}

fn source_h_x_given_y(source: &JointPmf) -> f64 {
    let h_xy = entropy_slice(source.table());
    let h_y = entropy_slice(source.marginal_y().probs());
    h_xy - h_y
}

/// Gradient of the Lagrangian with respect to the primal table entries, with
/// the probability floor applied inside logarithm arguments only.
///
/// Entry (u,x) of the result is
///   ln(P_U(u) / theta(u,x))
///   + lambda_1 * sum_y w(y|x) ln(theta(u,x) w(y|x) / P_UY(u,y))
///   + (lambda of x's + marginal) - (lambda of x's - marginal),
/// in the same column-major order as `AuxJoint::entries`.
pub fn grad_theta(
    theta: &AuxJoint,
    lambda: &Multipliers,
    source: &JointPmf,
    cap_budget: f64,
) -> Result<Vec<f64>> {
    if cap_budget < 0.0 || !cap_budget.is_finite() {
        return Err(CrError::Domain(format!("rate budget {cap_budget} must be >= 0")));
    }
    let ext = ExtEval::new(source, cap_budget)?;
    if lambda.values.len() != 2 * theta.nx() + 1 {
        return Err(CrError::DimensionMismatch(format!(
            "{} multipliers for {} source letters",
            lambda.values.len(),
            theta.nx()
        )));
    }
    Ok(ext.grad_theta(theta.entries(), &lambda.values, 1e-9))
}

/// Gradient of the Lagrangian with respect to the multipliers: the stacked
/// true constraint values `[g1, marginal pairs..]`.
pub fn grad_lambda(theta: &AuxJoint, source: &JointPmf, cap_budget: f64) -> Result<Vec<f64>> {
    let g1 = eval_g1(theta, source, cap_budget)?;
    let marg = eval_marginal_constraints(theta, source.marginal_x().probs())?;
    let mut out = Vec::with_capacity(1 + marg.len());
    out.push(g1);
    out.extend_from_slice(&marg);
    Ok(out)
}

/// Lagrangian in the extended formulation used by the solver: source
/// entropies are frozen constants, so the expression and its `grad_theta`
/// stay consistent off the marginal-matching manifold.
pub fn lagrangian_ext(
    theta: &AuxJoint,
    lambda: &Multipliers,
    source: &JointPmf,
    cap_budget: f64,
) -> Result<f64> {
    let ext = ExtEval::new(source, cap_budget)?;
    if lambda.values.len() != 2 * theta.nx() + 1 {
        return Err(CrError::DimensionMismatch(format!(
            "{} multipliers for {} source letters",
            lambda.values.len(),
            theta.nx()
        )));
    }
    Ok(ext.l_ext(theta.entries(), &lambda.values))
}

// ---------------------------------------------------------------------------
// projections
// ---------------------------------------------------------------------------

/// Euclidean projection onto the probability simplex, by the sort-and-shift
/// rule: sort descending, find the largest prefix whose shifted values stay
/// positive, subtract the common shift, clip at zero.
pub fn project_simplex(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    let mut s = z.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut kappa = 0.0;
    for k in 1..=n {
        cum += s[k - 1];
        let t = (1.0 - cum) / k as f64;
        if s[k - 1] + t > 0.0 {
            kappa = t;
        }
    }
    z.iter().map(|&v| math::fmax(0.0, v + kappa)).collect()
}

/// Projection onto the nonnegative orthant.
pub fn project_lambda(z: &[f64]) -> Vec<f64> {
    z.iter().map(|&v| math::fmax(0.0, v)).collect()
}

// ---------------------------------------------------------------------------
// extended evaluation kernel
// ---------------------------------------------------------------------------

/// Precomputed source context for the extended Lagrangian. All entropic
/// offsets of the fixed source are frozen here so gradient and value agree
/// everywhere on the ambient simplex.
pub(crate) struct ExtEval {
    w: ConditionalPmf,
    pub(crate) px: Vec<f64>,
    pub(crate) h_x: f64,
    h_x_given_y: f64,
    pub(crate) bmin: f64,
    nu: usize,
    nx: usize,
    ny: usize,
}

impl ExtEval {
    pub(crate) fn new(source: &JointPmf, cap_budget: f64) -> Result<Self> {
        if cap_budget < 0.0 || !cap_budget.is_finite() {
            return Err(CrError::Domain(format!("rate budget {cap_budget} must be >= 0")));
        }
        let px = source.marginal_x().probs().to_vec();
        let h_x = entropy_slice(&px);
        let h_x_given_y = source_h_x_given_y(source);
        Ok(ExtEval {
            w: source.conditional_y_given_x(),
            h_x,
            h_x_given_y,
            bmin: math::fmin(cap_budget, h_x_given_y),
            nu: source.nx() + 1,
            nx: source.nx(),
            ny: source.ny(),
            px,
        })
    }

    fn marginal_u(&self, t: &[f64]) -> Vec<f64> {
        let mut pu = vec![0.0; self.nu];
        for x in 0..self.nx {
            for u in 0..self.nu {
                pu[u] += t[x * self.nu + u];
            }
        }
        pu
    }

    /// Extended objective: H(U,X) - H(U) - H(X)_source. Equals -I(U;X) when
    /// the x-marginals of t match the source.
    fn g0_ext(&self, t: &[f64]) -> f64 {
        entropy_slice(t) - entropy_slice(&self.marginal_u(t)) - self.h_x
    }

    fn p_uy(&self, t: &[f64]) -> Vec<f64> {
        let mut puy = vec![0.0; self.nu * self.ny];
        for x in 0..self.nx {
            for y in 0..self.ny {
                let wyx = self.w.prob(y, x);
                for u in 0..self.nu {
                    puy[u * self.ny + y] += t[x * self.nu + u] * wyx;
                }
            }
        }
        puy
    }

    /// Extended conditional information: H(U,Y) - H(U,X,Y) + H(X|Y)_source.
    /// Equals I(U;X|Y) when the x-marginals match.
    fn i_ext(&self, t: &[f64]) -> f64 {
        let h_uy = entropy_slice(&self.p_uy(t));
        let mut h_uxy = 0.0;
        for x in 0..self.nx {
            for y in 0..self.ny {
                let wyx = self.w.prob(y, x);
                if wyx <= MASS_ZERO {
                    continue;
                }
                for u in 0..self.nu {
                    let p = t[x * self.nu + u] * wyx;
                    if p > MASS_ZERO {
                        h_uxy -= p * math::ln(p);
                    }
                }
            }
        }
        h_uy - h_uxy + self.h_x_given_y
    }

    /// All extended constraint values: [g1_ext, (d_x, -d_x) per x].
    fn g_ext(&self, t: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(1 + 2 * self.nx);
        out.push(self.i_ext(t) - self.bmin);
        for x in 0..self.nx {
            let col: f64 = t[x * self.nu..(x + 1) * self.nu].iter().sum();
            let d = col - self.px[x];
            out.push(d);
            out.push(-d);
        }
        out
    }

    pub(crate) fn l_ext(&self, t: &[f64], lam: &[f64]) -> f64 {
        let g = self.g_ext(t);
        let mut l = self.g0_ext(t);
        for (li, gi) in lam.iter().zip(g.iter()) {
            l += li * gi;
        }
        l
    }

    fn grad_theta(&self, t: &[f64], lam: &[f64], floor: f64) -> Vec<f64> {
        let pu = self.marginal_u(t);
        let puy = self.p_uy(t);
        let lnc = |v: f64| math::ln(math::fmax(v, floor));
        let mut g = vec![0.0; t.len()];
        for x in 0..self.nx {
            let lam_marg = lam[1 + 2 * x] - lam[2 + 2 * x];
            for u in 0..self.nu {
                let th = t[x * self.nu + u];
                let mut v = lnc(pu[u]) - lnc(th);
                let mut rate = 0.0;
                for y in 0..self.ny {
                    let wyx = self.w.prob(y, x);
                    if wyx > MASS_ZERO {
                        rate += wyx * (lnc(th * wyx) - lnc(puy[u * self.ny + y]));
                    }
                }
                v += lam[0] * rate + lam_marg;
                g[x * self.nu + u] = v;
            }
        }
        g
    }

    /// True rate constraint value of a (possibly unnormalized-in-x) table.
    fn true_g1(&self, t: &[f64]) -> f64 {
        let theta = AuxJoint::from_raw(t.to_vec(), self.nx);
        // cond_mi_markov only fails on shape mismatch, which cannot happen here
        cond_mi_markov(&theta, &self.w).unwrap_or(f64::INFINITY) - self.bmin
    }

    /// True objective value I(U;X).
    fn true_value(&self, t: &[f64]) -> f64 {
        AuxJoint::from_raw(t.to_vec(), self.nx).mutual_information_ux()
    }


    /// Rescales every x-column to hit the source marginal exactly. Columns
    /// with no mass get the marginal spread uniformly over u.
    fn repair_columns(&self, t: &[f64]) -> Vec<f64> {
        let mut out = t.to_vec();
        for x in 0..self.nx {
            let col = &mut out[x * self.nu..(x + 1) * self.nu];
            let s: f64 = col.iter().sum();
            if s > MASS_ZERO {
                let scale = self.px[x] / s;
                for v in col.iter_mut() {
                    *v *= scale;
                }
            } else {
                let fill = self.px[x] / self.nu as f64;
                for v in col.iter_mut() {
                    *v = fill;
                }
            }
        }
        out
    }

    /// The independent joint uniform over u: always feasible, value 0.
    fn product_theta(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.nu * self.nx];
        for x in 0..self.nx {
            for u in 0..self.nu {
                t[x * self.nu + u] = self.px[x] / self.nu as f64;
            }
        }
        t
    }
}

// ---------------------------------------------------------------------------
// certificate grid
// ---------------------------------------------------------------------------

struct Atom {
    theta: Vec<f64>,
    g0e: f64,
    g1e: f64,
    d0: f64,
    d1: f64,
    feasible: bool,
}

struct AtomTable {
    atoms: Vec<Atom>,
}

impl AtomTable {
    /// Enumerates every 6-entry joint on the simplex grid of the given
    /// resolution and precomputes its extended constraint values.
    /// Binary sources only.
    fn build(ext: &ExtEval, resolution: f64) -> Result<AtomTable> {
        if ext.nx != 2 {
            return Err(CrError::Unsupported(
                "grid enumeration is implemented for binary sources only".into(),
            ));
        }
        let m_f = 1.0 / resolution;
        let m = libm::round(m_f) as usize;
        if !(resolution > 0.0) || m < 2 || math::abs(m as f64 * resolution - 1.0) > 1e-9 {
            return Err(CrError::Config(format!(
                "grid resolution {resolution} must evenly divide 1"
            )));
        }
        let inv = 1.0 / m as f64;
        let mut atoms = Vec::new();
        let mut t = [0.0_f64; 6];
        for k0 in 0..=m {
            for k1 in 0..=(m - k0) {
                for k2 in 0..=(m - k0 - k1) {
                    for k3 in 0..=(m - k0 - k1 - k2) {
                        for k4 in 0..=(m - k0 - k1 - k2 - k3) {
                            let k5 = m - k0 - k1 - k2 - k3 - k4;
                            t[0] = k0 as f64 * inv;
                            t[1] = k1 as f64 * inv;
                            t[2] = k2 as f64 * inv;
                            t[3] = k3 as f64 * inv;
                            t[4] = k4 as f64 * inv;
                            t[5] = k5 as f64 * inv;
                            let g0e = ext.g0_ext(&t);
                            let g1e = ext.i_ext(&t) - ext.bmin;
                            let d0 = (t[0] + t[1] + t[2]) - ext.px[0];
                            let d1 = (t[3] + t[4] + t[5]) - ext.px[1];
                            let marg_ok =
                                math::abs(d0) <= FEAS_TIGHT && math::abs(d1) <= FEAS_TIGHT;
                            atoms.push(Atom {
                                theta: t.to_vec(),
                                g0e,
                                g1e,
                                d0,
                                d1,
                                feasible: marg_ok && g1e <= FEAS_TIGHT,
                            });
                        }
                    }
                }
            }
        }
        Ok(AtomTable { atoms })
    }

    fn l_at(&self, idx: usize, lam: &[f64]) -> f64 {
        let a = &self.atoms[idx];
        a.g0e
            + lam[0] * a.g1e
            + (lam[1] - lam[2]) * a.d0
            + (lam[3] - lam[4]) * a.d1
    }
}

/// Certificate: averaged primal payoff bounded against the best grid/trace
/// response to the averaged (capped) multipliers. Nonnegative up to roundoff
/// because the trace itself competes in the inner minimum.
fn certificate(
    ext: &ExtEval,
    atoms: &AtomTable,
    trace: &[Vec<f64>],
    mean_g0e: f64,
    mean_gie: &[f64],
    lambda_bar: &[f64],
) -> f64 {
    let mut term1 = mean_g0e;
    for &gi in mean_gie {
        term1 += LAMBDA_MAX * math::fmax(0.0, gi);
    }
    let lam_c: Vec<f64> =
        lambda_bar.iter().map(|&l| math::fmin(math::fmax(l, 0.0), LAMBDA_MAX)).collect();
    let mut term2 = f64::INFINITY;
    for i in 0..atoms.atoms.len() {
        let l = atoms.l_at(i, &lam_c);
        if l < term2 {
            term2 = l;
        }
    }
    for t in trace {
        let l = ext.l_ext(t, &lam_c);
        if l < term2 {
            term2 = l;
        }
    }
    term1 - term2
}

// ---------------------------------------------------------------------------
// runs
// ---------------------------------------------------------------------------

fn require_binary(source: &JointPmf) -> Result<()> {
    if source.nx() != 2 {
        return Err(CrError::Unsupported(format!(
            "solver runs support binary sources only, got |X| = {}",
            source.nx()
        )));
    }
    Ok(())
}

/// Draws the initial joint: the independent uniform-U joint perturbed by a
/// Dirichlet with concentration 50 around it. The unperturbed product point
/// is a stationary point of the projected dynamics, so every run starts off
/// it.
fn draw_init(ext: &ExtEval, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let n = ext.nu * ext.nx;
    let mut draw = vec![0.0; n];
    let mut total = 0.0;
    for x in 0..ext.nx {
        for u in 0..ext.nu {
            let alpha = 50.0 * ext.px[x] / ext.nu as f64;
            let gamma = Gamma::new(alpha, 1.0).expect("positive shape");
            let v: f64 = gamma.sample(rng);
            draw[x * ext.nu + u] = v;
            total += v;
        }
    }
    if total <= 0.0 {
        return ext.product_theta();
    }
    for v in draw.iter_mut() {
        *v /= total;
    }
    project_simplex(&draw)
}

struct RunAccum {
    thetas: Vec<AuxJoint>,
    lambdas: Vec<Multipliers>,
    trace: Vec<f64>,
    sum_g0e: f64,
    sum_gie: Vec<f64>,
    sum_lambda: Vec<f64>,
    best_value: f64,
    best_theta: Vec<f64>,
}

impl RunAccum {
    fn new(ext: &ExtEval) -> Self {
        RunAccum {
            thetas: Vec::new(),
            lambdas: Vec::new(),
            trace: Vec::new(),
            sum_g0e: 0.0,
            sum_gie: vec![0.0; 1 + 2 * ext.nx],
            sum_lambda: vec![0.0; 1 + 2 * ext.nx],
            best_value: 0.0,
            best_theta: ext.product_theta(),
        }
    }

    fn record(&mut self, ext: &ExtEval, t: &[f64], lam: &[f64], nx: usize) -> Result<()> {
        let l = ext.l_ext(t, lam);
        if !l.is_finite()
            || t.iter().any(|v| !v.is_finite())
            || lam.iter().any(|v| !v.is_finite())
        {
            return Err(CrError::Numerical(format!(
                "iteration {} produced a non-finite iterate or Lagrangian value",
                self.trace.len()
            )));
        }
        self.sum_g0e += ext.g0_ext(t);
        for (s, g) in self.sum_gie.iter_mut().zip(ext.g_ext(t)) {
            *s += g;
        }
        for (s, l) in self.sum_lambda.iter_mut().zip(lam.iter()) {
            *s += l;
        }
        self.thetas.push(AuxJoint::from_raw(t.to_vec(), nx));
        self.lambdas.push(Multipliers { values: lam.to_vec() });
        self.trace.push(l);
        Ok(())
    }

    fn offer_candidate(&mut self, ext: &ExtEval, t: &[f64], slack: f64) {
        let repaired = ext.repair_columns(t);
        if ext.true_g1(&repaired) <= slack {
            let v = ext.true_value(&repaired);
            if v > self.best_value {
                self.best_value = v;
                self.best_theta = repaired;
            }
        }
    }

    fn finish(self, ext: &ExtEval, atoms: &AtomTable, nx: usize) -> OptRun {
        let n = self.trace.len().max(1) as f64;
        let mean_g0e = self.sum_g0e / n;
        let mean_gie: Vec<f64> = self.sum_gie.iter().map(|s| s / n).collect();
        let lambda_bar: Vec<f64> = self.sum_lambda.iter().map(|s| s / n).collect();
        let raw: Vec<Vec<f64>> = self.thetas.iter().map(|t| t.entries().to_vec()).collect();
        let gap = certificate(ext, atoms, &raw, mean_g0e, &mean_gie, &lambda_bar);
        OptRun {
            thetas: self.thetas,
            lambdas: self.lambdas,
            lagrangian_trace: self.trace,
            nash_gap: gap,
            best_value: self.best_value,
            best_theta: AuxJoint::from_raw(self.best_theta, nx),
        }
    }
}

fn run_convex_inner(
    ext: &ExtEval,
    atoms: &AtomTable,
    config: &OptimizerConfig,
    seed: u64,
) -> Result<OptRun> {
    let nx = ext.nx;
    let dim = ext.nu * nx;
    let nlam = 1 + 2 * nx;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut theta = draw_init(ext, &mut rng);
    let mut lambda = vec![0.0; nlam];
    let mut g_theta_acc = vec![0.0; dim];
    let mut g_lambda_acc = vec![0.0; nlam];
    let mut acc = RunAccum::new(ext);

    for _ in 0..config.iterations {
        acc.record(ext, &theta, &lambda, nx)?;
        acc.offer_candidate(ext, &theta, FEAS_TOL);

        let gt = ext.grad_theta(&theta, &lambda, config.floor);
        // dual ascent uses the extended constraint values: they stay coupled
        // to the frozen-marginal Lagrangian even when iterates drift off the
        // marginal manifold, so the rate multiplier cannot starve there
        let gl = ext.g_ext(&theta);

        let mut theta_new = theta.clone();
        for i in 0..dim {
            g_theta_acc[i] += gt[i] * gt[i];
            theta_new[i] -= config.eta_theta / math::sqrt(g_theta_acc[i] + config.tau_theta) * gt[i];
        }
        let theta_new = project_simplex(&theta_new);
        for i in 0..nlam {
            g_lambda_acc[i] += gl[i] * gl[i];
            lambda[i] += config.eta_lambda / math::sqrt(g_lambda_acc[i] + config.tau_lambda) * gl[i];
            lambda[i] = math::fmax(0.0, lambda[i]);
        }
        theta = theta_new;
    }
    Ok(acc.finish(ext, atoms, nx))
}

/// One primal-dual run on the continuous simplex from a perturbed product
/// start. Returns iterates, multipliers, the Lagrangian trace, the best
/// harvested feasible joint, and the equilibrium certificate.
pub fn run_convex(source: &JointPmf, cap_budget: f64, config: &OptimizerConfig) -> Result<OptRun> {
    require_binary(source)?;
    config.validate()?;
    let ext = ExtEval::new(source, cap_budget)?;
    let atoms = AtomTable::build(&ext, CERT_RESOLUTION)?;
    run_convex_inner(&ext, &atoms, config, config.seed)
}

/// Window width inside which grid atoms count as best responses: grows with
/// grid coarseness and with the size of log terms admitted by the floor.
fn window_width(resolution: f64, floor: f64) -> f64 {
    3.0 * (resolution / 100.0) * (math::ln(1.0 / floor) + 1.0)
}

fn polish_moves(nu: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..nu {
        for j in 0..nu {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Greedy pattern search over column-sum-preserving moves, maximizing the
/// true I(U;X) subject to the true rate constraint. Steps shrink by factors
/// of ten from 0.4x the grid resolution.
fn polish(ext: &ExtEval, start: &[f64], resolution: f64) -> Option<(Vec<f64>, f64)> {
    let nu = ext.nu;
    if ext.true_g1(start) > FEAS_TIGHT {
        return None;
    }
    let pairs = polish_moves(nu);
    let mut cur = start.to_vec();
    let mut curv = ext.true_value(&cur);
    for r in 0..3 {
        let step = resolution * 0.4 / libm::pow(10.0, r as f64);
        for _ in 0..200 {
            let mut best: Option<(Vec<f64>, f64)> = None;
            let consider = |cand: Vec<f64>, best: &mut Option<(Vec<f64>, f64)>| {
                if ext.true_g1(&cand) <= FEAS_TIGHT {
                    let v = ext.true_value(&cand);
                    if v > curv + 1e-12 && best.as_ref().map_or(true, |(_, bv)| v > *bv) {
                        *best = Some((cand, v));
                    }
                }
            };
            // single column shifts
            for x in 0..ext.nx {
                for &(i, j) in &pairs {
                    let di = x * nu + i;
                    let dj = x * nu + j;
                    if cur[di] >= step {
                        let mut cand = cur.clone();
                        cand[di] -= step;
                        cand[dj] += step;
                        consider(cand, &mut best);
                    }
                }
            }
            // cross-column pairs, opposite and same direction
            for &(i, j) in &pairs {
                if cur[i] >= step && cur[ext.nu + j] >= step {
                    let mut cand = cur.clone();
                    cand[i] -= step;
                    cand[j] += step;
                    cand[nu + j] -= step;
                    cand[nu + i] += step;
                    consider(cand, &mut best);
                }
                if cur[i] >= step && cur[nu + i] >= step {
                    let mut cand = cur.clone();
                    cand[i] -= step;
                    cand[j] += step;
                    cand[nu + i] -= step;
                    cand[nu + j] += step;
                    consider(cand, &mut best);
                }
            }
            match best {
                Some((cand, v)) => {
                    cur = cand;
                    curv = v;
                }
                None => break,
            }
        }
    }
    Some((cur, curv))
}

/// Primal-dual run where the primal player is an enumerated best-response
/// oracle over the simplex grid of the given resolution. The dual still runs
/// AdaGrad ascent on the true constraints. Candidate extraction polishes the
/// most valuable feasible atoms the oracle visited.
pub fn run_nonconvex(
    source: &JointPmf,
    cap_budget: f64,
    config: &OptimizerConfig,
    oracle_resolution: f64,
) -> Result<OptRun> {
    require_binary(source)?;
    config.validate()?;
    let ext = ExtEval::new(source, cap_budget)?;
    let rho = window_width(oracle_resolution, config.floor);
    if rho > 0.05 {
        return Err(CrError::Config(format!(
            "oracle resolution {oracle_resolution} gives best-response window {rho:.4} > 0.05; \
             refine the grid or raise the floor"
        )));
    }
    let atoms = AtomTable::build(&ext, oracle_resolution)?;
    let nx = ext.nx;
    let nlam = 1 + 2 * nx;
    let mut lambda = vec![0.0; nlam];
    let mut g_lambda_acc = vec![0.0; nlam];
    let mut acc = RunAccum::new(&ext);
    let mut visited: Vec<usize> = Vec::new();

    for _ in 0..config.iterations {
        // score the whole grid against the current multipliers
        let mut lmin = f64::INFINITY;
        for i in 0..atoms.atoms.len() {
            let l = atoms.l_at(i, &lambda);
            if l < lmin {
                lmin = l;
            }
        }
        if !lmin.is_finite() {
            return Err(CrError::Numerical(format!(
                "iteration {}: grid scoring produced non-finite values",
                acc.trace.len()
            )));
        }
        // inside the window prefer feasible atoms of maximal value, else the
        // least violating one
        let mut pick: Option<usize> = None;
        let mut pick_feas = false;
        let mut pick_key = f64::INFINITY;
        for (i, a) in atoms.atoms.iter().enumerate() {
            if atoms.l_at(i, &lambda) > lmin + rho {
                continue;
            }
            if a.feasible {
                if !pick_feas || a.g0e < pick_key {
                    pick = Some(i);
                    pick_feas = true;
                    pick_key = a.g0e;
                }
            } else if !pick_feas {
                let viol = math::fmax(0.0, a.g1e) + math::abs(a.d0) + math::abs(a.d1);
                if viol < pick_key || pick.is_none() {
                    pick = Some(i);
                    pick_key = viol;
                }
            }
        }
        let idx = pick.expect("window always contains the minimizer");
        let t = atoms.atoms[idx].theta.clone();
        acc.record(&ext, &t, &lambda, nx)?;
        if !visited.contains(&idx) {
            visited.push(idx);
        }

        // same extended constraint values the window scoring uses
        let gl = ext.g_ext(&t);
        for i in 0..nlam {
            g_lambda_acc[i] += gl[i] * gl[i];
            lambda[i] += config.eta_lambda / math::sqrt(g_lambda_acc[i] + config.tau_lambda) * gl[i];
            lambda[i] = math::fmax(0.0, lambda[i]);
        }
    }

    // candidate seeds: most valuable feasible visited atoms, a couple of the
    // least-violating others, and the independent joint
    let mut feas: Vec<usize> = visited.iter().copied().filter(|&i| atoms.atoms[i].feasible).collect();
    feas.sort_by(|&a, &b| atoms.atoms[a].g0e.total_cmp(&atoms.atoms[b].g0e));
    let mut others: Vec<usize> =
        visited.iter().copied().filter(|&i| !atoms.atoms[i].feasible).collect();
    others.sort_by(|&a, &b| {
        let va = math::fmax(0.0, atoms.atoms[a].g1e)
            + math::abs(atoms.atoms[a].d0)
            + math::abs(atoms.atoms[a].d1);
        let vb = math::fmax(0.0, atoms.atoms[b].g1e)
            + math::abs(atoms.atoms[b].d0)
            + math::abs(atoms.atoms[b].d1);
        va.total_cmp(&vb)
    });
    let mut seeds: Vec<Vec<f64>> =
        feas.iter().take(6).map(|&i| atoms.atoms[i].theta.clone()).collect();
    seeds.extend(others.iter().take(2).map(|&i| atoms.atoms[i].theta.clone()));
    seeds.push(ext.product_theta());
    for s in seeds {
        let repaired = ext.repair_columns(&s);
        if let Some((t, v)) = polish(&ext, &repaired, oracle_resolution) {
            if v > acc.best_value {
                acc.best_value = v;
                acc.best_theta = t;
            }
        }
    }

    Ok(acc.finish(&ext, &atoms, nx))
}

/// Recomputes the equilibrium certificate of a finished run against the
/// default certificate grid.
pub fn nash_gap(run: &OptRun, source: &JointPmf, cap_budget: f64) -> Result<f64> {
    require_binary(source)?;
    let ext = ExtEval::new(source, cap_budget)?;
    let atoms = AtomTable::build(&ext, CERT_RESOLUTION)?;
    let n = run.thetas.len().max(1) as f64;
    let mut mean_g0e = 0.0;
    let mut mean_gie = vec![0.0; 1 + 2 * ext.nx];
    let mut lambda_bar = vec![0.0; 1 + 2 * ext.nx];
    let mut raw = Vec::with_capacity(run.thetas.len());
    for t in &run.thetas {
        mean_g0e += ext.g0_ext(t.entries());
        for (s, g) in mean_gie.iter_mut().zip(ext.g_ext(t.entries())) {
            *s += g;
        }
        raw.push(t.entries().to_vec());
    }
    for l in &run.lambdas {
        for (s, v) in lambda_bar.iter_mut().zip(l.values.iter()) {
            *s += v;
        }
    }
    mean_g0e /= n;
    for v in mean_gie.iter_mut() {
        *v /= n;
    }
    let nl = run.lambdas.len().max(1) as f64;
    for v in lambda_bar.iter_mut() {
        *v /= nl;
    }
    Ok(certificate(&ext, &atoms, &raw, mean_g0e, &mean_gie, &lambda_bar))
}

/// Common-randomness capacity estimate: best feasible value across restarts
/// of the convex run, with the channel collapsed to its rate budget first.
/// SISO budgets use the given convention; MIMO budgets are the waterfilled
/// complex capacity.
pub fn cr_capacity_detailed(
    source: &JointPmf,
    channel: &ChannelSpec,
    convention: Convention,
    config: &OptimizerConfig,
) -> Result<CrCapacityReport> {
    require_binary(source)?;
    config.validate()?;
    let budget = match channel {
        ChannelSpec::Siso(s) => siso_capacity(*s, convention),
        ChannelSpec::Mimo(m) => mimo_capacity(m)?,
    };
    let ext = ExtEval::new(source, budget)?;
    let atoms = AtomTable::build(&ext, CERT_RESOLUTION)?;
    let mut seed_state = config.seed;
    let mut best: Option<OptRun> = None;
    for _ in 0..config.restarts {
        let seed = math::splitmix64(&mut seed_state);
        let run = run_convex_inner(&ext, &atoms, config, seed)?;
        if best.as_ref().map_or(true, |b| run.best_value > b.best_value) {
            best = Some(run);
        }
    }
    let run = best.expect("restarts >= 1");
    let value = math::fmin(math::fmax(run.best_value, 0.0), ext.h_x);
    Ok(CrCapacityReport { value, nash_gap: run.nash_gap, budget, best_theta: run.best_theta })
}

/// Convenience wrapper: the capacity value alone, real-signalling SISO
/// budgets.
pub fn cr_capacity(source: &JointPmf, channel: &ChannelSpec, config: &OptimizerConfig) -> Result<f64> {
    Ok(cr_capacity_detailed(source, channel, Convention::Real, config)?.value)
}

/// Grid search over AdaGrad scales: runs the convex solver at every pair and
/// returns the pair minimizing the equilibrium certificate, with its value.
pub fn select_learning_rates(
    source: &JointPmf,
    cap_budget: f64,
    base: &OptimizerConfig,
    etas_theta: &[f64],
    etas_lambda: &[f64],
) -> Result<(f64, f64, f64)> {
    require_binary(source)?;
    if etas_theta.is_empty() || etas_lambda.is_empty() {
        return Err(CrError::Config("learning-rate grids must be non-empty".into()));
    }
    let ext = ExtEval::new(source, cap_budget)?;
    let atoms = AtomTable::build(&ext, CERT_RESOLUTION)?;
    let mut best: Option<(f64, f64, f64)> = None;
    for &et in etas_theta {
        for &el in etas_lambda {
            let mut cfg = base.clone();
            cfg.eta_theta = et;
            cfg.eta_lambda = el;
            cfg.validate()?;
            let run = run_convex_inner(&ext, &atoms, &cfg, cfg.seed)?;
            if best.as_ref().map_or(true, |&(_, _, g)| run.nash_gap < g) {
                best = Some((et, el, run.nash_gap));
            }
        }
    }
    Ok(best.expect("grids non-empty"))
}


