//! Discrete probability objects and the information measures the rest of the
//! crate is built on. Everything is in nats.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CrError, Result};
use crate::math;

/// Masses this small are treated as exact zeros by the entropy kernels,
/// so `0 ln 0 = 0` is hit instead of `-inf * 0`.
pub const MASS_ZERO: f64 = 1e-15;

/// If a vector's total mass is off from one by less than this, it is silently
/// rescaled at construction; anything worse is rejected.
const RENORM_TOL: f64 = 1e-9;

fn check_and_normalize(probs: &mut [f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(CrError::InvalidDistribution(format!("{what}: empty support")));
    }
    let mut sum = 0.0;
    for &p in probs.iter() {
        if !p.is_finite() || p < 0.0 {
            return Err(CrError::InvalidDistribution(format!(
                "{what}: mass {p} is negative or non-finite"
            )));
        }
        sum += p;
    }
    if math::abs(sum - 1.0) >= RENORM_TOL {
        return Err(CrError::InvalidDistribution(format!(
            "{what}: total mass {sum} deviates from 1 by more than {RENORM_TOL}"
        )));
    }
    if sum != 1.0 {
        for p in probs.iter_mut() {
            *p /= sum;
        }
    }
    Ok(())
}

/// Entropy of a raw nonnegative table in nats, `-sum t ln t`.
///
/// Works on joint tables as well as marginals since it never asks for the
/// table's shape. Entries below [`MASS_ZERO`] contribute exactly zero.
pub(crate) fn entropy_slice(table: &[f64]) -> f64 {
    let mut h = 0.0;
    for &t in table {
        if t > MASS_ZERO {
            h -= t * math::ln(t);
        }
    }
    h
}

/// Probability mass function over a finite alphabet `{0, .., k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Builds a pmf, rescaling away sub-1e-9 normalization error and
    /// rejecting anything worse or any negative mass.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        check_and_normalize(&mut probs, "pmf")?;
        Ok(Pmf { probs })
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

/// Joint pmf over `{0,..,nx-1} x {0,..,ny-1}`, stored row-major in x.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    table: Vec<f64>,
    nx: usize,
    ny: usize,
}

impl JointPmf {
    pub fn new(mut table: Vec<f64>, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || table.len() != nx * ny {
            return Err(CrError::DimensionMismatch(format!(
                "joint pmf: table of len {} cannot be {nx} x {ny}",
                table.len()
            )));
        }
        check_and_normalize(&mut table, "joint pmf")?;
        Ok(JointPmf { table, nx, ny })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.table[x * self.ny + y]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn marginal_x(&self) -> Pmf {
        let mut m = vec![0.0; self.nx];
        for x in 0..self.nx {
            for y in 0..self.ny {
                m[x] += self.table[x * self.ny + y];
            }
        }
        // row sums of a valid joint are a valid pmf by construction
        Pmf { probs: m }
    }

    pub fn marginal_y(&self) -> Pmf {
        let mut m = vec![0.0; self.ny];
        for x in 0..self.nx {
            for y in 0..self.ny {
                m[y] += self.table[x * self.ny + y];
            }
        }
        Pmf { probs: m }
    }

    /// Conditional rows P(y | x). Rows with vanishing P(x) are left uniform
    /// so downstream products with that marginal stay exactly zero.
    pub fn conditional_y_given_x(&self) -> ConditionalPmf {
        let mut rows = vec![0.0; self.nx * self.ny];
        for x in 0..self.nx {
            let px: f64 = (0..self.ny).map(|y| self.prob(x, y)).sum();
            for y in 0..self.ny {
                rows[x * self.ny + y] = if px > MASS_ZERO {
                    self.prob(x, y) / px
                } else {
                    1.0 / self.ny as f64
                };
            }
        }
        ConditionalPmf { rows, nx: self.nx, ny: self.ny }
    }
}

/// Row-stochastic kernel P(y | x): one pmf over y per input letter x.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf {
    rows: Vec<f64>,
    nx: usize,
    ny: usize,
}

impl ConditionalPmf {
    pub fn new(rows: Vec<f64>, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || rows.len() != nx * ny {
            return Err(CrError::DimensionMismatch(format!(
                "conditional pmf: table of len {} cannot be {nx} x {ny}",
                rows.len()
            )));
        }
        let mut rows = rows;
        for x in 0..nx {
            check_and_normalize(&mut rows[x * ny..(x + 1) * ny], "conditional pmf row")?;
        }
        Ok(ConditionalPmf { rows, nx, ny })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[x * self.ny + y]
    }
}

/// The correlated binary source: X uniform on {0,1}, Y a copy of X pushed
/// through a binary symmetric channel with crossover `mu`, `0 <= mu <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinarySourceSpec {
    pub mu: f64,
}

impl BinarySourceSpec {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&mu) {
            return Err(CrError::Domain(format!("crossover mu = {mu} outside [0, 1/2]")));
        }
        Ok(BinarySourceSpec { mu })
    }
}

/// Joint pmf of the correlated binary source:
/// P(0,0) = P(1,1) = (1-mu)/2, P(0,1) = P(1,0) = mu/2.
pub fn binary_source(spec: BinarySourceSpec) -> JointPmf {
    let d = (1.0 - spec.mu) / 2.0;
    let o = spec.mu / 2.0;
    JointPmf { table: vec![d, o, o, d], nx: 2, ny: 2 }
}

/// Entropy of a pmf in nats.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_slice(&p.probs)
}

/// Binary entropy h(mu) = -mu ln mu - (1-mu) ln(1-mu), in nats.
pub fn binary_entropy_f(mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(CrError::Domain(format!("binary entropy argument {mu} outside [0, 1]")));
    }
    Ok(entropy_slice(&[mu, 1.0 - mu]))
}

/// Mutual information I(X;Y) of a joint pmf, in nats.
pub fn mutual_information(j: &JointPmf) -> f64 {
    let hx = entropy(&j.marginal_x());
    let hy = entropy(&j.marginal_y());
    let hxy = entropy_slice(&j.table);
    hx + hy - hxy
}

/// Joint over (U, X) used as the optimization variable: U is the auxiliary
/// alphabet of size `nx + 1`, entries are stored with u fastest inside each
/// x-column, i.e. `(u0,x0), (u1,x0), .., (u0,x1), ..`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxJoint {
    entries: Vec<f64>,
    nu: usize,
    nx: usize,
}

impl AuxJoint {
    /// Builds the joint from column-major entries; `nu = nx + 1` is enforced
    /// because it is the cardinality the auxiliary variable never needs to
    /// exceed.
    pub fn new(mut entries: Vec<f64>, nx: usize) -> Result<Self> {
        let nu = nx + 1;
        if nx == 0 || entries.len() != nu * nx {
            return Err(CrError::DimensionMismatch(format!(
                "aux joint: {} entries cannot be ({nu} x {nx}) column-major",
                entries.len()
            )));
        }
        check_and_normalize(&mut entries, "aux joint")?;
        Ok(AuxJoint { entries, nu, nx })
    }

    /// Like `new` but skips the mass checks; internal callers that construct
    /// provably valid tables (projections, grid atoms) use this.
    pub(crate) fn from_raw(entries: Vec<f64>, nx: usize) -> Self {
        AuxJoint { nu: nx + 1, entries, nx }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Entry P(U = u, X = x).
    pub fn prob(&self, u: usize, x: usize) -> f64 {
        self.entries[x * self.nu + u]
    }

    /// Column-major storage, u fastest within each x column.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn marginal_u(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.nu];
        for x in 0..self.nx {
            for u in 0..self.nu {
                m[u] += self.entries[x * self.nu + u];
            }
        }
        m
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.nx];
        for x in 0..self.nx {
            for u in 0..self.nu {
                m[x] += self.entries[x * self.nu + u];
            }
        }
        m
    }

    /// I(U;X) of this joint, in nats.
    pub fn mutual_information_ux(&self) -> f64 {
        let hu = entropy_slice(&self.marginal_u());
        let hx = entropy_slice(&self.marginal_x());
        let hux = entropy_slice(&self.entries);
        hu + hx - hux
    }
}

/// Conditional mutual information I(U;X|Y) for the Markov chain U - X - Y,
/// where the chain's (X,Y) end is described by the channel rows `w(y|x)` and
/// the (U,X) end by `theta`.
///
/// The full joint is P(u,x,y) = theta(u,x) w(y|x); the result is computed
/// from exact entropies of that joint, so it is the true value for whatever
/// theta was passed in, normalized or not along X.
pub fn cond_mi_markov(theta: &AuxJoint, w: &ConditionalPmf) -> Result<f64> {
    if w.nx() != theta.nx() {
        return Err(CrError::DimensionMismatch(format!(
            "channel has {} inputs but aux joint has {} source letters",
            w.nx(),
            theta.nx()
        )));
    }
    let (nu, nx, ny) = (theta.nu(), theta.nx(), w.ny());
    let mut p_uy = vec![0.0; nu * ny];
    let mut p_y = vec![0.0; ny];
    let mut h_uxy = 0.0;
    let mut h_xy_terms = vec![0.0; nx * ny];
    for x in 0..nx {
        for y in 0..ny {
            let wyx = w.prob(y, x);
            let mut col = 0.0;
            for u in 0..nu {
                let p = theta.prob(u, x) * wyx;
                p_uy[u * ny + y] += p;
                col += p;
                if p > MASS_ZERO {
                    h_uxy -= p * math::ln(p);
                }
            }
            h_xy_terms[x * ny + y] = col;
            p_y[y] += col;
        }
    }
    let h_uy = entropy_slice(&p_uy);
    let h_y = entropy_slice(&p_y);
    let h_xy = entropy_slice(&h_xy_terms);
    // I(U;X|Y) = H(U|Y) - H(U|X,Y) = (H_uy - H_y) - (H_uxy - H_xy)
    Ok((h_uy - h_y) - (h_uxy - h_xy))
}
