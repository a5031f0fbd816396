//! Brute-force check of the operator algebra on a few time bins with a
//! truncated Fock space per bin.
//!
//! Bin `k` of either pulse sits at time `k·dt`. The discretized field
//! operator of a bin is `A = b/√dt`, so `[A_j, A_k†] = δ_jk/dt`. Every
//! operator used here maps each basis state to at most one basis state, so
//! they are stored column-wise as a target index and a coefficient rather than
//! as dense matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::nlo_phase::InteractionParams;

pub const MAX_BINS: usize = 4;
pub const MAX_FOCK: usize = 20;
pub const MAX_DIMENSION: usize = 200_000;

pub const COMMUTATOR_TOL: f64 = 1e-10;
pub const NUMBER_TOL: f64 = 1e-12;
pub const PERMUTATION_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-10;

/// Below this the closed-form/matrix gap is treated as round-off.
const TRUNCATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeLattice {
    /// Bin width in units of τ_r.
    pub dt: f64,
    /// Highest photon number kept per bin.
    pub n_max: usize,
    /// Coherent amplitude of each probe bin.
    pub probe: Vec<Complex64>,
    /// Coherent amplitude of each control bin.
    #[serde(default)]
    pub control: Vec<Complex64>,
}

impl Default for ModeLattice {
    fn default() -> Self {
        ModeLattice {
            dt: 1.0,
            n_max: 12,
            probe: vec![Complex64::new(1.0, 0.0), Complex64::new(0.6, 0.5)],
            control: Vec::new(),
        }
    }
}

impl ModeLattice {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("lattice.dt", "must be finite and > 0"));
        }
        if self.probe.is_empty() {
            return Err(Error::invalid("lattice.probe", "needs at least one bin"));
        }
        if self.bins() > MAX_BINS {
            return Err(Error::invalid("lattice", format!("at most {MAX_BINS} bins in total")));
        }
        if self.n_max == 0 || self.n_max > MAX_FOCK {
            return Err(Error::invalid("lattice.n_max", format!("must be in 1..={MAX_FOCK}")));
        }
        for a in self.probe.iter().chain(&self.control) {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::invalid("lattice.alpha", "must be finite"));
            }
            if a.norm_sqr() > self.n_max as f64 / 4.0 {
                return Err(Error::invalid(
                    "lattice.alpha",
                    format!("|alpha|^2 = {} exceeds n_max/4", a.norm_sqr()),
                ));
            }
        }
        if self.dimension() > MAX_DIMENSION {
            return Err(Error::invalid("lattice", format!("dimension exceeds {MAX_DIMENSION}")));
        }
        Ok(())
    }

    pub fn bins(&self) -> usize {
        self.probe.len() + self.control.len()
    }

    pub fn dimension(&self) -> usize {
        (self.n_max + 1).saturating_pow(self.bins() as u32)
    }

    fn with_n_max(&self, n_max: usize) -> Self {
        ModeLattice { n_max, ..self.clone() }
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.probe.iter().chain(&self.control).copied().collect()
    }

    // occupation of `mode` in basis state `index`
    fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / (self.n_max + 1).pow(mode as u32)) % (self.n_max + 1)
    }

    fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.bins()).map(|m| self.occupation(index, m)).collect()
    }

    /// Truncated, unnormalized product coherent state.
    fn coherent_state(&self) -> Vec<Complex64> {
        let alphas = self.amplitudes();
        // per-mode amplitude tables e^{-|α|²/2} αⁿ/√n!
        let tables: Vec<Vec<Complex64>> = alphas
            .iter()
            .map(|a| {
                let mut row = Vec::with_capacity(self.n_max + 1);
                let mut c = Complex64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
                row.push(c);
                for n in 1..=self.n_max {
                    c = c * a / (n as f64).sqrt();
                    row.push(c);
                }
                row
            })
            .collect();
        (0..self.dimension())
            .map(|i| {
                (0..self.bins())
                    .map(|m| tables[m][self.occupation(i, m)])
                    .product()
            })
            .collect()
    }
}

/// Discretized `h(t_j − t_k)·dt`: the phase per photon in bin `k` felt by bin
/// `j`, before the coupling constant.
pub fn bin_weight(kernel: &Kernel, dt: f64, j: usize, k: usize) -> f64 {
    match kernel {
        Kernel::Exponential { .. } => kernel.even((j as f64 - k as f64) * dt) * dt,
        Kernel::Delta => {
            if j == k {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Operator sending each basis column to at most one row.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialOp {
    target: Vec<Option<usize>>,
    coef: Vec<Complex64>,
}

impl MonomialOp {
    pub fn identity(dim: usize) -> Self {
        MonomialOp {
            target: (0..dim).map(Some).collect(),
            coef: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn diagonal(values: Vec<Complex64>) -> Self {
        MonomialOp {
            target: (0..values.len()).map(Some).collect(),
            coef: values,
        }
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    /// Truncated annihilator of `mode`.
    pub fn annihilator(lattice: &ModeLattice, mode: usize) -> Self {
        let stride = (lattice.n_max + 1).pow(mode as u32);
        let dim = lattice.dimension();
        let mut op = MonomialOp {
            target: vec![None; dim],
            coef: vec![Complex64::new(0.0, 0.0); dim],
        };
        for i in 0..dim {
            let n = lattice.occupation(i, mode);
            if n > 0 {
                op.target[i] = Some(i - stride);
                op.coef[i] = Complex64::new((n as f64).sqrt(), 0.0);
            }
        }
        op
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for c in &mut self.coef {
            *c *= s;
        }
        self
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &MonomialOp) -> MonomialOp {
        let dim = rhs.dimension();
        let mut out = MonomialOp {
            target: vec![None; dim],
            coef: vec![Complex64::new(0.0, 0.0); dim],
        };
        for c in 0..dim {
            if let Some(mid) = rhs.target[c] {
                if let Some(row) = self.target[mid] {
                    out.target[c] = Some(row);
                    out.coef[c] = self.coef[mid] * rhs.coef[c];
                }
            }
        }
        out
    }

    /// Conjugate transpose. Valid because every operator built here is
    /// injective on its non-zero columns.
    pub fn adjoint(&self) -> MonomialOp {
        let dim = self.dimension();
        let mut out = MonomialOp {
            target: vec![None; dim],
            coef: vec![Complex64::new(0.0, 0.0); dim],
        };
        for c in 0..dim {
            if let Some(r) = self.target[c] {
                if self.coef[c] != Complex64::new(0.0, 0.0) {
                    out.target[r] = Some(c);
                    out.coef[r] = self.coef[c].conj();
                }
            }
        }
        out
    }
}

/// Max-norm of `Σ wᵢ·Opᵢ − s·I` over the columns accepted by `keep`.
fn residual(terms: &[(f64, &MonomialOp)], identity: f64, keep: impl Fn(usize) -> bool) -> f64 {
    let dim = terms.first().map_or(0, |t| t.1.dimension());
    let mut worst = 0.0f64;
    let mut entries: Vec<(usize, Complex64)> = Vec::with_capacity(terms.len() + 1);
    for c in (0..dim).filter(|&c| keep(c)) {
        entries.clear();
        entries.push((c, Complex64::new(-identity, 0.0)));
        for (w, op) in terms {
            if let Some(r) = op.target[c] {
                match entries.iter_mut().find(|e| e.0 == r) {
                    Some(e) => e.1 += op.coef[c] * *w,
                    None => entries.push((r, op.coef[c] * *w)),
                }
            }
        }
        for e in &entries {
            worst = worst.max(e.1.norm());
        }
    }
    worst
}

/// Two ways of evaluating `⟨exp(iγ Σ_k h(t₀ − t_k)dt·n̂_k)⟩` on the probe bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub closed_form: Complex64,
    pub matrix: Complex64,
    pub difference: f64,
    pub n_max: usize,
}

/// Phase weights `γ·h(t₀ − t_k)·dt` for the probe bins, with `t₀` the first bin.
fn probe_weights(lattice: &ModeLattice, gamma: f64, kernel: &Kernel) -> Vec<f64> {
    (0..lattice.probe.len())
        .map(|k| gamma * bin_weight(kernel, lattice.dt, 0, k))
        .collect()
}

fn closed_form_exp(lattice: &ModeLattice, weights: &[f64]) -> Complex64 {
    let exponent: Complex64 = lattice
        .probe
        .iter()
        .zip(weights)
        .map(|(a, &w)| (Complex64::new(0.0, w).exp() - 1.0) * a.norm_sqr())
        .sum();
    exponent.exp()
}

fn matrix_exp(lattice: &ModeLattice, weights: &[f64]) -> Complex64 {
    let psi = lattice.coherent_state();
    psi.iter()
        .enumerate()
        .map(|(i, c)| {
            let phase: f64 = weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * lattice.occupation(i, k) as f64)
                .sum();
            Complex64::new(0.0, phase).exp() * c.norm_sqr()
        })
        .sum()
}

fn expectation_at(lattice: &ModeLattice, weights: &[f64]) -> ExpectationReport {
    let closed_form = closed_form_exp(lattice, weights);
    let matrix = matrix_exp(lattice, weights);
    ExpectationReport {
        closed_form,
        matrix,
        difference: (closed_form - matrix).norm(),
        n_max: lattice.n_max,
    }
}

/// Normal-ordering mean on the probe bins: closed form vs truncated matrix sum.
pub fn expect_exp_o(lattice: &ModeLattice, gamma: f64, kernel: &Kernel) -> Result<ExpectationReport> {
    lattice.validate()?;
    if !gamma.is_finite() {
        return Err(Error::invalid("gamma", "must be finite"));
    }
    let weights = probe_weights(lattice, gamma, kernel);
    let report = expectation_at(lattice, &weights);
    if report.difference > TRUNCATION_FLOOR && lattice.n_max > 1 {
        let coarse = expectation_at(&lattice.with_n_max(lattice.n_max - 1), &weights);
        if report.difference >= coarse.difference {
            return Err(Error::Truncation {
                discrepancy: report.difference,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub gamma: f64,
    /// `Σ_k w_k|α_k|²`
    pub phase_truncated: f64,
    /// `½Σ_k w_k²|α_k|²`
    pub damping_truncated: f64,
    pub exact: Complex64,
    pub truncated: Complex64,
    pub discrepancy: f64,
    pub discrepancy_half_gamma: f64,
    /// `log₂(discrepancy(γ)/discrepancy(γ/2))`; absent when γ = 0.
    pub observed_order: Option<f64>,
    /// `discrepancy/γ³`
    pub cubic_constant: Option<f64>,
}

fn truncated_mean(lattice: &ModeLattice, gamma: f64, kernel: &Kernel) -> (f64, f64, Complex64, Complex64) {
    let w = probe_weights(lattice, gamma, kernel);
    let exact = closed_form_exp(lattice, &w);
    let phase: f64 = lattice.probe.iter().zip(&w).map(|(a, w)| w * a.norm_sqr()).sum();
    let damping: f64 = lattice.probe.iter().zip(&w).map(|(a, w)| 0.5 * w * w * a.norm_sqr()).sum();
    let trunc = Complex64::from_polar((-damping).exp(), phase);
    (phase, damping, exact, trunc)
}

/// Compares the exact normal-ordering mean with its γ²-truncated form
/// `e^{−μ}e^{iφ}` and measures the order of the gap by halving γ.
pub fn verify_truncated_mean(lattice: &ModeLattice, gamma: f64, kernel: &Kernel) -> Result<TruncationReport> {
    lattice.validate()?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::invalid("gamma", "must be finite and >= 0"));
    }
    let (phase, damping, exact, truncated) = truncated_mean(lattice, gamma, kernel);
    let (_, _, ex_h, tr_h) = truncated_mean(lattice, 0.5 * gamma, kernel);
    let discrepancy = (exact - truncated).norm();
    let half = (ex_h - tr_h).norm();
    let (observed_order, cubic_constant) = if gamma > 0.0 && half > 0.0 {
        (Some((discrepancy / half).log2()), Some(discrepancy / gamma.powi(3)))
    } else {
        (None, None)
    };
    Ok(TruncationReport {
        gamma,
        phase_truncated: phase,
        damping_truncated: damping,
        exact,
        truncated,
        discrepancy,
        discrepancy_half_gamma: half,
        observed_order,
        cubic_constant,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub dimension: usize,
    /// Max over mode pairs of `|[A_j, A_k†] − δ_jk/dt|` away from the truncation edge.
    pub commutator_residual: f64,
    pub commutator_worst_pair: (usize, usize),
    /// Max over mode pairs of `|[A_j, A_k]|` away from the truncation edge.
    pub annihilator_residual: f64,
    /// Max over modes of `|A†A after evolution − A†A before|`.
    pub number_residual: f64,
    /// Max over modes of `|b_k e^{O} − e^{O+D_k} b_k|`.
    pub permutation_residual: f64,
    /// Max over modes of `|U†b U − e^{iΣw n̂} b|`.
    pub heisenberg_residual: f64,
    pub violations: Vec<String>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `F(n)` in `U = e^{iF(n̂)}`: SPM of each pulse in normal order plus XPM.
fn evolution_phase(lattice: &ModeLattice, params: &InteractionParams, kernel: &Kernel, occ: &[usize]) -> f64 {
    let p = lattice.probe.len();
    let q = lattice.control.len();
    let w = |j, k| bin_weight(kernel, lattice.dt, j, k);
    let mut f = 0.0;
    for j in 0..p {
        for k in 0..p {
            let (nj, nk) = (occ[j] as f64, occ[k] as f64);
            let normal = if j == k { nj * (nj - 1.0) } else { nj * nk };
            f += 0.5 * params.gamma1 * w(j, k) * normal;
        }
    }
    for j in 0..q {
        for k in 0..q {
            let (mj, mk) = (occ[p + j] as f64, occ[p + k] as f64);
            let normal = if j == k { mj * (mj - 1.0) } else { mj * mk };
            f += 0.5 * params.gamma2 * w(j, k) * normal;
        }
    }
    for j in 0..p {
        for k in 0..q {
            f += params.gamma_x * w(j, k) * occ[j] as f64 * occ[p + k] as f64;
        }
    }
    f
}

/// Phase per unit time picked up by mode `m` in the Heisenberg picture:
/// `Σ_k γ_{mk} w_{mk} n̂_k`.
fn heisenberg_phase(lattice: &ModeLattice, params: &InteractionParams, kernel: &Kernel, m: usize, occ: &[usize]) -> f64 {
    let p = lattice.probe.len();
    let w = |j, k| bin_weight(kernel, lattice.dt, j, k);
    let (self_gamma, own_bin, own_range, other_range) = if m < p {
        (params.gamma1, m, 0..p, p..lattice.bins())
    } else {
        (params.gamma2, m - p, p..lattice.bins(), 0..p)
    };
    let own: f64 = own_range
        .clone()
        .map(|k| self_gamma * w(own_bin, k - own_range.start) * occ[k] as f64)
        .sum();
    let cross: f64 = other_range
        .clone()
        .map(|k| params.gamma_x * w(own_bin, k - other_range.start) * occ[k] as f64)
        .sum();
    own + cross
}

/// Builds the evolution operator and checks commutators, photon-number
/// conservation and the permutation relation on the lattice.
pub fn verify_commutator_and_statistics(
    lattice: &ModeLattice,
    params: &InteractionParams,
    kernel: &Kernel,
) -> Result<AlgebraReport> {
    lattice.validate()?;
    params.validate()?;
    let dim = lattice.dimension();
    let modes = lattice.bins();
    let inv_sqrt_dt = 1.0 / lattice.dt.sqrt();
    let occs: Vec<Vec<usize>> = (0..dim).map(|i| lattice.occupations(i)).collect();

    let u = MonomialOp::diagonal(
        occs.iter()
            .map(|o| Complex64::new(0.0, evolution_phase(lattice, params, kernel, o)).exp())
            .collect(),
    );
    let u_dag = u.adjoint();
    let bare: Vec<MonomialOp> = (0..modes).map(|m| MonomialOp::annihilator(lattice, m)).collect();
    let evolved: Vec<MonomialOp> = bare
        .iter()
        .map(|b| u_dag.compose(&b.compose(&u)).scaled(inv_sqrt_dt))
        .collect();
    let evolved_dag: Vec<MonomialOp> = evolved.iter().map(MonomialOp::adjoint).collect();

    // columns from which no raising operator reaches past n_max
    let interior = |c: usize| occs[c].iter().all(|&n| n < lattice.n_max);

    let mut commutator_residual = 0.0f64;
    let mut commutator_worst_pair = (0, 0);
    let mut annihilator_residual = 0.0f64;
    for j in 0..modes {
        for k in 0..modes {
            let ab = evolved[j].compose(&evolved_dag[k]);
            let ba = evolved_dag[k].compose(&evolved[j]);
            let id = if j == k { 1.0 / lattice.dt } else { 0.0 };
            let r = residual(&[(1.0, &ab), (-1.0, &ba)], id, interior);
            if r > commutator_residual {
                commutator_residual = r;
                commutator_worst_pair = (j, k);
            }
            let aa = evolved[j].compose(&evolved[k]);
            let aa_rev = evolved[k].compose(&evolved[j]);
            annihilator_residual = annihilator_residual.max(residual(&[(1.0, &aa), (-1.0, &aa_rev)], 0.0, interior));
        }
    }

    let mut number_residual = 0.0f64;
    let mut heisenberg_residual = 0.0f64;
    let mut permutation_residual = 0.0f64;
    // exponent O = iΣ_j c_j n̂_j, weighted as seen from the first probe bin
    let p = lattice.probe.len();
    let o_coeffs: Vec<f64> = (0..modes)
        .map(|j| {
            let (g, bin) = if j < p { (params.gamma1, j) } else { (params.gamma_x, j - p) };
            g * bin_weight(kernel, lattice.dt, 0, bin)
        })
        .collect();
    let o_phase = |occ: &[usize]| -> f64 { o_coeffs.iter().zip(occ).map(|(c, &n)| c * n as f64).sum() };
    let exp_o = MonomialOp::diagonal(occs.iter().map(|o| Complex64::new(0.0, o_phase(o)).exp()).collect());
    for m in 0..modes {
        let before = bare[m].adjoint().compose(&bare[m]).scaled(1.0 / lattice.dt);
        let after = evolved_dag[m].compose(&evolved[m]);
        number_residual = number_residual.max(residual(&[(1.0, &after), (-1.0, &before)], 0.0, |_| true));

        let formula = MonomialOp::diagonal(
            occs.iter()
                .map(|o| Complex64::new(0.0, heisenberg_phase(lattice, params, kernel, m, o)).exp())
                .collect(),
        )
        .compose(&bare[m])
        .scaled(inv_sqrt_dt);
        heisenberg_residual = heisenberg_residual.max(residual(&[(1.0, &evolved[m]), (-1.0, &formula)], 0.0, |_| true));

        let shifted = MonomialOp::diagonal(
            occs.iter()
                .map(|o| Complex64::new(0.0, o_phase(o) + o_coeffs[m]).exp())
                .collect(),
        );
        let lhs = bare[m].compose(&exp_o);
        let rhs = shifted.compose(&bare[m]);
        permutation_residual = permutation_residual.max(residual(&[(1.0, &lhs), (-1.0, &rhs)], 0.0, |_| true));
    }

    let mut violations = Vec::new();
    if commutator_residual > COMMUTATOR_TOL {
        violations.push(format!(
            "commutator residual {commutator_residual:.3e} for modes {commutator_worst_pair:?}"
        ));
    }
    if annihilator_residual > COMMUTATOR_TOL {
        violations.push(format!("[A_j, A_k] residual {annihilator_residual:.3e}"));
    }
    if number_residual > NUMBER_TOL {
        violations.push(format!("photon-number residual {number_residual:.3e}"));
    }
    if permutation_residual > PERMUTATION_TOL {
        violations.push(format!("permutation residual {permutation_residual:.3e}"));
    }
    if heisenberg_residual > PERMUTATION_TOL {
        violations.push(format!("Heisenberg-form residual {heisenberg_residual:.3e}"));
    }
    Ok(AlgebraReport {
        dimension: dim,
        commutator_residual,
        commutator_worst_pair,
        annihilator_residual,
        number_residual,
        permutation_residual,
        heisenberg_residual,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_bin(alpha: f64, n_max: usize) -> ModeLattice {
        ModeLattice {
            dt: 1.0,
            n_max,
            probe: vec![Complex64::new(alpha, 0.0)],
            control: vec![],
        }
    }

    // independent brute-force Poisson sum Σ e^{iwn} e^{-1}/n!
    fn poisson_sum(w: f64, mean: f64, terms: usize) -> Complex64 {
        let mut p = (-mean).exp();
        let mut s = Complex64::new(0.0, 0.0);
        for n in 0..terms {
            if n > 0 {
                p *= mean / n as f64;
            }
            s += Complex64::new(0.0, w * n as f64).exp() * p;
        }
        s
    }

    #[test]
    fn single_bin_example() {
        let r = expect_exp_o(&one_bin(1.0, 20), 0.1, &Kernel::default()).unwrap();
        let expect = (Complex64::new(0.0, 0.1).exp() - 1.0).exp();
        assert!((r.closed_form - expect).norm() < 1e-15);
        assert!((r.closed_form.norm() - 0.995_016_6).abs() < 1e-7);
        assert!(r.difference < 1e-10);
        assert!((r.matrix - poisson_sum(0.1, 1.0, 21)).norm() < 1e-14);
    }

    #[test]
    fn zero_gamma_and_vacuum_give_one() {
        let r = expect_exp_o(&ModeLattice::default(), 0.0, &Kernel::default()).unwrap();
        assert_eq!(r.closed_form, Complex64::new(1.0, 0.0));
        let r = expect_exp_o(&one_bin(0.0, 8), 0.3, &Kernel::default()).unwrap();
        assert_eq!(r.closed_form, Complex64::new(1.0, 0.0));
        assert_eq!(r.matrix, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn matrix_side_converges_with_n_max() {
        let mut prev = f64::INFINITY;
        for n in [4, 6, 8, 10, 12] {
            let r = expect_exp_o(&one_bin(1.0, n), 0.2, &Kernel::default()).unwrap();
            assert!(r.difference < prev);
            prev = r.difference;
            let again = expect_exp_o(&one_bin(1.0, 20), 0.2, &Kernel::default()).unwrap();
            assert_eq!(again.closed_form, r.closed_form);
        }
    }

    #[test]
    fn lattice_limits_are_enforced() {
        assert!(one_bin(2.0, 12).validate().is_err()); // |α|² = 4 > 3
        let mut big = ModeLattice::default();
        big.probe = vec![Complex64::new(0.5, 0.0); 5];
        assert!(big.validate().is_err());
        assert!(one_bin(1.0, 21).validate().is_err());
    }

    #[test]
    fn truncated_mean_is_third_order() {
        let r = verify_truncated_mean(&one_bin(1.0, 12), 1e-2, &Kernel::default()).unwrap();
        let order = r.observed_order.unwrap();
        assert!((order - 3.0).abs() < 0.05, "order {order}");
        let r2 = verify_truncated_mean(&one_bin(1.0, 12), 5e-3, &Kernel::default()).unwrap();
        let (c1, c2) = (r.cubic_constant.unwrap(), r2.cubic_constant.unwrap());
        assert!(((c1 - c2) / c1).abs() < 0.02);
        assert!((r.phase_truncated - 0.01).abs() < 1e-15);
    }

    #[test]
    fn truncated_mean_vanishes_without_nonlinearity() {
        let r = verify_truncated_mean(&ModeLattice::default(), 0.0, &Kernel::default()).unwrap();
        assert_eq!(r.discrepancy, 0.0);
        assert!(r.observed_order.is_none());
    }

    #[test]
    fn truncated_phase_is_discretized_convolution() {
        let lat = ModeLattice {
            dt: 0.5,
            ..ModeLattice::default()
        };
        let r = verify_truncated_mean(&lat, 0.02, &Kernel::default()).unwrap();
        let expect = 0.02 * 0.5 * (lat.probe[0].norm_sqr() + (-0.5f64).exp() * lat.probe[1].norm_sqr());
        assert!((r.phase_truncated - expect).abs() < 1e-15);
    }

    #[test]
    fn algebra_exact_without_nonlinearity() {
        let r = verify_commutator_and_statistics(&ModeLattice::default(), &InteractionParams::off(), &Kernel::default())
            .unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.commutator_residual < 1e-13);
        assert_eq!(r.number_residual, 0.0);
    }

    #[test]
    fn algebra_holds_on_two_bins() {
        let params = InteractionParams::new(0.2, 0.2, 0.1).unwrap();
        let r = verify_commutator_and_statistics(&ModeLattice::default(), &params, &Kernel::default()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.heisenberg_residual < 1e-12);
    }

    #[test]
    fn algebra_holds_across_pulses() {
        let lat = ModeLattice {
            dt: 0.7,
            n_max: 8,
            probe: vec![Complex64::new(0.9, 0.1), Complex64::new(0.3, 0.0)],
            control: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.8)],
        };
        let params = InteractionParams::new(0.2, 0.1, 0.15).unwrap();
        for kernel in [Kernel::default(), Kernel::Delta] {
            let r = verify_commutator_and_statistics(&lat, &params, &kernel).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
        }
    }

    #[test]
    fn residual_sees_truncation_edge() {
        let lat = one_bin(1.0, 4);
        let b = MonomialOp::annihilator(&lat, 0);
        let bd = b.adjoint();
        let r = residual(&[(1.0, &b.compose(&bd)), (-1.0, &bd.compose(&b))], 1.0, |_| true);
        // only the truncation edge breaks [b, b†] = 1
        assert!((r - 5.0).abs() < 1e-12);
        let interior = residual(&[(1.0, &b.compose(&bd)), (-1.0, &bd.compose(&b))], 1.0, |c| c < 4);
        assert!(interior < 1e-15);
    }

    #[test]
    fn monomial_compose_and_adjoint() {
        let lat = one_bin(1.0, 3);
        let b = MonomialOp::annihilator(&lat, 0);
        let n = b.adjoint().compose(&b);
        for c in 0..4 {
            assert_eq!(n.target[c], if c == 0 { None } else { Some(c) });
            if c > 0 {
                assert!((n.coef[c].re - c as f64).abs() < 1e-14);
            }
        }
        assert_eq!(b.adjoint().adjoint(), b);
    }
}
