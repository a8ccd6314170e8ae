//! Noise Hamiltonians, ideal-pulse evolution, and distance sweeps.
//!
//! Times are measured in units of the waiting interval: with `τ = 1` the
//! disorder and coupling scales are directly the dimensionless products
//! `τΔ` and `τΓ` of a sweep grid.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::PulseSequence;
use crate::group::Representation;
use crate::lie::gell_mann_basis;
use crate::mat::{c64, diag, eig_unitary, eigh, embed_site, identity, kron, sym_power_derivation, ComplexMatrix, HermitianEigen};
use crate::{Error, Result};

/// One term of a many-site Hamiltonian.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Term {
    /// `δ n̂·λ` (qutrits) or `δ n̂·S` (spins) on one site; scaled by Δ.
    Disorder { site: usize, delta: f64, direction: Vec<f64> },
    /// `γ Σ_ab M_ab O_a ⊗ O_b` between two sites; scaled by Γ.
    PairCoupling { site_i: usize, site_j: usize, gamma: f64, matrix: Vec<Vec<f64>> },
    /// Rotating-frame qutrit dipolar coupling of strength `j`; scaled by Γ.
    SecularDipolar { site_i: usize, site_j: usize, j: f64 },
    /// `δ S_z` with `S_z = diag(1, 0, −1)`; scaled by Δ.
    RwaDisorder { site: usize, delta_z: f64 },
}

/// A list of terms on `n_sites` sites of dimension `local_dim`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianModel {
    pub n_sites: usize,
    pub local_dim: usize,
    pub terms: Vec<Term>,
}

/// Local operator basis: Gell-Mann matrices for qutrits, spin operators otherwise.
fn local_basis(local_dim: usize) -> Vec<ComplexMatrix> {
    if local_dim == 3 {
        gell_mann_basis()
    } else {
        spin_operators(local_dim as u32 - 1).to_vec()
    }
}

impl HamiltonianModel {
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n_sites as u32)
    }

    fn pair_sum(&self, ops: &[ComplexMatrix], i: usize, j: usize, m: &[Vec<f64>]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        let left: Vec<ComplexMatrix> = ops.iter().map(|o| embed_site(o, i, self.n_sites)).collect();
        let right: Vec<ComplexMatrix> = ops.iter().map(|o| embed_site(o, j, self.n_sites)).collect();
        for (a, row) in m.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    out += &left[a] * &right[b] * c64(v, 0.0);
                }
            }
        }
        out
    }

    /// Disorder part and coupling part, each unscaled.
    pub fn parts(&self) -> (ComplexMatrix, ComplexMatrix) {
        let n = self.dim();
        let ops = local_basis(self.local_dim);
        let mut dis = ComplexMatrix::zeros(n, n);
        let mut int = ComplexMatrix::zeros(n, n);
        for term in &self.terms {
            match term {
                Term::Disorder { site, delta, direction } => {
                    let mut local = ComplexMatrix::zeros(self.local_dim, self.local_dim);
                    for (o, &c) in ops.iter().zip(direction) {
                        local += o * c64(c, 0.0);
                    }
                    dis += embed_site(&local, *site, self.n_sites) * c64(*delta, 0.0);
                }
                Term::RwaDisorder { site, delta_z } => {
                    dis += embed_site(&spin1_z(), *site, self.n_sites) * c64(*delta_z, 0.0);
                }
                Term::PairCoupling { site_i, site_j, gamma, matrix } => {
                    int += self.pair_sum(&ops, *site_i, *site_j, matrix) * c64(*gamma, 0.0);
                }
                Term::SecularDipolar { site_i, site_j, j } => {
                    int += self.pair_sum(&gell_mann_basis(), *site_i, *site_j, &dipolar_coefficients()) * c64(*j, 0.0);
                }
            }
        }
        (dis, int)
    }

    /// `Δ · disorder + Γ · coupling`.
    pub fn matrix(&self, delta_scale: f64, gamma_scale: f64) -> ComplexMatrix {
        let (d, i) = self.parts();
        d * c64(delta_scale, 0.0) + i * c64(gamma_scale, 0.0)
    }
}

fn spin1_z() -> ComplexMatrix {
    diag(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)])
}

/// Coefficients of `λ_a ⊗ λ_b` in one rotating-frame dipolar pair term.
fn dipolar_coefficients() -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; 8]; 8];
    for a in [0, 1, 5, 6] {
        m[a][a] = -0.25;
    }
    let r3 = 3f64.sqrt();
    // −(λ₃ + √3 λ₈)(λ₃ + √3 λ₈) with the overall −1/4.
    let v = [(2, 1.0), (7, r3)];
    for &(a, x) in &v {
        for &(b, y) in &v {
            m[a][b] += 0.25 * x * y;
        }
    }
    m
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn unit_matrix(rng: &mut ChaCha8Rng, n: usize, traceless: bool) -> Vec<Vec<f64>> {
    loop {
        let mut m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
        if traceless {
            let t = (0..n).map(|k| m[k][k]).sum::<f64>() / n as f64;
            for (k, row) in m.iter_mut().enumerate() {
                row[k] -= t;
            }
        }
        let norm = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return m.into_iter().map(|r| r.into_iter().map(|x| x / norm).collect()).collect();
        }
    }
}

/// Random on-site disorder plus random pairwise couplings on `n` qutrits.
pub fn random_model(n: usize, anisotropic: bool, seed: u64) -> Result<HamiltonianModel> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for site in 0..n {
        let delta = rng.gen_range(-0.5..0.5);
        terms.push(Term::Disorder { site, delta, direction: unit_vector(&mut rng, 8) });
    }
    for i in 0..n {
        for j in i + 1..n {
            let gamma = rng.gen_range(-0.5..0.5);
            terms.push(Term::PairCoupling { site_i: i, site_j: j, gamma, matrix: unit_matrix(&mut rng, 8, anisotropic) });
        }
    }
    Ok(HamiltonianModel { n_sites: n, local_dim: 3, terms })
}

/// [`random_model`] together with its matrix at the given scales.
pub fn build_random_hamiltonian(
    n: usize,
    delta_scale: f64,
    gamma_scale: f64,
    anisotropic: bool,
    seed: u64,
) -> Result<(HamiltonianModel, ComplexMatrix)> {
    let model = random_model(n, anisotropic, seed)?;
    let h = model.matrix(delta_scale, gamma_scale);
    Ok((model, h))
}

/// Rotating-frame qutrit dipolar Hamiltonian, one coupling per pair `i < j`
/// in lexicographic order.
pub fn build_secular_dipolar(n: usize, couplings: &[f64]) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidInput("dipolar coupling needs two sites".into()));
    }
    let pairs = n * (n - 1) / 2;
    if couplings.len() != pairs {
        return Err(Error::DimensionMismatch(format!("{} couplings for {pairs} pairs", couplings.len())));
    }
    let mut terms = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            terms.push(Term::SecularDipolar { site_i: i, site_j: j, j: couplings[k] });
            k += 1;
        }
    }
    Ok(HamiltonianModel { n_sites: n, local_dim: 3, terms }.matrix(0.0, 1.0))
}

/// `Σ_i δ_i S_z⁽ⁱ⁾` on qutrits.
pub fn build_rwa_disorder(deltas_z: &[f64]) -> Result<ComplexMatrix> {
    if deltas_z.is_empty() {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    let terms = deltas_z.iter().enumerate().map(|(site, &delta_z)| Term::RwaDisorder { site, delta_z }).collect();
    Ok(HamiltonianModel { n_sites: deltas_z.len(), local_dim: 3, terms }.matrix(1.0, 0.0))
}

/// Random disorder `δ_i S_z` plus rotating-frame dipolar couplings, with
/// `δ_i` and `J_ij` uniform on `[−1/2, 1/2]`.
pub fn random_nv_model(n: usize, seed: u64) -> Result<HamiltonianModel> {
    if n < 2 {
        return Err(Error::InvalidInput("need at least two sites".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for site in 0..n {
        terms.push(Term::RwaDisorder { site, delta_z: rng.gen_range(-0.5..0.5) });
    }
    for i in 0..n {
        for j in i + 1..n {
            terms.push(Term::SecularDipolar { site_i: i, site_j: j, j: rng.gen_range(-0.5..0.5) });
        }
    }
    Ok(HamiltonianModel { n_sites: n, local_dim: 3, terms })
}

/// `[S_x, S_y, S_z]` for spin `two_j / 2`, in the basis used by spin images.
pub fn spin_operators(two_j: u32) -> [ComplexMatrix; 3] {
    let half = c64(0.5, 0.0);
    let (o, z, i) = (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0));
    let sx = ComplexMatrix::from_row_slice(2, 2, &[z, o, o, z]) * half;
    let sy = ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]) * half;
    let sz = ComplexMatrix::from_row_slice(2, 2, &[o, z, z, -o]) * half;
    let n = two_j as usize;
    [sx, sy, sz].map(|s| sym_power_derivation(&s, n).expect("2x2 input"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Su2Kind {
    /// `Σ J_ij (3 S_z S_z − S·S)`.
    SecularDipolarSu2,
    /// `Σ J_ij S·S`.
    Exchange,
}

/// SU(2) pair Hamiltonians on `n` spins, one coupling per pair `i < j`.
pub fn build_su2_hamiltonian(kind: Su2Kind, two_j: u32, couplings: &[f64], n: usize) -> Result<ComplexMatrix> {
    if two_j == 0 {
        return Err(Error::InvalidInput("spin must be positive".into()));
    }
    if n < 2 || couplings.len() != n * (n - 1) / 2 {
        return Err(Error::DimensionMismatch(format!("{} couplings for {n} spins", couplings.len())));
    }
    let m: Vec<Vec<f64>> = match kind {
        Su2Kind::Exchange => vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        Su2Kind::SecularDipolarSu2 => vec![vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 2.0]],
    };
    let mut terms = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            terms.push(Term::PairCoupling { site_i: i, site_j: j, gamma: couplings[k], matrix: m.clone() });
            k += 1;
        }
    }
    Ok(HamiltonianModel { n_sites: n, local_dim: two_j as usize + 1, terms }.matrix(0.0, 1.0))
}

/// Ensemble image of a single-site pulse.
pub fn apply_rep_assignment(pulse: &ComplexMatrix, rep: &Representation) -> Result<ComplexMatrix> {
    rep.image(pulse)
}

/// Propagator `e^{−iτH}` from a precomputed eigendecomposition.
fn free_step(eig: &HermitianEigen, tau: f64) -> ComplexMatrix {
    eig.apply(|lam| crate::C64::from_polar(1.0, -tau * lam))
}

fn evolve_images(free: &ComplexMatrix, images: &[ComplexMatrix]) -> ComplexMatrix {
    if images.is_empty() {
        return free.clone();
    }
    let mut u = identity(free.nrows());
    for p in images {
        u = p * (free * u);
    }
    u
}

/// `π(P_N) e^{−iτH} ⋯ π(P₁) e^{−iτH}`; an empty sequence is one wait.
pub fn evolve_sequence(h: &ComplexMatrix, seq: &PulseSequence, rep: &Representation, tau: f64) -> Result<ComplexMatrix> {
    let pulses: Vec<ComplexMatrix> = seq.pulses.iter().map(|p| p.unitary.clone()).collect();
    let images = rep.images(&pulses)?;
    let dim = rep.dim(seq.dim);
    if h.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!("Hamiltonian {}x{} vs representation {dim}", h.nrows(), h.ncols())));
    }
    let eig = eigh(h)?;
    Ok(evolve_images(&free_step(&eig, tau), &images))
}

/// `sqrt(1 − |Tr[U V†]| / d)`, computed from eigenphases of `U V†` so that
/// distances far below `1e−8` keep their relative accuracy.
pub fn distance_to_target(u: &ComplexMatrix, target: &ComplexMatrix) -> Result<f64> {
    if u.shape() != target.shape() || u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch("distance needs equal square matrices".into()));
    }
    let w = u * target.adjoint();
    let phases = eig_unitary(&w)?.phases;
    let d = phases.len() as f64;
    // 1 − |tr|²/d² = (2/d²) Σ_{k<l} 4 sin²((θ_k − θ_l)/2) / 2
    let mut s = 0.0;
    for (k, a) in phases.iter().enumerate() {
        for b in &phases[k + 1..] {
            let x = ((a - b) / 2.0).sin();
            s += 4.0 * x * x;
        }
    }
    let s = (s / (d * d)).clamp(0.0, 1.0);
    let gap = s / (1.0 + (1.0 - s).sqrt());
    Ok(gap.clamp(0.0, 1.0).sqrt())
}

pub fn distance_to_identity(u: &ComplexMatrix) -> Result<f64> {
    distance_to_target(u, &identity(u.nrows()))
}

/// Which noise model a sweep samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Random Gell-Mann disorder and traceless random couplings.
    RandomAnisotropic,
    /// Random Gell-Mann disorder and unconstrained random couplings.
    RandomGeneral,
    /// `δ_i S_z` disorder plus rotating-frame dipolar couplings.
    Nv,
}

impl ModelKind {
    pub fn sample(self, n: usize, seed: u64) -> Result<HamiltonianModel> {
        match self {
            ModelKind::RandomAnisotropic => random_model(n, true, seed),
            ModelKind::RandomGeneral => random_model(n, false, seed),
            ModelKind::Nv => random_nv_model(n, seed),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepGrid {
    pub tau_delta_values: Vec<f64>,
    pub tau_gamma_values: Vec<f64>,
    pub n_hamiltonians: usize,
    pub seed: u64,
}

impl SweepGrid {
    fn validate(&self) -> Result<()> {
        if self.tau_delta_values.is_empty() || self.tau_gamma_values.is_empty() || self.n_hamiltonians == 0 {
            return Err(Error::InvalidInput("sweep grid axes and sample count must be non-empty".into()));
        }
        Ok(())
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &g in &self.tau_gamma_values {
            for &d in &self.tau_delta_values {
                out.push((d, g));
            }
        }
        out
    }
}

/// A sequence entered into a sweep, with the propagator it should implement.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub label: String,
    pub sequence: PulseSequence,
    pub rep: Representation,
    /// Ideal propagator; `None` means the identity.
    pub target: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sequence_label: String,
    pub tau_delta: f64,
    pub tau_gamma: f64,
    pub mean_distance: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Label of the free-evolution reference row.
pub const NO_DD: &str = "NoDD";

/// Mean distance for each sequence at each grid point, followed by a free
/// evolution lasting as many intervals as the shortest sequence. Sample `s`
/// uses the model drawn from seed `grid.seed + s` at every grid point.
pub fn sweep(grid: &SweepGrid, entries: &[SweepEntry], model: ModelKind, n_sites: usize) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    if entries.is_empty() {
        return Err(Error::InvalidInput("no sequences to sweep".into()));
    }
    let dim = entries[0].rep.dim(entries[0].sequence.dim);
    let local = model.sample(n_sites, grid.seed)?;
    if local.dim() != dim {
        return Err(Error::DimensionMismatch(format!("model dimension {} vs sequence representation {dim}", local.dim())));
    }
    struct Prepared {
        images: Vec<ComplexMatrix>,
        target: ComplexMatrix,
    }
    let mut prepared = Vec::with_capacity(entries.len());
    for e in entries {
        if e.rep.dim(e.sequence.dim) != dim {
            return Err(Error::DimensionMismatch(format!("sequence {} acts on a different space", e.label)));
        }
        let pulses: Vec<ComplexMatrix> = e.sequence.pulses.iter().map(|p| p.unitary.clone()).collect();
        let images = e.rep.images(&pulses)?;
        let target = e.target.clone().unwrap_or_else(|| identity(dim));
        prepared.push(Prepared { images, target });
    }
    let shortest = entries.iter().map(|e| e.sequence.intervals()).min().unwrap_or(1);
    let parts: Vec<(ComplexMatrix, ComplexMatrix)> = (0..grid.n_hamiltonians)
        .into_par_iter()
        .map(|s| model.sample(n_sites, grid.seed.wrapping_add(s as u64)).map(|m| m.parts()))
        .collect::<Result<_>>()?;
    let points = grid.points();
    // distances[point][sample][entry], with the reference in the last slot.
    let per_point: Vec<Vec<Vec<f64>>> = points
        .par_iter()
        .map(|&(td, tg)| {
            parts
                .par_iter()
                .map(|(dis, int)| {
                    let h = dis * c64(td, 0.0) + int * c64(tg, 0.0);
                    let eig = eigh(&h)?;
                    let free = free_step(&eig, 1.0);
                    let mut out = Vec::with_capacity(prepared.len() + 1);
                    for p in &prepared {
                        out.push(distance_to_target(&evolve_images(&free, &p.images), &p.target)?);
                    }
                    out.push(distance_to_identity(&free_step(&eig, shortest as f64))?);
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let labels: Vec<&str> = entries.iter().map(|e| e.label.as_str()).chain(std::iter::once(NO_DD)).collect();
    for (k, label) in labels.iter().enumerate() {
        for (pi, &(td, tg)) in points.iter().enumerate() {
            let sum: f64 = per_point[pi].iter().map(|d| d[k]).sum();
            rows.push(SweepRow {
                sequence_label: label.to_string(),
                tau_delta: td,
                tau_gamma: tg,
                mean_distance: sum / grid.n_hamiltonians as f64,
                n_samples: grid.n_hamiltonians,
                seed: grid.seed,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `log D` against `log τ`.
pub fn slope_estimate(tau_values: &[f64], distances: &[f64]) -> Result<f64> {
    if tau_values.len() != distances.len() {
        return Err(Error::DimensionMismatch("τ and distance lists differ in length".into()));
    }
    if tau_values.len() < 4 {
        return Err(Error::DegenerateWindow(format!("{} points; need at least 4", tau_values.len())));
    }
    if let Some(d) = distances.iter().find(|&&d| d.is_nan() || d <= 1e-13) {
        return Err(Error::DegenerateWindow(format!("distance {d:e} is below the numerical floor")));
    }
    if tau_values.iter().any(|&t| t.is_nan() || t <= 0.0) {
        return Err(Error::DegenerateWindow("τ values must be positive".into()));
    }
    let xs: Vec<f64> = tau_values.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = distances.iter().map(|d| d.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-24 {
        return Err(Error::DegenerateWindow("all τ values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Operator `(i/2)(S₋S₋ − S₊S₊)`-type pair term used to compare representations:
/// `i (S₋ ⊗ S₋ − S₊ ⊗ S₊)` on two spins.
pub fn ladder_pair_term(two_j: u32) -> ComplexMatrix {
    let [sx, sy, _] = spin_operators(two_j);
    let i = c64(0.0, 1.0);
    let sp = &sx + &sy * i;
    let sm = &sx - &sy * i;
    (kron(&sm, &sm) - kron(&sp, &sp)) * i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_cayley, emit_sequence, eulerian_circuit, first_order_average, Pulse, Walk};
    use crate::group::catalog::{mat_b, mat_c, mat_e, mat_v, mat_x, rotation};
    use crate::group::{FiniteGroup, Generator, GroupKind, Mode, SiteRep};
    use crate::mat::{expm_skew, frobenius, hs_inner, is_hermitian, is_unitary, max_abs, principal_generator};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn clustered_disorder_spectrum_reconstructs() {
        let h = ModelKind::RandomAnisotropic.sample(3, 84).unwrap().matrix(1.0, 0.0);
        let e = crate::mat::eigh(&h).unwrap();
        let rebuilt = e.apply(|l| crate::mat::c64(l, 0.0));
        assert!(frobenius(&(rebuilt - &h)) < 1e-10);
    }

    fn sigma72_sequence(seed: u64) -> PulseSequence {
        let g = FiniteGroup::close(
            "Sigma72x3/Z3",
            vec![Generator::new("V", mat_v()), Generator::new("X", mat_x())],
            Mode::Projective,
            GroupKind::Unitary,
            500,
        )
        .unwrap();
        let graph = build_cayley(&g, &[0, 1]).unwrap();
        emit_sequence(&Walk::Edges(eulerian_circuit(&graph, 0, seed).unwrap()), &graph, 1.0).unwrap()
    }

    #[test]
    fn random_model_is_traceless_hermitian_and_seeded() {
        let (m, h) = build_random_hamiltonian(3, 1.0, 0.7, true, 11).unwrap();
        assert!(is_hermitian(&h, 1e-12));
        assert!(h.trace().norm() < 1e-12);
        let (_, again) = build_random_hamiltonian(3, 1.0, 0.7, true, 11).unwrap();
        assert_eq!(h, again);
        assert_eq!(max_abs(&m.matrix(0.0, 0.0)), 0.0);
        for t in &m.terms {
            match t {
                Term::Disorder { direction, .. } => assert!((direction.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10),
                Term::PairCoupling { matrix, .. } => {
                    assert!((matrix.iter().flatten().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
                    assert!((0..8).map(|k| matrix[k][k]).sum::<f64>().abs() < 1e-10);
                }
                _ => unreachable!(),
            }
        }
    }

    /// Spin-1 operators in the `|1⟩, |0⟩, |−1⟩` basis.
    fn spin1_ops() -> [ComplexMatrix; 3] {
        let s = 1.0 / 2f64.sqrt();
        let r = |x: f64| c64(x, 0.0);
        let i = c64(0.0, 1.0);
        let sx = ComplexMatrix::from_row_slice(3, 3, &[r(0.0), r(s), r(0.0), r(s), r(0.0), r(s), r(0.0), r(s), r(0.0)]);
        let sy = ComplexMatrix::from_row_slice(3, 3, &[r(0.0), -i * s, r(0.0), i * s, r(0.0), -i * s, r(0.0), i * s, r(0.0)]);
        (sx, sy, spin1_z()).into()
    }

    #[test]
    fn dipolar_pair_matches_spin_construction() {
        // The secular pair term conserves each site's |±1⟩ structure: flip-flops
        // on the two allowed transitions and a zz-like term. Build it directly.
        let h = build_secular_dipolar(2, &[1.0]).unwrap();
        let l = gell_mann_basis();
        let d = &l[2] + &l[7] * c64(3f64.sqrt(), 0.0);
        let direct = (kron(&l[0], &l[0]) + kron(&l[1], &l[1]) + kron(&l[5], &l[5]) + kron(&l[6], &l[6]) - kron(&d, &d)) * c64(-0.25, 0.0);
        assert!(max_abs(&(&h - direct)) < 1e-14);
        // λ₃ + √3 λ₈ = 2 diag(1, 0, −1) = 2 S_z, so the zz part is the spin-1 S_z S_z.
        let [_, _, sz] = spin1_ops();
        assert!(max_abs(&(&d - &sz * c64(2.0, 0.0))) < 1e-14);
        // Diagonal and B conjugations are symmetries.
        let dg = diag(&[C(0.3), C(-1.1), C(0.8)]);
        let u = kron(&dg, &dg);
        assert!(max_abs(&(u.adjoint() * &h * &u - &h)) < 1e-12);
        let b = kron(&mat_b(), &mat_b());
        assert!(max_abs(&(b.adjoint() * &h * &b - &h)) < 1e-12);
        // No isotropic λ·λ component.
        let iso: ComplexMatrix = l.iter().map(|x| kron(x, x)).fold(ComplexMatrix::zeros(9, 9), |a, b| a + b);
        assert!(hs_inner(&iso, &h).norm() < 1e-12);
    }

    #[allow(non_snake_case)]
    fn C(phase: f64) -> crate::C64 {
        crate::C64::from_polar(1.0, phase)
    }

    #[test]
    fn rwa_disorder_is_diagonal() {
        let h = build_rwa_disorder(&[0.3, -0.2]).unwrap();
        assert!((0..9).all(|i| (0..9).all(|j| i == j || h[(i, j)].norm() == 0.0)));
        assert_eq!(max_abs(&build_rwa_disorder(&[0.0, 0.0]).unwrap()), 0.0);
    }

    #[test]
    fn su2_builders() {
        let ex = build_su2_hamiltonian(Su2Kind::Exchange, 1, &[1.0], 2).unwrap();
        let vals = eigh(&ex).unwrap().values;
        let want = [-0.75, 0.25, 0.25, 0.25];
        assert!(vals.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
        let dip = build_su2_hamiltonian(Su2Kind::SecularDipolarSu2, 2, &[0.4, -0.3, 0.2], 3).unwrap();
        assert!(dip.trace().norm() < 1e-12);
        let r = crate::group::su2_lift(&rotation([0.2, 0.5, -1.0], 1.1));
        let u = kron(&r, &r);
        assert!(max_abs(&(u.adjoint() * &ex * &u - &ex)) < 1e-12);
    }

    #[test]
    fn distances() {
        assert_eq!(distance_to_identity(&identity(4)).unwrap(), 0.0);
        assert!(distance_to_identity(&(identity(4) * C(0.7))).unwrap() < 1e-8);
        let mut m = identity(5);
        m[(4, 4)] = c64(-1.0, 0.0);
        assert!((distance_to_identity(&m).unwrap() - (2.0f64 / 5.0).sqrt()).abs() < 1e-12);
        // Small rotations keep relative accuracy: D ≈ θ/√8 for diag(e^{iθ/2}, e^{−iθ/2}).
        let theta = 1e-9;
        let u = diag(&[C(theta / 2.0), C(-theta / 2.0)]);
        let d = distance_to_identity(&u).unwrap();
        assert!((d / (theta / 8f64.sqrt()) - 1.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn evolution_limits() {
        let seq = sigma72_sequence(3);
        let rep = Representation::Tensor(2);
        let zero = ComplexMatrix::zeros(9, 9);
        let u = evolve_sequence(&zero, &seq, &rep, 1.0).unwrap();
        assert!(distance_to_identity(&u).unwrap() < 1e-7);
        let (_, h) = build_random_hamiltonian(2, 1.0, 1.0, true, 5).unwrap();
        let u0 = evolve_sequence(&h, &seq, &rep, 0.0).unwrap();
        let net = rep.image(&seq.net_unitary()).unwrap();
        assert!(max_abs(&(u0 - net)) < 1e-10);
        assert!(evolve_sequence(&identity(4), &seq, &rep, 1.0).is_err());
    }

    #[test]
    fn magnus_first_order_consistency() {
        // Short sequence on one qutrit: log of the toggling-frame propagator
        // approaches −iNτ·H̄ with an O(τ²) remainder.
        let alphabet = [Generator::new("C", mat_c()), Generator::new("E", mat_e())];
        let seq = PulseSequence::from_labels(&["C", "E", "C", "E", "E"], &alphabet, 1.0).unwrap();
        let (_, h) = build_random_hamiltonian(1, 1.0, 0.0, true, 9).unwrap();
        let rep = Representation::Defining;
        let avg = first_order_average(&seq, &h, &rep).unwrap();
        let n = seq.intervals() as f64;
        let err = |tau: f64| {
            let u = evolve_sequence(&h, &seq, &rep, tau).unwrap();
            let frame = seq.net_unitary().adjoint() * u;
            let g = principal_generator(&frame).unwrap();
            frobenius(&(g - &avg * c64(n * tau, 0.0)))
        };
        let ratio = err(2e-3) / err(1e-3);
        assert!((3.6..4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn unitarity_survives_long_products() {
        let seq = sigma72_sequence(1);
        let (_, h) = build_random_hamiltonian(3, 0.3, 0.3, true, 2).unwrap();
        let u = evolve_sequence(&h, &seq, &Representation::Tensor(3), 0.7).unwrap();
        assert!(frobenius(&(u.adjoint() * &u - identity(27))) < 1e-8);
        assert!(is_unitary(&u));
    }

    #[test]
    fn slopes() {
        let t = [1e-3, 2e-3, 4e-3, 8e-3];
        let lin: Vec<f64> = t.iter().map(|x| 3.0 * x).collect();
        let quad: Vec<f64> = t.iter().map(|x| 0.5 * x * x).collect();
        assert!((slope_estimate(&t, &lin).unwrap() - 1.0).abs() < 1e-6);
        assert!((slope_estimate(&t, &quad).unwrap() - 2.0).abs() < 1e-6);
        assert!(matches!(slope_estimate(&t[..3], &lin[..3]), Err(Error::DegenerateWindow(_))));
        assert!(matches!(slope_estimate(&t, &[1.0, 1.0, 0.0, 1.0]), Err(Error::DegenerateWindow(_))));
    }

    #[test]
    fn sweep_rows_and_reference() {
        let seq = sigma72_sequence(4);
        let entries = vec![SweepEntry { label: "S72".into(), sequence: seq, rep: Representation::Tensor(2), target: None }];
        let grid = SweepGrid { tau_delta_values: vec![0.0, 1e-3], tau_gamma_values: vec![0.0, 1e-3], n_hamiltonians: 4, seed: 8 };
        let rows = sweep(&grid, &entries, ModelKind::RandomAnisotropic, 2).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().filter(|r| r.tau_delta == 0.0 && r.tau_gamma == 0.0).all(|r| r.mean_distance < 1e-7));
        let at = |label: &str| rows.iter().find(|r| r.sequence_label == label && r.tau_delta > 0.0 && r.tau_gamma > 0.0).unwrap().mean_distance;
        assert!(at("S72") < 0.05 * at(NO_DD));
        let again = sweep(&grid, &entries, ModelKind::RandomAnisotropic, 2).unwrap();
        assert_eq!(rows, again);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sequence_label,tau_delta,tau_gamma,mean_distance,n_samples,seed"));
    }

    #[test]
    fn mixed_representation_sectors() {
        // Spin-1 pair; the D2 axes are z and (x ± y)/√2.
        let h = ladder_pair_term(2);
        let d2 = FiniteGroup::close(
            "D2",
            vec![
                Generator::new("C2z", rotation([0.0, 0.0, 1.0], PI)),
                Generator::new("C2a", rotation([1.0, 1.0, 0.0], PI)),
            ],
            Mode::Exact,
            GroupKind::Rotation,
            10,
        )
        .unwrap();
        let std = Representation::Sites(vec![SiteRep::spin(2), SiteRep::spin(2)]);
        let mixed = Representation::Sites(vec![SiteRep::spin(2), SiteRep::spin(2).dualized()]);
        let s_std = crate::group::symmetrize(&h, &d2, &std).unwrap();
        let s_mix = crate::group::symmetrize(&h, &d2, &mixed).unwrap();
        assert!(max_abs(&(s_std - &h)) < 1e-12);
        assert!(max_abs(&s_mix) < 1e-12);
        let pulse = rotation([0.3, 0.1, 1.0], 0.4);
        let img = apply_rep_assignment(&pulse, &mixed).unwrap();
        let lift = crate::group::su2_lift(&pulse);
        let one = crate::mat::sym_power(&lift, 2).unwrap();
        assert!(max_abs(&(img - kron(&one, &one.conjugate()))) < 1e-12);

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn random_models_are_hermitian(seed in any::<u64>(), d in 0.0f64..2.0, g in 0.0f64..2.0) {
            let (_, h) = build_random_hamiltonian(2, d, g, true, seed).unwrap();
            prop_assert!(is_hermitian(&h, 1e-12));
            prop_assert!(h.trace().norm() < 1e-11);
        }

        #[test]
        fn distance_is_phase_blind(phase in -PI..PI, seed in any::<u64>()) {
            let (_, h) = build_random_hamiltonian(1, 1.0, 0.0, true, seed).unwrap();
            let u = expm_skew(&h, 0.3).unwrap();
            let a = distance_to_identity(&u).unwrap();
            let b = distance_to_identity(&(&u * C(phase))).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
            let seq = PulseSequence::literal(vec![Pulse { label: "C".into(), unitary: mat_c() }], 3, 1.0).unwrap();
            prop_assert_eq!(seq.intervals(), 1);
        }
    }
}
