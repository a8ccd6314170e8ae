//! Orientations of finite groups inside SU(3).
//!
//! An orientation is a unitary `Q = U·P_σ` acting by `g ↦ Q† g Q`, where
//! `P_σ` permutes the columns of `U`. The catalog holds the eigenbasis of
//! `X`, its Weyl-group relatives, and the two pulse-simplifying families
//! `P(θ, φ₁, φ₂) = e^{iθλ₂} e^{iφ₁λ₈} e^{iφ₂λ₃}` and
//! `P′(θ, φ₁, φ₂) = e^{iθλ₇} e^{iφ₁λ₈} e^{iφ₂λ₃}`, which act on generating
//! Hamiltonians as `H ↦ P H P†`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::group::catalog::mat_y;
use crate::group::rep::{is_symmetry_of, Representation};
use crate::group::{FiniteGroup, Generator, OrientationRecord};
use crate::lie::gell_mann;
use crate::mat::{c64, diag, expm_skew, frobenius, is_hermitian, is_unitary, principal_generator, to_pairs, ComplexMatrix, C64};
use crate::{Error, Result};

/// A change of basis `g ↦ (U P_σ)† g (U P_σ)`.
#[derive(Debug, Clone)]
pub struct Orientation {
    pub conjugator: ComplexMatrix,
    /// Column `k` of the oriented basis is column `weyl_perm[k]` of `conjugator`.
    pub weyl_perm: Vec<usize>,
    pub description: String,
}

impl Orientation {
    pub fn new(conjugator: ComplexMatrix, weyl_perm: Vec<usize>, description: impl Into<String>) -> Result<Self> {
        if !is_unitary(&conjugator) {
            let dev = frobenius(&(conjugator.adjoint() * &conjugator - ComplexMatrix::identity(conjugator.nrows(), conjugator.ncols())));
            return Err(Error::NonUnitary(dev));
        }
        let d = conjugator.nrows();
        let mut seen = vec![false; d];
        if weyl_perm.len() != d || weyl_perm.iter().any(|&k| k >= d || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::InvalidInput(format!("{weyl_perm:?} is not a permutation of 0..{d}")));
        }
        Ok(Orientation { conjugator, weyl_perm, description: description.into() })
    }

    pub fn identity(d: usize) -> Self {
        Orientation {
            conjugator: ComplexMatrix::identity(d, d),
            weyl_perm: (0..d).collect(),
            description: "identity".into(),
        }
    }

    /// `U · P_σ`.
    pub fn full_conjugator(&self) -> ComplexMatrix {
        &self.conjugator * weyl_matrix(&self.weyl_perm)
    }

    pub fn apply(&self, g: &ComplexMatrix) -> ComplexMatrix {
        let q = self.full_conjugator();
        q.adjoint() * g * q
    }

    pub fn to_record(&self) -> OrientationRecord {
        OrientationRecord { conjugator: to_pairs(&self.conjugator), permutation: self.weyl_perm.clone() }
    }
}

/// Signed column permutation with determinant one.
///
/// Odd permutations flip the sign of the last column.
pub fn weyl_matrix(perm: &[usize]) -> ComplexMatrix {
    let d = perm.len();
    let mut m = ComplexMatrix::zeros(d, d);
    for (k, &src) in perm.iter().enumerate() {
        m[(src, k)] = c64(1.0, 0.0);
    }
    if permutation_sign(perm) < 0 && d > 0 {
        for i in 0..d {
            m[(i, d - 1)] = -m[(i, d - 1)];
        }
    }
    m
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

pub fn conjugate_generators(gens: &[ComplexMatrix], o: &Orientation) -> Result<Vec<ComplexMatrix>> {
    let d = o.conjugator.nrows();
    gens.iter()
        .map(|g| {
            if g.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!("generator {}x{} vs orientation {d}x{d}", g.nrows(), g.ncols())));
            }
            Ok(o.apply(g))
        })
        .collect()
}

/// Closes the conjugated generators of `g` with the same mode and kind.
pub fn conjugate_group(g: &FiniteGroup, o: &Orientation) -> Result<FiniteGroup> {
    let mats: Vec<ComplexMatrix> = g.generators().iter().map(|x| x.matrix.clone()).collect();
    let gens = conjugate_generators(&mats, o)?
        .into_iter()
        .zip(g.generators())
        .map(|(m, x)| Generator::new(x.label.clone(), m))
        .collect();
    FiniteGroup::close(format!("{}[{}]", g.name(), o.description), gens, g.mode(), g.kind(), g.order().max(1))
}

fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Eigenbasis of `X` with `U† X U = diag(−i, i, 1)`.
pub fn diagonalizer_of_x() -> ComplexMatrix {
    let r3 = 3f64.sqrt();
    let a = 1.0 / (6.0 + 2.0 * r3).sqrt();
    let b = 1.0 / (6.0 - 2.0 * r3).sqrt();
    let s = 1.0 / 2f64.sqrt();
    let w = omega();
    let r = |x: f64| c64(x, 0.0);
    ComplexMatrix::from_row_slice(
        3,
        3,
        &[
            r((1.0 + r3) * a),
            r((1.0 - r3) * b),
            r(0.0),
            r(a),
            r(b),
            -w * w * s,
            w * a,
            w * b,
            r(s),
        ],
    )
}

/// All permutations of `0..3` in lexicographic order.
pub fn permutations3() -> Vec<Vec<usize>> {
    vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]
}

fn perm_name(perm: &[usize]) -> String {
    match perm {
        [0, 1, 2] => "e".into(),
        [1, 0, 2] => "(12)".into(),
        [0, 2, 1] => "(23)".into(),
        [2, 1, 0] => "(13)".into(),
        [2, 0, 1] => "(123)".into(),
        [1, 2, 0] => "(132)".into(),
        _ => format!("{perm:?}"),
    }
}

/// The six column permutations of `base`.
pub fn weyl_orientations(base: &ComplexMatrix, label: &str) -> Result<Vec<Orientation>> {
    permutations3()
        .into_iter()
        .map(|p| {
            let name = format!("{label}{}", perm_name(&p));
            Orientation::new(base.clone(), p, name)
        })
        .collect()
}

/// One representative per coset of the Weyl group modulo the swap of the
/// first and last columns: `e`, `(12)`, `(23)`.
pub fn reduced_weyl_orientations(base: &ComplexMatrix, label: &str) -> Result<Vec<Orientation>> {
    [vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1]]
        .into_iter()
        .map(|p| {
            let name = format!("{label}{}", perm_name(&p));
            Orientation::new(base.clone(), p, name)
        })
        .collect()
}

fn eta_powers() -> [C64; 7] {
    let e = C64::from_polar(1.0, 2.0 * PI / 7.0);
    let mut out = [c64(1.0, 0.0); 7];
    for k in 1..7 {
        out[k] = out[k - 1] * e;
    }
    out
}

fn poly(coeffs: [f64; 7]) -> C64 {
    let h = eta_powers();
    coeffs.iter().zip(h.iter()).map(|(c, x)| x * *c).sum()
}

/// A generating pair of Σ(168) in a second realization; their product is `Y`.
pub fn klein_generators() -> (ComplexMatrix, ComplexMatrix) {
    let h = eta_powers();
    let f = c64(0.0, 1.0 / 7f64.sqrt());
    let one = c64(1.0, 0.0);
    let a3 = ComplexMatrix::from_row_slice(
        3,
        3,
        &[
            h[2] - h[5],
            h[1] - h[6],
            h[4] - h[3],
            h[1] - h[6],
            h[4] - h[3],
            h[2] - h[5],
            h[4] - h[3],
            h[2] - h[5],
            h[1] - h[6],
        ],
    ) * f;
    let b3 = ComplexMatrix::from_row_slice(
        3,
        3,
        &[
            h[3] - h[6],
            h[3] - h[1],
            h[1] - one,
            h[2] - one,
            h[6] - h[5],
            h[6] - h[2],
            h[5] - h[4],
            h[4] - one,
            h[5] - h[3],
        ],
    ) * f;
    (a3, b3)
}

/// Signed-permutation generators of the octahedral subgroup before embedding.
pub fn octahedral_pair() -> (ComplexMatrix, ComplexMatrix) {
    let (z, o) = (C64::default(), c64(1.0, 0.0));
    let m1 = ComplexMatrix::from_row_slice(3, 3, &[z, o, z, z, z, -o, -o, z, z]);
    let m2 = ComplexMatrix::from_row_slice(3, 3, &[-o, z, z, z, z, -o, z, -o, z]);
    (m1, m2)
}

/// The unitary `w = w₂ w₁` carrying the signed-permutation octahedral group
/// into the `{Y, Z}` realization of Σ(168).
///
/// The linear coefficient of `z` is 34; with 35 the circulant `w₂` is not
/// unitary. The cube root in the normalization is the principal branch; its
/// modulus is then corrected from the row norm, since the rounded constant
/// leaves `w₂` unitary only to about `1e−9`.
pub fn delta24_conjugator() -> ComplexMatrix {
    let (a3, b3) = klein_generators();
    let ab = &a3 * &b3;
    let ba = &b3 * &a3;
    let w1 = &b3 * &ab * &ab * &ba * &ba;
    let ncube = poly([-342125.0, -349668.0, 283769.0, 9406.0, -501928.0, 0.0, 287955.0]) * 28.0;
    let n = ncube.powf(1.0 / 3.0);
    let x = poly([-64.0, -15.0, 0.0, -56.0, -46.0, 5.0, -27.0]) / n;
    let y = poly([0.0, 73.0, 156.0, 46.0, 12.0, 137.0, 115.0]) / n;
    let z = poly([15.0, 34.0, -35.0, -23.0, 41.0, 0.0, -46.0]) / n;
    let norm = (x.norm_sqr() + y.norm_sqr() + z.norm_sqr()).sqrt();
    let (x, y, z) = (x / norm, y / norm, z / norm);
    let w2 = ComplexMatrix::from_row_slice(3, 3, &[x, y, z, z, x, y, y, z, x]);
    w2 * w1
}

/// `{w† M₁ w, w† M₂ w}`: generators of Δ(24) inside `⟨Y, Z⟩`.
pub fn delta24_embedding() -> Vec<ComplexMatrix> {
    let w = delta24_conjugator();
    let (m1, m2) = octahedral_pair();
    vec![w.adjoint() * m1 * &w, w.adjoint() * m2 * &w]
}

/// Powers `Y⁰ … Y⁶`, the cyclic factor complementing the embedded Δ(24).
pub fn y_powers() -> Vec<ComplexMatrix> {
    let y = mat_y();
    let mut out = vec![ComplexMatrix::identity(3, 3)];
    for k in 1..7 {
        let next = &out[k - 1] * &y;
        out.push(next);
    }
    out
}

/// Whether the `[1,3]` coupling of a 3×3 Hermitian matrix vanishes.
pub fn forbidden_entry_check(h: &ComplexMatrix) -> Result<bool> {
    if h.shape() != (3, 3) {
        return Err(Error::DimensionMismatch(format!("expected 3x3, got {}x{}", h.nrows(), h.ncols())));
    }
    let scale = frobenius(h);
    if !is_hermitian(h, 1e-10 * scale.max(1.0)) {
        return Err(Error::NonHermitianInput(frobenius(&(h - h.adjoint()))));
    }
    Ok(h[(0, 2)].norm() <= 1e-9 * scale)
}

/// Two detuned drives on the `|1⟩↔|0⟩` and `|0⟩↔|−1⟩` transitions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DoubleDrivingPulse {
    pub omega_a: f64,
    pub omega_b: f64,
    pub phi_a: f64,
    pub phi_b: f64,
    /// Transition frequency minus drive frequency, upper transition.
    pub detuning_a: f64,
    /// Transition frequency minus drive frequency, lower transition.
    pub detuning_b: f64,
}

/// Rotating-frame Hamiltonian of a double-driving pulse.
pub fn double_driving_hamiltonian(p: &DoubleDrivingPulse) -> Result<ComplexMatrix> {
    if p.omega_a < 0.0 || p.omega_b < 0.0 {
        return Err(Error::InvalidInput("Rabi amplitudes must be non-negative".into()));
    }
    let up = 2.0 / 3.0 * p.detuning_a - 1.0 / 3.0 * p.detuning_b;
    let down = 2.0 / 3.0 * p.detuning_b - 1.0 / 3.0 * p.detuning_a;
    let a = C64::from_polar(p.omega_a, -p.phi_a);
    let b = C64::from_polar(p.omega_b, -p.phi_b);
    let z = C64::default();
    Ok(ComplexMatrix::from_row_slice(
        3,
        3,
        &[c64(up, 0.0), -a, z, -a.conj(), c64(down - up, 0.0), -b, z, -b.conj(), c64(-down, 0.0)],
    ))
}

/// Generating Hamiltonians with `C = e^{−iH_C}`, `V = e^{−iH_V}`, `E = e^{−iH_E}`.
pub fn generator_hamiltonians() -> [(&'static str, ComplexMatrix); 3] {
    let r3 = 3f64.sqrt();
    let r = |x: f64| c64(x, 0.0);
    let hc = diag(&[r(0.0), r(1.0), r(-1.0)]) * r(-2.0 * PI / 3.0);
    let hv = ComplexMatrix::from_row_slice(
        3,
        3,
        &[r(-1.0), r(-1.0), r(-1.0), r(-1.0), r(0.5), r(0.5), r(-1.0), r(0.5), r(0.5)],
    ) * r(-PI / 2.0 * r3 / 3.0);
    let i = c64(0.0, 1.0);
    let he = ComplexMatrix::from_row_slice(3, 3, &[r(0.0), -i, i, i, r(0.0), -i, -i, i, r(0.0)]) * r(-2.0 * PI / 3.0 / r3);
    [("C", hc), ("V", hv), ("E", he)]
}

fn exp_i(h: &ComplexMatrix, angle: f64) -> ComplexMatrix {
    // e^{i·angle·h} = e^{−i·(−angle)·h}
    expm_skew(h, -angle).expect("Gell-Mann matrices are Hermitian")
}

/// `e^{iθλ₂} e^{iφ₁λ₈} e^{iφ₂λ₃}`.
pub fn family_p(theta: f64, phi1: f64, phi2: f64) -> ComplexMatrix {
    exp_i(&gell_mann(2), theta) * exp_i(&gell_mann(8), phi1) * exp_i(&gell_mann(3), phi2)
}

/// `e^{iθλ₇} e^{iφ₁λ₈} e^{iφ₂λ₃}`.
pub fn family_p_prime(theta: f64, phi1: f64, phi2: f64) -> ComplexMatrix {
    exp_i(&gell_mann(7), theta) * exp_i(&gell_mann(8), phi1) * exp_i(&gell_mann(3), phi2)
}

/// Closed-form angles for the λ₂ family: `(θ, φ₂)`; `φ₁` is free.
pub fn p_parameters() -> (f64, f64) {
    let r3 = 3f64.sqrt();
    let theta = ((9.0 + r3) / (9.0 - r3)).sqrt().atan();
    let phi2 = -0.5 * (3.0 / 13f64.sqrt()).acos();
    (theta, phi2)
}

/// Closed-form angles for the λ₇ family: `(θ, φ₁, φ₂)`.
///
/// With `λ₈ = diag(1, 1, −2)/√3` the phase constraint reads
/// `√3 φ₁ − φ₂ = arccos(3 / (2√5 √(5 + 2√3)))`; `φ₂` makes the `[1,2]`
/// coupling real.
pub fn p_prime_parameters() -> (f64, f64, f64) {
    let r3 = 3f64.sqrt();
    let theta = ((9.0 + r3) / 5.0).sqrt().atan();
    let c = (3.0 / (2.0 * 5f64.sqrt() * (5.0 + 2.0 * r3).sqrt())).acos();
    let phi2 = 0.5 * (1.0 / 5f64.sqrt()).acos();
    let phi1 = (c + phi2) / r3;
    (theta, phi1, phi2)
}

/// Orientation whose generating Hamiltonians are `P U† H U P†`.
pub fn p_orientation(phi1: f64) -> Orientation {
    let (theta, phi2) = p_parameters();
    let p = family_p(theta, phi1, phi2);
    Orientation {
        conjugator: diagonalizer_of_x() * p.adjoint(),
        weyl_perm: vec![0, 1, 2],
        description: "U·P†".into(),
    }
}

pub fn p_prime_orientation() -> Orientation {
    let (theta, phi1, phi2) = p_prime_parameters();
    let p = family_p_prime(theta, phi1, phi2);
    Orientation {
        conjugator: diagonalizer_of_x() * p.adjoint(),
        weyl_perm: vec![0, 1, 2],
        description: "U·P′†".into(),
    }
}

/// Eigenbasis of `X` under all six column permutations, then both
/// pulse-simplifying families.
pub fn orientation_catalog() -> Vec<Orientation> {
    let mut out = weyl_orientations(&diagonalizer_of_x(), "U").expect("diagonalizer is unitary");
    out.push(p_orientation(0.0));
    out.push(p_prime_orientation());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchCriterion {
    /// Count representatives that commute with every target.
    Symmetry,
    /// Minimize the largest `[1,3]` entry among generating Hamiltonians.
    PulseSimplification,
}

#[derive(Debug, Clone)]
pub struct RankedOrientation {
    pub orientation: Orientation,
    /// Symmetry: representatives passing; pulse simplification: worst `[1,3]` modulus.
    pub score: f64,
}

fn tensor_power_for(op: &ComplexMatrix, d: usize) -> Result<Representation> {
    let mut n = 0;
    let mut dim = 1;
    while dim < op.nrows() {
        dim *= d;
        n += 1;
    }
    if dim != op.nrows() || n == 0 {
        return Err(Error::DimensionMismatch(format!("{}-dim target is not a power of {d}", op.nrows())));
    }
    Ok(Representation::Tensor(n))
}

/// Ranks `catalog` for the given elements. Ties keep catalog order; an empty
/// target list under the symmetry criterion returns the catalog unchanged.
pub fn orientation_search(
    gens: &[ComplexMatrix],
    targets: &[ComplexMatrix],
    criterion: SearchCriterion,
    catalog: &[Orientation],
) -> Result<Vec<RankedOrientation>> {
    if catalog.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let mut ranked = Vec::with_capacity(catalog.len());
    for o in catalog {
        let oriented = conjugate_generators(gens, o)?;
        let score = match criterion {
            SearchCriterion::Symmetry => {
                let mut passing = 0usize;
                for g in &oriented {
                    let mut ok = !targets.is_empty();
                    for t in targets {
                        let rep = tensor_power_for(t, g.nrows())?;
                        ok &= is_symmetry_of(t, g, &rep)?;
                    }
                    passing += ok as usize;
                }
                passing as f64
            }
            SearchCriterion::PulseSimplification => {
                let mut worst: f64 = 0.0;
                for g in &oriented {
                    worst = worst.max(principal_generator(g)?[(0, 2)].norm());
                }
                worst
            }
        };
        ranked.push(RankedOrientation { orientation: o.clone(), score });
    }
    match criterion {
        SearchCriterion::Symmetry => ranked.sort_by(|a, b| b.score.total_cmp(&a.score)),
        SearchCriterion::PulseSimplification => ranked.sort_by(|a, b| a.score.total_cmp(&b.score)),
    }
    Ok(ranked)
}
