//! SU(d) irreps: Dynkin labels, dimensions, characters and tensor products.
//!
//! A label `(d_1, …, d_{d−1})` is identified with the partition
//! `λ_i = Σ_{k≥i} d_k` (`λ_d = 0`). Characters are Schur polynomials of the
//! eigenvalues evaluated through the Jacobi–Trudi determinant in complete
//! homogeneous polynomials, which has no singularity at repeated eigenvalues.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mat::{c64, ComplexMatrix, C64};
use crate::{Error, Result};

/// Highest weight of an SU(d) irrep in Dynkin coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DynkinLabel {
    d: usize,
    coeffs: Vec<u32>,
}

impl DynkinLabel {
    pub fn new(d: usize, coeffs: Vec<u32>) -> Result<Self> {
        if d < 2 || coeffs.len() != d - 1 {
            return Err(Error::InvalidLabel(format!(
                "SU({d}) needs {} coefficients, got {}",
                d.saturating_sub(1),
                coeffs.len()
            )));
        }
        Ok(DynkinLabel { d, coeffs })
    }

    /// SU(3) label `(p, q)`.
    pub fn su3(p: u32, q: u32) -> Self {
        DynkinLabel { d: 3, coeffs: vec![p, q] }
    }

    /// SU(2) label for spin `L` (single coefficient `2L`).
    pub fn spin(l: u32) -> Self {
        DynkinLabel { d: 2, coeffs: vec![2 * l] }
    }

    pub fn trivial(d: usize) -> Self {
        DynkinLabel { d, coeffs: vec![0; d - 1] }
    }

    /// `(1, 0, …, 0, 1)`; for `d = 2` this is spin 1.
    pub fn adjoint(d: usize) -> Self {
        let mut coeffs = vec![0; d - 1];
        coeffs[0] += 1;
        coeffs[d - 2] += 1;
        DynkinLabel { d, coeffs }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Label of the dual irrep (coefficients reversed).
    pub fn dual(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        DynkinLabel { d: self.d, coeffs }
    }

    /// Partition with `d − 1` parts (trailing zeros kept).
    pub fn partition(&self) -> Vec<u32> {
        let mut parts = vec![0; self.d - 1];
        let mut acc = 0;
        for i in (0..self.d - 1).rev() {
            acc += self.coeffs[i];
            parts[i] = acc;
        }
        parts
    }

    /// Label of a partition with at most `d` rows; full columns are dropped.
    pub fn from_partition(d: usize, parts: &[u32]) -> Result<Self> {
        if parts.len() > d {
            return Err(Error::InvalidLabel(format!("partition with {} rows for SU({d})", parts.len())));
        }
        let mut rows = parts.to_vec();
        rows.resize(d, 0);
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidLabel(format!("{parts:?} is not a partition")));
        }
        let full = rows[d - 1];
        let coeffs = (0..d - 1).map(|i| (rows[i] - full) - (rows[i + 1] - full)).collect();
        Ok(DynkinLabel { d, coeffs })
    }

    /// Center charge `Σ k·d_k mod d`; zero when the center acts trivially.
    pub fn n_ality(&self) -> u32 {
        let s: u64 = self.coeffs.iter().enumerate().map(|(k, &c)| (k as u64 + 1) * c as u64).sum();
        (s % self.d as u64) as u32
    }
}

impl fmt::Display for DynkinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for DynkinLabel {
    type Err = Error;

    /// Parses `"(1,1)"` or `"1,1"`; the rank follows from the count.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coeffs: std::result::Result<Vec<u32>, _> = inner.split(',').map(|t| t.trim().parse::<u32>()).collect();
        let coeffs = coeffs.map_err(|_| Error::InvalidLabel(s.to_string()))?;
        DynkinLabel::new(coeffs.len() + 1, coeffs)
    }
}

/// Terms of a decomposition, sorted by label.
pub type IrrepDecomposition = Vec<(DynkinLabel, u32)>;

/// Weyl dimension formula `Π_{i<j} (λ_i − λ_j + j − i)/(j − i)`.
pub fn weyl_dimension(label: &DynkinLabel) -> u128 {
    let mut lam = label.partition();
    lam.push(0);
    let d = label.d;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        for j in i + 1..d {
            num *= (lam[i] - lam[j]) as u128 + (j - i) as u128;
            den *= (j - i) as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `h_0 … h_kmax` of the given variables.
pub fn complete_homogeneous(xs: &[C64], kmax: usize) -> Vec<C64> {
    let d = xs.len();
    let mut e = vec![C64::default(); d + 1];
    e[0] = c64(1.0, 0.0);
    for (n, x) in xs.iter().enumerate() {
        for k in (1..=n + 1).rev() {
            let prev = e[k - 1];
            e[k] += x * prev;
        }
    }
    let mut h = vec![C64::default(); kmax + 1];
    h[0] = c64(1.0, 0.0);
    for k in 1..=kmax {
        let mut acc = C64::default();
        for i in 1..=k.min(d) {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += e[i] * h[k - i] * sign;
        }
        h[k] = acc;
    }
    h
}

fn det_small(mut m: Vec<Vec<C64>>) -> C64 {
    let n = m.len();
    let mut det = c64(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        if m[pivot][col].norm() == 0.0 {
            return C64::default();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for r in rest.iter_mut() {
            let f = r[col] / pivot_row[col];
            for (x, &v) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * v;
            }
        }
    }
    det
}

/// Schur polynomial `s_λ(x)` via Jacobi–Trudi.
pub fn schur_polynomial(parts: &[u32], xs: &[C64]) -> C64 {
    let parts: Vec<u32> = parts.iter().copied().take_while(|&p| p > 0).collect();
    let l = parts.len();
    if l == 0 {
        return c64(1.0, 0.0);
    }
    let kmax = parts[0] as usize + l;
    let h = complete_homogeneous(xs, kmax);
    let m: Vec<Vec<C64>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let k = parts[i] as i64 - i as i64 + j as i64;
                    if k < 0 {
                        C64::default()
                    } else {
                        h[k as usize]
                    }
                })
                .collect()
        })
        .collect();
    det_small(m)
}

/// Irrep character at an element with the given eigenphases.
pub fn irrep_character(label: &DynkinLabel, eigenphases: &[f64]) -> Result<C64> {
    if eigenphases.len() != label.d {
        return Err(Error::DimensionMismatch(format!(
            "{} eigenphases for SU({})",
            eigenphases.len(),
            label.d
        )));
    }
    let xs: Vec<C64> = eigenphases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    Ok(schur_polynomial(&label.partition(), &xs))
}

/// Spin-`L` character at rotation angle `theta`.
pub fn su2_character(l: u32, theta: f64) -> f64 {
    spin_character(2 * l, theta)
}

/// Spin-`j` character for `two_j = 2j`, allowing half-integer spin.
///
/// Near `θ ≡ 0 (mod 2π)` the closed form is replaced by the finite sum of
/// weights, which has no removable singularity.
pub fn spin_character(two_j: u32, theta: f64) -> f64 {
    let half = theta / 2.0;
    let s = half.sin();
    if s.abs() > 1e-6 {
        ((two_j as f64 + 1.0) * half).sin() / s
    } else {
        // Σ_m e^{imθ}, m = −j, −j+1, …, j.
        (0..=two_j).map(|k| ((k as f64 - two_j as f64 / 2.0) * theta).cos()).sum()
    }
}

/// Littlewood–Richardson product of two labels by the Young-tableau rules.
///
/// The boxes of `b`, row `r` labelled `r`, are added to the diagram of `a`
/// one row of labels at a time as horizontal strips (no two equal labels in
/// a column), keeping a valid left-justified diagram with at most `d` rows,
/// and keeping the right-to-left, top-to-bottom reading word a lattice word.
/// Full columns of height `d` are removed at the end.
pub fn tensor_decompose(a: &DynkinLabel, b: &DynkinLabel) -> Result<IrrepDecomposition> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch(format!("SU({}) ⊗ SU({})", a.d, b.d)));
    }
    let d = a.d;
    let mut shape = a.partition();
    shape.resize(d, 0);
    let mu: Vec<u32> = b.partition().into_iter().take_while(|&p| p > 0).collect();
    let mut fill: Vec<Vec<u8>> = vec![Vec::new(); d];
    let mut out: BTreeMap<DynkinLabel, u32> = BTreeMap::new();
    lr_rec(d, &mu, 0, &mut shape, &mut fill, &mut out)?;
    Ok(out.into_iter().collect())
}

fn lr_rec(
    d: usize,
    mu: &[u32],
    letter: usize,
    shape: &mut Vec<u32>,
    fill: &mut Vec<Vec<u8>>,
    out: &mut BTreeMap<DynkinLabel, u32>,
) -> Result<()> {
    if letter == mu.len() {
        let label = DynkinLabel::from_partition(d, shape)?;
        *out.entry(label).or_insert(0) += 1;
        return Ok(());
    }
    let before = shape.clone();
    let mut counts = vec![0u32; d];
    place_strip(d, mu, letter, mu[letter], 0, &before, &mut counts, shape, fill, out)
}

#[allow(clippy::too_many_arguments)]
fn place_strip(
    d: usize,
    mu: &[u32],
    letter: usize,
    left: u32,
    row: usize,
    before: &[u32],
    counts: &mut Vec<u32>,
    shape: &mut Vec<u32>,
    fill: &mut Vec<Vec<u8>>,
    out: &mut BTreeMap<DynkinLabel, u32>,
) -> Result<()> {
    if left == 0 {
        for r in 0..d {
            shape[r] = before[r] + counts[r];
            for _ in 0..counts[r] {
                fill[r].push(letter as u8);
            }
        }
        if is_lattice(fill, letter + 1) {
            lr_rec(d, mu, letter + 1, shape, fill, out)?;
        }
        for r in 0..d {
            for _ in 0..counts[r] {
                fill[r].pop();
            }
        }
        shape.copy_from_slice(before);
        return Ok(());
    }
    if row == d {
        return Ok(());
    }
    // Horizontal strip: the new length of a row may not exceed the old
    // length of the row above it.
    let cap = if row == 0 { left } else { (before[row - 1] - before[row]).min(left) };
    for k in (0..=cap).rev() {
        counts[row] = k;
        place_strip(d, mu, letter, left - k, row + 1, before, counts, shape, fill, out)?;
    }
    counts[row] = 0;
    Ok(())
}

fn is_lattice(fill: &[Vec<u8>], letters: usize) -> bool {
    let mut seen = vec![0u32; letters];
    for row in fill {
        for &x in row.iter().rev() {
            let x = x as usize;
            seen[x] += 1;
            if x > 0 && seen[x] > seen[x - 1] {
                return false;
            }
        }
    }
    true
}

/// Labels occurring in the `k`-fold tensor power of the adjoint.
pub fn adjoint_power_labels(d: usize, k: usize) -> Result<BTreeSet<DynkinLabel>> {
    if d < 2 || k == 0 {
        return Err(Error::InvalidInput(format!("adjoint power needs d ≥ 2 and K ≥ 1, got d={d}, K={k}")));
    }
    let adj = DynkinLabel::adjoint(d);
    let mut current: BTreeSet<DynkinLabel> = [adj.clone()].into_iter().collect();
    for _ in 1..k {
        let mut next = BTreeSet::new();
        for lab in &current {
            for (term, _) in tensor_decompose(lab, &adj)? {
                next.insert(term);
            }
        }
        current = next;
    }
    Ok(current)
}

/// Right-hand side of the two-qudit operator-space decomposition for `d ≥ 5`.
pub fn qudit_formula_rhs(d: usize) -> Result<IrrepDecomposition> {
    if d < 5 {
        return Err(Error::InvalidInput(format!("closed form needs d ≥ 5, got {d}")));
    }
    let lab = |v: Vec<u32>| DynkinLabel::new(d, v);
    let pad = |head: &[u32], tail: &[u32]| {
        let mut v = head.to_vec();
        v.resize(d - 1 - tail.len(), 0);
        v.extend_from_slice(tail);
        v
    };
    let mut terms = vec![
        (DynkinLabel::trivial(d), 1),
        (DynkinLabel::adjoint(d), 2),
        (lab(pad(&[0, 1], &[1, 0]))?, 1),
        (lab(pad(&[2], &[1, 0]))?, 1),
        (lab(pad(&[0, 1], &[2]))?, 1),
        (lab(pad(&[2], &[2]))?, 1),
    ];
    terms.sort();
    Ok(terms)
}

/// Checks `adj ⊗ adj` against the closed form for `d ≥ 5`.
pub fn verify_qudit_formula(d: usize) -> Result<bool> {
    let adj = DynkinLabel::adjoint(d);
    let lhs = tensor_decompose(&adj, &adj)?;
    let rhs = qudit_formula_rhs(d)?;
    let total: u128 = rhs.iter().map(|(l, m)| weyl_dimension(l) * *m as u128).sum();
    let expect = ((d * d - 1) * (d * d - 1)) as u128;
    Ok(lhs == rhs && total == expect)
}

/// Integer spins spanning the operator space of `nspins` spin-`j` particles.
pub fn su2_operator_space_labels(two_j: u32, nspins: u32) -> Result<Vec<u32>> {
    if two_j == 0 || nspins == 0 {
        return Err(Error::InvalidInput("spin and particle count must be positive".into()));
    }
    Ok((0..=two_j * nspins).collect())
}

/// Rotation angle in `[0, π]` from the trace of an SO(3) matrix.
pub fn rotation_angle_from_trace(trace: f64) -> f64 {
    ((trace - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

/// Gell-Mann matrix `λ_k` for `k = 1..=8`, normalized to `Tr[λ_a λ_b] = 2δ_ab`.
///
/// Panics when `k` is outside `1..=8`.
pub fn gell_mann(k: usize) -> ComplexMatrix {
    let (o, i, z) = (c64(1.0, 0.0), c64(0.0, 1.0), C64::default());
    let r3 = 3f64.sqrt();
    let e = match k {
        1 => [z, o, z, o, z, z, z, z, z],
        2 => [z, -i, z, i, z, z, z, z, z],
        3 => [o, z, z, z, -o, z, z, z, z],
        4 => [z, z, o, z, z, z, o, z, z],
        5 => [z, z, -i, z, z, z, i, z, z],
        6 => [z, z, z, z, z, o, z, o, z],
        7 => [z, z, z, z, z, -i, z, i, z],
        8 => [o / r3, z, z, z, o / r3, z, z, z, -2.0 * o / r3],
        _ => panic!("Gell-Mann index {k} outside 1..=8"),
    };
    ComplexMatrix::from_row_slice(3, 3, &e)
}

/// All eight Gell-Mann matrices in order.
pub fn gell_mann_basis() -> Vec<ComplexMatrix> {
    (1..=8).map(gell_mann).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{eig_unitary, expm_skew, hs_inner};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn su3(p: u32, q: u32) -> DynkinLabel {
        DynkinLabel::su3(p, q)
    }

    fn random_su3(params: &[f64]) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(3, 3);
        let mut k = 0;
        for i in 0..3 {
            for j in i..3 {
                let im = if i == j { 0.0 } else { params[k + 1] };
                h[(i, j)] = c64(params[k], im);
                h[(j, i)] = c64(params[k], -im);
                k += 2;
            }
        }
        let tr = h.trace() / c64(3.0, 0.0);
        for i in 0..3 {
            h[(i, i)] -= tr;
        }
        expm_skew(&h, 1.0).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(weyl_dimension(&su3(0, 0)), 1);
        assert_eq!(weyl_dimension(&su3(1, 1)), 8);
        assert_eq!(weyl_dimension(&su3(2, 2)), 27);
        for p in 0..6 {
            for q in 0..6 {
                let closed = (p + 1) * (q + 1) * (p + q + 2) / 2;
                assert_eq!(weyl_dimension(&su3(p, q)), closed as u128);
            }
        }
        assert_eq!(weyl_dimension(&DynkinLabel::spin(3)), 7);
        assert_eq!(weyl_dimension(&DynkinLabel::adjoint(5)), 24);
    }

    #[test]
    fn character_at_identity_is_dimension() {
        for lab in [su3(2, 2), su3(4, 1), su3(0, 6), DynkinLabel::new(4, vec![2, 0, 2]).unwrap()] {
            let chi = irrep_character(&lab, &vec![0.0; lab.d()]).unwrap();
            assert!((chi - c64(weyl_dimension(&lab) as f64, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn su2_character_special_values() {
        assert_eq!(su2_character(3, 0.0), 7.0);
        assert!((su2_character(1, PI) + 1.0).abs() < 1e-12);
        assert!((su2_character(2, 2.0 * PI) - 5.0).abs() < 1e-9);
        assert!((spin_character(1, 2.0 * PI) + 2.0).abs() < 1e-9);
        let theta = 2.0 * PI / 3.0;
        let via_schur = irrep_character(&DynkinLabel::spin(2), &[theta / 2.0, -theta / 2.0]).unwrap();
        assert!((via_schur.re - su2_character(2, theta)).abs() < 1e-12);
        assert!(via_schur.im.abs() < 1e-12);
    }

    #[test]
    fn su3_adjoint_square() {
        let got = tensor_decompose(&su3(1, 1), &su3(1, 1)).unwrap();
        let want = vec![(su3(0, 0), 1), (su3(0, 3), 1), (su3(1, 1), 2), (su3(2, 2), 1), (su3(3, 0), 1)];
        assert_eq!(got, want);
    }

    #[test]
    fn su4_adjoint_square() {
        let l = |v: &[u32]| DynkinLabel::new(4, v.to_vec()).unwrap();
        let got = tensor_decompose(&l(&[1, 0, 1]), &l(&[1, 0, 1])).unwrap();
        let mut want = vec![
            (l(&[0, 0, 0]), 1),
            (l(&[1, 0, 1]), 2),
            (l(&[0, 2, 0]), 1),
            (l(&[2, 1, 0]), 1),
            (l(&[0, 1, 2]), 1),
            (l(&[2, 0, 2]), 1),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn su2_addition_of_angular_momenta() {
        let got = tensor_decompose(&DynkinLabel::spin(1), &DynkinLabel::spin(1)).unwrap();
        assert_eq!(got, vec![(DynkinLabel::spin(0), 1), (DynkinLabel::spin(1), 1), (DynkinLabel::spin(2), 1)]);
    }

    #[test]
    fn adjoint_powers_of_su3() {
        let set = |k| adjoint_power_labels(3, k).unwrap();
        let k2: BTreeSet<_> = [su3(0, 0), su3(1, 1), su3(0, 3), su3(3, 0), su3(2, 2)].into_iter().collect();
        assert_eq!(set(2), k2);
        let new3: BTreeSet<_> = set(3).difference(&set(2)).cloned().collect();
        assert_eq!(new3, [su3(4, 1), su3(1, 4), su3(3, 3)].into_iter().collect());
        let new4: BTreeSet<_> = set(4).difference(&set(3)).cloned().collect();
        assert_eq!(new4, [su3(6, 0), su3(0, 6), su3(5, 2), su3(2, 5), su3(4, 4)].into_iter().collect());
    }

    #[test]
    fn qudit_formula_holds() {
        for d in 5..=7 {
            assert!(verify_qudit_formula(d).unwrap(), "d = {d}");
        }
        assert!(qudit_formula_rhs(4).is_err());
    }

    #[test]
    fn operator_space_labels() {
        assert_eq!(su2_operator_space_labels(2, 1).unwrap(), vec![0, 1, 2]);
        assert_eq!(su2_operator_space_labels(1, 1).unwrap(), vec![0, 1]);
        assert_eq!(su2_operator_space_labels(2, 2).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(su2_operator_space_labels(1, 3).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn label_parsing_and_partition() {
        let l: DynkinLabel = "(2,0,1)".parse().unwrap();
        assert_eq!(l.d(), 4);
        assert_eq!(l.partition(), vec![3, 1, 1]);
        assert_eq!(DynkinLabel::from_partition(4, &[4, 2, 2, 1]).unwrap(), l);
        assert!("(a,1)".parse::<DynkinLabel>().is_err());
        assert!(DynkinLabel::new(3, vec![1]).is_err());
    }

    #[test]
    fn adjoint_character_oracle() {
        let g = random_su3(&[0.3, -0.7, 1.1, 0.4, -0.2, 0.9, 0.5, 0.1, -0.6, 0.8, 0.2, 0.3]);
        let ph = eig_unitary(&g).unwrap().phases;
        let chi = irrep_character(&su3(1, 1), &ph).unwrap();
        assert!((chi - c64(g.trace().norm_sqr() - 1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn degenerate_phases_are_stable() {
        for lab in [su3(2, 2), su3(4, 4), su3(6, 0)] {
            let theta = 2.0 * PI / 3.0;
            let exact = irrep_character(&lab, &[theta, theta, -2.0 * theta]).unwrap();
            let eps = 1e-9;
            let near = irrep_character(&lab, &[theta + eps, theta - eps, -2.0 * theta]).unwrap();
            assert!((exact - near).norm() < 1e-7);
        }
    }

    fn su3_label() -> impl Strategy<Value = DynkinLabel> {
        (0u32..4, 0u32..4).prop_map(|(p, q)| su3(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn decomposition_preserves_dimension(a in su3_label(), b in su3_label()) {
            let terms = tensor_decompose(&a, &b).unwrap();
            let total: u128 = terms.iter().map(|(l, m)| weyl_dimension(l) * *m as u128).sum();
            prop_assert_eq!(total, weyl_dimension(&a) * weyl_dimension(&b));
        }

        #[test]
        fn dual_pair_contains_trivial_once(p in 0u32..5, q in 0u32..5) {
            let a = su3(p, q);
            let terms = tensor_decompose(&a, &a.dual()).unwrap();
            let n = terms.iter().filter(|(l, _)| *l == su3(0, 0)).map(|(_, m)| *m).sum::<u32>();
            prop_assert_eq!(n, 1);
        }

        #[test]
        fn characters_multiply(a in su3_label(), b in su3_label(), params in prop::collection::vec(-1.5f64..1.5, 12)) {
            let g = random_su3(&params);
            let ph = eig_unitary(&g).unwrap().phases;
            let prod = irrep_character(&a, &ph).unwrap() * irrep_character(&b, &ph).unwrap();
            let sum: C64 = tensor_decompose(&a, &b).unwrap().iter()
                .map(|(l, m)| irrep_character(l, &ph).unwrap() * (*m as f64)).sum();
            prop_assert!((prod - sum).norm() < 1e-8 * (1.0 + prod.norm()));
        }

        #[test]
        fn su4_decomposition_preserves_dimension(a in prop::collection::vec(0u32..3, 3), b in prop::collection::vec(0u32..3, 3)) {
            let a = DynkinLabel::new(4, a).unwrap();
            let b = DynkinLabel::new(4, b).unwrap();
            let total: u128 = tensor_decompose(&a, &b).unwrap().iter().map(|(l, m)| weyl_dimension(l) * *m as u128).sum();
            prop_assert_eq!(total, weyl_dimension(&a) * weyl_dimension(&b));
        }
    }

    #[test]
    fn gell_mann_orthonormal_traceless() {
        let basis = gell_mann_basis();
        for (a, la) in basis.iter().enumerate() {
            assert!(la.trace().norm() < 1e-15);
            assert!((la - la.adjoint()).norm() < 1e-15);
            for (b, lb) in basis.iter().enumerate() {
                let want = if a == b { 2.0 } else { 0.0 };
                assert!((hs_inner(la, lb) - c64(want, 0.0)).norm() < 1e-14);
            }
        }
    }
}
