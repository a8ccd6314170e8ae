//! Dense complex matrices and the decompositions used throughout the crate.
//!
//! Matrices are plain `nalgebra::DMatrix<Complex64>`. Validation happens at the
//! entry points that need it (Hermitian input for exponentials, unitary input
//! for eigenphases) rather than through wrapper types.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Complex scalar used everywhere.
pub type C64 = Complex64;

/// Row/column dense complex matrix.
pub type ComplexMatrix = DMatrix<C64>;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 || entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, entries))
}

/// Row-major entries of a matrix.
pub fn to_row_major(m: &ComplexMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Row-major `[re, im]` pairs, the on-disk matrix encoding.
pub fn to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    to_row_major(m).into_iter().map(|z| [z.re, z.im]).collect()
}

/// Inverse of [`to_pairs`] for square matrices.
pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    let n = (pairs.len() as f64).sqrt().round() as usize;
    if n * n != pairs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} entries do not form a square matrix",
            pairs.len()
        )));
    }
    let entries: Vec<C64> = pairs.iter().map(|p| c64(p[0], p[1])).collect();
    from_rows(n, n, &entries)
}

/// Identity of size `n`.
pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Diagonal matrix from entries.
pub fn diag(entries: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

/// Frobenius norm.
pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Hilbert-Schmidt inner product `Tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `‖m − m†‖_F ≤ tol`.
pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && frobenius(&(m - m.adjoint())) <= tol
}

/// `‖U†U − 1‖_F ≤ 1e−10 · dim`.
pub fn is_unitary(m: &ComplexMatrix) -> bool {
    m.is_square() && frobenius(&(m.adjoint() * m - identity(m.nrows()))) <= 1e-10 * m.nrows() as f64
}

fn require_square(m: &ComplexMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn require_hermitian(h: &ComplexMatrix) -> Result<()> {
    require_square(h, "Hermitian input")?;
    let scale = frobenius(h).max(1.0);
    let dev = frobenius(&(h - h.adjoint()));
    if dev > 1e-10 * scale {
        return Err(Error::NonHermitianInput(dev));
    }
    Ok(())
}

fn require_unitary(u: &ComplexMatrix) -> Result<()> {
    require_square(u, "unitary input")?;
    if !is_unitary(u) {
        let dev = frobenius(&(u.adjoint() * u - identity(u.nrows())));
        return Err(Error::NonUnitary(dev));
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<'a, I>(factors: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut acc = identity(1);
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

/// `m` acting on site `site` of `n_sites` identical sites of dimension `d`.
pub fn embed_site(m: &ComplexMatrix, site: usize, n_sites: usize) -> ComplexMatrix {
    let d = m.nrows();
    let id = identity(d);
    let factors: Vec<&ComplexMatrix> = (0..n_sites).map(|k| if k == site { m } else { &id }).collect();
    kron_all(factors)
}

/// Spectral data of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V†` for a scalar function applied to the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.vectors;
        let mut scaled = v.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fl = f(lam);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= fl);
        }
        scaled * v.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen> {
    require_hermitian(h)?;
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym.clone());
    let (mut values, mut vectors): (Vec<f64>, ComplexMatrix) = (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors);
    let tol = 1e-11 * frobenius(&sym).max(1.0);
    if reconstruction_error(&sym, &values, &vectors) > tol {
        (values, vectors) = jacobi_eigh(&sym);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted = order.iter().map(|&k| values[k]).collect();
    let vectors = ComplexMatrix::from_fn(h.nrows(), h.nrows(), |i, j| vectors[(i, order[j])]);
    Ok(HermitianEigen { values: sorted, vectors })
}

fn reconstruction_error(h: &ComplexMatrix, values: &[f64], vectors: &ComplexMatrix) -> f64 {
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= lam);
    }
    frobenius(&(scaled * vectors.adjoint() - h))
}

/// Cyclic Jacobi sweeps for a Hermitian matrix.
///
/// Fallback for inputs where the implicit QR iteration loses accuracy on
/// clustered spectra.
fn jacobi_eigh(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.nrows();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n, n);
    let scale = frobenius(h).max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].norm_sqr()).sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Rotation zeroing a[p][q]: phase-strip then a real Jacobi rotation.
                let phase = apq / mag;
                let theta = 0.5 * (2.0 * mag).atan2(a[(q, q)].re - a[(p, p)].re);
                let (s, c) = theta.sin_cos();
                let cp = C64::new(c, 0.0);
                let sp = phase * s;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * cp - akq * sp.conj();
                    a[(k, q)] = akp * sp + akq * cp;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * cp - aqk * sp;
                    a[(q, k)] = apk * sp.conj() + aqk * cp;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * cp - vkq * sp.conj();
                    v[(k, q)] = vkp * sp + vkq * cp;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// `exp(−i t H)` for Hermitian `H`.
pub fn expm_skew(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    Ok(eig.apply(|lam| C64::from_polar(1.0, -t * lam)))
}

/// Eigenphases in (−π, π] and orthonormal eigenvectors of a unitary.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Wraps an angle into (−π, π].
pub fn wrap_phase(p: f64) -> f64 {
    let mut q = p.rem_euclid(2.0 * PI);
    if q > PI {
        q -= 2.0 * PI;
    }
    q
}

/// Eigendecomposition of a unitary from Hermitian eigenproblems.
///
/// A generic rotation of the real part separates most phases; each cluster
/// of nearly equal values is re-centred on its mean phase and split by the
/// imaginary part, which resolves spacings down to rounding level.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<UnitaryEigen> {
    require_unitary(u)?;
    let n = u.nrows();
    let rot = C64::from_polar(1.0, -0.6180339887498949);
    let k = (u * rot + u.adjoint() * rot.conj()).scale(0.5);
    let first = eigh(&k)?;
    let mut vectors = first.vectors.clone();
    let mut phases = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && first.values[end] - first.values[end - 1] < 1e-6 {
            end += 1;
        }
        let block = first.vectors.columns(start, end - start).into_owned();
        let sub = block.adjoint() * u * &block;
        let tr = sub.trace();
        let centre = if tr.norm() > 1e-3 { tr / tr.norm() } else { C64::from_polar(1.0, sub[(0, 0)].arg()) };
        let s = &sub * centre.conj();
        let im = (&s - s.adjoint()) * c64(0.0, -0.5);
        let second = eigh(&im)?;
        let rotated = &block * &second.vectors;
        for j in 0..end - start {
            let v = rotated.column(j);
            let w = second.vectors.column(j);
            let q = (w.adjoint() * &s * w)[(0, 0)];
            phases[start + j] = wrap_phase(centre.arg() + q.arg());
            vectors.set_column(start + j, &v);
        }
        start = end;
    }
    let recon = &vectors * diag(&phases.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>()) * vectors.adjoint();
    if max_abs(&(recon - u)) > 1e-9 {
        // Phase pairs mirrored about the rotation axis at quarter turns.
        let (q, t) = nalgebra::Schur::new(u.clone()).unpack();
        let phases = (0..n).map(|k| wrap_phase(t[(k, k)].arg())).collect();
        return Ok(UnitaryEigen { phases, vectors: q });
    }
    Ok(UnitaryEigen { phases, vectors })
}

/// Hermitian generator `G` with `u = exp(−i G)`, using eigenphases in (−π, π].
pub fn principal_generator(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_unitary(u)?;
    let v = &eig.vectors;
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        eig.phases.len(),
        eig.phases.iter().map(|&p| c64(-p, 0.0)),
    ));
    let g = v * d * v.adjoint();
    Ok((&g + g.adjoint()).scale(0.5))
}

/// True when `b = e^{iφ} a` for some phase, entrywise within `tol`.
///
/// The phase is read off the largest-modulus entry of `a`.
pub fn equal_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let (mut best, mut idx) = (0.0, 0);
    for (k, z) in a.iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            idx = k;
        }
    }
    if best <= tol {
        return max_abs(b) <= tol;
    }
    let ratio = b[idx] / a[idx];
    if ratio.norm() < 1e-300 {
        return false;
    }
    let phase = ratio / ratio.norm();
    a.iter().zip(b.iter()).all(|(x, y)| (y - phase * x).norm() <= tol)
}

/// Monomial basis of the degree-`n` symmetric power of `C^d`.
///
/// Exponent vectors are ordered lexicographically (ascending), so for `d = 2`
/// the basis runs from `(0, n)` to `(n, 0)`.
#[derive(Debug, Clone)]
pub struct SymBasis {
    pub d: usize,
    pub n: usize,
    pub monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    log_fact: Vec<f64>,
}

fn compositions(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(d, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, n, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `C(n + d − 1, d − 1)`.
pub fn sym_dimension(d: usize, n: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..d as u128 {
        acc = acc * (n as u128 + k) / k;
    }
    acc as usize
}

impl SymBasis {
    pub fn new(d: usize, n: usize) -> Self {
        let monomials = compositions(d, n);
        let index = monomials.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        let mut log_fact = vec![0.0; n + 2];
        for k in 1..log_fact.len() {
            log_fact[k] = log_fact[k - 1] + (k as f64).ln();
        }
        SymBasis { d, n, monomials, index, log_fact }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, exps: &[usize]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    fn log_fact_prod(&self, exps: &[usize]) -> f64 {
        exps.iter().map(|&k| self.log_fact[k]).sum()
    }

    /// Image of `m` on the symmetric power.
    pub fn power(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d = self.d;
        let dim = self.dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        if self.n == 0 {
            out[(0, 0)] = c64(1.0, 0.0);
            return out;
        }
        // Columns of m as linear forms; expand the product of forms selected by
        // each source monomial.
        let mut poly: HashMap<Vec<usize>, C64> = HashMap::new();
        let mut next: HashMap<Vec<usize>, C64> = HashMap::new();
        for (l, src) in self.monomials.iter().enumerate() {
            poly.clear();
            poly.insert(vec![0; d], c64(1.0, 0.0));
            for (j, &count) in src.iter().enumerate() {
                for _ in 0..count {
                    next.clear();
                    for (mono, coef) in poly.iter() {
                        for i in 0..d {
                            let a = m[(i, j)];
                            if a == C64::default() {
                                continue;
                            }
                            let mut key = mono.clone();
                            key[i] += 1;
                            *next.entry(key).or_default() += coef * a;
                        }
                    }
                    std::mem::swap(&mut poly, &mut next);
                }
            }
            let src_lf = self.log_fact_prod(src);
            for (mono, coef) in poly.iter() {
                let k = self.index[mono];
                let scale = (0.5 * (self.log_fact_prod(mono) - src_lf)).exp();
                out[(k, l)] = coef * scale;
            }
        }
        out
    }

    /// Derivative of [`SymBasis::power`] at the identity along `a`.
    ///
    /// This is the collective one-body operator `Σ_sites a^{(site)}`
    /// restricted to the symmetric subspace.
    pub fn derivation(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let d = self.d;
        let dim = self.dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (l, src) in self.monomials.iter().enumerate() {
            for j in 0..d {
                if src[j] == 0 {
                    continue;
                }
                for i in 0..d {
                    let aij = a[(i, j)];
                    if aij == C64::default() {
                        continue;
                    }
                    let mut tgt = src.clone();
                    tgt[j] -= 1;
                    tgt[i] += 1;
                    let k = self.index[&tgt];
                    let scale = (0.5 * (self.log_fact_prod(&tgt) - self.log_fact_prod(src))).exp();
                    out[(k, l)] += aij * (src[j] as f64) * scale;
                }
            }
        }
        out
    }
}

/// Image of `m` on the degree-`n` symmetric power of its defining space.
pub fn sym_power(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    require_square(m, "symmetric power input")?;
    Ok(SymBasis::new(m.nrows(), n).power(m))
}

/// Collective one-body operator on the degree-`n` symmetric power.
pub fn sym_power_derivation(a: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    require_square(a, "symmetric power input")?;
    Ok(SymBasis::new(a.nrows(), n).derivation(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn random_hermitian(d: usize, seed: &[f64]) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(d, d);
        let mut k = 0;
        for i in 0..d {
            for j in i..d {
                let re = seed[k % seed.len()];
                let im = if i == j { 0.0 } else { seed[(k + 1) % seed.len()] };
                k += 2;
                h[(i, j)] = c64(re, im);
                h[(j, i)] = c64(re, -im);
            }
        }
        h
    }

    #[test]
    fn jacobi_diagonalizes_clustered_spectrum() {
        let a = random_hermitian(3, &[0.3, -0.7, 1.1, 0.2, -0.4, 0.9]);
        let one = identity(3);
        let h = a.kronecker(&one).kronecker(&one) + one.kronecker(&a).kronecker(&one) + one.kronecker(&one).kronecker(&a);
        let (values, vectors) = jacobi_eigh(&h);
        assert!(reconstruction_error(&h, &values, &vectors) < 1e-12);
        assert!(frobenius(&(vectors.adjoint() * &vectors - identity(27))) < 1e-12);
    }

    // Truncated Taylor series with scaling and squaring, independent of the
    // eigendecomposition route.
    fn taylor_expm(a: &ComplexMatrix) -> ComplexMatrix {
        let norm = frobenius(a);
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let b = a.scale(1.0 / 2f64.powi(s));
        let mut term = identity(a.nrows());
        let mut acc = identity(a.nrows());
        for k in 1..30 {
            term = &term * &b / c64(k as f64, 0.0);
            acc += &term;
        }
        for _ in 0..s {
            acc = &acc * &acc;
        }
        acc
    }

    fn naive_kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
        let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                for k in 0..br {
                    for l in 0..bc {
                        out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    // Complete homogeneous symmetric polynomial by brute-force enumeration.
    fn h_brute(xs: &[C64], n: usize) -> C64 {
        compositions(xs.len(), n)
            .iter()
            .map(|e| e.iter().zip(xs).map(|(&k, x)| x.powu(k as u32)).product::<C64>())
            .sum()
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c64(i as f64 + 1.0, j as f64 - 0.5));
        let b = ComplexMatrix::from_fn(3, 2, |i, j| c64(0.3 * j as f64, i as f64));
        assert!(frobenius(&(kron(&a, &b) - naive_kron(&a, &b))) < 1e-14);
    }

    #[test]
    fn expm_matches_taylor() {
        let h = random_hermitian(4, &[0.3, -1.2, 0.7, 2.1, -0.4, 0.9, 1.5]);
        let u = expm_skew(&h, 0.8).unwrap();
        let minus_i_t = c64(0.0, -0.8);
        let reference = taylor_expm(&h.map(|z| z * minus_i_t));
        assert!(frobenius(&(u - reference)) < 1e-12);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let mut m = identity(2);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(matches!(expm_skew(&m, 1.0), Err(Error::NonHermitianInput(_))));
    }

    #[test]
    fn eig_unitary_diagonal_and_center() {
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let u = diag(&[c64(1.0, 0.0), w, w.conj()]);
        let mut ph = eig_unitary(&u).unwrap().phases;
        ph.sort_by(f64::total_cmp);
        assert!((ph[0] + 2.0 * PI / 3.0).abs() < 1e-12);
        assert!(ph[1].abs() < 1e-12);
        assert!((ph[2] - 2.0 * PI / 3.0).abs() < 1e-12);

        let centre = identity(3).map(|z| z * w);
        let eig = eig_unitary(&centre).unwrap();
        assert!(eig.phases.iter().all(|p| (p - 2.0 * PI / 3.0).abs() < 1e-12));
        assert!(is_unitary(&eig.vectors));
    }

    #[test]
    fn eig_unitary_minus_one_maps_to_pi() {
        let u = identity(2).map(|z| -z);
        assert!(eig_unitary(&u).unwrap().phases.iter().all(|p| (p - PI).abs() < 1e-12));
    }

    #[test]
    fn eig_unitary_resolves_tiny_spreads() {
        let base = [0.3, 0.3 + 2e-11, 0.3 - 5e-12, 0.3, 0.3 + 1e-9];
        let f = nalgebra::DMatrix::<C64>::from_fn(5, 5, |i, j| c64((i * 7 + j * 3) as f64 % 5.0, (i + 2 * j) as f64 % 3.0));
        let q = f.qr().q();
        let u = &q * diag(&base.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>()) * q.adjoint();
        let mut ph = eig_unitary(&u).unwrap().phases;
        ph.sort_by(f64::total_cmp);
        let mut want = base.to_vec();
        want.sort_by(f64::total_cmp);
        for (a, b) in ph.iter().zip(&want) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn eig_unitary_mirrored_quarter_turns() {
        let a = 0.6180339887498949;
        let ps = [a + FRAC_PI_2, a - FRAC_PI_2, 1.0];
        let u = diag(&ps.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>());
        let eig = eig_unitary(&u).unwrap();
        let recon = &eig.vectors * diag(&eig.phases.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>()) * eig.vectors.adjoint();
        assert!(max_abs(&(recon - u)) < 1e-12);
    }

    #[test]
    fn sym_power_of_diagonal_spin_half() {
        // exp(−iθσz/2) raised to degree 2j gives exp(−imθ), m = −j..j ascending.
        let theta = 0.37;
        let u = diag(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)]);
        let s = sym_power(&u, 4).unwrap();
        for (k, m) in (-2i32..=2).enumerate() {
            assert!((s[(k, k)] - C64::from_polar(1.0, -(m as f64) * theta)).norm() < 1e-13);
        }
    }

    #[test]
    fn sym_power_dimension() {
        assert_eq!(sym_power(&identity(3), 12).unwrap().nrows(), 91);
        assert_eq!(sym_dimension(3, 12), 91);
        assert_eq!(sym_dimension(2, 24), 25);
        assert_eq!(SymBasis::new(3, 2).monomials[0], vec![0, 0, 2]);
    }

    #[test]
    fn derivation_matches_finite_difference() {
        let a = random_hermitian(3, &[0.2, 0.5, -0.9, 1.1, 0.3]);
        let basis = SymBasis::new(3, 3);
        let eps = 1e-6;
        let plus = basis.power(&expm_skew(&a, -eps).unwrap());
        let minus = basis.power(&expm_skew(&a, eps).unwrap());
        let fd = (plus - minus).map(|z| z / c64(0.0, 2.0 * eps));
        assert!(frobenius(&(fd - basis.derivation(&a))) < 1e-7);
    }

    #[test]
    fn equal_up_to_phase_detects_phase() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c64(i as f64 + 0.5, j as f64));
        let b = a.map(|z| z * C64::from_polar(1.0, 1.1));
        assert!(equal_up_to_phase(&a, &b, 1e-12));
        let mut c = b.clone();
        c[(0, 0)] += c64(1e-6, 0.0);
        assert!(!equal_up_to_phase(&a, &c, 1e-9));
    }

    #[test]
    fn pairs_round_trip() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c64(i as f64, -(j as f64)));
        assert_eq!(from_pairs(&to_pairs(&a)).unwrap(), a);
        assert!(from_pairs(&[[1.0, 0.0]; 3]).is_err());
    }

    fn unitary_from(params: &[f64], d: usize) -> ComplexMatrix {
        expm_skew(&random_hermitian(d, params), 1.0).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn expm_is_a_one_parameter_group(p in prop::collection::vec(-2.0f64..2.0, 9), t1 in -1.5f64..1.5, t2 in -1.5f64..1.5) {
            let h = random_hermitian(3, &p);
            let lhs = expm_skew(&h, t1).unwrap() * expm_skew(&h, t2).unwrap();
            let rhs = expm_skew(&h, t1 + t2).unwrap();
            prop_assert!(frobenius(&(lhs - rhs)) < 1e-11);
        }

        #[test]
        fn sym_power_is_a_homomorphism(p in prop::collection::vec(-2.0f64..2.0, 9), q in prop::collection::vec(-2.0f64..2.0, 9), n in 0usize..5) {
            let a = unitary_from(&p, 3);
            let b = unitary_from(&q, 3);
            let basis = SymBasis::new(3, n);
            let lhs = basis.power(&(&a * &b));
            let rhs = basis.power(&a) * basis.power(&b);
            prop_assert!(frobenius(&(lhs - rhs)) < 1e-10);
            prop_assert!(is_unitary(&basis.power(&a)));
        }

        #[test]
        fn eig_unitary_reconstructs(p in prop::collection::vec(-2.0f64..2.0, 9)) {
            let u = unitary_from(&p, 3);
            let eig = eig_unitary(&u).unwrap();
            let d = diag(&eig.phases.iter().map(|&x| C64::from_polar(1.0, x)).collect::<Vec<_>>());
            let rebuilt = &eig.vectors * d * eig.vectors.adjoint();
            prop_assert!(frobenius(&(rebuilt - &u)) < 1e-10);
            prop_assert!(eig.phases.iter().all(|&x| x > -PI && x <= PI));
        }

        #[test]
        fn sym_power_trace_is_complete_homogeneous(p in prop::collection::vec(-2.0f64..2.0, 9), n in 0usize..6) {
            let u = unitary_from(&p, 3);
            let xs: Vec<C64> = eig_unitary(&u).unwrap().phases.iter().map(|&x| C64::from_polar(1.0, x)).collect();
            let tr = sym_power(&u, n).unwrap().trace();
            prop_assert!((tr - h_brute(&xs, n)).norm() < 1e-9);
        }

        #[test]
        fn principal_generator_inverts_exponential(p in prop::collection::vec(-1.0f64..1.0, 9)) {
            let h = random_hermitian(3, &p).scale(0.5);
            let u = expm_skew(&h, 1.0).unwrap();
            let g = principal_generator(&u).unwrap();
            prop_assert!(frobenius(&(expm_skew(&g, 1.0).unwrap() - u)) < 1e-10);
        }
    }
}
