//! Representations of group elements on multi-site or collective spaces,
//! and the group average of operators.

use crate::mat::{c64, frobenius, kron_all, SymBasis, ComplexMatrix};
use crate::{Error, Result};

use super::catalog::su2_lift;
use super::FiniteGroup;

/// How one site sees a group element.
#[derive(Debug, Clone, PartialEq)]
pub enum Local {
    /// The element itself.
    Defining,
    /// Spin `two_j / 2` image of a real rotation.
    Spin { two_j: u32 },
}

/// One site: a local action, optionally conjugated (`Q† π Q`) and/or
/// complex-conjugated.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteRep {
    pub local: Local,
    pub conjugator: Option<ComplexMatrix>,
    pub dual: bool,
}

impl SiteRep {
    pub fn defining() -> Self {
        SiteRep { local: Local::Defining, conjugator: None, dual: false }
    }

    pub fn spin(two_j: u32) -> Self {
        SiteRep { local: Local::Spin { two_j }, conjugator: None, dual: false }
    }

    pub fn with_conjugator(mut self, q: ComplexMatrix) -> Self {
        self.conjugator = Some(q);
        self
    }

    pub fn dualized(mut self) -> Self {
        self.dual = true;
        self
    }

    fn local_dim(&self, d: usize) -> usize {
        match self.local {
            Local::Defining => d,
            Local::Spin { two_j } => two_j as usize + 1,
        }
    }
}

/// Representation of a matrix group on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// The matrices themselves.
    Defining,
    /// `g^{⊗n}`.
    Tensor(usize),
    /// Degree-`n` symmetric power of the defining space.
    Symmetric(usize),
    /// Integer or half-integer spin image of a real rotation.
    Spin { two_j: u32 },
    /// Independent per-site actions, tensored left to right.
    Sites(Vec<SiteRep>),
}

fn spin_image(g: &ComplexMatrix, basis: &SymBasis) -> Result<ComplexMatrix> {
    if g.shape() != (3, 3) {
        return Err(Error::DimensionMismatch("spin images need 3x3 rotations".into()));
    }
    Ok(basis.power(&su2_lift(g)))
}

impl Representation {
    /// Dimension of the representation space for `d × d` elements.
    pub fn dim(&self, d: usize) -> usize {
        match self {
            Representation::Defining => d,
            Representation::Tensor(n) => d.pow(*n as u32),
            Representation::Symmetric(n) => crate::mat::sym_dimension(d, *n),
            Representation::Spin { two_j } => *two_j as usize + 1,
            Representation::Sites(sites) => sites.iter().map(|s| s.local_dim(d)).product(),
        }
    }

    /// Images of many elements, sharing any basis set-up.
    pub fn images(&self, elements: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
        match self {
            Representation::Defining => Ok(elements.to_vec()),
            Representation::Tensor(n) => Ok(elements.iter().map(|g| kron_all(std::iter::repeat_n(g, *n))).collect()),
            Representation::Symmetric(n) => {
                let d = elements.first().map(|g| g.nrows()).unwrap_or(1);
                let basis = SymBasis::new(d, *n);
                Ok(elements.iter().map(|g| basis.power(g)).collect())
            }
            Representation::Spin { two_j } => {
                let basis = SymBasis::new(2, *two_j as usize);
                elements.iter().map(|g| spin_image(g, &basis)).collect()
            }
            Representation::Sites(sites) => {
                let bases: Vec<Option<SymBasis>> = sites
                    .iter()
                    .map(|s| match s.local {
                        Local::Spin { two_j } => Some(SymBasis::new(2, two_j as usize)),
                        Local::Defining => None,
                    })
                    .collect();
                elements
                    .iter()
                    .map(|g| {
                        let factors = sites
                            .iter()
                            .zip(&bases)
                            .map(|(s, b)| {
                                let mut m = match b {
                                    Some(b) => spin_image(g, b)?,
                                    None => g.clone(),
                                };
                                if let Some(q) = &s.conjugator {
                                    if q.shape() != m.shape() {
                                        return Err(Error::DimensionMismatch("site conjugator size".into()));
                                    }
                                    m = q.adjoint() * m * q;
                                }
                                if s.dual {
                                    m = m.conjugate();
                                }
                                Ok(m)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(kron_all(factors.iter()))
                    })
                    .collect()
            }
        }
    }

    pub fn image(&self, g: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.images(std::slice::from_ref(g))?.remove(0))
    }
}

/// Precomputed images for repeated group averages.
#[derive(Debug, Clone)]
pub struct Symmetrizer {
    images: Vec<ComplexMatrix>,
}

impl Symmetrizer {
    pub fn new(group: &FiniteGroup, rep: &Representation) -> Result<Self> {
        Ok(Symmetrizer { images: rep.images(group.elements())? })
    }

    pub fn from_images(images: Vec<ComplexMatrix>) -> Self {
        Symmetrizer { images }
    }

    pub fn dim(&self) -> usize {
        self.images.first().map(|m| m.nrows()).unwrap_or(0)
    }

    pub fn images(&self) -> &[ComplexMatrix] {
        &self.images
    }

    /// `(1/|G|) Σ_g π(g)† op π(g)`.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        if op.shape() != (self.dim(), self.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "operator {}x{} for a {}-dimensional representation",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        let mut acc = ComplexMatrix::zeros(op.nrows(), op.ncols());
        for p in &self.images {
            acc += p.adjoint() * op * p;
        }
        Ok(acc / c64(self.images.len() as f64, 0.0))
    }
}

/// Group average `(1/|G|) Σ_g π(g)† op π(g)`.
pub fn symmetrize(op: &ComplexMatrix, group: &FiniteGroup, rep: &Representation) -> Result<ComplexMatrix> {
    Symmetrizer::new(group, rep)?.apply(op)
}

/// Whether `π(g)† op π(g) = op` within `1e−8 · ‖op‖_F`.
pub fn is_symmetry_of(op: &ComplexMatrix, g: &ComplexMatrix, rep: &Representation) -> Result<bool> {
    let p = rep.image(g)?;
    if p.shape() != op.shape() {
        return Err(Error::DimensionMismatch("operator and representation sizes differ".into()));
    }
    let moved = p.adjoint() * op * &p;
    Ok(frobenius(&(moved - op)) <= 1e-8 * frobenius(op).max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::rotation;
    use crate::mat::{diag, identity, is_unitary};
    use proptest::prelude::*;

    #[test]
    fn dimensions() {
        assert_eq!(Representation::Tensor(3).dim(3), 27);
        assert_eq!(Representation::Symmetric(12).dim(3), 91);
        assert_eq!(Representation::Spin { two_j: 12 }.dim(3), 13);
        assert_eq!(Representation::Sites(vec![SiteRep::spin(2), SiteRep::spin(2)]).dim(3), 9);
    }

    #[test]
    fn spin_image_of_z_rotation_is_diagonal_in_m() {
        let theta = 0.7;
        let img = Representation::Spin { two_j: 2 }.image(&rotation([0.0, 0.0, 1.0], theta)).unwrap();
        let want = diag(&[
            crate::C64::from_polar(1.0, theta),
            c64(1.0, 0.0),
            crate::C64::from_polar(1.0, -theta),
        ]);
        assert!(frobenius(&(img - want)) < 1e-12);
    }

    #[test]
    fn symmetrize_identity_is_identity() {
        let g = FiniteGroup::builtin("Delta27", None).unwrap();
        let out = symmetrize(&identity(9), &g, &Representation::Tensor(2)).unwrap();
        assert!(frobenius(&(out - identity(9))) < 1e-12);
        assert!(symmetrize(&identity(4), &g, &Representation::Tensor(2)).is_err());
    }

    #[test]
    fn dual_site_is_complex_conjugate() {
        let r = rotation([1.0, 2.0, 0.5], 1.3);
        let std = Representation::Sites(vec![SiteRep::spin(2)]).image(&r).unwrap();
        let dual = Representation::Sites(vec![SiteRep::spin(2).dualized()]).image(&r).unwrap();
        assert!(frobenius(&(std.conjugate() - dual)) < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symmetrize_is_idempotent(entries in prop::collection::vec(-1.0f64..1.0, 162)) {
            let g = FiniteGroup::builtin("Delta12", None).unwrap();
            let s = Symmetrizer::new(&g, &Representation::Tensor(2)).unwrap();
            let op = ComplexMatrix::from_fn(9, 9, |i, j| c64(entries[i * 9 + j], entries[81 + i * 9 + j]));
            let once = s.apply(&op).unwrap();
            let twice = s.apply(&once).unwrap();
            prop_assert!(frobenius(&(twice - &once)) < 1e-10);
            for p in s.images() {
                prop_assert!(is_symmetry_of(&once, &p.clone(), &Representation::Defining).unwrap() || frobenius(&once) < 1e-12);
            }
        }

        #[test]
        fn spin_images_are_unitary_homomorphisms(ax in prop::collection::vec(-1.0f64..1.0, 6), a in 0.1f64..3.0, b in 0.1f64..3.0) {
            let r1 = rotation([ax[0], ax[1], ax[2] + 1.5], a);
            let r2 = rotation([ax[3] + 1.5, ax[4], ax[5]], b);
            let rep = Representation::Spin { two_j: 4 };
            let lhs = rep.image(&(&r1 * &r2)).unwrap();
            let rhs = rep.image(&r1).unwrap() * rep.image(&r2).unwrap();
            prop_assert!(is_unitary(&lhs));
            prop_assert!(frobenius(&(lhs - rhs)) < 1e-10);
        }
    }
}
