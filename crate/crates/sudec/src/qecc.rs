//! Codes carried by one-dimensional symmetry sectors of finite groups.
//!
//! A codespace is the multiplicity space of a single one-dimensional
//! character inside an ambient representation (a spin-`j` space, the
//! symmetric subspace of `N` qudits, or a full register). Knill–Laflamme
//! conditions are checked directly on the extracted codewords.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, GroupKind, Representation};
use crate::lie::{complete_homogeneous, gell_mann, su2_character};
use crate::mat::{c64, eigh, frobenius, identity, max_abs, SymBasis, ComplexMatrix, C64};
use crate::sim::spin_operators;
use crate::{Error, Result};

/// The space the code lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AmbientSpace {
    /// Integer spin `j`, acted on by rotation groups.
    Spin { j: u32 },
    /// Symmetric subspace of `n` qudits of dimension `d`.
    SymmetricQudits { d: usize, n: usize },
    /// All of `(ℂ^d)^{⊗n}`.
    FullRegister { d: usize, n: usize },
}

impl AmbientSpace {
    /// Spin ambient from `2j`; half-integer spins carry no one-dimensional sectors.
    pub fn spin_from_two_j(two_j: u32) -> Result<Self> {
        if !two_j.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("spin {two_j}/2 is not an integer")));
        }
        Ok(AmbientSpace::Spin { j: two_j / 2 })
    }

    pub fn dimension(&self) -> usize {
        match *self {
            AmbientSpace::Spin { j } => 2 * j as usize + 1,
            AmbientSpace::SymmetricQudits { d, n } => crate::mat::sym_dimension(d, n),
            AmbientSpace::FullRegister { d, n } => d.pow(n as u32),
        }
    }

    pub fn representation(&self) -> Representation {
        match *self {
            AmbientSpace::Spin { j } => Representation::Spin { two_j: 2 * j },
            AmbientSpace::SymmetricQudits { n, .. } => Representation::Symmetric(n),
            AmbientSpace::FullRegister { n, .. } => Representation::Tensor(n),
        }
    }

    fn check_group(&self, g: &FiniteGroup) -> Result<()> {
        match *self {
            AmbientSpace::Spin { .. } if g.kind() != GroupKind::Rotation => {
                Err(Error::DimensionMismatch(format!("{} is not a rotation group", g.name())))
            }
            AmbientSpace::SymmetricQudits { d, .. } | AmbientSpace::FullRegister { d, .. } if g.d() != d => {
                Err(Error::DimensionMismatch(format!("{} acts on dimension {}, ambient qudits have {d}", g.name(), g.d())))
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AmbientSpace::Spin { j } => write!(f, "spin-{j}"),
            AmbientSpace::SymmetricQudits { d, n } => write!(f, "sym({n} x d={d})"),
            AmbientSpace::FullRegister { d, n } => write!(f, "register({n} x d={d})"),
        }
    }
}

/// Character of the ambient representation at a group element.
pub fn space_character(a: &AmbientSpace, g: &ComplexMatrix) -> Result<C64> {
    match *a {
        AmbientSpace::Spin { j } => {
            if g.shape() != (3, 3) {
                return Err(Error::DimensionMismatch("spin ambients need 3x3 rotations".into()));
            }
            let theta = crate::lie::rotation_angle_from_trace(g.trace().re);
            Ok(c64(su2_character(j, theta), 0.0))
        }
        AmbientSpace::SymmetricQudits { d, n } => {
            if g.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!("expected a {d}x{d} element")));
            }
            let xs: Vec<C64> = crate::mat::eig_unitary(g)?.phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
            Ok(complete_homogeneous(&xs, n)[n])
        }
        AmbientSpace::FullRegister { d, n } => {
            if g.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!("expected a {d}x{d} element")));
            }
            Ok(g.trace().powi(n as i32))
        }
    }
}

/// Multiplicity of a one-dimensional character (values per class) in an ambient space.
pub fn sector_multiplicity(group: &FiniteGroup, chi: &[C64], a: &AmbientSpace) -> Result<u64> {
    a.check_group(group)?;
    if chi.len() != group.classes().len() {
        return Err(Error::DimensionMismatch(format!("{} character values for {} classes", chi.len(), group.classes().len())));
    }
    let mut sum = c64(0.0, 0.0);
    for (class, x) in group.classes().iter().zip(chi) {
        sum += x.conj() * space_character(a, group.element(class[0]))? * class.len() as f64;
    }
    let m = sum / group.order() as f64;
    let r = m.re.round();
    let residual = (m - c64(r, 0.0)).norm();
    if residual > 1e-6 || r < 0.0 {
        return Err(Error::NonIntegerMultiplicity(residual));
    }
    Ok(r as u64)
}

/// One line of a multiplicity scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub parameter: usize,
    pub character_index: usize,
    pub multiplicity: u64,
}

/// Family of ambients indexed by one integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmbientFamily {
    /// Spin `j` for each `j` in the range.
    Spin,
    /// Symmetric subspace of `N` qudits of the group's dimension.
    SymmetricQudits,
}

impl AmbientFamily {
    pub fn member(self, group: &FiniteGroup, p: usize) -> AmbientSpace {
        match self {
            AmbientFamily::Spin => AmbientSpace::Spin { j: p as u32 },
            AmbientFamily::SymmetricQudits => AmbientSpace::SymmetricQudits { d: group.d(), n: p },
        }
    }
}

/// Multiplicities of every one-dimensional character over a parameter range.
pub fn multiplicity_scan(
    group: &FiniteGroup,
    family: AmbientFamily,
    range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<ScanRow>> {
    let chars = group.one_dim_characters()?;
    let params: Vec<usize> = range.collect();
    let per_param: Vec<Vec<ScanRow>> = params
        .par_iter()
        .map(|&p| {
            let a = family.member(group, p);
            chars
                .iter()
                .enumerate()
                .map(|(ci, chi)| Ok(ScanRow { parameter: p, character_index: ci, multiplicity: sector_multiplicity(group, chi, &a)? }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_param.into_iter().flatten().collect())
}

/// Index of the trivial character in [`FiniteGroup::one_dim_characters`] order.
pub fn trivial_character_index(chars: &[Vec<C64>]) -> usize {
    chars
        .iter()
        .position(|c| c.iter().all(|x| (x - c64(1.0, 0.0)).norm() < 1e-9))
        .expect("the trivial character is always present")
}

/// `(1/|G|) Σ_g conj(χ(g)) π(g)` on the ambient space.
pub fn codespace_projector(group: &FiniteGroup, chi: &[C64], a: &AmbientSpace) -> Result<ComplexMatrix> {
    a.check_group(group)?;
    if chi.len() != group.classes().len() {
        return Err(Error::DimensionMismatch(format!("{} character values for {} classes", chi.len(), group.classes().len())));
    }
    let rep = a.representation();
    let values = group.expand_class_function(chi);
    let images: Vec<ComplexMatrix> = group
        .elements()
        .par_iter()
        .map(|g| rep.image(g))
        .collect::<Result<_>>()?;
    let n = a.dimension();
    let mut p = ComplexMatrix::zeros(n, n);
    for (img, x) in images.iter().zip(&values) {
        p += img * x.conj();
    }
    p /= c64(group.order() as f64, 0.0);
    let dev = max_abs(&(&p * &p - &p)).max(max_abs(&(&p - p.adjoint())));
    if dev > 1e-9 {
        return Err(Error::NonIdempotent(dev));
    }
    Ok(p)
}

/// Orthonormal eigenvectors of a projector with eigenvalue near one.
///
/// Each column's first component of magnitude above `1e−6` is made real
/// and positive.
pub fn extract_codewords(projector: &ComplexMatrix, k_expected: usize) -> Result<ComplexMatrix> {
    let eig = eigh(projector)?;
    let keep: Vec<usize> = (0..eig.values.len()).rev().filter(|&i| eig.values[i] >= 1.0 - 1e-6).collect();
    if keep.len() != k_expected {
        return Err(Error::RankMismatch { expected: k_expected, found: keep.len() });
    }
    let mut out = ComplexMatrix::zeros(projector.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let mut v = eig.vectors.column(i).into_owned();
        if let Some(z) = v.iter().find(|z| z.norm() > 1e-6).copied() {
            v *= z.conj() / z.norm();
        }
        out.set_column(c, &v);
    }
    Ok(out)
}

/// Codewords of one character sector, with the data needed to check them.
#[derive(Debug, Clone)]
pub struct CodeSpace {
    pub ambient: AmbientSpace,
    pub group: FiniteGroup,
    pub character_index: usize,
    /// Character values per class.
    pub character: Vec<C64>,
    /// Orthonormal columns.
    pub codewords: ComplexMatrix,
}

impl CodeSpace {
    /// Projects onto sector `character_index` and extracts `k_expected` codewords.
    pub fn build(group: &FiniteGroup, character_index: usize, ambient: AmbientSpace, k_expected: usize) -> Result<Self> {
        let chars = group.one_dim_characters()?;
        let character = chars
            .get(character_index)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("{} has {} one-dimensional characters", group.name(), chars.len())))?;
        let p = codespace_projector(group, &character, &ambient)?;
        let codewords = extract_codewords(&p, k_expected)?;
        Ok(CodeSpace { ambient, group: group.clone(), character_index, character, codewords })
    }

    pub fn k(&self) -> usize {
        self.codewords.ncols()
    }

    /// `max_g ‖π(g)|ψ⟩ − χ(g)|ψ⟩‖` over elements and codewords.
    pub fn symmetry_residual(&self) -> Result<f64> {
        let rep = self.ambient.representation();
        let values = self.group.expand_class_function(&self.character);
        let mut worst: f64 = 0.0;
        for (g, x) in self.group.elements().iter().zip(&values) {
            let moved = rep.image(g)? * &self.codewords;
            worst = worst.max(frobenius(&(moved - &self.codewords * *x)));
        }
        Ok(worst)
    }

    /// Codewords as columns in the `[re, im]` pair encoding.
    pub fn codeword_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.k()).map(|c| self.codewords.column(c).iter().map(|z| [z.re, z.im]).collect()).collect()
    }
}

/// Named error families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ErrorKind {
    /// The identity alone.
    Identity,
    /// Collective `S_z, S₊, S₋`.
    SpinLinear,
    /// Collective `S_z`.
    Dephasing,
    /// Spin-linear terms plus the collective restriction `3(r̂·S)² − S²` of a
    /// dipolar coupling for each axis.
    Dipolar { axes: Vec<[f64; 3]> },
    /// Collective images of all eight Gell-Mann matrices.
    QutritSingle,
    /// Collective images of the diagonal Gell-Mann matrices.
    QutritDephasing,
}

impl ErrorKind {
    /// Parses `identity`, `spin-linear`, `dephasing`, `dipolar` (z axis),
    /// `qutrit-single`, `qutrit-dephasing`.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => ErrorKind::Identity,
            "spin-linear" => ErrorKind::SpinLinear,
            "dephasing" => ErrorKind::Dephasing,
            "dipolar" => ErrorKind::Dipolar { axes: vec![[0.0, 0.0, 1.0]] },
            "qutrit-single" => ErrorKind::QutritSingle,
            "qutrit-dephasing" => ErrorKind::QutritDephasing,
            other => return Err(Error::InvalidInput(format!("unknown error kind {other}"))),
        })
    }
}

/// A labelled error operator.
#[derive(Debug, Clone)]
pub struct ErrorOp {
    pub label: String,
    pub matrix: ComplexMatrix,
}

/// `[S_z, S₊, S₋, S·S]` on spin `two_j / 2`.
fn spin_ladder(two_j: u32) -> [ComplexMatrix; 4] {
    let [sx, sy, sz] = spin_operators(two_j);
    let i = c64(0.0, 1.0);
    let sp = &sx + &sy * i;
    let sm = &sx - &sy * i;
    let casimir = &sx * &sx + &sy * &sy + &sz * &sz;
    [sz, sp, sm, casimir]
}

/// Error operators of a family on an ambient space.
pub fn error_set(kind: &ErrorKind, a: &AmbientSpace) -> Result<Vec<ErrorOp>> {
    let op = |label: &str, m: ComplexMatrix| ErrorOp { label: label.to_string(), matrix: m };
    let spin_only = |a: &AmbientSpace| match *a {
        AmbientSpace::Spin { j } => Ok(2 * j),
        _ => Err(Error::InvalidInput(format!("{kind:?} errors need a spin ambient"))),
    };
    let qutrit_only = |a: &AmbientSpace| match *a {
        AmbientSpace::SymmetricQudits { d: 3, n } => Ok(SymBasis::new(3, n)),
        _ => Err(Error::InvalidInput(format!("{kind:?} errors need a symmetric qutrit ambient"))),
    };
    Ok(match kind {
        ErrorKind::Identity => vec![op("1", identity(a.dimension()))],
        ErrorKind::SpinLinear => {
            let [sz, sp, sm, _] = spin_ladder(spin_only(a)?);
            vec![op("Sz", sz), op("S+", sp), op("S-", sm)]
        }
        ErrorKind::Dephasing => {
            let [sz, ..] = spin_ladder(spin_only(a)?);
            vec![op("Sz", sz)]
        }
        ErrorKind::Dipolar { axes } => {
            let two_j = spin_only(a)?;
            let [sx, sy, _] = spin_operators(two_j);
            let [sz, sp, sm, casimir] = spin_ladder(two_j);
            let mut out = vec![op("Sz", sz.clone()), op("S+", sp), op("S-", sm)];
            for (k, r) in axes.iter().enumerate() {
                let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                if norm < 1e-12 {
                    return Err(Error::InvalidInput("dipolar axis has zero length".into()));
                }
                let s = (&sx * c64(r[0], 0.0) + &sy * c64(r[1], 0.0) + &sz * c64(r[2], 0.0)) / c64(norm, 0.0);
                out.push(op(&format!("D{k}"), &s * &s * c64(3.0, 0.0) - &casimir));
            }
            out
        }
        ErrorKind::QutritSingle => {
            let basis = qutrit_only(a)?;
            (1..=8).map(|k| op(&format!("L{k}"), basis.derivation(&gell_mann(k)))).collect()
        }
        ErrorKind::QutritDephasing => {
            let basis = qutrit_only(a)?;
            [3, 8].iter().map(|&k| op(&format!("L{k}"), basis.derivation(&gell_mann(k)))).collect()
        }
    })
}

/// `{E_p† E_q}` over all ordered pairs.
pub fn squared_set(errors: &[ErrorOp]) -> Vec<ErrorOp> {
    let mut out = Vec::with_capacity(errors.len() * errors.len());
    for p in errors {
        for q in errors {
            out.push(ErrorOp { label: format!("{}^†·{}", p.label, q.label), matrix: p.matrix.adjoint() * &q.matrix });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KlMode {
    /// Conditions on `ℰ`.
    Detect,
    /// Conditions on `ℰ ∪ ℰ²`.
    Correct,
}

/// Outcome for one operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorReport {
    pub label: String,
    /// Mean diagonal element, `[re, im]`.
    pub constant: [f64; 2],
    /// Largest off-diagonal modulus relative to `‖F‖_F`.
    pub offdiag: f64,
    /// Largest difference of diagonal elements relative to `‖F‖_F`.
    pub diag_spread: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KlReport {
    pub ambient: AmbientSpace,
    pub group: String,
    pub character_index: usize,
    pub k: usize,
    pub mode: KlMode,
    /// Maxima of the relative per-operator values.
    pub max_offdiag: f64,
    pub max_diag_spread: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub per_operator: Vec<OperatorReport>,
}

/// Default relative tolerance for [`kl_check`].
pub const KL_TOLERANCE: f64 = 1e-8;

/// Knill–Laflamme conditions: every checked operator restricted to the code
/// is a multiple of the identity.
pub fn kl_check(code: &CodeSpace, errors: &[ErrorOp], mode: KlMode, tolerance: f64) -> KlReport {
    let mut ops: Vec<ErrorOp> = errors.to_vec();
    if mode == KlMode::Correct {
        ops.extend(squared_set(errors));
    }
    let c = &code.codewords;
    let k = code.k();
    let per_operator: Vec<OperatorReport> = ops
        .par_iter()
        .map(|f| {
            let b = c.adjoint() * &f.matrix * c;
            let scale = frobenius(&f.matrix).max(f64::MIN_POSITIVE);
            let mut off: f64 = 0.0;
            let mut spread: f64 = 0.0;
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        off = off.max(b[(i, j)].norm());
                    }
                    spread = spread.max((b[(i, i)] - b[(j, j)]).norm());
                }
            }
            let mean = (0..k).map(|i| b[(i, i)]).sum::<C64>() / k.max(1) as f64;
            let (off, spread) = (off / scale, spread / scale);
            OperatorReport {
                label: f.label.clone(),
                constant: [mean.re, mean.im],
                offdiag: off,
                diag_spread: spread,
                pass: off < tolerance && spread < tolerance,
            }
        })
        .collect();
    let max_offdiag = per_operator.iter().map(|r| r.offdiag).fold(0.0, f64::max);
    let max_diag_spread = per_operator.iter().map(|r| r.diag_spread).fold(0.0, f64::max);
    KlReport {
        ambient: code.ambient,
        group: code.group.name().to_string(),
        character_index: code.character_index,
        k,
        mode,
        max_offdiag,
        max_diag_spread,
        tolerance,
        pass: max_offdiag < tolerance && max_diag_spread < tolerance,
        per_operator,
    }
}

/// Logical action `L` with `U·C = C·L`, if the candidate preserves the code.
///
/// `candidate` is a group-level element (rotation or defining matrix); its
/// ambient image is formed here.
pub fn logical_gate_check(code: &CodeSpace, candidate: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
    let u = code.ambient.representation().image(candidate)?;
    let c = &code.codewords;
    let l = c.adjoint() * &u * c;
    let residual = frobenius(&(u * c - c * &l));
    Ok((residual < 1e-8).then_some(l))
}

/// Rotates the codewords so each lies in a one-dimensional sector of a larger
/// group whose character restricts to the code's character.
///
/// Returns the refined code and, per codeword, the index of the larger
/// group's character.
pub fn refine_basis(code: &CodeSpace, larger: &FiniteGroup) -> Result<(CodeSpace, Vec<usize>)> {
    code.ambient.check_group(larger)?;
    let own = code.group.expand_class_function(&code.character);
    let mut placement = Vec::with_capacity(code.group.order());
    for g in code.group.elements() {
        placement.push(larger.find(g).ok_or_else(|| Error::NoRefinement(format!("{} is not inside {}", code.group.name(), larger.name())))?);
    }
    let chars = larger.one_dim_characters()?;
    let c = &code.codewords;
    let mut columns: Vec<(usize, nalgebra::DVector<C64>)> = Vec::new();
    for (ci, chi) in chars.iter().enumerate() {
        let values = larger.expand_class_function(chi);
        let restricts = placement.iter().zip(&own).all(|(&i, x)| (values[i] - x).norm() < 1e-9);
        if !restricts {
            continue;
        }
        let p = codespace_projector(larger, chi, &code.ambient)?;
        let inner = c.adjoint() * p * c;
        let eig = eigh(&inner)?;
        for i in (0..eig.values.len()).rev() {
            if eig.values[i] > 1.0 - 1e-6 {
                let mut v = c * eig.vectors.column(i);
                if let Some(z) = v.iter().find(|z| z.norm() > 1e-6).copied() {
                    v *= z.conj() / z.norm();
                }
                columns.push((ci, v));
            }
        }
    }
    if columns.len() != code.k() {
        return Err(Error::NoRefinement(format!(
            "{} sectors of {} cover {} of {} codewords",
            chars.len(),
            larger.name(),
            columns.len(),
            code.k()
        )));
    }
    let mut refined = code.clone();
    for (k, (_, v)) in columns.iter().enumerate() {
        refined.codewords.set_column(k, v);
    }
    Ok((refined, columns.into_iter().map(|(ci, _)| ci).collect()))
}
