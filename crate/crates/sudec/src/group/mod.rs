//! Finite matrix groups: closure, lookup, conjugacy classes and characters.
//!
//! Elements are found by a hash of their entries quantized at `1e−6` and
//! confirmed by an entrywise comparison at `1e−9`; a missed bucket falls back
//! to a linear scan, so rounding across a quantization boundary can never
//! split one element into two. In projective mode matrices are compared up
//! to a global phase and the hash is taken after rotating the first
//! largest-modulus entry onto the positive real axis. Stored elements keep
//! the phase they were generated with, so their determinants stay 1.

pub mod catalog;
pub mod quotient;
pub mod rep;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::lie::{irrep_character, rotation_angle_from_trace, su2_character, DynkinLabel};
use crate::mat::{c64, eig_unitary, equal_up_to_phase, from_pairs, identity, max_abs, to_pairs, ComplexMatrix, C64};
use crate::{Error, Result};

pub use catalog::{builtin_generators, su2_lift, Generator};
pub use quotient::{quotient_group, verify_factorization, QuotientGroup};
pub use rep::{is_symmetry_of, symmetrize, Local, Representation, SiteRep, Symmetrizer};

const KEY_SCALE: f64 = 1e6;
const MATCH_TOL: f64 = 1e-9;

/// Default closure cap.
pub const DEFAULT_MAX_ORDER: usize = 5000;

/// Equality of elements: exact, or up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Projective,
}

/// Whether elements are SU(d) matrices or real 3x3 rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Unitary,
    Rotation,
}

/// A closed finite matrix group.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    d: usize,
    mode: Mode,
    kind: GroupKind,
    generators: Vec<Generator>,
    elements: Vec<ComplexMatrix>,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    gen_table: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, usize)>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

fn canonical_phase(m: &ComplexMatrix) -> C64 {
    let top = max_abs(m);
    for z in m.iter() {
        if z.norm() >= top - 1e-7 {
            return z.conj() / z.norm();
        }
    }
    c64(1.0, 0.0)
}

fn quantize(m: &ComplexMatrix, phase: C64) -> Vec<i64> {
    let mut key = Vec::with_capacity(2 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)] * phase;
            key.push((z.re * KEY_SCALE).round() as i64);
            key.push((z.im * KEY_SCALE).round() as i64);
        }
    }
    key
}

impl FiniteGroup {
    /// Breadth-first closure under left multiplication by the generators.
    pub fn close(name: impl Into<String>, generators: Vec<Generator>, mode: Mode, kind: GroupKind, max_order: usize) -> Result<Self> {
        let d = generators
            .first()
            .map(|g| g.matrix.nrows())
            .ok_or_else(|| Error::InvalidInput("empty generating set".into()))?;
        if generators.iter().any(|g| g.matrix.shape() != (d, d)) {
            return Err(Error::DimensionMismatch("generators of different sizes".into()));
        }
        let mut group = FiniteGroup {
            name: name.into(),
            d,
            mode,
            kind,
            generators,
            elements: Vec::new(),
            buckets: HashMap::new(),
            gen_table: Vec::new(),
            parent: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.insert(identity(d), None);
        let n_gen = group.generators.len();
        let mut table: Vec<Vec<usize>> = vec![Vec::new(); n_gen];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, row) in table.iter_mut().enumerate() {
                let prod = &group.generators[gi].matrix * &group.elements[i];
                let j = match group.find(&prod) {
                    Some(j) => j,
                    None => {
                        if group.elements.len() >= max_order {
                            return Err(Error::GroupTooLarge(max_order));
                        }
                        let j = group.insert(prod, Some((gi, i)));
                        queue.push_back(j);
                        j
                    }
                };
                if row.len() <= i {
                    row.resize(i + 1, usize::MAX);
                }
                row[i] = j;
            }
        }
        group.gen_table = table;
        group.build_classes();
        Ok(group)
    }

    /// Closes a catalog group in exact mode.
    pub fn builtin(name: &str, n: Option<u32>) -> Result<Self> {
        let (gens, kind) = builtin_generators(name, n)?;
        let (base, n) = catalog::resolve_alias(name, n);
        let display = match n {
            Some(n) if base.starts_with("Delta") || base == "Dn" => format!("{base}[n={n}]"),
            _ => base,
        };
        FiniteGroup::close(display, gens, Mode::Exact, kind, DEFAULT_MAX_ORDER)
    }

    fn key(&self, m: &ComplexMatrix) -> Vec<i64> {
        match self.mode {
            Mode::Exact => quantize(m, c64(1.0, 0.0)),
            Mode::Projective => quantize(m, canonical_phase(m)),
        }
    }

    fn same(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        match self.mode {
            Mode::Exact => a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= MATCH_TOL),
            Mode::Projective => equal_up_to_phase(a, b, MATCH_TOL),
        }
    }

    fn insert(&mut self, m: ComplexMatrix, parent: Option<(usize, usize)>) -> usize {
        let idx = self.elements.len();
        let key = self.key(&m);
        self.buckets.entry(key).or_default().push(idx);
        self.elements.push(m);
        self.parent.push(parent);
        idx
    }

    /// Index of the element equal to `m`, if any.
    pub fn find(&self, m: &ComplexMatrix) -> Option<usize> {
        if m.shape() != (self.d, self.d) {
            return None;
        }
        if let Some(bucket) = self.buckets.get(&self.key(m)) {
            if let Some(&i) = bucket.iter().find(|&&i| self.same(&self.elements[i], m)) {
                return Some(i);
            }
        }
        self.elements.iter().position(|e| self.same(e, m))
    }

    fn build_classes(&mut self) {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut members = vec![start];
            class_of[start] = cid;
            let mut k = 0;
            while k < members.len() {
                let y = &self.elements[members[k]];
                for g in &self.generators {
                    let conj = &g.matrix * y * g.matrix.adjoint();
                    let j = self.find(&conj).expect("conjugate of an element lies in the group");
                    if class_of[j] == usize::MAX {
                        class_of[j] = cid;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ComplexMatrix {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// `gen_table()[g][i]` is the index of `generator_g · element_i`.
    pub fn gen_table(&self) -> &[Vec<usize>] {
        &self.gen_table
    }

    /// Index of `element_i · element_j`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.find(&(&self.elements[i] * &self.elements[j])).expect("group is closed")
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.find(&self.elements[i].adjoint()).expect("group is closed")
    }

    /// Full multiplication table; `O(|G|²)` lookups.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.order()).map(|i| (0..self.order()).map(|j| self.mul(i, j)).collect()).collect()
    }

    /// Whether the scalar matrices `ξ_d^k · 1` all lie in the group.
    pub fn contains_center(&self) -> bool {
        if self.kind != GroupKind::Unitary || self.mode != Mode::Exact {
            return false;
        }
        let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.d as f64);
        self.find(&identity(self.d).map(|x| x * z)).is_some()
    }

    /// Re-closes the same generators in projective mode.
    pub fn quotient_by_center(&self) -> Result<FiniteGroup> {
        if !self.contains_center() {
            return Err(Error::NoCenter);
        }
        let q = FiniteGroup::close(
            format!("{}/Z{}", self.name, self.d),
            self.generators.clone(),
            Mode::Projective,
            self.kind,
            DEFAULT_MAX_ORDER,
        )?;
        debug_assert_eq!(q.order() * self.d, self.order());
        Ok(q)
    }

    /// Subgroup generated by the given matrices, closed with the same mode.
    pub fn subgroup(&self, name: impl Into<String>, generators: Vec<Generator>) -> Result<FiniteGroup> {
        for g in &generators {
            if self.find(&g.matrix).is_none() {
                return Err(Error::InvalidInput(format!("generator {} is not in {}", g.label, self.name)));
            }
        }
        FiniteGroup::close(name, generators, self.mode, self.kind, self.order())
    }

    /// Eigenphases of an element.
    pub fn eigenphases(&self, i: usize) -> Vec<f64> {
        eig_unitary(&self.elements[i]).expect("group elements are unitary").phases
    }

    /// Rotation angle in `[0, π]` of an element of a rotation group.
    pub fn rotation_angle(&self, i: usize) -> f64 {
        rotation_angle_from_trace(self.elements[i].trace().re)
    }

    /// Character of an irrep on each conjugacy class.
    ///
    /// Rotation groups take SU(2) labels with an even coefficient (integer
    /// spin); unitary groups take labels of their own rank.
    pub fn class_characters(&self, label: &DynkinLabel) -> Result<Vec<C64>> {
        match self.kind {
            GroupKind::Rotation => {
                if label.d() != 2 || !label.coeffs()[0].is_multiple_of(2) {
                    return Err(Error::InvalidLabel(format!("{label} is not an integer spin")));
                }
                let l = label.coeffs()[0] / 2;
                Ok(self.classes.iter().map(|c| c64(su2_character(l, self.rotation_angle(c[0])), 0.0)).collect())
            }
            GroupKind::Unitary => {
                if label.d() != self.d {
                    return Err(Error::DimensionMismatch(format!("{label} on a {}-dimensional group", self.d)));
                }
                self.classes.iter().map(|c| irrep_character(label, &self.eigenphases(c[0]))).collect()
            }
        }
    }

    /// Multiplicity of the one-dimensional irrep `chi` (values per class) in `label`.
    pub fn rep_multiplicity(&self, label: &DynkinLabel, chi: &[C64]) -> Result<u64> {
        if chi.len() != self.classes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} character values for {} classes",
                chi.len(),
                self.classes.len()
            )));
        }
        let values = self.class_characters(label)?;
        let sum: C64 = self
            .classes
            .iter()
            .zip(values.iter().zip(chi))
            .map(|(c, (v, x))| x.conj() * v * c.len() as f64)
            .sum();
        integer_multiplicity(sum / self.order() as f64)
    }

    /// `(1/|G|) Σ_g χ_label(g)`.
    pub fn trivial_multiplicity(&self, label: &DynkinLabel) -> Result<u64> {
        let ones = vec![c64(1.0, 0.0); self.classes.len()];
        self.rep_multiplicity(label, &ones)
    }

    /// Trivial multiplicity for each label; zero means the symmetry is inaccessible.
    pub fn accessibility_scan(&self, labels: &[DynkinLabel]) -> Result<Vec<Accessibility>> {
        labels
            .iter()
            .map(|l| {
                let m = self.trivial_multiplicity(l)?;
                Ok(Accessibility { label: l.clone(), multiplicity: m, inaccessible: m == 0 })
            })
            .collect()
    }

    /// Smallest subgroup containing the commutators of the generators and
    /// closed under conjugation, i.e. the derived subgroup.
    pub fn derived_subgroup(&self) -> Result<FiniteGroup> {
        let gens = &self.generators;
        let mut sub: Vec<Generator> = Vec::new();
        for a in gens {
            for b in gens {
                let c = &a.matrix * &b.matrix * a.matrix.adjoint() * b.matrix.adjoint();
                sub.push(Generator::new(format!("[{},{}]", a.label, b.label), c));
            }
        }
        loop {
            let d = FiniteGroup::close(format!("{}'", self.name), sub.clone(), self.mode, self.kind, self.order())?;
            let mut grew = false;
            'outer: for e in d.elements() {
                for g in gens {
                    let conj = &g.matrix * e * g.matrix.adjoint();
                    if d.find(&conj).is_none() {
                        sub.push(Generator::new("conj", conj));
                        grew = true;
                        break 'outer;
                    }
                }
            }
            if !grew {
                return Ok(d);
            }
        }
    }

    /// All one-dimensional irreps, as values on each class.
    ///
    /// They factor through the abelian quotient by the derived subgroup; each
    /// generator's image has a finite order there, and every consistent
    /// assignment of roots of unity to the generators is one character.
    pub fn one_dim_characters(&self) -> Result<Vec<Vec<C64>>> {
        let derived = self.derived_subgroup()?;
        let n = self.order();
        let mut coset = vec![usize::MAX; n];
        let mut n_cosets = 0;
        for x in 0..n {
            if coset[x] != usize::MAX {
                continue;
            }
            for k in derived.elements() {
                let j = self.find(&(&self.elements[x] * k)).expect("group is closed");
                coset[j] = n_cosets;
            }
            n_cosets += 1;
        }
        let orders: Vec<usize> = (0..self.generators.len())
            .map(|gi| {
                let mut cur = 0usize;
                let mut k = 0;
                loop {
                    cur = self.gen_table[gi][cur];
                    k += 1;
                    if coset[cur] == coset[0] {
                        return k;
                    }
                }
            })
            .collect();
        let mut found: Vec<Vec<C64>> = Vec::new();
        let mut choice = vec![0usize; orders.len()];
        loop {
            let gen_vals: Vec<C64> = choice
                .iter()
                .zip(&orders)
                .map(|(&k, &o)| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / o as f64))
                .collect();
            if let Some(values) = self.propagate(&gen_vals) {
                let per_class: Vec<C64> = self.classes.iter().map(|c| values[c[0]]).collect();
                if !found.iter().any(|f| f.iter().zip(&per_class).all(|(a, b)| (a - b).norm() < 1e-9)) {
                    found.push(per_class);
                }
            }
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    debug_assert_eq!(found.len(), n_cosets);
                    return Ok(found);
                }
                choice[pos] += 1;
                if choice[pos] < orders[pos] {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }

    fn propagate(&self, gen_vals: &[C64]) -> Option<Vec<C64>> {
        let n = self.order();
        let mut values = vec![c64(1.0, 0.0); n];
        for i in 1..n {
            let (gi, p) = self.parent[i].expect("non-identity elements have a parent");
            values[i] = gen_vals[gi] * values[p];
        }
        for (gi, row) in self.gen_table.iter().enumerate() {
            for (i, &j) in row.iter().enumerate() {
                if (values[j] - gen_vals[gi] * values[i]).norm() > 1e-9 {
                    return None;
                }
            }
        }
        Some(values)
    }

    /// Values of a per-class function on every element.
    pub fn expand_class_function(&self, per_class: &[C64]) -> Vec<C64> {
        self.class_of.iter().map(|&c| per_class[c]).collect()
    }

    /// Serializable description.
    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            name: self.name.clone(),
            d: self.d,
            mode: self.mode,
            kind: self.kind,
            order: self.order(),
            contains_center: self.contains_center(),
            generator_labels: self.generators.iter().map(|g| g.label.clone()).collect(),
            generators: self.generators.iter().map(|g| to_pairs(&g.matrix)).collect(),
            classes: self.classes.clone(),
            orientation: None,
        }
    }

    /// Re-closes a serialized group.
    pub fn from_file(file: &GroupFile) -> Result<Self> {
        let gens = file
            .generators
            .iter()
            .enumerate()
            .map(|(k, pairs)| {
                let label = file.generator_labels.get(k).cloned().unwrap_or_else(|| format!("g{k}"));
                Ok(Generator::new(label, from_pairs(pairs)?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::close(file.name.clone(), gens, file.mode, file.kind, DEFAULT_MAX_ORDER)
    }
}

fn integer_multiplicity(z: C64) -> Result<u64> {
    let rounded = z.re.round();
    let residual = (z.re - rounded).abs().max(z.im.abs());
    if residual > 1e-6 || rounded < 0.0 {
        return Err(Error::NonIntegerMultiplicity(residual.max(-rounded)));
    }
    Ok(rounded as u64)
}

/// One row of an accessibility scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accessibility {
    pub label: DynkinLabel,
    pub multiplicity: u64,
    pub inaccessible: bool,
}

/// Orientation attached to an exported group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrientationRecord {
    pub conjugator: Vec<[f64; 2]>,
    pub permutation: Vec<usize>,
}

/// On-disk group description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub d: usize,
    pub mode: Mode,
    pub kind: GroupKind,
    pub order: usize,
    pub contains_center: bool,
    pub generator_labels: Vec<String>,
    pub generators: Vec<Vec<[f64; 2]>>,
    pub classes: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{frobenius, sym_power};

    fn sorted_sizes(g: &FiniteGroup) -> Vec<usize> {
        let mut s = g.class_sizes();
        s.sort_unstable();
        s
    }

    #[test]
    fn orders_of_catalog_groups() {
        let cases: &[(&str, Option<u32>, usize)] = &[
            ("Delta3n2", Some(2), 12),
            ("Delta3n2", Some(3), 27),
            ("Delta3n2", Some(4), 48),
            ("Delta6n2", Some(1), 6),
            ("Delta6n2", Some(2), 24),
            ("Delta6n2", Some(3), 54),
            ("Sigma60", None, 60),
            ("Sigma168", None, 168),
            ("Sigma36x3", None, 108),
            ("Sigma72x3", None, 216),
            ("D2", None, 4),
            ("D3", None, 6),
            ("Dn", Some(5), 10),
            ("T", None, 12),
            ("O", None, 24),
            ("I", None, 60),
            ("D2teddy", None, 4),
            ("Tteddy", None, 12),
            ("Oicosa", None, 24),
        ];
        for &(name, n, order) in cases {
            assert_eq!(FiniteGroup::builtin(name, n).unwrap().order(), order, "{name}");
        }
    }

    #[test]
    fn class_equation_of_point_groups() {
        assert_eq!(sorted_sizes(&FiniteGroup::builtin("T", None).unwrap()), vec![1, 3, 4, 4]);
        assert_eq!(sorted_sizes(&FiniteGroup::builtin("O", None).unwrap()), vec![1, 3, 6, 6, 8]);
        assert_eq!(sorted_sizes(&FiniteGroup::builtin("I", None).unwrap()), vec![1, 12, 12, 15, 20]);
    }

    #[test]
    fn center_and_quotient() {
        let g = FiniteGroup::builtin("Sigma72x3", None).unwrap();
        assert!(g.contains_center());
        let q = g.quotient_by_center().unwrap();
        assert_eq!(q.order(), 72);
        assert_eq!(q.mode(), Mode::Projective);
        let d12 = FiniteGroup::builtin("Delta12", None).unwrap();
        assert!(!d12.contains_center());
        assert!(matches!(d12.quotient_by_center(), Err(Error::NoCenter)));
        assert!(!FiniteGroup::builtin("T", None).unwrap().contains_center());
    }

    #[test]
    fn closure_cap() {
        let (gens, kind) = builtin_generators("Sigma168", None).unwrap();
        assert!(matches!(FiniteGroup::close("s", gens, Mode::Exact, kind, 100), Err(Error::GroupTooLarge(100))));
    }

    #[test]
    fn classes_partition_the_group() {
        let g = FiniteGroup::builtin("Sigma36x3", None).unwrap();
        let total: usize = g.class_sizes().iter().sum();
        assert_eq!(total, g.order());
        assert!(g.class_sizes().iter().all(|s| g.order().is_multiple_of(*s)));
        assert_eq!(g.classes()[0], vec![0]);
    }

    #[test]
    fn fixed_subspace_matches_character_average() {
        // Oracle: count unit eigenvalues of the explicit projector on the
        // adjoint and (2,2) realizations.
        let g = FiniteGroup::builtin("Delta6n2", Some(2)).unwrap();
        let op_space = |m: &ComplexMatrix| m.kronecker(&m.conjugate());
        let n = 9;
        let mut proj = ComplexMatrix::zeros(n, n);
        for e in g.elements() {
            proj += op_space(e);
        }
        proj /= c64(g.order() as f64, 0.0);
        // Operator space = (0,0) ⊕ (1,1); the fixed subspace includes the identity.
        let fixed = proj.trace().re.round() as u64;
        assert_eq!(fixed, 1 + g.trivial_multiplicity(&DynkinLabel::su3(1, 1)).unwrap());
        // (2,0) ⊗ (0,2) = (0,0) ⊕ (1,1) ⊕ (2,2) on Sym² ⊗ conj(Sym²).
        let mut proj2 = ComplexMatrix::zeros(36, 36);
        for e in g.elements() {
            let s = sym_power(e, 2).unwrap();
            proj2 += s.kronecker(&s.conjugate());
        }
        proj2 /= c64(g.order() as f64, 0.0);
        let fixed2 = proj2.trace().re.round() as u64;
        let want = 1 + g.trivial_multiplicity(&DynkinLabel::su3(1, 1)).unwrap() + g.trivial_multiplicity(&DynkinLabel::su3(2, 2)).unwrap();
        assert_eq!(fixed2, want);
        assert!(frobenius(&(&proj2 * &proj2 - &proj2)) < 1e-9);
    }

    #[test]
    fn one_dim_characters_of_small_groups() {
        let count = |name: &str, n| FiniteGroup::builtin(name, n).unwrap().one_dim_characters().unwrap().len();
        assert_eq!(count("D2", None), 4);
        assert_eq!(count("T", None), 3);
        assert_eq!(count("O", None), 2);
        assert_eq!(count("I", None), 1);
        assert_eq!(count("Delta27", None), 9);
        let t = FiniteGroup::builtin("T", None).unwrap();
        for chi in t.one_dim_characters().unwrap() {
            let full = t.expand_class_function(&chi);
            for i in 0..t.order() {
                for j in [1usize, 5, 7] {
                    let k = t.mul(i, j);
                    assert!((full[k] - full[i] * full[j]).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroup::builtin("Sigma60", None).unwrap();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let back = FiniteGroup::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.order(), 60);
        assert_eq!(sorted_sizes(&back), sorted_sizes(&g));
    }
}
