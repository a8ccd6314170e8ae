//! Quotients by normal subgroups and factorizations `G = K · S`.

use crate::mat::ComplexMatrix;
use crate::{Error, Result};

use super::FiniteGroup;

/// `G / K` with one matrix representative per coset.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    /// First element of each coset in the parent's closure order.
    pub representatives: Vec<ComplexMatrix>,
    /// Coset index of every element of the parent group.
    pub coset_of: Vec<usize>,
    /// `table[a][b]` is the coset of `rep_a · rep_b`.
    pub table: Vec<Vec<usize>>,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Smallest `k ≥ 1` with `a^k = 1`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut cur = a;
        let mut k = 1;
        while cur != 0 {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Number of elements of order exactly 2.
    pub fn involutions(&self) -> usize {
        (1..self.order()).filter(|&a| self.element_order(a) == 2).count()
    }

    /// Klein four-group: order 4 with three involutions.
    pub fn is_klein_four(&self) -> bool {
        self.order() == 4 && self.involutions() == 3
    }

    /// Quaternion group: order 8, non-abelian, a single involution.
    pub fn is_quaternion(&self) -> bool {
        self.order() == 8 && !self.is_abelian() && self.involutions() == 1
    }

    /// Coset of an arbitrary parent-group matrix.
    pub fn coset_of_matrix(&self, parent: &FiniteGroup, m: &ComplexMatrix) -> Option<usize> {
        parent.find(m).map(|i| self.coset_of[i])
    }
}

fn ensure_subgroup(g: &FiniteGroup, k: &FiniteGroup) -> Result<Vec<usize>> {
    k.elements()
        .iter()
        .map(|e| g.find(e).ok_or_else(|| Error::InvalidInput(format!("{} is not a subgroup of {}", k.name(), g.name()))))
        .collect()
}

/// `G / K`; fails with `NotNormal` unless `g K g⁻¹ = K` for every generator `g`.
pub fn quotient_group(g: &FiniteGroup, k: &FiniteGroup) -> Result<QuotientGroup> {
    let k_idx = ensure_subgroup(g, k)?;
    for gen in g.generators() {
        for e in k.elements() {
            let conj = &gen.matrix * e * gen.matrix.adjoint();
            if k.find(&conj).is_none() {
                return Err(Error::NotNormal);
            }
        }
    }
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut rep_idx = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        for &ki in &k_idx {
            coset_of[g.mul(x, ki)] = c;
        }
        reps.push(g.element(x).clone());
        rep_idx.push(x);
    }
    let table = rep_idx
        .iter()
        .map(|&a| rep_idx.iter().map(|&b| coset_of[g.mul(a, b)]).collect())
        .collect();
    Ok(QuotientGroup { representatives: reps, coset_of, table })
}

/// Whether every element of `g` is uniquely `k · s` with `s` from `s_r`.
pub fn verify_factorization(g: &FiniteGroup, k: &FiniteGroup, s_r: &[ComplexMatrix]) -> Result<bool> {
    let k_idx = ensure_subgroup(g, k)?;
    if k_idx.len() * s_r.len() != g.order() {
        return Ok(false);
    }
    let mut hit = vec![false; g.order()];
    for s in s_r {
        let Some(si) = g.find(s) else {
            return Ok(false);
        };
        for &ki in &k_idx {
            let p = g.mul(ki, si);
            if hit[p] {
                return Ok(false);
            }
            hit[p] = true;
        }
    }
    Ok(hit.into_iter().all(|h| h))
}
