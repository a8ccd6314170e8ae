//! Self-checks behind `sudec verify`.

use std::collections::BTreeSet;

use sudec::cayley::{first_order_average, synthesize, SequenceKind};
use sudec::group::catalog::{mat_v, mat_x, SPIN_LADDER_GROUPS, SU3_TABLE_GROUPS, SU3_TABLE_LABELS};
use sudec::group::{symmetrize, FiniteGroup, Representation};
use sudec::lie::{adjoint_power_labels, tensor_decompose, verify_qudit_formula, DynkinLabel};
use sudec::mat::{frobenius, identity, C64};
use sudec::presets::{embedded_delta24, quotient_eulerian};
use sudec::qecc::{error_set, kl_check, AmbientSpace, CodeSpace, ErrorKind, KlMode, KL_TOLERANCE};
use sudec::sim::build_random_hamiltonian;
use sudec::{Error, Result};

/// Inaccessibility grid, one row per group in table order, one mark per label.
const SU3_GRID: [&str; 12] = [
    "YNNNNNNN", "YNNNNNNN", "YNNYNNNN", "NNNNNNNN", "YYNNNNNN", "YYNNNNNN", "YYNYNNNN", "YYYYNNYN", "YYNNNNNN", "YYYNNNYN", "YYYYNYYN",
    "YYYYYNYN",
];
const SU3_ORDERS: [usize; 12] = [12, 27, 48, 6, 24, 54, 60, 168, 108, 216, 648, 1080];
const SU3_STARRED: [bool; 12] = [false, true, false, false, false, true, false, false, true, true, true, true];

type Checks = Vec<(String, bool)>;

fn labels(list: &[(u32, u32)]) -> BTreeSet<DynkinLabel> {
    list.iter().map(|&(p, q)| DynkinLabel::su3(p, q)).collect()
}

fn lie_suite(out: &mut Checks) -> Result<()> {
    let k2 = labels(&[(0, 0), (1, 1), (0, 3), (3, 0), (2, 2)]);
    let mut k3 = k2.clone();
    k3.extend(labels(&[(4, 1), (1, 4), (3, 3)]));
    let mut k4 = k3.clone();
    k4.extend(labels(&[(6, 0), (0, 6), (5, 2), (2, 5), (4, 4)]));
    for (k, want) in [(2, &k2), (3, &k3), (4, &k4)] {
        let got = adjoint_power_labels(3, k)?;
        out.push((format!("lie: adjoint power K={k} labels"), got.is_superset(want)));
    }
    let adj4 = DynkinLabel::adjoint(4);
    let got = tensor_decompose(&adj4, &adj4)?;
    let want: Vec<(Vec<u32>, u32)> =
        vec![(vec![0, 0, 0], 1), (vec![0, 1, 2], 1), (vec![0, 2, 0], 1), (vec![1, 0, 1], 2), (vec![2, 0, 2], 1), (vec![2, 1, 0], 1)];
    let got: Vec<(Vec<u32>, u32)> = got.into_iter().map(|(l, m)| (l.coeffs().to_vec(), m)).collect();
    out.push(("lie: SU(4) adjoint squared".into(), got == want));
    for d in 5..=7 {
        out.push((format!("lie: two-qudit closed form d={d}"), verify_qudit_formula(d)?));
    }
    Ok(())
}

fn groups_suite(out: &mut Checks) -> Result<()> {
    let labs: Vec<DynkinLabel> = SU3_TABLE_LABELS.iter().map(|&(p, q)| DynkinLabel::su3(p, q)).collect();
    for (row, &(name, n)) in SU3_TABLE_GROUPS.iter().enumerate() {
        let g = FiniteGroup::builtin(name, n)?;
        let marks: String = g.accessibility_scan(&labs)?.iter().map(|a| if a.inaccessible { 'Y' } else { 'N' }).collect();
        let ok = marks == SU3_GRID[row] && g.order() == SU3_ORDERS[row] && g.contains_center() == SU3_STARRED[row];
        out.push((format!("groups: table row {} (order {})", g.name(), g.order()), ok));
    }
    for name in SPIN_LADDER_GROUPS {
        let g = FiniteGroup::builtin(name, None)?;
        let m: Vec<u64> = (0..=8).map(|l| g.trivial_multiplicity(&DynkinLabel::spin(l))).collect::<Result<_>>()?;
        let ok = match *name {
            "T" => m[1] == 0 && m[2] == 0 && m[5] == 0 && m[6] == 2,
            "I" => m[1..6].iter().all(|&x| x == 0) && m[6] > 0,
            _ => m[0] == 1,
        };
        out.push((format!("groups: spin ladder {name}"), ok));
    }
    let d24 = embedded_delta24()?;
    let mut sizes = d24.class_sizes();
    sizes.sort();
    out.push(("groups: embedded Δ(24) order and classes".into(), d24.order() == 24 && sizes == vec![1, 3, 6, 6, 8]));
    Ok(())
}

fn sequences_suite(out: &mut Checks) -> Result<()> {
    for (name, gens, want) in [("Delta27/Z3", ["C", "E"], 18), ("Sigma36x3/Z3", ["C", "V"], 72), ("Sigma72x3/Z3", ["V", "X"], 144)] {
        let seq = quotient_eulerian(name, &gens, None, 0)?;
        out.push((format!("sequences: {name} Eulerian length {want}"), seq.len() == want));
    }
    let s72 = FiniteGroup::builtin("Sigma72x3", None)?.quotient_by_center()?;
    let seq = synthesize(&s72, SequenceKind::Eulerian, 1, 0, 1.0)?;
    let rep = Representation::Tensor(2);
    let mut worst: f64 = 0.0;
    for s in 0..10 {
        let (_, h) = build_random_hamiltonian(2, 1.0, 1.0, true, s)?;
        let avg = first_order_average(&seq, &h, &rep)?;
        let sym = symmetrize(&h, &s72, &rep)?;
        worst = worst.max(frobenius(&(avg - sym)));
    }
    out.push(("sequences: first-order average equals symmetrizer".into(), worst < 1e-10));
    let xv = mat_x() * mat_v();
    let x3v = mat_x() * mat_x() * mat_x() * mat_v();
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let p4 = |m: &sudec::ComplexMatrix| {
        let m2 = m * m;
        &m2 * &m2
    };
    out.push(("sequences: (XV)^4 = ω·1".into(), frobenius(&(p4(&xv) - identity(3) * omega)) < 1e-10));
    out.push(("sequences: (X^3 V)^4 = 1".into(), frobenius(&(p4(&x3v) - identity(3))) < 1e-10));
    Ok(())
}

fn code_passes(g: &FiniteGroup, ambient: AmbientSpace, k: usize, errors: ErrorKind) -> Result<bool> {
    let chars = g.one_dim_characters()?;
    let ci = sudec::qecc::trivial_character_index(&chars);
    let code = CodeSpace::build(g, ci, ambient, k)?;
    Ok(kl_check(&code, &error_set(&errors, &ambient)?, KlMode::Correct, KL_TOLERANCE).pass)
}

fn qecc_suite(out: &mut Checks) -> Result<()> {
    let t = FiniteGroup::builtin("T", None)?;
    out.push(("qecc: T at j=6 corrects spin-linear errors".into(), code_passes(&t, AmbientSpace::Spin { j: 6 }, 2, ErrorKind::SpinLinear)?));
    let d2t = FiniteGroup::builtin("D2teddy", None)?;
    out.push(("qecc: D2 (teddy) at j=2 corrects dephasing".into(), code_passes(&d2t, AmbientSpace::Spin { j: 2 }, 2, ErrorKind::Dephasing)?));
    let d2 = FiniteGroup::builtin("D2", None)?;
    let control = code_passes(&d2, AmbientSpace::Spin { j: 2 }, 2, ErrorKind::SpinLinear)?;
    out.push(("qecc: D2 at j=2 does not correct spin-linear errors".into(), !control));
    let d24 = embedded_delta24()?;
    let amb = AmbientSpace::SymmetricQudits { d: 3, n: 4 };
    out.push(("qecc: embedded Δ(24) on 4 qutrits corrects dephasing".into(), code_passes(&d24, amb, 2, ErrorKind::QutritDephasing)?));
    Ok(())
}

/// Runs a named suite and returns one `(check, passed)` pair per check.
pub fn run_suite(suite: &str) -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let all = suite == "all";
    let mut matched = false;
    if all || suite == "lie" {
        lie_suite(&mut out)?;
        matched = true;
    }
    if all || suite == "groups" {
        groups_suite(&mut out)?;
        matched = true;
    }
    if all || suite == "sequences" {
        sequences_suite(&mut out)?;
        matched = true;
    }
    if all || suite == "qecc" {
        qecc_suite(&mut out)?;
        matched = true;
    }
    if !matched {
        return Err(Error::InvalidInput(format!("unknown suite {suite}")));
    }
    Ok(out)
}
