//! Named generating sets.
//!
//! SU(3) subgroups use the standard matrices of the dihedral-like families
//! and the exceptional groups. Point groups are real 3x3 rotations built
//! from axis-angle pairs; by default the tetrahedral group has a C2 axis and
//! the octahedral group a C4 axis along z.

use std::f64::consts::PI;

use crate::mat::{c64, diag, ComplexMatrix, C64};
use crate::{Error, Result};

use super::GroupKind;

/// A generator with a short human label.
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub matrix: ComplexMatrix,
}

impl Generator {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Self {
        Generator { label: label.into(), matrix }
    }
}

fn xi(n: u32) -> C64 {
    C64::from_polar(1.0, 2.0 * PI / n as f64)
}

fn m3(rows: [[C64; 3]; 3]) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |i, j| rows[i][j])
}

fn r(x: f64) -> C64 {
    c64(x, 0.0)
}

/// `diag(1, ξ_n, ξ_n^{−1})`.
pub fn a_n(n: u32) -> ComplexMatrix {
    diag(&[r(1.0), xi(n), xi(n).conj()])
}

pub fn mat_a() -> ComplexMatrix {
    a_n(2)
}

pub fn mat_b() -> ComplexMatrix {
    let z = C64::default();
    m3([[z, z, r(-1.0)], [z, r(-1.0), z], [r(-1.0), z, z]])
}

pub fn mat_c() -> ComplexMatrix {
    a_n(3)
}

pub fn mat_d() -> ComplexMatrix {
    let a = xi(9) * xi(9);
    diag(&[a, a, a * xi(3)])
}

pub fn mat_e() -> ComplexMatrix {
    let (z, o) = (C64::default(), r(1.0));
    m3([[z, o, z], [z, z, o], [o, z, z]])
}

pub fn mat_f() -> ComplexMatrix {
    let z = C64::default();
    let w = xi(3);
    m3([[r(-1.0), z, z], [z, z, -w], [z, -w * w, z]])
}

pub fn mat_v() -> ComplexMatrix {
    let w = xi(3);
    let o = r(1.0);
    let s = c64(0.0, 3f64.sqrt()).inv();
    m3([[o, o, o], [o, w, w * w], [o, w * w, w]]).map(|x| x * s)
}

pub fn mat_w() -> ComplexMatrix {
    let n1 = (-1.0 + 5f64.sqrt()) / 2.0;
    let n2 = (-1.0 - 5f64.sqrt()) / 2.0;
    m3([[r(-1.0), r(n2), r(n1)], [r(n2), r(n1), r(-1.0)], [r(n1), r(-1.0), r(n2)]]).map(|x| x * 0.5)
}

pub fn mat_x() -> ComplexMatrix {
    let w = xi(3);
    let o = r(1.0);
    let s = c64(0.0, 3f64.sqrt()).inv();
    m3([[o, o, w * w], [o, w, w], [w, o, w]]).map(|x| x * s)
}

pub fn mat_y() -> ComplexMatrix {
    let e = xi(7);
    diag(&[e, e.powu(2), e.powu(4)])
}

pub fn mat_z() -> ComplexMatrix {
    let e = |k: u32| xi(7).powu(k);
    let p = e(4) - e(3);
    let q = e(2) - e(5);
    let s = e(1) - e(6);
    let f = c64(0.0, 1.0 / 7f64.sqrt());
    m3([[p, q, s], [q, s, p], [s, p, q]]).map(|x| x * f)
}

/// Real rotation by `angle` about `axis` (normalized internally).
pub fn rotation(axis: [f64; 3], angle: f64) -> ComplexMatrix {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    let rows = [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ];
    ComplexMatrix::from_fn(3, 3, |i, j| r(rows[i][j]))
}

/// An SU(2) preimage `cos(θ/2) − i sin(θ/2) n·σ` of a real rotation.
pub fn su2_lift(rot: &ComplexMatrix) -> ComplexMatrix {
    let m = |i: usize, j: usize| rot[(i, j)].re;
    let tr = m(0, 0) + m(1, 1) + m(2, 2);
    let (w, x, y, z);
    if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (m(2, 1) - m(1, 2)) / s;
        y = (m(0, 2) - m(2, 0)) / s;
        z = (m(1, 0) - m(0, 1)) / s;
    } else if m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2) {
        let s = (1.0 + m(0, 0) - m(1, 1) - m(2, 2)).sqrt() * 2.0;
        w = (m(2, 1) - m(1, 2)) / s;
        x = 0.25 * s;
        y = (m(0, 1) + m(1, 0)) / s;
        z = (m(0, 2) + m(2, 0)) / s;
    } else if m(1, 1) > m(2, 2) {
        let s = (1.0 + m(1, 1) - m(0, 0) - m(2, 2)).sqrt() * 2.0;
        w = (m(0, 2) - m(2, 0)) / s;
        x = (m(0, 1) + m(1, 0)) / s;
        y = 0.25 * s;
        z = (m(1, 2) + m(2, 1)) / s;
    } else {
        let s = (1.0 + m(2, 2) - m(0, 0) - m(1, 1)).sqrt() * 2.0;
        w = (m(1, 0) - m(0, 1)) / s;
        x = (m(0, 2) + m(2, 0)) / s;
        y = (m(1, 2) + m(2, 1)) / s;
        z = 0.25 * s;
    }
    ComplexMatrix::from_row_slice(2, 2, &[c64(w, -z), c64(-y, -x), c64(y, -x), c64(w, z)])
}

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Rotation taking the icosahedral vertex direction `(0, 1, φ)` to z.
pub fn icosahedral_frame() -> ComplexMatrix {
    rotation([1.0, 0.0, 0.0], (1.0 / golden()).atan())
}

fn conj_all(gens: Vec<Generator>, frame: &ComplexMatrix) -> Vec<Generator> {
    gens.into_iter()
        .map(|g| Generator::new(g.label, frame * g.matrix * frame.adjoint()))
        .collect()
}

fn point_group(name: &str, n: Option<u32>) -> Option<Vec<Generator>> {
    let z = [0.0, 0.0, 1.0];
    let x = [1.0, 0.0, 0.0];
    let body = [1.0, 1.0, 1.0];
    let g = |label: &str, axis, angle| Generator::new(label, rotation(axis, angle));
    let gens = match name {
        "D2" => vec![g("C2z", z, PI), g("C2x", x, PI)],
        "D3" => vec![g("C3z", z, 2.0 * PI / 3.0), g("C2x", x, PI)],
        "Dn" => {
            let n = n?;
            vec![g("Cnz", z, 2.0 * PI / n as f64), g("C2x", x, PI)]
        }
        "T" => vec![g("C2z", z, PI), g("C3", body, 2.0 * PI / 3.0)],
        "O" => vec![g("C4z", z, PI / 2.0), g("C3", body, 2.0 * PI / 3.0)],
        "I" => vec![
            g("C2z", z, PI),
            g("C3", body, 2.0 * PI / 3.0),
            g("C5", [0.0, 1.0, golden()], 2.0 * PI / 5.0),
        ],
        "D2teddy" => vec![
            g("C2a", [2f64.sqrt(), 0.0, 1.0], PI),
            g("C2b", [-1.0 / 6f64.sqrt(), 1.0 / 2f64.sqrt(), 1.0 / 3f64.sqrt()], PI),
        ],
        "Tteddy" => vec![g("C2a", [2f64.sqrt(), 0.0, 1.0], PI), g("C3z", z, 2.0 * PI / 3.0)],
        "Ticosa" => conj_all(point_group("T", None)?, &icosahedral_frame()),
        "Oicosa" => conj_all(point_group("O", None)?, &icosahedral_frame()),
        "Iicosa" => conj_all(point_group("I", None)?, &icosahedral_frame()),
        _ => return None,
    };
    Some(gens)
}

fn su3_group(name: &str, n: Option<u32>) -> Option<Result<Vec<Generator>>> {
    let g = |label: &str, m: ComplexMatrix| Generator::new(label, m);
    let gens = match name {
        "Delta3n2" | "Delta6n2" => {
            let n = match n {
                Some(n) => n,
                None => return Some(Err(Error::InvalidInput(format!("{name} needs --n")))),
            };
            let min = if name == "Delta3n2" { 2 } else { 1 };
            if n < min {
                return Some(Err(Error::InvalidInput(format!("{name} needs n ≥ {min}"))));
            }
            let mut v = vec![g(&format!("A({n})"), a_n(n)), g("E", mat_e())];
            if name == "Delta6n2" {
                v.push(g("B", mat_b()));
            }
            v
        }
        "Sigma60" => vec![g("E", mat_e()), g("AW", mat_a() * mat_w())],
        "Sigma168" => vec![g("Y", mat_y()), g("Z", mat_z())],
        "Sigma36x3" => vec![g("C", mat_c()), g("V", mat_v())],
        "Sigma72x3" => vec![g("V", mat_v()), g("X", mat_x())],
        "Sigma216x3" => vec![g("V", mat_v()), g("D", mat_d())],
        "Sigma360x3" => vec![g("A", mat_a()), g("E", mat_e()), g("W", mat_w()), g("F", mat_f())],
        _ => return None,
    };
    Some(Ok(gens))
}

/// Maps short aliases (`Delta27`, `Sigma72`, …) to a catalog name and `n`.
pub fn resolve_alias(name: &str, n: Option<u32>) -> (String, Option<u32>) {
    let alias = match name {
        "Delta12" => Some(("Delta3n2", 2)),
        "Delta27" => Some(("Delta3n2", 3)),
        "Delta48" => Some(("Delta3n2", 4)),
        "Delta6" => Some(("Delta6n2", 1)),
        "Delta24" => Some(("Delta6n2", 2)),
        "Delta54" => Some(("Delta6n2", 3)),
        _ => None,
    };
    if let Some((base, k)) = alias {
        return (base.to_string(), Some(k));
    }
    let base = match name {
        "Sigma36" => "Sigma36x3",
        "Sigma72" => "Sigma72x3",
        "Sigma216" => "Sigma216x3",
        "Sigma360" => "Sigma360x3",
        other => other,
    };
    (base.to_string(), n)
}

/// Generators and kind of a named group.
pub fn builtin_generators(name: &str, n: Option<u32>) -> Result<(Vec<Generator>, GroupKind)> {
    let (base, n) = resolve_alias(name, n);
    if let Some(gens) = su3_group(&base, n) {
        return Ok((gens?, GroupKind::Unitary));
    }
    if base == "Dn" && n.is_none() {
        return Err(Error::InvalidInput("Dn needs --n".into()));
    }
    if let Some(gens) = point_group(&base, n) {
        return Ok((gens, GroupKind::Rotation));
    }
    Err(Error::UnknownGroup(name.to_string()))
}

/// Names accepted by [`builtin_generators`] (aliases excluded).
pub const CATALOG: &[&str] = &[
    "Delta3n2",
    "Delta6n2",
    "Sigma60",
    "Sigma168",
    "Sigma36x3",
    "Sigma72x3",
    "Sigma216x3",
    "Sigma360x3",
    "D2",
    "D3",
    "Dn",
    "T",
    "O",
    "I",
    "D2teddy",
    "Tteddy",
    "Ticosa",
    "Oicosa",
    "Iicosa",
];

/// Rows of the SU(3) accessibility table: catalog name and family parameter.
pub const SU3_TABLE_GROUPS: &[(&str, Option<u32>)] = &[
    ("Delta3n2", Some(2)),
    ("Delta3n2", Some(3)),
    ("Delta3n2", Some(4)),
    ("Delta6n2", Some(1)),
    ("Delta6n2", Some(2)),
    ("Delta6n2", Some(3)),
    ("Sigma60", None),
    ("Sigma168", None),
    ("Sigma36x3", None),
    ("Sigma72x3", None),
    ("Sigma216x3", None),
    ("Sigma360x3", None),
];

/// Columns of the SU(3) accessibility table: the irreps first met in
/// `(1,1)^{⊗K}` for `K ≤ 4`, one of each dual pair.
pub const SU3_TABLE_LABELS: &[(u32, u32)] = &[(1, 1), (3, 0), (2, 2), (4, 1), (3, 3), (6, 0), (5, 2), (4, 4)];

/// Point groups of the spin ladder scan.
pub const SPIN_LADDER_GROUPS: &[&str] = &["D2", "D3", "T", "O", "I"];
