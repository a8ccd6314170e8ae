//! Named experiment shapes: catalog lookups with orientations, and the
//! sequence sets behind the standard simulation sweeps.

use crate::cayley::{nest_sequences, synthesize, PulseSequence, SequenceKind};
use crate::group::catalog::{a_n, mat_a, mat_b, mat_c, mat_d, mat_e, mat_f, mat_v, mat_w, mat_x, mat_y, mat_z};
use crate::group::{FiniteGroup, Generator, GroupKind, Mode, DEFAULT_MAX_ORDER};
use crate::mat::{identity, ComplexMatrix};
use crate::orientation::{conjugate_group, delta24_embedding, diagonalizer_of_x, p_orientation, p_prime_orientation, Orientation};
use crate::sim::ModelKind;
use crate::{Error, Result};

/// Weyl permutations by cycle name, in the order `e, 12, 23, 13, 123, 132`.
pub const WEYL_NAMES: [&str; 6] = ["e", "12", "23", "13", "123", "132"];

pub fn weyl_permutation(name: &str) -> Result<Vec<usize>> {
    Ok(match name.trim_start_matches('(').trim_end_matches(')') {
        "e" | "" => vec![0, 1, 2],
        "12" => vec![1, 0, 2],
        "23" => vec![0, 2, 1],
        "13" => vec![2, 1, 0],
        "123" => vec![2, 0, 1],
        "132" => vec![1, 2, 0],
        other => return Err(Error::InvalidInput(format!("unknown Weyl permutation {other}"))),
    })
}

/// Matrix-catalog pulse by letter; `A2`, `A4`, … select `A(n)`.
pub fn pulse_matrix(label: &str) -> Result<ComplexMatrix> {
    Ok(match label {
        "A" => mat_a(),
        "B" => mat_b(),
        "C" => mat_c(),
        "D" => mat_d(),
        "E" => mat_e(),
        "F" => mat_f(),
        "V" => mat_v(),
        "W" => mat_w(),
        "X" => mat_x(),
        "Y" => mat_y(),
        "Z" => mat_z(),
        s if s.starts_with('A') => {
            let n = s[1..].parse().map_err(|_| Error::InvalidInput(format!("unknown pulse {s}")))?;
            a_n(n)
        }
        s => return Err(Error::InvalidInput(format!("unknown pulse {s}"))),
    })
}

/// Unitary orientation by name (`diag-X`, `p`, `p-prime`, or `weyl` for a
/// bare permutation), with an optional Weyl permutation.
///
/// `teddy` and `icosa` select catalog frames instead and yield `None`, as
/// does `delta24`, which is an embedding rather than a conjugation.
pub fn orientation(name: &str, weyl: Option<&str>) -> Result<Option<Orientation>> {
    let perm = weyl.map(weyl_permutation).transpose()?;
    let mut o = match name {
        "diag-X" | "diag-x" => Orientation::new(diagonalizer_of_x(), vec![0, 1, 2], "U")?,
        "p" => p_orientation(0.0),
        "p-prime" => p_prime_orientation(),
        "weyl" => Orientation::new(identity(3), vec![0, 1, 2], "W")?,
        "teddy" | "icosa" | "delta24" => {
            if perm.is_some() && name != "delta24" {
                return Err(Error::InvalidInput(format!("--weyl does not apply to the {name} frame")));
            }
            return Ok(None);
        }
        other => return Err(Error::InvalidInput(format!("unknown orientation {other}"))),
    };
    if let Some(p) = perm {
        o.description = format!("{}({})", o.description, weyl.unwrap_or("e"));
        o.weyl_perm = p;
    }
    Ok(Some(o))
}

/// The order-24 subgroup of Σ(168) conjugate to Δ(24).
pub fn embedded_delta24() -> Result<FiniteGroup> {
    let gens = delta24_embedding().into_iter().enumerate().map(|(i, m)| Generator::new(format!("M{}", i + 1), m)).collect();
    FiniteGroup::close("Delta24[w]", gens, Mode::Exact, GroupKind::Unitary, 100)
}

/// Catalog group with an optional orientation and Weyl permutation,
/// optionally divided by its center (a no-op when the center is absent).
pub fn resolve_group(name: &str, n: Option<u32>, orient: Option<&str>, weyl: Option<&str>, quotient: bool) -> Result<FiniteGroup> {
    let g = match orient {
        Some(frame @ ("teddy" | "icosa")) => {
            orientation(frame, weyl)?;
            FiniteGroup::builtin(&format!("{name}{frame}"), n)?
        }
        Some("delta24") => {
            let base = FiniteGroup::builtin(name, n)?;
            if base.order() != 24 || base.d() != 3 {
                return Err(Error::InvalidInput(format!("the delta24 embedding applies to Δ(24), not {}", base.name())));
            }
            let g = embedded_delta24()?;
            match weyl {
                Some(w) => conjugate_group(&g, &Orientation::new(identity(3), weyl_permutation(w)?, format!("({w})"))?)?,
                None => g,
            }
        }
        Some(o) => {
            let g = FiniteGroup::builtin(name, n)?;
            let o = orientation(o, weyl)?.expect("unitary orientation");
            conjugate_group(&g, &o)?
        }
        None => FiniteGroup::builtin(name, n)?,
    };
    if quotient && g.contains_center() {
        g.quotient_by_center()
    } else {
        Ok(g)
    }
}

/// Group closed from catalog pulse letters, optionally oriented, in
/// projective mode when `quotient` is set.
pub fn group_from_labels(name: &str, labels: &[String], orient: Option<&str>, weyl: Option<&str>, quotient: bool) -> Result<FiniteGroup> {
    let o = match orient {
        Some(o) => orientation(o, weyl)?,
        None => None,
    };
    let gens = labels
        .iter()
        .map(|l| {
            let m = pulse_matrix(l)?;
            Ok(Generator::new(l.clone(), o.as_ref().map(|o| o.apply(&m)).unwrap_or(m)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mode = if quotient { Mode::Projective } else { Mode::Exact };
    let suffix = if quotient { "/Z3" } else { "" };
    FiniteGroup::close(format!("{name}{suffix}"), gens, mode, GroupKind::Unitary, DEFAULT_MAX_ORDER)
}

/// Eulerian sequence on the center quotient of the group generated by the
/// given pulse letters.
pub fn quotient_eulerian(name: &str, labels: &[&str], o: Option<&Orientation>, seed: u64) -> Result<PulseSequence> {
    let gens = labels
        .iter()
        .map(|l| {
            let m = pulse_matrix(l)?;
            Ok(Generator::new(*l, o.map(|o| o.apply(&m)).unwrap_or(m)))
        })
        .collect::<Result<Vec<_>>>()?;
    let g = FiniteGroup::close(name, gens, Mode::Projective, GroupKind::Unitary, DEFAULT_MAX_ORDER)?;
    let mut seq = synthesize(&g, SequenceKind::Eulerian, seed, 0, 1.0)?;
    seq.orientation = o.map(Orientation::to_record);
    Ok(seq)
}

/// One labelled sequence of a sweep preset, with the single-site propagator
/// it should implement (`None` for the identity).
#[derive(Debug, Clone)]
pub struct PresetSequence {
    pub label: String,
    pub sequence: PulseSequence,
    pub target: Option<ComplexMatrix>,
}

/// Standard simulation sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimPreset {
    /// Δ(27)/ℤ₃, Σ(36×3)/ℤ₃ (X-diagonal frame) and Σ(72×3)/ℤ₃ on random
    /// anisotropic three-qutrit Hamiltonians.
    Fig5,
    /// Σ(36×3)/ℤ₃ in the X-diagonal frame under all six Weyl permutations,
    /// NV-type Hamiltonians.
    Fig9,
    /// Embedded Δ(24) under all six Weyl permutations, NV-type Hamiltonians.
    Fig10,
    /// Nested `K4[E]` and `Q8[E]`, NV-type Hamiltonians.
    Fig11,
}

impl SimPreset {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fig5" => Ok(SimPreset::Fig5),
            "fig9" => Ok(SimPreset::Fig9),
            "fig10" => Ok(SimPreset::Fig10),
            "fig11" => Ok(SimPreset::Fig11),
            other => Err(Error::InvalidInput(format!("unknown simulation preset {other}"))),
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            SimPreset::Fig5 => ModelKind::RandomAnisotropic,
            _ => ModelKind::Nv,
        }
    }

    pub fn sites(self) -> usize {
        3
    }

    pub fn sequences(self, seed: u64) -> Result<Vec<PresetSequence>> {
        let plain = |label: &str, sequence| PresetSequence { label: label.into(), sequence, target: None };
        match self {
            SimPreset::Fig5 => {
                let u = orientation("diag-X", None)?;
                Ok(vec![
                    plain("Delta27/Z3", quotient_eulerian("Delta27/Z3", &["C", "E"], None, seed)?),
                    plain("Sigma36x3/Z3", quotient_eulerian("Sigma36x3/Z3", &["C", "V"], u.as_ref(), seed)?),
                    plain("Sigma72x3/Z3", quotient_eulerian("Sigma72x3/Z3", &["V", "X"], None, seed)?),
                ])
            }
            SimPreset::Fig9 => WEYL_NAMES
                .iter()
                .map(|w| {
                    let o = orientation("diag-X", Some(w))?;
                    Ok(plain(&format!("U({w})"), quotient_eulerian("Sigma36x3/Z3", &["C", "V"], o.as_ref(), seed)?))
                })
                .collect(),
            SimPreset::Fig10 => {
                let base = embedded_delta24()?;
                WEYL_NAMES
                    .iter()
                    .map(|w| {
                        let o = Orientation::new(identity(3), weyl_permutation(w)?, format!("({w})"))?;
                        let g = conjugate_group(&base, &o)?;
                        let mut seq = synthesize(&g, SequenceKind::Eulerian, seed, 0, 1.0)?;
                        seq.orientation = Some(o.to_record());
                        Ok(plain(&format!("U({w})"), seq))
                    })
                    .collect()
            }
            SimPreset::Fig11 => {
                let alphabet: Vec<Generator> = ["X", "V", "E"].iter().map(|l| Ok(Generator::new(*l, pulse_matrix(l)?))).collect::<Result<_>>()?;
                let inner = PulseSequence::from_labels(&["E", "E", "E"], &alphabet, 1.0)?;
                let k4 = PulseSequence::from_labels(&["X", "V", "X", "V"], &alphabet, 1.0)?;
                let q8 = PulseSequence::from_labels(&["X", "X", "X", "V", "X", "X", "X", "V"], &alphabet, 1.0)?;
                [("K4[E]", k4), ("Q8[E]", q8)]
                    .into_iter()
                    .map(|(label, outer)| {
                        let sequence = nest_sequences(&outer, &inner)?;
                        let target = Some(sequence.net_unitary());
                        Ok(PresetSequence { label: label.into(), sequence, target })
                    })
                    .collect()
            }
        }
    }
}

/// Catalog groups and ranges behind the standard multiplicity scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanPreset {
    /// T, D2 and O on spin j = 0..14.
    Fig7,
    /// Σ(36×3), Σ(72×3), Δ(24) and Σ(168) on N = 0..12 symmetric qutrits.
    Fig8,
}

impl ScanPreset {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fig7" => Ok(ScanPreset::Fig7),
            "fig8" => Ok(ScanPreset::Fig8),
            other => Err(Error::InvalidInput(format!("unknown scan preset {other}"))),
        }
    }

    pub fn groups(self) -> &'static [&'static str] {
        match self {
            ScanPreset::Fig7 => &["T", "D2", "O"],
            ScanPreset::Fig8 => &["Sigma36x3", "Sigma72x3", "Delta24", "Sigma168"],
        }
    }

    pub fn range(self) -> std::ops::RangeInclusive<usize> {
        match self {
            ScanPreset::Fig7 => 0..=14,
            ScanPreset::Fig8 => 0..=12,
        }
    }
}

/// Σ(72×3)/ℤ₃ Eulerian sequences in the two pulse-simplifying frames.
pub fn constrained_pulse_sequences(seed: u64) -> Result<Vec<PresetSequence>> {
    [("P", p_orientation(0.0)), ("P-prime", p_prime_orientation())]
        .into_iter()
        .map(|(label, o)| {
            Ok(PresetSequence { label: label.into(), sequence: quotient_eulerian("Sigma72x3/Z3", &["V", "X"], Some(&o), seed)?, target: None })
        })
        .collect()
}

pub fn file_safe(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}
