//! `sudec`: group inspection, accessibility scans, sequence synthesis,
//! simulation sweeps, code discovery and verification suites.

mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use sudec::cayley::{synthesize, PulseSequence, SequenceKind, DEFAULT_BUDGET};
use sudec::group::catalog::{SPIN_LADDER_GROUPS, SU3_TABLE_GROUPS, SU3_TABLE_LABELS};
use sudec::group::{FiniteGroup, Representation};
use sudec::lie::DynkinLabel;
use sudec::qecc::{
    error_set, kl_check, multiplicity_scan, trivial_character_index, AmbientFamily, AmbientSpace, CodeSpace, ErrorKind, KlMode,
    KL_TOLERANCE,
};
use sudec::presets::{self, ScanPreset, SimPreset};
use sudec::sim::{sweep, write_csv, ModelKind, SweepEntry, SweepGrid};

#[derive(Parser, Debug)]
#[command(name = "sudec", version, about = "Finite-group decoupling sequences and symmetry-sector codes for qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for every output file.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Random seed; falls back to SUDEC_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file whose keys mirror the flag names; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps and scans (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Close a catalog group and summarize it.
    Group(GroupArgs),
    /// Trivial-irrep multiplicities over groups and labels.
    Scan(ScanArgs),
    /// Synthesize a pulse sequence from a Cayley graph.
    Sequence(SequenceArgs),
    /// Sweep average distances over a noise grid.
    Simulate(SimulateArgs),
    /// Multiplicity scans and Knill–Laflamme checks.
    Qecc(QeccArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", default)]
struct GroupArgs {
    /// Catalog name, e.g. Sigma72x3, Delta3n2, T.
    #[arg(long)]
    name: Option<String>,
    /// Family parameter for Delta3n2 and Delta6n2.
    #[arg(long)]
    n: Option<u32>,
    /// Divide out scalar matrices.
    #[arg(long)]
    quotient_center: bool,
    /// diag-X, p, p-prime, delta24, teddy or icosa.
    #[arg(long)]
    orient: Option<String>,
    /// Weyl permutation applied after the orientation: e, 12, 23, 13, 123, 132.
    #[arg(long)]
    weyl: Option<String>,
}

#[derive(Args, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", default)]
struct ScanArgs {
    /// Catalog names, comma separated.
    #[arg(long, value_delimiter = ',')]
    groups: Vec<String>,
    /// Dynkin labels separated by semicolons, e.g. "1,1;3,0".
    #[arg(long, value_delimiter = ';')]
    labels: Vec<String>,
    /// Every row and column of the SU(3) accessibility table.
    #[arg(long)]
    table3: bool,
    /// Point groups D2, D3, T, O, I against spin L = 0..max-l.
    #[arg(long)]
    fig2: bool,
    /// Largest spin for --fig2 [default: 30].
    #[arg(long)]
    max_l: Option<u32>,
    /// Output file name.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", default)]
struct SequenceArgs {
    /// fig6: Σ(72×3)/ℤ₃ in both pulse-simplifying frames.
    #[arg(long)]
    preset: Option<String>,
    /// Catalog name of the group to walk.
    #[arg(long)]
    group: Option<String>,
    /// Family parameter for Delta3n2 and Delta6n2.
    #[arg(long)]
    n: Option<u32>,
    /// Pulse labels from the matrix catalog (A–F, V–Z); default: the group's generators.
    #[arg(long, value_delimiter = ',')]
    generators: Vec<String>,
    /// Divide out scalar matrices.
    #[arg(long)]
    quotient_center: bool,
    /// eulerian or hamiltonian.
    #[arg(long)]
    kind: Option<String>,
    /// Frame for the group; implies --quotient-center.
    #[arg(long)]
    orient: Option<String>,
    /// Weyl permutation applied after the orientation.
    #[arg(long)]
    weyl: Option<String>,
    /// Free-evolution interval [default: 1].
    #[arg(long)]
    tau: Option<f64>,
    /// Step budget for the Hamiltonian search [default: 10000000].
    #[arg(long)]
    budget: Option<u64>,
    /// Output file name [default: sequence.json].
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", default)]
struct SimulateArgs {
    /// Sequence files, relative to --out.
    #[arg(long, value_delimiter = ',')]
    sequences: Vec<PathBuf>,
    /// fig5, fig9, fig10 or fig11.
    #[arg(long)]
    preset: Option<String>,
    /// random-anisotropic, random-general or nv.
    #[arg(long)]
    model: Option<String>,
    /// Random Hamiltonians per grid point.
    #[arg(long)]
    samples: Option<usize>,
    /// Number of qutrits.
    #[arg(long)]
    sites: Option<usize>,
    /// Disorder strengths τΔ, comma separated.
    #[arg(long, value_delimiter = ',')]
    tau_delta: Vec<f64>,
    /// Coupling strengths τΓ, comma separated.
    #[arg(long, value_delimiter = ',')]
    tau_gamma: Vec<f64>,
    /// Output file name [default: <preset>.csv or simulate.csv].
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", default)]
struct QeccArgs {
    /// fig7 (point groups over spin j) or fig8 (SU(3) groups over qutrits).
    #[arg(long)]
    preset: Option<String>,
    /// Catalog name of the symmetry group.
    #[arg(long)]
    group: Option<String>,
    /// Family parameter for Delta3n2 and Delta6n2.
    #[arg(long)]
    n: Option<u32>,
    /// Spin range `a..b` for a multiplicity scan.
    #[arg(long)]
    spin_scan: Option<String>,
    /// Qutrit-count range `a..b` for a multiplicity scan.
    #[arg(long)]
    qutrit_scan: Option<String>,
    /// Build a code on spin j.
    #[arg(long)]
    spin: Option<u32>,
    /// Build a code on the symmetric subspace of this many qutrits.
    #[arg(long)]
    qutrits: Option<usize>,
    /// `trivial` or a character index.
    #[arg(long)]
    character: Option<String>,
    /// identity, spin-linear, dephasing, dipolar, qutrit-single, qutrit-dephasing.
    #[arg(long)]
    errors: Option<String>,
    /// detect or correct.
    #[arg(long)]
    mode: Option<String>,
    /// Frame for the group: diag-X, delta24, teddy, icosa.
    #[arg(long)]
    orient: Option<String>,
    /// Weyl permutation applied after the orientation.
    #[arg(long)]
    weyl: Option<String>,
    /// Expected code dimension; default: the sector multiplicity.
    #[arg(long)]
    k: Option<usize>,
    /// Output file name for the scan or the KL report.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", default)]
struct VerifyArgs {
    /// all, lie, groups, sequences or qecc.
    #[arg(long)]
    suite: Option<String>,
}

/// Failure with its exit code.
#[derive(Debug)]
enum Failure {
    Lib(sudec::Error),
    BadInput(String),
    Verification(String),
}

impl From<sudec::Error> for Failure {
    fn from(e: sudec::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::BadInput(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::BadInput(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        use sudec::Error as E;
        match self {
            Failure::BadInput(_) => 2,
            Failure::Verification(_) => 1,
            Failure::Lib(e) => match e {
                E::InvalidInput(_) | E::InvalidLabel(_) | E::UnknownGroup(_) | E::Io(_) | E::Json(_) | E::Csv(_) | E::NotGenerating => 2,
                E::BudgetExhausted(_) => 3,
                E::DimensionMismatch(_) => 4,
                E::RankMismatch { .. } => 5,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::BadInput(s) => write!(f, "bad input: {s}"),
            Failure::Verification(s) => write!(f, "verification failed: {s}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Fills unset flags (null, false, empty list) from the config map.
fn merge<T: Serialize + DeserializeOwned>(args: T, config: &Map<String, Value>) -> Outcome<T> {
    let Value::Object(mut own) = serde_json::to_value(&args)? else {
        return Ok(args);
    };
    for (key, value) in own.iter_mut() {
        let unset = match value {
            Value::Null => true,
            Value::Bool(b) => !*b,
            Value::Array(a) => a.is_empty(),
            _ => false,
        };
        if unset {
            if let Some(v) = config.get(key) {
                *value = v.clone();
            }
        }
    }
    serde_json::from_value(Value::Object(own)).map_err(|e| Failure::BadInput(format!("config: {e}")))
}

struct Run {
    out: PathBuf,
    seed: u64,
    outputs: Vec<String>,
}

impl Run {
    fn path(&mut self, name: &str) -> Outcome<PathBuf> {
        std::fs::create_dir_all(&self.out)?;
        self.outputs.push(name.to_string());
        Ok(self.out.join(name))
    }

    fn write(&mut self, name: &str, text: &str) -> Outcome<()> {
        let p = self.path(name)?;
        std::fs::write(p, text)?;
        Ok(())
    }
}

fn parse_kind(s: &str) -> Outcome<SequenceKind> {
    match s {
        "eulerian" => Ok(SequenceKind::Eulerian),
        "hamiltonian" => Ok(SequenceKind::Hamiltonian),
        other => Err(Failure::BadInput(format!("unknown sequence kind {other}"))),
    }
}

fn parse_range(s: &str) -> Outcome<std::ops::RangeInclusive<usize>> {
    let (a, b) = s.split_once("..").ok_or_else(|| Failure::BadInput(format!("range {s} is not a..b")))?;
    let a: usize = a.trim().parse().map_err(|_| Failure::BadInput(format!("range start {a}")))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| Failure::BadInput(format!("range end {b}")))?;
    if a > b {
        return Err(Failure::BadInput(format!("empty range {s}")));
    }
    Ok(a..=b)
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Outcome<&'a str> {
    v.as_deref().ok_or_else(|| Failure::BadInput(format!("--{flag} is required")))
}

fn cmd_group(a: &GroupArgs, run: &mut Run) -> Outcome<Value> {
    let name = required(&a.name, "name")?;
    let g = presets::resolve_group(name, a.n, a.orient.as_deref(), a.weyl.as_deref(), a.quotient_center)?;
    let star = if g.contains_center() { "*" } else { "" };
    println!("group: {}", g.name());
    println!("order: {}{star}", g.order());
    println!("classes: {} (sizes {:?})", g.classes().len(), g.class_sizes());
    println!("center: {}", if g.contains_center() { "yes" } else { "no" });
    let file = format!("group_{}.json", presets::file_safe(g.name()));
    run.write(&file, &serde_json::to_string_pretty(&g.to_file())?)?;
    Ok(json!({ "group": g.name(), "order": g.order(), "contains_center": g.contains_center() }))
}

#[derive(Serialize)]
struct ScanCsvRow<'a> {
    group: &'a str,
    order: usize,
    contains_center: bool,
    label: String,
    multiplicity: u64,
    inaccessible: bool,
}

fn cmd_scan(a: &ScanArgs, run: &mut Run) -> Outcome<Value> {
    let (groups, labels): (Vec<FiniteGroup>, Vec<DynkinLabel>) = if a.table3 {
        let groups = SU3_TABLE_GROUPS.iter().map(|&(n, k)| FiniteGroup::builtin(n, k)).collect::<sudec::Result<_>>()?;
        let labels = SU3_TABLE_LABELS.iter().map(|&(p, q)| DynkinLabel::su3(p, q)).collect();
        (groups, labels)
    } else if a.fig2 {
        let max_l = a.max_l.unwrap_or(30);
        let groups = SPIN_LADDER_GROUPS.iter().map(|n| FiniteGroup::builtin(n, None)).collect::<sudec::Result<_>>()?;
        (groups, (0..=max_l).map(DynkinLabel::spin).collect())
    } else {
        let a = ScanArgs {
            labels: a.labels.iter().filter(|s| !s.trim().is_empty()).cloned().collect(),
            groups: a.groups.iter().filter(|s| !s.trim().is_empty()).cloned().collect(),
            ..Default::default()
        };
        if a.labels.is_empty() {
            return Err(Failure::BadInput("no labels given".into()));
        }
        if a.groups.is_empty() {
            return Err(Failure::BadInput("no groups given".into()));
        }
        let labels = a.labels.iter().map(|s| s.parse::<DynkinLabel>()).collect::<sudec::Result<_>>()?;
        let groups = a.groups.iter().map(|n| FiniteGroup::builtin(n, None)).collect::<sudec::Result<_>>()?;
        (groups, labels)
    };
    let file = a.file.clone().unwrap_or_else(|| if a.fig2 { "fig2.csv" } else if a.table3 { "table3.csv" } else { "scan.csv" }.into());
    let path = run.path(&file)?;
    let mut w = csv::Writer::from_path(path).map_err(sudec::Error::from)?;
    let mut summary = Vec::new();
    for g in &groups {
        let scan = g.accessibility_scan(&labels)?;
        let star = if g.contains_center() { "*" } else { "" };
        let marks: Vec<String> = scan
            .iter()
            .map(|r| if a.fig2 { r.multiplicity.to_string() } else if r.inaccessible { "Y".into() } else { "N".into() })
            .collect();
        println!("{:<20} {:>5}{star:<1} {}", g.name(), g.order(), marks.join(" "));
        if a.fig2 {
            if let Some(first) = scan.iter().skip(1).find(|r| !r.inaccessible) {
                println!("  first nontrivial invariant: L = {}", first.label.coeffs()[0] / 2);
            }
        }
        for r in &scan {
            w.serialize(ScanCsvRow {
                group: g.name(),
                order: g.order(),
                contains_center: g.contains_center(),
                label: r.label.to_string(),
                multiplicity: r.multiplicity,
                inaccessible: r.inaccessible,
            })
            .map_err(sudec::Error::from)?;
        }
        summary.push(json!({ "group": g.name(), "multiplicities": scan.iter().map(|r| r.multiplicity).collect::<Vec<_>>() }));
    }
    w.flush()?;
    Ok(json!({ "rows": summary }))
}

fn cmd_sequence(a: &SequenceArgs, run: &mut Run) -> Outcome<Value> {
    if let Some(p) = a.preset.as_deref() {
        if p != "fig6" {
            return Err(Failure::BadInput(format!("unknown sequence preset {p}")));
        }
        let mut files = Vec::new();
        for s in presets::constrained_pulse_sequences(run.seed)? {
            let file = format!("sequence_{}.json", presets::file_safe(&s.label));
            println!("{}: {} pulses", s.label, s.sequence.len());
            run.write(&file, &s.sequence.to_json()?)?;
            files.push(file);
        }
        return Ok(json!({ "preset": p, "files": files }));
    }
    let name = required(&a.group, "group")?;
    let kind = parse_kind(a.kind.as_deref().unwrap_or("eulerian"))?;
    // Pulses differing by a global phase are the same pulse, so an oriented
    // sequence is always built on the group modulo scalars.
    let quotient = a.quotient_center || a.orient.is_some();
    let g = if a.generators.is_empty() {
        presets::resolve_group(name, a.n, a.orient.as_deref(), a.weyl.as_deref(), quotient)?
    } else {
        presets::group_from_labels(name, &a.generators, a.orient.as_deref(), a.weyl.as_deref(), quotient)?
    };
    let mut seq = synthesize(&g, kind, run.seed, a.budget.unwrap_or(DEFAULT_BUDGET), a.tau.unwrap_or(1.0))?;
    if let Some(o) = a.orient.as_deref() {
        if let Some(rec) = presets::orientation(o, a.weyl.as_deref())?.map(|o| o.to_record()) {
            seq.orientation = Some(rec);
        }
    }
    println!("group: {} (order {})", g.name(), g.order());
    println!("pulses: {}", seq.len());
    let file = a.file.clone().unwrap_or_else(|| "sequence.json".into());
    run.write(&file, &seq.to_json()?)?;
    Ok(json!({ "group": g.name(), "order": g.order(), "pulses": seq.len(), "file": file }))
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn cmd_simulate(a: &SimulateArgs, run: &mut Run) -> Outcome<Value> {
    let preset = a.preset.as_deref().map(SimPreset::parse).transpose()?;
    let model = match a.model.as_deref() {
        Some("random-anisotropic") => ModelKind::RandomAnisotropic,
        Some("random-general") => ModelKind::RandomGeneral,
        Some("nv") => ModelKind::Nv,
        Some(other) => return Err(Failure::BadInput(format!("unknown model {other}"))),
        None => preset.map(SimPreset::model).unwrap_or(ModelKind::RandomAnisotropic),
    };
    let sites = a.sites.or(preset.map(SimPreset::sites)).unwrap_or(2);
    let rep = Representation::Tensor(sites);
    let mut entries: Vec<SweepEntry> = Vec::new();
    if let Some(p) = preset {
        for s in p.sequences(run.seed)? {
            run.write(&format!("sequence_{}.json", presets::file_safe(&s.label)), &s.sequence.to_json()?)?;
            let target = s.target.as_ref().map(|t| rep.image(t)).transpose()?;
            entries.push(SweepEntry { label: s.label, sequence: s.sequence, rep: rep.clone(), target });
        }
    }
    for path in &a.sequences {
        let seq = PulseSequence::load(&run.out.join(path))?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string());
        entries.push(SweepEntry { label, sequence: seq, rep: rep.clone(), target: None });
    }
    if entries.is_empty() {
        return Err(Failure::BadInput("no sequences: pass --sequences or --preset".into()));
    }
    let axis = log_grid(1e-4, 1e-1, 7);
    let mut with_zero = vec![0.0];
    with_zero.extend(&axis);
    let grid = SweepGrid {
        tau_delta_values: if a.tau_delta.is_empty() { with_zero.clone() } else { a.tau_delta.clone() },
        tau_gamma_values: if a.tau_gamma.is_empty() { with_zero } else { a.tau_gamma.clone() },
        n_hamiltonians: a.samples.unwrap_or(100),
        seed: run.seed,
    };
    let rows = sweep(&grid, &entries, model, sites)?;
    let file = a.file.clone().unwrap_or_else(|| format!("{}.csv", a.preset.as_deref().unwrap_or("simulate")));
    let path = run.path(&file)?;
    write_csv(&rows, std::fs::File::create(path)?)?;
    let labels: Vec<&str> = entries.iter().map(|e| e.label.as_str()).collect();
    println!("sequences: {}", labels.join(", "));
    println!("rows: {}", rows.len());
    Ok(json!({ "sequences": labels, "rows": rows.len(), "grid": grid, "model": model, "sites": sites }))
}

#[derive(Serialize)]
struct MultiplicityCsvRow<'a> {
    group: &'a str,
    parameter: usize,
    character_index: usize,
    trivial: bool,
    multiplicity: u64,
}

fn scan_group(g: &FiniteGroup, family: AmbientFamily, range: std::ops::RangeInclusive<usize>, w: &mut csv::Writer<std::fs::File>) -> Outcome<Value> {
    let rows = multiplicity_scan(g, family, range)?;
    let chars = g.one_dim_characters()?;
    let trivial = trivial_character_index(&chars);
    println!("{}:", g.name());
    for ci in 0..chars.len() {
        let ms: Vec<String> = rows.iter().filter(|r| r.character_index == ci).map(|r| r.multiplicity.to_string()).collect();
        let tag = if ci == trivial { " (trivial)" } else { "" };
        println!("  character {ci}{tag}: {}", ms.join(" "));
    }
    let first = rows.iter().find(|r| r.character_index == trivial && r.multiplicity >= 2).map(|r| r.parameter);
    if let Some(p) = first {
        println!("  trivial multiplicity first reaches 2 at {p}");
    }
    for r in &rows {
        w.serialize(MultiplicityCsvRow {
            group: g.name(),
            parameter: r.parameter,
            character_index: r.character_index,
            trivial: r.character_index == trivial,
            multiplicity: r.multiplicity,
        })
        .map_err(sudec::Error::from)?;
    }
    Ok(json!({ "group": g.name(), "rows": rows.len(), "trivial_reaches_two_at": first }))
}

fn cmd_qecc(a: &QeccArgs, run: &mut Run) -> Outcome<Value> {
    if let Some(p) = a.preset.as_deref() {
        let preset = ScanPreset::parse(p)?;
        let family = if preset == ScanPreset::Fig7 { AmbientFamily::Spin } else { AmbientFamily::SymmetricQudits };
        let file = a.file.clone().unwrap_or_else(|| format!("{p}.csv"));
        let mut w = csv::Writer::from_path(run.path(&file)?).map_err(sudec::Error::from)?;
        let mut groups = Vec::new();
        for name in preset.groups() {
            let g = FiniteGroup::builtin(name, None)?;
            groups.push(scan_group(&g, family, preset.range(), &mut w)?);
        }
        w.flush()?;
        return Ok(json!({ "preset": p, "groups": groups, "file": file }));
    }
    let name = required(&a.group, "group")?;
    let g = presets::resolve_group(name, a.n, a.orient.as_deref(), a.weyl.as_deref(), false)?;
    let scan = match (&a.spin_scan, &a.qutrit_scan) {
        (Some(r), _) => Some((AmbientFamily::Spin, parse_range(r)?)),
        (None, Some(r)) => Some((AmbientFamily::SymmetricQudits, parse_range(r)?)),
        _ => None,
    };
    if let Some((family, range)) = scan {
        let file = a.file.clone().unwrap_or_else(|| "multiplicities.csv".into());
        let mut w = csv::Writer::from_path(run.path(&file)?).map_err(sudec::Error::from)?;
        let summary = scan_group(&g, family, range, &mut w)?;
        w.flush()?;
        return Ok(json!({ "scan": summary, "file": file }));
    }
    let ambient = match (a.spin, a.qutrits) {
        (Some(j), None) => AmbientSpace::Spin { j },
        (None, Some(n)) => AmbientSpace::SymmetricQudits { d: 3, n },
        _ => return Err(Failure::BadInput("give exactly one of --spin, --qutrits, --spin-scan, --qutrit-scan".into())),
    };
    let chars = g.one_dim_characters()?;
    let ci = match a.character.as_deref().unwrap_or("trivial") {
        "trivial" => trivial_character_index(&chars),
        s => s.parse::<usize>().map_err(|_| Failure::BadInput(format!("character {s}")))?,
    };
    let chi = chars.get(ci).ok_or_else(|| Failure::BadInput(format!("{} has {} one-dimensional characters", g.name(), chars.len())))?;
    let k = match a.k {
        Some(k) => k,
        None => sudec::qecc::sector_multiplicity(&g, chi, &ambient)? as usize,
    };
    let code = CodeSpace::build(&g, ci, ambient, k)?;
    let kind = ErrorKind::parse(a.errors.as_deref().unwrap_or("identity"))?;
    let mode = match a.mode.as_deref().unwrap_or("correct") {
        "detect" => KlMode::Detect,
        "correct" => KlMode::Correct,
        other => return Err(Failure::BadInput(format!("unknown mode {other}"))),
    };
    let report = kl_check(&code, &error_set(&kind, &ambient)?, mode, KL_TOLERANCE);
    let file = a.file.clone().unwrap_or_else(|| "kl_report.json".into());
    run.write(&file, &serde_json::to_string_pretty(&report)?)?;
    run.write("codewords.json", &serde_json::to_string_pretty(&code.codeword_pairs())?)?;
    println!("group: {}  ambient: {ambient}  character: {ci}  k = {}", g.name(), code.k());
    println!(
        "KL {}: {} (max off-diagonal {:.2e}, max diagonal spread {:.2e})",
        if mode == KlMode::Correct { "correct" } else { "detect" },
        if report.pass { "pass" } else { "fail" },
        report.max_offdiag,
        report.max_diag_spread
    );
    let summary = json!({ "group": g.name(), "k": code.k(), "pass": report.pass, "file": file });
    if !report.pass {
        return Err(Failure::Verification(format!("Knill–Laflamme conditions fail for {}", g.name())));
    }
    Ok(summary)
}

fn write_manifest(run: &mut Run, command: &str, config: &Value, result: &Value) -> Outcome<()> {
    let stamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": run.seed,
        "config": config,
        "outputs": run.outputs,
        "result": result,
        "timestamp": stamp,
    });
    let p = run.out.join("manifest.json");
    std::fs::create_dir_all(&run.out)?;
    std::fs::write(p, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn load_config(path: Option<&Path>) -> Outcome<Map<String, Value>> {
    let Some(path) = path else { return Ok(Map::new()) };
    let text = std::fs::read_to_string(path)?;
    match serde_json::from_str(&text)? {
        Value::Object(m) => Ok(m),
        _ => Err(Failure::BadInput("config file must hold a JSON object".into())),
    }
}

fn execute(cli: Cli) -> Outcome<()> {
    let config = load_config(cli.config.as_deref())?;
    let seed = match cli.seed.or_else(|| config.get("seed").and_then(Value::as_u64)) {
        Some(s) => s,
        None => match std::env::var("SUDEC_SEED") {
            Ok(s) => s.parse().map_err(|_| Failure::BadInput(format!("SUDEC_SEED={s} is not an integer")))?,
            Err(_) => 0,
        },
    };
    let out = if cli.out == Path::new(".") {
        config.get("out").and_then(Value::as_str).map(PathBuf::from).unwrap_or(cli.out)
    } else {
        cli.out
    };
    if let Some(n) = cli.workers.or_else(|| config.get("workers").and_then(Value::as_u64).map(|n| n as usize)) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::BadInput(e.to_string()))?;
    }
    let mut run = Run { out, seed, outputs: Vec::new() };
    let (name, resolved, result) = match cli.command {
        Command::Group(a) => {
            let a = merge(a, &config)?;
            let r = cmd_group(&a, &mut run)?;
            ("group", serde_json::to_value(&a)?, r)
        }
        Command::Scan(a) => {
            let a = merge(a, &config)?;
            let r = cmd_scan(&a, &mut run)?;
            ("scan", serde_json::to_value(&a)?, r)
        }
        Command::Sequence(a) => {
            let a = merge(a, &config)?;
            let r = cmd_sequence(&a, &mut run)?;
            ("sequence", serde_json::to_value(&a)?, r)
        }
        Command::Simulate(a) => {
            let a = merge(a, &config)?;
            let r = cmd_simulate(&a, &mut run)?;
            ("simulate", serde_json::to_value(&a)?, r)
        }
        Command::Qecc(a) => {
            let a = merge(a, &config)?;
            let resolved = serde_json::to_value(&a)?;
            match cmd_qecc(&a, &mut run) {
                Ok(r) => ("qecc", resolved, r),
                Err(Failure::Verification(msg)) => {
                    write_manifest(&mut run, "qecc", &resolved, &json!({ "pass": false }))?;
                    return Err(Failure::Verification(msg));
                }
                Err(e) => return Err(e),
            }
        }
        Command::Verify(a) => {
            let a = merge(a, &config)?;
            let suite = a.suite.clone().unwrap_or_else(|| "all".into());
            let results = verify::run_suite(&suite)?;
            let mut failed = Vec::new();
            for (check, ok) in &results {
                println!("{} {check}", if *ok { "PASS" } else { "FAIL" });
                if !ok {
                    failed.push(check.clone());
                }
            }
            let r = json!({ "suite": suite, "checks": results.len(), "failed": failed });
            write_manifest(&mut run, "verify", &serde_json::to_value(&a)?, &r)?;
            if !failed.is_empty() {
                return Err(Failure::Verification(format!("{} of {} checks failed", failed.len(), results.len())));
            }
            return Ok(());
        }
    };
    write_manifest(&mut run, name, &resolved, &result)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
