use sudec::cayley::PulseSequence;
use sudec::group::{FiniteGroup, GroupFile};
use sudec::mat::frobenius;
use sudec::presets::quotient_eulerian;
use sudec::sim::{write_csv, SweepRow};

#[test]
fn sequence_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d27.json");
    let seq = quotient_eulerian("Delta27/Z3", &["C", "E"], None, 3).unwrap();
    seq.save(&path).unwrap();
    let back = PulseSequence::load(&path).unwrap();
    assert_eq!(back.len(), seq.len());
    assert_eq!(back.kind, seq.kind);
    assert_eq!(back.group, seq.group);
    for (a, b) in seq.pulses.iter().zip(&back.pulses) {
        assert_eq!(a.label, b.label);
        assert!(frobenius(&(&a.unitary - &b.unitary)) < 1e-15);
    }
}

#[test]
fn malformed_sequence_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"kind":"literal","tau":1.0,"dim":3,"pulses":[{"label":"X","unitary":[[1,0]]}]}"#).unwrap();
    assert!(PulseSequence::load(&path).is_err());
    assert!(PulseSequence::load(&dir.path().join("missing.json")).is_err());
}

#[test]
fn group_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("group.json");
    let g = FiniteGroup::builtin("Sigma72x3", None).unwrap();
    std::fs::write(&path, serde_json::to_string(&g.to_file()).unwrap()).unwrap();
    let file: GroupFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.order, 216);
    assert!(file.contains_center);
    let back = FiniteGroup::from_file(&file).unwrap();
    assert_eq!(back.order(), g.order());
    assert_eq!(back.class_sizes(), g.class_sizes());
}

#[test]
fn sweep_csv_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let rows = vec![
        SweepRow { sequence_label: "a".into(), tau_delta: 1e-3, tau_gamma: 0.0, mean_distance: 2.5e-7, n_samples: 10, seed: 4 },
        SweepRow { sequence_label: "NoDD".into(), tau_delta: 1e-3, tau_gamma: 0.0, mean_distance: 1e-3, n_samples: 10, seed: 4 },
    ];
    write_csv(&rows, std::fs::File::create(&path).unwrap()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("sequence_label,tau_delta,tau_gamma,mean_distance,n_samples,seed"));
    let back: Vec<SweepRow> = csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(back, rows);
}
