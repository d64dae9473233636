use s6lag::report::*;

fn scratch_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("s6lag-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn every_example_verifies() {
    for id in EXAMPLE_IDS {
        let r = run_verify(&RunConfig::new(*id)).unwrap();
        let failing: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| &c.name).collect();
        assert!(r.pass, "{id}: {failing:?}");
        assert!(r.checks.windows(2).all(|w| w[0].name <= w[1].name));
        assert!(r.checks.iter().all(|c| !c.anchor.is_empty()));
    }
}

#[test]
fn l0_and_l2_carry_their_curvature_rows() {
    let l0 = run_verify(&RunConfig::new("L0")).unwrap();
    let l2 = run_verify(&RunConfig::new("L2")).unwrap();
    for r in [&l0, &l2] {
        assert!(r.checks.iter().any(|c| c.name == "curvature" && c.pass));
    }
    let class = l2.checks.iter().find(|c| c.name == "cubic_class").unwrap();
    assert!(class.anchor.contains("A4"));
}

#[test]
fn negative_control_is_marked_expected_fail() {
    let r = run_verify(&RunConfig::new("N1_clifford")).unwrap();
    let lag = r.checks.iter().find(|c| c.name == "lagrangian").unwrap();
    assert!(lag.expected_fail && lag.pass && lag.residual > lag.tol);
    assert!(r.pass);
}

#[test]
fn finite_difference_mode_agrees() {
    let mut cfg = RunConfig::new("L2");
    cfg.jet_mode = JetMode::FiniteDifference;
    let r = run_verify(&cfg).unwrap();
    assert!(r.pass, "{}", r.to_json());
}

#[test]
fn tighter_tolerance_fails_honestly() {
    let mut cfg = RunConfig::new("L4_boruvka");
    cfg.tolerances.lagrangian = 1e-14;
    let r = run_verify(&cfg).unwrap();
    assert!(!r.pass);
    assert!(r.checks.iter().any(|c| c.name == "lagrangian" && !c.pass));
}

#[test]
fn reports_are_byte_stable() {
    let a = run_sweep(Suite::Tubes, 11, 8).unwrap();
    let b = run_sweep(Suite::Tubes, 11, 8).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.pass);
    assert!(a.reports.iter().any(|r| r.checks.iter().any(|c| c.expected_fail)));
}

#[test]
fn sweep_files_round_trip() {
    let dir = scratch_dir("sweep");
    let s = run_sweep(Suite::Cubics, 5, 8).unwrap();
    s.write_json(&dir.join("s.json")).unwrap();
    s.write_csv(&dir.join("s.csv")).unwrap();
    let back: SweepReport = serde_json::from_str(&std::fs::read_to_string(dir.join("s.json")).unwrap()).unwrap();
    assert_eq!(back, s);
    let csv = std::fs::read_to_string(dir.join("s.csv")).unwrap();
    let rows = s.reports.iter().map(|r| r.checks.len()).sum::<usize>();
    assert_eq!(csv.lines().count(), rows + 1);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 5));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn io_errors_name_the_path() {
    let s = run_sweep(Suite::Cubics, 5, 8).unwrap();
    let bad = std::path::Path::new("/nonexistent-dir/x.csv");
    let err = s.write_csv(bad).unwrap_err();
    assert!(!err.is_config());
    assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
}

#[test]
fn config_files_load() {
    let dir = scratch_dir("cfg");
    let path = dir.join("c.json");
    std::fs::write(&path, r#"{"example": "L1", "grid": 9, "jet_mode": "finite_difference"}"#).unwrap();
    let cfg = RunConfig::load(&path).unwrap();
    assert_eq!(cfg.grid, 9);
    assert_eq!(cfg.jet_mode, JetMode::FiniteDifference);
    std::fs::write(&path, r#"{"example": "L1", "tolerances": {"lagrangian": 1e-8}}"#).unwrap();
    assert!(matches!(RunConfig::load(&path), Err(ReportError::Format { .. })));
    std::fs::remove_dir_all(dir).ok();
}
