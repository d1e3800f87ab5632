//! `DKIT_BUDGET` is process-wide, so it gets its own test binary.

#[test]
fn environment_budget_overrides_config_and_yields_to_flag() {
    let dir = std::env::temp_dir().join(format!("dkit-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("big.conf");
    std::fs::write(&cfg, "budget = 2^20\n").unwrap();
    let cfg = cfg.display().to_string();
    std::env::set_var("DKIT_BUDGET", "4");
    let run = |extra: &[&str]| {
        let mut argv = vec!["dkit", "census", "enumerate", "--ring", "fp 2", "--n", "3", "--config", &cfg];
        argv.extend_from_slice(extra);
        dkit::run(argv)
    };
    let (code, _, err) = run(&[]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"));
    let (code, out, _) = run(&["--budget", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 8);
    std::env::remove_var("DKIT_BUDGET");
}
