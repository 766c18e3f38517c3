use singcert::certificate::CertificateFile;
use singcert::cli::{main_with_args, EXIT_INCOMPLETE, EXIT_PROVEN, EXIT_USAGE};
use singcert::quadforms::CACHE_FILE;

fn run(args: &[&str]) -> i32 {
    let mut v = vec!["singcert"];
    v.extend_from_slice(args);
    main_with_args(v)
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["certify", "--case", "17"]), EXIT_USAGE);
    assert_eq!(run(&["certify", "--precision", "8192"]), EXIT_USAGE);
    assert_eq!(run(&["certify", "--prime", "15"]), EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]), EXIT_USAGE);
}

#[test]
fn certify_verify_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.toml");
    let cache = dir.path().join("cache");
    let code = run(&[
        "certify",
        "--case",
        "23",
        "--jobs",
        "2",
        "--cache-dir",
        cache.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PROVEN);
    assert!(cache.join(CACHE_FILE).exists());
    assert_eq!(run(&["verify", out.to_str().unwrap()]), EXIT_PROVEN);

    let text = std::fs::read_to_string(&out).unwrap();
    let file = CertificateFile::from_toml(&text).unwrap();
    let cert = &file.certificates[0];
    assert_eq!(cert.case, "23");
    assert_eq!(cert.residual.len(), 7);
    let place = cert.place.as_ref().unwrap();
    assert_eq!((place.prime, place.first_scan_prime), (23, 11));

    let mut bad = file.clone();
    bad.certificates[0].nonvanishing[0].norm = "12345".into();
    assert!(bad.recheck().is_err());
    let mut bad = file.clone();
    bad.certificates[0].residual.pop();
    assert!(bad.recheck().is_err());

    let bumped = text.replace("schema_version = 1", "schema_version = 2");
    let path = dir.path().join("bumped.toml");
    std::fs::write(&path, bumped).unwrap();
    assert_ne!(run(&["verify", path.to_str().unwrap()]), EXIT_PROVEN);
}

#[test]
fn corrupted_cache_makes_the_run_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(CACHE_FILE), "-23: 1,2,3,1\n").unwrap();
    let out = dir.path().join("cert.toml");
    let code = run(&[
        "certify",
        "--case",
        "23",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_INCOMPLETE);
    let file = CertificateFile::from_toml(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(file.certificates[0].incomplete.is_some());
}

#[test]
fn alternative_prime_still_proves_case_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.toml");
    let code = run(&["certify", "--case", "23", "--prime", "11", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_PROVEN);
    let file = CertificateFile::from_toml(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let place = file.certificates[0].place.as_ref().unwrap();
    assert_eq!((place.prime, place.e, place.v0), (11, 1, 2));
    file.recheck().unwrap();
}

#[test]
fn oracle_subcommands() {
    assert_eq!(run(&["oracle", "valuation-scan", "--case", "31", "--max-m", "40"]), EXIT_PROVEN);
    assert_eq!(run(&["oracle", "height-laws", "--trials", "3"]), EXIT_PROVEN);
}
