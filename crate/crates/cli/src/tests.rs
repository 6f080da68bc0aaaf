use std::path::{Path, PathBuf};

use super::*;

/// Runs the command line with `--out` pointing into a scratch directory and
/// returns the result with what was written.
fn cdseg(args: &[&str]) -> (Result<(), Failure>, String) {
    let dir = scratch();
    let out = dir.join("out");
    let mut argv = vec!["cdseg", "--out", out.to_str().unwrap()];
    argv.extend_from_slice(args);
    let result = run(Cli::try_parse_from(argv).unwrap());
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    std::fs::remove_dir_all(&dir).unwrap();
    (result, text)
}

fn scratch() -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let n = NEXT.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!("cdseg-cli-{}-{n}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn code(result: &Result<(), Failure>) -> u8 {
    match result {
        Ok(()) => 0,
        Err(Failure::Violations) => 1,
        Err(Failure::Config(_)) => 2,
    }
}

fn oracle_script() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/box_oracle.sh");
    format!("extern:sh '{}'", path.display())
}

#[test]
fn exit_codes() {
    assert_eq!(code(&cdseg(&["verify", "order:pow2", "--window", "2"]).0), 0);
    assert_eq!(code(&cdseg(&["verify", "waterline", "obs1", "--window", "3"]).0), 1);
    assert_eq!(code(&cdseg(&["render", "bogus", "--pair", "0,0:1,1"]).0), 2);
    assert_eq!(code(&cdseg(&["verify", "extern:true", "--window", "1"]).0), 2);
    assert_eq!(code(&cdseg(&["extract", "order:pow2", "--domain", "5,1"]).0), 2);
    assert_eq!(
        code(&cdseg(&["render", "box", "--pair", "0,0:9,9", "--bounds", "0,0,4,4"]).0),
        2
    );
}

#[test]
fn violations_are_json_lines() {
    let (_, text) = cdseg(&["verify", "waterline", "obs1", "--window", "3"]);
    assert_eq!(
        text.lines().next(),
        Some(r#"{"axiom":"OBS1","witness":[[-3,-3],[-2,-2],-5]}"#)
    );
    assert!(text.lines().all(|l| l.starts_with(r#"{"axiom":"OBS1""#)));
}

#[test]
fn extract_prints_induced_orders() {
    let (_, text) = cdseg(&["extract", "waterline", "--point", "0,-2", "--domain", "-2,5"]);
    assert_eq!(text, "0 1 2 3 4 5 -1 -2\n");
    let (_, text) = cdseg(&["extract", "order:pow2", "--global", "--window", "4", "--domain", "5,11"]);
    assert_eq!(text, "7 11 5 9 6 10 8\n");
}

#[test]
fn render_writes_svg() {
    let (result, svg) = cdseg(&["render", "order:pow2", "--fan", "4"]);
    assert!(result.is_ok());
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg, cdseg(&["render", "order:pow2", "--fan", "4"]).1);
}

#[test]
fn sweep_csv_follows_the_seed() {
    let args = ["sweep", "pow2", "--random", "200", "--seed", "3", "--pairs"];
    let (_, a) = cdseg(&args);
    assert_eq!(a, cdseg(&args).1);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some(SweepRow::CSV_HEADER));
    assert_eq!(lines.count(), 200);
    assert_ne!(
        a,
        cdseg(&["sweep", "pow2", "--random", "200", "--seed", "4", "--pairs"]).1
    );
}

#[test]
fn external_oracles_plug_in() {
    let system = oracle_script();
    assert_eq!(code(&cdseg(&["verify", &system, "axioms", "--window", "2"]).0), 0);
    let direct = cdseg(&["render", "box", "--pair", "-2,1:3,-1"]).1;
    assert_eq!(direct, cdseg(&["render", &system, "--pair", "-2,1:3,-1"]).1);
}

#[test]
fn lines_report_parallels() {
    let (_, text) = cdseg(&["lines", "--slope", "ratinc:3", "--diag", "-8,8", "--through", "1,-1"]);
    assert!(text.contains("contains own segments: true"));
    assert!(text.contains("parallels through (1,-1): 2 (ratinc:3 ratexc:3)"));
}
