//! Report-layout stability: a committed fixture pins the exact JSON the
//! verification sweep emits for a fixed seed (wall-clock fields blanked), and
//! the CLI must reproduce itself byte-for-byte across identical invocations.
//!
//! Regenerate the fixture after an intentional layout change with
//! `GOLDEN_REGEN=1 cargo test -p gme --test report_golden`.

use std::path::Path;
use std::process::Command;

use gme::harness::run_all;

fn rendered_fixture() -> String {
    let mut report = run_all(3, 5).unwrap();
    for suite in &mut report.suites {
        suite.wall_ms = 0;
    }
    let mut text = serde_json::to_string_pretty(&report).unwrap();
    text.push('\n');
    text
}

#[test]
fn report_layout_matches_the_committed_fixture() {
    let rendered = rendered_fixture();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/report-q3-seed5.json");
    if std::env::var_os("GOLDEN_REGEN").is_some() {
        std::fs::write(&path, &rendered).unwrap();
        return;
    }
    let committed = std::fs::read_to_string(&path)
        .expect("missing fixture; regenerate with GOLDEN_REGEN=1");
    assert_eq!(
        rendered, committed,
        "report layout drifted from the committed fixture"
    );
}

#[test]
fn cli_report_bytes_are_identical_across_identical_invocations() {
    let exe = env!("CARGO_BIN_EXE_gme");
    let args = ["verify", "all", "--q-max", "3", "--seed", "7", "--json"];
    let first = Command::new(exe).args(args).output().unwrap();
    let second = Command::new(exe).args(args).output().unwrap();
    assert!(first.status.success() && second.status.success());

    let strip = |bytes: &[u8]| -> String {
        let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
        if let Some(suites) = v["suites"].as_array_mut() {
            for s in suites {
                s["wall_ms"] = serde_json::Value::from(0u64);
            }
        }
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&first.stdout), strip(&second.stdout));
}
