//! Every checked-in pipeline script must succeed, and its report must be
//! byte-identical across two runs.

use std::path::PathBuf;
use std::process::Command;

fn pipelines_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../examples/pipelines")
}

#[test]
fn criterion_10_pipelines_are_reproducible() {
    let dir = pipelines_dir();
    let mut scripts: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("pipelines directory")
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension().map(|x| x == "vpg") == Some(true)).then_some(p)
        })
        .collect();
    scripts.sort();
    assert!(!scripts.is_empty(), "no pipeline scripts found");

    for script in &scripts {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_vpgkit"))
                .arg("pipeline")
                .arg("run")
                .arg(script)
                .output()
                .expect("spawn vpgkit")
        };
        let first = run();
        let second = run();
        let name = script.file_name().unwrap().to_string_lossy();
        assert!(
            first.status.success(),
            "{name} failed:\n{}{}",
            String::from_utf8_lossy(&first.stdout),
            String::from_utf8_lossy(&first.stderr)
        );
        assert!(second.status.success(), "{name} failed on the second run");
        assert_eq!(first.stdout, second.stdout, "{name} report is not reproducible");
        assert!(first.stderr.is_empty(), "{name} wrote to stderr");
    }
    println!(
        "criterion 10 ({} pipeline scripts exit 0 with byte-identical reports): PASS",
        scripts.len()
    );
}
