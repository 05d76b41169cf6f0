#![allow(dead_code)]

use std::path::{Path, PathBuf};

use genkahler_cli::{render, run_scenario, Overrides, Scenario};

pub fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

/// Shipped scenario files, sorted by name.
pub fn scenarios() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
        .expect("scenario directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

pub fn golden_path(scenario: &Path) -> PathBuf {
    scenario_dir().join("golden").join(scenario.file_name().expect("file name"))
}

/// Rendered report and exit code with the scenario's own settings.
pub fn run(path: &Path, jobs: usize) -> (String, i32) {
    let scn = Scenario::load(path).expect("scenario loads");
    let r = run_scenario(&scn, scn.settings(&Overrides::default()), jobs);
    (render(&r.json), r.exit_code)
}

pub fn blessing() -> bool {
    std::env::var_os("GENKAHLER_BLESS").is_some()
}
