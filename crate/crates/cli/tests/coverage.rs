mod support;

use std::collections::BTreeSet;

use genkahler_cli::scenario::COMMANDS;
use genkahler_cli::{run_scenario, Overrides, Scenario, COVERAGE};

#[test]
fn scenarios_exercise_every_operation() {
    let mut trace = BTreeSet::new();
    let mut commands = BTreeSet::new();
    for path in support::scenarios() {
        let scn = Scenario::load(&path).unwrap();
        commands.extend(scn.tasks.iter().map(|t| t.command.clone()));
        trace.extend(run_scenario(&scn, scn.settings(&Overrides::default()), 4).trace);
    }
    let missing: Vec<&str> = COVERAGE.iter().map(|(op, _)| *op).filter(|op| !trace.contains(op)).collect();
    assert!(missing.is_empty(), "operations never run: {missing:?}");
    for c in COMMANDS {
        assert!(commands.contains(*c), "no scenario runs `{c}`");
    }
}
