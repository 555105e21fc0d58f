//! End-to-end gates for every headline result. Run with `--nocapture` to
//! watch the lines appear; each criterion prints exactly one verdict line.

use maxdrag::reproduce::{run_criterion, CriterionOutcome};

#[test]
fn acceptance_criteria() {
    let mut failed: Vec<CriterionOutcome> = Vec::new();
    for index in 1..=11 {
        let outcome = run_criterion(index);
        let verdict = if outcome.pass() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {:<26} {verdict} ({} ms)",
            outcome.index, outcome.name, outcome.runtime_ms
        );
        if !outcome.pass() {
            for gate in &outcome.gates {
                println!("    {}", gate.describe());
            }
            failed.push(outcome);
        }
    }
    assert!(
        failed.is_empty(),
        "{} criteria failed: {}",
        failed.len(),
        failed
            .iter()
            .map(|c| c.name)
            .collect::<Vec<_>>()
            .join(", ")
    );
}
