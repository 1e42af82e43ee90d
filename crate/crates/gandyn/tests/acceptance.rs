//! The acceptance gate: every criterion of the verification suite runs
//! at its pinned tolerance; one pass/fail line prints per criterion.

use gandyn::acceptance::run_suite;

#[test]
fn full_acceptance_suite() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let report = run_suite(42, Some(tmp.path()), None).expect("suite ran");
    let mut all_output = String::new();
    for c in &report.criteria {
        all_output.push_str(&c.summary_line());
        all_output.push('\n');
        all_output.push_str(&c.detail_lines());
    }
    println!("{all_output}");
    assert!(
        report.all_pass(),
        "acceptance criteria failed:\n{all_output}"
    );
    assert_eq!(report.criteria.len(), 12);
}
