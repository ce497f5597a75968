//! Human-readable rendering of reports.

use qdeform::analyze::DeformationReport;
use qdeform::hopf::AxiomCheck;

pub fn render_report(r: &DeformationReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("deformation report — dimension {}\n", r.dim));
    s.push_str(&format!(
        "  commutative: {:<5}  cocommutative: {:<5}  trivial deformation: {}\n",
        r.commutative, r.cocommutative, r.deformation_trivial
    ));
    if r.wedderburn_dims.is_empty() {
        s.push_str("  dual blocks: (skipped)\n");
    } else {
        s.push_str(&format!(
            "  dual blocks: {:?}   center dimension: {}\n",
            r.wedderburn_dims, r.center_dim
        ));
    }
    s.push_str(&format!("  cocycle residual: {:.3e}\n", r.cocycle_residual));
    s.push_str(&format!(
        "  duality: {}\n",
        match r.duality_pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "(skipped)",
        }
    ));
    render_checks(&mut s, "axioms", &r.axioms);
    if !r.norm_checks.is_empty() {
        render_checks(&mut s, "norm checks", &r.norm_checks);
    }
    if !r.notes.is_empty() {
        s.push_str("  notes:\n");
        for n in &r.notes {
            s.push_str(&format!("    - {n}\n"));
        }
    }
    s.push_str(&format!(
        "  overall: {}\n",
        if r.all_pass() { "PASS" } else { "FAIL" }
    ));
    s
}

pub fn render_checks(s: &mut String, label: &str, checks: &[AxiomCheck]) {
    let passed = checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!("  {label}: {passed}/{} pass\n", checks.len()));
    for c in checks {
        if !c.passed {
            s.push_str(&format!(
                "    [FAIL] {} — {}\n",
                c.name,
                c.witness.as_deref().unwrap_or("(no witness)")
            ));
        }
    }
}
