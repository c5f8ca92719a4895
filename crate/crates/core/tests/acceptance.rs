//! The twelve reproduction criteria, run at their stated tolerances. Prints
//! one PASS/FAIL line per criterion with the deciding measurement and exits
//! nonzero if any fails.

use biharm_core::geom::DiffMode;
use biharm_core::verify::{checks, Status, VerifyConfig};

fn criterion(id: u8, mode: DiffMode) -> bool {
    let all = checks();
    let check = all.iter().find(|c| c.id == id).expect("known criterion");
    let o = check.run(&VerifyConfig { mode });
    let status = if o.status == Status::Pass {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "criterion {:>2} [{mode}] {:<26} {status}  measured {:.3e}  threshold {:.1e}",
        o.id, o.name, o.measured, o.threshold
    );
    for m in &o.measurements {
        println!(
            "    {} {:e} (bound {:e})",
            if m.passed() { "ok  " } else { "FAIL" },
            m.value,
            m.threshold
        );
        println!("        {}", m.label);
    }
    if let Some(e) = &o.error {
        println!("    error: {e}");
    }
    o.status == Status::Pass
}

fn main() {
    let mut runs: Vec<(u8, DiffMode)> = (1..=12).map(|id| (id, DiffMode::Analytic)).collect();
    // the conformal law also has a stated finite-difference tolerance
    runs.push((6, DiffMode::FiniteDifference { step: 1e-3 }));
    let failed: Vec<_> = runs
        .into_iter()
        .filter(|&(id, mode)| !criterion(id, mode))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
