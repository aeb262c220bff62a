//! The acceptance battery: ten criteria, one visible PASS or FAIL line each.
//! Every criterion runs even after an earlier failure, and the process exits
//! nonzero if any line reads FAIL.

use equichar_cli::battery::{self, Check};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

fn criterion(number: usize, name: &str, body: impl FnOnce() -> Result<(), String>) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let note = match outcome {
        Ok(Ok(())) => None,
        Ok(Err(msg)) => Some(msg),
        Err(panic) => Some(
            panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()),
        ),
    };
    match &note {
        None => println!("criterion {number:02} ({name}): PASS"),
        Some(msg) => println!("criterion {number:02} ({name}): FAIL - {msg}"),
    }
    note.is_none()
}

fn demand(check: Check) -> Result<(), String> {
    if check.passed {
        Ok(())
    } else {
        Err(format!("{}: {}", check.name, check.detail))
    }
}

fn command_line_contract() -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_equichar");
    let goldens: &[(&[&str], &str)] = &[
        (&["relations", "--n", "2"], include_str!("goldens/relations_n2.txt")),
        (
            &["presentation", "--family", "u", "--rank", "2"],
            include_str!("goldens/presentation_u2.txt"),
        ),
        (
            &["map", "--kind", "tensor-line", "--rank", "1"],
            include_str!("goldens/map_tensor_line_1.txt"),
        ),
    ];
    for (args, want) in goldens {
        let out = Command::new(bin)
            .args(*args)
            .output()
            .map_err(|e| format!("cannot run the binary: {e}"))?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {:?}", out.status.code()));
        }
        let got = String::from_utf8(out.stdout).map_err(|_| "output is not utf8".to_string())?;
        if got != *want {
            return Err(format!("{args:?} drifted from its golden output"));
        }
    }
    let start = Instant::now();
    let out = Command::new(bin)
        .args(["verify", "--suite", "all"])
        .output()
        .map_err(|e| format!("cannot run the binary: {e}"))?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "verify --suite all failed:\n{}",
            String::from_utf8_lossy(&out.stdout)
        ));
    }
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("verify --suite all took {elapsed:?}, over the five minute budget"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut all = true;
    all &= criterion(1, "decompose round trip", || demand(battery::round_trip()));
    all &= criterion(2, "relation window closed forms", || demand(battery::relation_window_forms()));
    all &= criterion(3, "graded dimension oracles", || demand(battery::graded_dimensions()));
    all &= criterion(4, "minimal generating sets", || demand(battery::minimal_generators()));
    all &= criterion(5, "induced map closed forms", || {
        demand(battery::closed_forms())?;
        demand(battery::forgetful_tails())
    });
    all &= criterion(6, "stabilized classes", || demand(battery::stable_classes()));
    all &= criterion(7, "relation transport", || demand(battery::relation_transport()));
    all &= criterion(8, "special unitary quotients", || demand(battery::special_unitary()));
    all &= criterion(9, "stem groups", || {
        demand(battery::stem_products())?;
        demand(battery::stem_group_table())?;
        demand(battery::stem_frobenius())
    });
    all &= criterion(10, "command line goldens and verify", command_line_contract);
    if all {
        println!("acceptance: all 10 criteria hold");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: at least one criterion fails");
        ExitCode::FAILURE
    }
}
