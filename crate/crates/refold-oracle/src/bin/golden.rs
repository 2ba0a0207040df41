//! Regenerates the golden files under crates/refold/tests/golden from the
//! brute-force oracle. Run from the workspace root:
//!
//!     cargo run -p refold-oracle --bin golden
//!
//! The files are committed; the test suite recomputes the oracle results and
//! fails if they drift.

use std::path::PathBuf;

use refold_oracle::fixtures;
use refold_oracle::golden::{behavior_table, step_table};

fn main() {
    let out_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../refold/tests/golden");
    std::fs::create_dir_all(&out_dir).expect("create golden dir");

    let write = |name: &str, content: String| {
        std::fs::write(out_dir.join(name), content).unwrap_or_else(|e| panic!("write {name}: {e}"));
        println!("  {name}");
    };

    write("lamp_step.txt", step_table(&fixtures::lamp()));
    write("lamp_echo_step.txt", step_table(&fixtures::lamp_echo()));
    write("cruise_step.txt", step_table(&fixtures::cruise()));
    write("adder_step.txt", step_table(&fixtures::adder()));

    write("lamp_behaviors_h2.txt", behavior_table(&fixtures::lamp(), 2));
    write("adder_behaviors_h3.txt", behavior_table(&fixtures::adder(), 3));
    write("cruise_behaviors_h2.txt", behavior_table(&fixtures::cruise(), 2));

    println!("golden files written to {}", out_dir.display());
}
