//! Extreme currents of the flux cone: the finitely many nonnegative flux
//! modes that generate every steady-state flux. Each is classified as
//! cyclic (no net complex formation) or stoichiometric (cancellation only
//! at the species level).
//!
//! ```text
//! cargo run --example enumerate_currents [path/to/network.crn]
//! ```

use crn_toric::cone::{extreme_currents, CurrentKind};
use crn_toric::model::parse_network;
use num::Zero;

fn main() -> crn_toric::Result<()> {
    let default = format!(
        "{}/corpus/futile_cycle.crn",
        env!("CARGO_MANIFEST_DIR")
    );
    let path = std::env::args().nth(1).unwrap_or(default);
    let net = parse_network(&std::fs::read_to_string(&path).expect("readable network file"))?;

    let currents = extreme_currents(&net)?;
    println!("{} extreme current(s)", currents.len());
    for (i, cur) in currents.iter().enumerate() {
        let kind = match cur.kind {
            CurrentKind::Cyclic => "cyclic",
            CurrentKind::Stoichiometric => "stoichiometric",
        };
        let terms: Vec<String> = cur
            .vector
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(j, w)| {
                if w == &num::one() {
                    format!("R{}", j + 1)
                } else {
                    format!("{w}*R{}", j + 1)
                }
            })
            .collect();
        println!("  E{} ({kind}): {}", i + 1, terms.join(" + "));
        println!("    weights: {:?}", cur.vector.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    }
    Ok(())
}
