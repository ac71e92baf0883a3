//! Exact sign-vector conditions for uniqueness and multistationarity:
//! compares the sign patterns realized by the stoichiometric subspace with
//! those of the kinetic-order subspace. For the futile cycle both
//! conditions fail, with an explicit separating witness.
//!
//! ```text
//! cargo run --example sign_conditions
//! ```

use crn_toric::model::parse_network;
use crn_toric::steady_state::{sign_condition_report, DEFAULT_SIGN_DIM_CAP};
use crn_toric::translation::parse_translation_spec;

fn main() -> crn_toric::Result<()> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let net = parse_network(
        &std::fs::read_to_string(format!("{dir}/corpus/futile_cycle.crn")).unwrap(),
    )?;
    let spec = std::fs::read_to_string(format!("{dir}/corpus/futile_cycle.shift")).unwrap();
    let t = parse_translation_spec(&net, &spec)?;

    let report = sign_condition_report(&t, DEFAULT_SIGN_DIM_CAP)?;
    println!(
        "distinct sign patterns: stoichiometric {}, kinetic-order {}",
        report.sigma_s.len(),
        report.sigma_s_tilde.len()
    );
    println!("sign sets equal: {}", report.sign_equal);
    if let Some(w) = &report.incompatibility_witness {
        println!("separating witness: {w}");
    }
    println!(
        "uniqueness condition holds: {}",
        report.uniqueness_condition
    );
    println!(
        "multistationarity condition holds: {}",
        report.multistationarity_condition
    );
    if let Some(w) = &report.multistationarity_witness {
        println!("multistationarity witness: {w}");
    }
    Ok(())
}
