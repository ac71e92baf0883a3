//! The binomial steady-state description: after translating the futile
//! cycle, positive steady states are exactly the positive zeros of a
//! handful of binomials whose coefficients are tree constants, and the
//! solution set is a coset of an explicit monomial parametrization.
//!
//! ```text
//! cargo run --example binomial_steady_states
//! ```

use crn_toric::model::parse_network;
use crn_toric::steady_state::{binomial_generators, parametrization};
use crn_toric::translation::parse_translation_spec;

fn main() -> crn_toric::Result<()> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let net = parse_network(
        &std::fs::read_to_string(format!("{dir}/corpus/futile_cycle.crn")).unwrap(),
    )?;
    let spec = std::fs::read_to_string(format!("{dir}/corpus/futile_cycle.shift")).unwrap();
    let t = parse_translation_spec(&net, &spec)?;

    let binomials = binomial_generators(&t)?;
    println!("steady states are the positive solutions of:");
    for b in &binomials {
        println!("  {} = 0", b.render(&net.species));
    }

    let (s_tilde, perp) = parametrization(&t)?;
    let render = |vecs: &crn_toric::linalg::SubspaceBasis| -> Vec<String> {
        vecs.vectors()
            .iter()
            .map(|v| {
                let entries: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", entries.join(", "))
            })
            .collect()
    };
    println!(
        "kinetic-order subspace (dimension {}): {}",
        s_tilde.dim(),
        render(&s_tilde).join(", ")
    );
    println!(
        "its orthogonal complement (dimension {}): {}",
        perp.dim(),
        render(&perp).join(", ")
    );
    println!(
        "positive steady states form a {}-parameter monomial family",
        s_tilde.dim()
    );
    Ok(())
}
