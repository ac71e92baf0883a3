//! Symbolic tree constants of a weakly reversible network: for each
//! complex, the sum over its rooted spanning in-trees of the product of
//! edge rates. These constants span the kernel of the kinetic matrix and
//! become the coefficients of the binomial steady-state description.
//!
//! ```text
//! cargo run --example tree_constants [path/to/network.crn]
//! ```

use std::collections::BTreeMap;

use crn_toric::model::parse_network;
use crn_toric::rat::{rat_i64, Rat};
use crn_toric::trees::tree_constants;

fn main() -> crn_toric::Result<()> {
    let default = format!(
        "{}/corpus/futile_translated.crn",
        env!("CARGO_MANIFEST_DIR")
    );
    let path = std::env::args().nth(1).unwrap_or(default);
    let net = parse_network(&std::fs::read_to_string(&path).expect("readable network file"))?;

    let constants = tree_constants(&net)?;
    println!("tree constants:");
    for (i, k) in constants.iter().enumerate() {
        println!(
            "  K[{}]  ({})  = {}",
            i + 1,
            net.complexes[i].render(&net.species),
            k
        );
    }

    // Numeric sanity at unit rates.
    let ones: BTreeMap<String, Rat> = net
        .reactions
        .iter()
        .map(|r| (r.rate_symbol.clone(), rat_i64(1)))
        .collect();
    let values: Vec<String> = constants
        .iter()
        .map(|k| k.eval(&ones).map(|v| v.to_string()))
        .collect::<crn_toric::Result<_>>()?;
    println!("at unit rates: [{}]", values.join(", "));
    Ok(())
}
