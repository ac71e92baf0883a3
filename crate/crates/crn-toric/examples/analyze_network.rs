//! Structural analysis of a reaction network: counts, linkage classes,
//! reversibility, and the deficiency computed two independent ways.
//!
//! Run with the bundled futile cycle, or point it at any `.crn` file:
//!
//! ```text
//! cargo run --example analyze_network [path/to/network.crn]
//! ```

use crn_toric::graph::{deficiency, is_weakly_reversible, linkage_classes};
use crn_toric::model::parse_network;

fn main() -> crn_toric::Result<()> {
    let default = format!(
        "{}/corpus/futile_cycle.crn",
        env!("CARGO_MANIFEST_DIR")
    );
    let path = std::env::args().nth(1).unwrap_or(default);
    let net = parse_network(&std::fs::read_to_string(&path).expect("readable network file"))?;

    if let Some(name) = &net.name {
        println!("network: {name}");
    }
    println!(
        "species: {}",
        net.species
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("reactions:");
    for r in &net.reactions {
        println!(
            "  R{}: {} -> {} ; {}",
            r.id,
            net.complexes[r.reactant].render(&net.species),
            net.complexes[r.product].render(&net.species),
            r.rate_symbol
        );
    }

    let part = linkage_classes(&net);
    println!("linkage classes:");
    for (i, class) in part.classes.iter().enumerate() {
        let members: Vec<String> = class
            .iter()
            .map(|&c| net.complexes[c].render(&net.species))
            .collect();
        println!("  L{}: {{{}}}", i + 1, members.join(", "));
    }
    println!(
        "weakly reversible: {}",
        if is_weakly_reversible(&net) { "yes" } else { "no" }
    );

    let d = deficiency(&net)?;
    println!(
        "complexes n = {}, linkage classes l = {}, rank s = {}",
        d.num_complexes, d.num_linkage_classes, d.rank
    );
    println!(
        "deficiency: n - l - s = {}  (kernel dimension form agrees: {})",
        d.delta, d.delta_kernel
    );
    Ok(())
}
