//! Automatic translation search on the two-stage phosphorylation cycle:
//! the search pairs stoichiometric flux generators with reaction orderings
//! and returns every admissible translation, from which we pick a proper,
//! weakly reversible one with deficiency zero.
//!
//! ```text
//! cargo run --example search_translations
//! ```

use crn_toric::graph::linkage_classes;
use crn_toric::model::parse_network;
use crn_toric::translation::{classify, find_translations, SearchOptions};

fn main() -> crn_toric::Result<()> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let net = parse_network(
        &std::fs::read_to_string(format!("{dir}/corpus/multiple_futile_cycle_2.crn")).unwrap(),
    )?;
    let found = find_translations(&net, &SearchOptions::default())?;
    println!("{} candidate translation(s) found", found.len());

    let best = found
        .iter()
        .find(|t| {
            let cls = classify(t).unwrap();
            cls.proper && cls.strong && cls.deficiency == 0 && cls.kinetic_deficiency == 0
        })
        .expect("a proper weakly reversible deficiency-zero candidate exists");
    let cls = classify(best)?;
    let tnet = &best.translated.base;
    println!(
        "selected candidate: proper = {}, weakly reversible = {}, deficiency = {}",
        cls.proper, cls.strong, cls.deficiency
    );
    println!(
        "translated linkage classes: {}",
        linkage_classes(tnet).classes.len()
    );
    for r in &tnet.reactions {
        println!(
            "  {} -> {} ; {}",
            tnet.complexes[r.reactant].render(&tnet.species),
            tnet.complexes[r.product].render(&tnet.species),
            r.rate_symbol
        );
    }
    Ok(())
}
