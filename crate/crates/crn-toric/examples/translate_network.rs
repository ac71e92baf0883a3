//! Validates a supplied network translation: each reaction keeps its rate
//! and kinetic monomial but its complexes are shifted, here merging the
//! futile cycle's two linkage classes into one weakly reversible square.
//!
//! ```text
//! cargo run --example translate_network
//! ```

use crn_toric::model::parse_network;
use crn_toric::translation::{classify, parse_translation_spec};

fn combo(shift: &[i64], species: &[crn_toric::model::Species]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in shift.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let name = &species[i].name;
        let mag = c.abs();
        let body = if mag == 1 {
            name.clone()
        } else {
            format!("{mag} {name}")
        };
        terms.push(if c > 0 {
            format!("+{body}")
        } else {
            format!("-{body}")
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}

fn main() -> crn_toric::Result<()> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let net = parse_network(
        &std::fs::read_to_string(format!("{dir}/corpus/futile_cycle.crn")).unwrap(),
    )?;
    let spec = std::fs::read_to_string(format!("{dir}/corpus/futile_cycle.shift")).unwrap();
    let t = parse_translation_spec(&net, &spec)?;

    println!("per-reaction shifts:");
    for (j, (r, shift)) in net.reactions.iter().zip(&t.shifts).enumerate() {
        println!(
            "  R{}: {} -> {}   shifted by {}",
            j + 1,
            net.complexes[r.reactant].render(&net.species),
            net.complexes[r.product].render(&net.species),
            combo(shift, &net.species)
        );
    }

    let tnet = &t.translated.base;
    println!("translated reactions (kinetic monomial in brackets):");
    for r in &tnet.reactions {
        let kin = t.translated.kinetic_vector(r.reactant);
        println!(
            "  {} -> {} ; {}   [{}]",
            tnet.complexes[r.reactant].render(&tnet.species),
            tnet.complexes[r.product].render(&tnet.species),
            r.rate_symbol,
            kin.render(&tnet.species),
        );
    }

    let cls = classify(&t)?;
    println!(
        "proper: {}, weakly reversible: {}, deficiency: {}, kinetic deficiency: {}",
        cls.proper, cls.strong, cls.deficiency, cls.kinetic_deficiency
    );
    Ok(())
}
