//! Deterministic report assembly.
//!
//! Every command builds one ordered JSON value; the text rendering walks
//! that same value, so numeric fields are byte-identical between the two
//! formats and repeated runs produce identical output.

use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use crate::cone::{extreme_currents, CurrentKind};
use crate::error::Result;
use crate::graph::{deficiency, is_weakly_reversible, linkage_classes};
use crate::linalg::SubspaceBasis;
use crate::model::Network;
use crate::rat::{rat_display, Rat};
use crate::steady_state::{Binomial, SignConditionReport, SignVector, VerificationReport};
use crate::translation::{
    classify, StrongResolvability, Translation, TranslationClassification, WeakResolvability,
};
use crate::trees::tree_constants;

/// Bumped whenever a field is added, removed, or changes meaning.
pub const SCHEMA_VERSION: u64 = 1;

pub fn rat_value(x: &Rat) -> Value {
    Value::String(rat_display(x))
}

pub fn rat_vec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_value).collect())
}

pub fn f64_value(x: f64) -> Value {
    match Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")),
    }
}

pub fn f64_vec_value(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| f64_value(x)).collect())
}

fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

/// Root wrapper shared by all commands.
pub fn report_root(command: &str, sections: Vec<(&str, Value)>) -> Value {
    let mut entries = vec![
        ("schema_version", Value::from(SCHEMA_VERSION)),
        ("command", Value::from(command)),
    ];
    entries.extend(sections);
    obj(entries)
}

fn reversibility_class(net: &Network) -> &'static str {
    if !is_weakly_reversible(net) {
        return "not weakly reversible";
    }
    let pairs: std::collections::BTreeSet<(usize, usize)> = net
        .reactions
        .iter()
        .map(|r| (r.reactant, r.product))
        .collect();
    if net
        .reactions
        .iter()
        .all(|r| pairs.contains(&(r.product, r.reactant)))
    {
        "reversible"
    } else {
        "weakly reversible"
    }
}

/// Structural overview: counts, rank, deficiency, reversibility.
pub fn network_summary(net: &Network) -> Result<Value> {
    let d = deficiency(net)?;
    let reactions: Vec<Value> = net
        .reactions
        .iter()
        .map(|r| {
            Value::String(format!(
                "{} -> {} ; {}",
                net.complexes[r.reactant].render(&net.species),
                net.complexes[r.product].render(&net.species),
                r.rate_symbol
            ))
        })
        .collect();
    Ok(obj(vec![
        (
            "name",
            net.name
                .clone()
                .map(Value::String)
                .unwrap_or(Value::Null),
        ),
        (
            "species",
            Value::Array(
                net.species
                    .iter()
                    .map(|s| Value::String(s.name.clone()))
                    .collect(),
            ),
        ),
        ("num_species", Value::from(net.num_species() as u64)),
        ("num_complexes", Value::from(net.num_complexes() as u64)),
        ("num_reactions", Value::from(net.num_reactions() as u64)),
        (
            "num_linkage_classes",
            Value::from(d.num_linkage_classes as u64),
        ),
        ("stoichiometric_dimension", Value::from(d.rank as u64)),
        ("deficiency", Value::from(d.delta as u64)),
        ("reversibility", Value::from(reversibility_class(net))),
        ("reactions", Value::Array(reactions)),
    ]))
}

/// Linkage classes and strong linkage classes by complex.
pub fn linkage_section(net: &Network) -> Value {
    let part = linkage_classes(net);
    let render_classes = |classes: &[Vec<usize>]| {
        Value::Array(
            classes
                .iter()
                .map(|class| {
                    Value::String(
                        class
                            .iter()
                            .map(|&c| net.complexes[c].render(&net.species))
                            .collect::<Vec<_>>()
                            .join(", "),
                    )
                })
                .collect(),
        )
    };
    obj(vec![
        ("linkage_classes", render_classes(&part.classes)),
        ("strong_linkage_classes", render_classes(&part.strong_classes)),
    ])
}

/// Extreme currents of the flux cone with their classification.
pub fn generators_section(net: &Network) -> Result<Value> {
    let currents = extreme_currents(net)?;
    let list: Vec<Value> = currents
        .iter()
        .enumerate()
        .map(|(i, c)| {
            obj(vec![
                ("index", Value::from(i as u64 + 1)),
                ("vector", rat_vec_value(&c.vector)),
                (
                    "kind",
                    Value::from(match c.kind {
                        CurrentKind::Cyclic => "cyclic",
                        CurrentKind::Stoichiometric => "stoichiometric",
                    }),
                ),
            ])
        })
        .collect();
    Ok(obj(vec![
        ("count", Value::from(currents.len() as u64)),
        ("currents", Value::Array(list)),
    ]))
}

fn classification_value(cls: &TranslationClassification) -> Value {
    obj(vec![
        ("proper", Value::from(cls.proper)),
        ("strong", Value::from(cls.strong)),
        ("deficiency", Value::from(cls.deficiency as u64)),
        (
            "kinetic_deficiency",
            Value::from(cls.kinetic_deficiency as u64),
        ),
        (
            "improper_reactions",
            Value::Array(
                cls.improper_reactions
                    .iter()
                    .map(|&i| Value::from(i as u64 + 1))
                    .collect(),
            ),
        ),
    ])
}

fn resolvability_value(weak: &WeakResolvability, strong: Option<&StrongResolvability>) -> Value {
    let mut entries = vec![("weakly_resolvable", Value::from(weak.weakly_resolvable))];
    if let Some(strong) = strong {
        let factors: Vec<Value> = strong
            .factors
            .iter()
            .map(|(&j, f)| {
                obj(vec![
                    ("reaction", Value::from(j as u64 + 1)),
                    ("factor", Value::from(f.to_string())),
                ])
            })
            .collect();
        entries.push((
            "strongly_resolvable",
            Value::from(strong.strongly_resolvable),
        ));
        entries.push(("adjustment_factors", Value::Array(factors)));
    }
    obj(entries)
}

/// One translation candidate: shifted reactions, kinetic complexes,
/// classification, and (for improper candidates) resolvability evidence.
pub fn translation_section(
    t: &Translation,
    weak: Option<&WeakResolvability>,
    strong: Option<&StrongResolvability>,
) -> Result<Value> {
    let cls = classify(t)?;
    let tnet = &t.translated.base;
    let reactions: Vec<Value> = tnet
        .reactions
        .iter()
        .map(|r| {
            Value::String(format!(
                "{} -> {} ; {}",
                tnet.complexes[r.reactant].render(&tnet.species),
                tnet.complexes[r.product].render(&tnet.species),
                r.rate_symbol
            ))
        })
        .collect();
    let kinetic: Vec<Value> = (0..tnet.num_complexes())
        .map(|j| {
            Value::String(format!(
                "{} := {}",
                tnet.complexes[j].render(&tnet.species),
                t.translated.kinetic_vector(j).render(&tnet.species)
            ))
        })
        .collect();
    let mut entries = vec![
        ("reactions", Value::Array(reactions)),
        ("kinetic_complexes", Value::Array(kinetic)),
        ("classification", classification_value(&cls)),
    ];
    if let Some(w) = weak {
        entries.push(("resolvability", resolvability_value(w, strong)));
    }
    Ok(obj(entries))
}

/// Symbolic tree constants, grouped by linkage class.
pub fn tree_constants_section(net: &Network) -> Result<Value> {
    let constants = tree_constants(net)?;
    let part = linkage_classes(net);
    let classes: Vec<Value> = part
        .classes
        .iter()
        .enumerate()
        .map(|(ci, class)| {
            let list: Vec<Value> = class
                .iter()
                .map(|&c| {
                    obj(vec![
                        ("complex", Value::from(net.complexes[c].render(&net.species))),
                        ("constant", Value::from(constants[c].to_string())),
                    ])
                })
                .collect();
            obj(vec![
                ("class", Value::from(ci as u64 + 1)),
                ("constants", Value::Array(list)),
            ])
        })
        .collect();
    Ok(Value::Array(classes))
}

/// Binomial generators; with rate values, exact numeric coefficients too.
pub fn binomials_section(
    t: &Translation,
    binomials: &[Binomial],
    env: Option<&BTreeMap<String, Rat>>,
) -> Result<Value> {
    let species = &t.source.species;
    let mut list = Vec::new();
    for b in binomials {
        let mut entries = vec![
            ("class", Value::from(b.class_index as u64 + 1)),
            ("anchor_complex", Value::from(b.anchor as u64 + 1)),
            ("member_complex", Value::from(b.member as u64 + 1)),
            ("binomial", Value::from(b.render(species))),
        ];
        if let Some(env) = env {
            let (cp, cn) = b.evaluate_coeffs(env)?;
            entries.push(("coeff_pos_value", rat_value(&cp)));
            entries.push(("coeff_neg_value", rat_value(&cn)));
        }
        list.push(obj(entries));
    }
    Ok(obj(vec![
        ("count", Value::from(binomials.len() as u64)),
        ("binomials", Value::Array(list)),
    ]))
}

fn basis_value(basis: &SubspaceBasis) -> Value {
    obj(vec![
        ("dimension", Value::from(basis.dim() as u64)),
        (
            "vectors",
            Value::Array(basis.vectors().iter().map(|v| rat_vec_value(v)).collect()),
        ),
    ])
}

/// The kinetic-order subspace and its orthogonal complement.
pub fn parametrization_section(s_tilde: &SubspaceBasis, perp: &SubspaceBasis) -> Value {
    obj(vec![
        ("kinetic_order_subspace", basis_value(s_tilde)),
        ("orthogonal_complement", basis_value(perp)),
        (
            "note",
            Value::from(
                "positive steady states are parametrized multiplicatively by the orthogonal \
                 complement of the kinetic-order subspace (an alternative convention \
                 parametrizes by the subspace itself; this report uses the complement)",
            ),
        ),
    ])
}

fn sign_set_value(set: &std::collections::BTreeSet<SignVector>) -> Value {
    // Full listings only while they stay readable; counts are always exact.
    const LIST_LIMIT: usize = 64;
    let mut entries = vec![("count", Value::from(set.len() as u64))];
    if set.len() <= LIST_LIMIT {
        entries.push((
            "vectors",
            Value::Array(set.iter().map(|v| Value::from(v.to_string())).collect()),
        ));
    }
    obj(entries)
}

fn option_sign_value(v: &Option<SignVector>) -> Value {
    match v {
        Some(sv) => Value::from(sv.to_string()),
        None => Value::Null,
    }
}

/// Sign-condition hypotheses with the theorem-licensed conclusions. The
/// conclusion is only claimed when the hypothesis holds; otherwise the
/// theory falls silent and the text says so.
pub fn sign_conditions_section(r: &SignConditionReport) -> Value {
    let uniqueness_text = if r.uniqueness_condition {
        "hypothesis holds: exactly one positive steady state in each compatibility class"
    } else {
        "hypothesis fails: the theory falls silent on uniqueness"
    };
    let multi_text = if r.multistationarity_condition {
        "hypothesis holds: some rate constants admit more than one positive steady state \
         in a compatibility class"
    } else {
        "hypothesis fails: the theory falls silent on multistationarity"
    };
    obj(vec![
        ("sigma_s", sign_set_value(&r.sigma_s)),
        ("sigma_s_tilde", sign_set_value(&r.sigma_s_tilde)),
        ("sign_sets_equal", Value::from(r.sign_equal)),
        (
            "incompatibility_witness",
            option_sign_value(&r.incompatibility_witness),
        ),
        ("positive_vector_in_s_perp", Value::from(r.positive_in_s_perp)),
        ("uniqueness_condition", Value::from(r.uniqueness_condition)),
        ("uniqueness_conclusion", Value::from(uniqueness_text)),
        (
            "multistationarity_condition",
            Value::from(r.multistationarity_condition),
        ),
        (
            "multistationarity_witness",
            option_sign_value(&r.multistationarity_witness),
        ),
        ("multistationarity_conclusion", Value::from(multi_text)),
    ])
}

/// A solved steady state with species names.
pub fn solution_section(net: &Network, x: &[f64]) -> Value {
    let state: Vec<Value> = net
        .species
        .iter()
        .zip(x)
        .map(|(s, &v)| obj(vec![("species", Value::from(s.name.clone())), ("value", f64_value(v))]))
        .collect();
    obj(vec![("state", Value::Array(state))])
}

/// Residuals and extreme-current decomposition for a claimed steady state.
pub fn verification_section(v: &VerificationReport) -> Value {
    obj(vec![
        ("reaction_fluxes", f64_vec_value(&v.reaction_fluxes)),
        ("species_residuals", f64_vec_value(&v.species_residuals)),
        ("residual_inf", f64_value(v.residual_inf)),
        (
            "relative_residual_inf",
            f64_value(v.relative_residual_inf),
        ),
        ("current_weights", f64_vec_value(&v.current_weights)),
        ("decomposition_error", f64_value(v.decomposition_error)),
        ("decomposes", Value::from(v.decomposes)),
    ])
}

/// Machine-readable rendering: stable field order, trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

/// Human-readable rendering of the same value tree. Numbers are formatted
/// by the JSON serializer, so both formats show identical digits.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_value(v, 0, &mut out);
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar_text(val) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{pad}(none)\n"));
                return;
            }
            if let Some(scalars) = items
                .iter()
                .map(scalar_text)
                .collect::<Option<Vec<String>>>()
            {
                // Short scalar lists inline; long ones one per line.
                let width: usize = scalars.iter().map(|s| s.len() + 2).sum();
                if width <= 72 {
                    out.push_str(&format!("{pad}[{}]\n", scalars.join(", ")));
                } else {
                    for s in scalars {
                        out.push_str(&format!("{pad}- {s}\n"));
                    }
                }
                return;
            }
            for item in items {
                out.push_str(&format!("{pad}-\n"));
                render_value(item, indent + 1, out);
            }
        }
        _ => {
            let s = scalar_text(v).unwrap_or_default();
            out.push_str(&format!("{pad}{s}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    const FUTILE: &str = include_str!("../corpus/futile_cycle.crn");

    #[test]
    fn text_and_json_share_numeric_bytes() {
        let value = obj(vec![
            ("a", f64_value(0.6666666666666666)),
            ("b", f64_value(1e-9)),
            ("c", f64_value(3.0)),
        ]);
        let text = render_text(&value);
        let json = render_json(&value);
        for needle in ["0.6666666666666666", "1e-9", "3.0"] {
            assert!(text.contains(needle), "text carries {needle}: {text}");
            assert!(json.contains(needle), "json carries {needle}: {json}");
        }
    }

    #[test]
    fn summary_reports_structure() {
        let net = parse_network(FUTILE).unwrap();
        let summary = network_summary(&net).unwrap();
        assert_eq!(summary["num_species"], Value::from(6u64));
        assert_eq!(summary["deficiency"], Value::from(1u64));
        assert_eq!(summary["reversibility"], Value::from("not weakly reversible"));
        let text = render_text(&summary);
        assert!(text.contains("deficiency: 1"), "{text}");
    }

    #[test]
    fn generators_classify_currents() {
        let net = parse_network(FUTILE).unwrap();
        let section = generators_section(&net).unwrap();
        assert_eq!(section["count"], Value::from(3u64));
        let kinds: Vec<&str> = section["currents"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["kind"].as_str().unwrap())
            .collect();
        assert_eq!(kinds, vec!["cyclic", "stoichiometric", "cyclic"]);
    }

    #[test]
    fn deterministic_json() {
        let net = parse_network(FUTILE).unwrap();
        let a = render_json(&network_summary(&net).unwrap());
        let b = render_json(&network_summary(&net).unwrap());
        assert_eq!(a, b, "identical inputs give byte-identical JSON");
    }
}
