//! Network translation: shifting each reaction's reactant and product by a
//! common species vector so that the relabeled network becomes weakly
//! reversible with deficiency zero, while the kinetics keep the source
//! monomials.
//!
//! A translation keeps every reaction vector, so the two networks share
//! mass-action dynamics once each translated reactant complex is assigned a
//! *kinetic* complex from the source network. When two source reactants land
//! on the same translated complex the assignment is a genuine choice and the
//! translation is improper; resolvability analysis decides whether adjusted
//! rate constants restore the source dynamics.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::{One, Zero};

use crate::cone::{extreme_currents, CurrentKind};
use crate::error::{CrnError, Result};
use crate::graph::{
    deficiency, deficiency_generalized, is_weakly_reversible, kinetic_order_subspace,
    linkage_classes,
};
use crate::linalg::{RationalMatrix, SubspaceBasis};
use crate::model::{
    serialize_generalized_network, ComplexVec, GeneralizedNetwork, Network, Reaction,
};
use crate::rat::{rat_i64, Rat};
use crate::symbolic::PowerProduct;
use crate::trees::tree_constants;

/// A translation of `source`: per-reaction shift vectors, the induced map
/// `h2` from source reactant complexes to translated complexes, and the
/// kinetic complex chosen for each translated reactant complex.
#[derive(Debug, Clone)]
pub struct Translation {
    pub source: Network,
    pub translated: GeneralizedNetwork,
    /// Per-reaction shift over species: translated complexes are the source
    /// complexes plus this vector.
    pub shifts: Vec<Vec<i64>>,
    /// Source reactant complex index to translated complex index.
    pub h2: BTreeMap<usize, usize>,
    /// Translated reactant complex index to the source complex whose monomial
    /// drives it.
    pub kinetic_set: BTreeMap<usize, usize>,
}

/// Structural classification of a translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationClassification {
    /// Every translated reactant complex has a unique source preimage.
    pub proper: bool,
    /// The translated network is weakly reversible.
    pub strong: bool,
    pub deficiency: usize,
    pub kinetic_deficiency: usize,
    /// Translated complexes with more than one source reactant preimage.
    pub improper_complexes: Vec<usize>,
    /// Reactions whose own reactant was not chosen as the kinetic complex
    /// (0-based).
    pub improper_reactions: Vec<usize>,
}

fn shifted_coeffs(y: &ComplexVec, t: &[i64]) -> Vec<i64> {
    y.coeffs().iter().zip(t).map(|(a, b)| a + b).collect()
}

fn check_shift_dims(net: &Network, shifts: &[Vec<i64>]) -> Result<()> {
    if shifts.len() != net.num_reactions() {
        return Err(CrnError::Dimension(format!(
            "expected {} shift vectors, got {}",
            net.num_reactions(),
            shifts.len()
        )));
    }
    if let Some(t) = shifts.iter().find(|t| t.len() != net.num_species()) {
        return Err(CrnError::Dimension(format!(
            "shift vector has length {}, expected {}",
            t.len(),
            net.num_species()
        )));
    }
    Ok(())
}

/// The translated network induced by per-reaction shifts, without kinetics.
fn translated_base(net: &Network, shifts: &[Vec<i64>]) -> Result<Network> {
    check_shift_dims(net, shifts)?;
    let mut complexes: Vec<ComplexVec> = Vec::new();
    let mut reactions: Vec<Reaction> = Vec::new();
    for (i, r) in net.reactions.iter().enumerate() {
        let mut ends = [0usize; 2];
        for (slot, src) in [r.reactant, r.product].into_iter().enumerate() {
            let coeffs = shifted_coeffs(&net.complexes[src], &shifts[i]);
            if coeffs.iter().any(|&c| c < 0) {
                return Err(CrnError::InvalidTranslation(format!(
                    "shift of reaction {} drives complex '{}' negative",
                    i + 1,
                    net.complexes[src].render(&net.species)
                )));
            }
            let c = ComplexVec::new(coeffs)?;
            ends[slot] = match complexes.iter().position(|x| *x == c) {
                Some(p) => p,
                None => {
                    complexes.push(c);
                    complexes.len() - 1
                }
            };
        }
        reactions.push(Reaction {
            id: i + 1,
            reactant: ends[0],
            product: ends[1],
            rate_symbol: r.rate_symbol.clone(),
        });
    }
    let name = net.name.as_ref().map(|n| format!("{n}-translated"));
    let species = net.species.iter().map(|s| s.name.clone()).collect();
    Network::new_allow_unused(name, species, complexes, reactions)
}

/// Translated reactant complexes that inherit more than one source reactant,
/// each with its ascending list of source options.
pub fn kinetic_choice_sets(net: &Network, shifts: &[Vec<i64>]) -> Result<Vec<(usize, Vec<usize>)>> {
    let base = translated_base(net, shifts)?;
    let mut pre: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, r) in net.reactions.iter().enumerate() {
        pre.entry(base.reactions[i].reactant)
            .or_default()
            .insert(r.reactant);
    }
    Ok(pre
        .into_iter()
        .filter(|(_, s)| s.len() > 1)
        .map(|(tc, s)| (tc, s.into_iter().collect()))
        .collect())
}

/// Builds a [`Translation`] from shifts and kinetic choices. `choices` maps
/// ambiguous translated reactant complexes to the source complex that should
/// drive them; unambiguous complexes may be omitted.
pub fn build_translation(
    net: &Network,
    shifts: Vec<Vec<i64>>,
    choices: &BTreeMap<usize, usize>,
) -> Result<Translation> {
    let base = translated_base(net, &shifts)?;
    let mut h2: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, r) in net.reactions.iter().enumerate() {
        let tr = base.reactions[i].reactant;
        match h2.get(&r.reactant) {
            Some(&prev) if prev != tr => {
                return Err(CrnError::InvalidTranslation(format!(
                    "reactions sharing source complex '{}' translate to different complexes",
                    net.complexes[r.reactant].render(&net.species)
                )));
            }
            Some(_) => {}
            None => {
                h2.insert(r.reactant, tr);
            }
        }
    }
    let mut pre: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&src, &tc) in &h2 {
        pre.entry(tc).or_default().insert(src);
    }
    let mut kinetic_set: BTreeMap<usize, usize> = BTreeMap::new();
    for (&tc, sources) in &pre {
        let chosen = match choices.get(&tc) {
            Some(&c) => {
                if !sources.contains(&c) {
                    return Err(CrnError::InvalidTranslation(format!(
                        "kinetic choice for translated complex '{}' is not one of its preimages",
                        base.complexes[tc].render(&base.species)
                    )));
                }
                c
            }
            None if sources.len() == 1 => *sources.iter().next().expect("nonempty"),
            None => {
                return Err(CrnError::InvalidTranslation(format!(
                    "translated complex '{}' has {} source reactants; a kinetic choice is required",
                    base.complexes[tc].render(&base.species),
                    sources.len()
                )));
            }
        };
        kinetic_set.insert(tc, chosen);
    }
    let overrides: BTreeMap<usize, ComplexVec> = kinetic_set
        .iter()
        .map(|(&tc, &src)| (tc, net.complexes[src].clone()))
        .collect();
    let translated = GeneralizedNetwork::new(base, overrides)?;
    let t = Translation {
        source: net.clone(),
        translated,
        shifts,
        h2,
        kinetic_set,
    };
    validate_translation(&t)?;
    Ok(t)
}

/// The do-nothing translation of an already weakly reversible network.
pub fn identity_translation(net: &Network) -> Result<Translation> {
    let shifts = vec![vec![0i64; net.num_species()]; net.num_reactions()];
    build_translation(net, shifts, &BTreeMap::new())
}

/// Checks the three structural conditions of a translation: reaction vectors
/// are preserved, reactions sharing a source complex share a translated
/// complex, and the kinetic set picks one source preimage per translated
/// reactant complex.
pub fn validate_translation(t: &Translation) -> Result<()> {
    let net = &t.source;
    let base = &t.translated.base;
    check_shift_dims(net, &t.shifts)?;
    if base.num_reactions() != net.num_reactions() {
        return Err(CrnError::InvalidTranslation(
            "translated network has a different reaction count".into(),
        ));
    }
    for (i, r) in net.reactions.iter().enumerate() {
        let tr = &base.reactions[i];
        for (src, dst) in [(r.reactant, tr.reactant), (r.product, tr.product)] {
            if shifted_coeffs(&net.complexes[src], &t.shifts[i]) != base.complexes[dst].coeffs() {
                return Err(CrnError::InvalidTranslation(format!(
                    "reaction {} does not match its shift",
                    i + 1
                )));
            }
        }
        let (y, yt) = (
            &net.complexes[r.reactant].coeffs(),
            &net.complexes[r.product].coeffs(),
        );
        let (z, zt) = (
            &base.complexes[tr.reactant].coeffs(),
            &base.complexes[tr.product].coeffs(),
        );
        for s in 0..net.num_species() {
            if yt[s] - y[s] != zt[s] - z[s] {
                return Err(CrnError::InvalidTranslation(format!(
                    "reaction {} changes its reaction vector",
                    i + 1
                )));
            }
        }
        match t.h2.get(&r.reactant) {
            Some(&mapped) if mapped == tr.reactant => {}
            _ => {
                return Err(CrnError::InvalidTranslation(format!(
                    "reactant map is inconsistent at reaction {}",
                    i + 1
                )));
            }
        }
    }
    let reactant_complexes: BTreeSet<usize> =
        base.reactions.iter().map(|r| r.reactant).collect();
    if t.kinetic_set.keys().copied().collect::<BTreeSet<_>>() != reactant_complexes {
        return Err(CrnError::InvalidTranslation(
            "kinetic set does not cover exactly the translated reactant complexes".into(),
        ));
    }
    for (&tc, &src) in &t.kinetic_set {
        if t.h2.get(&src) != Some(&tc) {
            return Err(CrnError::InvalidTranslation(format!(
                "kinetic complex for translated complex {} is not a preimage",
                tc + 1
            )));
        }
        let expected = &net.complexes[src];
        if t.translated.kinetic_vector(tc) != expected {
            return Err(CrnError::InvalidTranslation(format!(
                "kinetic vector of translated complex {} disagrees with the kinetic set",
                tc + 1
            )));
        }
    }
    Ok(())
}

/// Translated reactant complex to its set of source reactant complexes.
pub fn h2_preimages(t: &Translation) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut pre: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&src, &tc) in &t.h2 {
        pre.entry(tc).or_default().insert(src);
    }
    pre
}

/// Classifies a translation structurally.
pub fn classify(t: &Translation) -> Result<TranslationClassification> {
    let pre = h2_preimages(t);
    let improper_complexes: Vec<usize> = pre
        .iter()
        .filter(|(_, s)| s.len() > 1)
        .map(|(&tc, _)| tc)
        .collect();
    let improper_reactions: Vec<usize> = t
        .source
        .reactions
        .iter()
        .enumerate()
        .filter(|(i, r)| {
            let tc = t.translated.base.reactions[*i].reactant;
            t.kinetic_set[&tc] != r.reactant
        })
        .map(|(i, _)| i)
        .collect();
    let report = deficiency_generalized(&t.translated)?;
    Ok(TranslationClassification {
        proper: improper_complexes.is_empty(),
        strong: is_weakly_reversible(&t.translated.base),
        deficiency: report.delta,
        kinetic_deficiency: report
            .kinetic_delta
            .expect("generalized deficiency always reports a kinetic value"),
        improper_complexes,
        improper_reactions,
    })
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

/// Budgets for the translation search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Cyclic orderings enumerated per stoichiometric generator.
    pub max_orderings: usize,
    /// Candidate translations constructed before validation.
    pub max_candidates: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_orderings: 5040,
            max_candidates: 10000,
        }
    }
}

/// Union-find over reactions whose edges carry shift differences:
/// `offset[i] = t_i - t_parent(i)`.
#[derive(Clone)]
struct OffsetUf {
    parent: Vec<usize>,
    offset: Vec<Vec<i64>>,
}

impl OffsetUf {
    fn new(n: usize, m: usize) -> Self {
        OffsetUf {
            parent: (0..n).collect(),
            offset: vec![vec![0; m]; n],
        }
    }

    fn find(&mut self, i: usize) -> (usize, Vec<i64>) {
        if self.parent[i] == i {
            return (i, vec![0; self.offset[i].len()]);
        }
        let (root, parent_off) = self.find(self.parent[i]);
        let combined: Vec<i64> = self.offset[i]
            .iter()
            .zip(&parent_off)
            .map(|(a, b)| a + b)
            .collect();
        self.parent[i] = root;
        self.offset[i] = combined.clone();
        (root, combined)
    }

    /// Imposes `t_a - t_b = d`; returns false on conflict.
    fn union(&mut self, a: usize, b: usize, d: &[i64]) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        if ra == rb {
            return oa
                .iter()
                .zip(&ob)
                .zip(d)
                .all(|((x, y), z)| x - y == *z);
        }
        // t_rb - t_ra = (t_b - ob) - (t_a - oa) = oa - ob - d.
        self.parent[rb] = ra;
        self.offset[rb] = oa
            .iter()
            .zip(&ob)
            .zip(d)
            .map(|((x, y), z)| x - y - z)
            .collect();
        true
    }

    fn components(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let (root, _) = self.find(i);
            map.entry(root).or_default().push(i);
        }
        let mut comps: Vec<Vec<usize>> = map.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }
}

fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Offsets along a cyclic ordering of a generator's support, or `None` when
/// the chain does not close.
fn chain_offsets(net: &Network, order: &[usize]) -> Option<Vec<(usize, Vec<i64>)>> {
    let y = |c: usize| net.complexes[c].coeffs().to_vec();
    let mut cum = vec![0i64; net.num_species()];
    let mut out = vec![(order[0], cum.clone())];
    for w in order.windows(2) {
        let step = vec_sub(
            &y(net.reactions[w[0]].product),
            &y(net.reactions[w[1]].reactant),
        );
        cum = cum.iter().zip(&step).map(|(a, b)| a + b).collect();
        out.push((w[1], cum.clone()));
    }
    let last = *order.last().expect("orderings are nonempty");
    let closure = vec_sub(&y(net.reactions[last].product), &y(net.reactions[order[0]].reactant));
    let closed = cum
        .iter()
        .zip(&closure)
        .all(|(c, step)| c + step == 0);
    closed.then_some(out)
}

/// Normalizes shifts so each translated linkage class touches zero in every
/// species: repeatedly subtract the componentwise minimum of each class
/// (classes can merge when complexes collide, hence the fixpoint loop).
fn normalize_shifts(net: &Network, mut shifts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let m = net.num_species();
    for _ in 0..net.num_complexes() + 2 {
        // Distinct translated complexes and the reactions' endpoints.
        let mut complexes: Vec<Vec<i64>> = Vec::new();
        let mut ends: Vec<(usize, usize)> = Vec::new();
        for (i, r) in net.reactions.iter().enumerate() {
            let cr = shifted_coeffs(&net.complexes[r.reactant], &shifts[i]);
            let cp = shifted_coeffs(&net.complexes[r.product], &shifts[i]);
            let mut idx = [0usize; 2];
            for (slot, c) in [cr, cp].into_iter().enumerate() {
                idx[slot] = match complexes.iter().position(|x| *x == c) {
                    Some(p) => p,
                    None => {
                        complexes.push(c);
                        complexes.len() - 1
                    }
                };
            }
            ends.push((idx[0], idx[1]));
        }
        // Union complexes into linkage classes.
        let mut parent: Vec<usize> = (0..complexes.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &(a, b) in &ends {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut mins: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for (ci, c) in complexes.iter().enumerate() {
            let r = root(&mut parent, ci);
            let entry = mins.entry(r).or_insert_with(|| c.clone());
            for s in 0..m {
                entry[s] = entry[s].min(c[s]);
            }
        }
        let mut changed = false;
        for (i, &(a, _)) in ends.iter().enumerate() {
            let r = root(&mut parent, a);
            let min = &mins[&r];
            if min.iter().any(|&x| x != 0) {
                changed = true;
                for s in 0..m {
                    shifts[i][s] -= min[s];
                }
            }
        }
        if !changed {
            break;
        }
    }
    shifts
}

/// Searches for weakly reversible deficiency-zero translations.
///
/// Stoichiometric generators of the current cone are turned into cycles of
/// the translated complex graph: every cyclic ordering of a generator's
/// support fixes the shift differences along the chain. Orderings are
/// combined across generators, merged with the constraints that reactions
/// sharing a source complex (and reactions of a cyclic generator) share a
/// shift, normalized per linkage class, and optionally disambiguated by
/// adding distinct species multiples to independent components. Ambiguous
/// kinetic assignments are enumerated. Candidates that are weakly
/// reversible with deficiency zero are returned, proper translations first.
///
/// Reaction chains consistent with one flux generator: each chain lists
/// (reaction index, shifted reactant complex) pairs in firing order.
type GeneratorChains = Vec<Vec<(usize, Vec<i64>)>>;

/// A candidate assignment: per-reaction shift vectors plus the groups of
/// reactions constrained to share a shift.
type ShiftAssignment = (Vec<Vec<i64>>, Vec<Vec<usize>>);

/// Generators with entries above one admit no cyclic ordering of their
/// support and are reported as having no translation.
pub fn find_translations(net: &Network, opts: &SearchOptions) -> Result<Vec<Translation>> {
    if is_weakly_reversible(net) && deficiency(net)?.delta == 0 {
        return Ok(vec![identity_translation(net)?]);
    }
    let currents = extreme_currents(net)?;
    let stoich: Vec<_> = currents
        .iter()
        .filter(|c| c.kind == CurrentKind::Stoichiometric)
        .collect();
    let cyclic: Vec<_> = currents
        .iter()
        .filter(|c| c.kind == CurrentKind::Cyclic)
        .collect();
    if stoich.is_empty() {
        return Ok(Vec::new());
    }
    let m = net.num_species();
    let r = net.num_reactions();

    // Per-generator consistent chains.
    let mut ordering_sets: Vec<GeneratorChains> = Vec::new();
    for gen in &stoich {
        let support: Vec<usize> = gen
            .vector
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect();
        let mut chains = Vec::new();
        let mut count = 0usize;
        let rest = &support[1..];
        for perm in rest.iter().copied().permutations(rest.len()) {
            count += 1;
            if count > opts.max_orderings {
                return Err(CrnError::CapExceeded(format!(
                    "more than {} cyclic orderings for a generator of support {}",
                    opts.max_orderings,
                    support.len()
                )));
            }
            let order: Vec<usize> = std::iter::once(support[0]).chain(perm).collect();
            if let Some(chain) = chain_offsets(net, &order) {
                chains.push(chain);
            }
        }
        if chains.is_empty() {
            return Ok(Vec::new());
        }
        ordering_sets.push(chains);
    }

    // Constraints independent of the orderings: reactions sharing a source
    // complex, and the support of each cyclic generator, share one shift.
    let mut base_uf = OffsetUf::new(r, m);
    let zero = vec![0i64; m];
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, reac) in net.reactions.iter().enumerate() {
        by_source.entry(reac.reactant).or_default().push(i);
    }
    for group in by_source.values() {
        for w in group.windows(2) {
            base_uf.union(w[0], w[1], &zero);
        }
    }
    for gen in &cyclic {
        let support: Vec<usize> = gen
            .vector
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect();
        for w in support.windows(2) {
            if !base_uf.union(w[0], w[1], &zero) {
                return Ok(Vec::new());
            }
        }
    }

    // Combine one ordering per generator.
    let mut assignments: BTreeSet<ShiftAssignment> = BTreeSet::new();
    'combo: for combo in ordering_sets.iter().multi_cartesian_product() {
        let mut uf = base_uf.clone();
        for chain in combo {
            let anchor = chain[0].0;
            for (rxn, off) in &chain[1..] {
                if !uf.union(*rxn, anchor, off) {
                    continue 'combo;
                }
            }
        }
        let shifts: Vec<Vec<i64>> = (0..r).map(|i| uf.find(i).1).collect();
        let comps = uf.components();
        assignments.insert((normalize_shifts(net, shifts), comps));
    }

    // Disambiguation: add `ordinal * e_species` to each independent
    // component of the final normalized shifts, one species at a time.
    let mut variants: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    for (shifts, comps) in &assignments {
        variants.insert(shifts.clone());
        if comps.len() < 2 {
            continue;
        }
        for s in 0..m {
            let mut v = shifts.clone();
            for (ordinal, comp) in comps.iter().enumerate() {
                for &i in comp {
                    v[i][s] += ordinal as i64;
                }
            }
            variants.insert(v);
        }
    }

    // Enumerate kinetic choices and keep valid candidates.
    let mut results: Vec<(String, bool, Translation)> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut candidates = 0usize;
    for shifts in &variants {
        let Ok(choice_sets) = kinetic_choice_sets(net, shifts) else {
            continue;
        };
        let selections: Vec<Vec<(usize, usize)>> = if choice_sets.is_empty() {
            vec![Vec::new()]
        } else {
            choice_sets
                .iter()
                .map(|(tc, opts)| opts.iter().map(|&s| (*tc, s)).collect::<Vec<_>>())
                .multi_cartesian_product()
                .collect()
        };
        for sel in selections {
            candidates += 1;
            if candidates > opts.max_candidates {
                return Err(CrnError::CapExceeded(format!(
                    "more than {} candidate translations",
                    opts.max_candidates
                )));
            }
            let choices: BTreeMap<usize, usize> = sel.into_iter().collect();
            let Ok(t) = build_translation(net, shifts.clone(), &choices) else {
                continue;
            };
            let Ok(cls) = classify(&t) else { continue };
            if !cls.strong || cls.deficiency != 0 {
                continue;
            }
            let signature = translation_signature(&t);
            if seen.insert(signature.clone()) {
                results.push((signature, cls.proper, t));
            }
        }
    }
    results.sort_by(|a, b| (!a.1, &a.0).cmp(&(!b.1, &b.0)));
    Ok(results.into_iter().map(|(_, _, t)| t).collect())
}

/// Canonical text form used to deduplicate and order search results.
pub fn translation_signature(t: &Translation) -> String {
    let mut s = serialize_generalized_network(&t.translated);
    for (&tc, &src) in &t.kinetic_set {
        s.push_str(&format!("choice {tc} {src}\n"));
    }
    s
}

// ---------------------------------------------------------------------------
// Resolvability
// ---------------------------------------------------------------------------

/// Weak resolvability: the translation is strong and every improper
/// reaction's kinetic difference lies in the translated kinetic-order
/// subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakResolvability {
    pub strong: bool,
    /// Whether every improper difference lies in the kinetic-order subspace.
    pub contained: bool,
    pub weakly_resolvable: bool,
}

/// Per improper reaction: the reaction's own reactant minus the chosen
/// kinetic complex, as a rational species vector. The reactant monomial then
/// factors as `x^own = factor(x) * x^kin` with the factor built from this
/// difference.
pub fn improper_kinetic_differences(t: &Translation) -> Result<Vec<(usize, Vec<Rat>)>> {
    let cls = classify(t)?;
    Ok(cls
        .improper_reactions
        .iter()
        .map(|&i| {
            let tc = t.translated.base.reactions[i].reactant;
            let kin = &t.source.complexes[t.kinetic_set[&tc]];
            let own = &t.source.complexes[t.source.reactions[i].reactant];
            let d: Vec<Rat> = own
                .coeffs()
                .iter()
                .zip(kin.coeffs())
                .map(|(a, b)| rat_i64(a - b))
                .collect();
            (i, d)
        })
        .collect())
}

/// Span of the improper kinetic differences.
pub fn improper_kinetic_subspace(t: &Translation) -> Result<SubspaceBasis> {
    let diffs = improper_kinetic_differences(t)?;
    let gens: Vec<Vec<Rat>> = diffs.into_iter().map(|(_, d)| d).collect();
    Ok(SubspaceBasis::spanned_by(t.source.num_species(), &gens))
}

pub fn check_weak_resolvability(t: &Translation) -> Result<WeakResolvability> {
    let cls = classify(t)?;
    let stilde = kinetic_order_subspace(&t.translated);
    let contained = improper_kinetic_differences(t)?
        .iter()
        .all(|(_, d)| stilde.contains(d));
    Ok(WeakResolvability {
        strong: cls.strong,
        contained,
        weakly_resolvable: cls.strong && contained,
    })
}

/// The translated network with fresh `~`-suffixed rate symbols on improper
/// reactions, standing for the unknown adjusted rates.
pub fn semi_proper_network(t: &Translation) -> Result<Network> {
    let cls = classify(t)?;
    let base = &t.translated.base;
    let reactions: Vec<Reaction> = base
        .reactions
        .iter()
        .enumerate()
        .map(|(i, r)| Reaction {
            id: r.id,
            reactant: r.reactant,
            product: r.product,
            rate_symbol: if cls.improper_reactions.contains(&i) {
                format!("{}~", r.rate_symbol)
            } else {
                r.rate_symbol.clone()
            },
        })
        .collect();
    Network::new_allow_unused(
        base.name.clone(),
        base.species.iter().map(|s| s.name.clone()).collect(),
        base.complexes.clone(),
        reactions,
    )
}

/// Strong resolvability: every improper reaction's adjustment factor, a
/// product of tree-constant ratios of the semi-proper network, is
/// independent of the unknown adjusted rates.
#[derive(Debug, Clone)]
pub struct StrongResolvability {
    pub weakly_resolvable: bool,
    pub strongly_resolvable: bool,
    /// Improper reaction (0-based) to its adjustment factor.
    pub factors: BTreeMap<usize, PowerProduct>,
}

/// Expresses `target` in the column span of `cols` (assumed independent).
fn coords_in(cols: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let m = target.len();
    let k = cols.len();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
        row.push(target[i].clone());
        rows.push(row);
    }
    let kernel = RationalMatrix::from_rows(rows).kernel_basis();
    let v = kernel
        .vectors()
        .iter()
        .find(|v| !v[k].is_zero())?;
    let scale = -Rat::one() / &v[k];
    Some(v[..k].iter().map(|x| x * &scale).collect())
}

pub fn check_strong_resolvability(t: &Translation) -> Result<StrongResolvability> {
    let weak = check_weak_resolvability(t)?;
    let diffs = improper_kinetic_differences(t)?;
    if diffs.is_empty() {
        return Ok(StrongResolvability {
            weakly_resolvable: weak.weakly_resolvable,
            strongly_resolvable: weak.weakly_resolvable,
            factors: BTreeMap::new(),
        });
    }
    if !weak.weakly_resolvable {
        return Ok(StrongResolvability {
            weakly_resolvable: false,
            strongly_resolvable: false,
            factors: BTreeMap::new(),
        });
    }
    let semi = semi_proper_network(t)?;
    let constants = tree_constants(&semi)?;
    // Greedy basis of the kinetic-order subspace out of in-class pair
    // differences of kinetic vectors (each class against its anchor).
    let m = t.source.num_species();
    let mut basis = SubspaceBasis::empty(m);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut raw: Vec<Vec<Rat>> = Vec::new();
    for class in &linkage_classes(&semi).classes {
        let anchor = class[0];
        for &p in &class[1..] {
            let d: Vec<Rat> = t
                .translated
                .kinetic_vector(p)
                .coeffs()
                .iter()
                .zip(t.translated.kinetic_vector(anchor).coeffs())
                .map(|(a, b)| rat_i64(a - b))
                .collect();
            if basis.try_extend(&d) {
                pairs.push((p, anchor));
                raw.push(d);
            }
        }
    }
    let tilde: BTreeSet<String> = semi
        .reactions
        .iter()
        .filter(|r| r.rate_symbol.ends_with('~'))
        .map(|r| r.rate_symbol.clone())
        .collect();
    let mut factors = BTreeMap::new();
    let mut all_independent = true;
    for (i, d) in &diffs {
        let coords = coords_in(&raw, d).ok_or_else(|| {
            CrnError::NotResolvable(format!(
                "improper difference of reaction {} left the kinetic-order subspace",
                i + 1
            ))
        })?;
        let mut factor = PowerProduct::one();
        for (c, &(p, q)) in coords.iter().zip(&pairs) {
            if !c.is_zero() {
                factor.push(constants[p].clone(), constants[q].clone(), c.clone());
            }
        }
        if !factor.independent_of(&tilde)? {
            all_independent = false;
        }
        factors.insert(*i, factor);
    }
    Ok(StrongResolvability {
        weakly_resolvable: true,
        strongly_resolvable: all_independent,
        factors,
    })
}

/// Numeric adjusted rate constants of the translated network, one per
/// reaction: proper reactions keep their source value, improper reactions are
/// scaled by their adjustment factor (which must be independent of the
/// unknown rates, i.e. the translation must be strongly resolvable).
pub fn translated_rates(t: &Translation, rates: &BTreeMap<String, Rat>) -> Result<Vec<Rat>> {
    let vals = t.source.rate_values(rates)?;
    let sr = check_strong_resolvability(t)?;
    if sr.factors.is_empty() {
        return Ok(vals);
    }
    if !sr.strongly_resolvable {
        return Err(CrnError::NotResolvable(
            "adjustment factors depend on the unknown adjusted rates".into(),
        ));
    }
    // The factors do not depend on the placeholder symbols, so any positive
    // value may stand in for them during evaluation.
    let mut env = rates.clone();
    for i in sr.factors.keys() {
        env.insert(format!("{}~", t.source.reactions[*i].rate_symbol), rat_i64(1));
    }
    let mut out = vals;
    for (i, factor) in &sr.factors {
        let f = factor.evaluate(&env)?;
        if cfg!(debug_assertions) {
            let mut env2 = env.clone();
            for j in sr.factors.keys() {
                env2.insert(
                    format!("{}~", t.source.reactions[*j].rate_symbol),
                    rat_i64(2),
                );
            }
            debug_assert_eq!(
                factor.evaluate(&env2).ok(),
                Some(f.clone()),
                "independent factor changed under placeholder reassignment"
            );
        }
        out[*i] = &out[*i] * f;
    }
    Ok(out)
}

/// Rate map for formulas over the semi-proper network: source symbols keep
/// their values and each `~` placeholder gets its adjusted value.
pub fn translated_rate_map(
    t: &Translation,
    rates: &BTreeMap<String, Rat>,
) -> Result<BTreeMap<String, Rat>> {
    let adjusted = translated_rates(t, rates)?;
    let cls = classify(t)?;
    let mut map = rates.clone();
    for &i in &cls.improper_reactions {
        map.insert(
            format!("{}~", t.source.reactions[i].rate_symbol),
            adjusted[i].clone(),
        );
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// Translation files
// ---------------------------------------------------------------------------

/// Parses a signed species combination (`F`, `- A1`, `XD + XT + Y`, `2 A - B`,
/// `0`) over the network's species.
fn parse_signed_combo(net: &Network, expr: &str, line: usize) -> Result<Vec<i64>> {
    let e = expr.trim();
    let mut out = vec![0i64; net.num_species()];
    if e == "0" {
        return Ok(out);
    }
    if e.is_empty() {
        return Err(CrnError::Parse {
            line,
            col: 1,
            msg: "empty species combination".into(),
        });
    }
    let spaced = e.replace('+', " + ").replace('-', " - ");
    let toks: Vec<&str> = spaced.split_whitespace().collect();
    let mut sign = 1i64;
    let mut pending_coeff: Option<i64> = None;
    let mut expect_term = true;
    for tok in toks {
        match tok {
            "+" | "-" if pending_coeff.is_none() && expect_term => {
                // Sign prefix (possibly repeated) before a term.
                if tok == "-" {
                    sign = -sign;
                }
            }
            "+" | "-" => {
                return Err(CrnError::Parse {
                    line,
                    col: 1,
                    msg: "misplaced sign in species combination".into(),
                });
            }
            _ => {
                let digits: String = tok.chars().take_while(|c| c.is_ascii_digit()).collect();
                if digits.len() == tok.len() {
                    if pending_coeff.is_some() {
                        return Err(CrnError::Parse {
                            line,
                            col: 1,
                            msg: "two coefficients in a row".into(),
                        });
                    }
                    pending_coeff = Some(digits.parse().map_err(|_| CrnError::Parse {
                        line,
                        col: 1,
                        msg: "invalid coefficient".into(),
                    })?);
                    expect_term = true;
                    continue;
                }
                let (coeff, name) = if digits.is_empty() {
                    (pending_coeff.take().unwrap_or(1), tok)
                } else {
                    if pending_coeff.is_some() {
                        return Err(CrnError::Parse {
                            line,
                            col: 1,
                            msg: "two coefficients in a row".into(),
                        });
                    }
                    (
                        digits.parse().map_err(|_| CrnError::Parse {
                            line,
                            col: 1,
                            msg: "invalid coefficient".into(),
                        })?,
                        tok[digits.len()..].trim(),
                    )
                };
                let idx = net.species_index(name).ok_or_else(|| CrnError::UnknownName {
                    kind: "species",
                    name: name.to_string(),
                })?;
                out[idx] += sign * coeff;
                sign = 1;
                expect_term = true;
            }
        }
    }
    if pending_coeff.is_some() {
        return Err(CrnError::Parse {
            line,
            col: 1,
            msg: "dangling coefficient in species combination".into(),
        });
    }
    Ok(out)
}

/// Parses a translation file: one `shift N: <combo>` line per reaction
/// (ranges `shift N..M:` allowed) plus optional
/// `kinetic-choice <translated complex> := <source complex>` lines.
pub fn parse_translation_spec(net: &Network, text: &str) -> Result<Translation> {
    let r = net.num_reactions();
    let mut shifts: Vec<Option<Vec<i64>>> = vec![None; r];
    let mut choice_exprs: Vec<(usize, Vec<i64>, Vec<i64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("shift") {
            let (ids_part, combo_part) = rest.split_once(':').ok_or_else(|| CrnError::Parse {
                line: line_no,
                col: 1,
                msg: "expected ':' after shift reaction ids".into(),
            })?;
            let ids_part = ids_part.trim();
            let bad_id = |what: &str| CrnError::Parse {
                line: line_no,
                col: 1,
                msg: format!("invalid reaction id '{what}'"),
            };
            let (lo, hi) = match ids_part.split_once("..") {
                Some((a, b)) => (
                    a.trim().parse::<usize>().map_err(|_| bad_id(a))?,
                    b.trim().parse::<usize>().map_err(|_| bad_id(b))?,
                ),
                None => {
                    let v = ids_part.parse::<usize>().map_err(|_| bad_id(ids_part))?;
                    (v, v)
                }
            };
            if lo == 0 || hi < lo || hi > r {
                return Err(CrnError::Parse {
                    line: line_no,
                    col: 1,
                    msg: format!("reaction ids {lo}..{hi} out of range 1..{r}"),
                });
            }
            let combo = parse_signed_combo(net, combo_part, line_no)?;
            for id in lo..=hi {
                if shifts[id - 1].is_some() {
                    return Err(CrnError::Parse {
                        line: line_no,
                        col: 1,
                        msg: format!("shift for reaction {id} given twice"),
                    });
                }
                shifts[id - 1] = Some(combo.clone());
            }
        } else if let Some(rest) = line.strip_prefix("kinetic-choice") {
            let (lhs, rhs) = rest.split_once(":=").ok_or_else(|| CrnError::Parse {
                line: line_no,
                col: 1,
                msg: "expected ':=' in kinetic-choice".into(),
            })?;
            let target = parse_signed_combo(net, lhs, line_no)?;
            let value = parse_signed_combo(net, rhs, line_no)?;
            choice_exprs.push((line_no, target, value));
        } else {
            return Err(CrnError::Parse {
                line: line_no,
                col: 1,
                msg: "expected 'shift' or 'kinetic-choice'".into(),
            });
        }
    }
    let shifts: Vec<Vec<i64>> = shifts
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| CrnError::InvalidTranslation(format!("no shift for reaction {}", i + 1)))
        })
        .collect::<Result<_>>()?;
    let base = translated_base(net, &shifts)?;
    let mut choices: BTreeMap<usize, usize> = BTreeMap::new();
    for (line_no, target, value) in choice_exprs {
        let complex_of = |coeffs: Vec<i64>| -> Result<ComplexVec> {
            if coeffs.iter().any(|&c| c < 0) {
                return Err(CrnError::Parse {
                    line: line_no,
                    col: 1,
                    msg: "kinetic-choice complexes must be nonnegative".into(),
                });
            }
            ComplexVec::new(coeffs)
        };
        let tvec = complex_of(target)?;
        let tc = base.complex_index(&tvec).ok_or_else(|| CrnError::UnknownName {
            kind: "translated complex",
            name: tvec.render(&base.species),
        })?;
        let svec = complex_of(value)?;
        let src = net.complex_index(&svec).ok_or_else(|| CrnError::UnknownName {
            kind: "complex",
            name: svec.render(&net.species),
        })?;
        choices.insert(tc, src);
    }
    build_translation(net, shifts, &choices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    const FUTILE: &str = include_str!("../corpus/futile_cycle.crn");
    const FUTILE_SHIFT: &str = include_str!("../corpus/futile_cycle.shift");
    const FUTILE_TRANSLATED: &str = include_str!("../corpus/futile_translated.crn");
    const LV: &str = include_str!("../corpus/lotka_volterra.crn");
    const LV_SHIFT: &str = include_str!("../corpus/lotka_volterra.shift");
    const SF: &str = include_str!("../corpus/shinar_feinberg.crn");
    const SF_SHIFT: &str = include_str!("../corpus/shinar_feinberg.shift");
    const MFC: &str = include_str!("../corpus/multiple_futile_cycle_2.crn");

    /// Renders complexes with species sorted by name so networks with
    /// different species interning orders compare equal.
    fn name_sorted(net: &Network, complex: usize) -> String {
        let mut parts: Vec<(&str, i64)> = net.complexes[complex]
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (net.species[i].name.as_str(), c))
            .collect();
        parts.sort();
        let rendered: Vec<String> = parts
            .iter()
            .map(|(n, c)| {
                if *c == 1 {
                    n.to_string()
                } else {
                    format!("{c} {n}")
                }
            })
            .collect();
        if rendered.is_empty() {
            "0".to_string()
        } else {
            rendered.join(" + ")
        }
    }

    fn rendered_reactions(net: &Network) -> Vec<(String, String, String)> {
        net.reactions
            .iter()
            .map(|r| {
                (
                    name_sorted(net, r.reactant),
                    name_sorted(net, r.product),
                    r.rate_symbol.clone(),
                )
            })
            .collect()
    }

    #[test]
    fn futile_shift_file_matches_reference_network() {
        let net = parse_network(FUTILE).unwrap();
        let t = parse_translation_spec(&net, FUTILE_SHIFT).unwrap();
        let reference = parse_network(FUTILE_TRANSLATED).unwrap();
        assert_eq!(
            rendered_reactions(&t.translated.base),
            rendered_reactions(&reference)
        );
        let cls = classify(&t).unwrap();
        assert!(cls.proper && cls.strong);
        assert_eq!((cls.deficiency, cls.kinetic_deficiency), (0, 0));
        assert!(cls.improper_reactions.is_empty());
        // Kinetics keep the source monomials: every translated reactant
        // complex is overridden back to its source complex.
        assert_eq!(t.translated.kinetic_overrides().len(), 4);
        let c1 = t.translated.base.reactions[0].reactant;
        assert_eq!(
            t.translated.kinetic_vector(c1).render(&net.species),
            "S + E"
        );
    }

    #[test]
    fn futile_search_finds_the_reference_translation() {
        let net = parse_network(FUTILE).unwrap();
        let found = find_translations(&net, &SearchOptions::default()).unwrap();
        assert!(!found.is_empty());
        let expected = parse_translation_spec(&net, FUTILE_SHIFT).unwrap();
        let sig = translation_signature(&expected);
        assert!(
            found.iter().any(|t| translation_signature(t) == sig),
            "reference futile translation missing from search results"
        );
        let cls = classify(&found[0]).unwrap();
        assert!(cls.proper, "results must be sorted proper-first");
    }

    #[test]
    fn lotka_volterra_has_two_proper_translations() {
        let net = parse_network(LV).unwrap();
        let found = find_translations(&net, &SearchOptions::default()).unwrap();
        assert_eq!(found.len(), 2);
        for t in &found {
            let cls = classify(t).unwrap();
            assert!(cls.proper && cls.strong && cls.deficiency == 0);
        }
        let expected = parse_translation_spec(&net, LV_SHIFT).unwrap();
        let sig = translation_signature(&expected);
        assert!(found.iter().any(|t| translation_signature(t) == sig));
    }

    #[test]
    fn bifunctional_network_translation_is_improper_but_resolvable() {
        let net = parse_network(SF).unwrap();
        let t = parse_translation_spec(&net, SF_SHIFT).unwrap();
        let cls = classify(&t).unwrap();
        assert!(!cls.proper);
        assert!(cls.strong);
        assert_eq!((cls.deficiency, cls.kinetic_deficiency), (0, 0));
        assert_eq!(cls.improper_reactions, vec![11]);
        assert_eq!(cls.improper_complexes.len(), 1);
        let improper = cls.improper_complexes[0];
        assert_eq!(
            t.translated.base.complexes[improper].render(&net.species),
            "XD + X + XT + Yp"
        );

        let weak = check_weak_resolvability(&t).unwrap();
        assert!(weak.weakly_resolvable);
        let strong = check_strong_resolvability(&t).unwrap();
        assert!(strong.strongly_resolvable);
        assert_eq!(strong.factors.len(), 1);

        // k2 (k4 + k5) / (k1 k3) at unit rates is 2.
        let ones: BTreeMap<String, Rat> =
            (1..=14).map(|i| (format!("k{i}"), rat_i64(1))).collect();
        let adjusted = translated_rates(&t, &ones).unwrap();
        assert_eq!(adjusted[11], rat_i64(2));
        for (i, v) in adjusted.iter().enumerate() {
            if i != 11 {
                assert_eq!(*v, rat_i64(1));
            }
        }
    }

    #[test]
    fn bifunctional_search_recovers_the_known_translation() {
        let net = parse_network(SF).unwrap();
        let found = find_translations(&net, &SearchOptions::default()).unwrap();
        let expected = parse_translation_spec(&net, SF_SHIFT).unwrap();
        let sig = translation_signature(&expected);
        assert!(
            found.iter().any(|t| translation_signature(t) == sig),
            "known translation missing; got {} results",
            found.len()
        );
        // The other kinetic choice at the shared complex is also returned.
        assert!(found.len() >= 2);
    }

    #[test]
    fn two_site_cycle_gets_a_proper_disambiguated_translation() {
        let net = parse_network(MFC).unwrap();
        let found = find_translations(&net, &SearchOptions::default()).unwrap();
        let proper: Vec<_> = found
            .iter()
            .filter(|t| classify(t).unwrap().proper)
            .collect();
        assert!(!proper.is_empty(), "expected a proper translation");
        // The S0-disambiguated variant keeps the two catalytic cycles apart.
        let wanted = proper.iter().any(|t| {
            t.translated
                .base
                .complexes
                .iter()
                .any(|c| c.render(&t.translated.base.species) == "S0 + S1 + E + F")
        });
        assert!(wanted, "missing the S0-shifted block translation");
        // The base candidate merges the blocks into one improper class.
        let improper = found.iter().any(|t| {
            let cls = classify(t).unwrap();
            !cls.proper && t.translated.base.num_complexes() == 7
        });
        assert!(improper, "missing the merged improper translation");
    }

    #[test]
    fn weakly_reversible_zero_deficiency_networks_translate_to_themselves() {
        let net = parse_network("A -> B ; k1\nB -> C ; k2\nC -> A ; k3\n").unwrap();
        let found = find_translations(&net, &SearchOptions::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].shifts.iter().all(|t| t.iter().all(|&x| x == 0)));
        assert!(found[0].translated.is_mass_action());
        assert_eq!(found[0].translated.base.complexes, net.complexes);
        assert_eq!(found[0].translated.base.reactions, net.reactions);
    }

    #[test]
    fn inconsistent_shifts_are_rejected() {
        let net = parse_network(FUTILE).unwrap();
        // R2 and R3 share the source complex SE but get different shifts.
        let mut shifts = vec![vec![0i64; 6]; 6];
        let f = net.species_index("F").unwrap();
        shifts[1][f] = 1;
        let err = build_translation(&net, shifts, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CrnError::InvalidTranslation(_)));
    }

    #[test]
    fn negative_translated_complexes_are_rejected() {
        let net = parse_network(LV).unwrap();
        let mut shifts = vec![vec![0i64; 2]; 3];
        shifts[0][0] = -2;
        let err = build_translation(&net, shifts, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CrnError::InvalidTranslation(_)));
    }

    #[test]
    fn shift_parser_reports_errors() {
        let net = parse_network(LV).unwrap();
        assert!(matches!(
            parse_translation_spec(&net, "shift 1: Zz\nshift 2: 0\nshift 3: 0\n").unwrap_err(),
            CrnError::UnknownName { kind: "species", .. }
        ));
        assert!(matches!(
            parse_translation_spec(&net, "shift 1: 0\n").unwrap_err(),
            CrnError::InvalidTranslation(_)
        ));
        assert!(matches!(
            parse_translation_spec(&net, "shift 9: 0\n").unwrap_err(),
            CrnError::Parse { .. }
        ));
        assert!(matches!(
            parse_translation_spec(&net, "nonsense\n").unwrap_err(),
            CrnError::Parse { .. }
        ));
    }

    #[test]
    fn signed_combo_parser_handles_coefficients_and_signs() {
        let net = parse_network(LV).unwrap();
        assert_eq!(parse_signed_combo(&net, "2 A1 - A2", 1).unwrap(), vec![2, -1]);
        assert_eq!(parse_signed_combo(&net, "2A1", 1).unwrap(), vec![2, 0]);
        assert_eq!(parse_signed_combo(&net, "- A1 + 3 A2", 1).unwrap(), vec![-1, 3]);
        assert_eq!(parse_signed_combo(&net, "0", 1).unwrap(), vec![0, 0]);
        assert!(parse_signed_combo(&net, "2 + A1", 1).is_err());
    }
}
