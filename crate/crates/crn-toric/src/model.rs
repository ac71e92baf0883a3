//! Reaction network model: species, complexes, reactions, the text format,
//! and the structural matrices / right-hand sides derived from them.
//!
//! Text format, line oriented, `#` starts a comment:
//!
//! ```text
//! network <name>                      # optional
//! species A B C                       # optional; declares order
//! A + B -> C ; k1                     # irreversible reaction
//! C <-> 2 A ; k2, k3                  # reversible pair, forward rate first
//! kinetic A + B := 2 A + C            # optional kinetic-order override
//! ```
//!
//! Complexes are `0` or sums of `coefficient species` terms with positive
//! integer coefficients (`2 A + B`; the coefficient defaults to 1).

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::error::{CrnError, Result};
use crate::linalg::RationalMatrix;
use crate::rat::{parse_rational, rat_to_f64, Rat};

/// A named species with its index in the network's species order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub index: usize,
}

/// A complex: a nonnegative integer combination of species.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplexVec {
    coeffs: Vec<i64>,
}

impl ComplexVec {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.iter().any(|&c| c < 0) {
            return Err(CrnError::Invalid(
                "complex coefficients must be nonnegative".into(),
            ));
        }
        Ok(ComplexVec { coeffs })
    }

    pub fn zero(num_species: usize) -> Self {
        ComplexVec {
            coeffs: vec![0; num_species],
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, species: usize) -> i64 {
        self.coeffs[species]
    }

    pub fn is_zero_complex(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Renders the complex against a species list (`"2 A + B"`, `"0"`).
    pub fn render(&self, species: &[Species]) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 1 {
                parts.push(species[i].name.clone());
            } else if c > 1 {
                parts.push(format!("{} {}", c, species[i].name));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// A directed reaction between complexes, identified 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub id: usize,
    pub reactant: usize,
    pub product: usize,
    pub rate_symbol: String,
}

/// A reaction network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub name: Option<String>,
    pub species: Vec<Species>,
    pub complexes: Vec<ComplexVec>,
    pub reactions: Vec<Reaction>,
}

impl Network {
    /// Builds and validates a network. Complexes must be pairwise distinct,
    /// listed in order of first use by the reactions, and every complex must
    /// be used; reaction ids must be `1..=r` in order.
    pub fn new(
        name: Option<String>,
        species_names: Vec<String>,
        complexes: Vec<ComplexVec>,
        reactions: Vec<Reaction>,
    ) -> Result<Self> {
        let species = species_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| Species { name, index })
            .collect();
        let net = Network {
            name,
            species,
            complexes,
            reactions,
        };
        net.validate(false)?;
        Ok(net)
    }

    /// As [`Network::new`] but tolerates species that occur in no complex.
    /// Derived networks (translations) can cancel a catalyst out of every
    /// complex while the species list is inherited from the source.
    pub(crate) fn new_allow_unused(
        name: Option<String>,
        species_names: Vec<String>,
        complexes: Vec<ComplexVec>,
        reactions: Vec<Reaction>,
    ) -> Result<Self> {
        let species = species_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| Species { name, index })
            .collect();
        let net = Network {
            name,
            species,
            complexes,
            reactions,
        };
        net.validate(true)?;
        Ok(net)
    }

    fn validate(&self, allow_unused: bool) -> Result<()> {
        let m = self.species.len();
        let mut names = BTreeSet::new();
        for s in &self.species {
            if !names.insert(s.name.clone()) {
                return Err(CrnError::Invalid(format!("duplicate species '{}'", s.name)));
            }
        }
        let mut seen = BTreeSet::new();
        for c in &self.complexes {
            if c.coeffs().len() != m {
                return Err(CrnError::Dimension(
                    "complex length differs from species count".into(),
                ));
            }
            if !seen.insert(c.clone()) {
                return Err(CrnError::Invalid(format!(
                    "complexes are not distinct ('{}' repeats)",
                    c.render(&self.species)
                )));
            }
        }
        let mut symbols = BTreeSet::new();
        let mut first_use = vec![usize::MAX; self.complexes.len()];
        for (pos, r) in self.reactions.iter().enumerate() {
            if r.id != pos + 1 {
                return Err(CrnError::Invalid(format!(
                    "reaction ids must be sequential from 1 (found {} at position {})",
                    r.id,
                    pos + 1
                )));
            }
            if r.reactant >= self.complexes.len() || r.product >= self.complexes.len() {
                return Err(CrnError::Dimension("reaction references missing complex".into()));
            }
            if r.reactant == r.product {
                return Err(CrnError::SelfReaction(r.id));
            }
            if !symbols.insert(r.rate_symbol.clone()) {
                return Err(CrnError::DuplicateRateSymbol(r.rate_symbol.clone()));
            }
            for c in [r.reactant, r.product] {
                if first_use[c] == usize::MAX {
                    first_use[c] = pos * 2 + usize::from(c == r.product);
                }
            }
        }
        if let Some(j) = first_use.iter().position(|&u| u == usize::MAX) {
            return Err(CrnError::Invalid(format!(
                "complex '{}' is not used by any reaction",
                self.complexes[j].render(&self.species)
            )));
        }
        if first_use.windows(2).any(|w| w[0] > w[1]) {
            return Err(CrnError::Invalid(
                "complexes must be listed in order of first use".into(),
            ));
        }
        // Species that never occur in a used complex are declared-but-unused.
        if !allow_unused {
            for s in &self.species {
                if self.complexes.iter().all(|c| c.coeff(s.index) == 0) {
                    return Err(CrnError::UnusedSpecies(s.name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_complexes(&self) -> usize {
        self.complexes.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn complex_index(&self, c: &ComplexVec) -> Option<usize> {
        self.complexes.iter().position(|x| x == c)
    }

    /// Indices of complexes that appear as a reactant.
    pub fn reactant_complexes(&self) -> BTreeSet<usize> {
        self.reactions.iter().map(|r| r.reactant).collect()
    }

    /// Per-reaction rate values, validated positive.
    pub fn rate_values(&self, rates: &BTreeMap<String, Rat>) -> Result<Vec<Rat>> {
        self.reactions
            .iter()
            .map(|r| {
                let v = rates
                    .get(&r.rate_symbol)
                    .ok_or_else(|| CrnError::MissingValue(r.rate_symbol.clone()))?;
                if *v <= Rat::zero() {
                    return Err(CrnError::Invalid(format!(
                        "rate '{}' must be positive",
                        r.rate_symbol
                    )));
                }
                Ok(v.clone())
            })
            .collect()
    }
}

/// A network together with kinetic-order vectors: reaction rates are
/// monomials in the *kinetic* complex of the reactant rather than the
/// stoichiometric one. Every complex has a kinetic vector; it defaults to
/// the complex itself (mass action).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedNetwork {
    pub base: Network,
    kinetic: BTreeMap<usize, ComplexVec>,
}

impl GeneralizedNetwork {
    /// Wraps a network with kinetic overrides (complex index to kinetic
    /// vector). Omitted complexes keep their stoichiometric vector.
    pub fn new(base: Network, overrides: BTreeMap<usize, ComplexVec>) -> Result<Self> {
        let m = base.num_species();
        for (&j, v) in &overrides {
            if j >= base.num_complexes() {
                return Err(CrnError::Dimension(format!(
                    "kinetic override for missing complex index {j}"
                )));
            }
            if v.coeffs().len() != m {
                return Err(CrnError::Dimension(
                    "kinetic vector length differs from species count".into(),
                ));
            }
        }
        // Store only genuine overrides so equality and serialization are
        // canonical.
        let kinetic = overrides
            .into_iter()
            .filter(|(j, v)| base.complexes[*j] != *v)
            .collect();
        Ok(GeneralizedNetwork { base, kinetic })
    }

    pub fn mass_action(base: Network) -> Self {
        GeneralizedNetwork {
            base,
            kinetic: BTreeMap::new(),
        }
    }

    /// The kinetic vector of complex `j`.
    pub fn kinetic_vector(&self, j: usize) -> &ComplexVec {
        self.kinetic.get(&j).unwrap_or(&self.base.complexes[j])
    }

    /// The overrides that differ from the stoichiometric complexes.
    pub fn kinetic_overrides(&self) -> &BTreeMap<usize, ComplexVec> {
        &self.kinetic
    }

    pub fn is_mass_action(&self) -> bool {
        self.kinetic.is_empty()
    }
}

/// The structural matrices of a network: complex composition `y`
/// (species x complexes), incidence `ia` (complexes x reactions), their
/// product `gamma = y * ia` (species x reactions), and optionally
/// `sigma = y * ia * i_k` (species x complexes) when rates are supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralMatrices {
    pub y: RationalMatrix,
    pub ia: RationalMatrix,
    pub gamma: RationalMatrix,
    pub sigma: Option<RationalMatrix>,
}

/// Builds the structural matrices of `net`.
pub fn build_matrices(
    net: &Network,
    rates: Option<&BTreeMap<String, Rat>>,
) -> Result<StructuralMatrices> {
    let m = net.num_species();
    let n = net.num_complexes();
    let r = net.num_reactions();
    let mut y = RationalMatrix::zeros(m, n);
    for (j, c) in net.complexes.iter().enumerate() {
        for (i, &v) in c.coeffs().iter().enumerate() {
            if v != 0 {
                y.set(i, j, Rat::from_integer(v.into()));
            }
        }
    }
    let mut ia = RationalMatrix::zeros(n, r);
    for (k, reac) in net.reactions.iter().enumerate() {
        ia.set(reac.reactant, k, -Rat::from_integer(1.into()));
        ia.set(reac.product, k, Rat::from_integer(1.into()));
    }
    let gamma = y.mul(&ia);
    let sigma = match rates {
        None => None,
        Some(map) => {
            let vals = net.rate_values(map)?;
            let mut ik = RationalMatrix::zeros(r, n);
            for (k, reac) in net.reactions.iter().enumerate() {
                ik.set(k, reac.reactant, vals[k].clone());
            }
            Some(gamma.mul(&ik))
        }
    };
    Ok(StructuralMatrices { y, ia, gamma, sigma })
}

/// Exact mass-action right-hand side at a rational state.
pub fn mass_action_rhs_exact(
    net: &Network,
    rates: &BTreeMap<String, Rat>,
    x: &[Rat],
) -> Result<Vec<Rat>> {
    gma_rhs_exact(&GeneralizedNetwork::mass_action(net.clone()), rates, x)
}

/// Mass-action right-hand side in floating point.
pub fn mass_action_rhs(net: &Network, rates: &BTreeMap<String, Rat>, x: &[f64]) -> Result<Vec<f64>> {
    gma_rhs(&GeneralizedNetwork::mass_action(net.clone()), rates, x)
}

/// Exact generalized (power-law) right-hand side: each reaction contributes
/// `rate * x^(kinetic reactant vector) * (product - reactant)`.
pub fn gma_rhs_exact(
    gnet: &GeneralizedNetwork,
    rates: &BTreeMap<String, Rat>,
    x: &[Rat],
) -> Result<Vec<Rat>> {
    let net = &gnet.base;
    if x.len() != net.num_species() {
        return Err(CrnError::Dimension("state length differs from species count".into()));
    }
    let vals = net.rate_values(rates)?;
    let mut out = vec![Rat::zero(); net.num_species()];
    for (k, reac) in net.reactions.iter().enumerate() {
        let mut flux = vals[k].clone();
        for (i, &e) in gnet.kinetic_vector(reac.reactant).coeffs().iter().enumerate() {
            for _ in 0..e {
                flux *= &x[i];
            }
        }
        let yr = net.complexes[reac.reactant].coeffs();
        let yp = net.complexes[reac.product].coeffs();
        for i in 0..net.num_species() {
            let d = yp[i] - yr[i];
            if d != 0 {
                out[i] += &flux * Rat::from_integer(d.into());
            }
        }
    }
    Ok(out)
}

/// Generalized right-hand side in floating point.
pub fn gma_rhs(
    gnet: &GeneralizedNetwork,
    rates: &BTreeMap<String, Rat>,
    x: &[f64],
) -> Result<Vec<f64>> {
    let net = &gnet.base;
    if x.len() != net.num_species() {
        return Err(CrnError::Dimension("state length differs from species count".into()));
    }
    let vals = net.rate_values(rates)?;
    let mut out = vec![0.0; net.num_species()];
    for (k, reac) in net.reactions.iter().enumerate() {
        let mut flux = rat_to_f64(&vals[k]);
        for (i, &e) in gnet.kinetic_vector(reac.reactant).coeffs().iter().enumerate() {
            if e != 0 {
                flux *= x[i].powi(e as i32);
            }
        }
        let yr = net.complexes[reac.reactant].coeffs();
        let yp = net.complexes[reac.product].coeffs();
        for i in 0..net.num_species() {
            out[i] += flux * (yp[i] - yr[i]) as f64;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> CrnError {
    CrnError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Column (1-based) of `needle` within `hay`, defaulting to 1.
fn col_of(hay: &str, needle: &str) -> usize {
    hay.find(needle.trim()).map_or(1, |p| p + 1)
}

struct PendingReaction {
    reactant: Vec<(String, i64)>,
    product: Vec<(String, i64)>,
    rate: String,
}

struct PendingKinetic {
    line: usize,
    target: Vec<(String, i64)>,
    value: Vec<(String, i64)>,
}

/// Parses a complex expression (`0`, `A`, `2 A + B`, `2A + B`) into
/// species/coefficient pairs.
fn parse_complex_terms(expr: &str, line: usize, full: &str) -> Result<Vec<(String, i64)>> {
    let e = expr.trim();
    if e.is_empty() {
        return Err(perr(line, col_of(full, expr), "empty complex expression"));
    }
    if e == "0" {
        return Ok(Vec::new());
    }
    let mut out: Vec<(String, i64)> = Vec::new();
    for raw in e.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(perr(line, col_of(full, raw), "empty term in complex"));
        }
        let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rest = term[digits.len()..].trim();
        let (coeff, name) = if digits.is_empty() {
            (1i64, term)
        } else {
            let c: i64 = digits
                .parse()
                .map_err(|_| perr(line, col_of(full, term), "invalid coefficient"))?;
            (c, rest)
        };
        if coeff < 1 {
            return Err(perr(
                line,
                col_of(full, term),
                "complex coefficients must be positive integers",
            ));
        }
        if !is_ident(name) {
            return Err(perr(
                line,
                col_of(full, term),
                format!("invalid species name '{name}'"),
            ));
        }
        match out.iter_mut().find(|(n, _)| n == name) {
            Some((_, c)) => *c += coeff,
            None => out.push((name.to_string(), coeff)),
        }
    }
    Ok(out)
}

/// Parsed form of the text format including kinetic-order overrides.
pub fn parse_generalized_network(text: &str) -> Result<GeneralizedNetwork> {
    let mut name: Option<String> = None;
    let mut declared: Vec<String> = Vec::new();
    let mut pending: Vec<PendingReaction> = Vec::new();
    let mut kinetics: Vec<PendingKinetic> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix("network ") {
            if name.is_some() {
                return Err(perr(line_no, 1, "duplicate 'network' line"));
            }
            let n = rest.trim();
            if n.is_empty() || n.split_whitespace().count() != 1 {
                return Err(perr(line_no, col_of(line, rest), "network name must be a single token"));
            }
            name = Some(n.to_string());
            continue;
        }
        if let Some(rest) = t.strip_prefix("species ") {
            for tok in rest.split_whitespace() {
                if !is_ident(tok) {
                    return Err(perr(
                        line_no,
                        col_of(line, tok),
                        format!("invalid species name '{tok}'"),
                    ));
                }
                if declared.iter().any(|d| d == tok) {
                    return Err(perr(
                        line_no,
                        col_of(line, tok),
                        format!("species '{tok}' declared twice"),
                    ));
                }
                declared.push(tok.to_string());
            }
            continue;
        }
        if let Some(rest) = t.strip_prefix("kinetic ") {
            let Some((lhs, rhs)) = rest.split_once(":=") else {
                return Err(perr(line_no, col_of(line, rest), "kinetic line needs ':='"));
            };
            kinetics.push(PendingKinetic {
                line: line_no,
                target: parse_complex_terms(lhs, line_no, line)?,
                value: parse_complex_terms(rhs, line_no, line)?,
            });
            continue;
        }
        // Reaction line.
        let Some((arrows, rates)) = t.split_once(';') else {
            return Err(perr(line_no, 1, "reaction line needs '; <rate>'"));
        };
        let rate_syms: Vec<&str> = rates.split(',').map(|s| s.trim()).collect();
        for s in &rate_syms {
            if !is_ident(s) {
                return Err(perr(
                    line_no,
                    col_of(line, s),
                    format!("invalid rate symbol '{s}'"),
                ));
            }
        }
        if let Some((lhs, rhs)) = arrows.split_once("<->") {
            if rate_syms.len() != 2 {
                return Err(perr(
                    line_no,
                    col_of(line, rates),
                    "reversible reaction needs exactly two rate symbols (forward first)",
                ));
            }
            let l = parse_complex_terms(lhs, line_no, line)?;
            let r = parse_complex_terms(rhs, line_no, line)?;
            pending.push(PendingReaction {
                reactant: l.clone(),
                product: r.clone(),
                rate: rate_syms[0].to_string(),
            });
            pending.push(PendingReaction {
                reactant: r,
                product: l,
                rate: rate_syms[1].to_string(),
            });
        } else if let Some((lhs, rhs)) = arrows.split_once("->") {
            if rate_syms.len() != 1 {
                return Err(perr(
                    line_no,
                    col_of(line, rates),
                    "irreversible reaction needs exactly one rate symbol",
                ));
            }
            pending.push(PendingReaction {
                reactant: parse_complex_terms(lhs, line_no, line)?,
                product: parse_complex_terms(rhs, line_no, line)?,
                rate: rate_syms[0].to_string(),
            });
        } else {
            return Err(perr(line_no, 1, "expected '->' or '<->' in reaction line"));
        }
    }

    if pending.is_empty() {
        return Err(CrnError::Invalid("network has no reactions".into()));
    }

    // Species order: declared first, then first appearance.
    let mut species: Vec<String> = declared.clone();
    let add_species = |terms: &[(String, i64)], species: &mut Vec<String>| {
        for (n, _) in terms {
            if !species.iter().any(|s| s == n) {
                species.push(n.clone());
            }
        }
    };
    for p in &pending {
        add_species(&p.reactant, &mut species);
        add_species(&p.product, &mut species);
    }
    let index_of = |n: &str, species: &[String]| species.iter().position(|s| s == n);
    let to_vec = |terms: &[(String, i64)], species: &[String]| -> ComplexVec {
        let mut v = vec![0i64; species.len()];
        for (n, c) in terms {
            v[index_of(n, species).expect("species collected above")] += c;
        }
        ComplexVec::new(v).expect("parsed coefficients are positive")
    };

    // Complexes in order of first use; reactions referencing them.
    let mut complexes: Vec<ComplexVec> = Vec::new();
    let mut reactions: Vec<Reaction> = Vec::new();
    let intern = |c: ComplexVec, complexes: &mut Vec<ComplexVec>| -> usize {
        match complexes.iter().position(|x| *x == c) {
            Some(i) => i,
            None => {
                complexes.push(c);
                complexes.len() - 1
            }
        }
    };
    for (pos, p) in pending.iter().enumerate() {
        let reactant = intern(to_vec(&p.reactant, &species), &mut complexes);
        let product = intern(to_vec(&p.product, &species), &mut complexes);
        if reactant == product {
            return Err(CrnError::SelfReaction(pos + 1));
        }
        reactions.push(Reaction {
            id: pos + 1,
            reactant,
            product,
            rate_symbol: p.rate.clone(),
        });
    }

    let net = Network::new(name, species.clone(), complexes, reactions)?;

    let mut overrides = BTreeMap::new();
    for k in kinetics {
        for (n, _) in k.target.iter().chain(k.value.iter()) {
            if index_of(n, &species).is_none() {
                return Err(perr(k.line, 1, format!("unknown species '{n}' in kinetic line")));
            }
        }
        let target = to_vec(&k.target, &species);
        let Some(j) = net.complex_index(&target) else {
            return Err(perr(
                k.line,
                1,
                format!("kinetic line targets unknown complex '{}'", target.render(&net.species)),
            ));
        };
        if overrides.insert(j, to_vec(&k.value, &species)).is_some() {
            return Err(perr(k.line, 1, "duplicate kinetic line for the same complex"));
        }
    }
    GeneralizedNetwork::new(net, overrides)
}

/// Parses the text format, rejecting kinetic-order overrides.
pub fn parse_network(text: &str) -> Result<Network> {
    let g = parse_generalized_network(text)?;
    if !g.is_mass_action() {
        return Err(CrnError::Invalid(
            "network has kinetic-order overrides; parse it as a generalized network".into(),
        ));
    }
    Ok(g.base)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Canonical text form; `parse_generalized_network` inverts it exactly.
pub fn serialize_generalized_network(gnet: &GeneralizedNetwork) -> String {
    let net = &gnet.base;
    let mut out = String::new();
    if let Some(n) = &net.name {
        out.push_str(&format!("network {n}\n"));
    }
    let names: Vec<&str> = net.species.iter().map(|s| s.name.as_str()).collect();
    out.push_str(&format!("species {}\n\n", names.join(" ")));
    for r in &net.reactions {
        out.push_str(&format!(
            "{} -> {} ; {}\n",
            net.complexes[r.reactant].render(&net.species),
            net.complexes[r.product].render(&net.species),
            r.rate_symbol
        ));
    }
    if !gnet.kinetic_overrides().is_empty() {
        out.push('\n');
        for (j, v) in gnet.kinetic_overrides() {
            out.push_str(&format!(
                "kinetic {} := {}\n",
                net.complexes[*j].render(&net.species),
                v.render(&net.species)
            ));
        }
    }
    out
}

/// Canonical text form of a plain network.
pub fn serialize_network(net: &Network) -> String {
    serialize_generalized_network(&GeneralizedNetwork::mass_action(net.clone()))
}

// ---------------------------------------------------------------------------
// Assignment files (rates, states)
// ---------------------------------------------------------------------------

/// Parses `name = value` lines (comments and blank lines allowed) into an
/// ordered map. Values may be integers, fractions, or decimals; decimals are
/// converted to exact rationals.
pub fn parse_assignments(text: &str) -> Result<BTreeMap<String, Rat>> {
    let mut out = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = t.split_once('=') else {
            return Err(perr(line_no, 1, "expected '<name> = <value>'"));
        };
        let key = lhs.trim();
        if !is_ident(key) {
            return Err(perr(line_no, col_of(line, lhs), format!("invalid name '{key}'")));
        }
        let value = parse_rational(rhs).map_err(|e| {
            perr(line_no, col_of(line, rhs), format!("{e}"))
        })?;
        if out.insert(key.to_string(), value).is_some() {
            return Err(perr(line_no, 1, format!("duplicate assignment for '{key}'")));
        }
    }
    Ok(out)
}

/// Orders a state assignment into a species-indexed vector.
pub fn state_vector(net: &Network, vals: &BTreeMap<String, Rat>) -> Result<Vec<Rat>> {
    for name in vals.keys() {
        if net.species_index(name).is_none() {
            return Err(CrnError::UnknownName {
                kind: "species",
                name: name.clone(),
            });
        }
    }
    net.species
        .iter()
        .map(|s| {
            vals.get(&s.name)
                .cloned()
                .ok_or_else(|| CrnError::MissingValue(s.name.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_frac, rat_i64};

    const FUTILE: &str = "\
network futile-cycle
species S E SE P F PF

S + E <-> SE ; k1, k2
SE -> P + E ; k3
P + F <-> PF ; k4, k5
PF -> S + F ; k6
";

    #[test]
    fn parses_the_futile_cycle() {
        let net = parse_network(FUTILE).unwrap();
        assert_eq!(net.name.as_deref(), Some("futile-cycle"));
        assert_eq!(net.num_species(), 6);
        assert_eq!(net.num_complexes(), 6);
        assert_eq!(net.num_reactions(), 6);
        // Reversible pairs expand forward-first.
        assert_eq!(net.reactions[0].rate_symbol, "k1");
        assert_eq!(net.reactions[1].rate_symbol, "k2");
        assert_eq!(net.reactions[0].reactant, net.reactions[1].product);
        // Complex order follows first use.
        assert_eq!(net.complexes[0].render(&net.species), "S + E");
        assert_eq!(net.complexes[5].render(&net.species), "S + F");
    }

    #[test]
    fn round_trips_through_serialization() {
        let net = parse_network(FUTILE).unwrap();
        let text = serialize_network(&net);
        let again = parse_network(&text).unwrap();
        assert_eq!(net, again);
    }

    #[test]
    fn round_trips_generalized_networks() {
        let text = "A1 + A2 <-> A3 ; k1, k2\nkinetic A1 + A2 := 7 A1 + A3\nkinetic A3 := 5 A2\n";
        let g = parse_generalized_network(text).unwrap();
        assert_eq!(g.kinetic_overrides().len(), 2);
        let again = parse_generalized_network(&serialize_generalized_network(&g)).unwrap();
        assert_eq!(g, again);
        assert!(parse_network(text).is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_network("A -> B\n").unwrap_err();
        match err {
            CrnError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other}"),
        }
        let err = parse_network("A -> 2@ ; k1\n").unwrap_err();
        match err {
            CrnError::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col >= 5, "column should point at the bad term, got {col}");
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn detects_semantic_errors() {
        let dup = "A -> B ; k1\nB -> A ; k1\n";
        assert!(matches!(
            parse_network(dup).unwrap_err(),
            CrnError::DuplicateRateSymbol(s) if s == "k1"
        ));
        let selfr = "A + B -> B + A ; k1\n";
        assert!(matches!(
            parse_network(selfr).unwrap_err(),
            CrnError::SelfReaction(1)
        ));
        let unused = "species A B C\nA -> B ; k1\n";
        assert!(matches!(
            parse_network(unused).unwrap_err(),
            CrnError::UnusedSpecies(s) if s == "C"
        ));
    }

    #[test]
    fn zero_complex_and_coefficients() {
        let net = parse_network("2 A -> 0 ; k1\n0 -> A + A ; k2\n").unwrap();
        assert_eq!(net.num_complexes(), 2);
        assert!(net.complexes[1].is_zero_complex());
        // "A + A" merges into coefficient 2, equal to "2 A".
        assert_eq!(net.reactions[1].product, net.reactions[0].reactant);
    }

    #[test]
    fn structural_matrices_are_consistent() {
        let net = parse_network(FUTILE).unwrap();
        let sm = build_matrices(&net, None).unwrap();
        assert_eq!(sm.y.rows(), 6);
        assert_eq!(sm.y.cols(), 6);
        assert_eq!(sm.ia.rows(), 6);
        assert_eq!(sm.ia.cols(), 6);
        assert_eq!(sm.gamma, sm.y.mul(&sm.ia));
        assert!(sm.sigma.is_none());
        let mut rates = BTreeMap::new();
        for k in 1..=6 {
            rates.insert(format!("k{k}"), rat_i64(k as i64));
        }
        let sm2 = build_matrices(&net, Some(&rates)).unwrap();
        let sigma = sm2.sigma.unwrap();
        assert_eq!(sigma.rows(), 6);
        assert_eq!(sigma.cols(), 6);
    }

    #[test]
    fn rhs_matches_hand_expansion() {
        // A + B -> C with rate 2 at x = (3, 5, 7): flux = 2*15 = 30.
        let net = parse_network("A + B -> C ; k\n").unwrap();
        let mut rates = BTreeMap::new();
        rates.insert("k".to_string(), rat_i64(2));
        let x = vec![rat_i64(3), rat_i64(5), rat_i64(7)];
        let dx = mass_action_rhs_exact(&net, &rates, &x).unwrap();
        assert_eq!(dx, vec![rat_i64(-30), rat_i64(-30), rat_i64(30)]);
        let xf = [3.0, 5.0, 7.0];
        let dxf = mass_action_rhs(&net, &rates, &xf).unwrap();
        assert_eq!(dxf, vec![-30.0, -30.0, 30.0]);
    }

    #[test]
    fn gma_rhs_uses_kinetic_orders() {
        let text = "A1 + A2 <-> A3 ; k1, k2\nkinetic A1 + A2 := 7 A1 + A3\nkinetic A3 := 5 A2\n";
        let g = parse_generalized_network(text).unwrap();
        let mut rates = BTreeMap::new();
        rates.insert("k1".to_string(), rat_i64(1));
        rates.insert("k2".to_string(), rat_i64(1));
        let x = vec![rat_i64(2), rat_i64(1), rat_i64(1)];
        let dx = gma_rhs_exact(&g, &rates, &x).unwrap();
        // dx1 = -k1 x1^7 x3 + k2 x2^5 = -128 + 1.
        assert_eq!(dx[0], rat_i64(-127));
        assert_eq!(dx[2], rat_i64(127));
    }

    #[test]
    fn assignment_files_parse_exactly() {
        let m = parse_assignments("# rates\nk1 = 1/2\nk2 = 0.25\nk3 = 3\n").unwrap();
        assert_eq!(m["k1"], rat_frac(1, 2));
        assert_eq!(m["k2"], rat_frac(1, 4));
        assert_eq!(m["k3"], rat_i64(3));
        assert!(parse_assignments("k1 = 1\nk1 = 2\n").is_err());
    }
}
