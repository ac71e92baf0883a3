//! Binomial steady-state descriptions, sign-condition checks, complex
//! balancing, and numeric solving/verification.
//!
//! For a translation with zero deficiency and zero kinetic deficiency the
//! positive steady states of the source mass-action system are cut out by
//! one binomial per non-anchor complex of each translated linkage class:
//! `K_anchor · x^{kin(j)} − K_j · x^{kin(anchor)}`, where the `K` are tree
//! constants of the translated reaction graph. This module builds those
//! binomials (symbolically, with improper rate adjustments cleared to
//! polynomial coefficients when possible), derives the kinetic-order
//! subspace parametrization, decides the sign conditions behind uniqueness
//! and multistationarity by exact linear programming, and solves the
//! resulting square system numerically with a damped Newton method.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{best_current_decomposition, extreme_currents};
use crate::error::{CrnError, Result};
use crate::graph::{
    is_weakly_reversible, kinetic_order_subspace, linkage_classes, stoichiometric_subspace,
    LinkagePartition,
};
use crate::linalg::{RationalMatrix, SubspaceBasis};
use crate::lp;
use crate::model::{mass_action_rhs, GeneralizedNetwork, Network, Species};
use crate::rat::{rat_from_f64, rat_to_f64, Rat};
use crate::symbolic::{simplify_ratio, Monomial, Polynomial};
use crate::translation::{
    check_strong_resolvability, check_weak_resolvability, classify, semi_proper_network,
    translated_rate_map, StrongResolvability, Translation, TranslationClassification,
};
use crate::trees::tree_constants;

/// Largest ambient dimension for which full sign-vector enumeration is
/// attempted by default (3^m patterns, each an exact LP).
pub const DEFAULT_SIGN_DIM_CAP: usize = 12;

/// One generator `coeff_pos · x^{expon_pos} − coeff_neg · x^{expon_neg}` of
/// the steady-state ideal. Coefficients are polynomials in the rate symbols;
/// exponent vectors are kinetic-complex stoichiometries over the source
/// species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binomial {
    /// Index of the translated linkage class this generator comes from.
    pub class_index: usize,
    /// Anchor complex (translated index) shared by the class.
    pub anchor: usize,
    /// The non-anchor complex this generator eliminates.
    pub member: usize,
    pub coeff_pos: Polynomial,
    pub expon_pos: Vec<i64>,
    pub coeff_neg: Polynomial,
    pub expon_neg: Vec<i64>,
}

impl Binomial {
    /// Evaluates both coefficient polynomials at the given rate values.
    pub fn evaluate_coeffs(&self, vals: &BTreeMap<String, Rat>) -> Result<(Rat, Rat)> {
        Ok((self.coeff_pos.eval(vals)?, self.coeff_neg.eval(vals)?))
    }

    /// Exact residual `coeff_pos·x^{expon_pos} − coeff_neg·x^{expon_neg}`.
    pub fn residual_exact(&self, vals: &BTreeMap<String, Rat>, x: &[Rat]) -> Result<Rat> {
        let (cp, cn) = self.evaluate_coeffs(vals)?;
        Ok(cp * pow_rat(x, &self.expon_pos) - cn * pow_rat(x, &self.expon_neg))
    }

    /// Renders the binomial with species names, e.g.
    /// `(k1*k3) * S*E - (k2*k4 + k2*k5) * SE`.
    pub fn render(&self, species: &[Species]) -> String {
        format!(
            "({}) * {} - ({}) * {}",
            self.coeff_pos,
            render_monomial(&self.expon_pos, species),
            self.coeff_neg,
            render_monomial(&self.expon_neg, species),
        )
    }
}

fn render_monomial(expon: &[i64], species: &[Species]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in expon.iter().enumerate() {
        if e == 1 {
            parts.push(species[i].name.clone());
        } else if e != 0 {
            parts.push(format!("{}^{}", species[i].name, e));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn pow_rat(x: &[Rat], expon: &[i64]) -> Rat {
    let mut acc = Rat::one();
    for (xi, &e) in x.iter().zip(expon) {
        debug_assert!(e >= 0, "kinetic exponents are nonnegative");
        for _ in 0..e {
            acc *= xi.clone();
        }
    }
    acc
}

fn pow_f64(x: &[f64], expon: &[i64]) -> f64 {
    let mut acc = 1.0;
    for (xi, &e) in x.iter().zip(expon) {
        acc *= xi.powi(e as i32);
    }
    acc
}

/// Sign of a rational number; ordered `Minus < Zero < Plus` so sign vectors
/// sort lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn of(r: &Rat) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn negated(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }
}

/// A vector over `{−, 0, +}`, printed as `(+,0,-)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector {
    pub entries: Vec<Sign>,
}

impl SignVector {
    pub fn of_vector(v: &[Rat]) -> SignVector {
        SignVector {
            entries: v.iter().map(Sign::of).collect(),
        }
    }

    pub fn zero(len: usize) -> SignVector {
        SignVector {
            entries: vec![Sign::Zero; len],
        }
    }

    pub fn all_plus(len: usize) -> SignVector {
        SignVector {
            entries: vec![Sign::Plus; len],
        }
    }

    pub fn negated(&self) -> SignVector {
        SignVector {
            entries: self.entries.iter().map(|s| s.negated()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|s| *s == Sign::Zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s.symbol())?;
        }
        write!(f, ")")
    }
}

/// The binomial steady-state description of a resolvable zero-deficiency
/// translation, together with the parametrizing subspaces and the truth
/// values of the two sign-condition hypotheses.
#[derive(Debug, Clone)]
pub struct SteadyStateDescription {
    pub binomials: Vec<Binomial>,
    pub s_tilde_basis: SubspaceBasis,
    pub s_tilde_perp_basis: SubspaceBasis,
    pub uniqueness_condition: bool,
    pub multistationarity_condition: bool,
}

/// Full evidence behind the uniqueness / multistationarity hypotheses.
#[derive(Debug, Clone)]
pub struct SignConditionReport {
    /// Sign vectors realized by the stoichiometric subspace.
    pub sigma_s: BTreeSet<SignVector>,
    /// Sign vectors realized by the kinetic-order subspace.
    pub sigma_s_tilde: BTreeSet<SignVector>,
    /// Whether the two sets coincide.
    pub sign_equal: bool,
    /// A sign vector in one set but not the other, when they differ.
    /// Witnesses from `sigma_s \ sigma_s_tilde` are preferred.
    pub incompatibility_witness: Option<SignVector>,
    /// Whether the all-plus pattern is realized by the orthogonal complement
    /// of the stoichiometric subspace (positive conservation law).
    pub positive_in_s_perp: bool,
    /// Sign equality and a positive conservation law together.
    pub uniqueness_condition: bool,
    /// Whether some nonzero sign vector of the stoichiometric subspace is
    /// also realized by the orthogonal complement of the kinetic-order
    /// subspace.
    pub multistationarity_condition: bool,
    pub multistationarity_witness: Option<SignVector>,
}

/// Tuning knobs for the damped Newton solver.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Seed for restart jitter.
    pub seed: u64,
    /// Newton iterations per attempt.
    pub max_iterations: usize,
    /// Jittered restarts after a failed attempt.
    pub max_restarts: usize,
    /// Relative-residual convergence threshold.
    pub tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            max_iterations: 80,
            max_restarts: 8,
            tolerance: 1e-12,
        }
    }
}

/// Residual report for a claimed steady state of a mass-action network.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// Mass-action flux of each reaction at `x`.
    pub reaction_fluxes: Vec<f64>,
    /// Net production rate of each species (stoichiometric matrix times
    /// fluxes).
    pub species_residuals: Vec<f64>,
    /// Infinity norm of the species residuals.
    pub residual_inf: f64,
    /// Residual norm relative to `max(1, ‖fluxes‖∞)`.
    pub relative_residual_inf: f64,
    /// Best nonnegative weights expressing the flux vector over the extreme
    /// currents.
    pub current_weights: Vec<f64>,
    /// Infinity-norm error of that decomposition.
    pub decomposition_error: f64,
    /// Whether the flux vector decomposes over the extreme currents up to
    /// numerical tolerance.
    pub decomposes: bool,
}

/// Checks the hypotheses under which the binomial description is valid:
/// both deficiencies of the translated network vanish, the translated
/// reaction graph is weakly reversible, and the translation is either
/// proper and strong or strongly resolvable. Returns the classification and
/// the resolvability evidence (present exactly when adjustment factors are
/// needed).
pub fn require_theorem_hypotheses(
    t: &Translation,
) -> Result<(TranslationClassification, Option<StrongResolvability>)> {
    let cls = classify(t)?;
    if cls.deficiency != 0 || cls.kinetic_deficiency != 0 {
        return Err(CrnError::DeficiencyHypothesis(format!(
            "translated network has deficiency {} and kinetic deficiency {}; both must be zero",
            cls.deficiency, cls.kinetic_deficiency
        )));
    }
    if !is_weakly_reversible(&t.translated.base) {
        return Err(CrnError::NotWeaklyReversible("the binomial description"));
    }
    if cls.proper && cls.strong {
        return Ok((cls, None));
    }
    let weak = check_weak_resolvability(t)?;
    if !weak.weakly_resolvable {
        return Err(CrnError::NotResolvable(
            "an improper kinetic difference lies outside the kinetic-order subspace".to_string(),
        ));
    }
    let strong = check_strong_resolvability(t)?;
    if !strong.strongly_resolvable {
        return Err(CrnError::NotResolvable(
            "no consistent rate adjustment exists for the improper reactions".to_string(),
        ));
    }
    Ok((cls, Some(strong)))
}

/// Binomial generators with the default anchor (lowest complex index per
/// translated linkage class) and adjustment factors cleared into polynomial
/// coefficients.
pub fn binomial_generators(t: &Translation) -> Result<Vec<Binomial>> {
    binomial_generators_opts(t, None, true)
}

/// Binomial generators with explicit anchors and/or symbolic `~`-suffixed
/// placeholder rates left in place.
///
/// `anchors` lists translated complex indices; at most one per linkage
/// class, classes without a listed anchor use their lowest complex index.
/// With `clear_adjustments` set, coefficients of an improper translation are
/// rewritten over the source rate symbols by substituting each adjustment
/// factor and clearing denominators class-wide (ratios of constants within a
/// class are preserved exactly).
pub fn binomial_generators_opts(
    t: &Translation,
    anchors: Option<&[usize]>,
    clear_adjustments: bool,
) -> Result<Vec<Binomial>> {
    let (_cls, resolvability) = require_theorem_hypotheses(t)?;
    // Improper reactions get fresh `~`-suffixed symbols standing for their
    // adjusted rate constants.
    let tnet = semi_proper_network(t)?;
    let part = linkage_classes(&tnet);
    let mut constants = tree_constants(&tnet)?;
    if clear_adjustments {
        if let Some(sr) = &resolvability {
            clear_adjustment_symbols(&tnet, t, sr, &part, &mut constants)?;
        }
    }
    let anchor_per_class = resolve_anchors(&part, tnet.num_complexes(), anchors)?;
    let mut out = Vec::new();
    for (ci, class) in part.classes.iter().enumerate() {
        let a = anchor_per_class[ci];
        for &j in class {
            if j == a {
                continue;
            }
            out.push(Binomial {
                class_index: ci,
                anchor: a,
                member: j,
                coeff_pos: constants[a].clone(),
                expon_pos: t.translated.kinetic_vector(j).coeffs().to_vec(),
                coeff_neg: constants[j].clone(),
                expon_neg: t.translated.kinetic_vector(a).coeffs().to_vec(),
            });
        }
    }
    let expected: usize = part.classes.iter().map(|c| c.len() - 1).sum();
    debug_assert_eq!(out.len(), expected);
    Ok(out)
}

fn resolve_anchors(
    part: &LinkagePartition,
    num_complexes: usize,
    anchors: Option<&[usize]>,
) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = part.classes.iter().map(|c| c[0]).collect();
    if let Some(list) = anchors {
        for &a in list {
            if a >= num_complexes {
                return Err(CrnError::Invalid(format!(
                    "anchor index {a} out of range (translated network has {num_complexes} complexes)"
                )));
            }
        }
        for (ci, class) in part.classes.iter().enumerate() {
            let listed: Vec<usize> = list.iter().copied().filter(|a| class.contains(a)).collect();
            match listed.len() {
                0 => {}
                1 => chosen[ci] = listed[0],
                _ => {
                    return Err(CrnError::Invalid(format!(
                        "anchors {listed:?} all lie in the same linkage class; pick one"
                    )))
                }
            }
        }
    }
    Ok(chosen)
}

/// Rewrites tree constants of an improper translation over the source rate
/// symbols. Each `~`-suffixed placeholder stands for `factor · k`; its
/// factor (a ratio of semi-proper tree constants, independent of the
/// placeholders themselves) is reduced, substituted, and the whole linkage
/// class is scaled by the denominator so coefficients stay polynomial.
/// Placeholders whose factor involves non-integer exponents are left alone.
fn clear_adjustment_symbols(
    tnet: &Network,
    t: &Translation,
    sr: &StrongResolvability,
    part: &LinkagePartition,
    constants: &mut [Polynomial],
) -> Result<()> {
    let placeholder_syms: Vec<String> = sr
        .factors
        .keys()
        .map(|&j| tnet.reactions[j].rate_symbol.clone())
        .collect();
    for (&j, factor) in &sr.factors {
        let placeholder = tnet.reactions[j].rate_symbol.clone();
        let base_symbol = t.translated.base.reactions[j].rate_symbol.clone();
        let (raw_num, raw_den) = match factor.as_ratio() {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        // The factor's value does not depend on the placeholder symbols
        // (that is what strong resolvability certifies), so pinning them at
        // one is exact.
        let mut num = raw_num;
        let mut den = raw_den;
        for pl in &placeholder_syms {
            num = num.substitute(pl, &Polynomial::one());
            den = den.substitute(pl, &Polynomial::one());
        }
        let (num, den) = simplify_ratio(&num, &den);
        // Substitute placeholder -> (num/den) * base_symbol. Every spanning
        // tree uses the improper edge at most once, so each constant is
        // affine in the placeholder: A*placeholder + C becomes
        // A*num*base + C*den after clearing the class denominator.
        let replacement = num.mul(&Polynomial::symbol(&base_symbol));
        let class = part
            .classes
            .iter()
            .find(|c| c.contains(&tnet.reactions[j].reactant))
            .expect("every complex lies in a linkage class");
        for &c in class {
            let k = &constants[c];
            debug_assert!(k.degree_in(&placeholder) <= 1);
            let linear = k.coeff_of(&placeholder, 1);
            let constant = k.coeff_of(&placeholder, 0);
            constants[c] = linear.mul(&replacement).add(&constant.mul(&den));
        }
    }
    // Clearing may introduce a common monomial factor across a class; strip
    // it (ratios within the class are what the binomials depend on).
    for class in &part.classes {
        let mut common: Option<Monomial> = None;
        for &c in class {
            let content = constants[c].monomial_content();
            common = Some(match common {
                None => content,
                Some(prev) => monomial_gcd(&prev, &content),
            });
        }
        if let Some(common) = common {
            if !common.exponents.is_empty() {
                let strip = Monomial {
                    coeff: Rat::one(),
                    exponents: common.exponents,
                };
                for &c in class {
                    constants[c] = constants[c].div_monomial(&strip);
                }
            }
        }
    }
    Ok(())
}

fn monomial_gcd(a: &Monomial, b: &Monomial) -> Monomial {
    let mut exponents = BTreeMap::new();
    for (sym, &ea) in &a.exponents {
        if let Some(&eb) = b.exponents.get(sym) {
            let e = ea.min(eb);
            if e > 0 {
                exponents.insert(sym.clone(), e);
            }
        }
    }
    Monomial {
        coeff: Rat::one(),
        exponents,
    }
}

/// The kinetic-order subspace and its orthogonal complement, which
/// parametrizes the positive steady-state set multiplicatively.
pub fn parametrization(t: &Translation) -> Result<(SubspaceBasis, SubspaceBasis)> {
    require_theorem_hypotheses(t)?;
    let s_tilde = kinetic_order_subspace(&t.translated);
    let perp = s_tilde.orthogonal_complement();
    Ok((s_tilde, perp))
}

/// Decides whether some vector of the subspace realizes the sign pattern:
/// strictly positive where `+`, strictly negative where `−`, zero where `0`.
/// Exact: strict inequalities become `≥ 1` / `≤ −1`, valid by scaling.
pub fn sign_feasible(basis: &SubspaceBasis, pattern: &SignVector) -> bool {
    let m = basis.ambient_dim();
    assert_eq!(pattern.len(), m, "sign pattern has wrong length");
    if pattern.is_zero() {
        return true;
    }
    let d = basis.dim();
    if d == 0 {
        return false;
    }
    // Quick reject: a strict coordinate where every basis vector vanishes.
    for i in 0..m {
        if pattern.entries[i] != Sign::Zero && basis.vectors().iter().all(|v| v[i].is_zero()) {
            return false;
        }
    }
    // Variables: d positive parts, d negative parts, one slack per strict
    // row. Row i encodes v_i = Σ λ_k B_k[i] with v_i = ±1 ∓ slack or 0.
    let strict: Vec<usize> = (0..m)
        .filter(|&i| pattern.entries[i] != Sign::Zero)
        .collect();
    let nvars = 2 * d + strict.len();
    let mut a = RationalMatrix::zeros(m, nvars);
    let mut b = vec![Rat::zero(); m];
    for i in 0..m {
        for (k, v) in basis.vectors().iter().enumerate() {
            a.set(i, k, v[i].clone());
            a.set(i, d + k, -v[i].clone());
        }
    }
    for (si, &i) in strict.iter().enumerate() {
        match pattern.entries[i] {
            Sign::Plus => {
                // v_i - s = 1
                a.set(i, 2 * d + si, -Rat::one());
                b[i] = Rat::one();
            }
            Sign::Minus => {
                // v_i + s = -1
                a.set(i, 2 * d + si, Rat::one());
                b[i] = -Rat::one();
            }
            Sign::Zero => unreachable!(),
        }
    }
    lp::feasible(&a, &b)
}

/// The exact set of sign vectors realized by a subspace, by exhaustive
/// feasibility over the support coordinates. Errors when the ambient
/// dimension exceeds `cap`.
pub fn sign_vectors(basis: &SubspaceBasis, cap: usize) -> Result<BTreeSet<SignVector>> {
    let m = basis.ambient_dim();
    if m > cap {
        return Err(CrnError::CapExceeded(format!(
            "sign-vector enumeration needs 3^{m} patterns; ambient dimension exceeds the cap of {cap}"
        )));
    }
    let mut out = BTreeSet::new();
    out.insert(SignVector::zero(m));
    let support: Vec<usize> = (0..m)
        .filter(|&i| basis.vectors().iter().any(|v| !v[i].is_zero()))
        .collect();
    if basis.dim() == 0 || support.is_empty() {
        return Ok(out);
    }
    let k = support.len();
    let mut digits = vec![0u8; k];
    loop {
        // Advance the base-3 counter (0 = zero, 1 = plus, 2 = minus).
        let mut pos = 0;
        while pos < k {
            digits[pos] += 1;
            if digits[pos] < 3 {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
        // Canonical representative: first nonzero digit is plus. The
        // negation of every feasible pattern is feasible, so the minus-first
        // half is obtained by closure instead of separate LPs.
        match digits.iter().find(|&&d| d != 0) {
            None => continue,
            Some(2) => continue,
            _ => {}
        }
        let mut entries = vec![Sign::Zero; m];
        for (di, &i) in support.iter().enumerate() {
            entries[i] = match digits[di] {
                0 => Sign::Zero,
                1 => Sign::Plus,
                _ => Sign::Minus,
            };
        }
        let pattern = SignVector { entries };
        if sign_feasible(basis, &pattern) {
            out.insert(pattern.negated());
            out.insert(pattern);
        }
    }
    Ok(out)
}

/// Evaluates both sign-condition hypotheses with full supporting evidence.
pub fn sign_condition_report(t: &Translation, cap: usize) -> Result<SignConditionReport> {
    let s = stoichiometric_subspace(&t.source)?;
    let s_tilde = kinetic_order_subspace(&t.translated);
    let sigma_s = sign_vectors(&s, cap)?;
    let sigma_s_tilde = sign_vectors(&s_tilde, cap)?;
    let sign_equal = sigma_s == sigma_s_tilde;
    let incompatibility_witness = if sign_equal {
        None
    } else {
        sigma_s
            .difference(&sigma_s_tilde)
            .next()
            .or_else(|| sigma_s_tilde.difference(&sigma_s).next())
            .cloned()
    };
    let m = t.source.num_species();
    let positive_in_s_perp = sign_feasible(&s.orthogonal_complement(), &SignVector::all_plus(m));
    let s_tilde_perp = s_tilde.orthogonal_complement();
    let multistationarity_witness = sigma_s
        .iter()
        .find(|sv| !sv.is_zero() && sign_feasible(&s_tilde_perp, sv))
        .cloned();
    Ok(SignConditionReport {
        sign_equal,
        incompatibility_witness,
        positive_in_s_perp,
        uniqueness_condition: sign_equal && positive_in_s_perp,
        multistationarity_condition: multistationarity_witness.is_some(),
        multistationarity_witness,
        sigma_s,
        sigma_s_tilde,
    })
}

/// True when the sign vectors of the stoichiometric and kinetic-order
/// subspaces coincide and the stoichiometric complement realizes an all-plus
/// vector. Under the theorem this guarantees exactly one positive steady
/// state per compatibility class.
pub fn check_uniqueness_condition(t: &Translation, cap: usize) -> Result<bool> {
    Ok(sign_condition_report(t, cap)?.uniqueness_condition)
}

/// True when some nonzero sign vector of the stoichiometric subspace is also
/// realized by the complement of the kinetic-order subspace. Under the
/// theorem this licenses rate constants with more than one positive steady
/// state in a compatibility class.
pub fn check_multistationarity_condition(t: &Translation, cap: usize) -> Result<bool> {
    Ok(sign_condition_report(t, cap)?.multistationarity_condition)
}

/// Exact complex-balance test: at `x`, zero net flow through every complex
/// of the (generalized) network.
pub fn check_complex_balanced(
    gnet: &GeneralizedNetwork,
    rates: &BTreeMap<String, Rat>,
    x: &[Rat],
) -> Result<bool> {
    let net = &gnet.base;
    if x.len() != net.num_species() {
        return Err(CrnError::Dimension(format!(
            "state has {} entries, network has {} species",
            x.len(),
            net.num_species()
        )));
    }
    if x.iter().any(|v| !v.is_positive()) {
        return Err(CrnError::Invalid(
            "complex balancing is defined at strictly positive states".to_string(),
        ));
    }
    let k = net.rate_values(rates)?;
    let mut net_flow = vec![Rat::zero(); net.num_complexes()];
    for (j, r) in net.reactions.iter().enumerate() {
        let flux = k[j].clone() * pow_rat(x, gnet.kinetic_vector(r.reactant).coeffs());
        net_flow[r.product] += flux.clone();
        net_flow[r.reactant] -= flux;
    }
    Ok(net_flow.iter().all(|f| f.is_zero()))
}

/// Floating-point complex-balance test with a relative tolerance against the
/// gross flow through each complex.
pub fn check_complex_balanced_f64(
    gnet: &GeneralizedNetwork,
    rates: &BTreeMap<String, Rat>,
    x: &[f64],
    rel_tol: f64,
) -> Result<bool> {
    let net = &gnet.base;
    if x.len() != net.num_species() {
        return Err(CrnError::Dimension(format!(
            "state has {} entries, network has {} species",
            x.len(),
            net.num_species()
        )));
    }
    let k: Vec<f64> = net.rate_values(rates)?.iter().map(rat_to_f64).collect();
    let mut net_flow = vec![0.0; net.num_complexes()];
    let mut gross = vec![0.0; net.num_complexes()];
    for (j, r) in net.reactions.iter().enumerate() {
        let flux = k[j] * pow_f64(x, gnet.kinetic_vector(r.reactant).coeffs());
        net_flow[r.product] += flux;
        gross[r.product] += flux.abs();
        net_flow[r.reactant] -= flux;
        gross[r.reactant] += flux.abs();
    }
    Ok(net_flow
        .iter()
        .zip(&gross)
        .all(|(n, g)| n.abs() <= rel_tol * g.max(1.0)))
}

/// Solves the binomial system within the compatibility class of `x0` using
/// default options. See [`solve_steady_state_opts`].
pub fn solve_steady_state(
    t: &Translation,
    rates: &BTreeMap<String, Rat>,
    x0: &[Rat],
) -> Result<Vec<f64>> {
    solve_steady_state_opts(t, rates, x0, &SolveOptions::default())
}

/// Solves the combined square system "all binomials vanish" plus
/// "conservation laws match `x0`" by damped Newton iteration from `x0`,
/// with jittered restarts on failure.
pub fn solve_steady_state_opts(
    t: &Translation,
    rates: &BTreeMap<String, Rat>,
    x0: &[Rat],
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let binomials = binomial_generators(t)?;
    solve_with_binomials(t, &binomials, rates, x0, opts)
}

/// Newton solve against a caller-supplied binomial set (for anchor-variation
/// experiments); the set must describe the same translation.
pub fn solve_with_binomials(
    t: &Translation,
    binomials: &[Binomial],
    rates: &BTreeMap<String, Rat>,
    x0: &[Rat],
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let m = t.source.num_species();
    if x0.len() != m {
        return Err(CrnError::Dimension(format!(
            "initial state has {} entries, network has {m} species",
            x0.len()
        )));
    }
    if x0.iter().any(|v| !v.is_positive()) {
        return Err(CrnError::Invalid(
            "the initial state must be strictly positive".to_string(),
        ));
    }
    let env = translated_rate_map(t, rates)?;
    let coeffs: Vec<(f64, f64)> = binomials
        .iter()
        .map(|b| {
            b.evaluate_coeffs(&env)
                .map(|(p, n)| (rat_to_f64(&p), rat_to_f64(&n)))
        })
        .collect::<Result<_>>()?;
    // Conservation rows pin the stoichiometric compatibility class of x0.
    let s_perp = stoichiometric_subspace(&t.source)?.orthogonal_complement();
    let cons: Vec<Vec<f64>> = s_perp
        .vectors()
        .iter()
        .map(|w| w.iter().map(rat_to_f64).collect())
        .collect();
    let targets: Vec<f64> = s_perp
        .vectors()
        .iter()
        .map(|w| {
            let dot: Rat = w
                .iter()
                .zip(x0)
                .map(|(wi, xi)| wi.clone() * xi.clone())
                .sum();
            rat_to_f64(&dot)
        })
        .collect();
    let rows = binomials.len() + cons.len();
    if rows != m {
        return Err(CrnError::Dimension(format!(
            "steady-state system is not square: {} binomials + {} conservation laws for {m} species",
            binomials.len(),
            cons.len()
        )));
    }
    let base: Vec<f64> = x0.iter().map(rat_to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..=opts.max_restarts {
        let start: Vec<f64> = if attempt == 0 {
            base.clone()
        } else {
            base.iter()
                .map(|v| v * f64::exp(rng.gen_range(-0.7..0.7)))
                .collect()
        };
        if let Some(x) = newton_attempt(binomials, &coeffs, &cons, &targets, &start, opts) {
            return Ok(x);
        }
    }
    Err(CrnError::Numeric(format!(
        "steady-state solver did not converge within {} iterations over {} attempts",
        opts.max_iterations,
        opts.max_restarts + 1
    )))
}

/// Scaled residual vector and the relative residual (convergence measure).
fn residuals(
    binomials: &[Binomial],
    coeffs: &[(f64, f64)],
    cons: &[Vec<f64>],
    targets: &[f64],
    scale: &[f64],
    x: &[f64],
) -> (Vec<f64>, f64) {
    const TINY: f64 = 1e-300;
    let mut f = Vec::with_capacity(binomials.len() + cons.len());
    let mut rel: f64 = 0.0;
    for (b, &(cp, cn)) in binomials.iter().zip(coeffs) {
        let tp = cp * pow_f64(x, &b.expon_pos);
        let tn = cn * pow_f64(x, &b.expon_neg);
        let r = tp - tn;
        f.push(r * scale[f.len()]);
        rel = rel.max(r.abs() / tp.abs().max(tn.abs()).max(TINY));
    }
    for (w, &target) in cons.iter().zip(targets) {
        let mut dot = 0.0;
        let mut gross = 0.0;
        for (wi, xi) in w.iter().zip(x) {
            dot += wi * xi;
            gross += (wi * xi).abs();
        }
        let r = dot - target;
        f.push(r * scale[f.len()]);
        rel = rel.max(r.abs() / target.abs().max(gross).max(TINY));
    }
    (f, rel)
}

fn newton_attempt(
    binomials: &[Binomial],
    coeffs: &[(f64, f64)],
    cons: &[Vec<f64>],
    targets: &[f64],
    x0: &[f64],
    opts: &SolveOptions,
) -> Option<Vec<f64>> {
    const TINY: f64 = 1e-300;
    let m = x0.len();
    // Fixed row scaling from the initial point keeps rows comparable.
    let mut scale = Vec::with_capacity(m);
    for (b, &(cp, cn)) in binomials.iter().zip(coeffs) {
        let tp = (cp * pow_f64(x0, &b.expon_pos)).abs();
        let tn = (cn * pow_f64(x0, &b.expon_neg)).abs();
        scale.push(1.0 / tp.max(tn).max(TINY));
    }
    for (w, &target) in cons.iter().zip(targets) {
        let gross: f64 = w.iter().zip(x0).map(|(wi, xi)| (wi * xi).abs()).sum();
        scale.push(1.0 / target.abs().max(gross).max(TINY));
    }
    let mut x = x0.to_vec();
    for _ in 0..opts.max_iterations {
        let (f, rel) = residuals(binomials, coeffs, cons, targets, &scale, &x);
        if rel < opts.tolerance {
            return Some(x);
        }
        let norm = f.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        // Scaled Jacobian: binomial rows are C·e_j·x^e/x_j, conservation
        // rows are the constant law vectors.
        let mut jac = vec![vec![0.0; m]; m];
        for (row, (b, &(cp, cn))) in binomials.iter().zip(coeffs).enumerate() {
            let tp = cp * pow_f64(&x, &b.expon_pos);
            let tn = cn * pow_f64(&x, &b.expon_neg);
            for j in 0..m {
                let dp = b.expon_pos[j] as f64 * tp / x[j];
                let dn = b.expon_neg[j] as f64 * tn / x[j];
                jac[row][j] = (dp - dn) * scale[row];
            }
        }
        for (ci, w) in cons.iter().enumerate() {
            let row = binomials.len() + ci;
            for j in 0..m {
                jac[row][j] = w[j] * scale[row];
            }
        }
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let dx = lu_solve(jac, rhs)?;
        // Damped update; clipping to x/2 keeps the iterate positive.
        let mut alpha = 1.0f64;
        let mut accepted = false;
        for _ in 0..30 {
            let candidate: Vec<f64> = x
                .iter()
                .zip(&dx)
                .map(|(xi, di)| (xi + alpha * di).max(xi / 2.0))
                .collect();
            let (fc, _) = residuals(binomials, coeffs, cons, targets, &scale, &candidate);
            let cnorm = fc.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if cnorm < norm * (1.0 - 1e-4 * alpha) {
                x = candidate;
                accepted = true;
                break;
            }
            alpha /= 2.0;
        }
        if !accepted {
            return None;
        }
    }
    let (_, rel) = residuals(binomials, coeffs, cons, targets, &scale, &x);
    if rel < opts.tolerance {
        Some(x)
    } else {
        None
    }
}

/// Dense LU with partial pivoting; returns `None` on (near-)singularity.
fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let (pivot, maxval) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if maxval <= 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
        if !x[r].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Residual report for `x` as a steady state of the mass-action network:
/// per-species net production, its norm, and the best nonnegative
/// decomposition of the flux vector over the extreme currents.
pub fn verify_steady_state(
    net: &Network,
    rates: &BTreeMap<String, Rat>,
    x: &[f64],
) -> Result<VerificationReport> {
    if x.len() != net.num_species() {
        return Err(CrnError::Dimension(format!(
            "state has {} entries, network has {} species",
            x.len(),
            net.num_species()
        )));
    }
    let k: Vec<f64> = net.rate_values(rates)?.iter().map(rat_to_f64).collect();
    let fluxes: Vec<f64> = net
        .reactions
        .iter()
        .enumerate()
        .map(|(j, r)| k[j] * pow_f64(x, net.complexes[r.reactant].coeffs()))
        .collect();
    let species_residuals = mass_action_rhs(net, rates, x)?;
    let residual_inf = species_residuals
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let flux_inf = fluxes.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let relative_residual_inf = residual_inf / flux_inf.max(1.0);
    let currents = extreme_currents(net)?;
    let target: Vec<Rat> = fluxes
        .iter()
        .map(|&v| rat_from_f64(v))
        .collect::<Result<_>>()?;
    let (err, weights) = best_current_decomposition(&currents, &target);
    let decomposition_error = rat_to_f64(&err);
    Ok(VerificationReport {
        reaction_fluxes: fluxes,
        species_residuals,
        residual_inf,
        relative_residual_inf,
        current_weights: weights.iter().map(rat_to_f64).collect(),
        decomposition_error,
        decomposes: decomposition_error <= 1e-8 * flux_inf.max(1.0),
    })
}

/// The full steady-state description: binomials, parametrizing subspaces,
/// and the two sign-condition hypothesis values.
pub fn steady_state_description(t: &Translation, cap: usize) -> Result<SteadyStateDescription> {
    let binomials = binomial_generators(t)?;
    let (s_tilde_basis, s_tilde_perp_basis) = parametrization(t)?;
    let signs = sign_condition_report(t, cap)?;
    Ok(SteadyStateDescription {
        binomials,
        s_tilde_basis,
        s_tilde_perp_basis,
        uniqueness_condition: signs.uniqueness_condition,
        multistationarity_condition: signs.multistationarity_condition,
    })
}
