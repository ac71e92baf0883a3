//! Shared helpers for the integration suites.
//!
//! The checks here are deliberately *independent* of the library: ranks and
//! determinants come from a plain fraction Gaussian elimination written in
//! this file, tree-constant values from Laplacian minors, and trajectories
//! from a self-contained adaptive Runge-Kutta integrator. Where a library
//! result is cross-checked, the reference side never calls back into the
//! library routine under test.
#![allow(dead_code)]
// Reference implementations use index loops on purpose: they should read
// like the textbook formulas they mirror.
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use crn_toric::model::Network;
use crn_toric::rat::{rat_frac, rat_to_f64, Rat};
use crn_toric::translation::Translation;
use num::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every network file shipped in the corpus directory.
pub const CORPUS_NETWORKS: &[&str] = &[
    "chain_two_classes.crn",
    "cycle3.crn",
    "cycle5_chord.crn",
    "futile_cycle.crn",
    "futile_translated.crn",
    "lotka_volterra.crn",
    "multiple_futile_cycle_2.crn",
    "power_law_pair.crn",
    "reversible_chain.crn",
    "sf_translated.crn",
    "shinar_feinberg.crn",
    "single_irreversible.crn",
    "wr_two_classes.crn",
];

/// Reads a corpus file bundled with the package.
pub fn corpus(name: &str) -> String {
    let path = format!("{}/corpus/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Exact linear algebra, written from scratch
// ---------------------------------------------------------------------------

/// Rank by plain Gaussian elimination over the rationals.
pub fn rank_oracle(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..ncols {
                    let sub = &f * &m[rank][j];
                    m[i][j] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by fraction Gaussian elimination with partial pivoting.
pub fn det_oracle(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for i in col + 1..n {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..n {
                    let sub = &f * &m[col][j];
                    m[i][j] -= sub;
                }
            }
        }
    }
    det
}

/// Basis of `{ v : rows . v = 0 }` by back-substitution from an RREF.
pub fn nullspace_oracle(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for j in col..ncols {
            m[rank][j] = &m[rank][j] / &pivot;
        }
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..ncols {
                    let sub = &f * &m[rank][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for &(r, c) in &pivots {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Structural oracles over a parsed network
// ---------------------------------------------------------------------------

/// Columns of the complex-composition matrix: one species vector per complex.
pub fn complex_columns(net: &Network) -> Vec<Vec<Rat>> {
    net.complexes
        .iter()
        .map(|c| c.coeffs().iter().map(|&v| rat_i(v)).collect())
        .collect()
}

/// Columns of the incidence matrix: per reaction, -1 at the reactant complex
/// and +1 at the product complex.
pub fn incidence_columns(net: &Network) -> Vec<Vec<Rat>> {
    let n = net.num_complexes();
    net.reactions
        .iter()
        .map(|r| {
            let mut col = vec![Rat::zero(); n];
            col[r.reactant] -= Rat::one();
            col[r.product] += Rat::one();
            col
        })
        .collect()
}

/// Columns of the stoichiometric matrix: one reaction vector per reaction.
pub fn reaction_vector_columns(net: &Network) -> Vec<Vec<Rat>> {
    net.reactions
        .iter()
        .map(|r| {
            let yr = net.complexes[r.reactant].coeffs();
            let yp = net.complexes[r.product].coeffs();
            yr.iter().zip(yp).map(|(&a, &b)| rat_i(b - a)).collect()
        })
        .collect()
}

/// Number of connected components of the reaction graph, by union-find.
pub fn linkage_count_oracle(net: &Network) -> usize {
    let n = net.num_complexes();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for r in &net.reactions {
        let a = find(&mut parent, r.reactant);
        let b = find(&mut parent, r.product);
        if a != b {
            parent[a] = b;
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect::<std::collections::BTreeSet<_>>().len()
}

/// Both textbook deficiency formulas, computed from scratch:
/// `n - l - s` and `dim(ker Y ∩ Im I_a) = rank(I_a) - rank(Y I_a)`.
pub fn deficiency_oracle(net: &Network) -> (usize, usize) {
    let n = net.num_complexes();
    let l = linkage_count_oracle(net);
    let s = rank_oracle(&reaction_vector_columns(net));
    let rank_ia = rank_oracle(&incidence_columns(net));
    (n - l - s, rank_ia - s)
}

/// Conservation laws: a basis of the orthogonal complement of the span of
/// the reaction vectors.
pub fn conservation_rows_oracle(net: &Network) -> Vec<Vec<Rat>> {
    let m = net.num_species();
    // v is a conservation law iff v . gamma_col = 0 for every reaction.
    let rows: Vec<Vec<Rat>> = reaction_vector_columns(net);
    nullspace_oracle(&rows, m)
}

// ---------------------------------------------------------------------------
// Matrix-tree oracle
// ---------------------------------------------------------------------------

/// Tree constant of `root` by the matrix-tree theorem: the principal minor
/// of the out-degree Laplacian with the root row and column removed. The
/// Laplacian is restricted to the connected component of `root`, so that
/// other components do not contribute their (singular) blocks.
pub fn tree_constant_minor_oracle(
    net: &Network,
    rates: &BTreeMap<String, Rat>,
    root: usize,
) -> Rat {
    let n = net.num_complexes();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in &net.reactions {
        adj[r.reactant].push(r.product);
        adj[r.product].push(r.reactant);
    }
    let mut in_class = vec![false; n];
    let mut stack = vec![root];
    in_class[root] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !in_class[w] {
                in_class[w] = true;
                stack.push(w);
            }
        }
    }
    let members: Vec<usize> = (0..n).filter(|&i| in_class[i]).collect();
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let k = members.len();
    let mut lap = vec![vec![Rat::zero(); k]; k];
    for r in &net.reactions {
        if !in_class[r.reactant] {
            continue;
        }
        let rate = rates
            .get(&r.rate_symbol)
            .unwrap_or_else(|| panic!("missing rate {}", r.rate_symbol))
            .clone();
        lap[pos[&r.reactant]][pos[&r.reactant]] += &rate;
        lap[pos[&r.product]][pos[&r.reactant]] -= &rate;
    }
    let rpos = pos[&root];
    let minor: Vec<Vec<Rat>> = (0..k)
        .filter(|&i| i != rpos)
        .map(|i| {
            (0..k)
                .filter(|&j| j != rpos)
                .map(|j| lap[i][j].clone())
                .collect()
        })
        .collect();
    det_oracle(minor)
}

/// Parses either a plain network or the base graph of a kinetically
/// decorated one.
pub fn parse_any_base(text: &str) -> crn_toric::Result<Network> {
    match crn_toric::model::parse_network(text) {
        Ok(net) => Ok(net),
        Err(_) => Ok(crn_toric::model::parse_generalized_network(text)?.base),
    }
}

// ---------------------------------------------------------------------------
// Right-hand sides, written from scratch
// ---------------------------------------------------------------------------

/// Exact mass-action right-hand side of the source network.
pub fn source_rhs_oracle(net: &Network, rates: &BTreeMap<String, Rat>, x: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); net.num_species()];
    for r in &net.reactions {
        let mut flux = rates[&r.rate_symbol].clone();
        for (i, &e) in net.complexes[r.reactant].coeffs().iter().enumerate() {
            for _ in 0..e {
                flux *= &x[i];
            }
        }
        let yr = net.complexes[r.reactant].coeffs();
        let yp = net.complexes[r.product].coeffs();
        for i in 0..out.len() {
            out[i] += &flux * rat_i(yp[i] - yr[i]);
        }
    }
    out
}

/// Exact right-hand side of a translated system: stoichiometry from the
/// translated complexes, monomials from the kinetic complexes, rates from
/// the caller (already adjusted where needed).
pub fn translated_rhs_oracle(t: &Translation, rates: &[Rat], x: &[Rat]) -> Vec<Rat> {
    let base = &t.translated.base;
    let mut out = vec![Rat::zero(); base.num_species()];
    for (idx, r) in base.reactions.iter().enumerate() {
        let mut flux = rates[idx].clone();
        for (i, &e) in t.translated.kinetic_vector(r.reactant).coeffs().iter().enumerate() {
            for _ in 0..e {
                flux *= &x[i];
            }
        }
        let yr = base.complexes[r.reactant].coeffs();
        let yp = base.complexes[r.product].coeffs();
        for i in 0..out.len() {
            out[i] += &flux * rat_i(yp[i] - yr[i]);
        }
    }
    out
}

/// Floating-point mass-action right-hand side of the source network.
pub fn source_rhs_f64(net: &Network, rates: &BTreeMap<String, Rat>, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; net.num_species()];
    for r in &net.reactions {
        let mut flux = rat_to_f64(&rates[&r.rate_symbol]);
        for (i, &e) in net.complexes[r.reactant].coeffs().iter().enumerate() {
            flux *= x[i].powi(e as i32);
        }
        let yr = net.complexes[r.reactant].coeffs();
        let yp = net.complexes[r.product].coeffs();
        for i in 0..out.len() {
            out[i] += flux * (yp[i] - yr[i]) as f64;
        }
    }
    out
}

/// Mass-action residual at `x` relative to the gross per-species activity,
/// so the measure is invariant under rescaling all rates.
pub fn relative_residual_oracle(net: &Network, rates: &BTreeMap<String, Rat>, x: &[f64]) -> f64 {
    let mut gross = vec![0.0; net.num_species()];
    for r in &net.reactions {
        let mut flux = rat_to_f64(&rates[&r.rate_symbol]);
        for (i, &e) in net.complexes[r.reactant].coeffs().iter().enumerate() {
            flux *= x[i].powi(e as i32);
        }
        let yr = net.complexes[r.reactant].coeffs();
        let yp = net.complexes[r.product].coeffs();
        for i in 0..gross.len() {
            gross[i] += flux.abs() * ((yp[i] - yr[i]) as f64).abs();
        }
    }
    let scale = gross.iter().cloned().fold(1.0_f64, f64::max);
    inf_norm(&source_rhs_f64(net, rates, x)) / scale
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

pub fn rel_diff_inf(a: &[f64], b: &[f64]) -> f64 {
    let scale = inf_norm(a).max(inf_norm(b)).max(1e-300);
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
        / scale
}

// ---------------------------------------------------------------------------
// Adaptive Runge-Kutta integrator (Fehlberg 4(5))
// ---------------------------------------------------------------------------

/// Integrates `dx/dt = f(x)` from `x0` to time `t_end` with adaptive steps.
pub fn rk45_integrate<F>(f: F, x0: &[f64], t_end: f64, tol: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    const A: [[f64; 5]; 5] = [
        [1.0 / 4.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
        [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
        [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
        [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
    ];
    const B5: [f64; 6] = [
        16.0 / 135.0,
        0.0,
        6656.0 / 12825.0,
        28561.0 / 56430.0,
        -9.0 / 50.0,
        2.0 / 55.0,
    ];
    const B4: [f64; 6] = [
        25.0 / 216.0,
        0.0,
        1408.0 / 2565.0,
        2197.0 / 4104.0,
        -1.0 / 5.0,
        0.0,
    ];
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut h = (t_end / 100.0).clamp(1e-6, 0.1);
    let dim = x.len();
    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(6);
        k.push(f(&x));
        for stage in 0..5 {
            let mut xs = x.clone();
            for (j, kj) in k.iter().enumerate() {
                let c = A[stage][j] * h;
                if c != 0.0 {
                    for i in 0..dim {
                        xs[i] += c * kj[i];
                    }
                }
            }
            k.push(f(&xs));
        }
        let mut x5 = x.clone();
        let mut err = 0.0_f64;
        for i in 0..dim {
            let mut hi5 = 0.0;
            let mut hi4 = 0.0;
            for (j, kj) in k.iter().enumerate() {
                hi5 += B5[j] * kj[i];
                hi4 += B4[j] * kj[i];
            }
            x5[i] += h * hi5;
            err = err.max((h * (hi5 - hi4)).abs());
        }
        let scale = inf_norm(&x).max(1.0);
        if err <= tol * scale || h <= 1e-12 {
            t += h;
            x = x5;
        }
        // Standard step-size controller with safety factor 0.9.
        let ratio = if err > 0.0 { tol * scale / err } else { 4.0 };
        h = (h * 0.9 * ratio.powf(0.2)).clamp(1e-12, t_end / 4.0);
    }
    x
}

// ---------------------------------------------------------------------------
// Random data
// ---------------------------------------------------------------------------

/// Small positive rationals in [1/2, 2], exact.
pub fn random_positive_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rat> {
    (0..count).map(|_| rat_frac(rng.gen_range(2..=8), 4)).collect()
}

pub fn random_rate_map(rng: &mut ChaCha8Rng, symbols: &[String]) -> BTreeMap<String, Rat> {
    symbols
        .iter()
        .cloned()
        .zip(random_positive_rationals(rng, symbols.len()))
        .collect()
}

/// Rate symbols of a network in reaction order.
pub fn rate_symbols(net: &Network) -> Vec<String> {
    net.reactions.iter().map(|r| r.rate_symbol.clone()).collect()
}

/// A random small network, rendered as parseable text. Complex pairs are
/// distinct so there are no self-reactions, and species only exist through
/// usage so no species is unused.
pub fn random_network_text(rng: &mut ChaCha8Rng, index: usize) -> String {
    let num_species = rng.gen_range(2..=4usize);
    let names: Vec<String> = (0..num_species).map(|i| format!("A{}", i + 1)).collect();
    // Distinct nonzero complexes with small coefficients.
    let mut complexes: Vec<Vec<i64>> = Vec::new();
    let target = rng.gen_range(3..=5usize);
    while complexes.len() < target {
        let c: Vec<i64> = (0..num_species).map(|_| rng.gen_range(0..=2i64)).collect();
        if c.iter().any(|&v| v > 0) && !complexes.contains(&c) {
            complexes.push(c);
        }
    }
    let render = |c: &[i64]| -> String {
        c.iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, &v)| {
                if v == 1 {
                    names[i].clone()
                } else {
                    format!("{v} {}", names[i])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let num_reactions = rng.gen_range(2..=6usize);
    let mut guard = 0;
    while pairs.len() < num_reactions && guard < 200 {
        guard += 1;
        let a = rng.gen_range(0..complexes.len());
        let b = rng.gen_range(0..complexes.len());
        if a != b && !pairs.contains(&(a, b)) {
            pairs.push((a, b));
        }
    }
    let mut text = format!("network random-{index}\n\n");
    for (i, (a, b)) in pairs.iter().enumerate() {
        text.push_str(&format!(
            "{} -> {} ; k{}\n",
            render(&complexes[*a]),
            render(&complexes[*b]),
            i + 1
        ));
    }
    text
}

fn rat_i(v: i64) -> Rat {
    Rat::from_integer(v.into())
}
