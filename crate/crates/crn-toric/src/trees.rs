//! Spanning in-trees of the complex graph and the tree constants they
//! generate.
//!
//! For a weakly reversible network the kinetic matrix `A_k` has a
//! one-dimensional kernel per linkage class, spanned by the vector of tree
//! constants: `K_i` sums, over all spanning trees of the class directed
//! toward complex `i`, the product of the rate symbols on the tree's edges.
//! Tree constants are computed both by direct enumeration (backtracking over
//! out-edge choices) and independently as signed minors of the class
//! Laplacian; the two must agree.

use std::collections::BTreeMap;

use num::Signed;

use crate::error::{CrnError, Result};
use crate::graph::{is_weakly_reversible, linkage_classes};
use crate::model::Network;
use crate::rat::Rat;
use crate::symbolic::Polynomial;

/// Enumeration guards: backtracking refuses classes larger than these bounds.
#[derive(Debug, Clone, Copy)]
pub struct TreeLimits {
    pub max_complexes: usize,
    pub max_edges: usize,
}

impl Default for TreeLimits {
    fn default() -> Self {
        TreeLimits {
            max_complexes: 12,
            max_edges: 24,
        }
    }
}

fn require_weakly_reversible(net: &Network, what: &'static str) -> Result<()> {
    if !is_weakly_reversible(net) {
        return Err(CrnError::NotWeaklyReversible(what));
    }
    Ok(())
}

/// All spanning trees of `sink`'s linkage class directed toward `sink`.
/// Each tree is the ascending list of 0-based reaction indices; the list of
/// trees is sorted lexicographically.
pub fn spanning_in_trees(net: &Network, sink: usize) -> Result<Vec<Vec<usize>>> {
    spanning_in_trees_with_limits(net, sink, &TreeLimits::default())
}

/// As [`spanning_in_trees`] with explicit enumeration guards.
pub fn spanning_in_trees_with_limits(
    net: &Network,
    sink: usize,
    limits: &TreeLimits,
) -> Result<Vec<Vec<usize>>> {
    require_weakly_reversible(net, "spanning in-tree enumeration")?;
    if sink >= net.num_complexes() {
        return Err(CrnError::Dimension(format!(
            "complex index {sink} out of range"
        )));
    }
    let classes = linkage_classes(net).classes;
    let class = classes
        .iter()
        .find(|c| c.contains(&sink))
        .expect("every complex lies in a class")
        .clone();
    let edges: Vec<usize> = (0..net.num_reactions())
        .filter(|&i| class.contains(&net.reactions[i].reactant))
        .collect();
    if class.len() > limits.max_complexes {
        return Err(CrnError::CapExceeded(format!(
            "linkage class has {} complexes, limit {}",
            class.len(),
            limits.max_complexes
        )));
    }
    if edges.len() > limits.max_edges {
        return Err(CrnError::CapExceeded(format!(
            "linkage class has {} edges, limit {}",
            edges.len(),
            limits.max_edges
        )));
    }

    // Local vertex numbering with the sink last so backtracking assigns all
    // non-sink vertices an out-edge.
    let mut verts: Vec<usize> = class.iter().copied().filter(|&v| v != sink).collect();
    verts.push(sink);
    let local: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nloc = verts.len();
    let out_edges: Vec<Vec<(usize, usize)>> = verts
        .iter()
        .map(|&v| {
            edges
                .iter()
                .filter(|&&e| net.reactions[e].reactant == v)
                .map(|&e| (e, local[&net.reactions[e].product]))
                .collect()
        })
        .collect();

    let mut trees: Vec<Vec<usize>> = Vec::new();
    // choice[v] = local target assigned to vertex v (sink excluded).
    let mut choice: Vec<Option<usize>> = vec![None; nloc];
    let mut picked: Vec<usize> = Vec::with_capacity(nloc - 1);
    fn reaches_cycle(start: usize, choice: &[Option<usize>]) -> bool {
        let mut seen = vec![false; choice.len()];
        let mut cur = start;
        loop {
            if seen[cur] {
                return true;
            }
            seen[cur] = true;
            match choice[cur] {
                Some(next) => cur = next,
                None => return false,
            }
        }
    }
    fn go(
        v: usize,
        nloc: usize,
        out_edges: &[Vec<(usize, usize)>],
        choice: &mut Vec<Option<usize>>,
        picked: &mut Vec<usize>,
        trees: &mut Vec<Vec<usize>>,
    ) {
        if v == nloc - 1 {
            let mut t = picked.clone();
            t.sort_unstable();
            trees.push(t);
            return;
        }
        for &(e, target) in &out_edges[v] {
            choice[v] = Some(target);
            if !reaches_cycle(v, choice) {
                picked.push(e);
                go(v + 1, nloc, out_edges, choice, picked, trees);
                picked.pop();
            }
            choice[v] = None;
        }
    }
    go(0, nloc, &out_edges, &mut choice, &mut picked, &mut trees);
    trees.sort();
    Ok(trees)
}

/// Symbolic tree constant of one complex: the sum over its spanning in-trees
/// of the product of edge rate symbols.
pub fn tree_constant(net: &Network, sink: usize, limits: &TreeLimits) -> Result<Polynomial> {
    let trees = spanning_in_trees_with_limits(net, sink, limits)?;
    let mut sum = Polynomial::zero();
    for tree in &trees {
        let mut prod = Polynomial::one();
        for &e in tree {
            prod = prod.mul(&Polynomial::symbol(&net.reactions[e].rate_symbol));
        }
        sum = sum.add(&prod);
    }
    Ok(sum)
}

/// Tree constants for every complex, indexed by complex.
pub fn tree_constants(net: &Network) -> Result<Vec<Polynomial>> {
    tree_constants_with_limits(net, &TreeLimits::default())
}

/// As [`tree_constants`] with explicit enumeration guards.
pub fn tree_constants_with_limits(net: &Network, limits: &TreeLimits) -> Result<Vec<Polynomial>> {
    require_weakly_reversible(net, "tree constants")?;
    (0..net.num_complexes())
        .map(|i| tree_constant(net, i, limits))
        .collect()
}

/// Numeric tree constants under a rate assignment.
pub fn tree_constants_numeric(
    net: &Network,
    rates: &BTreeMap<String, Rat>,
) -> Result<Vec<Rat>> {
    tree_constants(net)?
        .iter()
        .map(|p| p.eval(rates))
        .collect()
}

/// The kinetic matrix `A_k` as symbolic polynomials: column `rho(i)` gains
/// `k_i` at row `rho'(i)` and loses it on the diagonal.
pub fn kinetic_matrix(net: &Network) -> Vec<Vec<Polynomial>> {
    let n = net.num_complexes();
    let mut a = vec![vec![Polynomial::zero(); n]; n];
    for r in &net.reactions {
        let k = Polynomial::symbol(&r.rate_symbol);
        a[r.product][r.reactant] = a[r.product][r.reactant].add(&k);
        a[r.reactant][r.reactant] = a[r.reactant][r.reactant].sub(&k);
    }
    a
}

/// Fraction-free determinant of a square polynomial matrix.
fn poly_determinant(mat: &[Vec<Polynomial>]) -> Polynomial {
    let n = mat.len();
    if n == 0 {
        return Polynomial::one();
    }
    let mut m: Vec<Vec<Polynomial>> = mat.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    negate = !negate;
                }
                None => return Polynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly");
            }
            m[i][k] = Polynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Tree constants computed independently as signed minors of the class
/// Laplacian: `K_i = (-1)^(c-1) det(A_class with row and column i removed)`
/// where `c` is the class size. Every constant is checked to have only
/// positive coefficients.
pub fn tree_constants_via_minors(net: &Network) -> Result<Vec<Polynomial>> {
    require_weakly_reversible(net, "tree constants")?;
    let a = kinetic_matrix(net);
    let classes = linkage_classes(net).classes;
    let mut out = vec![Polynomial::zero(); net.num_complexes()];
    for class in &classes {
        let c = class.len();
        for (pos, &i) in class.iter().enumerate() {
            let keep: Vec<usize> = class
                .iter()
                .enumerate()
                .filter_map(|(q, &v)| (q != pos).then_some(v))
                .collect();
            let minor: Vec<Vec<Polynomial>> = keep
                .iter()
                .map(|&r| keep.iter().map(|&cidx| a[r][cidx].clone()).collect())
                .collect();
            let mut det = poly_determinant(&minor);
            if (c - 1) % 2 == 1 {
                det = det.neg();
            }
            let positive = !det.is_zero() && det.terms().all(|m| m.coeff.is_positive());
            if !positive {
                return Err(CrnError::Invalid(format!(
                    "tree constant minor for complex {} is not positive",
                    i + 1
                )));
            }
            out[i] = det;
        }
    }
    Ok(out)
}

/// Basis of `ker(A_k)`: one vector per linkage class, carrying the class's
/// tree constants on its support.
pub fn kernel_of_kinetic_matrix(net: &Network) -> Result<Vec<Vec<Polynomial>>> {
    let constants = tree_constants(net)?;
    let classes = linkage_classes(net).classes;
    Ok(classes
        .iter()
        .map(|class| {
            (0..net.num_complexes())
                .map(|i| {
                    if class.contains(&i) {
                        constants[i].clone()
                    } else {
                        Polynomial::zero()
                    }
                })
                .collect()
        })
        .collect())
}
