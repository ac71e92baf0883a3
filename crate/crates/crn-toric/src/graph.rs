//! Connectivity structure of the complex graph and deficiency computations.

use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;

use crate::error::Result;
use crate::linalg::{column_space, SubspaceBasis};
use crate::model::{build_matrices, GeneralizedNetwork, Network};
use crate::rat::Rat;

/// Partition of the complexes into linkage classes (undirected connectivity)
/// and strong linkage classes (strong connectivity). Classes are sorted
/// internally and listed by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkagePartition {
    pub classes: Vec<Vec<usize>>,
    pub strong_classes: Vec<Vec<usize>>,
}

fn complex_graph(net: &Network) -> DiGraph<(), ()> {
    let mut g = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..net.num_complexes()).map(|_| g.add_node(())).collect();
    for r in &net.reactions {
        g.add_edge(nodes[r.reactant], nodes[r.product], ());
    }
    g
}

fn sort_classes(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Computes linkage and strong linkage classes.
pub fn linkage_classes(net: &Network) -> LinkagePartition {
    let n = net.num_complexes();
    let mut uf = UnionFind::new(n);
    for r in &net.reactions {
        uf.union(r.reactant, r.product);
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    let classes = sort_classes(by_root.into_values().collect());

    let g = complex_graph(net);
    let sccs = petgraph::algo::tarjan_scc(&g);
    let strong_classes = sort_classes(
        sccs.into_iter()
            .map(|c| c.into_iter().map(|ni| ni.index()).collect())
            .collect(),
    );
    LinkagePartition {
        classes,
        strong_classes,
    }
}

/// Weak reversibility: every linkage class is a single strong class.
pub fn is_weakly_reversible(net: &Network) -> bool {
    let p = linkage_classes(net);
    p.classes == p.strong_classes
}

/// Reversibility: every reaction has an explicit reverse.
pub fn is_reversible(net: &Network) -> bool {
    net.reactions.iter().all(|r| {
        net.reactions
            .iter()
            .any(|s| s.reactant == r.product && s.product == r.reactant)
    })
}

/// Deficiency summary of a network. `delta` is computed as
/// `num_complexes - num_linkage_classes - rank` and cross-checked against the
/// kernel formula `dim(ker y ∩ im ia)`; the two always agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyReport {
    pub num_complexes: usize,
    pub num_linkage_classes: usize,
    pub rank: usize,
    pub delta: usize,
    pub delta_kernel: usize,
    /// Kinetic-order deficiency for generalized networks.
    pub kinetic_delta: Option<usize>,
}

/// Canonical basis of the stoichiometric subspace (span of the reaction
/// vectors).
pub fn stoichiometric_subspace(net: &Network) -> Result<SubspaceBasis> {
    let sm = build_matrices(net, None)?;
    Ok(column_space(&sm.gamma))
}

/// Structural deficiency by both formulas.
pub fn deficiency(net: &Network) -> Result<DeficiencyReport> {
    let sm = build_matrices(net, None)?;
    let n = net.num_complexes();
    let l = linkage_classes(net).classes.len();
    let s = sm.gamma.rank();
    assert!(n >= l + s, "deficiency formula would be negative");
    let delta = n - l - s;
    let ker_y = sm.y.kernel_basis();
    let im_ia = column_space(&sm.ia);
    let delta_kernel = ker_y.intersect(&im_ia)?.dim();
    assert_eq!(
        delta, delta_kernel,
        "the two deficiency formulas disagree; this is a bug"
    );
    Ok(DeficiencyReport {
        num_complexes: n,
        num_linkage_classes: l,
        rank: s,
        delta,
        delta_kernel,
        kinetic_delta: None,
    })
}

/// Kinetic-order subspace of a generalized network: the span of the
/// differences of kinetic vectors across each reaction.
pub fn kinetic_order_subspace(gnet: &GeneralizedNetwork) -> SubspaceBasis {
    let m = gnet.base.num_species();
    let gens: Vec<Vec<Rat>> = gnet
        .base
        .reactions
        .iter()
        .map(|r| {
            let a = gnet.kinetic_vector(r.product).coeffs();
            let b = gnet.kinetic_vector(r.reactant).coeffs();
            (0..m)
                .map(|i| Rat::from_integer((a[i] - b[i]).into()))
                .collect()
        })
        .collect();
    SubspaceBasis::spanned_by(m, &gens)
}

/// Kinetic-order deficiency: `dim(ker y~ ∩ im ia)` for the kinetic matrix
/// `y~` whose columns are the kinetic vectors.
pub fn kinetic_deficiency(gnet: &GeneralizedNetwork) -> Result<usize> {
    let net = &gnet.base;
    let sm = build_matrices(net, None)?;
    let m = net.num_species();
    let n = net.num_complexes();
    let mut ky = crate::linalg::RationalMatrix::zeros(m, n);
    for j in 0..n {
        for (i, &v) in gnet.kinetic_vector(j).coeffs().iter().enumerate() {
            if v != 0 {
                ky.set(i, j, Rat::from_integer(v.into()));
            }
        }
    }
    let ker = ky.kernel_basis();
    let im_ia = column_space(&sm.ia);
    Ok(ker.intersect(&im_ia)?.dim())
}

/// Deficiency report for a generalized network, including the kinetic-order
/// deficiency.
pub fn deficiency_generalized(gnet: &GeneralizedNetwork) -> Result<DeficiencyReport> {
    let mut rep = deficiency(&gnet.base)?;
    rep.kinetic_delta = Some(kinetic_deficiency(gnet)?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    const FUTILE: &str = "\
S + E <-> SE ; k1, k2
SE -> P + E ; k3
P + F <-> PF ; k4, k5
PF -> S + F ; k6
";

    #[test]
    fn futile_cycle_structure() {
        let net = parse_network(FUTILE).unwrap();
        let p = linkage_classes(&net);
        assert_eq!(p.classes, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(!is_weakly_reversible(&net));
        assert!(!is_reversible(&net));
        let d = deficiency(&net).unwrap();
        assert_eq!(
            (d.num_complexes, d.num_linkage_classes, d.rank, d.delta),
            (6, 2, 3, 1)
        );
        assert_eq!(d.delta, d.delta_kernel);
    }

    #[test]
    fn three_cycle_is_weakly_reversible_not_reversible() {
        let net = parse_network("A -> B ; k1\nB -> C ; k2\nC -> A ; k3\n").unwrap();
        assert!(is_weakly_reversible(&net));
        assert!(!is_reversible(&net));
        let d = deficiency(&net).unwrap();
        assert_eq!(d.delta, 0);
    }

    #[test]
    fn reversible_chain_is_reversible() {
        let net =
            parse_network("A <-> B ; k1, k2\nB <-> C ; k3, k4\n").unwrap();
        assert!(is_reversible(&net));
        assert!(is_weakly_reversible(&net));
    }

    #[test]
    fn mixed_classes_split_into_strong_components() {
        let net = parse_network("A -> B ; k1\nB <-> C ; k2, k3\nD <-> E ; k4, k5\n").unwrap();
        let p = linkage_classes(&net);
        assert_eq!(p.classes, vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(p.strong_classes, vec![vec![0], vec![1, 2], vec![3, 4]]);
        assert!(!is_weakly_reversible(&net));
        assert_eq!(deficiency(&net).unwrap().delta, 0);
    }

    #[test]
    fn kinetic_orders_change_the_subspace() {
        let text = "A1 + A2 <-> A3 ; k1, k2\nkinetic A1 + A2 := 7 A1 + A3\nkinetic A3 := 5 A2\n";
        let g = crate::model::parse_generalized_network(text).unwrap();
        let s = kinetic_order_subspace(&g);
        assert_eq!(s.dim(), 1);
        let v = &s.vectors()[0];
        // Span of (5 A2) - (7 A1 + A3) = (-7, 5, -1).
        let expected: Vec<_> = [-7i64, 5, -1]
            .iter()
            .map(|&x| Rat::from_integer(x.into()))
            .collect();
        assert!(s.contains(&expected));
        assert_eq!(v.len(), 3);
        assert_eq!(kinetic_deficiency(&g).unwrap(), 0);
    }
}
