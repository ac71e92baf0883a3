//! Steady-state current cone: extreme currents of `ker(gamma) ∩ R^r_{>=0}`.
//!
//! The cone is enumerated by the double description method run inside the
//! kernel of `gamma`: starting from the full kernel as lineality, the
//! nonnegativity constraint of each reaction coordinate is added in turn.
//! Adjacency during splitting uses the combinatorial zero-set test. All
//! arithmetic is exact; returned rays are coprime integer vectors sorted
//! lexicographically.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{CrnError, Result};
use crate::linalg::{column_space, RationalMatrix, SubspaceBasis};
use crate::lp::{solve_lp, LpOutcome};
use crate::model::{build_matrices, Network};
use crate::rat::{canonical_int_vector, Rat};

/// Kind of an extreme current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurrentKind {
    /// The current vanishes on the incidence matrix: a cycle in the complex
    /// graph carrying equal flux.
    Cyclic,
    /// The current pushes a nonzero complex-space vector into `ker(y)`.
    Stoichiometric,
}

/// Classification of an arbitrary vector against the current cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurrentClass {
    Cyclic,
    Stoichiometric,
    NotInCone,
}

/// An extreme ray of the current cone, scaled to coprime integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeCurrent {
    pub vector: Vec<Rat>,
    pub kind: CurrentKind,
}

struct Ray {
    dir: Vec<Rat>,
    tight: u128,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Extreme rays of `{ lambda : A lambda >= 0 }` where `A`'s rows are the
/// constraint normals; the constraint matrix must have full column rank so
/// the cone is pointed.
fn double_description(constraints: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut lineality: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    // Bits of the constraints processed so far. Lineality vectors are kept
    // orthogonal to every processed normal, so a ray minted from one is
    // tight on all of them.
    let mut processed: u128 = 0;

    for (j, a) in constraints.iter().enumerate() {
        let bit = 1u128 << j;
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            // Consume one lineality vector: it becomes the ray pointing into
            // the new halfspace; everything else is projected onto the
            // hyperplane of the new constraint.
            let mut pivot = lineality.swap_remove(pos);
            let ap = dot(a, &pivot);
            if ap.is_negative() {
                for x in &mut pivot {
                    *x = -x.clone();
                }
            }
            let ap = dot(a, &pivot);
            for l in &mut lineality {
                let c = dot(a, l) / &ap;
                if !c.is_zero() {
                    for (li, pi) in l.iter_mut().zip(&pivot) {
                        *li -= &c * pi;
                    }
                }
            }
            for ray in &mut rays {
                let c = dot(a, &ray.dir) / &ap;
                if !c.is_zero() {
                    for (ri, pi) in ray.dir.iter_mut().zip(&pivot) {
                        *ri -= &c * pi;
                    }
                }
                // Projection keeps previously processed constraint values and
                // makes the new one tight.
                ray.tight |= bit;
            }
            rays.push(Ray {
                dir: pivot,
                tight: processed,
            });
            processed |= bit;
            continue;
        }
        // Lineality is orthogonal to the constraint: split the rays.
        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.dir)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (ri, r) in rays.iter().enumerate() {
            if !vals[ri].is_negative() {
                next.push(Ray {
                    dir: r.dir.clone(),
                    tight: r.tight | if vals[ri].is_zero() { bit } else { 0 },
                });
            }
        }
        for (ui, u) in rays.iter().enumerate() {
            if !vals[ui].is_positive() {
                continue;
            }
            for (vi, v) in rays.iter().enumerate() {
                if !vals[vi].is_negative() {
                    continue;
                }
                let common = u.tight & v.tight;
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(wi, w)| wi == ui || wi == vi || (common & !w.tight) != 0);
                if !adjacent {
                    continue;
                }
                // wnew = (a.u) v - (a.v) u lies on the hyperplane and in the
                // cone of u, v.
                let mut dir = vec![Rat::zero(); dim];
                for i in 0..dim {
                    dir[i] = &vals[ui] * &v.dir[i] - &vals[vi] * &u.dir[i];
                }
                next.push(Ray {
                    dir,
                    tight: common | bit,
                });
            }
        }
        rays = next;
        processed |= bit;
    }
    assert!(
        lineality.is_empty(),
        "cone is not pointed; constraint matrix lacks full column rank"
    );
    rays.into_iter().map(|r| r.dir).collect()
}

/// All extreme currents of the network, deduplicated, support-minimal,
/// coprime-integer scaled and lexicographically sorted.
pub fn extreme_currents(net: &Network) -> Result<Vec<ExtremeCurrent>> {
    let r = net.num_reactions();
    if r > 128 {
        return Err(CrnError::CapExceeded(format!(
            "current cone enumeration supports at most 128 reactions, got {r}"
        )));
    }
    let sm = build_matrices(net, None)?;
    let kernel = sm.gamma.kernel_basis();
    let d = kernel.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    // Constraint j: the j-th coordinate of the kernel combination must be
    // nonnegative.
    let constraints: Vec<Vec<Rat>> = (0..r)
        .map(|j| kernel.vectors().iter().map(|k| k[j].clone()).collect())
        .collect();
    let rays = double_description(&constraints, d);

    let mut currents: Vec<Vec<Rat>> = rays
        .iter()
        .map(|lambda| {
            let mut v = vec![Rat::zero(); r];
            for (i, k) in kernel.vectors().iter().enumerate() {
                if !lambda[i].is_zero() {
                    for j in 0..r {
                        v[j] += &lambda[i] * &k[j];
                    }
                }
            }
            canonical_int_vector(&v)
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    for v in &currents {
        debug_assert!(v.iter().all(|x| !x.is_negative()), "ray left the orthant");
        debug_assert!(sm.gamma.mul_vec(v).iter().all(|x| x.is_zero()));
    }
    currents.sort();
    currents.dedup();
    // Support minimality: in a cone of the form kernel ∩ orthant, extreme
    // rays have inclusion-minimal support; drop anything dominated.
    let supports: Vec<Vec<bool>> = currents
        .iter()
        .map(|v| v.iter().map(|x| !x.is_zero()).collect())
        .collect();
    let minimal: Vec<bool> = (0..currents.len())
        .map(|i| {
            !(0..currents.len()).any(|k| {
                k != i
                    && supports[k]
                        .iter()
                        .zip(&supports[i])
                        .all(|(a, b)| !*a || *b)
                    && supports[k] != supports[i]
            })
        })
        .collect();
    let currents: Vec<Vec<Rat>> = currents
        .into_iter()
        .zip(minimal)
        .filter_map(|(v, keep)| keep.then_some(v))
        .collect();

    Ok(currents
        .into_iter()
        .map(|vector| {
            let kind = current_kind(&sm.ia, &vector);
            ExtremeCurrent { vector, kind }
        })
        .collect())
}

fn current_kind(ia: &RationalMatrix, v: &[Rat]) -> CurrentKind {
    if ia.mul_vec(v).iter().all(|x| x.is_zero()) {
        CurrentKind::Cyclic
    } else {
        CurrentKind::Stoichiometric
    }
}

/// Classifies an arbitrary vector: a nonzero, nonnegative member of
/// `ker(gamma)` is cyclic or stoichiometric; everything else (including the
/// zero vector) is outside the cone.
pub fn classify_current(net: &Network, v: &[Rat]) -> Result<CurrentClass> {
    if v.len() != net.num_reactions() {
        return Err(CrnError::Dimension(
            "current length differs from reaction count".into(),
        ));
    }
    let sm = build_matrices(net, None)?;
    if v.iter().all(|x| x.is_zero())
        || v.iter().any(|x| x.is_negative())
        || !sm.gamma.mul_vec(v).iter().all(|x| x.is_zero())
    {
        return Ok(CurrentClass::NotInCone);
    }
    Ok(match current_kind(&sm.ia, v) {
        CurrentKind::Cyclic => CurrentClass::Cyclic,
        CurrentKind::Stoichiometric => CurrentClass::Stoichiometric,
    })
}

/// Exact nonnegative decomposition of `target` over the extreme currents
/// with the smallest possible infinity-norm error. Returns the error and the
/// weights.
pub fn best_current_decomposition(
    currents: &[ExtremeCurrent],
    target: &[Rat],
) -> (Rat, Vec<Rat>) {
    let r = target.len();
    let k = currents.len();
    // Variables: lambda_1..k, t, then per coordinate j the pair (p_j, q_j)
    // with  sum_i lambda_i E_i[j] + p_j - q_j = target_j,  and slack rows
    // p_j + s_j = t, q_j + u_j = t  (so |deviation_j| <= t). Minimize t.
    let nvars = k + 1 + 4 * r;
    let col_lambda = |i: usize| i;
    let col_t = k;
    let col_p = |j: usize| k + 1 + j;
    let col_q = |j: usize| k + 1 + r + j;
    let col_s = |j: usize| k + 1 + 2 * r + j;
    let col_u = |j: usize| k + 1 + 3 * r + j;
    let mut a = RationalMatrix::zeros(3 * r, nvars);
    let mut b = vec![Rat::zero(); 3 * r];
    for j in 0..r {
        for (i, c) in currents.iter().enumerate() {
            a.set(j, col_lambda(i), c.vector[j].clone());
        }
        a.set(j, col_p(j), Rat::one());
        a.set(j, col_q(j), -Rat::one());
        b[j] = target[j].clone();
        a.set(r + j, col_p(j), Rat::one());
        a.set(r + j, col_s(j), Rat::one());
        a.set(r + j, col_t, -Rat::one());
        a.set(2 * r + j, col_q(j), Rat::one());
        a.set(2 * r + j, col_u(j), Rat::one());
        a.set(2 * r + j, col_t, -Rat::one());
    }
    let mut c = vec![Rat::zero(); nvars];
    c[col_t] = Rat::one();
    match solve_lp(&a, &b, &c) {
        LpOutcome::Optimal { value, x } => (value, x[..k].to_vec()),
        // Always feasible (lambda = 0, t = max |target|) and bounded below.
        _ => unreachable!("deviation LP is feasible and bounded"),
    }
}

/// Stoichiometric generators exist iff the deficiency is positive; this
/// helper exposes the generators' span check used by callers.
pub fn current_cone_summary(net: &Network) -> Result<(Vec<ExtremeCurrent>, SubspaceBasis)> {
    let sm = build_matrices(net, None)?;
    Ok((extreme_currents(net)?, column_space(&sm.gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;
    use crate::rat::rat_i64;

    const FUTILE: &str = "\
S + E <-> SE ; k1, k2
SE -> P + E ; k3
P + F <-> PF ; k4, k5
PF -> S + F ; k6
";

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat_i64(x)).collect()
    }

    #[test]
    fn futile_cycle_has_three_extreme_currents() {
        let net = parse_network(FUTILE).unwrap();
        let ec = extreme_currents(&net).unwrap();
        let got: Vec<(Vec<Rat>, CurrentKind)> =
            ec.iter().map(|e| (e.vector.clone(), e.kind)).collect();
        assert_eq!(
            got,
            vec![
                (ints(&[0, 0, 0, 1, 1, 0]), CurrentKind::Cyclic),
                (ints(&[1, 0, 1, 1, 0, 1]), CurrentKind::Stoichiometric),
                (ints(&[1, 1, 0, 0, 0, 0]), CurrentKind::Cyclic),
            ]
        );
    }

    #[test]
    fn classification_covers_all_cases() {
        let net = parse_network(FUTILE).unwrap();
        assert_eq!(
            classify_current(&net, &ints(&[1, 1, 0, 0, 0, 0])).unwrap(),
            CurrentClass::Cyclic
        );
        assert_eq!(
            classify_current(&net, &ints(&[1, 0, 1, 1, 0, 1])).unwrap(),
            CurrentClass::Stoichiometric
        );
        // Sums of extreme currents stay in the cone.
        assert_eq!(
            classify_current(&net, &ints(&[2, 1, 1, 1, 0, 1])).unwrap(),
            CurrentClass::Stoichiometric
        );
        assert_eq!(
            classify_current(&net, &ints(&[0, 0, 0, 0, 0, 0])).unwrap(),
            CurrentClass::NotInCone
        );
        assert_eq!(
            classify_current(&net, &ints(&[1, 0, 0, 0, 0, 0])).unwrap(),
            CurrentClass::NotInCone
        );
    }

    #[test]
    fn lotka_volterra_has_one_stoichiometric_generator() {
        let net = parse_network("A1 -> 2 A1 ; k1\nA1 + A2 -> 2 A2 ; k2\nA2 -> 0 ; k3\n").unwrap();
        let ec = extreme_currents(&net).unwrap();
        assert_eq!(ec.len(), 1);
        assert_eq!(ec[0].vector, ints(&[1, 1, 1]));
        assert_eq!(ec[0].kind, CurrentKind::Stoichiometric);
    }

    #[test]
    fn no_currents_for_a_single_irreversible_reaction() {
        let net = parse_network("A -> B ; k1\n").unwrap();
        assert!(extreme_currents(&net).unwrap().is_empty());
    }

    #[test]
    fn decomposition_recovers_cone_members() {
        let net = parse_network(FUTILE).unwrap();
        let ec = extreme_currents(&net).unwrap();
        // 2*E_cyclic1 + E_stoich is in the cone: deviation 0.
        let mut target = vec![Rat::zero(); 6];
        for (j, t) in target.iter_mut().enumerate() {
            *t = &ec[0].vector[j] * rat_i64(2) + &ec[1].vector[j];
        }
        let (err, w) = best_current_decomposition(&ec, &target);
        assert!(err.is_zero());
        let mut recon = vec![Rat::zero(); 6];
        for (i, e) in ec.iter().enumerate() {
            for j in 0..6 {
                recon[j] += &w[i] * &e.vector[j];
            }
        }
        assert_eq!(recon, target);
        // A vector far outside the cone has positive deviation.
        let bad = ints(&[-1, 0, 0, 0, 0, 0]);
        let (err, _) = best_current_decomposition(&ec, &bad);
        assert!(err.is_positive());
    }
}
