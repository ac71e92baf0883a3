//! Exact rational matrices and subspace arithmetic.
//!
//! Elimination uses fraction-free (integer) pivoting to keep intermediate
//! entries small; pivots are chosen as the first nonzero candidate so results
//! are deterministic. Subspace bases are normalized to coprime integer
//! vectors whose first nonzero entry is positive.

use num::{BigInt, Integer, One, Zero};

use crate::error::{CrnError, Result};
use crate::rat::{canonical_int_vector, Rat};

/// Dense matrix over exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        self.echelon().pivot_cols.len()
    }

    /// Clears denominators row by row, yielding an integer matrix with the
    /// same row space and kernel.
    fn to_int_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut l = BigInt::one();
                for x in self.row(i) {
                    l = l.lcm(x.denom());
                }
                self.row(i)
                    .iter()
                    .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect()
    }

    /// Fraction-free row echelon form (Bareiss one-step elimination, first
    /// nonzero pivot). Rows are integer vectors; `pivot_cols[k]` is the pivot
    /// column of echelon row `k`.
    fn echelon(&self) -> Echelon {
        let mut m = self.to_int_rows();
        let rows = self.rows;
        let cols = self.cols;
        let mut pivot_cols = Vec::new();
        let mut prev = BigInt::one();
        let mut rr = 0usize;
        for c in 0..cols {
            let Some(p) = (rr..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rr, p);
            for i in rr + 1..rows {
                // Bareiss step: the division by the previous pivot is exact.
                for j in c + 1..cols {
                    let num = &m[i][j] * &m[rr][c] - &m[i][c] * &m[rr][j];
                    m[i][j] = num / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[rr][c].clone();
            pivot_cols.push(c);
            rr += 1;
            if rr == rows {
                break;
            }
        }
        m.truncate(pivot_cols.len());
        Echelon {
            rows: m,
            pivot_cols,
            cols,
        }
    }

    /// Canonical basis of the kernel `{ x : A x = 0 }`.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let ech = self.echelon();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &ech.pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut vectors = Vec::new();
        for f in 0..self.cols {
            if pivot_set[f] {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[f] = Rat::one();
            // Back-substitute the pivot coordinates from the bottom up.
            for k in (0..ech.pivot_cols.len()).rev() {
                let c = ech.pivot_cols[k];
                let mut s = Rat::zero();
                for j in c + 1..self.cols {
                    if !x[j].is_zero() && !ech.rows[k][j].is_zero() {
                        s += Rat::from_integer(ech.rows[k][j].clone()) * &x[j];
                    }
                }
                x[c] = -s / Rat::from_integer(ech.rows[k][c].clone());
            }
            vectors.push(canonical_int_vector(&x));
        }
        SubspaceBasis {
            ambient: self.cols,
            vectors,
        }
    }

}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    #[allow(dead_code)]
    cols: usize,
}

/// A finite list of independent, canonically normalized spanning vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<Vec<Rat>>,
}

impl SubspaceBasis {
    /// Reduces `gens` to an independent canonical basis of their span.
    pub fn spanned_by(ambient: usize, gens: &[Vec<Rat>]) -> SubspaceBasis {
        let mut basis = SubspaceBasis {
            ambient,
            vectors: Vec::new(),
        };
        for g in gens {
            basis.try_extend(g);
        }
        basis
    }

    pub fn empty(ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            ambient,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    /// Adds `v` to the basis if it enlarges the span; returns whether it did.
    pub fn try_extend(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        if self.contains(v) {
            return false;
        }
        self.vectors.push(canonical_int_vector(v));
        true
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[Rat]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        self.solve_coords(v).is_some()
    }

    /// Coordinates of `target` in this basis, or `None` if it is outside the
    /// span. Coordinates are unique because basis vectors are independent.
    pub fn solve_coords(&self, target: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(target.len(), self.ambient, "ambient dimension mismatch");
        if self.vectors.is_empty() {
            return if target.iter().all(|x| x.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        // Solve B c = target by elimination on the augmented system, where
        // the columns of B are the basis vectors.
        let k = self.vectors.len();
        let mut aug = RationalMatrix::zeros(self.ambient, k + 1);
        for (j, v) in self.vectors.iter().enumerate() {
            for i in 0..self.ambient {
                aug.set(i, j, v[i].clone());
            }
        }
        for i in 0..self.ambient {
            aug.set(i, k, target[i].clone());
        }
        let ech = aug.echelon();
        // Inconsistent iff the augmented column is a pivot.
        if ech.pivot_cols.contains(&k) {
            return None;
        }
        let mut c = vec![Rat::zero(); k];
        for rk in (0..ech.pivot_cols.len()).rev() {
            let pc = ech.pivot_cols[rk];
            let mut s = Rat::from_integer(ech.rows[rk][k].clone());
            for j in pc + 1..k {
                if !c[j].is_zero() {
                    s -= Rat::from_integer(ech.rows[rk][j].clone()) * &c[j];
                }
            }
            c[pc] = s / Rat::from_integer(ech.rows[rk][pc].clone());
        }
        Some(c)
    }

    /// Canonical basis of the intersection of two subspaces.
    pub fn intersect(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        if self.ambient != other.ambient {
            return Err(CrnError::Dimension(format!(
                "cannot intersect subspaces of ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(SubspaceBasis::empty(self.ambient));
        }
        // x in span(A) ∩ span(B) iff x = A u = B w; solve [A | -B] z = 0 and
        // map the A-part of each kernel vector back to ambient space.
        let ka = self.dim();
        let kb = other.dim();
        let mut m = RationalMatrix::zeros(self.ambient, ka + kb);
        for (j, v) in self.vectors.iter().enumerate() {
            for i in 0..self.ambient {
                m.set(i, j, v[i].clone());
            }
        }
        for (j, v) in other.vectors.iter().enumerate() {
            for i in 0..self.ambient {
                m.set(i, ka + j, -v[i].clone());
            }
        }
        let ker = m.kernel_basis();
        let gens: Vec<Vec<Rat>> = ker
            .vectors()
            .iter()
            .map(|z| {
                let mut x = vec![Rat::zero(); self.ambient];
                for (j, v) in self.vectors.iter().enumerate() {
                    if !z[j].is_zero() {
                        for i in 0..self.ambient {
                            x[i] += &z[j] * &v[i];
                        }
                    }
                }
                x
            })
            .collect();
        Ok(SubspaceBasis::spanned_by(self.ambient, &gens))
    }

    /// Canonical basis of the orthogonal complement.
    pub fn orthogonal_complement(&self) -> SubspaceBasis {
        if self.vectors.is_empty() {
            let id = RationalMatrix::identity(self.ambient);
            let gens: Vec<Vec<Rat>> = (0..self.ambient).map(|j| id.col(j)).collect();
            return SubspaceBasis::spanned_by(self.ambient, &gens);
        }
        RationalMatrix::from_rows(self.vectors.clone()).kernel_basis()
    }

    /// Whether both bases span the same subspace.
    pub fn span_equal(&self, other: &SubspaceBasis) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && other.vectors.iter().all(|v| self.contains(v))
    }
}

/// Canonical basis of the column space of `m`.
pub fn column_space(m: &RationalMatrix) -> SubspaceBasis {
    let gens: Vec<Vec<Rat>> = (0..m.cols()).map(|j| m.col(j)).collect();
    SubspaceBasis::spanned_by(m.rows(), &gens)
}

/// Exact determinant of a square matrix (rational Gaussian elimination).
pub fn determinant(m: &RationalMatrix) -> Rat {
    assert_eq!(m.rows(), m.cols(), "determinant needs a square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let inv = a[c][c].clone().recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * &inv;
            for j in c..n {
                let t = a[c][j].clone() * &f;
                a[i][j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_frac, rat_i64};

    fn m(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_int_rows(rows)
    }

    #[test]
    fn rank_and_kernel_satisfy_rank_nullity() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(a.rank() + k.dim(), a.cols());
        for v in k.vectors() {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_vectors_are_canonical() {
        let a = m(&[vec![2, -4]]);
        let k = a.kernel_basis();
        assert_eq!(k.vectors(), &[vec![rat_i64(2), rat_i64(1)]]);
    }

    #[test]
    fn solve_coords_distinguishes_members() {
        let b = SubspaceBasis::spanned_by(
            3,
            &[
                vec![rat_i64(1), rat_i64(0), rat_i64(1)],
                vec![rat_i64(0), rat_i64(1), rat_i64(1)],
            ],
        );
        let inside = vec![rat_i64(2), rat_i64(3), rat_i64(5)];
        let c = b.solve_coords(&inside).unwrap();
        assert_eq!(c, vec![rat_i64(2), rat_i64(3)]);
        let outside = vec![rat_i64(1), rat_i64(0), rat_i64(0)];
        assert!(b.solve_coords(&outside).is_none());
    }

    #[test]
    fn complement_is_involutive_and_dimensions_add() {
        let b = SubspaceBasis::spanned_by(
            4,
            &[
                vec![rat_i64(1), rat_i64(1), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(1), rat_i64(-1)],
            ],
        );
        let c = b.orthogonal_complement();
        assert_eq!(b.dim() + c.dim(), 4);
        assert!(c.orthogonal_complement().span_equal(&b));
    }

    #[test]
    fn intersection_members_lie_in_both() {
        let a = SubspaceBasis::spanned_by(
            3,
            &[
                vec![rat_i64(1), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(1), rat_i64(0)],
            ],
        );
        let b = SubspaceBasis::spanned_by(
            3,
            &[
                vec![rat_i64(0), rat_i64(1), rat_i64(1)],
                vec![rat_i64(1), rat_i64(0), rat_i64(1)],
            ],
        );
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        for v in i.vectors() {
            assert!(a.contains(v) && b.contains(v));
        }
    }

    #[test]
    fn determinant_matches_hand_value() {
        let a = RationalMatrix::from_rows(vec![
            vec![rat_frac(1, 2), rat_i64(1)],
            vec![rat_i64(3), rat_i64(4)],
        ]);
        assert_eq!(determinant(&a), rat_i64(-1));
        let s = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&s), rat_i64(-1));
    }
}
