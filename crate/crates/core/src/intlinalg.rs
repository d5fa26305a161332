//! Exact integer matrix algebra: Smith normal form with unimodular
//! witnesses, rank, determinant, cokernel invariants, and row-lattice
//! membership. Entries are arbitrary-precision, so no overflow path exists.
//!
//! Convention fixed project-wide: rows are relations, columns are generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows
                .iter()
                .flat_map(|row| row.iter().cloned().map(Into::into))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = q * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = q * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !m[(i, k)].is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        let c = self.cols;
        &mut self.entries[i * c + j]
    }
}

/// Invariant-factor decomposition `U * M * V = diag(d_1, ..., d_r)` with
/// `d_1 | d_2 | ... | d_r` all positive and `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Recomputes `U * M * V` and compares with the stored diagonal.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let prod = self.left.mul(m).mul(&self.right);
        for i in 0..prod.rows() {
            for j in 0..prod.cols() {
                let expected = if i == j && i < self.diagonal.len() {
                    self.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                if prod[(i, j)] != expected {
                    return false;
                }
            }
        }
        self.left.determinant().abs().is_one() && self.right.determinant().abs().is_one()
    }
}

/// Smith normal form by gcd-driven row/column reduction, pivoting on the
/// least nonzero magnitude.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());
    let mut t = 0;

    while t < n {
        // pivot: least nonzero magnitude in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m.rows() {
            for j in t..m.cols() {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m.rows() {
                if !a[(i, t)].is_zero() {
                    let q = -a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    if !a[(i, t)].is_zero() {
                        // remainder smaller than the pivot: swap it up
                        a.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..m.cols() {
                if !a[(t, j)].is_zero() {
                    let q = -a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    if !a[(t, j)].is_zero() {
                        a.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (t + 1..m.rows()).all(|i| a[(i, t)].is_zero())
                && (t + 1..m.cols()).all(|j| a[(t, j)].is_zero())
            {
                break;
            }
        }

        // pivot must divide the rest of the block; otherwise absorb a bad
        // row and restart the elimination at this position
        let mut bad = None;
        'scan: for i in t + 1..m.rows() {
            for j in t + 1..m.cols() {
                if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                    bad = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = bad {
            a.add_row(t, i, &BigInt::one());
            u.add_row(t, i, &BigInt::one());
            continue;
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..t).map(|i| a[(i, i)].clone()).collect();
    debug_assert!(diagonal
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero()));
    SmithForm {
        rank: diagonal.len(),
        diagonal,
        left: u,
        right: v,
    }
}

/// Free rank and nontrivial invariant factors of the abelian group presented
/// by `m` (rows are relations, columns are generators).
pub fn cokernel_invariants(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(m);
    let torsion = snf
        .diagonal
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    (m.cols() - snf.rank, torsion)
}

/// Whether `v` lies in the lattice spanned by the rows of `m`.
pub fn in_row_lattice(m: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(v.len(), m.cols());
    let snf = smith_normal_form(m);
    // v in rowspace(M) iff y = v * V has y_i divisible by d_i for i < rank
    // and zero beyond.
    let vm = IntMatrix::from_rows(&[v.to_vec()]).mul(&snf.right);
    for j in 0..m.cols() {
        if j < snf.rank {
            if !(&vm[(0, j)] % &snf.diagonal[j]).is_zero() {
                return false;
            }
        } else if !vm[(0, j)].is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_diag(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = IntMatrix::from_rows(rows);
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m), "witness check failed for {rows:?}");
        snf.diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn identity_matrix() {
        assert_eq!(snf_diag(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), [1, 1, 1]);
    }

    #[test]
    fn two_by_two_with_torsion() {
        assert_eq!(snf_diag(&[vec![2, -3], vec![-3, 2]]), [1, 5]);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 0);
        assert!(snf.diagonal.is_empty());
        assert!(snf.verify(&m));
    }

    #[test]
    fn divisibility_chain_enforced() {
        // diag(2, 3) ~ diag(1, 6)
        assert_eq!(snf_diag(&[vec![2, 0], vec![0, 3]]), [1, 6]);
        assert_eq!(snf_diag(&[vec![4, 0], vec![0, 6]]), [2, 12]);
    }

    #[test]
    fn cokernel_examples() {
        let (rank, torsion) = cokernel_invariants(&IntMatrix::zero(0, 3));
        assert_eq!((rank, torsion.len()), (3, 0));

        let (rank, torsion) = cokernel_invariants(&IntMatrix::from_rows(&[vec![2, -3], vec![-3, 2]]));
        assert_eq!(rank, 0);
        assert_eq!(torsion, vec![BigInt::from(5)]);

        let (rank, torsion) = cokernel_invariants(&IntMatrix::from_rows(&[vec![5]]));
        assert_eq!(rank, 0);
        assert_eq!(torsion, vec![BigInt::from(5)]);
    }

    #[test]
    fn determinant_bareiss() {
        let m = IntMatrix::from_rows(&[vec![2, -3], vec![-3, 2]]);
        assert_eq!(m.determinant(), BigInt::from(-5));
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(m.determinant(), BigInt::zero());
    }

    #[test]
    fn permutation_insensitive() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..5);
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let base = snf_diag(&rows);
            let mut shuffled = rows.clone();
            shuffled.shuffle(&mut rng);
            let perm: Vec<usize> = {
                let mut p: Vec<usize> = (0..c).collect();
                p.shuffle(&mut rng);
                p
            };
            let permuted: Vec<Vec<i64>> = shuffled
                .iter()
                .map(|row| perm.iter().map(|&j| row[j]).collect())
                .collect();
            assert_eq!(base, snf_diag(&permuted));
        }
    }

    #[test]
    fn row_lattice_membership() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(in_row_lattice(&m, &[BigInt::from(4), BigInt::from(-3)]));
        assert!(!in_row_lattice(&m, &[BigInt::from(1), BigInt::from(0)]));
        let m = IntMatrix::zero(0, 2);
        assert!(!in_row_lattice(&m, &[BigInt::from(1), BigInt::zero()]));
        assert!(in_row_lattice(&m, &[BigInt::zero(), BigInt::zero()]));
    }

    #[test]
    fn entry_growth_big_values() {
        // entries far beyond i64 after products
        let big = BigInt::from(i64::MAX) * BigInt::from(12345);
        let m = IntMatrix::from_rows(&[vec![big.clone(), BigInt::one()], vec![BigInt::one(), big]]);
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m));
        assert_eq!(snf.rank, 2);
    }
}
