//! Dense integer matrices over `BigInt` with Hermite and Smith normal forms.
//!
//! Lattices are spanned by *rows*: a matrix `A` stands for the subgroup
//! `Z^r · A ⊆ Z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    /// Build from rows; all rows must have length `cols`.
    pub fn new(cols: usize, rows: Vec<Vec<BigInt>>) -> IntMatrix {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { cols, rows }
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::new(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::new(cols, vec![vec![BigInt::zero(); cols]; rows])
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> IntMatrix {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, d) in entries.iter().enumerate() {
            m.rows[i][i] = d.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// Stack the rows of `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        IntMatrix::new(self.cols, rows)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.nrows());
        let rows = self.rows.iter().map(|r| vec_mat(r, other)).collect();
        IntMatrix::new(other.cols, rows)
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        IntMatrix::new(self.rows.len(), rows)
    }

    pub fn rank(&self) -> usize {
        hnf(self).nrows()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.swap(a, b);
        }
    }

    /// `col_dst += k · col_src`.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in &mut self.rows {
            let v = &r[src] * k;
            r[dst] += v;
        }
    }

    /// `row_dst += k · row_src`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        let src_row = self.rows[src].clone();
        for (x, s) in self.rows[dst].iter_mut().zip(src_row) {
            *x += s * k;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.rows[i] {
            *x = -&*x;
        }
    }
}

/// Row vector times matrix.
pub fn vec_mat(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    assert_eq!(v.len(), m.nrows());
    (0..m.ncols())
        .map(|j| v.iter().zip(&m.rows).map(|(a, r)| a * &r[j]).sum())
        .collect()
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`, zero rows removed. Two
/// matrices span the same lattice iff their HNFs are equal.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.nrows() {
            break;
        }
        loop {
            let pivot = (r..a.nrows())
                .filter(|&i| !a.rows[i][c].is_zero())
                .min_by(|&i, &j| a.rows[i][c].abs().cmp(&a.rows[j][c].abs()));
            let Some(p) = pivot else { break };
            a.rows.swap(r, p);
            let mut done = true;
            for i in r + 1..a.nrows() {
                if a.rows[i][c].is_zero() {
                    continue;
                }
                let q = a.rows[i][c].div_floor(&a.rows[r][c]);
                a.add_row(i, r, &-q);
                if !a.rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.rows.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if a.rows[r][c].is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.rows[i][c].div_floor(&a.rows[r][c]);
            if !q.is_zero() {
                a.add_row(i, r, &-q);
            }
        }
        r += 1;
    }
    a.rows.truncate(r);
    a
}

/// Smith form `D = U·A·V` together with `V` and `V⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub diagonal: IntMatrix,
    /// Non-zero diagonal entries `d_1 | d_2 | …`.
    pub invariant_factors: Vec<BigInt>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

/// Smith normal form with column transforms.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let mut a = m.clone();
    let n = a.cols;
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);
    let rows = a.nrows();

    // Column operations are mirrored on V (right) and V⁻¹ (left).
    let add_col = |a: &mut IntMatrix,
                   v: &mut IntMatrix,
                   v_inv: &mut IntMatrix,
                   dst: usize,
                   src: usize,
                   k: &BigInt| {
        a.add_col(dst, src, k);
        v.add_col(dst, src, k);
        v_inv.add_row(src, dst, &-k);
    };
    let swap_cols =
        |a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, i: usize, j: usize| {
            a.swap_cols(i, j);
            v.swap_cols(i, j);
            v_inv.rows.swap(i, j);
        };

    for t in 0..rows.min(n) {
        let smallest = |a: &IntMatrix| {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..n {
                    if !a.rows[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a.rows[i][j].abs() < a.rows[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((i0, j0)) = smallest(&a) else { break };
        a.rows.swap(t, i0);
        swap_cols(&mut a, &mut v, &mut v_inv, t, j0);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a.rows[i][t].is_zero() {
                    continue;
                }
                let q = a.rows[i][t].div_floor(&a.rows[t][t]);
                a.add_row(i, t, &-q);
                clean &= a.rows[i][t].is_zero();
            }
            for j in t + 1..n {
                if a.rows[t][j].is_zero() {
                    continue;
                }
                let q = a.rows[t][j].div_floor(&a.rows[t][t]);
                add_col(&mut a, &mut v, &mut v_inv, j, t, &-q);
                clean &= a.rows[t][j].is_zero();
            }
            if !clean {
                let mut best = (t, t);
                for i in t..rows {
                    if !a.rows[i][t].is_zero() && a.rows[i][t].abs() < a.rows[best.0][best.1].abs()
                    {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if !a.rows[t][j].is_zero() && a.rows[t][j].abs() < a.rows[best.0][best.1].abs()
                    {
                        best = (t, j);
                    }
                }
                a.rows.swap(t, best.0);
                swap_cols(&mut a, &mut v, &mut v_inv, t, best.1);
                continue;
            }
            let pivot = a.rows[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..n).any(|j| !a.rows[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => a.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.rows[t][t].is_negative() {
            a.negate_row(t);
        }
    }

    let invariant_factors = (0..rows.min(n))
        .map(|i| a.rows[i][i].clone())
        .filter(|d| !d.is_zero())
        .collect();
    SmithDecomposition {
        diagonal: a,
        invariant_factors,
        v,
        v_inv,
    }
}

/// Smith normal form: the diagonal matrix and its non-zero invariant factors.
pub fn snf(m: &IntMatrix) -> (IntMatrix, Vec<BigInt>) {
    let s = smith(m);
    (s.diagonal, s.invariant_factors)
}
