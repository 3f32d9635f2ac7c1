//! Integer matrices, Smith normal form, and lattice comparisons.

use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major. Columns index the source basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl From<Vec<Vec<i64>>> for IntMatrix {
    fn from(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IntMatrix::from_rows(r, c, rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        (0..m.rows).map(|i| m.row(i).to_vec()).collect()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if a row has the wrong length.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<i64>>) -> Self {
        assert_eq!(data.len(), rows, "row count");
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, r) in data.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} length");
            for (j, x) in r.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * if n == 0 { 1 } else { a[n - 1][n - 1] }) as i64
    }
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero invariant factors `d₁ | d₂ | …`.
    pub invariants: Vec<i64>,
    /// Unimodular `U` and `V` with `U·A·V` diagonal.
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Columns of `V` beyond the rank: a basis of the kernel lattice.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        (self.rank()..self.v.cols).map(|j| self.v.column(j)).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let pick = |d: &IntMatrix| {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j).abs();
                    if x != 0 && best.is_none_or(|(bi, bj)| x < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = pick(&d) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = d.get(t, t);
            let mut dirty = false;
            for i in t + 1..m {
                let q = d.get(i, t) / p;
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                dirty |= d.get(i, t) != 0;
            }
            for j in t + 1..n {
                let q = d.get(t, j) / p;
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                dirty |= d.get(t, j) != 0;
            }
            if !dirty {
                // pivot must divide the whole trailing block
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.get(i, j) % p != 0));
                match bad {
                    Some(i) => {
                        d.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        continue;
                    }
                    None => break,
                }
            }
            // a remainder is smaller than the pivot: move it into place
            let mut best = (t, t);
            for i in t..m {
                let x = d.get(i, t).abs();
                if x != 0 && x < d.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                let x = d.get(t, j).abs();
                if x != 0 && x < d.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            d.swap_rows(t, best.0);
            u.swap_rows(t, best.0);
            d.swap_cols(t, best.1);
            v.swap_cols(t, best.1);
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..m.min(n)).map(|i| d.get(i, i)).take_while(|&x| x != 0).collect();
    SmithForm {
        invariants,
        u,
        v,
        diagonal: d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from(rows)
    }

    #[test]
    fn classic_example() {
        let a = m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariants, vec![2, 6, 12]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.diagonal);
        assert_eq!(s.u.determinant().abs(), 1);
        assert_eq!(s.v.determinant().abs(), 1);
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        let a = m(vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank(), 2);
        let k = s.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 0, 0]);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&z).rank(), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(m(vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]).determinant(), 1);
        assert_eq!(m(vec![vec![0, 1], vec![1, 0]]).determinant(), -1);
        assert_eq!(m(vec![vec![2, 3], vec![4, 6]]).determinant(), 0);
        assert_eq!(m(vec![vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 5]]).determinant(), -9);
    }

    #[test]
    fn json_shape() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[1,2],[3,4]]");
    }
}
