use std::fmt;

use num_traits::{One, Zero};

use super::poly::{ValPoly, Q};

/// Dense matrix over truncated power series; every product discards degrees `>= trunc`.
#[derive(Clone, PartialEq, Eq)]
pub struct DVRMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ValPoly>,
    trunc: u32,
}

impl DVRMatrix {
    pub fn zeros(rows: usize, cols: usize, trunc: u32) -> DVRMatrix {
        DVRMatrix { rows, cols, data: vec![ValPoly::zero(); rows * cols], trunc }
    }

    pub fn identity(n: usize, trunc: u32) -> DVRMatrix {
        let mut m = DVRMatrix::zeros(n, n, trunc);
        for i in 0..n {
            m.set(i, i, ValPoly::one());
        }
        m
    }

    /// `t^d` times the identity.
    pub fn scalar(n: usize, d: u32, trunc: u32) -> DVRMatrix {
        let mut m = DVRMatrix::zeros(n, n, trunc);
        for i in 0..n {
            m.set(i, i, ValPoly::t_pow(d));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ValPoly>>, trunc: u32) -> DVRMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        let data = rows.into_iter().flatten().map(|p| p.truncated(trunc)).collect();
        DVRMatrix { rows: r, cols: c, data, trunc }
    }

    /// Matrix of integer monomials: entry `(c, d)` means `c * t^d`.
    pub fn from_monomials(rows: &[Vec<(i64, u32)>], trunc: u32) -> DVRMatrix {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(c, d)| ValPoly::from_int(c).mul(&ValPoly::t_pow(d), u32::MAX))
                    .collect()
            })
            .collect();
        DVRMatrix::from_rows(rows, trunc)
    }

    pub fn from_columns(cols: &[Vec<ValPoly>], rows: usize, trunc: u32) -> DVRMatrix {
        let mut m = DVRMatrix::zeros(rows, cols.len(), trunc);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn with_trunc(&self, trunc: u32) -> DVRMatrix {
        let data = self.data.iter().map(|p| p.clone().truncated(trunc)).collect();
        DVRMatrix { rows: self.rows, cols: self.cols, data, trunc }
    }

    pub fn get(&self, i: usize, j: usize) -> &ValPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ValPoly) {
        let t = self.trunc;
        self.data[i * self.cols + j] = v.truncated(t);
    }

    pub fn column(&self, j: usize) -> Vec<ValPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<ValPoly> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, o: &DVRMatrix) -> DVRMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let trunc = self.trunc.min(o.trunc);
        let mut out = DVRMatrix::zeros(self.rows, o.cols, trunc);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = ValPoly::zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    let b = o.get(l, j);
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b, trunc));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ValPoly]) -> Vec<ValPoly> {
        let col = DVRMatrix::from_columns(&[v.to_vec()], v.len(), self.trunc);
        self.mul(&col).column(0)
    }

    pub fn add(&self, o: &DVRMatrix) -> DVRMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let trunc = self.trunc.min(o.trunc);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b).truncated(trunc)).collect();
        DVRMatrix { rows: self.rows, cols: self.cols, data, trunc }
    }

    pub fn sub(&self, o: &DVRMatrix) -> DVRMatrix {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DVRMatrix {
        let data = self.data.iter().map(|a| a.neg()).collect();
        DVRMatrix { rows: self.rows, cols: self.cols, data, trunc: self.trunc }
    }

    /// Multiply every entry by `t^d`.
    pub fn shift_up(&self, d: u32) -> DVRMatrix {
        let t = self.trunc;
        let data = self.data.iter().map(|a| a.shift_up(d).truncated(t)).collect();
        DVRMatrix { rows: self.rows, cols: self.cols, data, trunc: t }
    }

    /// Divide every entry by `t^d`, if possible.
    pub fn div_t(&self, d: u32) -> Option<DVRMatrix> {
        let data = self.data.iter().map(|a| a.div_t(d)).collect::<Option<Vec<_>>>()?;
        Some(DVRMatrix { rows: self.rows, cols: self.cols, data, trunc: self.trunc })
    }

    pub fn transpose(&self) -> DVRMatrix {
        let mut out = DVRMatrix::zeros(self.cols, self.rows, self.trunc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &DVRMatrix) -> DVRMatrix {
        let trunc = self.trunc.min(o.trunc);
        let mut out = DVRMatrix::zeros(self.rows * o.rows, self.cols * o.cols, trunc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_exact_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.set(i * o.rows + k, j * o.cols + l, a.mul(o.get(k, l), trunc));
                    }
                }
            }
        }
        out
    }

    /// Columns `range` as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> DVRMatrix {
        let mut out = DVRMatrix::zeros(self.rows, cols.len(), self.trunc);
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> DVRMatrix {
        let mut out = DVRMatrix::zeros(rows.len(), self.cols, self.trunc);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn hcat(&self, o: &DVRMatrix) -> DVRMatrix {
        assert_eq!(self.rows, o.rows);
        let trunc = self.trunc.min(o.trunc);
        let mut out = DVRMatrix::zeros(self.rows, self.cols + o.cols, trunc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, o: &DVRMatrix) -> DVRMatrix {
        let trunc = self.trunc.min(o.trunc);
        let mut out = DVRMatrix::zeros(self.rows + o.rows, self.cols + o.cols, trunc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                out.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// Constant terms as a rational matrix (row-major).
    pub fn mod_t(&self) -> Vec<Vec<Q>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).constant_term()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    /// Minimum precision over entries.
    pub fn min_precision(&self) -> u32 {
        self.data.iter().map(|p| p.precision()).min().unwrap_or(super::poly::EXACT)
    }

    /// Valuation of the determinant of a square matrix over the fraction field.
    pub fn det_valuation(&self) -> Option<u32> {
        assert_eq!(self.rows, self.cols);
        let s = super::smith::smith_over_dvr(self).ok()?;
        (s.free_rank == 0).then(|| s.exponents.iter().sum())
    }

    /// Entrywise equality modulo `t^n`.
    pub fn eq_mod(&self, o: &DVRMatrix, n: u32) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols)
            && self.data.iter().zip(&o.data).all(|(a, b)| a.sub(b).truncated(n).is_zero())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] -= f * row[src]`, restricted to columns `from..`.
    pub(crate) fn row_axpy(&mut self, target: usize, src: usize, f: &ValPoly, from: usize) {
        let t = self.trunc;
        for j in from..self.cols {
            let s = self.get(src, j);
            if s.is_exact_zero() {
                continue;
            }
            let v = self.get(target, j).sub(&f.mul(s, t));
            self.set(target, j, v);
        }
    }

    /// `col[target] -= f * col[src]`.
    pub(crate) fn col_axpy(&mut self, target: usize, src: usize, f: &ValPoly) {
        let t = self.trunc;
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_exact_zero() {
                continue;
            }
            let v = self.get(i, target).sub(&f.mul(s, t));
            self.set(i, target, v);
        }
    }
}

impl fmt::Display for DVRMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DVRMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DVRMatrix {}x{} (N={})\n{}", self.rows, self.cols, self.trunc, self)
    }
}

/// Row-reduced echelon data of a rational matrix: a nullspace basis and the pivot columns.
pub fn rational_nullspace(m: &[Vec<Q>], cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    (basis, pivots)
}
