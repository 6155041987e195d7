//! Dense matrices over Q(i) with exact elimination kernels.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::scalar::Gq;

/// A vector in Q(i)^n.
pub type VecC = Vec<Gq>;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Gq::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Gq::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Gq) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Gq::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn from_columns(ambient: usize, cols: &[VecC]) -> Self {
        assert!(cols.iter().all(|c| c.len() == ambient));
        Mat::from_fn(ambient, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> VecC {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<VecC> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    pub fn adjoint(&self) -> Mat {
        self.transpose().conj()
    }

    pub fn scale(&self, s: &Gq) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * s)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(k, x)| {
                    let (r, c) = (k / self.cols, k % self.cols);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    pub fn apply(&self, v: &[Gq]) -> VecC {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Gq::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc = &acc + &(&self[(r, c)] * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("pivot nonzero");
            for c in 0..m.cols {
                m[(row, c)] = &m[(row, c)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in 0..m.cols {
                        let t = &m[(r, c)] - &(&f * &m[(row, c)]);
                        m[(r, c)] = t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the null space (echelon of the free-variable basis).
    pub fn kernel(&self) -> Vec<VecC> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Gq::zero(); self.cols];
            vec[free] = Gq::one();
            for col in 0..self.cols {
                if let Some(prow) = pivot_set[col] {
                    vec[col] = -&r[(prow, free)];
                }
            }
            out.push(vec);
        }
        out
    }

    /// Solve self * x = b exactly; `None` when inconsistent. Returns the
    /// canonical particular solution with free variables set to zero.
    pub fn solve(&self, b: &[Gq]) -> Option<VecC> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (r, pivots) = aug.rref();
        aug = r;
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Gq::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Gq::one()
            } else {
                Gq::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMatrix);
        }
        Ok(Mat::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    pub fn det(&self) -> Gq {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Gq::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Gq::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot nonzero");
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for c in col..n {
                    let t = &m[(r, c)] - &(&f * &m[(col, c)]);
                    m[(r, c)] = t;
                }
            }
        }
        det
    }

    pub fn trace(&self) -> Gq {
        assert_eq!(self.rows, self.cols);
        let mut t = Gq::zero();
        for i in 0..self.rows {
            t = &t + &self[(i, i)];
        }
        t
    }

    pub fn commutator(&self, o: &Mat) -> Mat {
        &(self * o) - &(o * self)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Gq;
    fn index(&self, (r, c): (usize, usize)) -> &Gq {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Gq {
        &mut self.data[r * self.cols + c]
    }
}

impl<'a, 'b> Mul<&'b Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &'b Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        Mat::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Gq::zero();
            for k in 0..self.cols {
                if !self[(r, k)].is_zero() && !rhs[(k, c)].is_zero() {
                    acc = &acc + &(&self[(r, k)] * &rhs[(k, c)]);
                }
            }
            acc
        })
    }
}

impl<'a, 'b> Add<&'b Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &'b Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &rhs[(r, c)])
    }
}

impl<'a, 'b> Sub<&'b Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &'b Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &rhs[(r, c)])
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| -&self[(r, c)])
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Standard basis vector e_i (zero-indexed) in dimension n.
pub fn basis_vec(n: usize, i: usize) -> VecC {
    let mut v = vec![Gq::zero(); n];
    v[i] = Gq::one();
    v
}

pub fn vec_add(a: &[Gq], b: &[Gq]) -> VecC {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Gq], b: &[Gq]) -> VecC {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Gq], s: &Gq) -> VecC {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_conj(a: &[Gq]) -> VecC {
    a.iter().map(|x| x.conj()).collect()
}

pub fn vec_is_zero(a: &[Gq]) -> bool {
    a.iter().all(|x| x.is_zero())
}
