use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{LabError, Result};
use crate::padic::{Field, LocalScalar, PAdic, Quad};

/// Dense matrix over `F` or `E`.
#[derive(Clone)]
pub struct Matrix<S> {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

pub type MatrixF = Matrix<PAdic>;
pub type MatrixE = Matrix<Quad>;

impl<S: LocalScalar> Matrix<S> {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![S::zero(field); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = S::one(field);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LabError::Dimension("ragged rows".into()));
        }
        Ok(Matrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn column_vector(field: &Field, v: &[S]) -> Self {
        Self::from_columns(field, v.len(), &[v.to_vec()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn map<T: LocalScalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut m = Self::zeros(&self.field, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Conjugate transpose `ᵗM^σ`.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product dimensions");
        let mut m = Self::zeros(&self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = S::zero(&self.field);
                for k in 0..self.cols {
                    acc = acc.add_ref(&self[(i, k)].mul_ref(&o[(k, j)]));
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(&self.field), |acc, k| acc.add_ref(&self[(i, k)].mul_ref(&v[k])))
            })
            .collect()
    }

    fn zip(&self, o: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes");
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, S::add_ref)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, S::sub_ref)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        (0..k).fold(Self::identity(&self.field, self.rows), |acc, _| acc.mul(self))
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data.iter().zip(&o.data).all(|(a, b)| a.approx_eq(b))
    }

    /// Smallest entry valuation; `None` for a matrix that is zero at precision.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(S::valuation).min()
    }

    pub fn is_integral(&self) -> Result<bool> {
        for x in &self.data {
            match x.valuation() {
                Some(v) if v < 0 => return Ok(false),
                Some(_) => {}
                None => {
                    if x.abs_precision().is_some_and(|a| a < 0) {
                        return Err(LabError::PrecisionExhausted("integrality undecidable"));
                    }
                }
            }
        }
        Ok(true)
    }

    /// Coefficients `[1, c_{n-1}, ..., c_0]` of `det(t - M)`, computed without
    /// division (Berkowitz).
    pub fn charpoly(&self) -> Vec<S> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return vec![S::one(f)];
        }
        let mut v = vec![S::one(f), self[(0, 0)].neg_ref()];
        for r in 1..n {
            // s_0 = 1, s_1 = -a_rr, s_{k+2} = -R M^k C with M the leading r x r block.
            let mut s = Vec::with_capacity(r + 2);
            s.push(S::one(f));
            s.push(self[(r, r)].neg_ref());
            let mut col: Vec<S> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for _ in 0..r {
                let rc = (0..r).fold(S::zero(f), |acc, j| acc.add_ref(&self[(r, j)].mul_ref(&col[j])));
                s.push(rc.neg_ref());
                col = (0..r)
                    .map(|i| (0..r).fold(S::zero(f), |acc, j| acc.add_ref(&self[(i, j)].mul_ref(&col[j]))))
                    .collect();
            }
            let next: Vec<S> = (0..r + 2)
                .map(|i| (0..=r.min(i)).fold(S::zero(f), |acc, j| acc.add_ref(&s[i - j].mul_ref(&v[j]))))
                .collect();
            v = next;
        }
        v
    }

    pub fn det(&self) -> S {
        let cp = self.charpoly();
        let c0 = cp.last().expect("nonempty").clone();
        if self.rows.is_multiple_of(2) {
            c0
        } else {
            c0.neg_ref()
        }
    }

    /// Valuation of the determinant by elimination with minimal-valuation
    /// pivots; `None` when the determinant is exactly zero.
    pub fn val_det(&self) -> Result<Option<i64>> {
        assert!(self.is_square(), "val_det of a non-square matrix");
        let mut a = self.clone();
        let n = self.rows;
        let mut total = 0i64;
        for k in 0..n {
            let Some((pr, pc, v)) = a.pivot(k) else {
                return a.singular_or_imprecise(k).map(|_| None);
            };
            total += v;
            a.swap_rows(k, pr);
            a.swap_cols(k, pc);
            let inv = a[(k, k)].inv()?;
            for i in k + 1..n {
                let t = a[(i, k)].mul_ref(&inv);
                for j in k..n {
                    let d = t.mul_ref(&a[(k, j)]);
                    a[(i, j)] = a[(i, j)].sub_ref(&d);
                }
            }
        }
        Ok(Some(total))
    }

    /// Minimal-valuation entry in the trailing block starting at `k`; ties go
    /// to the smallest row, then column.
    fn pivot(&self, k: usize) -> Option<(usize, usize, i64)> {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in k..self.rows {
            for j in k..self.cols {
                if let Some(v) = self[(i, j)].valuation() {
                    if best.is_none_or(|(_, _, b)| v < b) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        best
    }

    fn singular_or_imprecise(&self, k: usize) -> Result<()> {
        for i in k..self.rows {
            for j in k..self.cols {
                if !self[(i, j)].is_exact_zero() {
                    return Err(LabError::PrecisionExhausted("determinant is zero at working precision"));
                }
            }
        }
        Ok(())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Solves `self * X = rhs` for a square nonsingular `self`.
    pub fn solve_many(&self, rhs: &Self) -> Result<Self> {
        assert!(self.is_square(), "solve with a non-square matrix");
        assert_eq!(self.rows, rhs.rows, "right-hand side rows");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let Some((pr, pc, _)) = a.pivot(k) else {
                a.singular_or_imprecise(k)?;
                return Err(LabError::SingularSystem);
            };
            a.swap_rows(k, pr);
            b.swap_rows(k, pr);
            a.swap_cols(k, pc);
            perm.swap(k, pc);
            let inv = a[(k, k)].inv()?;
            for i in k + 1..n {
                let t = a[(i, k)].mul_ref(&inv);
                for j in k..n {
                    let d = t.mul_ref(&a[(k, j)]);
                    a[(i, j)] = a[(i, j)].sub_ref(&d);
                }
                for j in 0..b.cols {
                    let d = t.mul_ref(&b[(k, j)]);
                    b[(i, j)] = b[(i, j)].sub_ref(&d);
                }
            }
        }
        let mut y = Self::zeros(&self.field, n, b.cols);
        for j in 0..b.cols {
            for k in (0..n).rev() {
                let mut acc = b[(k, j)].clone();
                for l in k + 1..n {
                    acc = acc.sub_ref(&a[(k, l)].mul_ref(&y[(l, j)]));
                }
                y[(k, j)] = acc.div_ref(&a[(k, k)])?;
            }
        }
        // undo the column permutation: unknown k of the permuted system is x[perm[k]]
        let mut x = Self::zeros(&self.field, n, b.cols);
        for k in 0..n {
            for j in 0..b.cols {
                x[(perm[k], j)] = y[(k, j)].clone();
            }
        }
        Ok(x)
    }

    pub fn solve(&self, rhs: &[S]) -> Result<Vec<S>> {
        Ok(self.solve_many(&Self::column_vector(&self.field, rhs))?.column(0))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve_many(&Self::identity(&self.field, self.rows))
    }

    /// Entries agree with `M^*` to working precision.
    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint())
    }
}

impl Matrix<PAdic> {
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| PAdic::from_int(field, x)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular literal")
    }

    pub fn to_quad(&self) -> Matrix<Quad> {
        self.map(|x| Quad::from_base(x.clone()))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<S: LocalScalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
