//! Floating-point matrix helpers for the spectral side.

/// Row-major dense f64 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^t M` as a vector.
    pub fn vec_mat(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            if vi != 0.0 {
                for j in 0..self.cols {
                    out[j] += vi * self[(i, j)];
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a != 0.0 {
                    for j in 0..other.cols {
                        out[(i, j)] += a * other[(k, j)];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> FMatrix {
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &FMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Outer product `u v^t`.
    pub fn outer(u: &[f64], v: &[f64]) -> FMatrix {
        FMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }
}

impl std::ops::Index<(usize, usize)> for FMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Numerical row-space accumulator. Rows are kept fully reduced with unit
/// pivots and mutually cleared pivot columns, so membership tests and
/// coordinate reads are a single elimination pass.
///
/// Candidates are 1-norm normalized before the pivot test, making the pivot
/// tolerance scale-free. A candidate whose 1-norm does not exceed the
/// tolerance is indistinguishable from accumulated rounding noise of an
/// exact zero and is treated as zero; without this floor, normalization
/// would amplify noise vectors into spurious basis rows.
#[derive(Clone, Debug)]
pub struct FloatRowBasis {
    ambient: usize,
    tol: f64,
    rows: Vec<Vec<f64>>,
    pivots: Vec<usize>,
}

impl FloatRowBasis {
    pub fn new(ambient: usize, tol: f64) -> Self {
        Self {
            ambient,
            tol,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    fn eliminate(&self, v: &mut [f64]) {
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            let c = v[p];
            if c != 0.0 {
                for (x, y) in v.iter_mut().zip(row.iter()) {
                    *x -= c * y;
                }
                v[p] = 0.0;
            }
        }
    }

    /// Residual of `v` against the span, after 1-norm normalization.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let n1 = norm1(v);
        if n1 <= self.tol {
            return 0.0;
        }
        let mut w: Vec<f64> = v.iter().map(|x| x / n1).collect();
        self.eliminate(&mut w);
        norm_inf(&w)
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        self.residual(v) <= self.tol
    }

    /// Inserts `v` when its reduced part clears the pivot tolerance.
    /// Returns true when the dimension grew.
    pub fn insert(&mut self, v: &[f64]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let n1 = norm1(v);
        if n1 <= self.tol {
            return false;
        }
        let mut w: Vec<f64> = v.iter().map(|x| x / n1).collect();
        self.eliminate(&mut w);
        let (p, &pv) = match w
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        {
            Some(x) => x,
            None => return false,
        };
        if pv.abs() <= self.tol {
            return false;
        }
        for x in w.iter_mut() {
            *x /= pv;
        }
        w[p] = 1.0;
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0.0 {
                for (x, y) in row.iter_mut().zip(w.iter()) {
                    *x -= c * y;
                }
                row[p] = 0.0;
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    /// Coordinates of `v` in the stored (reduced) rows; `None` when `v` is
    /// not in the span within tolerance.
    pub fn coordinates(&self, v: &[f64]) -> Option<Vec<f64>> {
        let mut w = v.to_vec();
        let mut coords = vec![0.0; self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(self.pivots.iter()).enumerate() {
            let c = w[p];
            coords[k] = c;
            if c != 0.0 {
                for (x, y) in w.iter_mut().zip(row.iter()) {
                    *x -= c * y;
                }
                w[p] = 0.0;
            }
        }
        let scale = norm1(v).max(1.0);
        if norm_inf(&w) <= self.tol * scale * 10.0 {
            Some(coords)
        } else {
            None
        }
    }
}

/// Thin QR by modified Gram-Schmidt for coordinate solves against an
/// arbitrary (not necessarily reduced) basis given as columns.
pub struct ThinQr {
    q: Vec<Vec<f64>>, // orthonormal columns
    r: Vec<Vec<f64>>, // upper triangular, r[i][j] for i <= j
    dim: usize,
}

impl ThinQr {
    /// `columns` must be linearly independent.
    pub fn new(columns: &[Vec<f64>]) -> Option<Self> {
        let dim = columns.len();
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(dim);
        let mut r = vec![vec![0.0; dim]; dim];
        for (j, col) in columns.iter().enumerate() {
            let mut v = col.clone();
            for (i, qi) in q.iter().enumerate() {
                let c = dot(qi, &v);
                r[i][j] = c;
                for (x, y) in v.iter_mut().zip(qi.iter()) {
                    *x -= c * y;
                }
            }
            let nrm = dot(&v, &v).sqrt();
            if nrm < 1e-300 {
                return None;
            }
            r[j][j] = nrm;
            for x in v.iter_mut() {
                *x /= nrm;
            }
            q.push(v);
        }
        Some(Self { q, r, dim })
    }

    /// Least-squares coordinates `alpha` with `B alpha ~ y`, plus the
    /// max-norm residual of the reconstruction.
    pub fn solve(&self, y: &[f64], columns: &[Vec<f64>]) -> (Vec<f64>, f64) {
        let mut rhs: Vec<f64> = self.q.iter().map(|qi| dot(qi, y)).collect();
        // Back-substitution on R.
        for i in (0..self.dim).rev() {
            for j in i + 1..self.dim {
                rhs[i] -= self.r[i][j] * rhs[j];
            }
            rhs[i] /= self.r[i][i];
        }
        let mut recon = vec![0.0; y.len()];
        for (a, col) in rhs.iter().zip(columns.iter()) {
            for (x, y) in recon.iter_mut().zip(col.iter()) {
                *x += a * y;
            }
        }
        let resid = y
            .iter()
            .zip(recon.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        (rhs, resid)
    }
}
