//! Compressed sparse row matrices and a preconditioned conjugate gradient.

use crate::error::{Error, Result};

/// Row-compressed matrix; duplicate triplets are summed in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Copy + Default + std::ops::AddAssign> Csr<T> {
    pub fn from_triplets(nrows: usize, ncols: usize, trip: &[(usize, usize, T)]) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); nrows];
        for &(r, c, v) in trip {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let start = col_idx.len();
            for (c, v) in row {
                if col_idx.len() > start && *col_idx.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { nrows, ncols, row_ptr, col_idx, vals }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.col_idx[k], self.vals[k]))
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        (0..self.nrows).flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v))).collect()
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<(usize, usize, T)> = self.triplets().into_iter().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, &t)
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.row(r).find(|e| e.0 == c).map(|e| e.1).unwrap_or_default()
    }
}

impl Csr<f64> {
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|r| self.get(r, r)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            d[r][c] += v;
        }
        d
    }
}

impl Csr<i32> {
    pub fn matvec_int(&self, x: &[i64]) -> Vec<i64> {
        (0..self.nrows).map(|r| self.row(r).map(|(c, v)| v as i64 * x[c]).sum()).collect()
    }

    pub fn to_f64(&self) -> Csr<f64> {
        Csr { nrows: self.nrows, ncols: self.ncols, row_ptr: self.row_ptr.clone(), col_idx: self.col_idx.clone(), vals: self.vals.iter().map(|v| *v as f64).collect() }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Jacobi-preconditioned conjugate gradient for a symmetric positive
/// semidefinite `a` and a consistent right-hand side. When `deflate_constants`
/// is set the iterates are kept orthogonal to the constant vector, which
/// spans the kernel of a connected graph Laplacian.
pub fn conjugate_gradient(a: &Csr<f64>, b: &[f64], rel_tol: f64, max_iter: usize, deflate_constants: bool) -> Result<Vec<f64>> {
    let n = b.len();
    let project = |v: &mut Vec<f64>| {
        if deflate_constants {
            let m = v.iter().sum::<f64>() / n as f64;
            v.iter_mut().for_each(|x| *x -= m);
        }
    };
    let diag: Vec<f64> = a.diagonal().iter().map(|d| if *d > 0.0 { 1.0 / d } else { 1.0 }).collect();
    let mut rhs = b.to_vec();
    project(&mut rhs);
    let bn = norm(&rhs);
    let mut x = vec![0.0; n];
    if bn == 0.0 {
        return Ok(x);
    }
    let mut r = rhs.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r * d).collect();
    project(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..max_iter {
        let ap = a.matvec(&p);
        let alpha = rz / dot(&p, &ap);
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if norm(&r) <= rel_tol * bn {
            // Recompute the true residual to guard against drift.
            project(&mut x);
            let ax = a.matvec(&x);
            let mut res: Vec<f64> = rhs.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
            project(&mut res);
            if norm(&res) <= 10.0 * rel_tol * bn {
                return Ok(x);
            }
            r = res;
        }
        z = r.iter().zip(&diag).map(|(r, d)| r * d).collect();
        project(&mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    let ax = a.matvec(&x);
    let mut res: Vec<f64> = rhs.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
    project(&mut res);
    Err(Error::SolveFailed { residual: norm(&res) / bn })
}
