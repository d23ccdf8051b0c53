//! Compressed sparse rows and preconditioned conjugate gradients.

use crate::{Error, Result};

/// Square sparse matrix in CSR layout.
#[derive(Clone, Debug, Default)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
    diag: Vec<f64>,
    /// Position of the diagonal entry within each row.
    diag_pos: Vec<usize>,
}

impl CsrMatrix {
    /// Rows given as `(col, val)` lists; each row must contain its diagonal.
    pub fn from_rows(rows: Vec<Vec<(u32, f64)>>) -> Self {
        let mut m = Self::with_capacity(rows.len(), rows.iter().map(|r| r.len()).sum());
        for mut row in rows {
            m.push_row(&mut row);
        }
        m
    }

    pub fn with_capacity(n: usize, nnz: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        Self {
            n: 0,
            row_ptr,
            cols: Vec::with_capacity(nnz),
            vals: Vec::with_capacity(nnz),
            diag: Vec::with_capacity(n),
            diag_pos: Vec::with_capacity(n),
        }
    }

    /// Append the next row; entries are sorted and duplicates summed.
    pub fn push_row(&mut self, row: &mut Vec<(u32, f64)>) {
        let i = self.n;
        row.sort_unstable_by_key(|e| e.0);
        let mut d = 0.0;
        let mut dp = usize::MAX;
        for &(c, v) in row.iter() {
            if self.cols.len() > self.row_ptr[i] && *self.cols.last().unwrap() == c {
                *self.vals.last_mut().unwrap() += v;
            } else {
                self.cols.push(c);
                self.vals.push(v);
            }
            if c as usize == i {
                dp = self.cols.len() - 1;
            }
        }
        if dp != usize::MAX {
            d = self.vals[dp];
        }
        self.diag.push(d);
        self.diag_pos.push(dp);
        self.row_ptr.push(self.cols.len());
        self.n += 1;
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k] as usize];
            }
            y[i] = s;
        }
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k] as usize;
                let row = &self.cols[self.row_ptr[j]..self.row_ptr[j + 1]];
                let a_ji = match row.binary_search(&(i as u32)) {
                    Ok(p) => self.vals[self.row_ptr[j] + p],
                    Err(_) => 0.0,
                };
                worst = worst.max((self.vals[k] - a_ji).abs());
            }
        }
        worst
    }

    /// `z = M^{-1} r` for the symmetric Gauss-Seidel splitting
    /// `M = (D + L) D^{-1} (D + U)`.
    fn sgs(&self, r: &[f64], z: &mut [f64]) {
        for i in 0..self.n {
            let mut s = r[i];
            for k in self.row_ptr[i]..self.diag_pos[i] {
                s -= self.vals[k] * z[self.cols[k] as usize];
            }
            z[i] = s / self.diag[i];
        }
        for i in (0..self.n).rev() {
            let mut s = 0.0;
            for k in self.diag_pos[i] + 1..self.row_ptr[i + 1] {
                s += self.vals[k] * z[self.cols[k] as usize];
            }
            z[i] -= s / self.diag[i];
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PcgReport {
    pub iterations: usize,
    /// `|b - A x| / |b|` at exit.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve `A x = b` from the initial guess in `x`.
pub fn pcg(a: &CsrMatrix, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<PcgReport> {
    let n = a.n;
    if a.diag.iter().any(|&d| d <= 0.0) {
        let d = a.diag.iter().copied().fold(f64::INFINITY, f64::min);
        return Err(Error::Indefinite(d));
    }
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(PcgReport { iterations: 0, relative_residual: 0.0 });
    }
    let mut r = vec![0.0; n];
    a.mul(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut z = vec![0.0; n];
    a.sgs(&r, &mut z);
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut res = dot(&r, &r).sqrt() / bnorm;
    for it in 0..max_iter {
        if res <= tol {
            return Ok(PcgReport { iterations: it, relative_residual: res });
        }
        a.mul(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= 0.0 {
            return Err(Error::Indefinite(pq));
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        res = dot(&r, &r).sqrt() / bnorm;
        a.sgs(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if res <= tol {
        return Ok(PcgReport { iterations: max_iter, relative_residual: res });
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: res })
}
