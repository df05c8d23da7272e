//! Dense complex operator matrices indexed by a [`Domain`], and the reference
//! inverse (LU with partial pivoting).

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};

/// Magic bytes of the binary matrix dump.
pub const BINARY_MAGIC: &[u8; 8] = b"WEYLMAT1";

/// Relative pivot floor below which a matrix is reported singular.
pub const SINGULAR_PIVOT_REL: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `A(t, s)` stored row-major; `(A f)(t) = Σ_s A(t, s) f(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    domain: Domain,
    n: usize,
    data: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(domain: Domain) -> Self {
        let n = domain.order();
        OperatorMatrix {
            domain,
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(domain: Domain) -> Self {
        let mut m = Self::zeros(domain);
        for i in 0..m.n {
            m.data[i * m.n + i] = ONE;
        }
        m
    }

    pub fn from_fn(domain: Domain, f: impl Fn(usize, usize) -> Complex64 + Sync) -> Self {
        let n = domain.order();
        let mut data = vec![ZERO; n * n];
        data.par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(t, row)| {
                for (s, v) in row.iter_mut().enumerate() {
                    *v = f(t, s);
                }
            });
        OperatorMatrix { domain, n, data }
    }

    pub fn from_data(domain: Domain, data: Vec<Complex64>) -> Result<Self> {
        let n = domain.order();
        if data.len() != n * n {
            return Err(Error::DomainMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        Ok(OperatorMatrix { domain, n, data })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, t: usize, s: usize) -> Complex64 {
        self.data[t * self.n + s]
    }

    pub fn set(&mut self, t: usize, s: usize, v: Complex64) {
        self.data[t * self.n + s] = v;
    }

    pub fn row(&self, t: usize) -> &[Complex64] {
        &self.data[t * self.n..(t + 1) * self.n]
    }

    fn ensure_compatible(&self, other: &OperatorMatrix) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "operator domains differ: {:?} vs {:?}",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.ensure_compatible(other)?;
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        data.par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(t, out)| {
                for (k, &a) in self.row(t).iter().enumerate() {
                    if a == ZERO {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(other.row(k)) {
                        *o += a * b;
                    }
                }
            });
        Ok(OperatorMatrix {
            domain: self.domain.clone(),
            n,
            data,
        })
    }

    pub fn apply(&self, f: &GroupFunction) -> Result<GroupFunction> {
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch(
                "function and operator domains differ".into(),
            ));
        }
        let x = f.values();
        let values = (0..self.n)
            .into_par_iter()
            .map(|t| self.row(t).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        GroupFunction::new(self.domain.clone(), values)
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: Complex64, other: &OperatorMatrix, b: Complex64) -> Result<Self> {
        self.ensure_compatible(other)?;
        Ok(OperatorMatrix {
            domain: self.domain.clone(),
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        self.lin_comb(ONE, other, ONE)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<Self> {
        self.lin_comb(ONE, other, -ONE)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        OperatorMatrix {
            domain: self.domain.clone(),
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// `self + c·I`.
    pub fn shift_diagonal(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.ensure_compatible(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// ℓ^∞ → ℓ^∞ norm (max row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|t| self.row(t).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// ℓ¹ → ℓ¹ norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|s| (0..self.n).map(|t| self.get(t, s).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }

    /// `‖A·B − I‖_max`.
    pub fn identity_residual(&self, inverse: &OperatorMatrix) -> Result<f64> {
        let p = self.matmul(inverse)?;
        p.max_abs_diff(&OperatorMatrix::identity(self.domain.clone()))
    }

    /// Rows `t,s,re,im`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "t,s,re,im")?;
        for t in 0..self.n {
            for s in 0..self.n {
                let v = self.get(t, s);
                writeln!(w, "{t},{s},{:e},{:e}", v.re, v.im)?;
            }
        }
        Ok(())
    }

    pub fn read_csv(domain: Domain, r: impl BufRead) -> Result<Self> {
        let mut m = Self::zeros(domain);
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('t')) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if cols.len() != 4 {
                return Err(err("expected 4 columns".into()));
            }
            let t: usize = cols[0].parse().map_err(|e| err(format!("{e}")))?;
            let s: usize = cols[1].parse().map_err(|e| err(format!("{e}")))?;
            let re: f64 = cols[2].parse().map_err(|e| err(format!("{e}")))?;
            let im: f64 = cols[3].parse().map_err(|e| err(format!("{e}")))?;
            if t >= m.n || s >= m.n {
                return Err(err(format!("index ({t},{s}) out of range")));
            }
            m.set(t, s, Complex64::new(re, im));
        }
        Ok(m)
    }

    /// `WEYLMAT1` followed by row-major `(re, im)` little-endian f64 pairs.
    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        for v in &self.data {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(domain: Domain, mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() < 8 || &buf[..8] != BINARY_MAGIC {
            return Err(Error::Parse("missing WEYLMAT1 header".into()));
        }
        let body = &buf[8..];
        let n = domain.order();
        if body.len() != n * n * 16 {
            return Err(Error::Parse(format!(
                "payload of {} bytes does not match a {n}x{n} complex matrix",
                body.len()
            )));
        }
        let data = body
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Self::from_data(domain, data)
    }
}

/// `P A = L U` with unit lower-triangular `L`, stored in place.
#[derive(Debug, Clone)]
pub struct Lu {
    domain: Domain,
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &OperatorMatrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = SINGULAR_PIVOT_REL * a.max_abs();
        for col in 0..n {
            let (p, pivot) =
                (col..n)
                    .map(|r| (r, lu[r * n + col].norm()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot <= threshold || pivot == 0.0 {
                return Err(Error::Singular {
                    column: col,
                    pivot,
                    threshold,
                    diagnostic: String::new(),
                });
            }
            if p != col {
                for j in 0..n {
                    lu.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
            }
            let inv_pivot = ONE / lu[col * n + col];
            let (head, tail) = lu.split_at_mut((col + 1) * n);
            let pivot_row = &head[col * n..];
            tail.par_chunks_mut(n).for_each(|row| {
                let factor = row[col] * inv_pivot;
                row[col] = factor;
                if factor != ZERO {
                    for j in col + 1..n {
                        row[j] -= factor * pivot_row[j];
                    }
                }
            });
        }
        Ok(Lu {
            domain: a.domain.clone(),
            n,
            lu,
            perm,
        })
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&y[..i]).map(|(l, v)| l * v).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&y[i + 1..]).map(|(u, v)| u * v).sum();
            y[i] = (y[i] - s) / self.lu[i * n + i];
        }
        b.copy_from_slice(&y);
    }

    pub fn solve(&self, f: &GroupFunction) -> Result<GroupFunction> {
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch(
                "right-hand side domain differs".into(),
            ));
        }
        let mut v = f.values().to_vec();
        self.solve_in_place(&mut v);
        GroupFunction::new(self.domain.clone(), v)
    }

    pub fn inverse(&self) -> OperatorMatrix {
        let n = self.n;
        let cols: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                self.solve_in_place(&mut e);
                e
            })
            .collect();
        let mut data = vec![ZERO; n * n];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * n + j] = *v;
            }
        }
        OperatorMatrix {
            domain: self.domain.clone(),
            n,
            data,
        }
    }
}

/// Reference inverse; fails with [`Error::Singular`] when a pivot falls below
/// `1e-13 · max|A|`.
pub fn dense_inverse(a: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(a.lu()?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(n: usize) -> Domain {
        Domain::Group(GroupSpec::cyclic(n).unwrap())
    }

    fn random(d: Domain, rng: &mut impl Rng) -> OperatorMatrix {
        let n = d.order();
        let data = (0..n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        OperatorMatrix::from_data(d, data).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let i = OperatorMatrix::identity(z(5));
        assert_eq!(dense_inverse(&i).unwrap(), i);
        let two = i.scale(Complex64::new(2.0, 0.0));
        let half = dense_inverse(&two).unwrap();
        assert!(
            half.max_abs_diff(&i.scale(Complex64::new(0.5, 0.0)))
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn inverse_of_random_well_conditioned_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random(z(16), &mut rng).shift_diagonal(Complex64::new(8.0, 0.0));
        let inv = dense_inverse(&a).unwrap();
        assert!(a.identity_residual(&inv).unwrap() < 1e-10);
        assert!(inv.identity_residual(&a).unwrap() < 1e-10);
    }

    #[test]
    fn permutation_needs_pivoting() {
        let mut p = OperatorMatrix::zeros(z(3));
        p.set(0, 2, ONE);
        p.set(1, 0, ONE);
        p.set(2, 1, ONE);
        let inv = dense_inverse(&p).unwrap();
        assert!(p.identity_residual(&inv).unwrap() < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let mut a = OperatorMatrix::identity(z(4));
        a.set(3, 3, ZERO);
        assert!(matches!(
            dense_inverse(&a),
            Err(Error::Singular { column: 3, .. })
        ));
        let zero = OperatorMatrix::zeros(z(2));
        assert!(dense_inverse(&zero).is_err());
        let mut near = OperatorMatrix::identity(z(2));
        near.set(1, 1, Complex64::new(1e-15, 0.0));
        assert!(dense_inverse(&near).is_err());
    }

    #[test]
    fn csv_and_binary_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(z(4), &mut rng);
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        assert!(csv.starts_with(b"t,s,re,im\n0,0,"));
        assert_eq!(OperatorMatrix::read_csv(z(4), csv.as_slice()).unwrap(), a);

        let mut bin = Vec::new();
        a.write_binary(&mut bin).unwrap();
        assert_eq!(&bin[..8], b"WEYLMAT1");
        assert_eq!(bin.len(), 8 + 16 * 16);
        assert_eq!(
            OperatorMatrix::read_binary(z(4), bin.as_slice()).unwrap(),
            a
        );
        assert!(OperatorMatrix::read_binary(z(5), bin.as_slice()).is_err());
        assert!(OperatorMatrix::read_binary(z(4), &b"WEYLMAT0"[..]).is_err());
    }

    #[test]
    fn lu_solve_matches_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random(z(12), &mut rng).shift_diagonal(Complex64::new(3.0, 1.0));
        let f = GroupFunction::random(z(12), &mut rng);
        let lu = a.lu().unwrap();
        let x = lu.solve(&f).unwrap();
        let back = a.apply(&x).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        let y = lu.inverse().apply(&f).unwrap();
        assert!(x.max_abs_diff(&y).unwrap() < 1e-12);
    }
}
