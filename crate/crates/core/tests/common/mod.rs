//! Brute-force oracles written directly from the definitions, sharing no
//! phase arithmetic with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `G = Π Z_{N_i}` with mixed-radix enumeration, first coordinate most significant.
#[derive(Clone, Debug)]
pub struct Grp {
    pub moduli: Vec<usize>,
}

impl Grp {
    pub fn new(moduli: &[usize]) -> Self {
        Grp {
            moduli: moduli.to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product()
    }

    pub fn decode(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.moduli.len()];
        for k in (0..self.moduli.len()).rev() {
            out[k] = i % self.moduli[k];
            i /= self.moduli[k];
        }
        out
    }

    pub fn encode(&self, x: &[usize]) -> usize {
        x.iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&a, &n)| acc * n + a % n)
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.decode(i), self.decode(j));
        let s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        self.encode(&s)
    }

    pub fn sub(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.decode(i), self.decode(j));
        let s: Vec<usize> = a
            .iter()
            .zip(&b)
            .zip(&self.moduli)
            .map(|((x, y), n)| x + n - y)
            .collect();
        self.encode(&s)
    }

    pub fn lcm(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.moduli.iter().fold(1, |l, &n| l / gcd(l, n) * n)
    }

    /// Kernel entry of `ρ(x, ω) = e^{-πi x·ω} T_{-x} M_ω` at `(t, t + x)`:
    /// `(ρ f)(t) = e^{-πi Σ x_i ω_i / N_i} e^{2πi Σ ω_i (t_i + x_i) / N_i} f(t + x)`.
    pub fn rho_entry(&self, x: usize, w: usize, t: usize) -> Complex64 {
        self.rho_digits(&self.decode(x), &self.decode(w), &self.decode(t))
    }

    fn rho_digits(&self, xv: &[usize], wv: &[usize], tv: &[usize]) -> Complex64 {
        let mut arg = 0.0;
        for k in 0..self.moduli.len() {
            let n = self.moduli[k] as f64;
            arg +=
                -PI * (xv[k] * wv[k]) as f64 / n + 2.0 * PI * (wv[k] * (tv[k] + xv[k])) as f64 / n;
        }
        Complex64::from_polar(1.0, arg)
    }

    /// `λ` with `ρ(z) ρ(z') = λ ρ(z + z')`, read off at row 0.
    pub fn lambda(&self, x: usize, w: usize, x2: usize, w2: usize) -> Complex64 {
        let a = self.rho_entry(x, w, 0);
        let b = self.rho_entry(x2, w2, x);
        let c = self.rho_entry(self.add(x, x2), self.add(w, w2), 0);
        a * b / c
    }

    /// Dense matrix of `Σ σ̂(ω, x) ρ(x, ω)`, spreading stored `(ω, x)`.
    pub fn weyl(&self, sigma: &[Complex64]) -> Vec<Complex64> {
        let n = self.order();
        let digits: Vec<Vec<usize>> = (0..n).map(|i| self.decode(i)).collect();
        let add: Vec<usize> = (0..n * n).map(|i| self.add(i / n, i % n)).collect();
        let mut k = vec![ZERO; n * n];
        for w in 0..n {
            for x in 0..n {
                let c = sigma[w * n + x];
                if c == ZERO {
                    continue;
                }
                for t in 0..n {
                    let s = add[t * n + x];
                    k[t * n + s] += c * self.rho_digits(&digits[x], &digits[w], &digits[t]);
                }
            }
        }
        k
    }

    /// Twisted convolution on `G x Ĝ` in `(x, ω)` order, from `λ`.
    pub fn twisted(&self, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let n = self.order();
        let mut out = vec![ZERO; n * n];
        for z0 in 0..n * n {
            let (x0, w0) = (z0 / n, z0 % n);
            let mut acc = ZERO;
            for z in 0..n * n {
                let (x, w) = (z / n, z % n);
                let (dx, dw) = (self.sub(x0, x), self.sub(w0, w));
                acc += f[z] * g[dx * n + dw] * self.lambda(x, w, dx, dw);
            }
            out[z0] = acc;
        }
        out
    }

    /// Plain convolution on `G` (counting measure).
    pub fn plain(&self, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let n = self.order();
        (0..n)
            .map(|t| (0..n).map(|s| f[s] * g[self.sub(t, s)]).sum())
            .collect()
    }
}

/// Heisenberg group over `G` with law read off from `π(x, ω, k) = e^{-2πik/M} ρ(x, ω)`.
pub struct Heis {
    pub g: Grp,
    pub m: usize,
    pub mul: Vec<usize>,
    pub inv: Vec<usize>,
}

impl Heis {
    pub fn new(moduli: &[usize]) -> Self {
        let g = Grp::new(moduli);
        let m = 2 * g.lcm();
        let n = g.order();
        let size = n * n * m;
        let split = |h: usize| ((h / m) / n, (h / m) % n, h % m);
        let mut mul = vec![0; size * size];
        for a in 0..size {
            let (x, w, k) = split(a);
            for b in 0..size {
                let (x2, w2, k2) = split(b);
                let lam = g.lambda(x, w, x2, w2);
                let turns = lam.arg() / (2.0 * PI) * m as f64;
                let r = turns.round();
                assert!((turns - r).abs() < 1e-9, "λ is not an M-th root of unity");
                let k3 = ((k + k2) as i64 - r as i64).rem_euclid(m as i64) as usize;
                mul[a * size + b] = (g.add(x, x2) * n + g.add(w, w2)) * m + k3;
            }
        }
        let inv = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| mul[a * size + b] == 0)
                    .expect("inverse exists")
            })
            .collect();
        Heis { g, m, mul, inv }
    }

    pub fn size(&self) -> usize {
        self.inv.len()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b]
    }

    /// `(1/M) Σ_h F(h) G(h⁻¹ h₀)`.
    pub fn convolve(&self, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        let scale = 1.0 / self.m as f64;
        (0..n)
            .map(|h0| {
                (0..n)
                    .map(|h| f[h] * g[self.op(self.inv[h], h0)])
                    .sum::<Complex64>()
                    * scale
            })
            .collect()
    }
}

pub fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut c = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    max_diff(a, b) / max_abs(b).max(f64::MIN_POSITIVE)
}

pub fn lp(v: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        max_abs(v)
    } else {
        v.iter()
            .map(|z| z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

/// Circular ℓ¹ distance of an index of `Z_{n_1} x ...`.
pub fn circ_dist(g: &Grp, i: usize) -> usize {
    g.decode(i)
        .iter()
        .zip(&g.moduli)
        .map(|(&a, &n)| a.min(n - a))
        .sum()
}
