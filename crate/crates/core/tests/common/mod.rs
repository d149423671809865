//! Independent reference implementations used as test oracles. Nothing here
//! calls into the arithmetic of the crate under test: elements are plain
//! coefficient vectors reduced by schoolbook polynomial arithmetic.

#![allow(dead_code)]

use agq_core::linalg::Matrix;
use agq_core::{Felt, Field};

/// GF(p^e) as coefficient vectors modulo a monic polynomial (low degree first).
pub struct NaiveField {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl NaiveField {
    /// Borrows only the modulus of `field`; all arithmetic is recomputed.
    pub fn mirror(field: &Field) -> Self {
        NaiveField { p: field.characteristic(), e: field.degree(), modulus: field.modulus().to_vec() }
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.e)
    }

    fn coeffs(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut a = a;
        for _ in 0..self.e {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    fn index(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.index(&s)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self.coeffs(a).iter().map(|&u| (self.p - u) % self.p).collect();
        self.index(&s)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let e = self.e as usize;
        let mut prod = vec![0u32; 2 * e];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        for d in (e..2 * e).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            // subtract c * x^(d-e) * modulus
            for k in 0..=e {
                let t = (c * self.modulus[k]) % self.p;
                prod[d - e + k] = (prod[d - e + k] + self.p - t) % self.p;
            }
        }
        self.index(&prod[..e])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut acc = 1;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (1..self.order()).find(|&b| self.mul(a, b) == 1)
    }

    /// Gaussian elimination on index rows.
    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(rank, piv);
            let inv = self.inv(m[rank][c]).unwrap();
            let prow: Vec<u32> = m[rank].iter().map(|&v| self.mul(v, inv)).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[c] != 0 {
                    let f = row[c];
                    for (v, &pv) in row.iter_mut().zip(&prow) {
                        *v = self.add(*v, self.neg(self.mul(f, pv)));
                    }
                }
            }
            m[rank] = prow;
            rank += 1;
        }
        rank
    }

    /// Every codeword of the row space, by counting through all messages.
    pub fn codewords(&self, rows: &[Vec<u32>], n: usize) -> Vec<Vec<u32>> {
        let q = self.order() as u64;
        let k = rows.len() as u32;
        (0..q.pow(k))
            .map(|mut idx| {
                let mut w = vec![0u32; n];
                for row in rows {
                    let c = (idx % q) as u32;
                    idx /= q;
                    for (wi, &g) in w.iter_mut().zip(row) {
                        *wi = self.add(*wi, self.mul(c, g));
                    }
                }
                w
            })
            .collect()
    }

    pub fn weight_distribution(&self, rows: &[Vec<u32>], n: usize) -> Vec<u64> {
        let mut hist = vec![0u64; n + 1];
        for w in self.codewords(rows, n) {
            hist[w.iter().filter(|&&v| v != 0).count()] += 1;
        }
        hist
    }

    /// `sum a_i b_i^q` with `q = sqrt(order)`, the power taken by repeated multiplication.
    pub fn hermitian(&self, a: &[u32], b: &[u32]) -> u32 {
        let q = (self.order() as f64).sqrt().round() as u64;
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, self.pow(y, q))))
    }
}

pub fn indices(m: &Matrix) -> Vec<Vec<u32>> {
    m.to_indices()
}

pub fn felts(v: &[u32]) -> Vec<Felt> {
    v.iter().map(|&x| Felt::from_index(x)).collect()
}
