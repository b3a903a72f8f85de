//! Small finite fields by table, and dense matrices over them.

use serde::{Deserialize, Serialize};

/// A finite field of order `q` (a prime up to 7, or 4).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    q: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Field {
    pub fn new(q: u8) -> Option<Field> {
        let n = q as usize;
        let (add, mul): (Vec<u8>, Vec<u8>) = match q {
            2 | 3 | 5 | 7 => {
                let add = (0..n * n).map(|i| ((i / n + i % n) % n) as u8).collect();
                let mul = (0..n * n).map(|i| ((i / n) * (i % n) % n) as u8).collect();
                (add, mul)
            }
            4 => {
                // elements are polynomials c0 + c1·w over F2 with w² = w + 1
                let add = (0..16).map(|i| ((i / 4) ^ (i % 4)) as u8).collect();
                let mul = (0..16)
                    .map(|i| {
                        let (a, b) = (i / 4, i % 4);
                        let mut p = 0u8;
                        for k in 0..2 {
                            if b >> k & 1 == 1 {
                                p ^= (a as u8) << k;
                            }
                        }
                        if p & 4 != 0 {
                            p ^= 0b111;
                        }
                        p
                    })
                    .collect();
                (add, mul)
            }
            _ => return None,
        };
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..n)
            .map(|a| if a == 0 { 0 } else { (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8 })
            .collect();
        Some(Field { q, add, mul, neg, inv })
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }
}

/// A `rows × cols` matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self · other`.
    pub fn mul(&self, k: &Field, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let x = k.add(out.get(i, j), k.mul(a, other.get(l, j)));
                    out.set(i, j, x);
                }
            }
        }
        out
    }

    /// Kronecker product; row `i·r + k`, column `j·s + l`.
    pub fn kron(&self, k: &Field, other: &Mat) -> Mat {
        let (r, s) = (other.rows, other.cols);
        let mut out = Mat::zero(self.rows * r, self.cols * s);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for p in 0..r {
                    for q in 0..s {
                        out.set(i * r + p, j * s + q, k.mul(a, other.get(p, q)));
                    }
                }
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(u8) -> u8) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn rank(&self, k: &Field) -> usize {
        let mut m = self.clone();
        row_reduce(k, &mut m)
    }

    pub fn inverse(&self, k: &Field) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let r = row_reduce_cols(k, &mut aug, n);
        if r < n {
            return None;
        }
        let mut out = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }
}

/// Reduced row echelon form in place; returns the rank.
pub fn row_reduce(k: &Field, m: &mut Mat) -> usize {
    let c = m.cols;
    row_reduce_cols(k, m, c)
}

/// Row reduction pivoting only on the first `pivot_cols` columns.
fn row_reduce_cols(k: &Field, m: &mut Mat, pivot_cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..pivot_cols {
        let Some(p) = (rank..m.rows).find(|&i| m.get(i, col) != 0) else { continue };
        for j in 0..m.cols {
            let (a, b) = (m.get(p, j), m.get(rank, j));
            m.set(p, j, b);
            m.set(rank, j, a);
        }
        let inv = k.inv(m.get(rank, col)).unwrap();
        for j in 0..m.cols {
            let x = k.mul(inv, m.get(rank, j));
            m.set(rank, j, x);
        }
        for i in 0..m.rows {
            let f = m.get(i, col);
            if i == rank || f == 0 {
                continue;
            }
            for j in 0..m.cols {
                let x = k.sub(m.get(i, j), k.mul(f, m.get(rank, j)));
                m.set(i, j, x);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms() {
        for q in [2u8, 3, 4, 5, 7] {
            let k = Field::new(q).unwrap();
            for a in 0..q {
                assert_eq!(k.add(a, 0), a);
                assert_eq!(k.mul(a, 1), a);
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for c in 0..q {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                    }
                }
            }
        }
        assert!(Field::new(6).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let k = Field::new(3).unwrap();
        let m = Mat::from_rows(&[vec![1, 2], vec![0, 1]]);
        let i = m.inverse(&k).unwrap();
        assert_eq!(m.mul(&k, &i), Mat::identity(2));
        assert!(Mat::from_rows(&[vec![1, 2], vec![2, 1]]).inverse(&k).is_none());
    }
}
