//! Linear algebra over F₂ with rows packed into `u64` bitmasks.

/// A matrix over F₂; row `i` is a bitmask over the columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        assert!(cols <= 64, "at most 64 columns");
        Mat { rows, cols, data: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.data[i] = 1 << i;
        }
        m
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[u64]) -> Mat {
        let mut m = Mat::zero(rows, cols.len());
        for (j, &v) in cols.iter().enumerate() {
            for i in 0..rows {
                if v >> i & 1 == 1 {
                    m.data[i] |= 1 << j;
                }
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn column(&self, j: usize) -> u64 {
        (0..self.rows).fold(0, |acc, i| acc | ((self.data[i] >> j & 1) << i))
    }

    pub fn columns(&self) -> Vec<u64> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn apply(&self, v: u64) -> u64 {
        self.data.iter().enumerate().fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() as u64) & 1) << i)
    }

    /// `self ∘ other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = 0;
            for k in 0..self.cols {
                if self.get(i, k) {
                    acc ^= other.data[k];
                }
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect() }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_columns(self.cols, &self.data)
    }

    pub fn rank(&self) -> usize {
        rank(&self.data)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Any `x` with `self · x = b`.
    pub fn solve(&self, b: u64) -> Option<u64> {
        let n = self.cols;
        let aug: Vec<u64> = self.data.iter().enumerate().map(|(i, &r)| r | ((b >> i & 1) << n)).collect();
        let (red, pivots) = rref(&aug, n + 1);
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = 0;
        for (row, &p) in red.iter().zip(&pivots) {
            x |= (row >> n & 1) << p;
        }
        Some(x)
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_invertible() {
            return None;
        }
        let cols: Vec<u64> = (0..self.rows).map(|i| self.solve(1 << i).expect("invertible")).collect();
        Some(Mat::from_columns(self.rows, &cols))
    }
}

pub fn rank(rows: &[u64]) -> usize {
    rref(rows, 64).1.len()
}

/// Reduced row echelon form and pivot columns; zero rows are dropped.
pub fn rref(rows: &[u64], ncols: usize) -> (Vec<u64>, Vec<usize>) {
    let mut m: Vec<u64> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols.min(64) {
        let Some(k) = (r..m.len()).find(|&k| m[k] >> c & 1 == 1) else { continue };
        m.swap(r, k);
        for k in 0..m.len() {
            if k != r && m[k] >> c & 1 == 1 {
                m[k] ^= m[r];
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : e · x = 0 for every equation e}` over `nvars` variables.
/// Each basis vector has exactly one free variable set, so the coordinates
/// of a solution are its bits at the free positions.
pub fn nullspace(eqs: &[u64], nvars: usize) -> (Vec<u64>, Vec<usize>) {
    let mask = if nvars == 64 { u64::MAX } else { (1u64 << nvars) - 1 };
    let eqs: Vec<u64> = eqs.iter().map(|e| e & mask).collect();
    let (red, pivots) = rref(&eqs, nvars);
    let free: Vec<usize> = (0..nvars).filter(|v| !pivots.contains(v)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut x = 1u64 << f;
            for (row, &p) in red.iter().zip(&pivots) {
                if row >> f & 1 == 1 {
                    x |= 1 << p;
                }
            }
            x
        })
        .collect();
    (basis, free)
}

/// Coordinates of `v` in a basis from [`nullspace`], if `v` lies in the span.
pub fn coordinates(basis: &[u64], free: &[usize], v: u64) -> Option<u64> {
    let mut acc = 0;
    let mut coords = 0;
    for (k, (&b, &f)) in basis.iter().zip(free).enumerate() {
        if v >> f & 1 == 1 {
            acc ^= b;
            coords |= 1 << k;
        }
    }
    (acc == v).then_some(coords)
}

/// Linear combination of `vectors` with coefficients given by `coords`.
pub fn combine(vectors: &[u64], coords: u64) -> u64 {
    vectors.iter().enumerate().filter(|(k, _)| coords >> k & 1 == 1).fold(0, |acc, (_, &v)| acc ^ v)
}

/// `u ⊗ v` in the basis `e_{i·n+j}`, for `v` of length `n`.
pub fn tensor(u: u64, v: u64, n: usize) -> u64 {
    let mut out = 0;
    for i in 0..64 - u.leading_zeros() as usize {
        if u >> i & 1 == 1 {
            out ^= v << (i * n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: usize, cols: usize, seed: &[u64]) -> Mat {
        let mask = (1u64 << cols) - 1;
        Mat { rows, cols, data: seed.iter().take(rows).map(|r| r & mask).collect() }
    }

    proptest! {
        #[test]
        fn rank_nullity(seed in proptest::collection::vec(any::<u64>(), 6), cols in 1usize..=8) {
            let m = mat(6, cols, &seed);
            let (basis, _) = nullspace(&m.data, cols);
            prop_assert_eq!(m.rank() + basis.len(), cols);
            for b in basis {
                prop_assert_eq!(m.apply(b), 0);
            }
        }

        #[test]
        fn solve_finds_preimages(seed in proptest::collection::vec(any::<u64>(), 5), x in any::<u64>()) {
            let m = mat(5, 5, &seed);
            let x = x & 31;
            let b = m.apply(x);
            let y = m.solve(b).unwrap();
            prop_assert_eq!(m.apply(y), b);
        }

        #[test]
        fn multiplication_matches_application(a in proptest::collection::vec(any::<u64>(), 4), b in proptest::collection::vec(any::<u64>(), 4), v in 0u64..16) {
            let (a, b) = (mat(4, 4, &a), mat(4, 4, &b));
            prop_assert_eq!(a.mul(&b).apply(v), a.apply(b.apply(v)));
            prop_assert_eq!(a.transpose().transpose(), a);
        }
    }

    #[test]
    fn inverse_of_upper_triangular() {
        let m = Mat { rows: 3, cols: 3, data: vec![0b111, 0b110, 0b100] };
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(3));
    }

    #[test]
    fn tensor_indexing() {
        assert_eq!(tensor(0b10, 0b01, 2), 1 << 2);
        assert_eq!(tensor(0b11, 0b11, 2), 0b1111);
    }
}
