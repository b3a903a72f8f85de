//! Linear relations `V ⊆ H ⊕ H′` in reduced row-echelon form.
//!
//! Rows have `src + tgt` coordinates, source coordinates first. The inner
//! product is `⟨a, b⟩ = Σ a_i · conj(b_i)`.

use crate::scalar::{self, GQ};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A matrix as a list of rows.
pub type Matrix = Vec<Vec<GQ>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error(transparent)]
    Parse(#[from] scalar::ParseScalarError),
}

/// Reduced row-echelon form with zero rows dropped.
pub fn rref(mut rows: Matrix, width: usize) -> Matrix {
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = GQ::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in col..width {
                    let t = rows[r][j].clone() * f.clone();
                    rows[i][j] = rows[i][j].clone() - t;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

fn pivots(rows: &Matrix) -> Vec<usize> {
    rows.iter().map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect()
}

/// Basis of `{x : A x = 0}` for `A` with `width` columns.
pub fn nullspace(a: Matrix, width: usize) -> Matrix {
    let rows = rref(a, width);
    let piv = pivots(&rows);
    let mut out = Vec::new();
    for free in (0..width).filter(|c| !piv.contains(c)) {
        let mut v = vec![GQ::zero(); width];
        v[free] = GQ::one();
        for (row, &p) in rows.iter().zip(&piv) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

pub fn mat_mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(GQ::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// `T*` for an `rows × cols` matrix.
pub fn conj_transpose(t: &Matrix, rows: usize, cols: usize) -> Matrix {
    (0..cols).map(|j| (0..rows).map(|i| t[i][j].conj()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRelation {
    pub src: usize,
    pub tgt: usize,
    rows: Matrix,
}

impl LinearRelation {
    /// The span of `rows`, canonicalized.
    pub fn span(src: usize, tgt: usize, rows: Matrix) -> Result<Self, RelError> {
        if rows.iter().any(|r| r.len() != src + tgt) {
            return Err(RelError::Dim(format!("rows must have {} entries", src + tgt)));
        }
        Ok(LinearRelation { src, tgt, rows: rref(rows, src + tgt) })
    }

    fn span_unchecked(src: usize, tgt: usize, rows: Matrix) -> Self {
        LinearRelation { src, tgt, rows: rref(rows, src + tgt) }
    }

    pub fn basis(&self) -> &Matrix {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn zero(src: usize, tgt: usize) -> Self {
        LinearRelation { src, tgt, rows: Vec::new() }
    }

    pub fn full(src: usize, tgt: usize) -> Self {
        let w = src + tgt;
        Self::span_unchecked(src, tgt, (0..w).map(|i| unit(w, i)).collect())
    }

    /// `Δ_H = {(x, x)}`.
    pub fn diagonal(n: usize) -> Self {
        Self::span_unchecked(n, n, (0..n).map(|i| {
            let mut r = vec![GQ::zero(); 2 * n];
            r[i] = GQ::one();
            r[n + i] = GQ::one();
            r
        }).collect())
    }

    /// `Γ(T) = {(x, T x)}` for a `tgt × src` matrix `T`.
    pub fn graph(t: &Matrix, src: usize, tgt: usize) -> Result<Self, RelError> {
        if t.len() != tgt || t.iter().any(|r| r.len() != src) {
            return Err(RelError::Dim(format!("graph needs a {tgt}×{src} matrix")));
        }
        let rows = (0..src)
            .map(|i| {
                let mut r = unit(src + tgt, i);
                for j in 0..tgt {
                    r[src + j] = t[j][i].clone();
                }
                r
            })
            .collect();
        Ok(Self::span_unchecked(src, tgt, rows))
    }

    /// `V^rev = {(y, x) : (x, y) ∈ V}`.
    pub fn reverse(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r[self.src..].iter().chain(&r[..self.src]).cloned().collect())
            .collect();
        Self::span_unchecked(self.tgt, self.src, rows)
    }

    /// `W ∘ V` for `V: H → H′` (self) and `W: H′ → H″`.
    pub fn then(&self, w: &LinearRelation) -> Result<Self, RelError> {
        compose(w, self)
    }

    /// `V† = {(u, v) ∈ H′ ⊕ H : ⟨v, x⟩ = ⟨u, y⟩ for all (x, y) ∈ V}`.
    pub fn adjoint(&self) -> Self {
        let (m, n) = (self.src, self.tgt);
        let constraints: Matrix = self
            .rows
            .iter()
            .map(|r| {
                let (x, y) = r.split_at(m);
                y.iter().map(|c| -c.conj()).chain(x.iter().map(|c| c.conj())).collect()
            })
            .collect();
        Self::span_unchecked(n, m, nullspace(constraints, m + n))
    }

    /// Finite-dimensional subspaces are closed.
    pub fn closure(&self) -> Self {
        self.clone()
    }

    pub fn contains(&self, v: &[GQ]) -> bool {
        let mut x = v.to_vec();
        for (row, p) in self.rows.iter().zip(pivots(&self.rows)) {
            if !x[p].is_zero() {
                let f = x[p].clone();
                for j in 0..x.len() {
                    x[j] = x[j].clone() - row[j].clone() * f.clone();
                }
            }
        }
        x.iter().all(|c| c.is_zero())
    }

    /// `self ⊆ w`.
    pub fn included_in(&self, w: &LinearRelation) -> bool {
        self.src == w.src && self.tgt == w.tgt && self.rows.iter().all(|r| w.contains(r))
    }

    pub fn to_json(&self) -> RelationJson {
        RelationJson {
            dim_src: self.src,
            dim_tgt: self.tgt,
            basis: self.rows.iter().map(|r| r.iter().map(scalar::format).collect()).collect(),
        }
    }

    pub fn from_json(j: &RelationJson) -> Result<Self, RelError> {
        let rows = j
            .basis
            .iter()
            .map(|r| r.iter().map(|s| scalar::parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Matrix, _>>()?;
        Self::span(j.dim_src, j.dim_tgt, rows)
    }
}

fn unit(w: usize, i: usize) -> Vec<GQ> {
    let mut r = vec![GQ::zero(); w];
    r[i] = GQ::one();
    r
}

/// `W ∘ V = {(x, z) : ∃ y, (x, y) ∈ V, (y, z) ∈ W}`.
pub fn compose(w: &LinearRelation, v: &LinearRelation) -> Result<LinearRelation, RelError> {
    if v.tgt != w.src {
        return Err(RelError::Dim(format!("cannot compose {}→{} after {}→{}", w.src, w.tgt, v.src, v.tgt)));
    }
    let (m, n, p) = (v.src, v.tgt, w.tgt);
    let (k, l) = (v.rows.len(), w.rows.len());
    // α·y_V = β·y_W
    let a: Matrix = (0..n)
        .map(|r| {
            v.rows.iter().map(|row| row[m + r].clone()).chain(w.rows.iter().map(|row| -row[r].clone())).collect()
        })
        .collect();
    let null = if n == 0 { (0..k + l).map(|i| unit(k + l, i)).collect() } else { nullspace(a, k + l) };
    let rows = null
        .iter()
        .map(|c| {
            let mut out = vec![GQ::zero(); m + p];
            for (i, row) in v.rows.iter().enumerate() {
                for j in 0..m {
                    out[j] = out[j].clone() + c[i].clone() * row[j].clone();
                }
            }
            for (i, row) in w.rows.iter().enumerate() {
                for j in 0..p {
                    out[m + j] = out[m + j].clone() + c[k + i].clone() * row[n + j].clone();
                }
            }
            out
        })
        .collect();
    Ok(LinearRelation::span_unchecked(m, p, rows))
}

/// Serialized relation with exact string scalars.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RelationJson {
    pub dim_src: usize,
    pub dim_tgt: usize,
    pub basis: Vec<Vec<String>>,
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, real: bool) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| scalar::random(rng, real)).collect()).collect()
}

/// Span of a random number of random rows; sparse rows appear with
/// probability one half so that degenerate relations are common.
pub fn random_relation<R: Rng>(rng: &mut R, src: usize, tgt: usize, real: bool) -> LinearRelation {
    let w = src + tgt;
    let k = rng.gen_range(0..=w);
    let rows = (0..k)
        .map(|_| {
            let sparse = rng.gen_bool(0.5);
            (0..w)
                .map(|_| if sparse && rng.gen_bool(0.6) { GQ::zero() } else { scalar::random(rng, real) })
                .collect()
        })
        .collect();
    LinearRelation::span_unchecked(src, tgt, rows)
}

/// A random relation containing `v`.
pub fn random_superset<R: Rng>(rng: &mut R, v: &LinearRelation, real: bool) -> LinearRelation {
    let w = v.src + v.tgt;
    let extra = rng.gen_range(0..=w - v.dim().min(w));
    let mut rows = v.rows.clone();
    rows.extend(random_matrix(rng, extra, w, real));
    LinearRelation::span_unchecked(v.src, v.tgt, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_ints;

    #[test]
    fn diagonal_is_unit() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..20 {
            let v = random_relation(&mut rng, 2, 3, false);
            assert_eq!(compose(&LinearRelation::diagonal(3), &v).unwrap(), v);
            assert_eq!(compose(&v, &LinearRelation::diagonal(2)).unwrap(), v);
            assert_eq!(v.reverse().reverse(), v);
        }
    }

    #[test]
    fn graphs_and_adjoints() {
        let id: Matrix = (0..2).map(|i| (0..2).map(|j| if i == j { from_ints(1, 0) } else { from_ints(0, 0) }).collect()).collect();
        assert_eq!(LinearRelation::graph(&id, 2, 2).unwrap(), LinearRelation::diagonal(2));
        let t = vec![vec![from_ints(1, 1), from_ints(0, 0), from_ints(2, 0)], vec![from_ints(0, 0), from_ints(0, -1), from_ints(1, 0)]];
        let g = LinearRelation::graph(&t, 3, 2).unwrap();
        assert_eq!(g.dim(), 3);
        let ts = conj_transpose(&t, 2, 3);
        assert_eq!(g.adjoint(), LinearRelation::graph(&ts, 2, 3).unwrap());
        assert_eq!(LinearRelation::diagonal(3).adjoint(), LinearRelation::diagonal(3));
        assert_eq!(LinearRelation::zero(2, 1).adjoint(), LinearRelation::full(1, 2));
        assert!(LinearRelation::zero(3, 3).included_in(&g.then(&g.adjoint()).unwrap()));
    }

    #[test]
    fn zero_composite() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
        let w = random_relation(&mut rng, 2, 2, false);
        let z = LinearRelation::zero(1, 2);
        assert_eq!(compose(&w, &z).unwrap(), LinearRelation::zero(1, 2));
        assert!(compose(&z, &w).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let v = random_relation(&mut rng, 3, 2, false);
        let j = v.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: RelationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LinearRelation::from_json(&back).unwrap(), v);
    }
}
