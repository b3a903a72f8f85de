//! Finite-dimensional F₂-algebras, bimodules, balanced tensor products and
//! intertwiner objects.
//!
//! Every algebra uses a basis whose first vector is the unit. A bimodule
//! `M: A → B` is a left `A`, right `B` module; its actions are stored as
//! matrices for each basis vector, with `R_{bb'} = R_{b'} R_b`.

use crate::f2::{combine, coordinates, nullspace, rref, tensor, Mat};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;
use thiserror::Error;
use volut_core::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoritaError {
    #[error("algebras do not match: {0}")]
    Mismatch(String),
    #[error("resource cap exceeded: {what} needs more than {limit}")]
    Cap { what: String, limit: usize },
}

/// Largest number of unknowns in one linear system.
pub const MAX_UNKNOWNS: usize = 64;

/// A unital associative algebra over F₂ with an involutive anti-automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    pub name: String,
    pub dim: usize,
    /// `mul[i][j]` is `e_i e_j`.
    pub mul: Vec<Vec<u64>>,
    pub star: Mat,
}

impl FinAlgebra {
    fn new(name: &str, dim: usize, mul: Vec<Vec<u64>>, star: Mat) -> Arc<FinAlgebra> {
        Arc::new(FinAlgebra { name: name.into(), dim, mul, star })
    }

    pub fn f2() -> Arc<FinAlgebra> {
        Self::new("F2", 1, vec![vec![1]], Mat::identity(1))
    }

    /// `F₂ × F₂` on the basis `1, e` with `e² = e`.
    pub fn f2xf2(swap: bool) -> Arc<FinAlgebra> {
        let star = if swap { Mat { rows: 2, cols: 2, data: vec![0b11, 0b10] } } else { Mat::identity(2) };
        Self::new(if swap { "F2xF2*swap" } else { "F2xF2" }, 2, vec![vec![0b01, 0b10], vec![0b10, 0b10]], star)
    }

    /// `F₄` on the basis `1, w` with `w² = w + 1`.
    pub fn f4(frobenius: bool) -> Arc<FinAlgebra> {
        let star = if frobenius { Mat { rows: 2, cols: 2, data: vec![0b11, 0b10] } } else { Mat::identity(2) };
        Self::new(if frobenius { "F4*frob" } else { "F4" }, 2, vec![vec![0b01, 0b10], vec![0b10, 0b11]], star)
    }

    /// `F₂[ε]/(ε²)` on the basis `1, ε`.
    pub fn dual_numbers() -> Arc<FinAlgebra> {
        Self::new("F2[e]", 2, vec![vec![0b01, 0b10], vec![0b10, 0b00]], Mat::identity(2))
    }

    /// A built-in algebra by its `name`.
    pub fn by_name(name: &str) -> Option<Arc<FinAlgebra>> {
        small_star_algebras().into_iter().find(|a| a.name == name)
    }

    pub fn unit(&self) -> u64 {
        1
    }

    pub fn mul(&self, u: u64, v: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.dim {
            if u >> i & 1 == 1 {
                for j in 0..self.dim {
                    if v >> j & 1 == 1 {
                        out ^= self.mul[i][j];
                    }
                }
            }
        }
        out
    }

    pub fn star(&self, u: u64) -> u64 {
        self.star.apply(u)
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mult(&self, a: u64) -> Mat {
        Mat::from_columns(self.dim, &(0..self.dim).map(|j| self.mul(a, 1 << j)).collect::<Vec<_>>())
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mult(&self, a: u64) -> Mat {
        Mat::from_columns(self.dim, &(0..self.dim).map(|j| self.mul(1 << j, a)).collect::<Vec<_>>())
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..1u64 << self.dim
    }
}

/// Checks associativity, the unit and the star laws.
pub fn check_algebra(a: &FinAlgebra) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = a.dim;
    for i in 0..n {
        r.require(a.mul(1, 1 << i) == 1 << i && a.mul(1 << i, 1) == 1 << i, "algebra-unit", || format!("e{i}"));
        for j in 0..n {
            let (x, y) = (1u64 << i, 1u64 << j);
            r.require(a.star(a.mul(x, y)) == a.mul(a.star(y), a.star(x)), "star-antimultiplicative", || format!("e{i} e{j}"));
            for k in 0..n {
                let z = 1u64 << k;
                r.require(a.mul(a.mul(x, y), z) == a.mul(x, a.mul(y, z)), "algebra-associative", || format!("e{i} e{j} e{k}"));
            }
        }
        r.require(a.star(a.star(1 << i)) == 1 << i, "star-involutive", || format!("e{i}"));
    }
    r.require(a.star(1) == 1, "star-unital", || "1".into());
    r
}

/// The algebras of dimension `≤ 2` up to isomorphism, with trivial star.
pub fn small_algebras() -> Vec<Arc<FinAlgebra>> {
    vec![FinAlgebra::f2(), FinAlgebra::f2xf2(false), FinAlgebra::f4(false), FinAlgebra::dual_numbers()]
}

/// The algebras of dimension `≤ 2` with every involution.
pub fn small_star_algebras() -> Vec<Arc<FinAlgebra>> {
    vec![
        FinAlgebra::f2(),
        FinAlgebra::f2xf2(false),
        FinAlgebra::f2xf2(true),
        FinAlgebra::f4(false),
        FinAlgebra::f4(true),
        FinAlgebra::dual_numbers(),
    ]
}

// ---------------------------------------------------------------------------
// Bimodules

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub left: Arc<FinAlgebra>,
    pub right: Arc<FinAlgebra>,
    pub dim: usize,
    pub lact: Vec<Mat>,
    pub ract: Vec<Mat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BimoduleJson {
    pub left: String,
    pub right: String,
    pub dim: usize,
    pub left_action: Vec<Vec<u64>>,
    pub right_action: Vec<Vec<u64>>,
}

impl Bimodule {
    pub fn left_action(&self, a: u64) -> Mat {
        sum_actions(&self.lact, a, self.dim)
    }

    pub fn right_action(&self, b: u64) -> Mat {
        sum_actions(&self.ract, b, self.dim)
    }

    /// `A` as an `A`-`A` bimodule.
    pub fn regular(a: &Arc<FinAlgebra>) -> Bimodule {
        Bimodule {
            left: a.clone(),
            right: a.clone(),
            dim: a.dim,
            lact: (0..a.dim).map(|i| a.left_mult(1 << i)).collect(),
            ract: (0..a.dim).map(|i| a.right_mult(1 << i)).collect(),
        }
    }

    /// Reads a bimodule over built-in algebras; the actions are not checked.
    pub fn from_json(j: &BimoduleJson) -> Result<Bimodule, MoritaError> {
        let alg = |n: &str| FinAlgebra::by_name(n).ok_or_else(|| MoritaError::Mismatch(format!("unknown algebra {n}")));
        let (left, right) = (alg(&j.left)?, alg(&j.right)?);
        let mats = |cols: &[Vec<u64>], k: usize, side: &str| -> Result<Vec<Mat>, MoritaError> {
            if cols.len() != k || cols.iter().any(|c| c.len() != j.dim || c.iter().any(|&v| v >> j.dim != 0)) {
                return Err(MoritaError::Mismatch(format!("{side} action has the wrong shape")));
            }
            Ok(cols.iter().map(|c| Mat::from_columns(j.dim, c)).collect())
        };
        let lact = mats(&j.left_action, left.dim, "left")?;
        let ract = mats(&j.right_action, right.dim, "right")?;
        Ok(Bimodule { left, right, dim: j.dim, lact, ract })
    }

    pub fn to_json(&self) -> BimoduleJson {
        BimoduleJson {
            left: self.left.name.clone(),
            right: self.right.name.clone(),
            dim: self.dim,
            left_action: self.lact.iter().map(Mat::columns).collect(),
            right_action: self.ract.iter().map(Mat::columns).collect(),
        }
    }

    fn conjugate(&self, g: &Mat, g_inv: &Mat) -> (Vec<Mat>, Vec<Mat>) {
        let c = |m: &Mat| g.mul(m).mul(g_inv);
        (self.lact.iter().map(c).collect(), self.ract.iter().map(c).collect())
    }
}

fn sum_actions(mats: &[Mat], x: u64, dim: usize) -> Mat {
    mats.iter().enumerate().filter(|(i, _)| x >> i & 1 == 1).fold(Mat::zero(dim, dim), |acc, (_, m)| acc.add(m))
}

pub fn check_bimodule(m: &Bimodule) -> ValidationReport {
    let mut r = ValidationReport::new();
    let (a, b) = (&m.left, &m.right);
    let id = Mat::identity(m.dim);
    r.require(m.lact.len() == a.dim && m.ract.len() == b.dim, "bimodule-shape", || "action count".into());
    if !r.is_ok() {
        return r;
    }
    r.require(m.left_action(1) == id, "bimodule-left-unit", || "1 acts nontrivially".into());
    r.require(m.right_action(1) == id, "bimodule-right-unit", || "1 acts nontrivially".into());
    for i in 0..a.dim {
        for j in 0..a.dim {
            r.require(m.left_action(a.mul[i][j]) == m.lact[i].mul(&m.lact[j]), "bimodule-left-associative", || {
                format!("e{i} e{j}")
            });
        }
        for j in 0..b.dim {
            r.require(m.lact[i].mul(&m.ract[j]) == m.ract[j].mul(&m.lact[i]), "bimodule-commuting", || format!("e{i}, e{j}"));
        }
    }
    for i in 0..b.dim {
        for j in 0..b.dim {
            r.require(m.right_action(b.mul[i][j]) == m.ract[j].mul(&m.ract[i]), "bimodule-right-associative", || {
                format!("e{i} e{j}")
            });
        }
    }
    r
}

/// Invertible `n × n` matrices.
pub fn general_linear(n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    let total = 1u64 << (n * n);
    for code in 0..total {
        let m = Mat { rows: n, cols: n, data: (0..n).map(|i| code >> (i * n) & ((1 << n) - 1)).collect() };
        if m.is_invertible() {
            out.push(m);
        }
    }
    out
}

/// Odometer step; false after the last tuple.
fn next_tuple(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn all_matrices(n: usize) -> Vec<Mat> {
    (0..1u64 << (n * n))
        .map(|code| Mat { rows: n, cols: n, data: (0..n).map(|i| code >> (i * n) & ((1 << n) - 1)).collect() })
        .collect()
}

/// Every `A`-`B` bimodule of dimension `≤ max_dim`, one per isomorphism class.
pub fn enumerate_bimodules(a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>, max_dim: usize) -> Vec<Bimodule> {
    let mut out = Vec::new();
    for dim in 0..=max_dim {
        let mats = all_matrices(dim);
        let gl: Vec<(Mat, Mat)> = general_linear(dim).into_iter().map(|g| {
            let inv = g.inverse().expect("invertible");
            (g, inv)
        }).collect();
        let free = (a.dim - 1) + (b.dim - 1);
        let mut seen: HashSet<(Vec<Mat>, Vec<Mat>)> = HashSet::new();
        let mut choice = vec![0usize; free];
        loop {
            let mut lact = vec![Mat::identity(dim)];
            lact.extend(choice[..a.dim - 1].iter().map(|&k| mats[k].clone()));
            let mut ract = vec![Mat::identity(dim)];
            ract.extend(choice[a.dim - 1..].iter().map(|&k| mats[k].clone()));
            let m = Bimodule { left: a.clone(), right: b.clone(), dim, lact, ract };
            if !seen.contains(&(m.lact.clone(), m.ract.clone())) && check_bimodule(&m).is_ok() {
                for (g, gi) in &gl {
                    seen.insert(m.conjugate(g, gi));
                }
                out.push(m);
            }
            if !next_tuple(&mut choice, mats.len()) {
                break;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Hom spaces

/// Linear equations in the entries of `F` (`q × p`, variable `r·p + s`)
/// expressing `F S = T F`.
fn commuting_equations(s: &Mat, t: &Mat, q: usize, p: usize, eqs: &mut Vec<u64>) {
    for r in 0..q {
        for c in 0..p {
            let mut e = 0u64;
            for k in 0..p {
                if s.get(k, c) {
                    e ^= 1 << (r * p + k);
                }
            }
            for k in 0..q {
                if t.get(r, k) {
                    e ^= 1 << (k * p + c);
                }
            }
            eqs.push(e);
        }
    }
}

pub fn mat_to_vec(m: &Mat) -> u64 {
    m.data.iter().enumerate().fold(0, |acc, (r, &row)| acc | row << (r * m.cols))
}

pub fn vec_to_mat(v: u64, rows: usize, cols: usize) -> Mat {
    let mask = if cols == 0 { 0 } else { (1u64 << cols) - 1 };
    Mat { rows, cols, data: (0..rows).map(|r| v >> (r * cols) & mask).collect() }
}

/// A space of linear maps `p → q` with a basis from [`nullspace`].
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub rows: usize,
    pub cols: usize,
    pub basis: Vec<Mat>,
    vectors: Vec<u64>,
    free: Vec<usize>,
}

impl HomSpace {
    fn solve(eqs: &[u64], rows: usize, cols: usize) -> Result<HomSpace, MoritaError> {
        if rows * cols > MAX_UNKNOWNS {
            return Err(MoritaError::Cap { what: "hom-space unknowns".into(), limit: MAX_UNKNOWNS });
        }
        let (vectors, free) = nullspace(eqs, rows * cols);
        let basis = vectors.iter().map(|&v| vec_to_mat(v, rows, cols)).collect();
        Ok(HomSpace { rows, cols, basis, vectors, free })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coordinates(&self, m: &Mat) -> Option<u64> {
        coordinates(&self.vectors, &self.free, mat_to_vec(m))
    }

    pub fn element(&self, coords: u64) -> Mat {
        vec_to_mat(combine(&self.vectors, coords), self.rows, self.cols)
    }
}

/// Bimodule maps `X → Y`.
pub fn hom_space(x: &Bimodule, y: &Bimodule) -> Result<HomSpace, MoritaError> {
    if x.left != y.left || x.right != y.right {
        return Err(MoritaError::Mismatch("hom between bimodules over different algebras".into()));
    }
    let mut eqs = Vec::new();
    for (s, t) in x.lact.iter().zip(&y.lact).chain(x.ract.iter().zip(&y.ract)) {
        commuting_equations(s, t, y.dim, x.dim, &mut eqs);
    }
    HomSpace::solve(&eqs, y.dim, x.dim)
}

// ---------------------------------------------------------------------------
// Balanced tensor

/// `M ⊗_B N` as a quotient of the full tensor product.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: Bimodule,
    /// Projection from the full tensor (basis `e_{i·n+j}`) onto the quotient.
    pub proj: Mat,
    /// Reduced relations spanning the kernel.
    pub relations: Vec<u64>,
    /// Full coordinates kept as the quotient basis.
    pub kept: Vec<usize>,
    pub full_dim: usize,
}

impl Tensor {
    fn reduce(&self, mut x: u64, pivots: &[usize]) -> u64 {
        for (row, &p) in self.relations.iter().zip(pivots) {
            if x >> p & 1 == 1 {
                x ^= row;
            }
        }
        x
    }
}

pub(crate) fn quotient(relations: &[u64], full: usize) -> (Vec<u64>, Vec<usize>, Vec<usize>, Mat) {
    let (red, pivots) = rref(relations, full);
    let kept: Vec<usize> = (0..full).filter(|c| !pivots.contains(c)).collect();
    let proj_cols: Vec<u64> = (0..full)
        .map(|t| {
            let mut x = 1u64 << t;
            for (row, &p) in red.iter().zip(&pivots) {
                if x >> p & 1 == 1 {
                    x ^= row;
                }
            }
            kept.iter().enumerate().fold(0, |acc, (s, &c)| acc | (x >> c & 1) << s)
        })
        .collect();
    let proj = Mat::from_columns(kept.len(), &proj_cols);
    (red, pivots, kept, proj)
}

/// Full-tensor operator `S ⊗ T` on the basis `e_{i·n+j}`.
pub fn kron(s: &Mat, t: &Mat) -> Mat {
    let (m, n) = (s.cols, t.cols);
    let cols: Vec<u64> = (0..m * n).map(|k| tensor(s.column(k / n), t.column(k % n), t.rows)).collect();
    Mat::from_columns(s.rows * t.rows, &cols)
}

/// `M ⊗_B N` for `M: A → B` and `N: B → C`.
pub fn balanced_tensor(m: &Bimodule, n: &Bimodule) -> Result<Tensor, MoritaError> {
    if m.right != n.left {
        return Err(MoritaError::Mismatch(format!("{} vs {}", m.right.name, n.left.name)));
    }
    let full = m.dim * n.dim;
    if full > MAX_UNKNOWNS {
        return Err(MoritaError::Cap { what: "tensor dimension".into(), limit: MAX_UNKNOWNS });
    }
    let mut rels = Vec::new();
    for k in 0..m.right.dim {
        for i in 0..m.dim {
            for j in 0..n.dim {
                rels.push(tensor(m.ract[k].column(i), 1 << j, n.dim) ^ tensor(1 << i, n.lact[k].column(j), n.dim));
            }
        }
    }
    let (relations, pivots, kept, proj) = quotient(&rels, full);
    let induce = |op: &Mat| -> Mat {
        let cols: Vec<u64> = kept.iter().map(|&t| proj.apply(op.apply(1 << t))).collect();
        Mat::from_columns(kept.len(), &cols)
    };
    let idn = Mat::identity(n.dim);
    let idm = Mat::identity(m.dim);
    let lact = m.lact.iter().map(|a| induce(&kron(a, &idn))).collect();
    let ract = n.ract.iter().map(|c| induce(&kron(&idm, c))).collect();
    let module = Bimodule { left: m.left.clone(), right: n.right.clone(), dim: kept.len(), lact, ract };
    let t = Tensor { module, proj, relations, kept, full_dim: full };
    debug_assert!(t.relations.iter().all(|&r| t.reduce(r, &pivots) == 0));
    Ok(t)
}

/// Checks that the induced actions are well defined on the quotient.
pub fn check_tensor(t: &Tensor, m: &Bimodule, n: &Bimodule) -> ValidationReport {
    let mut r = check_bimodule(&t.module);
    let idn = Mat::identity(n.dim);
    let idm = Mat::identity(m.dim);
    let ops: Vec<Mat> = m.lact.iter().map(|a| kron(a, &idn)).chain(n.ract.iter().map(|c| kron(&idm, c))).collect();
    for op in &ops {
        for &rel in &t.relations {
            r.require(t.proj.apply(op.apply(rel)) == 0, "tensor-well-defined", || "an action moves a relation".into());
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Intertwiner object

/// `M^N = Hom_C(N, M)` as an `A`-`B` bimodule for `M: A → C` and `N: B → C`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub module: Bimodule,
    pub space: HomSpace,
}

pub fn intertwiner_object(m: &Bimodule, n: &Bimodule) -> Result<Intertwiner, MoritaError> {
    if m.right != n.right {
        return Err(MoritaError::Mismatch("intertwiners need a common right algebra".into()));
    }
    let mut eqs = Vec::new();
    for (s, t) in n.ract.iter().zip(&m.ract) {
        commuting_equations(s, t, m.dim, n.dim, &mut eqs);
    }
    let space = HomSpace::solve(&eqs, m.dim, n.dim)?;
    let k = space.dim();
    let induce = |f: &dyn Fn(&Mat) -> Mat| -> Result<Mat, MoritaError> {
        let cols = space
            .basis
            .iter()
            .map(|b| space.coordinates(&f(b)).ok_or_else(|| MoritaError::Mismatch("action leaves the intertwiners".into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mat::from_columns(k, &cols))
    };
    let lact = m.lact.iter().map(|a| induce(&|f: &Mat| a.mul(f))).collect::<Result<_, _>>()?;
    let ract = n.lact.iter().map(|b| induce(&|f: &Mat| f.mul(b))).collect::<Result<_, _>>()?;
    let module = Bimodule { left: m.left.clone(), right: n.left.clone(), dim: k, lact, ract };
    Ok(Intertwiner { module, space })
}

// ---------------------------------------------------------------------------
// Closedness

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessCheck {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub naturality_cases: usize,
    pub report: ValidationReport,
}

/// The transpose `p ⊗ n ↦ Φ(p)(n)` of `Φ: P → M^N`, on the quotient basis.
fn transpose(phi: &Mat, mn: &Intertwiner, pn: &Tensor, m_dim: usize, n_dim: usize) -> (Mat, bool) {
    let p_dim = phi.cols;
    let full_cols: Vec<u64> = (0..p_dim * n_dim)
        .map(|t| {
            let (i, j) = (t / n_dim, t % n_dim);
            mn.space.element(phi.column(i)).column(j)
        })
        .collect();
    let full = Mat::from_columns(m_dim, &full_cols);
    let kills = pn.relations.iter().all(|&r| full.apply(r) == 0);
    let cols: Vec<u64> = pn.kept.iter().map(|&t| full.column(t)).collect();
    (Mat::from_columns(m_dim, &cols), kills)
}

/// `π ⊗_B N: P' ⊗_B N → P ⊗_B N`.
fn tensor_map(pi: &Mat, n_dim: usize, from: &Tensor, to: &Tensor) -> Mat {
    let op = kron(pi, &Mat::identity(n_dim));
    let cols: Vec<u64> = from.kept.iter().map(|&t| to.proj.apply(op.apply(1 << t))).collect();
    Mat::from_columns(to.module.dim, &cols)
}

/// Checks `Hom_{A,B}(P, M^N) ≅ Hom_{A,C}(P ⊗_B N, M)` by transposition and
/// its naturality along maps `P' → P` for each `P'` in `others`.
pub fn verify_morita_closedness(
    p: &Bimodule,
    n: &Bimodule,
    m: &Bimodule,
    others: &[Bimodule],
) -> Result<ClosednessCheck, MoritaError> {
    let mn = intertwiner_object(m, n)?;
    let pn = balanced_tensor(p, n)?;
    let lhs = hom_space(p, &mn.module)?;
    let rhs = hom_space(&pn.module, m)?;
    let mut report = ValidationReport::with_limit(20);
    let mut images = Vec::with_capacity(lhs.dim());
    let mut psis = Vec::with_capacity(lhs.dim());
    for (k, phi) in lhs.basis.iter().enumerate() {
        let (psi, kills) = transpose(phi, &mn, &pn, m.dim, n.dim);
        report.require(kills, "closedness-balanced", || format!("transpose of basis map {k} ignores the relations"));
        match rhs.coordinates(&psi) {
            Some(c) => images.push(c),
            None => report.push("closedness-equivariant", format!("transpose of basis map {k} is not a bimodule map")),
        }
        psis.push(psi);
    }
    report.require(crate::f2::rank(&images) == lhs.dim(), "closedness-injective", || "transposition has a kernel".into());
    report.require(lhs.dim() == rhs.dim(), "closedness-dimension", || {
        format!("dim Hom(P, M^N) = {} but dim Hom(P⊗N, M) = {}", lhs.dim(), rhs.dim())
    });
    let mut cases = 0;
    for q in others {
        if q.left != p.left || q.right != p.right {
            continue;
        }
        let maps = hom_space(q, p)?;
        if maps.dim() == 0 {
            continue;
        }
        let qn = balanced_tensor(q, n)?;
        for pi in &maps.basis {
            let pin = tensor_map(pi, n.dim, &qn, &pn);
            for (phi, psi) in lhs.basis.iter().zip(&psis) {
                cases += 1;
                let (pre, _) = transpose(&phi.mul(pi), &mn, &qn, m.dim, n.dim);
                report.require(pre == psi.mul(&pin), "closedness-natural", || "transposition does not commute with P' → P".into());
            }
        }
    }
    Ok(ClosednessCheck { lhs_dim: lhs.dim(), rhs_dim: rhs.dim(), naturality_cases: cases, report })
}

// ---------------------------------------------------------------------------
// Unit and associativity

/// The isomorphism `Θ` with `Θ ∘ U = T`, where `U` and `T` are surjections
/// from a common full tensor.
pub fn induced_iso(u: &Mat, t: &Mat) -> Option<Mat> {
    if u.rank() != u.rows || t.rank() != t.rows || u.rows != t.rows {
        return None;
    }
    let cols: Vec<u64> = (0..u.rows).map(|s| t.apply(u.solve(1 << s).expect("surjective"))).collect();
    let theta = Mat::from_columns(t.rows, &cols);
    (theta.mul(u) == *t && theta.is_invertible()).then_some(theta)
}

/// Checks that `theta: X → Y` is an isomorphism of bimodules.
pub fn check_bimodule_iso(theta: &Mat, x: &Bimodule, y: &Bimodule, law: &str) -> ValidationReport {
    let mut r = ValidationReport::new();
    r.require(theta.is_invertible(), &format!("{law}-invertible"), || "not invertible".into());
    for (s, t) in x.lact.iter().zip(&y.lact).chain(x.ract.iter().zip(&y.ract)) {
        r.require(theta.mul(s) == t.mul(theta), &format!("{law}-equivariant"), || "does not intertwine".into());
    }
    r
}

/// `A ⊗_A M → M`, `a ⊗ m ↦ a m`.
pub fn verify_left_unitor(m: &Bimodule) -> Result<ValidationReport, MoritaError> {
    let reg = Bimodule::regular(&m.left);
    let t = balanced_tensor(&reg, m)?;
    let act: Vec<u64> = (0..t.full_dim).map(|k| m.lact[k / m.dim].column(k % m.dim)).collect();
    let act = Mat::from_columns(m.dim, &act);
    Ok(iso_report(&t.proj, &act, &t.module, m, "left-unitor"))
}

/// `M ⊗_B B → M`, `m ⊗ b ↦ m b`.
pub fn verify_right_unitor(m: &Bimodule) -> Result<(ValidationReport, Option<Mat>, Tensor), MoritaError> {
    let reg = Bimodule::regular(&m.right);
    let t = balanced_tensor(m, &reg)?;
    let b = m.right.dim;
    let act: Vec<u64> = (0..t.full_dim).map(|k| m.ract[k % b].column(k / b)).collect();
    let act = Mat::from_columns(m.dim, &act);
    let theta = induced_iso(&t.proj, &act);
    Ok((iso_report(&t.proj, &act, &t.module, m, "right-unitor"), theta, t))
}

fn iso_report(u: &Mat, t: &Mat, x: &Bimodule, y: &Bimodule, law: &str) -> ValidationReport {
    match induced_iso(u, t) {
        Some(theta) => check_bimodule_iso(&theta, x, y, law),
        None => {
            let mut r = ValidationReport::new();
            r.push(&format!("{law}-kernel"), "the two quotients of the full tensor differ");
            r
        }
    }
}

/// `(M ⊗_B N) ⊗_C O ≅ M ⊗_B (N ⊗_C O)`, both as quotients of `M ⊗ N ⊗ O`.
pub fn verify_associator(m: &Bimodule, n: &Bimodule, o: &Bimodule) -> Result<ValidationReport, MoritaError> {
    let mn = balanced_tensor(m, n)?;
    let left = balanced_tensor(&mn.module, o)?;
    let no = balanced_tensor(n, o)?;
    let right = balanced_tensor(m, &no.module)?;
    let full = m.dim * n.dim * o.dim;
    let u_cols: Vec<u64> = (0..full)
        .map(|k| left.proj.apply(tensor(mn.proj.column(k / o.dim), 1 << (k % o.dim), o.dim)))
        .collect();
    let nod = n.dim * o.dim;
    let t_cols: Vec<u64> = (0..full)
        .map(|k| right.proj.apply(tensor(1 << (k / nod), no.proj.column(k % nod), no.module.dim)))
        .collect();
    let u = Mat::from_columns(left.module.dim, &u_cols);
    let t = Mat::from_columns(right.module.dim, &t_cols);
    Ok(iso_report(&u, &t, &left.module, &right.module, "associator"))
}

/// Totals of an exhaustive closedness and coherence sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MoritaSweep {
    pub algebra_triples: usize,
    pub bimodule_classes: usize,
    pub closedness_cases: usize,
    pub naturality_cases: usize,
    pub unitor_cases: usize,
    pub associator_cases: usize,
    pub report: ValidationReport,
}

/// For every triple `(A, B, C)` of algebras and every `P: A → B`,
/// `N: B → C`, `M: A → C` of dimension `≤ max_dim` (one per isomorphism
/// class), checks closedness with naturality along all `P' → P`, and the
/// unit and associativity isomorphisms of the balanced tensor.
pub fn morita_sweep(algebras: &[Arc<FinAlgebra>], max_dim: usize) -> Result<MoritaSweep, MoritaError> {
    let k = algebras.len();
    let mut mods: Vec<Vec<Bimodule>> = Vec::with_capacity(k * k);
    for a in algebras {
        for b in algebras {
            mods.push(enumerate_bimodules(a, b, max_dim));
        }
    }
    let mut out = MoritaSweep { bimodule_classes: mods.iter().map(Vec::len).sum(), ..Default::default() };
    out.report = ValidationReport::with_limit(50);
    for list in &mods {
        for m in list {
            out.unitor_cases += 1;
            out.report.merge(verify_left_unitor(m)?);
            out.report.merge(verify_right_unitor(m)?.0);
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                out.algebra_triples += 1;
                let (ps, ns, ms) = (&mods[a * k + b], &mods[b * k + c], &mods[a * k + c]);
                for p in ps {
                    for n in ns {
                        for m in ms {
                            let chk = verify_morita_closedness(p, n, m, ps)?;
                            out.closedness_cases += 1;
                            out.naturality_cases += chk.naturality_cases;
                            out.report.merge(chk.report);
                        }
                    }
                }
                for d in 0..k {
                    for m in ps {
                        for n in ns {
                            for o in &mods[c * k + d] {
                                out.associator_cases += 1;
                                out.report.merge(verify_associator(m, n, o)?);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_algebras_are_star_algebras() {
        for a in small_star_algebras() {
            assert!(check_algebra(&a).is_ok(), "{}", a.name);
        }
    }

    #[test]
    fn bimodule_counts_over_f2() {
        let f2 = FinAlgebra::f2();
        // vector spaces of dimension 0, 1, 2
        assert_eq!(enumerate_bimodules(&f2, &f2, 2).len(), 3);
        let e = FinAlgebra::dual_numbers();
        // F₂[ε]-modules of dim ≤ 2: 0, F₂, F₂², F₂[ε]
        assert_eq!(enumerate_bimodules(&e, &f2, 2).len(), 4);
        let f4 = FinAlgebra::f4(false);
        assert_eq!(enumerate_bimodules(&f4, &f2, 2).len(), 2);
    }

    #[test]
    fn regular_tensor_is_regular() {
        for a in small_algebras() {
            let r = Bimodule::regular(&a);
            let t = balanced_tensor(&r, &r).unwrap();
            assert_eq!(t.module.dim, a.dim);
            assert!(check_tensor(&t, &r, &r).is_ok());
            assert!(verify_left_unitor(&r).unwrap().is_ok());
            assert!(verify_right_unitor(&r).unwrap().0.is_ok());
        }
    }

    #[test]
    fn tensor_over_dual_numbers_kills_epsilon() {
        let e = FinAlgebra::dual_numbers();
        let f2 = FinAlgebra::f2();
        let mods = enumerate_bimodules(&f2, &e, 1);
        let simple = mods.iter().find(|m| m.dim == 1).unwrap();
        let left = enumerate_bimodules(&e, &f2, 1).into_iter().find(|m| m.dim == 1).unwrap();
        let t = balanced_tensor(simple, &left).unwrap();
        assert_eq!(t.module.dim, 1);
        let reg = Bimodule::regular(&e);
        let t2 = balanced_tensor(simple, &reg).unwrap();
        assert_eq!(t2.module.dim, 1);
    }

    #[test]
    fn closedness_for_regular_modules() {
        for a in small_algebras() {
            let r = Bimodule::regular(&a);
            let c = verify_morita_closedness(&r, &r, &r, &[r.clone()]).unwrap();
            assert!(c.report.is_ok(), "{}: {}", a.name, c.report);
            assert_eq!(c.lhs_dim, a.dim);
        }
    }

    #[test]
    fn intertwiners_into_the_regular_module() {
        for a in small_algebras() {
            let reg = Bimodule::regular(&a);
            for m in enumerate_bimodules(&a, &a, 2) {
                // right-linear maps A → M are determined by the image of 1
                let i = intertwiner_object(&m, &reg).unwrap();
                assert_eq!(i.module.dim, m.dim);
                assert!(check_bimodule(&i.module).is_ok());
                let h = hom_space(&i.module, &m).unwrap();
                assert!((0..1u64 << h.dim()).any(|c| check_bimodule_iso(&h.element(c), &i.module, &m, "iso").is_ok()));
                let own = intertwiner_object(&m, &m).unwrap();
                assert!(own.space.coordinates(&Mat::identity(m.dim)).is_some());
            }
            let zero = enumerate_bimodules(&a, &a, 0).pop().unwrap();
            assert_eq!(intertwiner_object(&reg, &zero).unwrap().module.dim, 0);
        }
    }

    #[test]
    fn closedness_over_f2_counts_matrices() {
        let f2 = FinAlgebra::f2();
        let mods = enumerate_bimodules(&f2, &f2, 2);
        for p in &mods {
            for n in &mods {
                for m in &mods {
                    let c = verify_morita_closedness(p, n, m, &mods).unwrap();
                    assert!(c.report.is_ok());
                    assert_eq!(c.lhs_dim, p.dim * n.dim * m.dim);
                }
            }
        }
    }

    #[test]
    fn identity_transposes_to_evaluation() {
        let e = FinAlgebra::dual_numbers();
        let f2 = FinAlgebra::f2();
        for m in enumerate_bimodules(&f2, &e, 2) {
            for n in enumerate_bimodules(&e, &e, 2) {
                let mn = intertwiner_object(&m, &n).unwrap();
                let pn = balanced_tensor(&mn.module, &n).unwrap();
                let (psi, kills) = transpose(&Mat::identity(mn.module.dim), &mn, &pn, m.dim, n.dim);
                assert!(kills);
                for (s, &t) in pn.kept.iter().enumerate() {
                    let (k, j) = (t / n.dim, t % n.dim);
                    assert_eq!(psi.column(s), mn.space.basis[k].column(j));
                }
            }
        }
    }

    #[test]
    fn associator_on_mixed_modules() {
        let e = FinAlgebra::dual_numbers();
        let f2 = FinAlgebra::f2();
        for m in enumerate_bimodules(&f2, &e, 2) {
            for n in enumerate_bimodules(&e, &e, 2) {
                for o in enumerate_bimodules(&e, &f2, 2) {
                    let r = verify_associator(&m, &n, &o).unwrap();
                    assert!(r.is_ok(), "{r}");
                }
            }
        }
    }
}
