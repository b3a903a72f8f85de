//! Skeletal finite-dimensional vector spaces over a small finite field.
//!
//! Object `n` is `F_q^n`. A morphism `a → b` is a `b × a` matrix, encoded by
//! its columns as digits in base `q^b`, each column itself a base-`q` number.

use super::field::{Field, Mat};
use crate::closedmon::ClosedSymMonoidal;
use crate::fincat::{CatRef, Category, FincatError, Functor, Mor, Obj, Variance};
use crate::volutive::{Kind, VolutiveStructure};
use rand::Rng;
use std::ops::Range;
use std::sync::Arc;

/// Upper bound on the number of morphisms of a materialized FdVect window.
pub const FDVECT_MORPHISM_CAP: usize = 200_000;

pub struct FdVect {
    field: Field,
    max_dim: usize,
    hom_start: Vec<usize>,
    dom: Vec<u8>,
    cod: Vec<u8>,
    apply_start: Vec<usize>,
    apply: Vec<u16>,
    transpose: Vec<u32>,
}

fn pow(q: usize, e: usize) -> usize {
    q.pow(e as u32)
}

impl FdVect {
    pub fn new(q: u8, max_dim: usize) -> Result<FdVect, FincatError> {
        let field = Field::new(q).ok_or_else(|| FincatError::Malformed(format!("no field of order {q}")))?;
        let n = max_dim + 1;
        let qq = q as usize;
        let mut hom_start = Vec::with_capacity(n * n + 1);
        let mut acc = 0usize;
        for a in 0..n {
            for b in 0..n {
                hom_start.push(acc);
                acc = acc.saturating_add(
                    qq.checked_pow((a * b) as u32).unwrap_or(usize::MAX),
                );
                if acc > FDVECT_MORPHISM_CAP {
                    return Err(FincatError::Cap { what: format!("FdVect(F_{q}, ≤{max_dim})"), limit: FDVECT_MORPHISM_CAP });
                }
            }
        }
        hom_start.push(acc);
        let mut dom = Vec::with_capacity(acc);
        let mut cod = Vec::with_capacity(acc);
        for a in 0..n {
            for b in 0..n {
                for _ in 0..pow(qq, a * b) {
                    dom.push(a as u8);
                    cod.push(b as u8);
                }
            }
        }
        let mut v = FdVect {
            field,
            max_dim,
            hom_start,
            dom,
            cod,
            apply_start: Vec::new(),
            apply: Vec::new(),
            transpose: Vec::new(),
        };
        // apply tables: image of every vector code of F^a under every morphism a → b
        let mut apply_start = Vec::with_capacity(acc);
        let mut apply = Vec::new();
        for f in 0..acc {
            apply_start.push(apply.len());
            let m = v.decode(f);
            let a = m.cols;
            for x in 0..pow(qq, a) {
                let col = v.vec_decode(x, a);
                let mut out = vec![0u8; m.rows];
                for (j, &c) in col.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (i, o) in out.iter_mut().enumerate() {
                        *o = v.field.add(*o, v.field.mul(m.get(i, j), c));
                    }
                }
                apply.push(v.vec_encode(&out) as u16);
            }
        }
        let transpose = (0..acc).map(|f| v.encode(&v.decode(f).transpose()) as u32).collect();
        v.apply_start = apply_start;
        v.apply = apply;
        v.transpose = transpose;
        Ok(v)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    fn q(&self) -> usize {
        self.field.order() as usize
    }

    fn vec_decode(&self, mut x: usize, len: usize) -> Vec<u8> {
        let q = self.q();
        (0..len)
            .map(|_| {
                let d = (x % q) as u8;
                x /= q;
                d
            })
            .collect()
    }

    fn vec_encode(&self, v: &[u8]) -> usize {
        v.iter().rev().fold(0, |acc, &d| acc * self.q() + d as usize)
    }

    /// The matrix of morphism `f`.
    pub fn decode(&self, f: Mor) -> Mat {
        let (a, b) = (self.dom[f] as usize, self.cod[f] as usize);
        let mut code = f - self.hom_start[a * (self.max_dim + 1) + b];
        let base = pow(self.q(), b);
        let mut m = Mat::zero(b, a);
        for j in 0..a {
            let col = self.vec_decode(code % base, b);
            code /= base;
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    /// The morphism with matrix `m`, if its dimensions fit.
    pub fn encode(&self, m: &Mat) -> Mor {
        self.try_encode(m).expect("matrix dimensions exceed the window")
    }

    pub fn try_encode(&self, m: &Mat) -> Option<Mor> {
        let (a, b) = (m.cols, m.rows);
        if a > self.max_dim || b > self.max_dim {
            return None;
        }
        let base = pow(self.q(), b);
        let mut code = 0;
        for j in (0..a).rev() {
            let col: Vec<u8> = (0..b).map(|i| m.get(i, j)).collect();
            code = code * base + self.vec_encode(&col);
        }
        Some(self.hom_start[a * (self.max_dim + 1) + b] + code)
    }

    pub fn transpose_of(&self, f: Mor) -> Mor {
        self.transpose[f] as usize
    }

    /// `d(n) = n`, `d(X) = Xᵀ`, `η = id`.
    pub fn transpose_structure(self: &Arc<Self>) -> VolutiveStructure {
        let n = self.object_count();
        let d = Functor {
            variance: Variance::Contravariant,
            obj: (0..n).collect(),
            mor: self.transpose.iter().map(|&t| t as usize).collect(),
        };
        let eta = (0..n).map(|a| self.identity(a)).collect();
        VolutiveStructure::new(self.clone() as CatRef, d, eta, Kind::Strict)
    }
}

impl Category for FdVect {
    fn object_count(&self) -> usize {
        self.max_dim + 1
    }
    fn morphism_count(&self) -> usize {
        self.dom.len()
    }
    fn dom(&self, f: Mor) -> Obj {
        self.dom[f] as usize
    }
    fn cod(&self, f: Mor) -> Obj {
        self.cod[f] as usize
    }
    fn hom(&self, a: Obj, b: Obj) -> Range<Mor> {
        let i = a * (self.max_dim + 1) + b;
        self.hom_start[i]..self.hom_start[i + 1]
    }
    fn identity(&self, a: Obj) -> Mor {
        self.encode(&Mat::identity(a))
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let (a, b) = (self.dom[f] as usize, self.cod[f] as usize);
        if self.dom[g] as usize != b {
            return None;
        }
        let c = self.cod[g] as usize;
        let n = self.max_dim + 1;
        let q = self.q();
        let (bin, bout) = (pow(q, b), pow(q, c));
        let table = &self.apply[self.apply_start[g]..];
        let mut code = f - self.hom_start[a * n + b];
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..a {
            out += table[code % bin] as usize * scale;
            code /= bin;
            scale *= bout;
        }
        Some(self.hom_start[a * n + c] + out)
    }
    fn inverse(&self, f: Mor) -> Option<Mor> {
        self.decode(f).inverse(&self.field).map(|m| self.encode(&m))
    }
    fn object_label(&self, a: Obj) -> String {
        a.to_string()
    }
    fn morphism_label(&self, f: Mor) -> String {
        let m = self.decode(f);
        let rows: Vec<String> = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect::<String>())
            .collect();
        format!("{}>{}[{}]", m.cols, m.rows, rows.join(","))
    }
}

/// Closed structure: `a ⊗ b = ab` (Kronecker product), `b^a = ab` with
/// basis `E_{rs}` at index `r·a + s`.
pub struct VectClosed {
    pub cat: Arc<FdVect>,
}

impl VectClosed {
    pub fn new(cat: Arc<FdVect>) -> Self {
        VectClosed { cat }
    }

    fn k(&self) -> &Field {
        self.cat.field()
    }
}

impl ClosedSymMonoidal for VectClosed {
    type M = Mat;

    fn name(&self) -> String {
        format!("FdVect(F_{}, ≤{})", self.k().order(), self.cat.max_dim())
    }
    fn window(&self) -> CatRef {
        self.cat.clone()
    }
    fn embed(&self, f: Mor) -> Mat {
        self.cat.decode(f)
    }
    fn locate(&self, m: &Mat) -> Option<Mor> {
        self.cat.try_encode(m)
    }
    fn dom(&self, m: &Mat) -> Obj {
        m.cols
    }
    fn cod(&self, m: &Mat) -> Obj {
        m.rows
    }
    fn id(&self, a: Obj) -> Mat {
        Mat::identity(a)
    }
    fn compose(&self, g: &Mat, f: &Mat) -> Mat {
        g.mul(self.k(), f)
    }
    fn is_iso(&self, m: &Mat) -> bool {
        m.rows == m.cols && m.rank(self.k()) == m.rows
    }
    fn hom_size(&self, a: Obj, b: Obj) -> Option<u64> {
        (self.k().order() as u64).checked_pow(u32::try_from(a * b).ok()?)
    }
    fn hom_elements(&self, a: Obj, b: Obj) -> Vec<Mat> {
        let q = self.k().order() as usize;
        let total = pow(q, a * b);
        (0..total)
            .map(|mut code| {
                let mut m = Mat::zero(b, a);
                for x in m.data.iter_mut() {
                    *x = (code % q) as u8;
                    code /= q;
                }
                m
            })
            .collect()
    }
    fn random_mor<R: Rng>(&self, a: Obj, b: Obj, rng: &mut R) -> Option<Mat> {
        let q = self.k().order();
        let mut m = Mat::zero(b, a);
        for x in m.data.iter_mut() {
            *x = rng.gen_range(0..q);
        }
        Some(m)
    }
    fn unit(&self) -> Obj {
        1
    }
    fn tensor(&self, a: Obj, b: Obj) -> Obj {
        a * b
    }
    fn tensor_mor(&self, f: &Mat, g: &Mat) -> Mat {
        f.kron(self.k(), g)
    }
    fn braiding(&self, a: Obj, b: Obj) -> Mat {
        let mut m = Mat::zero(a * b, a * b);
        for i in 0..a {
            for j in 0..b {
                m.set(j * a + i, i * b + j, 1);
            }
        }
        m
    }
    fn ihom(&self, a: Obj, b: Obj) -> Obj {
        a * b
    }
    fn ev(&self, a: Obj, b: Obj) -> Mat {
        // basis (r·a + s)·a + t ↦ δ_{st} e_r
        let mut m = Mat::zero(b, a * b * a);
        for r in 0..b {
            for s in 0..a {
                m.set(r, (r * a + s) * a + s, 1);
            }
        }
        m
    }
    fn psi(&self, a: Obj, b: Obj, h: &Mat) -> Mat {
        let c = h.cols;
        let mut g = Mat::zero(b, c * a);
        for r in 0..b {
            for i in 0..c {
                for t in 0..a {
                    g.set(r, i * a + t, h.get(r * a + t, i));
                }
            }
        }
        g
    }
    fn psi_inv(&self, c: Obj, a: Obj, b: Obj, g: &Mat) -> Mat {
        let mut h = Mat::zero(a * b, c);
        for r in 0..b {
            for i in 0..c {
                for t in 0..a {
                    h.set(r * a + t, i, g.get(r, i * a + t));
                }
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedmon::{
        build_lax_volutive, check_closed_structure, dual_morphism, eta_component, oplax_monoidality,
        ClosedCheckOptions,
    };
    use crate::fincat::check_category_capped;
    use crate::report::ValidationReport;
    use crate::volutive::check_volutive;
    use rand::SeedableRng;

    #[test]
    fn counts() {
        let v = FdVect::new(2, 1).unwrap();
        assert_eq!(v.object_count(), 2);
        assert_eq!(v.hom(1, 1).len(), 2);
        assert_eq!(FdVect::new(2, 3).unwrap().morphism_count(), 689);
        assert_eq!(FdVect::new(3, 3).unwrap().morphism_count(), 21304);
    }

    #[test]
    fn encode_decode_and_category_laws() {
        let v = FdVect::new(3, 2).unwrap();
        for f in 0..v.morphism_count() {
            assert_eq!(v.encode(&v.decode(f)), f);
        }
        let r = check_category_capped(&v, usize::MAX, &mut ValidationReport::new());
        assert!(r.is_ok(), "{r}");
        // composition agrees with matrix multiplication
        let k = v.field().clone();
        for f in v.hom(2, 1) {
            for g in v.hom(1, 2) {
                assert_eq!(v.decode(v.compose(g, f)), v.decode(g).mul(&k, &v.decode(f)));
            }
        }
    }

    #[test]
    fn induced_structure_is_transpose() {
        let cat = Arc::new(FdVect::new(2, 2).unwrap());
        let m = VectClosed::new(cat.clone());
        let hand = cat.transpose_structure();
        assert!(check_volutive(&hand).is_ok());
        let built = build_lax_volutive(&m).unwrap();
        assert_eq!(built.d, hand.d);
        assert_eq!(built.eta, hand.eta);
        for f in 0..cat.morphism_count() {
            assert_eq!(dual_morphism(&m, &cat.decode(f)), cat.decode(f).transpose());
        }
        for a in 0..3 {
            assert_eq!(eta_component(&m, a), Mat::identity(a));
        }
    }

    #[test]
    fn closed_laws_and_rigidity() {
        let cat = Arc::new(FdVect::new(2, 2).unwrap());
        let m = VectClosed::new(cat);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let r = check_closed_structure(&m, ClosedCheckOptions::default(), &mut rng);
        assert!(r.is_ok(), "{r}");
        assert!(oplax_monoidality(&m).phi.iter().all(|p| p.invertible));
    }
}
