//! Finite commutative quantales viewed as thin closed symmetric monoidal
//! categories.

use crate::closedmon::ClosedSymMonoidal;
use crate::fincat::{CatRef, Category, FiniteCategory, Mor, Obj};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantaleError {
    #[error("quantale law fails: {0}")]
    Law(String),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
}

/// A finite partial order with a commutative monoid `⊗` and residuation `⊸`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantale {
    pub name: String,
    pub labels: Vec<String>,
    /// `le[a][b]` iff `a ≤ b`.
    pub le: Vec<Vec<bool>>,
    pub tensor: Vec<Vec<usize>>,
    pub unit: usize,
    /// `residual[a][b] = a ⊸ b = max{c : c ⊗ a ≤ b}`.
    pub residual: Vec<Vec<usize>>,
}

/// JSON form of a custom quantale; the residuation is computed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantaleSpec {
    pub name: String,
    pub labels: Vec<String>,
    pub le: Vec<Vec<bool>>,
    pub tensor: Vec<Vec<usize>>,
    pub unit: usize,
}

impl Quantale {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Validates the tables and computes residuals.
    pub fn from_spec(s: QuantaleSpec) -> Result<Quantale, QuantaleError> {
        let n = s.labels.len();
        let law = |m: String| Err(QuantaleError::Law(m));
        if s.le.len() != n || s.le.iter().any(|r| r.len() != n) {
            return law("order table has the wrong shape".into());
        }
        if s.tensor.len() != n || s.tensor.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return law("tensor table has the wrong shape".into());
        }
        if s.unit >= n {
            return law("unit out of range".into());
        }
        let le = &s.le;
        let t = &s.tensor;
        for a in 0..n {
            if !le[a][a] {
                return law(format!("order not reflexive at {}", s.labels[a]));
            }
            for b in 0..n {
                if a != b && le[a][b] && le[b][a] {
                    return law(format!("order not antisymmetric at ({}, {})", s.labels[a], s.labels[b]));
                }
                if t[a][b] != t[b][a] {
                    return law(format!("tensor not commutative at ({}, {})", s.labels[a], s.labels[b]));
                }
                for c in 0..n {
                    if le[a][b] && le[b][c] && !le[a][c] {
                        return law("order not transitive".into());
                    }
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return law(format!("tensor not associative at ({a}, {b}, {c})"));
                    }
                    if le[a][b] && !le[t[a][c]][t[b][c]] {
                        return law(format!("tensor not monotone at ({a}, {b}, {c})"));
                    }
                }
            }
            if t[a][s.unit] != a {
                return law(format!("unit law fails at {}", s.labels[a]));
            }
        }
        let mut residual = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let cands: Vec<usize> = (0..n).filter(|&c| le[t[c][a]][b]).collect();
                let top = cands.iter().copied().find(|&m| cands.iter().all(|&c| le[c][m]));
                match top {
                    Some(m) => residual[a][b] = m,
                    None => {
                        return law(format!("no residual {} ⊸ {}", s.labels[a], s.labels[b]));
                    }
                }
            }
        }
        Ok(Quantale { name: s.name, labels: s.labels, le: s.le, tensor: s.tensor, unit: s.unit, residual })
    }

    fn chain_spec(name: &str, n: usize, tensor: impl Fn(usize, usize) -> usize, unit: usize) -> QuantaleSpec {
        QuantaleSpec {
            name: name.into(),
            labels: (0..n).map(|i| i.to_string()).collect(),
            le: (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect(),
            tensor: (0..n).map(|a| (0..n).map(|b| tensor(a, b)).collect()).collect(),
            unit,
        }
    }

    /// The three-element Łukasiewicz chain `0 < 1 < 2`, `a ⊗ b = max(0, a+b−2)`.
    pub fn lukasiewicz3() -> Quantale {
        let s = Self::chain_spec("lukasiewicz3", 3, |a, b| (a + b).saturating_sub(2), 2);
        Quantale::from_spec(s).expect("Łukasiewicz chain")
    }

    /// The Heyting chain `0 < … < n−1` with `⊗ = min`.
    pub fn heyting_chain(n: usize) -> Quantale {
        let s = Self::chain_spec(&format!("heyting_chain_{n}"), n, |a, b| a.min(b), n - 1);
        Quantale::from_spec(s).expect("Heyting chain")
    }

    pub fn bool2() -> Quantale {
        let mut q = Self::heyting_chain(2);
        q.name = "bool2".into();
        q
    }

    /// `0 < e < ⊤` with unit `e` and `⊤ ⊗ ⊤ = ⊤`.
    pub fn unit_below_top() -> Quantale {
        let t = |a: usize, b: usize| match (a, b) {
            (0, _) | (_, 0) => 0,
            (1, x) | (x, 1) => x,
            _ => 2,
        };
        let mut s = Self::chain_spec("unit_below_top", 3, t, 1);
        s.labels = vec!["0".into(), "e".into(), "T".into()];
        Quantale::from_spec(s).expect("unit below top")
    }

    pub fn preset(name: &str) -> Result<Quantale, QuantaleError> {
        match name {
            "lukasiewicz3" => Ok(Self::lukasiewicz3()),
            "bool2" => Ok(Self::bool2()),
            "unit_below_top" => Ok(Self::unit_below_top()),
            _ => {
                if let Some(n) = name.strip_prefix("heyting_chain_").and_then(|s| s.parse().ok()) {
                    if (2..=8).contains(&n) {
                        return Ok(Self::heyting_chain(n));
                    }
                }
                Err(QuantaleError::UnknownPreset(name.into()))
            }
        }
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }
}

/// A morphism `a ≤ b`.
pub type Arrow = (Obj, Obj);

pub struct QuantaleClosed {
    pub q: Quantale,
    cat: Arc<FiniteCategory>,
}

impl QuantaleClosed {
    pub fn new(q: Quantale) -> Self {
        let mut cat = FiniteCategory::thin(q.size(), |a, b| q.le[a][b]);
        let labels: Vec<String> = (0..cat.morphism_count())
            .map(|f| format!("{}<={}", q.labels[cat.dom(f)], q.labels[cat.cod(f)]))
            .collect();
        cat = cat.with_morphism_labels(labels);
        QuantaleClosed { q, cat: Arc::new(cat) }
    }

    pub fn category(&self) -> Arc<FiniteCategory> {
        self.cat.clone()
    }
}

impl ClosedSymMonoidal for QuantaleClosed {
    type M = Arrow;

    fn name(&self) -> String {
        self.q.name.clone()
    }
    fn window(&self) -> CatRef {
        self.cat.clone()
    }
    fn embed(&self, f: Mor) -> Arrow {
        (self.cat.dom(f), self.cat.cod(f))
    }
    fn locate(&self, m: &Arrow) -> Option<Mor> {
        let r = self.cat.hom(m.0, m.1);
        (!r.is_empty()).then_some(r.start)
    }
    fn dom(&self, m: &Arrow) -> Obj {
        m.0
    }
    fn cod(&self, m: &Arrow) -> Obj {
        m.1
    }
    fn id(&self, a: Obj) -> Arrow {
        (a, a)
    }
    fn compose(&self, g: &Arrow, f: &Arrow) -> Arrow {
        assert_eq!(f.1, g.0);
        (f.0, g.1)
    }
    fn is_iso(&self, m: &Arrow) -> bool {
        m.0 == m.1
    }
    fn hom_size(&self, a: Obj, b: Obj) -> Option<u64> {
        Some(self.q.le[a][b] as u64)
    }
    fn hom_elements(&self, a: Obj, b: Obj) -> Vec<Arrow> {
        if self.q.le[a][b] {
            vec![(a, b)]
        } else {
            vec![]
        }
    }
    fn random_mor<R: Rng>(&self, a: Obj, b: Obj, _rng: &mut R) -> Option<Arrow> {
        self.q.le[a][b].then_some((a, b))
    }
    fn unit(&self) -> Obj {
        self.q.unit
    }
    fn tensor(&self, a: Obj, b: Obj) -> Obj {
        self.q.tensor[a][b]
    }
    fn tensor_mor(&self, f: &Arrow, g: &Arrow) -> Arrow {
        (self.q.tensor[f.0][g.0], self.q.tensor[f.1][g.1])
    }
    fn braiding(&self, a: Obj, b: Obj) -> Arrow {
        let x = self.q.tensor[a][b];
        (x, x)
    }
    fn ihom(&self, a: Obj, b: Obj) -> Obj {
        self.q.residual[a][b]
    }
    fn ev(&self, a: Obj, b: Obj) -> Arrow {
        (self.q.tensor[self.q.residual[a][b]][a], b)
    }
    fn psi_inv(&self, c: Obj, a: Obj, b: Obj, _g: &Arrow) -> Arrow {
        (c, self.q.residual[a][b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedmon::{
        build_lax_volutive, build_volutive_dualizing, check_closed_structure, oplax_monoidality, ClosedCheckOptions,
        ClosedError,
    };
    use crate::volutive::{check_volutive, Kind};
    use rand::SeedableRng;

    #[test]
    fn residuation_tables() {
        let q = Quantale::lukasiewicz3();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(q.residual[a][b], (2 - a + b).min(2));
            }
        }
    }

    #[test]
    fn presets_are_closed() {
        for name in ["lukasiewicz3", "bool2", "heyting_chain_4", "unit_below_top"] {
            let m = QuantaleClosed::new(Quantale::preset(name).unwrap());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            let r = check_closed_structure(&m, ClosedCheckOptions::default(), &mut rng);
            assert!(r.is_ok(), "{name}: {r}");
            assert!(check_volutive(&build_lax_volutive(&m).unwrap()).is_ok());
        }
    }

    #[test]
    fn mv_chain_dualizing_is_strict() {
        let m = QuantaleClosed::new(Quantale::lukasiewicz3());
        let v = build_volutive_dualizing(&m, 0).unwrap();
        assert_eq!(v.kind, Kind::Strict);
        assert_eq!(v.d.obj, vec![2, 1, 0]);
        assert!(check_volutive(&v).is_ok());
        assert!(matches!(build_volutive_dualizing(&m, 2), Err(ClosedError::NotDualizing { .. })));
    }

    #[test]
    fn heyting_dual_is_constant_top() {
        let m = QuantaleClosed::new(Quantale::heyting_chain(4));
        let v = build_lax_volutive(&m).unwrap();
        assert!(v.d.obj.iter().all(|&x| x == 3));
    }

    #[test]
    fn non_invertible_phi() {
        let m = QuantaleClosed::new(Quantale::unit_below_top());
        let data = oplax_monoidality(&m);
        let bad: Vec<_> = data.phi.iter().filter(|p| !p.invertible).collect();
        assert!(bad.iter().any(|p| p.a == 0 && p.b == 2));
    }

    #[test]
    fn bad_tables_are_named() {
        let mut s = Quantale::chain_spec("bad", 2, |a, b| a.max(b), 0);
        s.tensor[0][1] = 0;
        assert!(matches!(Quantale::from_spec(s), Err(QuantaleError::Law(_))));
    }
}
