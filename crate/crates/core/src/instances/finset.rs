//! Skeletal finite sets with cartesian product and exponential.
//!
//! Object `n` is `{0..n}`; a map `a → b` is encoded as `Σ f(t)·b^t`.

use crate::closedmon::ClosedSymMonoidal;
use crate::fincat::{CatRef, Category, FinMap, FincatError, Mor, Obj};
use rand::Rng;
use std::ops::Range;
use std::sync::Arc;

pub struct FinSetCat {
    max: usize,
    hom_start: Vec<usize>,
    dom: Vec<u8>,
    cod: Vec<u8>,
}

impl FinSetCat {
    pub fn new(max: usize) -> Result<FinSetCat, FincatError> {
        if max > 5 {
            return Err(FincatError::Cap { what: "FinSet window size".into(), limit: 5 });
        }
        let n = max + 1;
        let mut hom_start = Vec::with_capacity(n * n + 1);
        let (mut dom, mut cod) = (Vec::new(), Vec::new());
        for a in 0..n {
            for b in 0..n {
                hom_start.push(dom.len());
                for _ in 0..b.pow(a as u32) {
                    dom.push(a as u8);
                    cod.push(b as u8);
                }
            }
        }
        hom_start.push(dom.len());
        Ok(FinSetCat { max, hom_start, dom, cod })
    }

    pub fn decode(&self, f: Mor) -> FinMap {
        let (a, b) = (self.dom[f] as usize, self.cod[f] as usize);
        let mut code = f - self.hom_start[a * (self.max + 1) + b];
        let img = (0..a)
            .map(|_| {
                let x = code % b;
                code /= b;
                x as u32
            })
            .collect();
        FinMap { dom: a, cod: b, img }
    }

    pub fn try_encode(&self, m: &FinMap) -> Option<Mor> {
        if m.dom > self.max || m.cod > self.max {
            return None;
        }
        let code = m.img.iter().rev().fold(0, |acc, &x| acc * m.cod + x as usize);
        Some(self.hom_start[m.dom * (self.max + 1) + m.cod] + code)
    }

    pub fn encode(&self, m: &FinMap) -> Mor {
        self.try_encode(m).expect("map leaves the window")
    }
}

impl Category for FinSetCat {
    fn object_count(&self) -> usize {
        self.max + 1
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
        let i = a * (self.max + 1) + b;
        self.hom_start[i]..self.hom_start[i + 1]
    }
    fn identity(&self, a: Obj) -> Mor {
        self.encode(&FinMap::identity(a))
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.dom[g] != self.cod[f] {
            return None;
        }
        Some(self.encode(&self.decode(g).after(&self.decode(f))))
    }
    fn inverse(&self, f: Mor) -> Option<Mor> {
        let m = self.decode(f);
        if !m.is_bijective() {
            return None;
        }
        let mut img = vec![0u32; m.dom];
        for (i, &x) in m.img.iter().enumerate() {
            img[x as usize] = i as u32;
        }
        Some(self.encode(&FinMap { dom: m.cod, cod: m.dom, img }))
    }
    fn object_label(&self, a: Obj) -> String {
        a.to_string()
    }
    fn morphism_label(&self, f: Mor) -> String {
        let m = self.decode(f);
        let img: Vec<String> = m.img.iter().map(|x| x.to_string()).collect();
        format!("{}>{}[{}]", m.dom, m.cod, img.join(""))
    }
}

/// Cartesian closed structure: `(i, j) ↦ i·b + j`, `b^a` of size `b^a`.
pub struct FinSetClosed {
    pub cat: Arc<FinSetCat>,
}

impl FinSetClosed {
    pub fn new(cat: Arc<FinSetCat>) -> Self {
        FinSetClosed { cat }
    }
}

fn exp(b: usize, a: usize) -> usize {
    b.checked_pow(a as u32).expect("exponential object too large")
}

impl ClosedSymMonoidal for FinSetClosed {
    type M = FinMap;

    fn name(&self) -> String {
        format!("FinSet(≤{})", self.cat.max)
    }
    fn window(&self) -> CatRef {
        self.cat.clone()
    }
    fn embed(&self, f: Mor) -> FinMap {
        self.cat.decode(f)
    }
    fn locate(&self, m: &FinMap) -> Option<Mor> {
        self.cat.try_encode(m)
    }
    fn dom(&self, m: &FinMap) -> Obj {
        m.dom
    }
    fn cod(&self, m: &FinMap) -> Obj {
        m.cod
    }
    fn id(&self, a: Obj) -> FinMap {
        FinMap::identity(a)
    }
    fn compose(&self, g: &FinMap, f: &FinMap) -> FinMap {
        g.after(f)
    }
    fn is_iso(&self, m: &FinMap) -> bool {
        m.is_bijective()
    }
    fn hom_size(&self, a: Obj, b: Obj) -> Option<u64> {
        (b as u64).checked_pow(u32::try_from(a).ok()?)
    }
    fn hom_elements(&self, a: Obj, b: Obj) -> Vec<FinMap> {
        (0..exp(b, a))
            .map(|mut code| {
                let img = (0..a)
                    .map(|_| {
                        let x = code % b;
                        code /= b;
                        x as u32
                    })
                    .collect();
                FinMap { dom: a, cod: b, img }
            })
            .collect()
    }
    fn random_mor<R: Rng>(&self, a: Obj, b: Obj, rng: &mut R) -> Option<FinMap> {
        if b == 0 && a > 0 {
            return None;
        }
        Some(FinMap { dom: a, cod: b, img: (0..a).map(|_| rng.gen_range(0..b) as u32).collect() })
    }
    fn unit(&self) -> Obj {
        1
    }
    fn tensor(&self, a: Obj, b: Obj) -> Obj {
        a * b
    }
    fn tensor_mor(&self, f: &FinMap, g: &FinMap) -> FinMap {
        let mut img = Vec::with_capacity(f.dom * g.dom);
        for &x in &f.img {
            for &y in &g.img {
                img.push(x * g.cod as u32 + y);
            }
        }
        FinMap { dom: f.dom * g.dom, cod: f.cod * g.cod, img }
    }
    fn braiding(&self, a: Obj, b: Obj) -> FinMap {
        let mut img = vec![0u32; a * b];
        for i in 0..a {
            for j in 0..b {
                img[i * b + j] = (j * a + i) as u32;
            }
        }
        FinMap { dom: a * b, cod: a * b, img }
    }
    fn ihom(&self, a: Obj, b: Obj) -> Obj {
        exp(b, a)
    }
    fn ev(&self, a: Obj, b: Obj) -> FinMap {
        let e = exp(b, a);
        let mut img = Vec::with_capacity(e * a);
        for h in 0..e {
            let mut code = h;
            for _ in 0..a {
                img.push((code % b) as u32);
                code /= b;
            }
        }
        FinMap { dom: e * a, cod: b, img }
    }
    fn psi_inv(&self, c: Obj, a: Obj, b: Obj, g: &FinMap) -> FinMap {
        let img = (0..c)
            .map(|i| (0..a).rev().fold(0usize, |acc, t| acc * b + g.img[i * a + t] as usize) as u32)
            .collect();
        FinMap { dom: c, cod: exp(b, a), img }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedmon::{build_lax_volutive, check_closed_structure, oplax_monoidality, ClosedCheckOptions};
    use crate::fincat::check_category;
    use crate::volutive::{check_volutive, Kind};
    use rand::SeedableRng;

    #[test]
    fn finset_window() {
        let c = FinSetCat::new(3).unwrap();
        assert!(check_category(&c).is_ok());
        let m = FinSetClosed::new(Arc::new(c));
        assert_eq!(m.ihom(3, 2), 8);
        for a in 0..4 {
            assert_eq!(m.ihom(a, 1), 1);
        }
    }

    #[test]
    fn closed_and_constant_terminal() {
        let m = FinSetClosed::new(Arc::new(FinSetCat::new(3).unwrap()));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let r = check_closed_structure(&m, ClosedCheckOptions::default(), &mut rng);
        assert!(r.is_ok(), "{r}");
        let v = build_lax_volutive(&m).unwrap();
        assert!(v.d.obj.iter().all(|&x| x == 1));
        assert!(check_volutive(&v).is_ok());
        assert!(!check_volutive(&v.clone().with_kind(Kind::Strict)).is_ok());
        assert!(oplax_monoidality(&m).phi.iter().all(|p| p.invertible));
    }
}
