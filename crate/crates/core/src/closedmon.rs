//! Closed symmetric monoidal structures in strict skeletal form, and the lax
//! volutive structure they induce.
//!
//! Objects of a structure are unbounded ids (a finite set size, a dimension,
//! a lattice element) and morphisms are values of an associated type. A
//! finite window category holds the objects `0..n` and embeds into the value
//! level; the induced volutive structure lives on the window, while internal
//! homs and ψ are free to leave it.

use crate::fincat::{CatRef, Category, FincatError, Functor, Mor, Obj, Variance};
use crate::report::ValidationReport;
use crate::volutive::{check_volutive_into, Kind, VolutiveStructure};
use rand::Rng;
use std::fmt::Debug;
use std::hash::Hash;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedError {
    #[error("object {0} leaves the finite window")]
    OutOfWindow(String),
    #[error("canonical map at {object} is not invertible; not a dualizing object")]
    NotDualizing { object: String },
    #[error("induced structure fails its checks: {0}")]
    Incoherent(String),
    #[error(transparent)]
    Fincat(#[from] FincatError),
}

pub trait ClosedSymMonoidal: Send + Sync {
    type M: Clone + PartialEq + Eq + Hash + Debug;

    fn name(&self) -> String;
    /// The finite window; its object `i` is the value-level object `i`.
    fn window(&self) -> CatRef;
    fn embed(&self, f: Mor) -> Self::M;
    fn locate(&self, m: &Self::M) -> Option<Mor>;

    fn dom(&self, m: &Self::M) -> Obj;
    fn cod(&self, m: &Self::M) -> Obj;
    fn id(&self, a: Obj) -> Self::M;
    fn compose(&self, g: &Self::M, f: &Self::M) -> Self::M;
    fn is_iso(&self, m: &Self::M) -> bool;
    /// `|hom(a, b)|`, or `None` when it does not fit in a `u64`.
    fn hom_size(&self, a: Obj, b: Obj) -> Option<u64>;
    /// All of `hom(a, b)`; only called on small hom-sets.
    fn hom_elements(&self, a: Obj, b: Obj) -> Vec<Self::M>;
    fn random_mor<R: Rng>(&self, a: Obj, b: Obj, rng: &mut R) -> Option<Self::M>;

    fn unit(&self) -> Obj;
    fn tensor(&self, a: Obj, b: Obj) -> Obj;
    fn tensor_mor(&self, f: &Self::M, g: &Self::M) -> Self::M;
    /// `β_{a,b}: a⊗b → b⊗a`.
    fn braiding(&self, a: Obj, b: Obj) -> Self::M;
    /// The internal hom `b^a`.
    fn ihom(&self, a: Obj, b: Obj) -> Obj;
    /// `ev_a^b: b^a ⊗ a → b`.
    fn ev(&self, a: Obj, b: Obj) -> Self::M;
    /// `ψ^{-1}: hom(c⊗a, b) → hom(c, b^a)`.
    fn psi_inv(&self, c: Obj, a: Obj, b: Obj, g: &Self::M) -> Self::M;

    /// `ψ(h) = ev ∘ (h ⊗ id_a)`.
    fn psi(&self, a: Obj, b: Obj, h: &Self::M) -> Self::M {
        self.compose(&self.ev(a, b), &self.tensor_mor(h, &self.id(a)))
    }

    fn window_objects(&self) -> usize {
        self.window().object_count()
    }
}

fn in_window<C: ClosedSymMonoidal + ?Sized>(m: &C, a: Obj) -> bool {
    a < m.window_objects()
}

/// `𝔡^a`.
pub fn dual_object_at<C: ClosedSymMonoidal>(m: &C, dd: Obj, a: Obj) -> Obj {
    m.ihom(a, dd)
}

/// `𝔡^X = ψ^{-1}(ev_b ∘ (id ⊗ X))` for `X: a → b`.
pub fn dual_morphism_at<C: ClosedSymMonoidal>(m: &C, dd: Obj, x: &C::M) -> C::M {
    let (a, b) = (m.dom(x), m.cod(x));
    let db = m.ihom(b, dd);
    let g = m.compose(&m.ev(b, dd), &m.tensor_mor(&m.id(db), x));
    m.psi_inv(db, a, dd, &g)
}

/// `1^X`.
pub fn dual_morphism<C: ClosedSymMonoidal>(m: &C, x: &C::M) -> C::M {
    dual_morphism_at(m, m.unit(), x)
}

/// `ψ^{-1}(ev_a ∘ β_{a,𝔡^a}): a → 𝔡^{𝔡^a}`.
pub fn eta_component_at<C: ClosedSymMonoidal>(m: &C, dd: Obj, a: Obj) -> C::M {
    let da = m.ihom(a, dd);
    let g = m.compose(&m.ev(a, dd), &m.braiding(a, da));
    m.psi_inv(a, da, dd, &g)
}

pub fn eta_component<C: ClosedSymMonoidal>(m: &C, a: Obj) -> C::M {
    eta_component_at(m, m.unit(), a)
}

/// Assembles `(𝔡^{(−)}, η)` on the window without checking it.
pub fn assemble_volutive<C: ClosedSymMonoidal>(
    m: &C,
    dd: Obj,
    kind: Kind,
) -> Result<VolutiveStructure, ClosedError> {
    let w = m.window();
    let n = w.object_count();
    let mut d_obj = Vec::with_capacity(n);
    for a in 0..n {
        let da = dual_object_at(m, dd, a);
        if !in_window(m, da) {
            return Err(ClosedError::OutOfWindow(format!("{}^{}", dd, a)));
        }
        d_obj.push(da);
    }
    let mut d_mor = Vec::with_capacity(w.morphism_count());
    for f in 0..w.morphism_count() {
        let x = dual_morphism_at(m, dd, &m.embed(f));
        let id = m
            .locate(&x)
            .ok_or_else(|| ClosedError::OutOfWindow(format!("dual of {}", w.morphism_label(f))))?;
        d_mor.push(id);
    }
    let mut eta = Vec::with_capacity(n);
    for a in 0..n {
        let e = eta_component_at(m, dd, a);
        eta.push(m.locate(&e).ok_or_else(|| ClosedError::OutOfWindow(format!("η at {a}")))?);
    }
    Ok(VolutiveStructure::new(
        w,
        Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor },
        eta,
        kind,
    ))
}

/// The lax structure `(1^{(−)}, η)`, re-verified before it is returned.
pub fn build_lax_volutive<C: ClosedSymMonoidal>(m: &C) -> Result<VolutiveStructure, ClosedError> {
    let v = assemble_volutive(m, m.unit(), Kind::Lax)?;
    let mut r = ValidationReport::with_limit(8);
    check_volutive_into(&v, Kind::Lax, &mut r);
    if !r.is_ok() {
        return Err(ClosedError::Incoherent(r.to_string()));
    }
    Ok(v)
}

/// The structure `(𝔡^{(−)}, η)` for a dualizing object, returned as strict
/// once every `a → 𝔡^{𝔡^a}` is checked invertible.
pub fn build_volutive_dualizing<C: ClosedSymMonoidal>(
    m: &C,
    dd: Obj,
) -> Result<VolutiveStructure, ClosedError> {
    let v = assemble_volutive(m, dd, Kind::Strict)?;
    let w = m.window();
    for a in 0..w.object_count() {
        if !w.is_iso(v.eta[a]) {
            return Err(ClosedError::NotDualizing { object: w.object_label(a) });
        }
    }
    let mut r = ValidationReport::with_limit(8);
    check_volutive_into(&v, Kind::Strict, &mut r);
    if !r.is_ok() {
        return Err(ClosedError::Incoherent(r.to_string()));
    }
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct PhiComponent<M> {
    pub a: Obj,
    pub b: Obj,
    /// `φ_{a,b}: 1^b ⊗ 1^a → 1^{a⊗b}`.
    pub morphism: M,
    pub invertible: bool,
}

#[derive(Clone, Debug)]
pub struct OplaxData<M> {
    pub phi: Vec<PhiComponent<M>>,
    /// `u = ψ^{-1}(id_1): 1 → 1^1`.
    pub u: M,
    pub u_invertible: bool,
}

/// `φ_{a,b} = ψ^{-1}(ev_b ∘ (id_{1^b} ⊗ ev_a ⊗ id_b))`.
pub fn phi_component<C: ClosedSymMonoidal>(m: &C, a: Obj, b: Obj) -> C::M {
    let one = m.unit();
    let (da, db) = (m.ihom(a, one), m.ihom(b, one));
    let mid = m.tensor_mor(&m.tensor_mor(&m.id(db), &m.ev(a, one)), &m.id(b));
    let g = m.compose(&m.ev(b, one), &mid);
    m.psi_inv(m.tensor(db, da), m.tensor(a, b), one, &g)
}

/// `φ` on every pair of window objects, and `u`.
pub fn oplax_monoidality<C: ClosedSymMonoidal>(m: &C) -> OplaxData<C::M> {
    let n = m.window_objects();
    let mut phi = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let morphism = phi_component(m, a, b);
            let invertible = m.is_iso(&morphism);
            phi.push(PhiComponent { a, b, morphism, invertible });
        }
    }
    let one = m.unit();
    let u = m.psi_inv(one, one, one, &m.id(one));
    let u_invertible = m.is_iso(&u);
    OplaxData { phi, u, u_invertible }
}

/// Checks `φ_{a,b} ∘ (1^g ⊗ 1^f) = 1^{f⊗g} ∘ φ_{a′,b′}` for sampled window
/// morphisms `f: a → a′`, `g: b → b′`.
pub fn check_oplax_naturality<C: ClosedSymMonoidal, R: Rng>(
    m: &C,
    samples: usize,
    rng: &mut R,
) -> ValidationReport {
    let mut r = ValidationReport::new();
    let w = m.window();
    let total = w.morphism_count();
    if total == 0 {
        return r;
    }
    for _ in 0..samples {
        let f = m.embed(rng.gen_range(0..total));
        let g = m.embed(rng.gen_range(0..total));
        let (a, a2, b, b2) = (m.dom(&f), m.cod(&f), m.dom(&g), m.cod(&g));
        let lhs = m.compose(
            &phi_component(m, a, b),
            &m.tensor_mor(&dual_morphism(m, &g), &dual_morphism(m, &f)),
        );
        let rhs = m.compose(&dual_morphism(m, &m.tensor_mor(&f, &g)), &phi_component(m, a2, b2));
        r.require(lhs == rhs, "phi-naturality", || format!("f = {f:?}, g = {g:?}"));
    }
    r
}

/// Checks `ev_a ∘ (1^X ⊗ id_a) = ev_b ∘ (id_{1^b} ⊗ X)` for every window morphism.
pub fn check_evaluation_naturality<C: ClosedSymMonoidal>(m: &C) -> ValidationReport {
    let mut r = ValidationReport::new();
    let one = m.unit();
    let w = m.window();
    for f in 0..w.morphism_count() {
        let x = m.embed(f);
        let (a, b) = (m.dom(&x), m.cod(&x));
        let db = m.ihom(b, one);
        let lhs = m.compose(&m.ev(a, one), &m.tensor_mor(&dual_morphism(m, &x), &m.id(a)));
        let rhs = m.compose(&m.ev(b, one), &m.tensor_mor(&m.id(db), &x));
        r.require(lhs == rhs, "evaluation-naturality", || w.morphism_label(f));
    }
    r
}

#[derive(Clone, Copy, Debug)]
pub struct ClosedCheckOptions {
    /// Largest hom-set enumerated when checking ψ bijectivity.
    pub psi_cap: u64,
    /// Random instances per sampled law.
    pub samples: usize,
}

impl Default for ClosedCheckOptions {
    fn default() -> Self {
        ClosedCheckOptions { psi_cap: 4096, samples: 200 }
    }
}

fn sample_window<C: ClosedSymMonoidal, R: Rng>(m: &C, rng: &mut R) -> Option<C::M> {
    let w = m.window();
    (w.morphism_count() > 0).then(|| m.embed(rng.gen_range(0..w.morphism_count())))
}

/// Checks the strict monoidal, symmetry and closedness laws. Laws over all
/// window objects are exhaustive; laws quantified over morphisms are checked
/// on `samples` seeded draws; ψ-bijectivity is exhaustive on every triple
/// whose hom-sets have at most `psi_cap` elements, and reported as skipped
/// otherwise.
pub fn check_closed_structure<C: ClosedSymMonoidal, R: Rng>(
    m: &C,
    opts: ClosedCheckOptions,
    rng: &mut R,
) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = m.window_objects();
    let one = m.unit();
    for a in 0..n {
        r.require(m.tensor(one, a) == a && m.tensor(a, one) == a, "unit-objects", || a.to_string());
        for b in 0..n {
            let ab = m.tensor(a, b);
            r.require(ab == m.tensor(b, a), "symmetric-objects", || format!("({a}, {b})"));
            let beta = m.braiding(a, b);
            r.require(m.dom(&beta) == ab && m.cod(&beta) == m.tensor(b, a), "braiding-typing", || {
                format!("({a}, {b})")
            });
            let back = m.compose(&m.braiding(b, a), &beta);
            r.require(back == m.id(ab), "symmetry", || format!("β_{{{b},{a}}} ∘ β_{{{a},{b}}}"));
            let e = m.ev(a, b);
            r.require(
                m.dom(&e) == m.tensor(m.ihom(a, b), a) && m.cod(&e) == b,
                "ev-typing",
                || format!("ev at ({a}, {b})"),
            );
            for c in 0..n {
                r.require(
                    m.tensor(m.tensor(a, b), c) == m.tensor(a, m.tensor(b, c)),
                    "associativity-objects",
                    || format!("({a}, {b}, {c})"),
                );
                let hex_l = m.braiding(ab, c);
                let hex_r = m.compose(
                    &m.tensor_mor(&m.braiding(a, c), &m.id(b)),
                    &m.tensor_mor(&m.id(a), &m.braiding(b, c)),
                );
                r.require(hex_l == hex_r, "hexagon", || format!("({a}, {b}, {c})"));
                check_psi_triple(m, c, a, b, opts.psi_cap, &mut r);
            }
        }
    }
    for _ in 0..opts.samples {
        let (Some(f), Some(g), Some(h)) = (sample_window(m, rng), sample_window(m, rng), sample_window(m, rng))
        else {
            break;
        };
        let (a, b) = (m.dom(&f), m.cod(&f));
        let (c, e) = (m.dom(&g), m.cod(&g));
        // unit and associativity on morphisms
        r.require(m.tensor_mor(&m.id(one), &f) == f && m.tensor_mor(&f, &m.id(one)) == f, "unit-morphisms", || {
            format!("{f:?}")
        });
        let lhs = m.tensor_mor(&m.tensor_mor(&f, &g), &h);
        let rhs = m.tensor_mor(&f, &m.tensor_mor(&g, &h));
        r.require(lhs == rhs, "associativity-morphisms", || format!("{f:?}, {g:?}, {h:?}"));
        // braiding naturality
        let lhs = m.compose(&m.braiding(b, e), &m.tensor_mor(&f, &g));
        let rhs = m.compose(&m.tensor_mor(&g, &f), &m.braiding(a, c));
        r.require(lhs == rhs, "braiding-naturality", || format!("{f:?}, {g:?}"));
        // tensor functoriality: (f2 ⊗ g2) ∘ (f ⊗ g) = (f2∘f) ⊗ (g2∘g)
        if let (Some(f2), Some(g2)) = (m.random_mor(b, a, rng), m.random_mor(e, c, rng)) {
            let lhs = m.compose(&m.tensor_mor(&f2, &g2), &m.tensor_mor(&f, &g));
            let rhs = m.tensor_mor(&m.compose(&f2, &f), &m.compose(&g2, &g));
            r.require(lhs == rhs, "tensor-functoriality", || format!("{f:?}, {g:?}"));
        }
        r.require(m.tensor_mor(&m.id(a), &m.id(c)) == m.id(m.tensor(a, c)), "tensor-identity", || {
            format!("({a}, {c})")
        });
        // ψ naturality: ψ(h∘k) = ψ(h)∘(k⊗id) and ψ^{-1}(y∘ψ(h)) = ψ^{-1}(y∘ev)∘h
        let x = m.cod(&h);
        let ex = m.ihom(c, x);
        if let Some(hh) = m.random_mor(a, ex, rng) {
            let k = random_into(m, a, rng);
            let lhs = m.psi(c, x, &m.compose(&hh, &k));
            let rhs = m.compose(&m.psi(c, x, &hh), &m.tensor_mor(&k, &m.id(c)));
            r.require(lhs == rhs, "psi-naturality-source", || format!("{hh:?}, {k:?}"));
            let y = random_from(m, x, rng);
            let z = m.cod(&y);
            let lhs = m.psi_inv(a, c, z, &m.compose(&y, &m.psi(c, x, &hh)));
            let post = m.psi_inv(ex, c, z, &m.compose(&y, &m.ev(c, x)));
            r.require(lhs == m.compose(&post, &hh), "psi-naturality-target", || {
                format!("{hh:?}, {y:?}")
            });
        }
    }
    r
}

/// A random window morphism into `a`.
fn random_into<C: ClosedSymMonoidal, R: Rng>(m: &C, a: Obj, rng: &mut R) -> C::M {
    let src = rng.gen_range(0..m.window_objects());
    m.random_mor(src, a, rng).unwrap_or_else(|| m.id(a))
}

/// A random window morphism out of `a`.
fn random_from<C: ClosedSymMonoidal, R: Rng>(m: &C, a: Obj, rng: &mut R) -> C::M {
    let tgt = rng.gen_range(0..m.window_objects());
    m.random_mor(a, tgt, rng).unwrap_or_else(|| m.id(a))
}

fn check_psi_triple<C: ClosedSymMonoidal>(
    m: &C,
    c: Obj,
    a: Obj,
    b: Obj,
    cap: u64,
    r: &mut ValidationReport,
) {
    let ba = m.ihom(a, b);
    let ca = m.tensor(c, a);
    let (left, right) = (m.hom_size(c, ba), m.hom_size(ca, b));
    r.require(left == right, "psi-cardinality", || {
        format!("|hom({c}, {b}^{a})| ≠ |hom({c}⊗{a}, {b})|")
    });
    match left {
        Some(s) if s <= cap => {
            let mut seen = std::collections::HashSet::with_capacity(s as usize);
            for h in m.hom_elements(c, ba) {
                let g = m.psi(a, b, &h);
                let ok = m.dom(&g) == ca && m.cod(&g) == b;
                r.require(ok, "psi-typing", || format!("({c}, {a}, {b})"));
                r.require(m.psi_inv(c, a, b, &g) == h, "psi-inverse", || format!("({c}, {a}, {b}): {h:?}"));
                seen.insert(g);
            }
            r.require(seen.len() as u64 == s, "psi-bijective", || format!("({c}, {a}, {b})"));
        }
        _ => r.skip(format!("psi bijectivity at ({c}, {a}, {b}): hom-set above cap")),
    }
}
