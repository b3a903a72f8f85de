//! Lax and strict volutive structures `(d, η)` on finite categories, their
//! hermitian fixed points, the induced dagger category and the structural
//! constructions (shifts, functor categories, products, reflexive
//! subcategories, lax volutive functors and pushforward).
//!
//! `d` is stored as a contravariant endofunctor and `η` as the components of
//! a transformation `id → d∘d`, where `d∘d` is covariant.

use crate::fincat::{
    check_functor_into, check_nattrans_into, functor_category, product, CatRef, Category,
    CategoryJson, FincatError, FiniteCategory, Functor, FunctorCategory, Mor, NatTrans, Obj,
    Subcategory, Variance,
};
use crate::report::ValidationReport;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Strict,
    Lax,
}

impl std::str::FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Kind::Strict),
            "lax" => Ok(Kind::Lax),
            _ => Err(format!("unknown kind {s}")),
        }
    }
}

#[derive(Clone)]
pub struct VolutiveStructure {
    pub base: CatRef,
    pub d: Functor,
    pub eta: Vec<Mor>,
    pub kind: Kind,
}

impl std::fmt::Debug for VolutiveStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VolutiveStructure")
            .field("objects", &self.base.object_count())
            .field("morphisms", &self.base.morphism_count())
            .field("kind", &self.kind)
            .finish()
    }
}

impl VolutiveStructure {
    pub fn new(base: CatRef, d: Functor, eta: Vec<Mor>, kind: Kind) -> Self {
        VolutiveStructure { base, d, eta, kind }
    }

    pub fn d_obj(&self, a: Obj) -> Obj {
        self.d.obj[a]
    }

    pub fn d_mor(&self, f: Mor) -> Mor {
        self.d.mor[f]
    }

    /// `η` as a transformation `id → d∘d`.
    pub fn eta_nattrans(&self) -> NatTrans {
        NatTrans {
            source: Functor::identity(&*self.base),
            target: self.d.after(&self.d),
            components: self.eta.clone(),
        }
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    /// Objects whose unit component is invertible.
    pub fn reflexive_objects(&self) -> Vec<Obj> {
        (0..self.base.object_count()).filter(|&a| self.base.is_iso(self.eta[a])).collect()
    }

    pub fn to_json(&self) -> Result<VolutiveJson, FincatError> {
        let cat = FiniteCategory::materialize(&*self.base)?;
        let c = &*self.base;
        let objects = (0..c.object_count())
            .map(|a| (c.object_label(a), c.object_label(self.d.obj[a])))
            .collect();
        let morphisms = (0..c.morphism_count())
            .map(|f| (c.morphism_label(f), c.morphism_label(self.d.mor[f])))
            .collect();
        let eta = (0..c.object_count())
            .map(|a| (c.object_label(a), c.morphism_label(self.eta[a])))
            .collect();
        Ok(VolutiveJson {
            category: cat.to_json(),
            d: FunctorMapJson { objects, morphisms },
            eta,
            kind: self.kind,
        })
    }

    pub fn from_json(j: &VolutiveJson) -> Result<Self, FincatError> {
        let cat = FiniteCategory::from_json(&j.category)?;
        let obj = |s: &str| {
            cat.object_index(s).ok_or_else(|| FincatError::Malformed(format!("unknown object {s}")))
        };
        let obj_index: HashMap<String, Obj> =
            (0..cat.object_count()).map(|a| (cat.object_label(a), a)).collect();
        let mor_index: HashMap<String, Mor> =
            (0..cat.morphism_count()).map(|f| (cat.morphism_label(f), f)).collect();
        let mor = |s: &str| {
            mor_index
                .get(s)
                .copied()
                .ok_or_else(|| FincatError::Malformed(format!("unknown morphism {s}")))
        };
        let mut d_obj = vec![usize::MAX; cat.object_count()];
        for (k, v) in &j.d.objects {
            let a = *obj_index
                .get(k)
                .ok_or_else(|| FincatError::Malformed(format!("unknown object {k}")))?;
            d_obj[a] = obj(v)?;
        }
        let mut d_mor = vec![usize::MAX; cat.morphism_count()];
        for (k, v) in &j.d.morphisms {
            d_mor[mor(k)?] = mor(v)?;
        }
        let mut eta = vec![usize::MAX; cat.object_count()];
        for (k, v) in &j.eta {
            let a = *obj_index
                .get(k)
                .ok_or_else(|| FincatError::Malformed(format!("unknown object {k}")))?;
            eta[a] = mor(v)?;
        }
        if d_obj.contains(&usize::MAX) || d_mor.contains(&usize::MAX) {
            return Err(FincatError::Malformed("d is not defined everywhere".into()));
        }
        if eta.contains(&usize::MAX) {
            return Err(FincatError::Malformed("eta is missing a component".into()));
        }
        let d = Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor };
        Ok(VolutiveStructure { base: Arc::new(cat), d, eta, kind: j.kind })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorMapJson {
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolutiveJson {
    pub category: CategoryJson,
    pub d: FunctorMapJson,
    pub eta: BTreeMap<String, String>,
    pub kind: Kind,
}

/// Checks `v` against its declared kind.
pub fn check_volutive(v: &VolutiveStructure) -> ValidationReport {
    check_volutive_as(v, v.kind)
}

pub fn check_volutive_as(v: &VolutiveStructure, kind: Kind) -> ValidationReport {
    let mut r = ValidationReport::new();
    check_volutive_into(v, kind, &mut r);
    r
}

/// Stops at the first violation.
pub fn volutive_holds(v: &VolutiveStructure, kind: Kind) -> bool {
    let mut r = ValidationReport::with_limit(1);
    check_volutive_into(v, kind, &mut r);
    r.is_ok()
}

pub fn check_volutive_into(v: &VolutiveStructure, kind: Kind, r: &mut ValidationReport) {
    let c = &*v.base;
    if v.d.variance != Variance::Contravariant {
        r.push("d-variance", "d must be contravariant");
        return;
    }
    let mut fr = r.clone_empty();
    check_functor_into(c, c, &v.d, &mut fr);
    let bad_d = !fr.is_ok();
    r.merge_prefixed("d/", fr);
    if bad_d || r.full() {
        return;
    }
    if v.eta.len() != c.object_count() {
        r.push("eta-typing", "wrong number of components");
        return;
    }
    let mut er = r.clone_empty();
    check_nattrans_into(c, c, &v.eta_nattrans(), &mut er);
    let bad_eta = er.violations.iter().any(|x| x.law != "naturality");
    r.merge_prefixed("eta/", er);
    if bad_eta || r.full() {
        return;
    }
    for a in 0..c.object_count() {
        let da = v.d.obj[a];
        let lhs = c.try_compose(v.d.mor[v.eta[a]], v.eta[da]);
        r.require(lhs == Some(c.identity(da)), "lax-coherence", || {
            format!("d(η_{0}) ∘ η_d({0}) ≠ id at object {0}", c.object_label(a))
        });
        if r.full() {
            return;
        }
    }
    if kind == Kind::Strict {
        for a in 0..c.object_count() {
            let da = v.d.obj[a];
            r.require(c.is_iso(v.eta[a]), "eta-invertible", || {
                format!("η at {} is not invertible", c.object_label(a))
            });
            let back = c.try_compose(v.eta[da], v.d.mor[v.eta[a]]);
            r.require(back == Some(c.identity(v.d.obj[v.d.obj[da]])), "strict-coherence", || {
                format!("η_d({0}) ∘ d(η_{0}) ≠ id at object {0}", c.object_label(a))
            });
            if r.full() {
                return;
            }
        }
    }
}

/// The laws strict adds to lax: invertible η and `η_{da} ∘ d(η_a) = id`.
/// Together with a passing lax check this decides strictness.
pub fn check_strict_extras(v: &VolutiveStructure) -> ValidationReport {
    let c = &*v.base;
    let mut r = ValidationReport::new();
    for a in 0..c.object_count() {
        let da = v.d.obj[a];
        r.require(c.is_iso(v.eta[a]), "eta-invertible", || format!("η at {} is not invertible", c.object_label(a)));
        let back = c.try_compose(v.eta[da], v.d.mor[v.eta[a]]);
        r.require(back == Some(c.identity(v.d.obj[v.d.obj[da]])), "strict-coherence", || {
            format!("η_d({0}) ∘ d(η_{0}) ≠ id at object {0}", c.object_label(a))
        });
    }
    r
}

trait ReportExt {
    fn clone_empty(&self) -> ValidationReport;
    fn merge_prefixed(&mut self, prefix: &str, other: ValidationReport);
}

impl ReportExt for ValidationReport {
    fn clone_empty(&self) -> ValidationReport {
        match self.remaining() {
            Some(n) => ValidationReport::with_limit(n.max(1)),
            None => ValidationReport::new(),
        }
    }
    fn merge_prefixed(&mut self, prefix: &str, mut other: ValidationReport) {
        for v in &mut other.violations {
            v.law = format!("{prefix}{}", v.law);
        }
        self.merge(other);
    }
}

// ---------------------------------------------------------------------------
// Hermitian fixed points

/// A lax hermitian fixed point `(a, θ: a → d(a))` with `θ = d(θ) ∘ η_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HermPoint {
    pub object: Obj,
    pub theta: Mor,
    pub honest: bool,
}

pub fn is_hermitian(v: &VolutiveStructure, a: Obj, theta: Mor) -> bool {
    let c = &*v.base;
    c.dom(theta) == a
        && c.cod(theta) == v.d.obj[a]
        && c.try_compose(v.d.mor[theta], v.eta[a]) == Some(theta)
}

/// All lax hermitian fixed points, by object then by morphism id.
pub fn hermitian_points(v: &VolutiveStructure) -> Vec<HermPoint> {
    let c = &*v.base;
    let mut out = Vec::new();
    for a in 0..c.object_count() {
        for theta in c.hom(a, v.d.obj[a]) {
            if is_hermitian(v, a, theta) {
                out.push(HermPoint { object: a, theta, honest: c.is_iso(theta) });
            }
        }
    }
    out
}

/// `d(x) ∘ θ_q ∘ x = θ_p` for `x: p → q`.
pub fn is_lax_isometry(v: &VolutiveStructure, p: &HermPoint, q: &HermPoint, x: Mor) -> bool {
    let c = &*v.base;
    if c.dom(x) != p.object || c.cod(x) != q.object {
        return false;
    }
    c.try_compose(q.theta, x)
        .and_then(|y| c.try_compose(v.d.mor[x], y))
        .map_or(false, |z| z == p.theta)
}

/// Lax hermitian fixed points and lax isometries.
#[derive(Clone, Debug)]
pub struct LaxHerm {
    pub category: FiniteCategory,
    pub points: Vec<HermPoint>,
    /// Underlying base morphism of each morphism.
    pub base_mor: Vec<Mor>,
    index: HashMap<(Obj, Obj, Mor), Mor>,
}

impl LaxHerm {
    pub fn morphism_over(&self, p: Obj, q: Obj, x: Mor) -> Option<Mor> {
        self.index.get(&(p, q, x)).copied()
    }

    pub fn point_index(&self, p: &HermPoint) -> Option<Obj> {
        self.points.iter().position(|q| q.object == p.object && q.theta == p.theta)
    }
}

/// Builds `LaxHerm`. A composite of isometries that is not itself an isometry
/// is left missing, so `check_category` on the result re-verifies closure.
pub fn laxherm_category(v: &VolutiveStructure) -> Result<LaxHerm, FincatError> {
    laxherm_on(v, hermitian_points(v))
}

pub fn laxherm_on(v: &VolutiveStructure, points: Vec<HermPoint>) -> Result<LaxHerm, FincatError> {
    let c = &*v.base;
    let mut morphisms = Vec::new();
    let mut base_mor = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            for x in c.hom(p.object, q.object) {
                if is_lax_isometry(v, p, q, x) {
                    morphisms.push((i, j));
                    base_mor.push(x);
                }
            }
        }
    }
    let index: HashMap<(Obj, Obj, Mor), Mor> = morphisms
        .iter()
        .zip(&base_mor)
        .enumerate()
        .map(|(k, (&(i, j), &x))| ((i, j, x), k))
        .collect();
    let labels = points
        .iter()
        .map(|p| format!("({},{})", c.object_label(p.object), c.morphism_label(p.theta)))
        .collect();
    let ids: Result<Vec<Mor>, FincatError> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            index.get(&(i, i, c.identity(p.object))).copied().ok_or_else(|| {
                FincatError::Malformed(format!("identity at {} is not an isometry", c.object_label(p.object)))
            })
        })
        .collect();
    let mlabels: Vec<String> = base_mor
        .iter()
        .zip(&morphisms)
        .map(|(&x, &(i, j))| format!("{}:{}>{}", c.morphism_label(x), i, j))
        .collect();
    let category = FiniteCategory::build(labels, &morphisms, Some(mlabels), ids?, |g, f| {
        let h = c.try_compose(base_mor[g], base_mor[f])?;
        index.get(&(morphisms[f].0, morphisms[g].1, h)).copied()
    })?;
    Ok(LaxHerm { category, points, base_mor, index })
}

// ---------------------------------------------------------------------------
// Dagger categories

/// The dagger category of honest hermitian fixed points. Hom-sets are the
/// base hom-sets; nothing is copied.
pub struct DaggerCategory {
    pub structure: VolutiveStructure,
    pub points: Vec<HermPoint>,
    theta_inv: Vec<Mor>,
    view: Subcategory,
}

pub fn dagger_category(v: &VolutiveStructure) -> DaggerCategory {
    let points: Vec<HermPoint> = hermitian_points(v).into_iter().filter(|p| p.honest).collect();
    dagger_on(v, points)
}

/// Dagger category on a chosen list of honest points.
pub fn dagger_on(v: &VolutiveStructure, points: Vec<HermPoint>) -> DaggerCategory {
    let c = &*v.base;
    let theta_inv = points
        .iter()
        .map(|p| c.inverse(p.theta).expect("honest point has invertible θ"))
        .collect();
    let view = Subcategory::new(v.base.clone(), points.iter().map(|p| p.object).collect());
    DaggerCategory { structure: v.clone(), points, theta_inv, view }
}

impl DaggerCategory {
    /// `†(x) = θ_p^{-1} ∘ d(x) ∘ θ_q` for `x: p → q`.
    pub fn dagger(&self, x: Mor) -> Mor {
        let (p, q) = (self.view.dom(x), self.view.cod(x));
        let c = &*self.structure.base;
        let bx = self.view.to_base(x);
        let y = c.compose(self.structure.d.mor[bx], self.points[q].theta);
        let y = c.compose(self.theta_inv[p], y);
        self.view.from_base(q, p, y)
    }

    pub fn to_base(&self, x: Mor) -> Mor {
        self.view.to_base(x)
    }

    pub fn from_base(&self, p: Obj, q: Obj, x: Mor) -> Mor {
        self.view.from_base(p, q, x)
    }
}

impl Category for DaggerCategory {
    fn object_count(&self) -> usize {
        self.view.object_count()
    }
    fn morphism_count(&self) -> usize {
        self.view.morphism_count()
    }
    fn dom(&self, f: Mor) -> Obj {
        self.view.dom(f)
    }
    fn cod(&self, f: Mor) -> Obj {
        self.view.cod(f)
    }
    fn hom(&self, a: Obj, b: Obj) -> std::ops::Range<Mor> {
        self.view.hom(a, b)
    }
    fn identity(&self, a: Obj) -> Mor {
        self.view.identity(a)
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.view.try_compose(g, f)
    }
    fn inverse(&self, f: Mor) -> Option<Mor> {
        self.view.inverse(f)
    }
    fn object_label(&self, a: Obj) -> String {
        let p = &self.points[a];
        let c = &*self.structure.base;
        format!("({},{})", c.object_label(p.object), c.morphism_label(p.theta))
    }
    fn morphism_label(&self, f: Mor) -> String {
        self.view.morphism_label(f)
    }
}

/// `†x ∘ x = id`.
pub fn is_isometry(dc: &DaggerCategory, x: Mor) -> bool {
    dc.try_compose(dc.dagger(x), x) == Some(dc.identity(dc.dom(x)))
}

/// `†x ∘ x = id` and `x ∘ †x = id`.
pub fn is_unitary(dc: &DaggerCategory, x: Mor) -> bool {
    is_isometry(dc, x) && dc.try_compose(x, dc.dagger(x)) == Some(dc.identity(dc.cod(x)))
}

/// Checks the dagger laws. Identity-on-objects, `††=id` and `†(id)=id` are
/// checked on every morphism; contravariant functoriality on every composable
/// pair when there are at most `pair_cap` of them, otherwise on `samples`
/// seeded random pairs.
pub fn check_dagger(
    dc: &DaggerCategory,
    pair_cap: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> ValidationReport {
    let mut r = ValidationReport::new();
    let dag: Vec<Mor> = (0..dc.morphism_count()).map(|x| dc.dagger(x)).collect();
    for (x, &y) in dag.iter().enumerate() {
        r.require(dc.dom(y) == dc.cod(x) && dc.cod(y) == dc.dom(x), "dagger-objects", || {
            format!("†({}) has the wrong endpoints", dc.morphism_label(x))
        });
        r.require(dag[y] == x, "dagger-involution", || {
            format!("††({}) ≠ {}", dc.morphism_label(x), dc.morphism_label(x))
        });
    }
    for a in 0..dc.object_count() {
        let i = dc.identity(a);
        r.require(dag[i] == i, "dagger-identity", || format!("†(id) ≠ id at {}", dc.object_label(a)));
    }
    let n = dc.object_count();
    let out: Vec<usize> = (0..n).map(|a| dc.out_range(a).len()).collect();
    let pairs: usize = (0..dc.morphism_count()).map(|f| out[dc.cod(f)]).sum();
    let check_pair = |g: Mor, f: Mor, r: &mut ValidationReport| {
        let lhs = dag[dc.compose(g, f)];
        let rhs = dc.compose(dag[f], dag[g]);
        r.require(lhs == rhs, "dagger-functoriality", || {
            format!("†({} ∘ {})", dc.morphism_label(g), dc.morphism_label(f))
        });
    };
    if pairs <= pair_cap {
        for f in 0..dc.morphism_count() {
            for g in dc.out_range(dc.cod(f)) {
                check_pair(g, f, &mut r);
            }
        }
    } else if dc.morphism_count() > 0 {
        r.skip(format!("functoriality sampled: {samples} of {pairs} pairs"));
        for _ in 0..samples {
            let f = rng.gen_range(0..dc.morphism_count());
            let out = dc.out_range(dc.cod(f));
            let g = rng.gen_range(out);
            check_pair(g, f, &mut r);
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Constructions

/// `η ∘ … ∘ η` with `steps` factors: `a → d^{2·steps}(a)`.
pub fn iterated_eta(v: &VolutiveStructure, a: Obj, steps: usize) -> Mor {
    let c = &*v.base;
    let mut acc = c.identity(a);
    let mut x = a;
    for _ in 0..steps {
        acc = c.compose(v.eta[x], acc);
        x = v.d.obj[v.d.obj[x]];
    }
    acc
}

/// `d̄_k = d^{2k+1}` with unit the iterated `η` landing in `d̄_k²`.
pub fn shift_structure(v: &VolutiveStructure, k: usize) -> VolutiveStructure {
    let d = v.d.power(2 * k + 1);
    let eta = (0..v.base.object_count()).map(|a| iterated_eta(v, a, 2 * k + 1)).collect();
    VolutiveStructure { base: v.base.clone(), d, eta, kind: v.kind }
}

/// The structure on `Fun(C1, C2)`: `d̃(F) = d2 ∘ F ∘ d1`, with unit at `F`
/// having components `η2_{F(d1 d1 a)} ∘ F(η1_a)`.
pub fn functor_cat_volutive(
    v1: &VolutiveStructure,
    v2: &VolutiveStructure,
    cap: usize,
) -> Result<(FunctorCategory, VolutiveStructure), FincatError> {
    let (c1, c2) = (&*v1.base, &*v2.base);
    let fc = functor_category(c1, c2, cap)?;
    let cat = &fc.category;
    let mut d_obj = Vec::with_capacity(fc.functors.len());
    for f in &fc.functors {
        let g = v2.d.after(f).after(&v1.d);
        let i = fc
            .functor_id(&g)
            .ok_or_else(|| FincatError::Malformed("d̃(F) is not a functor".into()))?;
        d_obj.push(i);
    }
    let mut d_mor = Vec::with_capacity(cat.morphism_count());
    for t in 0..cat.morphism_count() {
        let (fi, gi) = (cat.dom(t), cat.cod(t));
        let comps: Vec<Mor> = (0..c1.object_count())
            .map(|a| v2.d.mor[fc.components[t][v1.d.obj[a]]])
            .collect();
        let m = fc
            .transformation_id(d_obj[gi], d_obj[fi], &comps)
            .ok_or_else(|| FincatError::Malformed("d̃(α) is not natural".into()))?;
        d_mor.push(m);
    }
    let mut eta = Vec::with_capacity(fc.functors.len());
    for (i, f) in fc.functors.iter().enumerate() {
        let comps: Vec<Mor> = (0..c1.object_count())
            .map(|a| {
                let dda = v1.d.obj[v1.d.obj[a]];
                c2.compose(v2.eta[f.obj[dda]], f.mor[v1.eta[a]])
            })
            .collect();
        let target = d_obj[d_obj[i]];
        let m = fc
            .transformation_id(i, target, &comps)
            .ok_or_else(|| FincatError::Malformed("η̃ is not natural".into()))?;
        eta.push(m);
    }
    let kind = if v1.kind == Kind::Strict && v2.kind == Kind::Strict { Kind::Strict } else { Kind::Lax };
    let vs = VolutiveStructure {
        base: Arc::new(cat.clone()),
        d: Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor },
        eta,
        kind,
    };
    Ok((fc, vs))
}

/// Componentwise structure on `C1 × C2`.
pub fn product_volutive(
    v1: &VolutiveStructure,
    v2: &VolutiveStructure,
) -> Result<VolutiveStructure, FincatError> {
    let p = product(&*v1.base, &*v2.base)?;
    let cat = &p.category;
    let d_obj = (0..cat.object_count())
        .map(|o| {
            let c = p.object_coords(o);
            p.object(&[v1.d.obj[c[0]], v2.d.obj[c[1]]])
        })
        .collect();
    let d_mor = (0..cat.morphism_count())
        .map(|f| {
            let c = p.morphism_coords(f);
            p.morphism(&[v1.d.mor[c[0]], v2.d.mor[c[1]]])
        })
        .collect();
    let eta = (0..cat.object_count())
        .map(|o| {
            let c = p.object_coords(o);
            p.morphism(&[v1.eta[c[0]], v2.eta[c[1]]])
        })
        .collect();
    let kind = if v1.kind == Kind::Strict && v2.kind == Kind::Strict { Kind::Strict } else { Kind::Lax };
    Ok(VolutiveStructure {
        base: Arc::new(p.category.clone()),
        d: Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor },
        eta,
        kind,
    })
}

/// The full subcategory on reflexive objects, which is strict.
pub fn reflexive_subcategory(v: &VolutiveStructure) -> Result<(Arc<Subcategory>, VolutiveStructure), FincatError> {
    let objs = v.reflexive_objects();
    let mut pos = vec![usize::MAX; v.base.object_count()];
    for (i, &a) in objs.iter().enumerate() {
        pos[a] = i;
    }
    let sub = Arc::new(Subcategory::new(v.base.clone(), objs.clone()));
    let mut d_obj = Vec::with_capacity(objs.len());
    for &a in &objs {
        let da = v.d.obj[a];
        if pos[da] == usize::MAX {
            return Err(FincatError::Malformed(format!(
                "d({}) is not reflexive",
                v.base.object_label(a)
            )));
        }
        d_obj.push(pos[da]);
    }
    let d_mor = (0..sub.morphism_count())
        .map(|f| {
            let (p, q) = (sub.dom(f), sub.cod(f));
            sub.from_base(d_obj[q], d_obj[p], v.d.mor[sub.to_base(f)])
        })
        .collect();
    let eta = (0..objs.len())
        .map(|p| sub.from_base(p, d_obj[d_obj[p]], v.eta[objs[p]]))
        .collect();
    let vs = VolutiveStructure {
        base: sub.clone(),
        d: Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor },
        eta,
        kind: Kind::Strict,
    };
    Ok((sub, vs))
}

// ---------------------------------------------------------------------------
// Lax volutive functors

/// A functor `F: C → C′` with components `α_a: F(d a) → d′(F a)` in `C′`.
#[derive(Clone, Debug)]
pub struct LaxVolFunctor {
    pub functor: Functor,
    pub alpha: Vec<Mor>,
}

impl LaxVolFunctor {
    pub fn identity(v: &VolutiveStructure) -> LaxVolFunctor {
        let c = &*v.base;
        LaxVolFunctor {
            functor: Functor::identity(c),
            alpha: (0..c.object_count()).map(|a| c.identity(v.d.obj[a])).collect(),
        }
    }
}

/// Checks functoriality, naturality of `α` and the compatibility
/// `α_{d a} ∘ F(η_a) = d′(α_a) ∘ η′_{F a}`.
pub fn check_laxvol_functor(
    v: &VolutiveStructure,
    w: &VolutiveStructure,
    lf: &LaxVolFunctor,
) -> ValidationReport {
    let (c, c2) = (&*v.base, &*w.base);
    let f = &lf.functor;
    let mut r = ValidationReport::new();
    if f.variance != Variance::Covariant {
        r.push("functor-variance", "F must be covariant");
        return r;
    }
    check_functor_into(c, c2, f, &mut r);
    if !r.is_ok() {
        return r;
    }
    if lf.alpha.len() != c.object_count() {
        r.push("alpha-typing", "wrong number of components");
        return r;
    }
    for a in 0..c.object_count() {
        let x = lf.alpha[a];
        let ok = x < c2.morphism_count()
            && c2.dom(x) == f.obj[v.d.obj[a]]
            && c2.cod(x) == w.d.obj[f.obj[a]];
        r.require(ok, "alpha-typing", || format!("α at {}", c.object_label(a)));
    }
    if !r.is_ok() {
        return r;
    }
    for m in 0..c.morphism_count() {
        let (a, b) = (c.dom(m), c.cod(m));
        let lhs = c2.try_compose(w.d.mor[f.mor[m]], lf.alpha[b]);
        let rhs = c2.try_compose(lf.alpha[a], f.mor[v.d.mor[m]]);
        r.require(lhs.is_some() && lhs == rhs, "alpha-naturality", || {
            format!("square at {}", c.morphism_label(m))
        });
    }
    for a in 0..c.object_count() {
        let da = v.d.obj[a];
        let lhs = c2.try_compose(lf.alpha[da], f.mor[v.eta[a]]);
        let rhs = c2.try_compose(w.d.mor[lf.alpha[a]], w.eta[f.obj[a]]);
        r.require(lhs.is_some() && lhs == rhs, "compatibility", || {
            format!("at object {}", c.object_label(a))
        });
    }
    r
}

/// Image of a lax hermitian fixed point: `(F a, α_a ∘ F(θ))`.
pub fn push_point(w: &VolutiveStructure, lf: &LaxVolFunctor, p: &HermPoint) -> HermPoint {
    let c2 = &*w.base;
    let theta = c2.compose(lf.alpha[p.object], lf.functor.mor[p.theta]);
    HermPoint { object: lf.functor.obj[p.object], theta, honest: c2.is_iso(theta) }
}

/// The induced functor `LaxHerm(v) → LaxHerm(w)`. Fails with a report when
/// `lf` is not a lax volutive functor or an image leaves `LaxHerm(w)`.
pub fn laxherm_pushforward(
    v: &VolutiveStructure,
    w: &VolutiveStructure,
    lf: &LaxVolFunctor,
    src: &LaxHerm,
    tgt: &LaxHerm,
) -> Result<Functor, ValidationReport> {
    let r = check_laxvol_functor(v, w, lf);
    if !r.is_ok() {
        return Err(r);
    }
    let mut r = ValidationReport::new();
    let mut obj = Vec::with_capacity(src.points.len());
    for p in &src.points {
        let q = push_point(w, lf, p);
        if !is_hermitian(w, q.object, q.theta) {
            r.push("pushforward-point", format!("image of {:?} is not hermitian", p));
            obj.push(usize::MAX);
            continue;
        }
        match tgt.point_index(&q) {
            Some(i) => obj.push(i),
            None => {
                r.push("pushforward-point", format!("image of {:?} missing from target", p));
                obj.push(usize::MAX);
            }
        }
    }
    if !r.is_ok() {
        return Err(r);
    }
    let mut mor = Vec::with_capacity(src.base_mor.len());
    for (k, &x) in src.base_mor.iter().enumerate() {
        let (i, j) = (src.category.dom(k), src.category.cod(k));
        match tgt.morphism_over(obj[i], obj[j], lf.functor.mor[x]) {
            Some(m) => mor.push(m),
            None => {
                r.push("pushforward-isometry", format!("image of {} is not a lax isometry", src.category.morphism_label(k)));
                mor.push(usize::MAX);
            }
        }
    }
    if !r.is_ok() {
        return Err(r);
    }
    Ok(Functor { variance: Variance::Covariant, obj, mor })
}

// ---------------------------------------------------------------------------
// Mutation testing

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct MutationSummary {
    pub total: usize,
    pub detected: usize,
    /// Undetected mutants, which therefore satisfy every law of their kind.
    pub valid_alternatives: usize,
    pub witnesses: Vec<String>,
}

impl MutationSummary {
    pub fn detection_rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.detected as f64 / self.total as f64
        }
    }

    pub fn merge(&mut self, other: MutationSummary) {
        self.total += other.total;
        self.detected += other.detected;
        self.valid_alternatives += other.valid_alternatives;
        self.witnesses.extend(other.witnesses);
    }
}

/// One single-entry perturbation of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    Eta { object: Obj, to: Mor },
    DMor { morphism: Mor, to: Mor },
    DObj { object: Obj, to: Obj },
}

impl Mutation {
    pub fn apply(&self, v: &VolutiveStructure) -> VolutiveStructure {
        let mut w = v.clone();
        match *self {
            Mutation::Eta { object, to } => w.eta[object] = to,
            Mutation::DMor { morphism, to } => w.d.mor[morphism] = to,
            Mutation::DObj { object, to } => w.d.obj[object] = to,
        }
        w
    }
}

/// Seeded single-entry mutants: up to `per_entry` in-type alternatives for each
/// η component and each d-entry on morphisms, and one d-entry on objects per
/// object.
pub fn mutations(v: &VolutiveStructure, per_entry: usize, rng: &mut impl Rng) -> Vec<Mutation> {
    let c = &*v.base;
    let mut out = Vec::new();
    let mut pick = |range: std::ops::Range<Mor>, current: Mor, out: &mut Vec<Mor>| {
        let alts: Vec<Mor> = range.filter(|&x| x != current).collect();
        if alts.len() <= per_entry {
            out.extend(alts);
        } else {
            let mut chosen = rand::seq::index::sample(rng, alts.len(), per_entry).into_vec();
            chosen.sort_unstable();
            out.extend(chosen.into_iter().map(|i| alts[i]));
        }
    };
    for a in 0..c.object_count() {
        let dda = v.d.obj[v.d.obj[a]];
        let mut alts = Vec::new();
        pick(c.hom(a, dda), v.eta[a], &mut alts);
        out.extend(alts.into_iter().map(|to| Mutation::Eta { object: a, to }));
    }
    for f in 0..c.morphism_count() {
        let (a, b) = (v.d.obj[c.dom(f)], v.d.obj[c.cod(f)]);
        let mut alts = Vec::new();
        pick(c.hom(b, a), v.d.mor[f], &mut alts);
        out.extend(alts.into_iter().map(|to| Mutation::DMor { morphism: f, to }));
    }
    if c.object_count() > 1 {
        for a in 0..c.object_count() {
            let mut to = rng.gen_range(0..c.object_count() - 1);
            if to >= v.d.obj[a] {
                to += 1;
            }
            out.push(Mutation::DObj { object: a, to });
        }
    }
    out
}

/// Runs `check_volutive` on every mutant.
pub fn mutation_sweep(v: &VolutiveStructure, mutants: &[Mutation]) -> MutationSummary {
    let mut s = MutationSummary::default();
    for m in mutants {
        let w = m.apply(v);
        s.total += 1;
        if volutive_holds(&w, v.kind) {
            s.valid_alternatives += 1;
            if s.witnesses.len() < 8 {
                s.witnesses.push(format!("{m:?}"));
            }
        } else {
            s.detected += 1;
        }
    }
    s
}

/// Indexes for re-checking only the laws that mention a mutated entry.
pub struct MutationContext {
    /// Morphisms into each object.
    into: Vec<Vec<Mor>>,
    /// `d_pre[f]` lists the morphisms `m` with `d(m) = f`.
    d_pre: Vec<Vec<Mor>>,
    /// `obj_pre[a]` lists the objects `b` with `d(b) = a`.
    obj_pre: Vec<Vec<Obj>>,
    /// Objects whose η component is the given morphism.
    eta_at: HashMap<Mor, Vec<Obj>>,
}

impl MutationContext {
    pub fn new(v: &VolutiveStructure) -> Self {
        let c = &*v.base;
        let mut into = vec![Vec::new(); c.object_count()];
        let mut d_pre = vec![Vec::new(); c.morphism_count()];
        for f in 0..c.morphism_count() {
            into[c.cod(f)].push(f);
            d_pre[v.d.mor[f]].push(f);
        }
        let mut obj_pre = vec![Vec::new(); c.object_count()];
        let mut eta_at: HashMap<Mor, Vec<Obj>> = HashMap::new();
        for a in 0..c.object_count() {
            obj_pre[v.d.obj[a]].push(a);
            eta_at.entry(v.eta[a]).or_default().push(a);
        }
        MutationContext { into, d_pre, obj_pre, eta_at }
    }
}

/// Whether a single-entry mutant of a valid structure breaks a law of
/// `v.kind`. Only laws mentioning the mutated entry are re-checked; `d` on
/// objects falls back to the full check.
pub fn mutant_violates(v: &VolutiveStructure, ctx: &MutationContext, m: &Mutation) -> bool {
    let c = &*v.base;
    let strict = v.kind == Kind::Strict;
    match *m {
        Mutation::DObj { .. } => !volutive_holds(&m.apply(v), v.kind),
        Mutation::DMor { morphism: f, to } => {
            let dm = |x: Mor| if x == f { to } else { v.d.mor[x] };
            let (a, b) = (c.dom(f), c.cod(f));
            if c.dom(to) != v.d.obj[b] || c.cod(to) != v.d.obj[a] {
                return true;
            }
            if f == c.identity(a) && to != c.identity(v.d.obj[a]) {
                return true;
            }
            // d(g ∘ m) = d(m) ∘ d(g)
            let comp_ok = |g: Mor, h: Mor| c.try_compose(dm(h), dm(g)) == Some(dm(c.compose(g, h)));
            if c.out_range(b).any(|g| !comp_ok(g, f)) || ctx.into[a].iter().any(|&h| !comp_ok(f, h)) {
                return true;
            }
            // naturality at f and at every m with d(m) = f
            let nat_ok = |x: Mor| {
                let (p, q) = (c.dom(x), c.cod(x));
                c.try_compose(dm(dm(x)), v.eta[p]) == c.try_compose(v.eta[q], x)
            };
            if !nat_ok(f) || ctx.d_pre[f].iter().any(|&x| !nat_ok(x)) {
                return true;
            }
            if let Some(objs) = ctx.eta_at.get(&f) {
                for &o in objs {
                    let d_o = v.d.obj[o];
                    if c.try_compose(to, v.eta[d_o]) != Some(c.identity(d_o)) {
                        return true;
                    }
                    if strict && c.try_compose(v.eta[d_o], to) != Some(c.identity(v.d.obj[v.d.obj[d_o]])) {
                        return true;
                    }
                }
            }
            for x in 0..c.object_count() {
                for h in c.hom(a, x) {
                    for g in c.hom(x, b) {
                        if c.compose(g, h) == f && !comp_ok(g, h) {
                            return true;
                        }
                    }
                }
            }
            false
        }
        Mutation::Eta { object: a, to } => {
            let em = |x: Obj| if x == a { to } else { v.eta[x] };
            let dda = v.d.obj[v.d.obj[a]];
            if c.dom(to) != a || c.cod(to) != dda {
                return true;
            }
            if strict && !c.is_iso(to) {
                return true;
            }
            let nat_ok = |x: Mor| {
                let (p, q) = (c.dom(x), c.cod(x));
                c.try_compose(v.d.mor[v.d.mor[x]], em(p)) == c.try_compose(em(q), x)
            };
            if c.out_range(a).any(|x| !nat_ok(x)) || ctx.into[a].iter().any(|&x| !nat_ok(x)) {
                return true;
            }
            let mut objs = vec![a];
            objs.extend(ctx.obj_pre[a].iter().copied());
            objs.into_iter().any(|o| {
                let d_o = v.d.obj[o];
                let lax = c.try_compose(v.d.mor[em(o)], em(d_o)) == Some(c.identity(d_o));
                let back = c.try_compose(em(d_o), v.d.mor[em(o)]) == Some(c.identity(v.d.obj[v.d.obj[d_o]]));
                !lax || (strict && !back)
            })
        }
    }
}

/// Sweep with local re-checking; `v` itself must satisfy its kind.
pub fn mutation_sweep_local(v: &VolutiveStructure, mutants: &[Mutation]) -> MutationSummary {
    let ctx = MutationContext::new(v);
    let mut s = MutationSummary::default();
    for m in mutants {
        s.total += 1;
        if mutant_violates(v, &ctx, m) {
            s.detected += 1;
        } else {
            s.valid_alternatives += 1;
            if s.witnesses.len() < 8 {
                s.witnesses.push(format!("{m:?}"));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Terminal category with the only possible structure.
    pub(crate) fn terminal() -> VolutiveStructure {
        let c = FiniteCategory::terminal();
        VolutiveStructure::new(
            Arc::new(c),
            Functor { variance: Variance::Contravariant, obj: vec![0], mor: vec![0] },
            vec![0],
            Kind::Strict,
        )
    }

    /// Walking arrow with the order-reversing involution.
    fn arrow() -> VolutiveStructure {
        let c = FiniteCategory::walking_arrow();
        let i0 = c.morphism_index("0<0").unwrap();
        let i1 = c.morphism_index("1<1").unwrap();
        let f = c.morphism_index("0<1").unwrap();
        let mut mor = vec![0; 3];
        mor[i0] = i1;
        mor[i1] = i0;
        mor[f] = f;
        VolutiveStructure::new(
            Arc::new(c),
            Functor { variance: Variance::Contravariant, obj: vec![1, 0], mor },
            vec![i0, i1],
            Kind::Strict,
        )
    }

    #[test]
    fn terminal_is_strict() {
        assert!(check_volutive(&terminal()).is_ok());
        let lh = laxherm_category(&terminal()).unwrap();
        assert_eq!(lh.category.object_count(), 1);
        assert_eq!(lh.category.morphism_count(), 1);
    }

    #[test]
    fn arrow_is_strict_and_shifts() {
        let v = arrow();
        let r = check_volutive(&v);
        assert!(r.is_ok(), "{r}");
        for k in 0..3 {
            assert!(check_volutive(&shift_structure(&v, k)).is_ok());
        }
    }

    #[test]
    fn products_and_functor_categories() {
        let t = terminal();
        let p = product_volutive(&t, &t).unwrap();
        assert_eq!(p.base.morphism_count(), 1);
        assert!(check_volutive(&p).is_ok());
        let v = arrow();
        let (_, fv) = functor_cat_volutive(&t, &v, 1000).unwrap();
        assert_eq!(fv.base.object_count(), v.base.object_count());
        assert!(check_volutive(&fv).is_ok());
        let (_, fv2) = functor_cat_volutive(&v, &v, 1000).unwrap();
        assert!(check_volutive(&fv2).is_ok());
        assert!(check_volutive(&product_volutive(&v, &v).unwrap()).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let v = arrow();
        let j = v.to_json().unwrap();
        let w = VolutiveStructure::from_json(&j).unwrap();
        assert_eq!(w.to_json().unwrap(), j);
        assert!(check_volutive(&w).is_ok());
    }

    #[test]
    fn arrow_has_no_hermitian_points() {
        // hom(0, d 0) = hom(0, 1) holds one arrow, which is not invertible
        let v = arrow();
        let pts = hermitian_points(&v);
        assert!(pts.iter().all(|p| !p.honest));
        let dc = dagger_category(&v);
        assert_eq!(dc.object_count(), 0);
    }

    #[test]
    fn mutants_of_arrow_are_detected() {
        let v = arrow();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        use rand::SeedableRng;
        let ms = mutations(&v, 4, &mut rng);
        let s = mutation_sweep(&v, &ms);
        assert_eq!(s.total, ms.len());
        assert_eq!(s.detected + s.valid_alternatives, s.total);
        assert_eq!(mutation_sweep_local(&v, &ms), s);
    }
}
