//! Finite categories, functors, natural transformations and the standard
//! constructions on them (opposites, products, full subcategories and
//! functor categories).
//!
//! Objects and morphisms are dense `usize` ids. Every implementation of
//! [`Category`] numbers its morphisms so that each hom-set is a contiguous
//! range and hom-sets appear in `(dom, cod)` lexicographic order; in
//! particular all morphisms out of an object form one contiguous range.

use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;
use thiserror::Error;

pub type Obj = usize;
pub type Mor = usize;

const MISSING: u32 = u32::MAX;

/// Upper bound on the composition table of a materialized category.
pub const MAX_COMPOSABLE_PAIRS: usize = 80_000_000;

/// Default cap on the number of morphisms of a functor category.
pub const DEFAULT_FUNCTOR_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FincatError {
    #[error("malformed category data: {0}")]
    Malformed(String),
    #[error("resource cap exceeded: {what} needs more than {limit}")]
    Cap { what: String, limit: usize },
}

/// A category with finitely many objects and decidable morphism equality.
pub trait Category: Send + Sync {
    fn object_count(&self) -> usize;
    fn morphism_count(&self) -> usize;
    fn dom(&self, f: Mor) -> Obj;
    fn cod(&self, f: Mor) -> Obj;
    fn hom(&self, a: Obj, b: Obj) -> Range<Mor>;
    fn identity(&self, a: Obj) -> Mor;
    /// `g ∘ f`, or `None` when the pair is not composable or the entry is missing.
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor>;

    fn compose(&self, g: Mor, f: Mor) -> Mor {
        match self.try_compose(g, f) {
            Some(h) => h,
            None => panic!("morphisms {g} and {f} are not composable"),
        }
    }

    /// All morphisms with domain `a`.
    fn out_range(&self, a: Obj) -> Range<Mor> {
        let n = self.object_count();
        self.hom(a, 0).start..self.hom(a, n - 1).end
    }

    /// A two-sided inverse of `f`, if one exists.
    fn inverse(&self, f: Mor) -> Option<Mor> {
        let (a, b) = (self.dom(f), self.cod(f));
        let (ia, ib) = (self.identity(a), self.identity(b));
        self.hom(b, a)
            .find(|&g| self.try_compose(g, f) == Some(ia) && self.try_compose(f, g) == Some(ib))
    }

    fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    fn object_label(&self, a: Obj) -> String {
        a.to_string()
    }

    fn morphism_label(&self, f: Mor) -> String {
        format!("m{f}")
    }
}

pub type CatRef = Arc<dyn Category>;

impl<C: Category + ?Sized> Category for Arc<C> {
    fn object_count(&self) -> usize {
        (**self).object_count()
    }
    fn morphism_count(&self) -> usize {
        (**self).morphism_count()
    }
    fn dom(&self, f: Mor) -> Obj {
        (**self).dom(f)
    }
    fn cod(&self, f: Mor) -> Obj {
        (**self).cod(f)
    }
    fn hom(&self, a: Obj, b: Obj) -> Range<Mor> {
        (**self).hom(a, b)
    }
    fn identity(&self, a: Obj) -> Mor {
        (**self).identity(a)
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (**self).try_compose(g, f)
    }
    fn compose(&self, g: Mor, f: Mor) -> Mor {
        (**self).compose(g, f)
    }
    fn out_range(&self, a: Obj) -> Range<Mor> {
        (**self).out_range(a)
    }
    fn inverse(&self, f: Mor) -> Option<Mor> {
        (**self).inverse(f)
    }
    fn object_label(&self, a: Obj) -> String {
        (**self).object_label(a)
    }
    fn morphism_label(&self, f: Mor) -> String {
        (**self).morphism_label(f)
    }
}

/// Zero-padded decimal labels, so lexicographic order agrees with index order.
pub fn padded_labels(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

// ---------------------------------------------------------------------------
// Tabulated categories

/// A category given by explicit tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    dom: Vec<u32>,
    cod: Vec<u32>,
    hom_start: Vec<usize>,
    ids: Vec<Mor>,
    comp_row: Vec<usize>,
    comp: Vec<u32>,
}

impl FiniteCategory {
    /// Builds a category from morphism endpoints sorted by `(dom, cod)`.
    ///
    /// `compose(g, f)` is queried for every pair with `cod f = dom g`. Returning
    /// `None` leaves the entry missing, which `check_category` reports.
    pub fn build(
        obj_labels: Vec<String>,
        morphisms: &[(Obj, Obj)],
        mor_labels: Option<Vec<String>>,
        identity: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Option<Mor>,
    ) -> Result<Self, FincatError> {
        let n = obj_labels.len();
        let m = morphisms.len();
        if identity.len() != n {
            return Err(FincatError::Malformed(format!(
                "{} identities for {} objects",
                identity.len(),
                n
            )));
        }
        if let Some(&i) = identity.iter().find(|&&i| i >= m) {
            return Err(FincatError::Malformed(format!("identity id {i} out of range")));
        }
        let mut counts = vec![0usize; n * n];
        let mut prev = (0, 0);
        for (i, &(a, b)) in morphisms.iter().enumerate() {
            if a >= n || b >= n {
                return Err(FincatError::Malformed(format!("morphism {i} has dangling endpoint")));
            }
            if (a, b) < prev {
                return Err(FincatError::Malformed("morphisms not sorted by (dom, cod)".into()));
            }
            prev = (a, b);
            counts[a * n + b] += 1;
        }
        let mut hom_start = Vec::with_capacity(n * n + 1);
        let mut acc = 0;
        for c in &counts {
            hom_start.push(acc);
            acc += c;
        }
        hom_start.push(acc);
        let outdeg = |x: Obj| hom_start[(x + 1) * n] - hom_start[x * n];
        let mut comp_row = Vec::with_capacity(m);
        let mut total = 0usize;
        for &(_, b) in morphisms {
            comp_row.push(total);
            total += outdeg(b);
            if total > MAX_COMPOSABLE_PAIRS {
                return Err(FincatError::Cap {
                    what: "composition table".into(),
                    limit: MAX_COMPOSABLE_PAIRS,
                });
            }
        }
        let mut comp = vec![MISSING; total];
        for (f, &(_, b)) in morphisms.iter().enumerate() {
            let base = hom_start[b * n];
            for g in base..base + outdeg(b) {
                if let Some(h) = compose(g, f) {
                    if h >= m {
                        return Err(FincatError::Malformed(format!(
                            "composite of ({g}, {f}) is dangling id {h}"
                        )));
                    }
                    comp[comp_row[f] + (g - base)] = h as u32;
                }
            }
        }
        let mor_labels = match mor_labels {
            Some(l) if l.len() == m => l,
            Some(_) => return Err(FincatError::Malformed("label count mismatch".into())),
            None => padded_labels("m", m),
        };
        Ok(FiniteCategory {
            obj_labels,
            mor_labels,
            dom: morphisms.iter().map(|p| p.0 as u32).collect(),
            cod: morphisms.iter().map(|p| p.1 as u32).collect(),
            hom_start,
            ids: identity,
            comp_row,
            comp,
        })
    }

    /// Copies any category into tables.
    pub fn materialize(c: &dyn Category) -> Result<Self, FincatError> {
        let n = c.object_count();
        let morphisms: Vec<(Obj, Obj)> =
            (0..c.morphism_count()).map(|f| (c.dom(f), c.cod(f))).collect();
        let labels = (0..n).map(|a| c.object_label(a)).collect();
        let mlabels = (0..c.morphism_count()).map(|f| c.morphism_label(f)).collect();
        FiniteCategory::build(
            labels,
            &morphisms,
            Some(mlabels),
            (0..n).map(|a| c.identity(a)).collect(),
            |g, f| c.try_compose(g, f),
        )
    }

    /// The category with one object and one morphism.
    pub fn terminal() -> Self {
        FiniteCategory::build(vec!["*".into()], &[(0, 0)], Some(vec!["id".into()]), vec![0], |_, _| {
            Some(0)
        })
        .expect("terminal category")
    }

    /// The walking arrow `0 → 1`.
    pub fn walking_arrow() -> Self {
        Self::chain(2)
    }

    /// The poset `0 < 1 < … < n-1` as a category.
    pub fn chain(n: usize) -> Self {
        Self::thin(n, |a, b| a <= b)
    }

    /// A thin category on `n` objects with an arrow `a → b` iff `le(a, b)`.
    ///
    /// `le` must be a preorder for the result to be a category.
    pub fn thin(n: usize, le: impl Fn(Obj, Obj) -> bool) -> Self {
        let mut morphisms = Vec::new();
        let mut index = vec![usize::MAX; n * n];
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    index[a * n + b] = morphisms.len();
                    morphisms.push((a, b));
                }
            }
        }
        let labels = padded_labels("", n);
        let mlabels = morphisms.iter().map(|&(a, b)| format!("{}<{}", labels[a], labels[b])).collect();
        let ids = (0..n).map(|a| index[a * n + a]).collect();
        FiniteCategory::build(labels, &morphisms, Some(mlabels), ids, |g, f| {
            let (a, c) = (morphisms[f].0, morphisms[g].1);
            let i = index[a * n + c];
            (i != usize::MAX).then_some(i)
        })
        .expect("thin category")
    }

    /// The discrete category on `n` objects.
    pub fn discrete(n: usize) -> Self {
        Self::thin(n, |a, b| a == b)
    }

    pub fn labels(&self) -> &[String] {
        &self.obj_labels
    }

    pub fn object_index(&self, label: &str) -> Option<Obj> {
        self.obj_labels.iter().position(|l| l == label)
    }

    pub fn morphism_index(&self, label: &str) -> Option<Mor> {
        self.mor_labels.iter().position(|l| l == label)
    }

    /// Overwrites a composition entry. Used by mutation tests.
    pub fn set_composite(&mut self, g: Mor, f: Mor, h: Mor) {
        let b = self.cod[f] as usize;
        let base = self.hom_start[b * self.obj_labels.len()];
        self.comp[self.comp_row[f] + (g - base)] = h as u32;
    }

    /// Replaces morphism labels (length must match).
    pub fn with_morphism_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.mor_labels.len());
        self.mor_labels = labels;
        self
    }

    pub fn to_json(&self) -> CategoryJson {
        let mut morphisms: Vec<MorphismJson> = (0..self.morphism_count())
            .map(|f| MorphismJson {
                id: self.mor_labels[f].clone(),
                dom: self.obj_labels[self.dom[f] as usize].clone(),
                cod: self.obj_labels[self.cod[f] as usize].clone(),
            })
            .collect();
        morphisms.sort_by(|x, y| x.id.cmp(&y.id));
        let mut objects = self.obj_labels.clone();
        objects.sort();
        let identity = (0..self.object_count())
            .map(|a| (self.obj_labels[a].clone(), self.mor_labels[self.ids[a]].clone()))
            .collect();
        let mut compose = Vec::new();
        for f in 0..self.morphism_count() {
            for g in self.out_range(self.cod[f] as usize) {
                if let Some(h) = self.try_compose(g, f) {
                    compose.push([
                        self.mor_labels[g].clone(),
                        self.mor_labels[f].clone(),
                        self.mor_labels[h].clone(),
                    ]);
                }
            }
        }
        compose.sort();
        CategoryJson { objects, morphisms, identity, compose }
    }

    pub fn from_json(j: &CategoryJson) -> Result<Self, FincatError> {
        let mut objects = j.objects.clone();
        objects.sort();
        if objects.windows(2).any(|w| w[0] == w[1]) {
            return Err(FincatError::Malformed("duplicate object label".into()));
        }
        let obj_index: HashMap<&str, Obj> =
            objects.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut rows = Vec::with_capacity(j.morphisms.len());
        for m in &j.morphisms {
            let a = *obj_index
                .get(m.dom.as_str())
                .ok_or_else(|| FincatError::Malformed(format!("dangling domain {}", m.dom)))?;
            let b = *obj_index
                .get(m.cod.as_str())
                .ok_or_else(|| FincatError::Malformed(format!("dangling codomain {}", m.cod)))?;
            rows.push((a, b, m.id.clone()));
        }
        rows.sort();
        if rows.windows(2).any(|w| w[0].2 == w[1].2) {
            return Err(FincatError::Malformed("duplicate morphism id".into()));
        }
        let mut labels: Vec<&String> = rows.iter().map(|r| &r.2).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(FincatError::Malformed("duplicate morphism id".into()));
        }
        let mor_index: HashMap<&str, Mor> =
            rows.iter().enumerate().map(|(i, r)| (r.2.as_str(), i)).collect();
        let lookup = |s: &str| {
            mor_index
                .get(s)
                .copied()
                .ok_or_else(|| FincatError::Malformed(format!("dangling morphism id {s}")))
        };
        let mut ids = vec![usize::MAX; objects.len()];
        for (o, m) in &j.identity {
            let a = *obj_index
                .get(o.as_str())
                .ok_or_else(|| FincatError::Malformed(format!("identity for unknown object {o}")))?;
            ids[a] = lookup(m)?;
        }
        if ids.contains(&usize::MAX) {
            return Err(FincatError::Malformed("missing identity".into()));
        }
        let mut table = HashMap::new();
        for [g, f, h] in &j.compose {
            let (g, f, h) = (lookup(g)?, lookup(f)?, lookup(h)?);
            if rows[g].0 != rows[f].1 {
                return Err(FincatError::Malformed(format!(
                    "composition entry for non-composable pair ({}, {})",
                    rows[g].2, rows[f].2
                )));
            }
            if table.insert((g, f), h).is_some() {
                return Err(FincatError::Malformed("duplicate composition entry".into()));
            }
        }
        let endpoints: Vec<(Obj, Obj)> = rows.iter().map(|r| (r.0, r.1)).collect();
        let mlabels = rows.iter().map(|r| r.2.clone()).collect();
        FiniteCategory::build(objects, &endpoints, Some(mlabels), ids, |g, f| {
            table.get(&(g, f)).copied()
        })
    }
}

impl Category for FiniteCategory {
    fn object_count(&self) -> usize {
        self.obj_labels.len()
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
        let n = self.obj_labels.len();
        self.hom_start[a * n + b]..self.hom_start[a * n + b + 1]
    }
    fn identity(&self, a: Obj) -> Mor {
        self.ids[a]
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let b = self.cod[f] as usize;
        if self.dom[g] as usize != b {
            return None;
        }
        let base = self.hom_start[b * self.obj_labels.len()];
        let h = self.comp[self.comp_row[f] + (g - base)];
        (h != MISSING).then_some(h as usize)
    }
    fn out_range(&self, a: Obj) -> Range<Mor> {
        let n = self.obj_labels.len();
        self.hom_start[a * n]..self.hom_start[(a + 1) * n]
    }
    fn object_label(&self, a: Obj) -> String {
        self.obj_labels[a].clone()
    }
    fn morphism_label(&self, f: Mor) -> String {
        self.mor_labels[f].clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// Serialized form of a finite category, in canonical (lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identity: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

/// Checks the category axioms exhaustively.
pub fn check_category(c: &dyn Category) -> ValidationReport {
    check_category_capped(c, usize::MAX, &mut ValidationReport::new())
}

/// Checks the category axioms; associativity is skipped when there are more
/// than `max_triples` composable triples.
pub fn check_category_capped(
    c: &dyn Category,
    max_triples: usize,
    report: &mut ValidationReport,
) -> ValidationReport {
    let mut r = std::mem::take(report);
    let n = c.object_count();
    for a in 0..n {
        let i = c.identity(a);
        r.require(c.dom(i) == a && c.cod(i) == a, "identity-typing", || {
            format!("identity of {} is not an endomorphism of it", c.object_label(a))
        });
    }
    for f in 0..c.morphism_count() {
        let (a, b) = (c.dom(f), c.cod(f));
        for g in c.out_range(b) {
            match c.try_compose(g, f) {
                None => r.push(
                    "missing-composite",
                    format!("{} ∘ {}", c.morphism_label(g), c.morphism_label(f)),
                ),
                Some(h) => r.require(c.dom(h) == a && c.cod(h) == c.cod(g), "composite-typing", || {
                    format!("{} ∘ {} lands outside its hom-set", c.morphism_label(g), c.morphism_label(f))
                }),
            }
        }
        r.require(c.try_compose(c.identity(b), f) == Some(f), "left-unit", || {
            format!("id ∘ {} ≠ {}", c.morphism_label(f), c.morphism_label(f))
        });
        r.require(c.try_compose(f, c.identity(a)) == Some(f), "right-unit", || {
            format!("{} ∘ id ≠ {}", c.morphism_label(f), c.morphism_label(f))
        });
        if r.full() {
            return r;
        }
    }
    if !r.is_ok() {
        return r;
    }
    let mut triples = 0usize;
    let out: Vec<usize> = (0..n).map(|a| c.out_range(a).len()).collect();
    for f in 0..c.morphism_count() {
        for g in c.out_range(c.cod(f)) {
            triples = triples.saturating_add(out[c.cod(g)]);
        }
    }
    if triples > max_triples {
        r.skip(format!("associativity: {triples} triples exceed cap {max_triples}"));
        return r;
    }
    for f in 0..c.morphism_count() {
        for g in c.out_range(c.cod(f)) {
            let gf = c.compose(g, f);
            for h in c.out_range(c.cod(g)) {
                let lhs = c.compose(h, gf);
                let rhs = c.compose(c.compose(h, g), f);
                r.require(lhs == rhs, "associativity", || {
                    format!(
                        "({}, {}, {})",
                        c.morphism_label(h),
                        c.morphism_label(g),
                        c.morphism_label(f)
                    )
                });
            }
            if r.full() {
                return r;
            }
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Views

/// The opposite of a category, without copying.
pub struct Opposite<C: Category>(pub C);

impl<C: Category> Category for Opposite<C> {
    fn object_count(&self) -> usize {
        self.0.object_count()
    }
    fn morphism_count(&self) -> usize {
        self.0.morphism_count()
    }
    fn dom(&self, f: Mor) -> Obj {
        self.0.cod(f)
    }
    fn cod(&self, f: Mor) -> Obj {
        self.0.dom(f)
    }
    // Ids are kept; hom(a, b) of the opposite is hom(b, a) of the base, so the
    // (dom, cod) ordering convention does not hold and out_range is overridden.
    fn hom(&self, a: Obj, b: Obj) -> Range<Mor> {
        self.0.hom(b, a)
    }
    fn identity(&self, a: Obj) -> Mor {
        self.0.identity(a)
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.0.try_compose(f, g)
    }
    fn out_range(&self, _a: Obj) -> Range<Mor> {
        panic!("Opposite views have no contiguous out-ranges; materialize with opposite()")
    }
    fn inverse(&self, f: Mor) -> Option<Mor> {
        self.0.inverse(f)
    }
    fn object_label(&self, a: Obj) -> String {
        self.0.object_label(a)
    }
    fn morphism_label(&self, f: Mor) -> String {
        self.0.morphism_label(f)
    }
}

/// The opposite category, materialized. Morphism ids are renumbered; labels
/// are kept, so `opposite(&opposite(c)) == c`.
pub fn opposite(c: &dyn Category) -> Result<FiniteCategory, FincatError> {
    let (cat, _) = opposite_with_map(c)?;
    Ok(cat)
}

/// The opposite category together with the map from base ids to opposite ids.
pub fn opposite_with_map(c: &dyn Category) -> Result<(FiniteCategory, Vec<Mor>), FincatError> {
    let n = c.object_count();
    let mut order = Vec::with_capacity(c.morphism_count());
    for a in 0..n {
        for b in 0..n {
            order.extend(c.hom(b, a));
        }
    }
    let mut to_op = vec![0; c.morphism_count()];
    for (i, &f) in order.iter().enumerate() {
        to_op[f] = i;
    }
    let morphisms: Vec<(Obj, Obj)> = order.iter().map(|&f| (c.cod(f), c.dom(f))).collect();
    let labels = (0..n).map(|a| c.object_label(a)).collect();
    let mlabels = order.iter().map(|&f| c.morphism_label(f)).collect();
    let ids = (0..n).map(|a| to_op[c.identity(a)]).collect();
    let cat = FiniteCategory::build(labels, &morphisms, Some(mlabels), ids, |g, f| {
        c.try_compose(order[f], order[g]).map(|h| to_op[h])
    })?;
    Ok((cat, to_op))
}

/// Full subcategory on a list of base objects (repetitions allowed).
pub struct Subcategory {
    base: CatRef,
    objects: Vec<Obj>,
    hom_start: Vec<usize>,
}

impl Subcategory {
    pub fn new(base: CatRef, objects: Vec<Obj>) -> Self {
        let k = objects.len();
        let mut hom_start = Vec::with_capacity(k * k + 1);
        let mut acc = 0;
        for &a in &objects {
            for &b in &objects {
                hom_start.push(acc);
                acc += base.hom(a, b).len();
            }
        }
        hom_start.push(acc);
        Subcategory { base, objects, hom_start }
    }

    pub fn base(&self) -> &CatRef {
        &self.base
    }

    pub fn objects(&self) -> &[Obj] {
        &self.objects
    }

    fn pair_of(&self, f: Mor) -> (usize, usize) {
        let i = self.hom_start.partition_point(|&s| s <= f) - 1;
        let k = self.objects.len();
        (i / k, i % k)
    }

    /// The base morphism underlying `f`.
    pub fn to_base(&self, f: Mor) -> Mor {
        let (p, q) = self.pair_of(f);
        let k = self.objects.len();
        self.base.hom(self.objects[p], self.objects[q]).start + (f - self.hom_start[p * k + q])
    }

    /// The morphism `p → q` of the subcategory over the base morphism `f`.
    pub fn from_base(&self, p: Obj, q: Obj, f: Mor) -> Mor {
        let k = self.objects.len();
        let r = self.base.hom(self.objects[p], self.objects[q]);
        debug_assert!(r.contains(&f));
        self.hom_start[p * k + q] + (f - r.start)
    }
}

impl Category for Subcategory {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn morphism_count(&self) -> usize {
        *self.hom_start.last().unwrap()
    }
    fn dom(&self, f: Mor) -> Obj {
        self.pair_of(f).0
    }
    fn cod(&self, f: Mor) -> Obj {
        self.pair_of(f).1
    }
    fn hom(&self, a: Obj, b: Obj) -> Range<Mor> {
        let k = self.objects.len();
        self.hom_start[a * k + b]..self.hom_start[a * k + b + 1]
    }
    fn identity(&self, a: Obj) -> Mor {
        self.from_base(a, a, self.base.identity(self.objects[a]))
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let (p, q) = self.pair_of(f);
        let (q2, r) = self.pair_of(g);
        if q != q2 {
            return None;
        }
        let h = self.base.try_compose(self.to_base(g), self.to_base(f))?;
        Some(self.from_base(p, r, h))
    }
    fn inverse(&self, f: Mor) -> Option<Mor> {
        let (p, q) = self.pair_of(f);
        self.base.inverse(self.to_base(f)).map(|g| self.from_base(q, p, g))
    }
    fn object_label(&self, a: Obj) -> String {
        self.base.object_label(self.objects[a])
    }
    fn morphism_label(&self, f: Mor) -> String {
        self.base.morphism_label(self.to_base(f))
    }
}

// ---------------------------------------------------------------------------
// Products

/// A finite product of categories, materialized, with coordinate maps.
#[derive(Clone, Debug)]
pub struct ProductCategory {
    pub category: FiniteCategory,
    obj_sizes: Vec<usize>,
    factor_homs: Vec<Vec<usize>>,
    factor_starts: Vec<Vec<usize>>,
    components: Vec<Vec<Mor>>,
}

impl ProductCategory {
    /// Object of the product with the given coordinates.
    pub fn object(&self, coords: &[Obj]) -> Obj {
        coords.iter().zip(&self.obj_sizes).fold(0, |acc, (&x, &n)| acc * n + x)
    }

    pub fn object_coords(&self, mut o: Obj) -> Vec<Obj> {
        let mut out = vec![0; self.obj_sizes.len()];
        for i in (0..self.obj_sizes.len()).rev() {
            out[i] = o % self.obj_sizes[i];
            o /= self.obj_sizes[i];
        }
        out
    }

    /// Morphism of the product with the given coordinates.
    pub fn morphism(&self, coords: &[Mor]) -> Mor {
        let doms: Vec<Obj> = coords
            .iter()
            .enumerate()
            .map(|(i, &m)| self.factor_dom(i, m))
            .collect();
        let cods: Vec<Obj> = coords
            .iter()
            .enumerate()
            .map(|(i, &m)| self.factor_cod(i, m))
            .collect();
        let r = self.category.hom(self.object(&doms), self.object(&cods));
        let mut idx = 0;
        for (i, &m) in coords.iter().enumerate() {
            let n = self.obj_sizes[i];
            let h = doms[i] * n + cods[i];
            let size = self.factor_homs[i][h];
            idx = idx * size + (m - self.factor_starts[i][h]);
        }
        r.start + idx
    }

    pub fn morphism_coords(&self, f: Mor) -> &[Mor] {
        &self.components[f]
    }

    fn factor_dom(&self, i: usize, m: Mor) -> Obj {
        let h = self.factor_starts[i].partition_point(|&s| s <= m) - 1;
        h / self.obj_sizes[i]
    }

    fn factor_cod(&self, i: usize, m: Mor) -> Obj {
        let h = self.factor_starts[i].partition_point(|&s| s <= m) - 1;
        h % self.obj_sizes[i]
    }
}

/// Calls `f` on every tuple of the cartesian product of `ranges`, last
/// coordinate fastest.
pub fn for_each_tuple(ranges: &[Range<usize>], mut f: impl FnMut(&[usize])) {
    if ranges.iter().any(|r| r.is_empty()) {
        return;
    }
    let mut cur: Vec<usize> = ranges.iter().map(|r| r.start).collect();
    loop {
        f(&cur);
        let mut i = cur.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < ranges[i].end {
                break;
            }
            cur[i] = ranges[i].start;
        }
    }
}

/// The product `c_1 × … × c_k`.
pub fn product_many(factors: &[&dyn Category]) -> Result<ProductCategory, FincatError> {
    let obj_sizes: Vec<usize> = factors.iter().map(|c| c.object_count()).collect();
    let total_obj: usize = obj_sizes.iter().product();
    let mut factor_homs = Vec::new();
    let mut factor_starts = Vec::new();
    for c in factors {
        let n = c.object_count();
        let mut sizes = Vec::with_capacity(n * n);
        let mut starts = Vec::with_capacity(n * n + 1);
        for a in 0..n {
            for b in 0..n {
                let r = c.hom(a, b);
                sizes.push(r.len());
                starts.push(r.start);
            }
        }
        starts.push(c.morphism_count());
        factor_homs.push(sizes);
        factor_starts.push(starts);
    }
    let coords = |mut o: Obj| {
        let mut out = vec![0; obj_sizes.len()];
        for i in (0..obj_sizes.len()).rev() {
            out[i] = o % obj_sizes[i];
            o /= obj_sizes[i];
        }
        out
    };
    let mut morphisms = Vec::new();
    let mut components: Vec<Vec<Mor>> = Vec::new();
    for a in 0..total_obj {
        let ca = coords(a);
        for b in 0..total_obj {
            let cb = coords(b);
            let ranges: Vec<Range<Mor>> =
                factors.iter().enumerate().map(|(i, c)| c.hom(ca[i], cb[i])).collect();
            if ranges.iter().any(|r| r.is_empty()) {
                continue;
            }
            for_each_tuple(&ranges, |cur| {
                morphisms.push((a, b));
                components.push(cur.to_vec());
            });
        }
    }
    let lookup: HashMap<Vec<Mor>, Mor> =
        components.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let labels = (0..total_obj)
        .map(|o| {
            let c = coords(o);
            let parts: Vec<String> =
                c.iter().enumerate().map(|(i, &x)| factors[i].object_label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mlabels = padded_labels("m", morphisms.len());
    let ids = (0..total_obj)
        .map(|o| {
            let c = coords(o);
            let v: Vec<Mor> = c.iter().enumerate().map(|(i, &x)| factors[i].identity(x)).collect();
            lookup[&v]
        })
        .collect();
    let category = FiniteCategory::build(labels, &morphisms, Some(mlabels), ids, |g, f| {
        let v: Option<Vec<Mor>> = components[g]
            .iter()
            .zip(&components[f])
            .enumerate()
            .map(|(i, (&x, &y))| factors[i].try_compose(x, y))
            .collect();
        v.and_then(|v| lookup.get(&v).copied())
    })?;
    Ok(ProductCategory { category, obj_sizes, factor_homs, factor_starts, components })
}

/// The binary product `c1 × c2`.
pub fn product(c1: &dyn Category, c2: &dyn Category) -> Result<ProductCategory, FincatError> {
    product_many(&[c1, c2])
}

// ---------------------------------------------------------------------------
// Functors and natural transformations

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn then(self, other: Variance) -> Variance {
        if self == other {
            Variance::Covariant
        } else {
            Variance::Contravariant
        }
    }
}

/// A functor given by its object and morphism maps. A contravariant functor
/// `C → D` is a covariant functor `C → D^op` and reverses arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functor {
    pub variance: Variance,
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl Functor {
    pub fn identity(c: &dyn Category) -> Functor {
        Functor {
            variance: Variance::Covariant,
            obj: (0..c.object_count()).collect(),
            mor: (0..c.morphism_count()).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Functor) -> Functor {
        Functor {
            variance: self.variance.then(inner.variance),
            obj: inner.obj.iter().map(|&a| self.obj[a]).collect(),
            mor: inner.mor.iter().map(|&f| self.mor[f]).collect(),
        }
    }

    /// `self` composed with itself `k` times (`k ≥ 1`).
    pub fn power(&self, k: usize) -> Functor {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = self.after(&out);
        }
        out
    }
}

/// Checks functoriality of `f: src → tgt`, honouring its variance.
pub fn check_functor(src: &dyn Category, tgt: &dyn Category, f: &Functor) -> ValidationReport {
    let mut r = ValidationReport::new();
    check_functor_into(src, tgt, f, &mut r);
    r
}

pub fn check_functor_into(
    src: &dyn Category,
    tgt: &dyn Category,
    f: &Functor,
    r: &mut ValidationReport,
) {
    if f.obj.len() != src.object_count() || f.mor.len() != src.morphism_count() {
        r.push("functor-shape", "object or morphism map has the wrong length");
        return;
    }
    if let Some(a) = f.obj.iter().position(|&x| x >= tgt.object_count()) {
        r.push("functor-shape", format!("object {} maps outside the target", src.object_label(a)));
        return;
    }
    if let Some(m) = f.mor.iter().position(|&x| x >= tgt.morphism_count()) {
        r.push("functor-shape", format!("morphism {} maps outside the target", src.morphism_label(m)));
        return;
    }
    let contra = f.variance == Variance::Contravariant;
    let mut typed = true;
    for m in 0..src.morphism_count() {
        let (a, b) = (f.obj[src.dom(m)], f.obj[src.cod(m)]);
        let (x, y) = if contra { (b, a) } else { (a, b) };
        let fm = f.mor[m];
        if tgt.dom(fm) != x || tgt.cod(fm) != y {
            typed = false;
            r.push("functor-typing", format!("image of {} has the wrong endpoints", src.morphism_label(m)));
            if r.full() {
                return;
            }
        }
    }
    for a in 0..src.object_count() {
        r.require(f.mor[src.identity(a)] == tgt.identity(f.obj[a]), "functor-identity", || {
            format!("identity of {}", src.object_label(a))
        });
    }
    if !typed || r.full() {
        return;
    }
    for m in 0..src.morphism_count() {
        let fm = f.mor[m];
        for g in src.out_range(src.cod(m)) {
            let gm = src.compose(g, m);
            let expect = if contra {
                tgt.try_compose(fm, f.mor[g])
            } else {
                tgt.try_compose(f.mor[g], fm)
            };
            if expect != Some(f.mor[gm]) {
                r.push(
                    "functor-composition",
                    format!("pair ({}, {})", src.morphism_label(g), src.morphism_label(m)),
                );
                if r.full() {
                    return;
                }
            }
        }
    }
}

/// A natural transformation between functors of equal variance.
///
/// For covariant endpoints the component at `a` is `source(a) → target(a)`;
/// for contravariant endpoints (functors into the opposite of the target)
/// it is the target-category morphism `target(a) → source(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<Mor>,
}

impl NatTrans {
    pub fn identity(f: &Functor, tgt: &dyn Category) -> NatTrans {
        NatTrans {
            source: f.clone(),
            target: f.clone(),
            components: f.obj.iter().map(|&x| tgt.identity(x)).collect(),
        }
    }
}

/// Checks typing and naturality of `t`.
pub fn check_nattrans(src: &dyn Category, tgt: &dyn Category, t: &NatTrans) -> ValidationReport {
    let mut r = ValidationReport::new();
    check_nattrans_into(src, tgt, t, &mut r);
    r
}

pub fn check_nattrans_into(
    src: &dyn Category,
    tgt: &dyn Category,
    t: &NatTrans,
    r: &mut ValidationReport,
) {
    if t.source.variance != t.target.variance {
        r.push("transformation-endpoints", "source and target functors differ in variance");
        return;
    }
    if t.components.len() != src.object_count()
        || t.source.obj.len() != src.object_count()
        || t.target.obj.len() != src.object_count()
    {
        r.push("transformation-endpoints", "component count does not match the source category");
        return;
    }
    let contra = t.source.variance == Variance::Contravariant;
    let mut typed = true;
    for a in 0..src.object_count() {
        let c = t.components[a];
        let (s, g) = (t.source.obj[a], t.target.obj[a]);
        let (x, y) = if contra { (g, s) } else { (s, g) };
        if c >= tgt.morphism_count() || tgt.dom(c) != x || tgt.cod(c) != y {
            typed = false;
            r.push("component-typing", format!("component at {} has the wrong endpoints", src.object_label(a)));
        }
    }
    if !typed {
        return;
    }
    for m in 0..src.morphism_count() {
        let (a, b) = (src.dom(m), src.cod(m));
        let (sm, gm) = (t.source.mor[m], t.target.mor[m]);
        let (lhs, rhs) = if contra {
            (tgt.try_compose(t.components[a], gm), tgt.try_compose(sm, t.components[b]))
        } else {
            (tgt.try_compose(gm, t.components[a]), tgt.try_compose(t.components[b], sm))
        };
        if lhs.is_none() || lhs != rhs {
            r.push("naturality", format!("square at {}", src.morphism_label(m)));
            if r.full() {
                return;
            }
        }
    }
}

/// `h ∘ t`: components `h(t_a)`.
pub fn whisker_left(h: &Functor, t: &NatTrans) -> NatTrans {
    NatTrans {
        source: h.after(&t.source),
        target: h.after(&t.target),
        components: t.components.iter().map(|&c| h.mor[c]).collect(),
    }
}

/// `t ∘ k`: components `t_{k(b)}`. A contravariant `k` reverses the direction.
pub fn whisker_right(t: &NatTrans, k: &Functor) -> NatTrans {
    let components = k.obj.iter().map(|&b| t.components[b]).collect();
    let (s, g) = (t.source.after(k), t.target.after(k));
    match k.variance {
        Variance::Covariant => NatTrans { source: s, target: g, components },
        Variance::Contravariant => NatTrans { source: g, target: s, components },
    }
}

/// Vertical composite `β • α` (first α, then β).
pub fn vertical(beta: &NatTrans, alpha: &NatTrans, tgt: &dyn Category) -> Option<NatTrans> {
    if alpha.target != beta.source {
        return None;
    }
    let contra = alpha.source.variance == Variance::Contravariant;
    let components = alpha
        .components
        .iter()
        .zip(&beta.components)
        .map(|(&a, &b)| if contra { tgt.try_compose(a, b) } else { tgt.try_compose(b, a) })
        .collect::<Option<Vec<_>>>()?;
    Some(NatTrans { source: alpha.source.clone(), target: beta.target.clone(), components })
}

// ---------------------------------------------------------------------------
// Functor categories

/// Enumerates every functor `c1 → c2` of the given variance, in canonical order.
pub fn enumerate_functors(
    c1: &dyn Category,
    c2: &dyn Category,
    variance: Variance,
    cap: usize,
) -> Result<Vec<Functor>, FincatError> {
    let n1 = c1.object_count();
    let m1 = c1.morphism_count();
    let contra = variance == Variance::Contravariant;
    // constraints indexed by the largest morphism id involved
    let mut constraints: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); m1];
    for f in 0..m1 {
        for g in c1.out_range(c1.cod(f)) {
            let h = c1.compose(g, f);
            constraints[f.max(g).max(h)].push((g, f, h));
        }
    }
    let is_id: Vec<bool> = {
        let mut v = vec![false; m1];
        for a in 0..n1 {
            v[c1.identity(a)] = true;
        }
        v
    };
    let mut out = Vec::new();
    let mut obj = vec![0usize; n1];
    let mut mor = vec![usize::MAX; m1];
    struct Ctx<'a> {
        c1: &'a dyn Category,
        c2: &'a dyn Category,
        contra: bool,
        constraints: &'a [Vec<(Mor, Mor, Mor)>],
        is_id: &'a [bool],
        cap: usize,
    }
    fn assign_mor(
        ctx: &Ctx,
        i: usize,
        obj: &[Obj],
        mor: &mut Vec<Mor>,
        out: &mut Vec<Functor>,
        variance: Variance,
    ) -> Result<(), FincatError> {
        if i == mor.len() {
            if out.len() >= ctx.cap {
                return Err(FincatError::Cap { what: "functor enumeration".into(), limit: ctx.cap });
            }
            out.push(Functor { variance, obj: obj.to_vec(), mor: mor.clone() });
            return Ok(());
        }
        let (a, b) = (obj[ctx.c1.dom(i)], obj[ctx.c1.cod(i)]);
        let range = if ctx.is_id[i] {
            let id = ctx.c2.identity(a);
            id..id + 1
        } else if ctx.contra {
            ctx.c2.hom(b, a)
        } else {
            ctx.c2.hom(a, b)
        };
        for x in range {
            mor[i] = x;
            let ok = ctx.constraints[i].iter().all(|&(g, f, h)| {
                let comp = if ctx.contra {
                    ctx.c2.try_compose(mor[f], mor[g])
                } else {
                    ctx.c2.try_compose(mor[g], mor[f])
                };
                comp == Some(mor[h])
            });
            if ok {
                assign_mor(ctx, i + 1, obj, mor, out, variance)?;
            }
        }
        mor[i] = usize::MAX;
        Ok(())
    }
    let ctx = Ctx { c1, c2, contra, constraints: &constraints, is_id: &is_id, cap };
    let n2 = c2.object_count();
    if n1 == 0 {
        out.push(Functor { variance, obj: vec![], mor: vec![] });
        return Ok(out);
    }
    if n2 == 0 {
        return Ok(out);
    }
    loop {
        assign_mor(&ctx, 0, &obj, &mut mor, &mut out, variance)?;
        let mut i = n1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            obj[i] += 1;
            if obj[i] < n2 {
                break;
            }
            obj[i] = 0;
        }
    }
}

/// Enumerates the natural transformations `f → g` between covariant functors.
pub fn enumerate_transformations(
    c1: &dyn Category,
    c2: &dyn Category,
    f: &Functor,
    g: &Functor,
    cap: usize,
) -> Result<Vec<Vec<Mor>>, FincatError> {
    let n = c1.object_count();
    let mut by_max: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for m in 0..c1.morphism_count() {
        by_max[c1.dom(m).max(c1.cod(m))].push(m);
    }
    let mut out = Vec::new();
    let mut comp = vec![0usize; n];
    fn rec(
        a: usize,
        c1: &dyn Category,
        c2: &dyn Category,
        f: &Functor,
        g: &Functor,
        by_max: &[Vec<Mor>],
        comp: &mut Vec<Mor>,
        out: &mut Vec<Vec<Mor>>,
        cap: usize,
    ) -> Result<(), FincatError> {
        if a == comp.len() {
            if out.len() >= cap {
                return Err(FincatError::Cap { what: "transformation enumeration".into(), limit: cap });
            }
            out.push(comp.clone());
            return Ok(());
        }
        for x in c2.hom(f.obj[a], g.obj[a]) {
            comp[a] = x;
            let ok = by_max[a].iter().all(|&m| {
                let (s, t) = (c1.dom(m), c1.cod(m));
                c2.try_compose(g.mor[m], comp[s]) == c2.try_compose(comp[t], f.mor[m])
            });
            if ok {
                rec(a + 1, c1, c2, f, g, by_max, comp, out, cap)?;
            }
        }
        Ok(())
    }
    rec(0, c1, c2, f, g, &by_max, &mut comp, &mut out, cap)?;
    Ok(out)
}

/// The category of functors `c1 → c2` and natural transformations.
#[derive(Clone, Debug)]
pub struct FunctorCategory {
    pub category: FiniteCategory,
    pub functors: Vec<Functor>,
    /// Components of each morphism, indexed by morphism id.
    pub components: Vec<Vec<Mor>>,
    functor_index: HashMap<Functor, Obj>,
    mor_index: HashMap<(Obj, Obj, Vec<Mor>), Mor>,
}

impl FunctorCategory {
    pub fn functor_id(&self, f: &Functor) -> Option<Obj> {
        self.functor_index.get(f).copied()
    }

    pub fn transformation_id(&self, src: Obj, tgt: Obj, comps: &[Mor]) -> Option<Mor> {
        self.mor_index.get(&(src, tgt, comps.to_vec())).copied()
    }
}

/// Builds `Fun(c1, c2)`; fails if it would have more than `cap` morphisms.
pub fn functor_category(
    c1: &dyn Category,
    c2: &dyn Category,
    cap: usize,
) -> Result<FunctorCategory, FincatError> {
    let functors = enumerate_functors(c1, c2, Variance::Covariant, cap)?;
    let mut morphisms = Vec::new();
    let mut components = Vec::new();
    for (i, f) in functors.iter().enumerate() {
        for (j, g) in functors.iter().enumerate() {
            let remaining = cap.saturating_sub(components.len());
            let ts = enumerate_transformations(c1, c2, f, g, remaining + 1)?;
            if components.len() + ts.len() > cap {
                return Err(FincatError::Cap { what: "functor category morphisms".into(), limit: cap });
            }
            for t in ts {
                morphisms.push((i, j));
                components.push(t);
            }
        }
    }
    let mor_index: HashMap<(Obj, Obj, Vec<Mor>), Mor> = components
        .iter()
        .enumerate()
        .map(|(k, c)| ((morphisms[k].0, morphisms[k].1, c.clone()), k))
        .collect();
    let ids = functors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let c: Vec<Mor> = f.obj.iter().map(|&x| c2.identity(x)).collect();
            mor_index[&(i, i, c)]
        })
        .collect();
    let labels = padded_labels("F", functors.len());
    let category = FiniteCategory::build(labels, &morphisms, None, ids, |g, f| {
        let c: Option<Vec<Mor>> = components[g]
            .iter()
            .zip(&components[f])
            .map(|(&y, &x)| c2.try_compose(y, x))
            .collect();
        c.and_then(|c| mor_index.get(&(morphisms[f].0, morphisms[g].1, c)).copied())
    })?;
    let functor_index = functors.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    Ok(FunctorCategory { category, functors, components, functor_index, mor_index })
}

// ---------------------------------------------------------------------------
// Finite sets

/// A map between the finite sets `{0..dom}` and `{0..cod}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMap {
    pub dom: usize,
    pub cod: usize,
    pub img: Vec<u32>,
}

impl FinMap {
    pub fn identity(n: usize) -> FinMap {
        FinMap { dom: n, cod: n, img: (0..n as u32).collect() }
    }

    pub fn is_valid(&self) -> bool {
        self.img.len() == self.dom && self.img.iter().all(|&x| (x as usize) < self.cod)
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &FinMap) -> FinMap {
        assert_eq!(other.cod, self.dom);
        FinMap {
            dom: other.dom,
            cod: self.cod,
            img: other.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom != self.cod {
            return false;
        }
        let mut seen = vec![false; self.cod];
        for &x in &self.img {
            if std::mem::replace(&mut seen[x as usize], true) {
                return false;
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Random categories

/// A random finite category realized as maps between small sets: objects get
/// carriers of size `1..=max_carrier`, random maps are added as generators
/// and closed under composition, and a generator is discarded whenever the
/// closure would exceed `max_morphisms`.
pub fn random_concrete_category<R: rand::Rng>(
    rng: &mut R,
    objects: usize,
    max_morphisms: usize,
    max_carrier: usize,
    attempts: usize,
) -> FiniteCategory {
    assert!(objects >= 1 && max_morphisms >= objects);
    let carrier: Vec<usize> = (0..objects).map(|_| rng.gen_range(1..=max_carrier)).collect();
    let mut maps: Vec<(Obj, Obj, Vec<u8>)> = (0..objects).map(|a| (a, a, (0..carrier[a] as u8).collect())).collect();
    for _ in 0..attempts {
        let (a, b) = (rng.gen_range(0..objects), rng.gen_range(0..objects));
        let img: Vec<u8> = (0..carrier[a]).map(|_| rng.gen_range(0..carrier[b]) as u8).collect();
        if maps.len() >= max_morphisms || maps.contains(&(a, b, img.clone())) {
            continue;
        }
        let mut next = maps.clone();
        next.push((a, b, img));
        let mut i = 0;
        let mut ok = true;
        'close: while i < next.len() {
            for j in 0..next.len() {
                for (f, g) in [(i, j), (j, i)] {
                    if next[f].1 == next[g].0 {
                        let h: Vec<u8> = next[f].2.iter().map(|&x| next[g].2[x as usize]).collect();
                        let key = (next[f].0, next[g].1, h);
                        if !next.contains(&key) {
                            next.push(key);
                            if next.len() > max_morphisms {
                                ok = false;
                                break 'close;
                            }
                        }
                    }
                }
            }
            i += 1;
        }
        if ok {
            maps = next;
        }
    }
    maps.sort();
    let endpoints: Vec<(Obj, Obj)> = maps.iter().map(|m| (m.0, m.1)).collect();
    let index: HashMap<&(Obj, Obj, Vec<u8>), Mor> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let ids = (0..objects).map(|a| index[&(a, a, (0..carrier[a] as u8).collect())]).collect();
    let labels = (0..objects).map(|a| format!("o{a}")).collect();
    let mor_labels = maps
        .iter()
        .map(|(a, b, img)| {
            let img: Vec<String> = img.iter().map(|x| x.to_string()).collect();
            format!("o{a}>o{b}[{}]", img.join(""))
        })
        .collect();
    FiniteCategory::build(labels, &endpoints, Some(mor_labels), ids, |g, f| {
        let h: Vec<u8> = maps[f].2.iter().map(|&x| maps[g].2[x as usize]).collect();
        index.get(&(maps[f].0, maps[g].1, h)).copied()
    })
    .expect("closed set of maps forms a category")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corrupted_chain() -> FiniteCategory {
        let mut c = FiniteCategory::chain(3);
        // 0<1 then 1<2 should be 0<2; point it at 0<1 instead
        let f = c.morphism_index("0<1").unwrap();
        let g = c.morphism_index("1<2").unwrap();
        c.set_composite(g, f, f);
        c
    }

    #[test]
    fn terminal_and_arrow_are_categories() {
        assert!(check_category(&FiniteCategory::terminal()).is_ok());
        assert!(check_category(&FiniteCategory::walking_arrow()).is_ok());
        assert!(check_category(&FiniteCategory::chain(4)).is_ok());
    }

    #[test]
    fn corrupted_entry_is_named() {
        let r = check_category(&corrupted_chain());
        assert!(!r.is_ok());
        assert!(r.violations.iter().any(|v| v.detail.contains("1<2") && v.detail.contains("0<1")));
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = FiniteCategory::chain(3);
        let op = opposite(&c).unwrap();
        assert!(check_category(&op).is_ok());
        assert_eq!(opposite(&op).unwrap(), c);
    }

    #[test]
    fn json_round_trip() {
        let c = FiniteCategory::chain(3);
        let j = c.to_json();
        let back = FiniteCategory::from_json(&j).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), j);
    }

    #[test]
    fn dangling_ids_are_structural_errors() {
        let mut j = FiniteCategory::walking_arrow().to_json();
        j.compose.push(["nope".into(), "0<0".into(), "0<0".into()]);
        assert!(matches!(FiniteCategory::from_json(&j), Err(FincatError::Malformed(_))));
    }

    #[test]
    fn functor_category_of_walking_arrow() {
        let a = FiniteCategory::walking_arrow();
        let fc = functor_category(&a, &a, DEFAULT_FUNCTOR_CAP).unwrap();
        assert_eq!(fc.functors.len(), 3);
        assert!(check_category(&fc.category).is_ok());
    }

    #[test]
    fn functors_from_the_point() {
        let c = FiniteCategory::chain(3);
        let fc = functor_category(&FiniteCategory::terminal(), &c, DEFAULT_FUNCTOR_CAP).unwrap();
        assert_eq!(fc.category.object_count(), c.object_count());
        assert_eq!(fc.category.morphism_count(), c.morphism_count());
    }

    #[test]
    fn functor_checks() {
        let a = FiniteCategory::walking_arrow();
        assert!(check_functor(&a, &a, &Functor::identity(&a)).is_ok());
        // the swap 0 ↔ 1 is a contravariant endofunctor
        let swap = Functor {
            variance: Variance::Contravariant,
            obj: vec![1, 0],
            mor: vec![a.morphism_index("1<1").unwrap(), a.morphism_index("0<1").unwrap(), a.morphism_index("0<0").unwrap()],
        };
        assert!(check_functor(&a, &a, &swap).is_ok());
        let c = FiniteCategory::chain(3);
        let mut bad = Functor::identity(&c);
        let f02 = c.morphism_index("0<2").unwrap();
        bad.mor[f02] = c.morphism_index("0<0").unwrap();
        assert!(!check_functor(&c, &c, &bad).is_ok());
    }

    #[test]
    fn product_coordinates() {
        let a = FiniteCategory::walking_arrow();
        let c = FiniteCategory::chain(3);
        let p = product(&a, &c).unwrap();
        assert!(check_category(&p.category).is_ok());
        assert_eq!(p.category.morphism_count(), a.morphism_count() * c.morphism_count());
        for f in 0..p.category.morphism_count() {
            let co = p.morphism_coords(f).to_vec();
            assert_eq!(p.morphism(&co), f);
        }
    }

    #[test]
    fn subcategory_view() {
        let c: CatRef = Arc::new(FiniteCategory::chain(4));
        let s = Subcategory::new(c, vec![0, 2, 3]);
        assert!(check_category(&s).is_ok());
        assert_eq!(s.object_count(), 3);
    }
}
