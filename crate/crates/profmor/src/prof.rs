//! Profunctors between finite categories.
//!
//! A profunctor `F: C ↛ D` is a functor `D^op × C → Set`, stored over the
//! materialized grid `D^op × C` as a finite set per grid object and a map per
//! grid morphism. `F.act(g, f)` with `g: d' → d` in `D` and `f: c → c'` in `C`
//! is the map `F(d, c) → F(d', c')`.
//!
//! Composition `(G ∘ F)(c'', c) = ∫^{c'} G(c'', c') × F(c', c)` is the quotient
//! of the disjoint union by the relation generated by single middle morphisms,
//! computed with union–find.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;
use thiserror::Error;
use volut_core::fincat::{
    opposite_with_map, product, Category, CategoryJson, FincatError, FiniteCategory, Functor, Mor, Obj,
    ProductCategory, Variance,
};
use volut_core::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfError {
    #[error("category mismatch: {0}")]
    Mismatch(String),
    #[error("resource cap exceeded: {what} needs more than {limit}")]
    Cap { what: String, limit: usize },
    #[error("malformed profunctor data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Fincat(#[from] FincatError),
}

pub type Cat = Arc<FiniteCategory>;

/// Default cap on enumerated families and transformations.
pub const DEFAULT_ENUM_CAP: usize = 200_000;

/// True when both categories have identical tables up to labels.
pub fn same_shape(a: &dyn Category, b: &dyn Category) -> bool {
    let n = a.object_count();
    if n != b.object_count() || a.morphism_count() != b.morphism_count() {
        return false;
    }
    for x in 0..n {
        if a.identity(x) != b.identity(x) {
            return false;
        }
        for y in 0..n {
            if a.hom(x, y) != b.hom(x, y) {
                return false;
            }
        }
    }
    (0..a.morphism_count()).all(|f| {
        a.out_range(a.cod(f)).all(|g| a.try_compose(g, f) == b.try_compose(g, f))
    })
}

/// The grid `D^op × C` of a profunctor `C ↛ D`.
#[derive(Debug)]
pub struct Grid {
    pub source: Cat,
    pub target: Cat,
    pub target_op: Cat,
    pub to_op: Vec<Mor>,
    pub from_op: Vec<Mor>,
    pub product: ProductCategory,
    arrows: Vec<Mor>,
}

impl Grid {
    pub fn new(target: Cat, source: Cat) -> Result<Arc<Grid>, ProfError> {
        let (op, to_op) = opposite_with_map(&*target)?;
        let mut from_op = vec![0; to_op.len()];
        for (f, &g) in to_op.iter().enumerate() {
            from_op[g] = f;
        }
        let product = product(&op, &*source)?;
        let nc = source.morphism_count();
        let mut arrows = vec![0; target.morphism_count() * nc];
        for m in 0..product.category.morphism_count() {
            let c = product.morphism_coords(m);
            arrows[from_op[c[0]] * nc + c[1]] = m;
        }
        Ok(Arc::new(Grid { source, target, target_op: Arc::new(op), to_op, from_op, product, arrows }))
    }

    pub fn cells(&self) -> usize {
        self.product.category.object_count()
    }

    pub fn cell(&self, d: Obj, c: Obj) -> Obj {
        d * self.source.object_count() + c
    }

    pub fn cell_coords(&self, x: Obj) -> (Obj, Obj) {
        let n = self.source.object_count();
        (x / n, x % n)
    }

    /// The grid morphism acting by `g: d' → d` in `D` and `f: c → c'` in `C`.
    pub fn arrow(&self, g: Mor, f: Mor) -> Mor {
        self.arrows[g * self.source.morphism_count() + f]
    }

    pub fn arrow_coords(&self, m: Mor) -> (Mor, Mor) {
        let c = self.product.morphism_coords(m);
        (self.from_op[c[0]], c[1])
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.product.category
    }

    pub fn same_shape_as(&self, other: &Grid) -> bool {
        same_shape(&*self.source, &*other.source) && same_shape(&*self.target, &*other.target)
    }
}

/// Per-cell components of a transformation between profunctors on one grid.
pub type Cells = Vec<Vec<u32>>;

#[derive(Clone, Debug)]
pub struct Profunctor {
    pub grid: Arc<Grid>,
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<u32>>,
}

impl PartialEq for Profunctor {
    fn eq(&self, other: &Self) -> bool {
        self.grid.same_shape_as(&other.grid) && self.sizes == other.sizes && self.maps == other.maps
    }
}

impl Profunctor {
    pub fn source(&self) -> &Cat {
        &self.grid.source
    }

    pub fn target(&self) -> &Cat {
        &self.grid.target
    }

    pub fn size(&self, d: Obj, c: Obj) -> usize {
        self.sizes[self.grid.cell(d, c)]
    }

    /// `F(d, c) → F(d', c')` for `g: d' → d` and `f: c → c'`.
    pub fn act(&self, g: Mor, f: Mor) -> &[u32] {
        &self.maps[self.grid.arrow(g, f)]
    }

    /// `F(d, c) → F(d', c)` for `g: d' → d`.
    pub fn contra(&self, g: Mor, c: Obj) -> &[u32] {
        self.act(g, self.grid.source.identity(c))
    }

    /// `F(d, c) → F(d, c')` for `f: c → c'`.
    pub fn co(&self, f: Mor, d: Obj) -> &[u32] {
        self.act(self.grid.target.identity(d), f)
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Builds a profunctor from element lists and an action on elements.
    ///
    /// `act(g, f, x)` must return an element of the target cell.
    pub fn from_fn<K: Clone + Eq + Hash + std::fmt::Debug>(
        grid: Arc<Grid>,
        mut elements: impl FnMut(Obj, Obj) -> Vec<K>,
        mut act: impl FnMut(Mor, Mor, &K) -> K,
    ) -> Result<Profunctor, ProfError> {
        let n = grid.cells();
        let mut cells: Vec<Vec<K>> = Vec::with_capacity(n);
        let mut index: Vec<HashMap<K, u32>> = Vec::with_capacity(n);
        for x in 0..n {
            let (d, c) = grid.cell_coords(x);
            let els = elements(d, c);
            index.push(els.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect());
            cells.push(els);
        }
        let cat = grid.category();
        let mut maps = Vec::with_capacity(cat.morphism_count());
        for m in 0..cat.morphism_count() {
            let (g, f) = grid.arrow_coords(m);
            let (x, y) = (cat.dom(m), cat.cod(m));
            let mut map = Vec::with_capacity(cells[x].len());
            for k in &cells[x] {
                let img = act(g, f, k);
                match index[y].get(&img) {
                    Some(&i) => map.push(i),
                    None => {
                        return Err(ProfError::Malformed(format!(
                            "action of grid morphism {m} sends {k:?} outside its target cell"
                        )))
                    }
                }
            }
            maps.push(map);
        }
        Ok(Profunctor { sizes: cells.iter().map(Vec::len).collect(), grid, maps })
    }

    pub fn to_json(&self) -> ProfunctorJson {
        let g = &self.grid;
        let (d, c) = (&*g.target, &*g.source);
        let mut cells = Vec::new();
        for x in 0..g.cells() {
            let (a, b) = g.cell_coords(x);
            cells.push(CellJson { target: d.object_label(a), source: c.object_label(b), size: self.sizes[x] });
        }
        let cat = g.category();
        let mut actions = Vec::new();
        for m in 0..cat.morphism_count() {
            if cat.dom(m) == cat.cod(m) && cat.identity(cat.dom(m)) == m {
                continue;
            }
            let (gm, fm) = g.arrow_coords(m);
            actions.push(ActionJson {
                target_morphism: d.morphism_label(gm),
                source_morphism: c.morphism_label(fm),
                map: self.maps[m].clone(),
            });
        }
        ProfunctorJson { source: c.to_json(), target: d.to_json(), cells, actions }
    }

    pub fn from_json(j: &ProfunctorJson) -> Result<Profunctor, ProfError> {
        let source = Arc::new(FiniteCategory::from_json(&j.source)?);
        let target = Arc::new(FiniteCategory::from_json(&j.target)?);
        let grid = Grid::new(target.clone(), source.clone())?;
        let mut sizes = vec![None; grid.cells()];
        for cell in &j.cells {
            let d = target.object_index(&cell.target);
            let c = source.object_index(&cell.source);
            match (d, c) {
                (Some(d), Some(c)) => sizes[grid.cell(d, c)] = Some(cell.size),
                _ => return Err(ProfError::Malformed(format!("unknown cell ({}, {})", cell.target, cell.source))),
            }
        }
        let sizes: Vec<usize> = sizes
            .into_iter()
            .enumerate()
            .map(|(x, s)| s.ok_or_else(|| ProfError::Malformed(format!("cell {x} has no size"))))
            .collect::<Result<_, _>>()?;
        let cat = grid.category();
        let mut maps: Vec<Option<Vec<u32>>> = (0..cat.morphism_count())
            .map(|m| {
                let x = cat.dom(m);
                (cat.identity(x) == m).then(|| (0..sizes[x] as u32).collect())
            })
            .collect();
        for a in &j.actions {
            let g = target.morphism_index(&a.target_morphism);
            let f = source.morphism_index(&a.source_morphism);
            match (g, f) {
                (Some(g), Some(f)) => maps[grid.arrow(g, f)] = Some(a.map.clone()),
                _ => return Err(ProfError::Malformed("action names an unknown morphism".into())),
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(m, x)| x.ok_or_else(|| ProfError::Malformed(format!("grid morphism {m} has no action"))))
            .collect::<Result<_, _>>()?;
        let p = Profunctor { grid, sizes, maps };
        let r = check_profunctor(&p);
        if !r.is_ok() {
            return Err(ProfError::Malformed(r.to_string()));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub target: String,
    pub source: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub target_morphism: String,
    pub source_morphism: String,
    pub map: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfunctorJson {
    pub source: CategoryJson,
    pub target: CategoryJson,
    pub cells: Vec<CellJson>,
    pub actions: Vec<ActionJson>,
}

/// Checks that the tables form a functor `D^op × C → Set`.
pub fn check_profunctor(p: &Profunctor) -> ValidationReport {
    let mut r = ValidationReport::with_limit(50);
    let cat = p.grid.category();
    if p.sizes.len() != cat.object_count() || p.maps.len() != cat.morphism_count() {
        r.push("profunctor-shape", "table lengths do not match the grid");
        return r;
    }
    for m in 0..cat.morphism_count() {
        let (x, y) = (cat.dom(m), cat.cod(m));
        let ok = p.maps[m].len() == p.sizes[x] && p.maps[m].iter().all(|&v| (v as usize) < p.sizes[y]);
        r.require(ok, "profunctor-shape", || format!("grid morphism {m} is not a map between its cells"));
    }
    if !r.is_ok() {
        return r;
    }
    for x in 0..cat.object_count() {
        let id = &p.maps[cat.identity(x)];
        r.require(id.iter().enumerate().all(|(i, &v)| v as usize == i), "profunctor-identity", || {
            format!("identity at cell {x}")
        });
    }
    for f in 0..cat.morphism_count() {
        for g in cat.out_range(cat.cod(f)) {
            let h = cat.compose(g, f);
            let ok = p.maps[f].iter().zip(&p.maps[h]).all(|(&v, &w)| p.maps[g][v as usize] == w);
            r.require(ok, "profunctor-composition", || format!("grid pair ({g}, {f})"));
            if r.full() {
                return r;
            }
        }
    }
    r
}

/// The identity profunctor `C(−, −): C ↛ C`; elements are hom indices.
pub fn hom_profunctor(c: &Cat) -> Result<Profunctor, ProfError> {
    let grid = Grid::new(c.clone(), c.clone())?;
    Profunctor::from_fn(grid, |d, e| c.hom(d, e).collect::<Vec<Mor>>(), |g, f, &x| c.compose(f, c.compose(x, g)))
}

/// Index of `x` within its hom-set.
pub fn hom_index(c: &dyn Category, x: Mor) -> u32 {
    (x - c.hom(c.dom(x), c.cod(x)).start) as u32
}

// ---------------------------------------------------------------------------
// Transformations

/// Checks typing, naturality and, when `iso` is set, invertibility of `t: src ⇒ tgt`.
pub fn check_transformation(src: &Profunctor, tgt: &Profunctor, t: &Cells, iso: bool) -> ValidationReport {
    let mut r = ValidationReport::with_limit(50);
    if !src.grid.same_shape_as(&tgt.grid) {
        r.push("transformation-shape", "endpoints live on different grids");
        return r;
    }
    let cat = src.grid.category();
    if t.len() != cat.object_count() {
        r.push("transformation-shape", "wrong number of components");
        return r;
    }
    for x in 0..cat.object_count() {
        let ok = t[x].len() == src.sizes[x] && t[x].iter().all(|&v| (v as usize) < tgt.sizes[x]);
        r.require(ok, "transformation-shape", || format!("component at cell {x}"));
    }
    if !r.is_ok() {
        return r;
    }
    for m in 0..cat.morphism_count() {
        let (x, y) = (cat.dom(m), cat.cod(m));
        let ok = (0..src.sizes[x]).all(|i| t[y][src.maps[m][i] as usize] == tgt.maps[m][t[x][i] as usize]);
        r.require(ok, "transformation-naturality", || format!("grid morphism {m}"));
        if r.full() {
            return r;
        }
    }
    if iso {
        for x in 0..cat.object_count() {
            let mut seen = vec![false; tgt.sizes[x]];
            let ok = src.sizes[x] == tgt.sizes[x] && t[x].iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true));
            r.require(ok, "transformation-invertible", || format!("component at cell {x}"));
        }
    }
    r
}

/// `s ∘ t`, componentwise.
pub fn vertical(s: &Cells, t: &Cells) -> Cells {
    t.iter().zip(s).map(|(tx, sx)| tx.iter().map(|&v| sx[v as usize]).collect()).collect()
}

pub fn identity_cells(p: &Profunctor) -> Cells {
    p.sizes.iter().map(|&n| (0..n as u32).collect()).collect()
}

/// Inverse of an invertible transformation.
pub fn inverse_cells(t: &Cells) -> Cells {
    t.iter()
        .map(|tx| {
            let mut inv = vec![0; tx.len()];
            for (i, &v) in tx.iter().enumerate() {
                inv[v as usize] = i as u32;
            }
            inv
        })
        .collect()
}

/// All transformations `src ⇒ tgt`, found by backtracking over cells.
pub fn enumerate_transformations(src: &Profunctor, tgt: &Profunctor, cap: usize) -> Result<Vec<Cells>, ProfError> {
    if !src.grid.same_shape_as(&tgt.grid) {
        return Err(ProfError::Mismatch("transformation endpoints on different grids".into()));
    }
    let cat = src.grid.category();
    let n = cat.object_count();
    // constraints checked once both endpoints are assigned
    let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for m in 0..cat.morphism_count() {
        let (x, y) = (cat.dom(m), cat.cod(m));
        if x != y {
            checks[x.max(y)].push(m);
        } else if cat.identity(x) != m {
            checks[x].push(m);
        }
    }
    let mut out = Vec::new();
    let mut cur: Cells = vec![Vec::new(); n];
    fn rec(
        x: usize,
        src: &Profunctor,
        tgt: &Profunctor,
        checks: &[Vec<Mor>],
        cur: &mut Cells,
        out: &mut Vec<Cells>,
        cap: usize,
    ) -> Result<(), ProfError> {
        let cat = src.grid.category();
        if x == cur.len() {
            if out.len() >= cap {
                return Err(ProfError::Cap { what: "transformations".into(), limit: cap });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let (s, t) = (src.sizes[x], tgt.sizes[x]);
        if s > 0 && t == 0 {
            return Ok(());
        }
        let mut digits = vec![0u32; s];
        loop {
            cur[x] = digits.clone();
            let ok = checks[x].iter().all(|&m| {
                let (a, b) = (cat.dom(m), cat.cod(m));
                (0..src.sizes[a]).all(|i| cur[b][src.maps[m][i] as usize] == tgt.maps[m][cur[a][i] as usize])
            });
            if ok {
                rec(x + 1, src, tgt, checks, cur, out, cap)?;
            }
            if !advance(&mut digits, t as u32) {
                break;
            }
        }
        Ok(())
    }
    rec(0, src, tgt, &checks, &mut cur, &mut out, cap)?;
    Ok(out)
}

/// Odometer step over `digits ∈ {0..base}^k`; false after the last tuple.
pub(crate) fn advance(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

// ---------------------------------------------------------------------------
// Set-valued functors on a grid

/// Constraints `(g, f, h)` with `g ∘ f = h`, bucketed by the position of the
/// last of the three in the assignment order.
fn composition_constraints(cat: &FiniteCategory, order: &[Mor]) -> Vec<Vec<(Mor, Mor, Mor)>> {
    let mut pos = vec![usize::MAX; cat.morphism_count()];
    for (i, &m) in order.iter().enumerate() {
        pos[m] = i;
    }
    let rank = |m: Mor| if pos[m] == usize::MAX { None } else { Some(pos[m]) };
    let mut buckets = vec![Vec::new(); order.len()];
    for f in 0..cat.morphism_count() {
        for g in cat.out_range(cat.cod(f)) {
            let h = cat.compose(g, f);
            let last = [rank(g), rank(f), rank(h)].into_iter().flatten().max();
            if let Some(k) = last {
                buckets[k].push((g, f, h));
            }
        }
    }
    buckets
}

struct SetFunctorSearch<'a> {
    cat: &'a FiniteCategory,
    sizes: &'a [usize],
    order: Vec<Mor>,
    buckets: Vec<Vec<(Mor, Mor, Mor)>>,
    maps: Vec<Vec<u32>>,
    budget: usize,
}

impl<'a> SetFunctorSearch<'a> {
    fn new(cat: &'a FiniteCategory, sizes: &'a [usize]) -> Self {
        let order: Vec<Mor> =
            (0..cat.morphism_count()).filter(|&m| cat.identity(cat.dom(m)) != m).collect();
        let buckets = composition_constraints(cat, &order);
        let maps = (0..cat.morphism_count())
            .map(|m| if cat.identity(cat.dom(m)) == m { (0..sizes[cat.dom(m)] as u32).collect() } else { Vec::new() })
            .collect();
        SetFunctorSearch { cat, sizes, order, buckets, maps, budget: usize::MAX }
    }

    fn consistent(&self, k: usize) -> bool {
        self.buckets[k].iter().all(|&(g, f, h)| {
            self.maps[f].iter().zip(&self.maps[h]).all(|(&v, &w)| self.maps[g][v as usize] == w)
        })
    }

    fn candidates(&self, m: Mor) -> Vec<Vec<u32>> {
        let (s, t) = (self.sizes[self.cat.dom(m)], self.sizes[self.cat.cod(m)] as u32);
        if s > 0 && t == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut digits = vec![0u32; s];
        loop {
            out.push(digits.clone());
            if !advance(&mut digits, t) {
                break;
            }
        }
        out
    }

    /// Depth-first search; `visit` returns false to stop.
    fn run(&mut self, k: usize, rng: &mut Option<&mut dyn rand::RngCore>, visit: &mut dyn FnMut(&[Vec<u32>]) -> bool) -> Option<bool> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        if k == self.order.len() {
            return Some(visit(&self.maps));
        }
        let m = self.order[k];
        let mut cands = self.candidates(m);
        if let Some(r) = rng.as_mut() {
            cands.shuffle(r);
        }
        for cand in cands {
            self.maps[m] = cand;
            if self.consistent(k) && !self.run(k + 1, rng, visit)? {
                return Some(false);
            }
        }
        self.maps[m] = Vec::new();
        Some(true)
    }
}

/// All set-valued functors on the grid with the given cell sizes.
pub fn enumerate_with_sizes(grid: &Arc<Grid>, sizes: &[usize], cap: usize) -> Result<Vec<Profunctor>, ProfError> {
    let cat = grid.category();
    let mut search = SetFunctorSearch::new(cat, sizes);
    let mut out = Vec::new();
    let mut over = false;
    search.run(0, &mut None, &mut |maps| {
        if out.len() >= cap {
            over = true;
            return false;
        }
        out.push(Profunctor { grid: grid.clone(), sizes: sizes.to_vec(), maps: maps.to_vec() });
        true
    });
    if over {
        return Err(ProfError::Cap { what: "profunctors".into(), limit: cap });
    }
    Ok(out)
}

/// Every profunctor on the grid with all cells of size `≤ max_size`.
pub fn enumerate_profunctors(grid: &Arc<Grid>, max_size: usize, cap: usize) -> Result<Vec<Profunctor>, ProfError> {
    let n = grid.cells();
    let mut out = Vec::new();
    let mut sizes = vec![0u32; n];
    loop {
        let s: Vec<usize> = sizes.iter().map(|&x| x as usize).collect();
        let mut batch = enumerate_with_sizes(grid, &s, cap.saturating_sub(out.len()).max(1))?;
        out.append(&mut batch);
        if out.len() > cap {
            return Err(ProfError::Cap { what: "profunctors".into(), limit: cap });
        }
        if !advance(&mut sizes, max_size as u32 + 1) {
            break;
        }
    }
    Ok(out)
}

/// A random profunctor with cells of size `≤ max_size`. Sizes are drawn
/// at random and the actions by randomized backtracking; after repeated
/// failures the constant singleton profunctor is returned.
pub fn random_profunctor<R: Rng>(rng: &mut R, grid: &Arc<Grid>, max_size: usize) -> Profunctor {
    let cat = grid.category();
    for _ in 0..20 {
        let mut sizes: Vec<usize> = (0..grid.cells()).map(|_| rng.gen_range(0..=max_size)).collect();
        loop {
            let mut changed = false;
            for m in 0..cat.morphism_count() {
                if sizes[cat.dom(m)] > 0 && sizes[cat.cod(m)] == 0 {
                    sizes[cat.cod(m)] = 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut search = SetFunctorSearch::new(cat, &sizes);
        search.budget = 20_000;
        let mut found = None;
        let mut dynrng: Option<&mut dyn rand::RngCore> = Some(&mut *rng);
        search.run(0, &mut dynrng, &mut |maps| {
            found = Some(maps.to_vec());
            false
        });
        if let Some(maps) = found {
            return Profunctor { grid: grid.clone(), sizes, maps };
        }
    }
    constant_profunctor(grid, 1)
}

/// The profunctor with every cell `{0..k}` and identity actions.
pub fn constant_profunctor(grid: &Arc<Grid>, k: usize) -> Profunctor {
    let cat = grid.category();
    Profunctor {
        grid: grid.clone(),
        sizes: vec![k; grid.cells()],
        maps: (0..cat.morphism_count()).map(|_| (0..k as u32).collect()).collect(),
    }
}

// ---------------------------------------------------------------------------
// Composition

/// A composite `G ∘ F` together with the coend classes of its elements.
#[derive(Clone, Debug)]
pub struct Composite {
    pub profunctor: Profunctor,
    /// `classes[cell][m][i * |F(m, c)| + j]` is the class of `(i, j)` over `m`.
    classes: Vec<Vec<Vec<u32>>>,
    reps: Vec<Vec<(Obj, u32, u32)>>,
    inner_sizes: Vec<Vec<usize>>,
}

impl Composite {
    pub fn class_of(&self, d: Obj, c: Obj, m: Obj, i: u32, j: u32) -> u32 {
        let x = self.profunctor.grid.cell(d, c);
        self.classes[x][m][i as usize * self.inner_sizes[x][m] + j as usize]
    }

    /// A representative `(m, i, j)` of class `k` at cell `(d, c)`.
    pub fn representative(&self, d: Obj, c: Obj, k: u32) -> (Obj, u32, u32) {
        self.reps[self.profunctor.grid.cell(d, c)][k as usize]
    }

    /// Every `(m, i, j)` at cell `(d, c)` with its class.
    pub fn members(&self, d: Obj, c: Obj) -> impl Iterator<Item = (Obj, u32, u32, u32)> + '_ {
        let x = self.profunctor.grid.cell(d, c);
        let inner = &self.inner_sizes[x];
        self.classes[x].iter().enumerate().flat_map(move |(m, cl)| {
            let w = inner[m].max(1);
            cl.iter().enumerate().map(move |(k, &v)| (m, (k / w) as u32, (k % w) as u32, v))
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// `G ∘ F` for `F: C ↛ C'` and `G: C' ↛ C''`.
pub fn prof_compose(g: &Profunctor, f: &Profunctor) -> Result<Composite, ProfError> {
    let mid = &g.grid.source;
    if !same_shape(&**mid, &*f.grid.target) {
        return Err(ProfError::Mismatch("middle categories differ".into()));
    }
    let grid = Grid::new(g.grid.target.clone(), f.grid.source.clone())?;
    let nm = mid.object_count();
    let mut classes = Vec::with_capacity(grid.cells());
    let mut reps = Vec::with_capacity(grid.cells());
    let mut inner_sizes = Vec::with_capacity(grid.cells());
    for x in 0..grid.cells() {
        let (d, c) = grid.cell_coords(x);
        let widths: Vec<usize> = (0..nm).map(|m| f.size(m, c)).collect();
        let mut offsets = Vec::with_capacity(nm + 1);
        let mut total = 0;
        for m in 0..nm {
            offsets.push(total);
            total += g.size(d, m) * widths[m];
        }
        let mut uf = UnionFind((0..total).collect());
        for h in 0..mid.morphism_count() {
            let (m1, m2) = (mid.dom(h), mid.cod(h));
            if m1 == m2 && mid.identity(m1) == h {
                continue;
            }
            let gh = g.co(h, d);
            let fh = f.contra(h, c);
            for i in 0..g.size(d, m1) {
                for j in 0..f.size(m2, c) {
                    let a = offsets[m2] + gh[i] as usize * widths[m2] + j;
                    let b = offsets[m1] + i * widths[m1] + fh[j] as usize;
                    uf.union(a, b);
                }
            }
        }
        let mut label = vec![u32::MAX; total];
        let mut cell_reps = Vec::new();
        let mut cell_classes = Vec::with_capacity(nm);
        for m in 0..nm {
            let mut cl = Vec::with_capacity(g.size(d, m) * widths[m]);
            for k in 0..g.size(d, m) * widths[m] {
                let root = uf.find(offsets[m] + k);
                if label[root] == u32::MAX {
                    label[root] = cell_reps.len() as u32;
                    cell_reps.push((m, (k / widths[m]) as u32, (k % widths[m]) as u32));
                }
                cl.push(label[root]);
            }
            cell_classes.push(cl);
        }
        classes.push(cell_classes);
        reps.push(cell_reps);
        inner_sizes.push(widths);
    }
    let sizes: Vec<usize> = reps.iter().map(Vec::len).collect();
    let cat = grid.category();
    let mut maps = Vec::with_capacity(cat.morphism_count());
    for arrow in 0..cat.morphism_count() {
        let (gm, fm) = grid.arrow_coords(arrow);
        let (x, y) = (cat.dom(arrow), cat.cod(arrow));
        let mut map = vec![u32::MAX; sizes[x]];
        for m in 0..nm {
            let ga = g.contra(gm, m);
            let fa = f.co(fm, m);
            let (wx, wy) = (inner_sizes[x][m], inner_sizes[y][m]);
            for (k, &cls) in classes[x][m].iter().enumerate() {
                let (i, j) = (k / wx, k % wx);
                let img = classes[y][m][ga[i] as usize * wy + fa[j] as usize];
                let slot = &mut map[cls as usize];
                if *slot == u32::MAX {
                    *slot = img;
                } else if *slot != img {
                    return Err(ProfError::Malformed(format!("coend action of grid morphism {arrow} is not well defined")));
                }
            }
        }
        maps.push(map);
    }
    Ok(Composite { profunctor: Profunctor { grid, sizes, maps }, classes, reps, inner_sizes })
}

/// Coend classes at one cell computed from the relation generated by every
/// middle morphism, closed by boolean transitive closure.
pub fn coend_partition_by_closure(g: &Profunctor, f: &Profunctor, d: Obj, c: Obj) -> Vec<Vec<(Obj, u32, u32)>> {
    let mid = &g.grid.source;
    let mut elems = Vec::new();
    for m in 0..mid.object_count() {
        for i in 0..g.size(d, m) as u32 {
            for j in 0..f.size(m, c) as u32 {
                elems.push((m, i, j));
            }
        }
    }
    let pos: HashMap<(Obj, u32, u32), usize> = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let n = elems.len();
    let mut rel = vec![vec![false; n]; n];
    for k in 0..n {
        rel[k][k] = true;
    }
    for h in 0..mid.morphism_count() {
        let (m1, m2) = (mid.dom(h), mid.cod(h));
        for i in 0..g.size(d, m1) as u32 {
            for j in 0..f.size(m2, c) as u32 {
                let a = pos[&(m2, g.co(h, d)[i as usize], j)];
                let b = pos[&(m1, i, f.contra(h, c)[j as usize])];
                rel[a][b] = true;
                rel[b][a] = true;
            }
        }
    }
    for k in 0..n {
        for a in 0..n {
            if rel[a][k] {
                for b in 0..n {
                    if rel[k][b] {
                        rel[a][b] = true;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if !seen[a] {
            let class: Vec<_> = (0..n).filter(|&b| rel[a][b]).collect();
            for &b in &class {
                seen[b] = true;
            }
            out.push(class.into_iter().map(|b| elems[b]).collect());
        }
    }
    out
}

/// Horizontal composite `β ∘ α: G ∘ F ⇒ G' ∘ F'` of `α: F ⇒ F'` and `β: G ⇒ G'`.
pub fn horizontal(from: &Composite, to: &Composite, beta: &Cells, alpha: &Cells) -> Cells {
    let grid = &from.profunctor.grid;
    let nc = grid.source.object_count();
    let mut out = Vec::with_capacity(grid.cells());
    for x in 0..grid.cells() {
        let (d, c) = grid.cell_coords(x);
        let nm = from.inner_sizes[x].len();
        let comp = (0..from.profunctor.sizes[x] as u32)
            .map(|k| {
                let (m, i, j) = from.representative(d, c, k);
                to.class_of(d, c, m, beta[d * nm + m][i as usize], alpha[m * nc + c][j as usize])
            })
            .collect();
        out.push(comp);
    }
    out
}

// ---------------------------------------------------------------------------
// Certificates

/// `id_D ∘ F ≅ F`: the class of `(φ, x)` goes to `F(φ, id) x`.
pub fn yoneda_left(f: &Profunctor) -> Result<(Composite, Cells), ProfError> {
    let d = f.target().clone();
    let comp = prof_compose(&hom_profunctor(&d)?, f)?;
    let grid = &comp.profunctor.grid;
    let mut cells = Vec::with_capacity(grid.cells());
    for x in 0..grid.cells() {
        let (a, c) = grid.cell_coords(x);
        let comps = (0..comp.profunctor.sizes[x] as u32)
            .map(|k| {
                let (m, i, j) = comp.representative(a, c, k);
                let phi = d.hom(a, m).start + i as usize;
                f.contra(phi, c)[j as usize]
            })
            .collect();
        cells.push(comps);
    }
    Ok((comp, cells))
}

/// `F ∘ id_C ≅ F`: the class of `(x, ψ)` goes to `F(id, ψ) x`.
pub fn yoneda_right(f: &Profunctor) -> Result<(Composite, Cells), ProfError> {
    let c = f.source().clone();
    let comp = prof_compose(f, &hom_profunctor(&c)?)?;
    let grid = &comp.profunctor.grid;
    let mut cells = Vec::with_capacity(grid.cells());
    for x in 0..grid.cells() {
        let (a, b) = grid.cell_coords(x);
        let comps = (0..comp.profunctor.sizes[x] as u32)
            .map(|k| {
                let (m, i, j) = comp.representative(a, b, k);
                let psi = c.hom(m, b).start + j as usize;
                f.co(psi, a)[i as usize]
            })
            .collect();
        cells.push(comps);
    }
    Ok((comp, cells))
}

/// The comparison `(H ∘ G) ∘ F → H ∘ (G ∘ F)` built from triples, or an
/// error naming the first triple where the two quotients disagree.
pub fn associator(h: &Profunctor, g: &Profunctor, f: &Profunctor) -> Result<(Composite, Composite, Cells), ProfError> {
    let hg = prof_compose(h, g)?;
    let left = prof_compose(&hg.profunctor, f)?;
    let gf = prof_compose(g, f)?;
    let right = prof_compose(h, &gf.profunctor)?;
    let grid = left.profunctor.grid.clone();
    let (c1, c2) = (g.source().object_count(), h.source().object_count());
    let mut cells = Vec::with_capacity(grid.cells());
    for x in 0..grid.cells() {
        let (d, c) = grid.cell_coords(x);
        let mut map = vec![u32::MAX; left.profunctor.sizes[x]];
        for m2 in 0..c2 {
            for m1 in 0..c1 {
                for ih in 0..h.size(d, m2) as u32 {
                    for ig in 0..g.size(m2, m1) as u32 {
                        for jf in 0..f.size(m1, c) as u32 {
                            let l = left.class_of(d, c, m1, hg.class_of(d, m1, m2, ih, ig), jf);
                            let r = right.class_of(d, c, m2, ih, gf.class_of(m2, c, m1, ig, jf));
                            let slot = &mut map[l as usize];
                            if *slot == u32::MAX {
                                *slot = r;
                            } else if *slot != r {
                                return Err(ProfError::Malformed(format!(
                                    "triple quotients disagree at cell ({d}, {c})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        cells.push(map);
    }
    Ok((left, right, cells))
}

// ---------------------------------------------------------------------------
// Products, opposites, reindexing

/// The external product `F × G: C × C' ↛ D × D'`; the element `(x, y)` has
/// index `x * |G(d', c')| + y`.
pub fn prof_product(f: &Profunctor, g: &Profunctor) -> Result<Profunctor, ProfError> {
    let src = product(&**f.source(), &**g.source())?;
    let tgt = product(&**f.target(), &**g.target())?;
    let grid = Grid::new(Arc::new(tgt.category.clone()), Arc::new(src.category.clone()))?;
    Profunctor::from_fn(
        grid,
        |d, c| {
            let (dc, cc) = (tgt.object_coords(d), src.object_coords(c));
            let (n1, n2) = (f.size(dc[0], cc[0]), g.size(dc[1], cc[1]));
            (0..n1 as u32).flat_map(|a| (0..n2 as u32).map(move |b| (a, b))).collect::<Vec<_>>()
        },
        |gm, fm, &(a, b)| {
            let (gc, fc) = (tgt.morphism_coords(gm), src.morphism_coords(fm));
            (f.act(gc[0], fc[0])[a as usize], g.act(gc[1], fc[1])[b as usize])
        },
    )
}

/// `F^op: D^op ↛ C^op` with `F^op(c, d) = F(d, c)`.
pub fn prof_opposite(f: &Profunctor) -> Result<Profunctor, ProfError> {
    let (c_op, c_to) = opposite_with_map(&**f.source())?;
    let mut c_from = vec![0; c_to.len()];
    for (a, &b) in c_to.iter().enumerate() {
        c_from[b] = a;
    }
    let grid = Grid::new(Arc::new(c_op), f.grid.target_op.clone())?;
    let d_from = &f.grid.from_op;
    Profunctor::from_fn(
        grid,
        |c, d| (0..f.size(d, c) as u32).collect::<Vec<_>>(),
        |g, h, &x| f.act(d_from[h], c_from[g])[x as usize],
    )
}

/// `F(ψ −, φ −): C' ↛ D'` for covariant `φ: C' → C` and `ψ: D' → D`.
pub fn prof_reindex(f: &Profunctor, source: &Cat, phi: &Functor, target: &Cat, psi: &Functor) -> Result<Profunctor, ProfError> {
    if phi.variance != Variance::Covariant || psi.variance != Variance::Covariant {
        return Err(ProfError::Mismatch("reindexing needs covariant functors".into()));
    }
    let grid = Grid::new(target.clone(), source.clone())?;
    Profunctor::from_fn(
        grid,
        |d, c| (0..f.size(psi.obj[d], phi.obj[c]) as u32).collect::<Vec<_>>(),
        |g, h, &x| f.act(psi.mor[g], phi.mor[h])[x as usize],
    )
}

/// `D(1, φ): C ↛ D`, the covariant embedding of `φ: C → D`.
pub fn representable_covariant(c: &Cat, d: &Cat, phi: &Functor) -> Result<Profunctor, ProfError> {
    let grid = Grid::new(d.clone(), c.clone())?;
    Profunctor::from_fn(grid, |a, b| d.hom(a, phi.obj[b]).collect::<Vec<Mor>>(), |g, f, &x| {
        d.compose(phi.mor[f], d.compose(x, g))
    })
}

/// `D(φ, 1): D ↛ C`, the contravariant embedding of `φ: C → D`.
pub fn representable_contravariant(c: &Cat, d: &Cat, phi: &Functor) -> Result<Profunctor, ProfError> {
    let grid = Grid::new(c.clone(), d.clone())?;
    Profunctor::from_fn(grid, |a, b| d.hom(phi.obj[a], b).collect::<Vec<Mor>>(), |g, f, &x| {
        d.compose(f, d.compose(x, phi.mor[g]))
    })
}

// ---------------------------------------------------------------------------
// Duals

/// Evaluation `C^op × C ↛ 1` and coevaluation `1 ↛ C × C^op`, both given by
/// hom-sets of `C`.
pub struct DualData {
    pub category: Cat,
    pub op: Cat,
    pub to_op: Vec<Mor>,
    pub from_op: Vec<Mor>,
    pub ev: Profunctor,
    pub coev: Profunctor,
}

pub fn prof_dual_data(c: &Cat) -> Result<DualData, ProfError> {
    let (op, to_op) = opposite_with_map(&**c)?;
    let op = Arc::new(op);
    let mut from_op = vec![0; to_op.len()];
    for (a, &b) in to_op.iter().enumerate() {
        from_op[b] = a;
    }
    let one: Cat = Arc::new(FiniteCategory::terminal());
    let oc = product(&*op, &**c)?;
    let co = product(&**c, &*op)?;
    let ev = Profunctor::from_fn(
        Grid::new(one.clone(), Arc::new(oc.category.clone()))?,
        |_, x| {
            let v = oc.object_coords(x);
            c.hom(v[0], v[1]).collect::<Vec<Mor>>()
        },
        |_, f, &phi| {
            let v = oc.morphism_coords(f);
            c.compose(v[1], c.compose(phi, from_op[v[0]]))
        },
    )?;
    let coev = Profunctor::from_fn(
        Grid::new(Arc::new(co.category.clone()), one)?,
        |x, _| {
            let v = co.object_coords(x);
            c.hom(v[0], v[1]).collect::<Vec<Mor>>()
        },
        |g, _, &phi| {
            let v = co.morphism_coords(g);
            c.compose(from_op[v[1]], c.compose(phi, v[0]))
        },
    )?;
    Ok(DualData { category: c.clone(), op, to_op, from_op, ev, coev })
}

/// Both Zorro composites with their comparison maps to the identity profunctors.
pub struct ZorroCertificate {
    pub zig: Composite,
    pub zig_iso: Cells,
    pub zag: Composite,
    pub zag_iso: Cells,
    pub report: ValidationReport,
}

/// Builds `(id_C × ev) ∘ (coev × id_C)` and `(ev × id_{C^op}) ∘ (id_{C^op} × coev)`
/// with `prof_compose` and checks them naturally isomorphic to the identities.
pub fn verify_prof_zorro(c: &Cat) -> Result<ZorroCertificate, ProfError> {
    let dual = prof_dual_data(c)?;
    let n = c.object_count();
    let id_c = hom_profunctor(c)?;
    let id_op = hom_profunctor(&dual.op)?;
    let first = prof_product(&dual.coev, &id_c)?;
    let second = prof_product(&id_c, &dual.ev)?;
    let zig = prof_compose(&second, &first)?;
    let coords = |t: Obj| (t / (n * n), (t / n) % n, t % n);
    let split = |i: u32, w: usize| (i as usize / w.max(1), i as usize % w.max(1));
    let mut zig_iso = Vec::new();
    for x in 0..zig.profunctor.grid.cells() {
        let (a, b) = zig.profunctor.grid.cell_coords(x);
        let comps = (0..zig.profunctor.sizes[x] as u32)
            .map(|k| {
                let (t, i, j) = zig.representative(a, b, k);
                let (p1, p2, p3) = coords(t);
                let (ip, iq) = split(i, c.hom(p2, p3).len());
                let (ir, is) = split(j, c.hom(p3, b).len());
                let p = c.hom(a, p1).start + ip;
                let q = c.hom(p2, p3).start + iq;
                let r = c.hom(p1, p2).start + ir;
                let s = c.hom(p3, b).start + is;
                hom_index(&**c, c.compose(s, c.compose(q, c.compose(r, p))))
            })
            .collect();
        zig_iso.push(comps);
    }
    let op = &dual.op;
    let first = prof_product(&id_op, &dual.coev)?;
    let second = prof_product(&dual.ev, &id_op)?;
    let zag = prof_compose(&second, &first)?;
    let mut zag_iso = Vec::new();
    for x in 0..zag.profunctor.grid.cells() {
        let (a, b) = zag.profunctor.grid.cell_coords(x);
        let comps = (0..zag.profunctor.sizes[x] as u32)
            .map(|k| {
                let (t, i, j) = zag.representative(a, b, k);
                let (p1, p2, p3) = coords(t);
                let (ir, is) = split(i, op.hom(a, p3).len());
                let (ip, iq) = split(j, c.hom(p2, p3).len());
                let r = c.hom(p1, p2).start + ir;
                let s = dual.from_op[op.hom(a, p3).start + is];
                let p = dual.from_op[op.hom(p1, b).start + ip];
                let q = c.hom(p2, p3).start + iq;
                let v = c.compose(s, c.compose(q, c.compose(r, p)));
                hom_index(&**op, dual.to_op[v])
            })
            .collect();
        zag_iso.push(comps);
    }
    let mut report = ValidationReport::new();
    for v in check_transformation(&zig.profunctor, &id_c, &zig_iso, true).violations {
        report.push(&format!("zorro-first/{}", v.law), v.detail);
    }
    for v in check_transformation(&zag.profunctor, &id_op, &zag_iso, true).violations {
        report.push(&format!("zorro-second/{}", v.law), v.detail);
    }
    Ok(ZorroCertificate { zig, zig_iso, zag, zag_iso, report })
}

// ---------------------------------------------------------------------------
// Internal hom

/// `Y^X: D ↛ E` for `X: C ↛ D` and `Y: C ↛ E`, with the natural families
/// forming each cell. A family lists, per object `c`, a map `X(d, c) → Y(e, c)`.
#[derive(Clone, Debug)]
pub struct InternalHom {
    pub profunctor: Profunctor,
    pub families: Vec<Vec<Vec<Vec<u32>>>>,
}

impl InternalHom {
    pub fn family(&self, e: Obj, d: Obj, k: u32) -> &[Vec<u32>] {
        &self.families[self.profunctor.grid.cell(e, d)][k as usize]
    }
}

/// Natural families `X(d, −) ⇒ Y(e, −)`, by backtracking over objects of `C`.
pub fn natural_families(x: &Profunctor, y: &Profunctor, d: Obj, e: Obj, cap: usize) -> Result<Vec<Vec<Vec<u32>>>, ProfError> {
    let c = x.source();
    let n = c.object_count();
    let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for f in 0..c.morphism_count() {
        let (a, b) = (c.dom(f), c.cod(f));
        if !(a == b && c.identity(a) == f) {
            checks[a.max(b)].push(f);
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<Vec<u32>> = vec![Vec::new(); n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        x: &Profunctor,
        y: &Profunctor,
        d: Obj,
        e: Obj,
        checks: &[Vec<Mor>],
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
        cap: usize,
    ) -> Result<(), ProfError> {
        if k == cur.len() {
            if out.len() >= cap {
                return Err(ProfError::Cap { what: "natural families".into(), limit: cap });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let (s, t) = (x.size(d, k), y.size(e, k));
        if s > 0 && t == 0 {
            return Ok(());
        }
        let c = x.source();
        let mut digits = vec![0u32; s];
        loop {
            cur[k] = digits.clone();
            let ok = checks[k].iter().all(|&f| {
                let (a, b) = (c.dom(f), c.cod(f));
                let (xf, yf) = (x.co(f, d), y.co(f, e));
                (0..x.size(d, a)).all(|i| yf[cur[a][i] as usize] == cur[b][xf[i] as usize])
            });
            if ok {
                rec(k + 1, x, y, d, e, checks, cur, out, cap)?;
            }
            if !advance(&mut digits, t as u32) {
                break;
            }
        }
        Ok(())
    }
    rec(0, x, y, d, e, &checks, &mut cur, &mut out, cap)?;
    Ok(out)
}

pub fn prof_internal_hom(x: &Profunctor, y: &Profunctor, cap: usize) -> Result<InternalHom, ProfError> {
    if !same_shape(&**x.source(), &**y.source()) {
        return Err(ProfError::Mismatch("internal hom needs a common source".into()));
    }
    let (dcat, ecat) = (x.target().clone(), y.target().clone());
    let grid = Grid::new(ecat.clone(), dcat.clone())?;
    let mut families = Vec::with_capacity(grid.cells());
    let mut budget = cap;
    for cell in 0..grid.cells() {
        let (e, d) = grid.cell_coords(cell);
        let fams = natural_families(x, y, d, e, budget)?;
        budget -= fams.len();
        families.push(fams);
    }
    let index: Vec<HashMap<&Vec<Vec<u32>>, u32>> = families
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, f)| (f, i as u32)).collect())
        .collect();
    let nc = x.source().object_count();
    let cat = grid.category();
    let mut maps = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (k, g) = grid.arrow_coords(m);
        let (src, tgt) = (cat.dom(m), cat.cod(m));
        let mut map = Vec::with_capacity(families[src].len());
        for fam in &families[src] {
            let moved: Vec<Vec<u32>> = (0..nc)
                .map(|c| {
                    let xg = x.contra(g, c);
                    let yk = y.contra(k, c);
                    xg.iter().map(|&i| yk[fam[c][i as usize] as usize]).collect()
                })
                .collect();
            match index[tgt].get(&moved) {
                Some(&i) => map.push(i),
                None => return Err(ProfError::Malformed("internal hom action leaves the natural families".into())),
            }
        }
        maps.push(map);
    }
    let sizes = families.iter().map(Vec::len).collect();
    Ok(InternalHom { profunctor: Profunctor { grid, sizes, maps }, families })
}

/// Outcome of the enumerated adjunction `Hom(Z, Y^X) ≅ Hom(Z ∘ X, Y)`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionCheck {
    pub left: usize,
    pub right: usize,
    pub naturality_cases: usize,
    pub report: ValidationReport,
}

/// Transposes `β: Z ⇒ Y^X` to `Z ∘ X ⇒ Y` by evaluation.
pub fn transpose(ih: &InternalHom, zx: &Composite, beta: &Cells) -> Result<Cells, ProfError> {
    let grid = &zx.profunctor.grid;
    let zgrid_src = ih.profunctor.grid.source.object_count();
    let mut out = Vec::with_capacity(grid.cells());
    for x in 0..grid.cells() {
        let (e, c) = grid.cell_coords(x);
        let mut map = vec![u32::MAX; zx.profunctor.sizes[x]];
        for (d, i, j, cls) in zx.members(e, c) {
            let fam = ih.family(e, d, beta[e * zgrid_src + d][i as usize]);
            let v = fam[c][j as usize];
            let slot = &mut map[cls as usize];
            if *slot == u32::MAX {
                *slot = v;
            } else if *slot != v {
                return Err(ProfError::Malformed("transpose is not constant on a coend class".into()));
            }
        }
        out.push(map);
    }
    Ok(out)
}

/// Enumerates both sides, checks that transposition is a bijection between
/// them, and checks naturality in `Z` against its endo-transformations.
pub fn verify_ihom_adjunction(z: &Profunctor, x: &Profunctor, y: &Profunctor, cap: usize) -> Result<AdjunctionCheck, ProfError> {
    let ih = prof_internal_hom(x, y, cap)?;
    let zx = prof_compose(z, x)?;
    let left = enumerate_transformations(z, &ih.profunctor, cap)?;
    let right = enumerate_transformations(&zx.profunctor, y, cap)?;
    let index: HashMap<&Cells, usize> = right.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut report = ValidationReport::with_limit(20);
    let mut hit = vec![false; right.len()];
    let mut images = Vec::with_capacity(left.len());
    for beta in &left {
        let gamma = transpose(&ih, &zx, beta)?;
        match index.get(&gamma) {
            Some(&i) => {
                report.require(!std::mem::replace(&mut hit[i], true), "adjunction-injective", || {
                    "two transformations share a transpose".into()
                });
                images.push(i);
            }
            None => {
                report.push("adjunction-natural", "transpose is not a transformation");
                images.push(usize::MAX);
            }
        }
    }
    report.require(left.len() == right.len(), "adjunction-count", || {
        format!("|Hom(Z, Y^X)| = {} but |Hom(Z∘X, Y)| = {}", left.len(), right.len())
    });
    let endos = enumerate_transformations(z, z, 64).unwrap_or_default();
    let mut naturality_cases = 0;
    for zeta in endos.iter().take(8) {
        let zeta_x = horizontal(&zx, &zx, zeta, &identity_cells(x));
        for (beta, &img) in left.iter().zip(&images).take(16) {
            if img == usize::MAX {
                continue;
            }
            naturality_cases += 1;
            let pre = transpose(&ih, &zx, &vertical(beta, zeta))?;
            let post = vertical(&right[img], &zeta_x);
            report.require(pre == post, "adjunction-naturality", || "precomposition does not commute with transposition".into());
        }
    }
    Ok(AdjunctionCheck { left: left.len(), right: right.len(), naturality_cases, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use volut_core::fincat::{enumerate_functors, random_concrete_category};

    fn cat(c: FiniteCategory) -> Cat {
        Arc::new(c)
    }

    fn one() -> Cat {
        cat(FiniteCategory::terminal())
    }

    #[test]
    fn hom_is_a_profunctor() {
        for c in [FiniteCategory::terminal(), FiniteCategory::walking_arrow(), FiniteCategory::chain(3)] {
            let p = hom_profunctor(&cat(c)).unwrap();
            assert!(check_profunctor(&p).is_ok());
        }
    }

    #[test]
    fn composition_over_terminal_is_product() {
        let g = Grid::new(one(), one()).unwrap();
        let a = constant_profunctor(&g, 2);
        let b = constant_profunctor(&g, 3);
        let comp = prof_compose(&a, &b).unwrap();
        assert_eq!(comp.profunctor.sizes, vec![6]);
    }

    #[test]
    fn composition_over_discrete_is_disjoint_union() {
        let two = cat(FiniteCategory::discrete(2));
        let f = Profunctor::from_fn(Grid::new(two.clone(), one()).unwrap(), |d, _| (0..d as u32 + 1).collect::<Vec<_>>(), |_, _, &x| x).unwrap();
        let g = Profunctor::from_fn(Grid::new(one(), two).unwrap(), |_, c| (0..c as u32 + 2).collect::<Vec<_>>(), |_, _, &x| x).unwrap();
        let comp = prof_compose(&g, &f).unwrap();
        assert_eq!(comp.profunctor.sizes, vec![1 * 2 + 2 * 3]);
    }

    #[test]
    fn union_find_classes_match_transitive_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let c = cat(random_concrete_category(&mut rng, 3, 8, 2, 6));
            let d = cat(random_concrete_category(&mut rng, 2, 5, 2, 6));
            let e = cat(random_concrete_category(&mut rng, 2, 5, 2, 6));
            let f = random_profunctor(&mut rng, &Grid::new(d.clone(), c.clone()).unwrap(), 2);
            let g = random_profunctor(&mut rng, &Grid::new(e.clone(), d.clone()).unwrap(), 2);
            assert!(check_profunctor(&f).is_ok() && check_profunctor(&g).is_ok());
            let comp = prof_compose(&g, &f).unwrap();
            assert!(check_profunctor(&comp.profunctor).is_ok());
            for x in 0..comp.profunctor.grid.cells() {
                let (a, b) = comp.profunctor.grid.cell_coords(x);
                let closure = coend_partition_by_closure(&g, &f, a, b);
                assert_eq!(closure.len(), comp.profunctor.sizes[x]);
                for class in closure {
                    let k = comp.class_of(a, b, class[0].0, class[0].1, class[0].2);
                    assert!(class.iter().all(|&(m, i, j)| comp.class_of(a, b, m, i, j) == k));
                }
            }
        }
    }

    #[test]
    fn yoneda_and_associativity_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let cs: Vec<Cat> = (0..4).map(|_| cat(random_concrete_category(&mut rng, 3, 7, 2, 6))).collect();
            let f = random_profunctor(&mut rng, &Grid::new(cs[1].clone(), cs[0].clone()).unwrap(), 2);
            let g = random_profunctor(&mut rng, &Grid::new(cs[2].clone(), cs[1].clone()).unwrap(), 2);
            let h = random_profunctor(&mut rng, &Grid::new(cs[3].clone(), cs[2].clone()).unwrap(), 2);
            let (l, t) = yoneda_left(&f).unwrap();
            assert!(check_transformation(&l.profunctor, &f, &t, true).is_ok());
            let (r, t) = yoneda_right(&f).unwrap();
            assert!(check_transformation(&r.profunctor, &f, &t, true).is_ok());
            let (l, r, t) = associator(&h, &g, &f).unwrap();
            let rep = check_transformation(&l.profunctor, &r.profunctor, &t, true);
            assert!(rep.is_ok(), "{rep}");
        }
    }

    #[test]
    fn zorro_on_small_categories() {
        for c in [FiniteCategory::terminal(), FiniteCategory::walking_arrow(), FiniteCategory::chain(3), FiniteCategory::discrete(2)] {
            let z = verify_prof_zorro(&cat(c)).unwrap();
            assert!(z.report.is_ok(), "{}", z.report);
        }
    }

    #[test]
    fn internal_hom_over_terminal_is_function_set() {
        let g = Grid::new(one(), one()).unwrap();
        let x = constant_profunctor(&g, 2);
        let y = constant_profunctor(&g, 3);
        let ih = prof_internal_hom(&x, &y, 1000).unwrap();
        assert_eq!(ih.profunctor.sizes, vec![9]);
        let adj = verify_ihom_adjunction(&constant_profunctor(&g, 2), &x, &y, 10_000).unwrap();
        assert!(adj.report.is_ok(), "{}", adj.report);
        assert_eq!(adj.left, 81);
    }

    #[test]
    fn internal_hom_of_identities_is_hom() {
        for c in [FiniteCategory::walking_arrow(), FiniteCategory::chain(3)] {
            let c = cat(c);
            let h = hom_profunctor(&c).unwrap();
            let ih = prof_internal_hom(&h, &h, 1000).unwrap();
            assert_eq!(ih.profunctor.sizes, h.sizes);
            let empty = Profunctor::from_fn(h.grid.clone(), |_, _| Vec::<u32>::new(), |_, _, &x| x).unwrap();
            let ih = prof_internal_hom(&empty, &h, 1000).unwrap();
            assert!(ih.profunctor.sizes.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn internal_hom_adjunction_on_arrow() {
        let a = cat(FiniteCategory::walking_arrow());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let x = random_profunctor(&mut rng, &Grid::new(a.clone(), a.clone()).unwrap(), 2);
            let y = random_profunctor(&mut rng, &Grid::new(one(), a.clone()).unwrap(), 2);
            let z = random_profunctor(&mut rng, &Grid::new(one(), a.clone()).unwrap(), 2);
            let ih = prof_internal_hom(&x, &y, 10_000).unwrap();
            assert!(check_profunctor(&ih.profunctor).is_ok());
            let adj = verify_ihom_adjunction(&z, &x, &y, 100_000).unwrap();
            assert!(adj.report.is_ok(), "{}", adj.report);
        }
    }

    #[test]
    fn opposite_is_an_involution_and_matches_representables() {
        let cats: Vec<Cat> = vec![one(), cat(FiniteCategory::walking_arrow()), cat(FiniteCategory::chain(3)), cat(FiniteCategory::discrete(2))];
        for c in &cats {
            for d in &cats {
                for phi in enumerate_functors(&**c, &**d, Variance::Covariant, 1000).unwrap() {
                    let p = representable_covariant(c, d, &phi).unwrap();
                    assert!(check_profunctor(&p).is_ok());
                    let pp = prof_opposite(&prof_opposite(&p).unwrap()).unwrap();
                    assert_eq!(pp, p);
                    // (D(1, φ))^op = D^op(φ^op, 1)
                    let (cop, c_to) = opposite_with_map(&**c).unwrap();
                    let (dop, d_to) = opposite_with_map(&**d).unwrap();
                    let phi_op = Functor {
                        variance: Variance::Covariant,
                        obj: phi.obj.clone(),
                        mor: {
                            let mut m = vec![0; phi.mor.len()];
                            for (f, &g) in c_to.iter().enumerate() {
                                m[g] = d_to[phi.mor[f]];
                            }
                            m
                        },
                    };
                    let lhs = prof_opposite(&p).unwrap();
                    let rhs = representable_contravariant(&Arc::new(cop), &Arc::new(dop), &phi_op).unwrap();
                    assert_eq!(lhs.sizes, rhs.sizes);
                    assert_eq!(lhs.maps, rhs.maps);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = hom_profunctor(&cat(FiniteCategory::chain(3))).unwrap();
        let j = p.to_json();
        let q = Profunctor::from_json(&serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn transformation_enumeration_counts() {
        let g = Grid::new(one(), one()).unwrap();
        let ts = enumerate_transformations(&constant_profunctor(&g, 2), &constant_profunctor(&g, 3), 100).unwrap();
        assert_eq!(ts.len(), 9);
        let a = cat(FiniteCategory::walking_arrow());
        let h = hom_profunctor(&a).unwrap();
        // the identity is the only endo-transformation of a poset hom
        assert_eq!(enumerate_transformations(&h, &h, 100).unwrap().len(), 1);
        let all = enumerate_profunctors(&Grid::new(one(), a).unwrap(), 1, 100).unwrap();
        assert_eq!(all.len(), 3);
    }
}
