//! Local volutive structure on hom-categories of profunctors.
//!
//! For self-dual `A` and `B` (with involutive contravariant `σ`) the functor
//! `d̄X(b, a) = Nat(X(σb, −), A(σa, −))` is a contravariant endofunctor of
//! `Prof(A, B)`, and `η̄_X: X ⇒ d̄d̄X` evaluates at the element. The
//! hom-category with values of size `≤ 2` is replaced by its skeleton, and `d̄`
//! and `η̄` are transported along the canonical isomorphisms.

use crate::prof::{
    check_transformation, enumerate_profunctors, enumerate_transformations, hom_profunctor, inverse_cells,
    prof_compose, prof_internal_hom, prof_opposite, prof_reindex, vertical, Cat, Cells, Grid, InternalHom,
    ProfError, Profunctor, DEFAULT_ENUM_CAP,
};
use std::collections::HashMap;
use std::sync::Arc;
use volut_core::fincat::{opposite_with_map, Category, CatRef, FiniteCategory, Functor, Mor, Obj, Variance};
use volut_core::volutive::{hermitian_points, HermPoint, Kind, VolutiveStructure};
use volut_core::ValidationReport;

/// Largest composition table materialized eagerly.
pub const MAX_COMPOSABLE_PAIRS: usize = 80_000_000;

/// A category with an involutive contravariant automorphism `σ`.
#[derive(Clone, Debug)]
pub struct SelfDual {
    pub category: Cat,
    /// `σ` on objects.
    pub obj: Vec<Obj>,
    /// `σ` on morphisms, reversing direction.
    pub mor: Vec<Mor>,
    /// `σ` as a covariant functor into the opposite.
    pub into_op: Functor,
}

impl SelfDual {
    /// The chain `0 → 1 → … → n−1` with `σ(i) = n − 1 − i`.
    pub fn chain(n: usize) -> SelfDual {
        let c = FiniteCategory::chain(n);
        let obj: Vec<Obj> = (0..n).map(|i| n - 1 - i).collect();
        let mor = (0..c.morphism_count())
            .map(|f| c.hom(obj[c.cod(f)], obj[c.dom(f)]).start)
            .collect();
        SelfDual::new(Arc::new(c), obj, mor)
    }

    pub fn terminal() -> SelfDual {
        SelfDual::chain(1)
    }

    pub fn walking_arrow() -> SelfDual {
        SelfDual::chain(2)
    }

    fn new(category: Cat, obj: Vec<Obj>, mor: Vec<Mor>) -> SelfDual {
        let (_, to_op) = opposite_with_map(&*category).expect("small category");
        let into_op = Functor {
            variance: Variance::Covariant,
            obj: obj.clone(),
            mor: mor.iter().map(|&m| to_op[m]).collect(),
        };
        SelfDual { category, obj, mor, into_op }
    }

    pub fn name(&self) -> &'static str {
        match self.category.object_count() {
            1 => "terminal",
            2 => "arrow",
            _ => "chain",
        }
    }
}

/// `d̄X` together with the natural families that form its elements.
#[derive(Clone, Debug)]
pub struct Dualized {
    pub profunctor: Profunctor,
    pub ihom: InternalHom,
}

/// The local duality between `Prof(A, B)` and itself.
pub struct LocalDuality {
    pub a: SelfDual,
    pub b: SelfDual,
    hom_a: Profunctor,
    cap: usize,
}

impl LocalDuality {
    pub fn new(a: SelfDual, b: SelfDual) -> Result<LocalDuality, ProfError> {
        let hom_a = hom_profunctor(&a.category)?;
        Ok(LocalDuality { a, b, hom_a, cap: DEFAULT_ENUM_CAP })
    }

    pub fn grid(&self) -> Result<Arc<Grid>, ProfError> {
        Grid::new(self.b.category.clone(), self.a.category.clone())
    }

    /// `d̄X(b, a)` is the set of natural families `X(σb, −) ⇒ A(σa, −)`.
    pub fn dual(&self, x: &Profunctor) -> Result<Dualized, ProfError> {
        let ihom = prof_internal_hom(x, &self.hom_a, self.cap)?;
        let op = prof_opposite(&ihom.profunctor)?;
        let profunctor = prof_reindex(&op, &self.a.category, &self.a.into_op, &self.b.category, &self.b.into_op)?;
        Ok(Dualized { profunctor, ihom })
    }

    /// Index of a family in `d̄X(b, a)`.
    fn family_index(&self, dx: &Dualized, b: Obj, a: Obj, fam: &[Vec<u32>]) -> Option<u32> {
        let cell = dx.ihom.profunctor.grid.cell(self.a.obj[a], self.b.obj[b]);
        dx.ihom.families[cell].iter().position(|f| f == fam).map(|k| k as u32)
    }

    /// `d̄β: d̄Y ⇒ d̄X` for `β: X ⇒ Y`, by precomposition.
    pub fn dual_cells(&self, dx: &Dualized, dy: &Dualized, beta: &Cells) -> Result<Cells, ProfError> {
        let grid = &dy.profunctor.grid;
        let na = self.a.category.object_count();
        let mut out = Vec::with_capacity(grid.cells());
        for cell in 0..grid.cells() {
            let (b, a) = grid.cell_coords(cell);
            let (sa, sb) = (self.a.obj[a], self.b.obj[b]);
            let mut comp = Vec::with_capacity(dy.profunctor.sizes[cell]);
            for fam in &dy.ihom.families[dy.ihom.profunctor.grid.cell(sa, sb)] {
                let pre: Vec<Vec<u32>> = (0..na)
                    .map(|c| beta[sb * na + c].iter().map(|&i| fam[c][i as usize]).collect())
                    .collect();
                match self.family_index(dx, b, a, &pre) {
                    Some(k) => comp.push(k),
                    None => return Err(ProfError::Malformed("precomposed family is not natural".into())),
                }
            }
            out.push(comp);
        }
        Ok(out)
    }

    /// `η̄_X: X ⇒ d̄d̄X`, sending `x` to evaluation at `x` followed by `σ`.
    pub fn eta_cells(&self, x: &Profunctor, dx: &Dualized, ddx: &Dualized) -> Result<Cells, ProfError> {
        let grid = &x.grid;
        let ca = &self.a.category;
        let na = ca.object_count();
        let mut out = Vec::with_capacity(grid.cells());
        for cell in 0..grid.cells() {
            let (b, a) = grid.cell_coords(cell);
            let sa = self.a.obj[a];
            let mut comp = Vec::with_capacity(x.sizes[cell]);
            for xi in 0..x.sizes[cell] {
                // family over a' of d̄X(σb, a') → A(σa, a')
                let fam: Vec<Vec<u32>> = (0..na)
                    .map(|a2| {
                        let src = dx.ihom.profunctor.grid.cell(self.a.obj[a2], b);
                        dx.ihom.families[src]
                            .iter()
                            .map(|u| {
                                let m = ca.hom(self.a.obj[a2], a).start + u[a][xi] as usize;
                                let s = self.a.mor[m];
                                debug_assert_eq!((ca.dom(s), ca.cod(s)), (sa, a2));
                                (s - ca.hom(sa, a2).start) as u32
                            })
                            .collect()
                    })
                    .collect();
                match self.family_index(ddx, b, a, &fam) {
                    Some(k) => comp.push(k),
                    None => return Err(ProfError::Malformed("evaluation family is not natural".into())),
                }
            }
            out.push(comp);
        }
        Ok(out)
    }

    /// Checks `d̄θ ∘ η̄_X = θ` for `θ: X ⇒ d̄X`.
    pub fn is_hermitian(&self, x: &Profunctor, theta: &Cells) -> Result<bool, ProfError> {
        let dx = self.dual(x)?;
        let ddx = self.dual(&dx.profunctor)?;
        if !check_transformation(x, &dx.profunctor, theta, false).is_ok() {
            return Ok(false);
        }
        let eta = self.eta_cells(x, &dx, &ddx)?;
        let dtheta = self.dual_cells(&dx, &ddx, theta)?;
        Ok(vertical(&dtheta, &eta) == *theta)
    }
}

// ---------------------------------------------------------------------------
// Canonical forms

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Relabels `p` along per-cell bijections `pi`.
fn relabel(p: &Profunctor, pi: &Cells) -> Profunctor {
    let cat = p.grid.category();
    let maps = (0..cat.morphism_count())
        .map(|m| {
            let (x, y) = (cat.dom(m), cat.cod(m));
            let mut out = vec![0; p.sizes[x]];
            for (i, &v) in p.maps[m].iter().enumerate() {
                out[pi[x][i] as usize] = pi[y][v as usize];
            }
            out
        })
        .collect();
    Profunctor { grid: p.grid.clone(), sizes: p.sizes.clone(), maps }
}

/// The least relabeling of `p` and the isomorphism onto it.
pub fn canonical_form(p: &Profunctor) -> (Profunctor, Cells) {
    let perms: Vec<Vec<Vec<u32>>> = p.sizes.iter().map(|&n| permutations(n)).collect();
    let mut choice = vec![0usize; perms.len()];
    let mut best: Option<(Vec<Vec<u32>>, Cells)> = None;
    loop {
        let pi: Cells = choice.iter().zip(&perms).map(|(&k, ps)| ps[k].clone()).collect();
        let q = relabel(p, &pi);
        if best.as_ref().map_or(true, |(m, _)| q.maps < *m) {
            best = Some((q.maps, pi));
        }
        let mut i = choice.len();
        loop {
            if i == 0 {
                let (maps, pi) = best.expect("at least one relabeling");
                return (Profunctor { grid: p.grid.clone(), sizes: p.sizes.clone(), maps }, pi);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < perms[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Skeletal hom-category

/// Skeleton of `Prof(A, B)` restricted to values of size `≤ max_size`.
pub struct LocalHom {
    pub duality: LocalDuality,
    pub reps: Vec<Profunctor>,
    pub category: CatRef,
    pub cells: Vec<Cells>,
    pub volutive: VolutiveStructure,
    /// `d̄` of each representative.
    pub duals: Vec<Dualized>,
    /// Isomorphism `d̄X ⇒ rep(d̄X)`.
    pub to_rep: Vec<Cells>,
    hom_start: Vec<usize>,
}

impl LocalHom {
    pub fn build(a: SelfDual, b: SelfDual, max_size: usize) -> Result<LocalHom, ProfError> {
        let duality = LocalDuality::new(a, b)?;
        let grid = duality.grid()?;
        let mut reps: Vec<Profunctor> = Vec::new();
        let mut index: HashMap<(Vec<usize>, Vec<Vec<u32>>), Obj> = HashMap::new();
        for p in enumerate_profunctors(&grid, max_size, DEFAULT_ENUM_CAP)? {
            let (q, _) = canonical_form(&p);
            index.entry((q.sizes.clone(), q.maps.clone())).or_insert_with(|| {
                reps.push(q);
                reps.len() - 1
            });
        }
        let n = reps.len();
        let lookup = |p: &Profunctor| -> Result<(Obj, Cells), ProfError> {
            let (q, pi) = canonical_form(p);
            match index.get(&(q.sizes, q.maps)) {
                Some(&k) => Ok((k, pi)),
                None => Err(ProfError::Cap { what: "dual outside the size bound".into(), limit: max_size }),
            }
        };
        let mut homs: Vec<Vec<Cells>> = Vec::with_capacity(n * n);
        for x in &reps {
            for y in &reps {
                homs.push(enumerate_transformations(x, y, DEFAULT_ENUM_CAP)?);
            }
        }
        let mut hom_start = Vec::with_capacity(n * n + 1);
        let mut total = 0;
        for h in &homs {
            hom_start.push(total);
            total += h.len();
        }
        hom_start.push(total);
        let hom_index: Vec<HashMap<&Cells, usize>> =
            homs.iter().map(|h| h.iter().enumerate().map(|(i, t)| (t, i)).collect()).collect();
        let mut pairs = 0usize;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    pairs += homs[x * n + y].len() * homs[y * n + z].len();
                }
            }
        }
        if pairs > MAX_COMPOSABLE_PAIRS {
            return Err(ProfError::Cap { what: "composable pairs".into(), limit: MAX_COMPOSABLE_PAIRS });
        }
        let mut endpoints = Vec::with_capacity(total);
        let mut cells: Vec<Cells> = Vec::with_capacity(total);
        for x in 0..n {
            for y in 0..n {
                for t in &homs[x * n + y] {
                    endpoints.push((x, y));
                    cells.push(t.clone());
                }
            }
        }
        let id = |x: Obj| hom_start[x * n + x] + hom_index[x * n + x][&crate::prof::identity_cells(&reps[x])];
        let ids: Vec<Mor> = (0..n).map(id).collect();
        let category = FiniteCategory::build(
            reps.iter().enumerate().map(|(i, _)| format!("P{i}")).collect(),
            &endpoints,
            None,
            ids,
            |g, f| {
                let (x, _) = endpoints[f];
                let (_, z) = endpoints[g];
                let h = vertical(&cells[g], &cells[f]);
                hom_index[x * n + z].get(&h).map(|&k| hom_start[x * n + z] + k)
            },
        )?;

        let mut duals = Vec::with_capacity(n);
        let mut d_obj = Vec::with_capacity(n);
        let mut to_rep = Vec::with_capacity(n);
        for x in &reps {
            let dx = duality.dual(x)?;
            let (k, pi) = lookup(&dx.profunctor)?;
            d_obj.push(k);
            to_rep.push(pi);
            duals.push(dx);
        }
        let mor_id = |x: Obj, y: Obj, t: &Cells| -> Result<Mor, ProfError> {
            hom_index[x * n + y]
                .get(t)
                .map(|&k| hom_start[x * n + y] + k)
                .ok_or_else(|| ProfError::Malformed("transported cells are not a morphism".into()))
        };
        let mut d_mor = vec![0; total];
        for f in 0..total {
            let (x, y) = endpoints[f];
            let raw = duality.dual_cells(&duals[x], &duals[y], &cells[f])?;
            let t = vertical(&to_rep[x], &vertical(&raw, &inverse_cells(&to_rep[y])));
            d_mor[f] = mor_id(d_obj[y], d_obj[x], &t)?;
        }
        let mut eta = Vec::with_capacity(n);
        for x in 0..n {
            let dx = &duals[x];
            let r = d_obj[x];
            let ddx = duality.dual(&dx.profunctor)?;
            let raw_eta = duality.eta_cells(&reps[x], dx, &ddx)?;
            // d̄(φ⁻¹): d̄d̄X ⇒ d̄R, then d̄R ⇒ rep(d̄R)
            let back = duality.dual_cells(&duals[r], &ddx, &inverse_cells(&to_rep[x]))?;
            let t = vertical(&to_rep[r], &vertical(&back, &raw_eta));
            eta.push(mor_id(x, d_obj[r], &t)?);
        }
        let category: CatRef = Arc::new(category);
        let volutive = VolutiveStructure::new(
            category.clone(),
            Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor },
            eta,
            Kind::Lax,
        );
        Ok(LocalHom { duality, reps, category, cells, volutive, duals, to_rep, hom_start })
    }

    pub fn object_count(&self) -> usize {
        self.reps.len()
    }

    pub fn morphism_count(&self) -> usize {
        *self.hom_start.last().unwrap_or(&0)
    }

    /// The concrete `θ: X ⇒ d̄X` of a fixed point of the skeleton.
    pub fn concrete_theta(&self, p: &HermPoint) -> Cells {
        vertical(&inverse_cells(&self.to_rep[p.object]), &self.cells[p.theta])
    }

    pub fn hermitian_points(&self) -> Vec<HermPoint> {
        hermitian_points(&self.volutive)
    }
}

// ---------------------------------------------------------------------------
// Composition of fixed points

/// A hermitian profunctor `X` with `θ: X ⇒ d̄X`.
#[derive(Clone, Debug)]
pub struct HermProf {
    pub profunctor: Profunctor,
    pub theta: Cells,
}

/// Result of composing two hermitian profunctors.
#[derive(Clone, Debug)]
pub struct ComposedHerm {
    pub profunctor: Profunctor,
    pub theta: Cells,
    pub report: ValidationReport,
}

/// Composes `(X, θ_X): A ↛ B` and `(Y, θ_Y): B ↛ C` to `(Y ∘ X, θ_{YX})`
/// and checks the fixed-point equation for the result.
///
/// `θ_{YX}[y, x]` is the family `[y', x'] ↦ θ_X(x)(X(θ_Y(y)(y'), 1) x')`.
pub fn compose_hermitian(
    a: &SelfDual,
    b: &SelfDual,
    c: &SelfDual,
    x: &HermProf,
    y: &HermProf,
) -> Result<ComposedHerm, ProfError> {
    let lx = LocalDuality::new(a.clone(), b.clone())?;
    let ly = LocalDuality::new(b.clone(), c.clone())?;
    let lyx = LocalDuality::new(a.clone(), c.clone())?;
    let (xp, yp) = (&x.profunctor, &y.profunctor);
    let dx = lx.dual(xp)?;
    let dy = ly.dual(yp)?;
    let comp = prof_compose(yp, xp)?;
    let yx = &comp.profunctor;
    let dyx = lyx.dual(yx)?;
    let (ca, cb) = (&a.category, &b.category);
    let (na, nb) = (ca.object_count(), cb.object_count());
    let mut report = ValidationReport::with_limit(20);
    let mut theta = Vec::with_capacity(yx.grid.cells());
    for cell in 0..yx.grid.cells() {
        let (cc, aa) = yx.grid.cell_coords(cell);
        let (sa, sc) = (a.obj[aa], c.obj[cc]);
        let mut comp_cells = vec![u32::MAX; yx.sizes[cell]];
        for (bb, yi, xi, cls) in comp.members(cc, aa) {
            let u = &dx.ihom.families[dx.ihom.profunctor.grid.cell(sa, b.obj[bb])][x.theta[bb * na + aa][xi as usize] as usize];
            let v = &dy.ihom.families[dy.ihom.profunctor.grid.cell(b.obj[bb], sc)][y.theta[cc * nb + bb][yi as usize] as usize];
            // family over a' of (YX)(σc, a') → A(σa, a')
            let mut w: Vec<Vec<u32>> = Vec::with_capacity(na);
            for a2 in 0..na {
                let mut row = vec![u32::MAX; yx.size(sc, a2)];
                for (b2, y2, x2, cls2) in comp.members(sc, a2) {
                    let vb = cb.hom(b.obj[bb], b2).start + v[b2][y2 as usize] as usize;
                    let moved = xp.contra(vb, a2)[x2 as usize];
                    let val = u[a2][moved as usize];
                    let slot = &mut row[cls2 as usize];
                    if *slot == u32::MAX {
                        *slot = val;
                    } else if *slot != val {
                        report.push("herm-compose-well-defined", format!("cell ({cc}, {aa})"));
                    }
                }
                w.push(row);
            }
            let k = match lyx.family_index(&dyx, cc, aa, &w) {
                Some(k) => k,
                None => {
                    report.push("herm-compose-natural", format!("cell ({cc}, {aa})"));
                    continue;
                }
            };
            let slot = &mut comp_cells[cls as usize];
            if *slot == u32::MAX {
                *slot = k;
            } else if *slot != k {
                report.push("herm-compose-well-defined", format!("class {cls} at cell ({cc}, {aa})"));
            }
        }
        theta.push(comp_cells);
    }
    if report.is_ok() {
        report.merge(check_transformation(yx, &dyx.profunctor, &theta, false));
    }
    if report.is_ok() && !lyx.is_hermitian(yx, &theta)? {
        report.push("herm-compose-fixed-point", "d̄θ ∘ η̄ ≠ θ on the composite");
    }
    Ok(ComposedHerm { profunctor: comp.profunctor, theta, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use volut_core::volutive::check_volutive;

    #[test]
    fn canonical_forms_identify_isomorphic_profunctors() {
        let sd = SelfDual::walking_arrow();
        let grid = Grid::new(sd.category.clone(), sd.category.clone()).unwrap();
        let all = enumerate_profunctors(&grid, 2, DEFAULT_ENUM_CAP).unwrap();
        for p in &all {
            let (q, pi) = canonical_form(p);
            assert!(check_transformation(p, &q, &pi, true).is_ok());
        }
    }

    #[test]
    fn terminal_hom_category_is_finite_sets() {
        let h = LocalHom::build(SelfDual::terminal(), SelfDual::terminal(), 2).unwrap();
        assert_eq!(h.object_count(), 3);
        // |Hom(m, n)| = n^m summed over m, n ≤ 2
        assert_eq!(h.morphism_count(), 1 + 1 + 1 + 0 + 1 + 2 + 0 + 1 + 4);
        assert!(h.volutive.d.obj.iter().all(|&k| h.reps[k].sizes == vec![1]));
        assert!(check_volutive(&h.volutive).is_ok());
    }

    #[test]
    fn honest_fixed_points_in_finite_sets() {
        let h = LocalHom::build(SelfDual::terminal(), SelfDual::terminal(), 2).unwrap();
        let honest: Vec<_> = h.hermitian_points().into_iter().filter(|p| p.honest).collect();
        assert!(honest.iter().any(|p| h.reps[p.object].sizes == vec![1]));
    }

    #[test]
    fn local_structures_are_lax() {
        for (a, b) in [
            (SelfDual::terminal(), SelfDual::walking_arrow()),
            (SelfDual::walking_arrow(), SelfDual::terminal()),
        ] {
            let h = LocalHom::build(a, b, 2).unwrap();
            let r = check_volutive(&h.volutive);
            assert!(r.is_ok(), "{r}");
        }
    }

    #[test]
    fn fixed_points_are_concretely_hermitian() {
        let h = LocalHom::build(SelfDual::walking_arrow(), SelfDual::terminal(), 2).unwrap();
        let pts = h.hermitian_points();
        assert!(!pts.is_empty());
        for p in pts {
            let theta = h.concrete_theta(&p);
            assert!(h.duality.is_hermitian(&h.reps[p.object], &theta).unwrap());
        }
    }

    #[test]
    fn composed_fixed_points_stay_hermitian() {
        let (t, a) = (SelfDual::terminal(), SelfDual::walking_arrow());
        let hx = LocalHom::build(t.clone(), a.clone(), 2).unwrap();
        let hy = LocalHom::build(a.clone(), t.clone(), 2).unwrap();
        let xs = hx.hermitian_points();
        let ys = hy.hermitian_points();
        for p in &xs {
            for q in &ys {
                let x = HermProf { profunctor: hx.reps[p.object].clone(), theta: hx.concrete_theta(p) };
                let y = HermProf { profunctor: hy.reps[q.object].clone(), theta: hy.concrete_theta(q) };
                let r = compose_hermitian(&t, &a, &t, &x, &y).unwrap();
                assert!(r.report.is_ok(), "{}", r.report);
            }
        }
    }
}
