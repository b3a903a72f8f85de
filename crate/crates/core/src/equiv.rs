//! Pairings, representations and volutive adjunction data.
//!
//! A pairing is a functor `F: C^op × C^op → FinSet`, stored as value sizes
//! and the two one-variable actions. The pairing of a structure `(d, η)` is
//! `Φ(a, b) = Hom(a, d b)`, with symmetry `σ(φ) = d(φ) ∘ η_b` and the
//! identity representation.

use crate::fincat::{
    check_functor_into, check_nattrans_into, vertical, whisker_left, whisker_right, CatRef, Category, Functor, Mor,
    NatTrans, Obj, Opposite, Variance,
};
use crate::report::ValidationReport;
use crate::volutive::{check_strict_extras, check_volutive_as, Kind, VolutiveStructure};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `rho[a·n + b]` maps the local index of `f ∈ Hom(a, d b)` to `F(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub d: Functor,
    pub rho: Vec<Vec<u32>>,
}

#[derive(Clone)]
pub struct Pairing {
    pub base: CatRef,
    /// `sizes[a·n + b] = |F(a, b)|`.
    pub sizes: Vec<usize>,
    /// For `X: a' → a`, `first[X][b]: F(a, b) → F(a', b)`.
    pub first: Vec<Vec<Vec<u32>>>,
    /// For `Y: b' → b`, `second[Y][a]: F(a, b) → F(a, b')`.
    pub second: Vec<Vec<Vec<u32>>>,
    /// `symmetry[a·n + b]: F(a, b) → F(b, a)`.
    pub symmetry: Option<Vec<Vec<u32>>>,
    pub representation: Option<Representation>,
}

impl std::fmt::Debug for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pairing")
            .field("objects", &self.base.object_count())
            .field("sizes", &self.sizes)
            .field("symmetric", &self.symmetry.is_some())
            .field("represented", &self.representation.is_some())
            .finish()
    }
}

impl Pairing {
    fn n(&self) -> usize {
        self.base.object_count()
    }

    pub fn size(&self, a: Obj, b: Obj) -> usize {
        self.sizes[a * self.n() + b]
    }

    /// The constant pairing with `k` elements and identity actions.
    pub fn constant(base: CatRef, k: usize) -> Pairing {
        let n = base.object_count();
        let id: Vec<u32> = (0..k as u32).collect();
        let tables = vec![vec![id.clone(); n]; base.morphism_count()];
        Pairing {
            sizes: vec![k; n * n],
            first: tables.clone(),
            second: tables,
            symmetry: Some(vec![id; n * n]),
            representation: None,
            base,
        }
    }

    /// `F(X, Y)` applied to `x ∈ F(a, b)` for `X: a' → a`, `Y: b' → b`.
    pub fn act(&self, x_mor: Mor, y_mor: Mor, x: u32) -> u32 {
        let c = &*self.base;
        let b = c.cod(y_mor);
        let a2 = c.dom(x_mor);
        let after_first = self.first[x_mor][b][x as usize];
        self.second[y_mor][a2][after_first as usize]
    }
}

fn local(c: &dyn Category, f: Mor) -> u32 {
    (f - c.hom(c.dom(f), c.cod(f)).start) as u32
}

/// `Φ(a, b) = Hom(a, d b)` with symmetry and the identity representation.
pub fn pairing_from_volutive(v: &VolutiveStructure) -> Pairing {
    let c = &*v.base;
    let n = c.object_count();
    let mut sizes = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            sizes[a * n + b] = c.hom(a, v.d.obj[b]).len();
        }
    }
    let mut first = Vec::with_capacity(c.morphism_count());
    let mut second = Vec::with_capacity(c.morphism_count());
    for x in 0..c.morphism_count() {
        let a = c.cod(x);
        first.push(
            (0..n)
                .map(|b| c.hom(a, v.d.obj[b]).map(|phi| local(c, c.compose(phi, x))).collect())
                .collect(),
        );
        let dy = v.d.mor[x];
        second.push(
            (0..n)
                .map(|p| c.hom(p, v.d.obj[a]).map(|phi| local(c, c.compose(dy, phi))).collect())
                .collect(),
        );
    }
    let mut symmetry = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            symmetry.push(c.hom(a, v.d.obj[b]).map(|phi| local(c, c.compose(v.d.mor[phi], v.eta[b]))).collect());
        }
    }
    let rho = sizes.iter().map(|&k| (0..k as u32).collect()).collect();
    Pairing {
        base: v.base.clone(),
        sizes,
        first,
        second,
        symmetry: Some(symmetry),
        representation: Some(Representation { d: v.d.clone(), rho }),
    }
}

/// Checks functoriality, interchange, symmetry and representation.
pub fn check_pairing(p: &Pairing) -> ValidationReport {
    let mut r = ValidationReport::new();
    let c = &*p.base;
    let n = c.object_count();
    let m = c.morphism_count();
    if p.sizes.len() != n * n || p.first.len() != m || p.second.len() != m {
        r.push("pairing-shape", "table counts do not match the category");
        return r;
    }
    let typed = |t: &Vec<u32>, from: usize, to: usize| t.len() == from && t.iter().all(|&x| (x as usize) < to);
    for x in 0..m {
        let (s, t) = (c.dom(x), c.cod(x));
        for o in 0..n {
            if p.first[x].len() != n || !typed(&p.first[x][o], p.size(t, o), p.size(s, o)) {
                r.push("pairing-shape", format!("first action of {} mistyped", c.morphism_label(x)));
                return r;
            }
            if p.second[x].len() != n || !typed(&p.second[x][o], p.size(o, t), p.size(o, s)) {
                r.push("pairing-shape", format!("second action of {} mistyped", c.morphism_label(x)));
                return r;
            }
        }
    }
    for a in 0..n {
        let id = c.identity(a);
        for o in 0..n {
            let ident = |t: &Vec<u32>| t.iter().enumerate().all(|(i, &x)| i as u32 == x);
            r.require(ident(&p.first[id][o]), "pairing-identity", || format!("first action of id_{a}"));
            r.require(ident(&p.second[id][o]), "pairing-identity", || format!("second action of id_{a}"));
        }
    }
    // contravariance: F(g ∘ f) = F(f) ∘ F(g)
    for f in 0..m {
        for g in c.out_range(c.cod(f)) {
            let gf = c.compose(g, f);
            for o in 0..n {
                for (tables, what) in [(&p.first, "first"), (&p.second, "second")] {
                    let ok = tables[gf][o].iter().zip(&tables[g][o]).all(|(&lhs, &x)| lhs == tables[f][o][x as usize]);
                    r.require(ok, "pairing-composition", || {
                        format!("{what} action fails on {} ∘ {}", c.morphism_label(g), c.morphism_label(f))
                    });
                }
            }
        }
    }
    for x in 0..m {
        for y in 0..m {
            let (a2, a, b2, b) = (c.dom(x), c.cod(x), c.dom(y), c.cod(y));
            let ok = (0..p.size(a, b)).all(|e| {
                let one = p.second[y][a2][p.first[x][b][e] as usize];
                let two = p.first[x][b2][p.second[y][a][e] as usize];
                one == two
            });
            r.require(ok, "pairing-interchange", || {
                format!("actions of {} and {} do not commute", c.morphism_label(x), c.morphism_label(y))
            });
            if r.full() {
                return r;
            }
        }
    }
    if let Some(sym) = &p.symmetry {
        check_symmetry(p, sym, &mut r);
    }
    if let Some(rep) = &p.representation {
        check_representation(p, rep, &mut r);
    }
    r
}

fn check_symmetry(p: &Pairing, sym: &[Vec<u32>], r: &mut ValidationReport) {
    let c = &*p.base;
    let n = c.object_count();
    if sym.len() != n * n {
        r.push("symmetry-shape", "wrong number of components");
        return;
    }
    for a in 0..n {
        for b in 0..n {
            let s = &sym[a * n + b];
            if s.len() != p.size(a, b) || s.iter().any(|&x| x as usize >= p.size(b, a)) {
                r.push("symmetry-shape", format!("σ at ({a}, {b}) mistyped"));
                return;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (s, back) = (&sym[a * n + b], &sym[b * n + a]);
            r.require(
                s.iter().enumerate().all(|(i, &x)| back[x as usize] == i as u32),
                "symmetry-involution",
                || format!("σ ∘ σ ≠ id at ({a}, {b})"),
            );
        }
    }
    // σ_{a',b} ∘ F(X, b) = F(b, X) ∘ σ_{a,b} for X: a' → a
    for x in 0..c.morphism_count() {
        let (a2, a) = (c.dom(x), c.cod(x));
        for b in 0..n {
            let ok = (0..p.size(a, b)).all(|e| {
                let lhs = sym[a2 * n + b][p.first[x][b][e] as usize];
                let rhs = p.second[x][b][sym[a * n + b][e] as usize];
                lhs == rhs
            });
            r.require(ok, "symmetry-naturality", || format!("σ not natural along {}", c.morphism_label(x)));
        }
    }
}

fn check_representation(p: &Pairing, rep: &Representation, r: &mut ValidationReport) {
    let c = &*p.base;
    let n = c.object_count();
    let mut fr = ValidationReport::new();
    check_functor_into(c, c, &rep.d, &mut fr);
    if rep.d.variance != Variance::Contravariant {
        fr.push("functor-shape", "representing functor must be contravariant");
    }
    if !fr.is_ok() {
        for v in fr.violations {
            r.push(&format!("representation/{}", v.law), v.detail);
        }
        return;
    }
    if rep.rho.len() != n * n {
        r.push("representation-shape", "wrong number of components");
        return;
    }
    for a in 0..n {
        for b in 0..n {
            let t = &rep.rho[a * n + b];
            let k = c.hom(a, rep.d.obj[b]).len();
            let bij = t.len() == k && k == p.size(a, b) && {
                let mut seen = vec![false; k];
                t.iter().all(|&x| (x as usize) < k && !std::mem::replace(&mut seen[x as usize], true))
            };
            r.require(bij, "representation-bijective", || format!("ρ at ({a}, {b}) is not a bijection"));
            if !bij {
                return;
            }
        }
    }
    for x in 0..c.morphism_count() {
        let (a2, a) = (c.dom(x), c.cod(x));
        for b in 0..n {
            // ρ(f ∘ X) = F(X, b)(ρ(f))
            let ok = c.hom(a, rep.d.obj[b]).all(|f| {
                let lhs = rep.rho[a2 * n + b][local(c, c.compose(f, x)) as usize];
                lhs == p.first[x][b][rep.rho[a * n + b][local(c, f) as usize] as usize]
            });
            r.require(ok, "representation-naturality", || format!("ρ not natural in the first variable along {}", c.morphism_label(x)));
        }
        let (b2, b) = (a2, a);
        for o in 0..n {
            // ρ(d(Y) ∘ f) = F(o, Y)(ρ(f))
            let dy = rep.d.mor[x];
            let ok = c.hom(o, rep.d.obj[b]).all(|f| {
                let lhs = rep.rho[o * n + b2][local(c, c.compose(dy, f)) as usize];
                lhs == p.second[x][o][rep.rho[o * n + b][local(c, f) as usize] as usize]
            });
            r.require(ok, "representation-naturality", || format!("ρ not natural in the second variable along {}", c.morphism_label(x)));
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepresentationError {
    #[error("not representable: no object represents F(-, {object}) ({candidates} candidates exhausted)")]
    NotRepresentable { object: String, candidates: usize },
    #[error("search space exceeds the cap of {cap} candidate elements")]
    Cap { cap: usize },
    #[error("found data failed verification: {0}")]
    Unverified(String),
}

/// A representation found by search, with the universal elements used.
#[derive(Clone, Debug)]
pub struct FoundRepresentation {
    pub representation: Representation,
    /// `(d(b), u_b ∈ F(d b, b))` per object `b`.
    pub universal: Vec<(Obj, u32)>,
    /// Objects admitting a universal element, per `b`.
    pub alternatives: Vec<Vec<Obj>>,
    pub candidates_tried: usize,
}

pub const DEFAULT_SEARCH_CAP: usize = 50_000_000;

/// Exhaustive search for `(d, ρ)` with `ρ: Hom(−, d b) ≅ F(−, b)`.
///
/// By Yoneda a representation of `F(−, b)` is an object `x` with an element
/// `u ∈ F(x, b)` such that `f ↦ F(f, b)(u)` is bijective on every
/// `Hom(a, x)`. Candidates are pruned by hom-set cardinalities.
pub fn find_representation(p: &Pairing, cap: usize) -> Result<FoundRepresentation, RepresentationError> {
    let c = &*p.base;
    let n = c.object_count();
    let mut universal = Vec::with_capacity(n);
    let mut alternatives = Vec::with_capacity(n);
    let mut tried = 0usize;
    let mut work = 0usize;
    for b in 0..n {
        let mut found: Option<(Obj, u32)> = None;
        let mut objs = Vec::new();
        for x in 0..n {
            if !(0..n).all(|a| c.hom(a, x).len() == p.size(a, b)) {
                continue;
            }
            tried += 1;
            for u in 0..p.size(x, b) as u32 {
                work += (0..n).map(|a| c.hom(a, x).len()).sum::<usize>();
                if work > cap {
                    return Err(RepresentationError::Cap { cap });
                }
                let bij = (0..n).all(|a| {
                    let mut seen = vec![false; p.size(a, b)];
                    c.hom(a, x).all(|f| !std::mem::replace(&mut seen[p.first[f][b][u as usize] as usize], true))
                });
                if bij {
                    if found.is_none() {
                        found = Some((x, u));
                    }
                    if objs.last() != Some(&x) {
                        objs.push(x);
                    }
                }
            }
        }
        match found {
            Some(fu) => {
                universal.push(fu);
                alternatives.push(objs);
            }
            None => {
                return Err(RepresentationError::NotRepresentable { object: c.object_label(b), candidates: tried })
            }
        }
    }
    let d_obj: Vec<Obj> = universal.iter().map(|&(x, _)| x).collect();
    let mut rho = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (x, u) = universal[b];
            rho.push(c.hom(a, x).map(|f| p.first[f][b][u as usize]).collect::<Vec<u32>>());
        }
    }
    // d(Y) = ρ^{-1}(F(d b, Y)(u_b)) for Y: b' → b
    let mut d_mor = Vec::with_capacity(c.morphism_count());
    for y in 0..c.morphism_count() {
        let (b2, b) = (c.dom(y), c.cod(y));
        let (x, u) = universal[b];
        let target = p.second[y][x][u as usize];
        let row = &rho[x * n + b2];
        let pos = row.iter().position(|&e| e == target).expect("ρ is bijective");
        d_mor.push(c.hom(x, d_obj[b2]).start + pos);
    }
    let representation = Representation { d: Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor }, rho };
    let mut q = p.clone();
    q.representation = Some(representation.clone());
    q.symmetry = None;
    let mut r = ValidationReport::new();
    check_representation(&q, &representation, &mut r);
    if !r.is_ok() {
        return Err(RepresentationError::Unverified(r.to_string()));
    }
    for (b, objs) in alternatives.iter().enumerate() {
        for &x in objs.iter().skip(1) {
            if !objs_isomorphic(c, objs[0], x) {
                return Err(RepresentationError::Unverified(format!("representing objects for {b} are not isomorphic")));
            }
        }
    }
    Ok(FoundRepresentation { representation, universal, alternatives, candidates_tried: tried })
}

fn objs_isomorphic(c: &dyn Category, x: Obj, y: Obj) -> bool {
    c.hom(x, y).any(|f| c.is_iso(f))
}

/// The comparison `κ_b: d'(b) → d(b)` between two representations of the
/// same pairing, `κ_b = ρ^{-1}(ρ'(id))`, checked invertible and natural.
pub fn representation_iso(p: &Pairing, rep: &Representation, other: &Representation) -> Result<Vec<Mor>, String> {
    let c = &*p.base;
    let n = c.object_count();
    let mut kappa = Vec::with_capacity(n);
    for b in 0..n {
        let x = other.d.obj[b];
        let e = other.rho[x * n + b][local(c, c.identity(x)) as usize];
        let pos = rep.rho[x * n + b].iter().position(|&t| t == e).ok_or("element outside ρ")?;
        let k = c.hom(x, rep.d.obj[b]).start + pos;
        if !c.is_iso(k) {
            return Err(format!("comparison at {} is not invertible", c.object_label(b)));
        }
        kappa.push(k);
    }
    let t = NatTrans { source: other.d.clone(), target: rep.d.clone(), components: kappa.clone() };
    // contravariant endpoints: components go d'(b) → d(b) = target → source
    let flipped = NatTrans { source: rep.d.clone(), target: other.d.clone(), components: t.components };
    let mut r = ValidationReport::new();
    check_nattrans_into(c, c, &flipped, &mut r);
    if !r.is_ok() {
        return Err(r.to_string());
    }
    Ok(kappa)
}

/// `(d, η)` from a symmetric represented pairing: `η_b` is the image of
/// `id_{d b}` under `ρ^{-1} ∘ σ ∘ ρ`. Strict when the strict extras hold.
pub fn volutive_from_pairing(p: &Pairing) -> Result<VolutiveStructure, ValidationReport> {
    let mut pre = ValidationReport::new();
    let (Some(sym), Some(rep)) = (&p.symmetry, &p.representation) else {
        pre.push("pairing-shape", "symmetry and representation are required");
        return Err(pre);
    };
    let c = &*p.base;
    let n = c.object_count();
    let mut eta = Vec::with_capacity(n);
    for b in 0..n {
        let db = rep.d.obj[b];
        let e = rep.rho[db * n + b][local(c, c.identity(db)) as usize];
        let s = sym[db * n + b][e as usize];
        let ddb = rep.d.obj[db];
        let pos = rep.rho[b * n + db].iter().position(|&t| t == s).expect("ρ is bijective");
        eta.push(c.hom(b, ddb).start + pos);
    }
    let v = VolutiveStructure::new(p.base.clone(), rep.d.clone(), eta, Kind::Lax);
    let r = check_volutive_as(&v, Kind::Lax);
    if !r.is_ok() {
        return Err(r);
    }
    if check_strict_extras(&v).is_ok() {
        Ok(v.with_kind(Kind::Strict))
    } else {
        Ok(v)
    }
}

/// `(c, Z, h)` with `h: id → Z^op Z`.
#[derive(Clone)]
pub struct VolutiveAdjunctionData {
    pub c: CatRef,
    pub z: Functor,
    pub h: NatTrans,
}

pub fn adjunction_data_from_volutive(v: &VolutiveStructure) -> VolutiveAdjunctionData {
    VolutiveAdjunctionData { c: v.base.clone(), z: v.d.clone(), h: v.eta_nattrans() }
}

/// Checks that `Z` is a functor, `h` is natural, and both triangle
/// identities by whiskering: `(Z h) • (h Z) = id_Z` in `C` and its mate in
/// `C^op`.
pub fn verify_zorro(data: &VolutiveAdjunctionData) -> ValidationReport {
    let c = &*data.c;
    let mut r = ValidationReport::new();
    let mut pre = ValidationReport::new();
    check_functor_into(c, c, &data.z, &mut pre);
    if data.z.variance != Variance::Contravariant {
        pre.push("functor-shape", "Z must be contravariant");
    }
    if pre.is_ok() {
        check_nattrans_into(c, c, &data.h, &mut pre);
    }
    if !pre.is_ok() {
        for v in pre.violations {
            r.push(&format!("data/{}", v.law), v.detail);
        }
        return r;
    }
    let id_z = NatTrans::identity(&data.z, c);
    let zh = whisker_left(&data.z, &data.h);
    let hz = whisker_right(&data.h, &data.z);
    zorro_compare(c, vertical(&hz, &zh, c), &id_z, "zorro-first", &mut r);
    let op = Opposite(data.c.clone());
    let eps = NatTrans { source: data.h.target.clone(), target: data.h.source.clone(), components: data.h.components.clone() };
    let z_eps = whisker_left(&data.z, &eps);
    let eps_z = whisker_right(&eps, &data.z);
    zorro_compare(c, vertical(&z_eps, &eps_z, &op), &id_z, "zorro-second", &mut r);
    r
}

fn zorro_compare(c: &dyn Category, got: Option<NatTrans>, want: &NatTrans, law: &str, r: &mut ValidationReport) {
    match got {
        None => r.push(law, "whiskered transformations do not compose"),
        Some(t) => {
            for (a, (&x, &y)) in t.components.iter().zip(&want.components).enumerate() {
                r.require(x == y, law, || format!("triangle identity fails at {}", c.object_label(a)));
            }
        }
    }
}

/// Serialized pairing.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairingJson {
    pub sizes: Vec<Vec<usize>>,
    pub first: Vec<Vec<Vec<u32>>>,
    pub second: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<Vec<Vec<u32>>>,
}

impl Pairing {
    pub fn to_json(&self) -> PairingJson {
        let n = self.n();
        PairingJson {
            sizes: self.sizes.chunks(n.max(1)).map(|c| c.to_vec()).collect(),
            first: self.first.clone(),
            second: self.second.clone(),
            symmetry: self.symmetry.clone(),
        }
    }

    pub fn from_json(base: CatRef, j: PairingJson) -> Pairing {
        Pairing {
            base,
            sizes: j.sizes.concat(),
            first: j.first,
            second: j.second,
            symmetry: j.symmetry,
            representation: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FiniteCategory;
    use crate::instances::catalog::{arrow_swap, bundled, terminal};
    use crate::volutive::Mutation;
    use std::sync::Arc;

    fn round_trip(v: &VolutiveStructure) {
        let p = pairing_from_volutive(v);
        let r = check_pairing(&p);
        assert!(r.is_ok(), "{r}");
        let w = volutive_from_pairing(&p).unwrap();
        assert_eq!(w.d, v.d);
        assert_eq!(w.eta, v.eta);
        let mut bare = p.clone();
        bare.representation = None;
        let found = find_representation(&bare, DEFAULT_SEARCH_CAP).unwrap();
        representation_iso(&p, p.representation.as_ref().unwrap(), &found.representation).unwrap();
        assert!(verify_zorro(&adjunction_data_from_volutive(v)).is_ok());
    }

    #[test]
    fn small_round_trips() {
        round_trip(&terminal());
        round_trip(&arrow_swap());
        round_trip(&bundled("f2vect_2").unwrap().volutive);
        round_trip(&bundled("heyting_chain_3").unwrap().volutive);
    }

    #[test]
    fn terminal_pairings() {
        let t: CatRef = Arc::new(FiniteCategory::terminal());
        let p = pairing_from_volutive(&terminal());
        assert_eq!(p.sizes, vec![1]);
        assert!(find_representation(&Pairing::constant(t.clone(), 1), DEFAULT_SEARCH_CAP).is_ok());
        let two = Pairing::constant(t, 2);
        assert!(check_pairing(&two).is_ok());
        assert!(matches!(
            find_representation(&two, DEFAULT_SEARCH_CAP),
            Err(RepresentationError::NotRepresentable { .. })
        ));
    }

    #[test]
    fn vect_pairing_sizes() {
        let v = bundled("f2vect_2").unwrap().volutive;
        let p = pairing_from_volutive(&v);
        for m in 0..3 {
            for n in 0..3 {
                assert_eq!(p.size(m, n), 1 << (m * n));
            }
        }
    }

    #[test]
    fn mv_pairing_support() {
        let v = bundled("lukasiewicz3_dualizing").unwrap().volutive;
        let p = pairing_from_volutive(&v);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(p.size(a, b) == 1, a + b <= 2);
            }
        }
    }

    #[test]
    fn corrupted_eta_breaks_zorro() {
        let v = bundled("f2vect_2").unwrap().volutive;
        let c = &*v.base;
        let a = 2;
        let bad = c.hom(a, a).find(|&f| f != v.eta[a] && c.is_iso(f)).unwrap();
        let w = Mutation::Eta { object: a, to: bad }.apply(&v);
        let r = verify_zorro(&adjunction_data_from_volutive(&w));
        assert!(!r.is_ok());
    }
}
