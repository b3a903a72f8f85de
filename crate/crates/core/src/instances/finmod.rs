//! Right modules over finite rings with involution, and the lax volutive
//! structure `M ↦ hom_R(M, R)`, `η = ι`.
//!
//! Modules are enumerated on canonical abelian groups `Z/n₁ × … × Z/n_k`
//! (prime-power factors, descending). Homomorphisms are found by brute force
//! over images of additive generators. The module category is the largest
//! set of enumerated modules closed under taking duals; each dual is
//! identified with an enumerated module through an explicit isomorphism.

use crate::fincat::{CatRef, FincatError, FiniteCategory, Functor, Mor, Obj, Variance};
use crate::volutive::{Kind, VolutiveStructure};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring law fails: {0}")]
    Law(String),
    #[error("unknown ring preset {0}")]
    UnknownPreset(String),
}

/// Serialized ring tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub name: String,
    pub labels: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    pub star: Vec<usize>,
}

/// A finite ring with an involutive anti-automorphism `⋆`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRing {
    pub name: String,
    pub labels: Vec<String>,
    n: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    pub zero: usize,
    pub one: usize,
    star: Vec<usize>,
    /// Generators of the ring together with `1`.
    gens: Vec<usize>,
}

impl StarRing {
    pub fn from_json(j: &RingJson) -> Result<StarRing, RingError> {
        let n = j.labels.len();
        let law = |s: String| Err(RingError::Law(s));
        let square = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|&x| x < n));
        if !square(&j.add) || !square(&j.mul) || j.star.len() != n || j.star.iter().any(|&x| x >= n) {
            return law("tables have the wrong shape".into());
        }
        if j.zero >= n || j.one >= n {
            return law("zero or one out of range".into());
        }
        let (a, m, s) = (&j.add, &j.mul, &j.star);
        for x in 0..n {
            if a[x][j.zero] != x {
                return law(format!("zero is not neutral at {}", j.labels[x]));
            }
            if m[x][j.one] != x || m[j.one][x] != x {
                return law(format!("one is not neutral at {}", j.labels[x]));
            }
            if !(0..n).any(|y| a[x][y] == j.zero) {
                return law(format!("{} has no negative", j.labels[x]));
            }
            if s[s[x]] != x {
                return law(format!("star is not an involution at {}", j.labels[x]));
            }
            for y in 0..n {
                if a[x][y] != a[y][x] {
                    return law("addition not commutative".into());
                }
                if s[a[x][y]] != a[s[x]][s[y]] {
                    return law("star not additive".into());
                }
                if s[m[x][y]] != m[s[y]][s[x]] {
                    return law(format!("star not anti-multiplicative at ({}, {})", j.labels[x], j.labels[y]));
                }
                for z in 0..n {
                    if a[a[x][y]][z] != a[x][a[y][z]] {
                        return law("addition not associative".into());
                    }
                    if m[m[x][y]][z] != m[x][m[y][z]] {
                        return law("multiplication not associative".into());
                    }
                    if m[x][a[y][z]] != a[m[x][y]][m[x][z]] || m[a[y][z]][x] != a[m[y][x]][m[z][x]] {
                        return law("distributivity fails".into());
                    }
                }
            }
        }
        if s[j.one] != j.one {
            return law("star does not fix one".into());
        }
        let mut r = StarRing {
            name: j.name.clone(),
            labels: j.labels.clone(),
            n,
            add: a.concat(),
            mul: m.concat(),
            zero: j.zero,
            one: j.one,
            star: s.clone(),
            gens: Vec::new(),
        };
        r.gens = r.generators();
        Ok(r)
    }

    pub fn to_json(&self) -> RingJson {
        let rows = |t: &Vec<usize>| t.chunks(self.n).map(|c| c.to_vec()).collect();
        RingJson {
            name: self.name.clone(),
            labels: self.labels.clone(),
            add: rows(&self.add),
            mul: rows(&self.mul),
            zero: self.zero,
            one: self.one,
            star: self.star.clone(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.n + y]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y]
    }

    pub fn star(&self, x: usize) -> usize {
        self.star[x]
    }

    /// Additive order of `1`.
    pub fn characteristic(&self) -> usize {
        let mut x = self.one;
        let mut k = 1;
        while x != self.zero {
            x = self.add(x, self.one);
            k += 1;
        }
        k
    }

    fn closure(&self, seed: &[usize]) -> Vec<bool> {
        let mut have = vec![false; self.n];
        let mut list = vec![self.zero, self.one];
        have[self.zero] = true;
        have[self.one] = true;
        for &s in seed {
            if !have[s] {
                have[s] = true;
                list.push(s);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                let (x, y) = (list[i], list[j]);
                for z in [self.add(x, y), self.mul(x, y), self.mul(y, x)] {
                    if !have[z] {
                        have[z] = true;
                        list.push(z);
                    }
                }
            }
            i += 1;
        }
        have
    }

    fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        loop {
            let have = self.closure(&gens);
            match (0..self.n).find(|&x| !have[x]) {
                None => return gens,
                Some(x) => gens.push(x),
            }
        }
    }

    pub fn ring_generators(&self) -> &[usize] {
        &self.gens
    }

    /// `Z/4` with the identity involution.
    pub fn z4() -> StarRing {
        let t = |f: fn(usize, usize) -> usize| (0..4).map(|x| (0..4).map(|y| f(x, y)).collect()).collect();
        Self::from_json(&RingJson {
            name: "z4".into(),
            labels: (0..4).map(|i| i.to_string()).collect(),
            add: t(|x, y| (x + y) % 4),
            mul: t(|x, y| (x * y) % 4),
            zero: 0,
            one: 1,
            star: (0..4).collect(),
        })
        .expect("Z/4")
    }

    /// `F₂[x,y]/(x,y)²`, element `c₀ + c₁x + c₂y` stored as bits `c₀ c₁ c₂`.
    pub fn f2xy() -> StarRing {
        let mul = |a: usize, b: usize| {
            let (a0, b0) = (a & 1, b & 1);
            let c1 = (a0 * (b >> 1 & 1)) ^ ((a >> 1 & 1) * b0);
            let c2 = (a0 * (b >> 2 & 1)) ^ ((a >> 2 & 1) * b0);
            (a0 * b0) | c1 << 1 | c2 << 2
        };
        let labels = ["0", "1", "x", "1+x", "y", "1+y", "x+y", "1+x+y"];
        Self::from_json(&RingJson {
            name: "f2xy".into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            add: (0..8).map(|a| (0..8).map(|b| a ^ b).collect()).collect(),
            mul: (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect(),
            zero: 0,
            one: 1,
            star: (0..8).collect(),
        })
        .expect("F2[x,y]/(x,y)^2")
    }

    /// Upper triangular `2 × 2` matrices over `F₂`, `[[a,b],[0,c]]` stored as
    /// bits `a b c`, with the anti-diagonal flip `[[a,b],[0,c]] ↦ [[c,b],[0,a]]`.
    pub fn t2f2() -> StarRing {
        let parts = |x: usize| (x & 1, x >> 1 & 1, x >> 2 & 1);
        let pack = |a: usize, b: usize, c: usize| a | b << 1 | c << 2;
        let mul = |x: usize, y: usize| {
            let ((a, b, c), (a2, b2, c2)) = (parts(x), parts(y));
            pack(a * a2, (a * b2) ^ (b * c2), c * c2)
        };
        let star = |x: usize| {
            let (a, b, c) = parts(x);
            pack(c, b, a)
        };
        let labels = (0..8)
            .map(|x| {
                let (a, b, c) = parts(x);
                format!("[{a}{b};0{c}]")
            })
            .collect();
        Self::from_json(&RingJson {
            name: "t2f2".into(),
            labels,
            add: (0..8).map(|a| (0..8).map(|b| a ^ b).collect()).collect(),
            mul: (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect(),
            zero: 0,
            one: pack(1, 0, 1),
            star: (0..8).map(star).collect(),
        })
        .expect("T2(F2)")
    }

    pub fn preset(name: &str) -> Result<StarRing, RingError> {
        match name {
            "z4" => Ok(Self::z4()),
            "f2xy" => Ok(Self::f2xy()),
            "t2f2" => Ok(Self::t2f2()),
            _ => Err(RingError::UnknownPreset(name.into())),
        }
    }
}

/// A finite right module given by tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableModule {
    pub size: usize,
    add: Vec<u32>,
    act: Vec<u32>,
    pub zero: usize,
    rsize: usize,
}

impl TableModule {
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    /// `x · r`.
    pub fn act(&self, x: usize, r: usize) -> usize {
        self.act[x * self.rsize + r] as usize
    }

    /// The right regular module `R_R`.
    pub fn regular(r: &StarRing) -> TableModule {
        let n = r.size();
        TableModule {
            size: n,
            add: (0..n * n).map(|i| r.add(i / n, i % n) as u32).collect(),
            act: (0..n * n).map(|i| r.mul(i / n, i % n) as u32).collect(),
            zero: r.zero,
            rsize: n,
        }
    }

    pub fn check(&self, r: &StarRing) -> Result<(), String> {
        let n = self.size;
        for x in 0..n {
            if self.add(x, self.zero) != x {
                return Err("zero not neutral".into());
            }
            if self.act(x, r.one) != x {
                return Err("one does not act trivially".into());
            }
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    return Err("addition not commutative".into());
                }
                for s in 0..r.size() {
                    if self.act(self.add(x, y), s) != self.add(self.act(x, s), self.act(y, s)) {
                        return Err("action not additive in the module".into());
                    }
                }
            }
            for s in 0..r.size() {
                for t in 0..r.size() {
                    if self.act(x, r.add(s, t)) != self.add(self.act(x, s), self.act(x, t)) {
                        return Err("action not additive in the ring".into());
                    }
                    if self.act(x, r.mul(s, t)) != self.act(self.act(x, s), t) {
                        return Err("action not associative".into());
                    }
                }
            }
        }
        Ok(())
    }

    fn order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.zero {
            y = self.add(y, x);
            k += 1;
        }
        k
    }

    /// A small set of additive generators, chosen greedily.
    pub fn additive_generators(&self) -> Vec<usize> {
        let mut have = vec![false; self.size];
        have[self.zero] = true;
        let mut span = vec![self.zero];
        let mut gens = Vec::new();
        loop {
            let next = (0..self.size)
                .filter(|&x| !have[x])
                .max_by_key(|&x| (self.order(x), std::cmp::Reverse(x)));
            let Some(g) = next else { return gens };
            gens.push(g);
            let mut i = 0;
            while i < span.len() {
                let y = self.add(span[i], g);
                if !have[y] {
                    have[y] = true;
                    span.push(y);
                }
                i += 1;
            }
        }
    }

    /// Isomorphism invariants: element-order histogram and the sizes of the
    /// annihilator of every ring element.
    pub fn fingerprint(&self, r: &StarRing) -> (usize, BTreeMap<usize, usize>, Vec<usize>) {
        let mut orders = BTreeMap::new();
        for x in 0..self.size {
            *orders.entry(self.order(x)).or_insert(0) += 1;
        }
        let kernels = (0..r.size())
            .map(|s| (0..self.size).filter(|&x| self.act(x, s) == self.zero).count())
            .collect();
        (self.size, orders, kernels)
    }
}

/// All `R`-linear maps `src → tgt`, as element images.
pub fn module_homs(r: &StarRing, src: &TableModule, tgt: &TableModule) -> Vec<Vec<u32>> {
    let gens = src.additive_generators();
    let orders: Vec<usize> = gens.iter().map(|&g| src.order(g)).collect();
    let cands: Vec<Vec<usize>> = orders
        .iter()
        .map(|&o| (0..tgt.size).filter(|&t| o % tgt.order(t) == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    if cands.iter().any(|c| c.is_empty()) {
        return out;
    }
    'outer: loop {
        let imgs: Vec<usize> = choice.iter().enumerate().map(|(i, &c)| cands[i][c]).collect();
        if let Some(f) = extend_additive(src, tgt, &gens, &imgs) {
            let linear = (0..src.size).all(|x| {
                r.ring_generators()
                    .iter()
                    .all(|&s| f[src.act(x, s)] as usize == tgt.act(f[x] as usize, s))
            });
            if linear {
                out.push(f);
            }
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
    out
}

/// The additive map sending `gens[i] ↦ imgs[i]`, if it is well defined.
fn extend_additive(src: &TableModule, tgt: &TableModule, gens: &[usize], imgs: &[usize]) -> Option<Vec<u32>> {
    let mut f = vec![u32::MAX; src.size];
    f[src.zero] = tgt.zero as u32;
    let mut queue = VecDeque::from([src.zero]);
    while let Some(x) = queue.pop_front() {
        for (&g, &t) in gens.iter().zip(imgs) {
            let y = src.add(x, g);
            let v = tgt.add(f[x] as usize, t) as u32;
            if f[y] == u32::MAX {
                f[y] = v;
                queue.push_back(y);
            } else if f[y] != v {
                return None;
            }
        }
    }
    // additivity on all pairs
    for x in 0..src.size {
        for y in 0..src.size {
            if f[src.add(x, y)] as usize != tgt.add(f[x] as usize, f[y] as usize) {
                return None;
            }
        }
    }
    Some(f)
}

fn is_bijection(f: &[u32], size: usize) -> bool {
    if f.len() != size {
        return false;
    }
    let mut seen = vec![false; size];
    f.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
}

/// An isomorphism `src → tgt`, if one exists.
pub fn find_iso(r: &StarRing, src: &TableModule, tgt: &TableModule) -> Option<Vec<u32>> {
    if src.size != tgt.size || src.fingerprint(r) != tgt.fingerprint(r) {
        return None;
    }
    module_homs(r, src, tgt).into_iter().find(|f| is_bijection(f, tgt.size))
}

/// `M^∨ = hom_R(M, R)` with `(φ·r)(m) = r^⋆ φ(m)`, together with its elements.
pub fn dual_module(r: &StarRing, m: &TableModule) -> (TableModule, Vec<Vec<u32>>) {
    let reg = TableModule::regular(r);
    let mut elems = module_homs(r, m, &reg);
    elems.sort();
    let index: HashMap<Vec<u32>, usize> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let n = elems.len();
    let mut add = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let s: Vec<u32> = (0..m.size).map(|x| r.add(elems[i][x] as usize, elems[j][x] as usize) as u32).collect();
            add[i * n + j] = index[&s] as u32;
        }
    }
    let mut act = vec![0u32; n * r.size()];
    for i in 0..n {
        for t in 0..r.size() {
            let s: Vec<u32> = (0..m.size).map(|x| r.mul(r.star(t), elems[i][x] as usize) as u32).collect();
            act[i * r.size() + t] = index[&s] as u32;
        }
    }
    let zero = index[&vec![r.zero as u32; m.size]];
    (TableModule { size: n, add, act, zero, rsize: r.size() }, elems)
}

/// `ι_M(m)(φ) = φ(m)^⋆`, as a map `M → M^∨∨` on element indices.
pub fn iota(r: &StarRing, m: &TableModule) -> (Vec<u32>, TableModule) {
    let (d, delems) = dual_module(r, m);
    let (dd, ddelems) = dual_module(r, &d);
    let index: HashMap<&Vec<u32>, usize> = ddelems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let map = (0..m.size)
        .map(|x| {
            let ev: Vec<u32> = delems.iter().map(|phi| r.star(phi[x] as usize) as u32).collect();
            index[&ev] as u32
        })
        .collect();
    (map, dd)
}

/// Prime-power cyclic factorizations of abelian groups of order at most `cap`
/// whose exponent divides `exponent`.
pub fn canonical_groups(cap: usize, exponent: usize) -> Vec<Vec<usize>> {
    let prime_powers: Vec<usize> = (2..=cap)
        .filter(|&n| {
            let p = (2..=n).find(|&d| n % d == 0).unwrap();
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            m == 1 && exponent % n == 0
        })
        .collect();
    let mut out = vec![vec![]];
    fn rec(pp: &[usize], start: usize, cur: &mut Vec<usize>, prod: usize, cap: usize, out: &mut Vec<Vec<usize>>) {
        for i in start..pp.len() {
            let q = pp[i];
            if prod * q > cap {
                continue;
            }
            cur.push(q);
            let mut g = cur.clone();
            g.sort_unstable_by(|a, b| b.cmp(a));
            out.push(g);
            rec(pp, i, cur, prod * q, cap, out);
            cur.pop();
        }
    }
    rec(&prime_powers, 0, &mut Vec::new(), 1, cap, &mut out);
    out.sort_by_key(|g| (g.iter().product::<usize>(), g.clone()));
    out.dedup();
    out
}

fn group_module(orders: &[usize], rsize: usize) -> TableModule {
    let size: usize = orders.iter().product();
    let decode = |mut x: usize| -> Vec<usize> {
        orders
            .iter()
            .rev()
            .map(|&o| {
                let d = x % o;
                x /= o;
                d
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect()
    };
    let encode = |v: &[usize]| v.iter().zip(orders).fold(0, |acc, (&d, &o)| acc * o + d);
    let mut add = vec![0u32; size * size];
    for x in 0..size {
        let a = decode(x);
        for y in 0..size {
            let b = decode(y);
            let s: Vec<usize> = a.iter().zip(&b).zip(orders).map(|((p, q), o)| (p + q) % o).collect();
            add[x * size + y] = encode(&s) as u32;
        }
    }
    TableModule { size, add, act: vec![0; size * rsize], zero: 0, rsize }
}

fn group_label(orders: &[usize]) -> String {
    if orders.is_empty() {
        "0".into()
    } else {
        orders.iter().map(|o| format!("Z{o}")).collect::<Vec<_>>().join("x")
    }
}

/// Every right module structure on the group `orders`.
pub fn module_structures(r: &StarRing, orders: &[usize]) -> Vec<TableModule> {
    let base = group_module(orders, r.size());
    let ends = module_homs_additive(&base);
    let gens = r.ring_generators().to_vec();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let assigned: Vec<&Vec<u32>> = choice.iter().map(|&c| &ends[c]).collect();
        if let Some(m) = close_action(r, &base, &gens, &assigned) {
            out.push(m);
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < ends.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All additive endomorphisms of a group module.
fn module_homs_additive(g: &TableModule) -> Vec<Vec<u32>> {
    let gens = g.additive_generators();
    let orders: Vec<usize> = gens.iter().map(|&x| g.order(x)).collect();
    let cands: Vec<Vec<usize>> =
        orders.iter().map(|&o| (0..g.size).filter(|&t| o % g.order(t) == 0).collect()).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let imgs: Vec<usize> = choice.iter().enumerate().map(|(i, &c)| cands[i][c]).collect();
        if let Some(f) = extend_additive(g, g, &gens, &imgs) {
            out.push(f);
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Extends an assignment of endomorphisms to ring generators to the whole
/// ring, if consistent.
fn close_action(r: &StarRing, base: &TableModule, gens: &[usize], assigned: &[&Vec<u32>]) -> Option<TableModule> {
    let n = base.size;
    let mut rho: Vec<Option<Vec<u32>>> = vec![None; r.size()];
    rho[r.zero] = Some(vec![base.zero as u32; n]);
    rho[r.one] = Some((0..n as u32).collect());
    for (&s, &e) in gens.iter().zip(assigned) {
        if let Some(prev) = &rho[s] {
            if prev != e {
                return None;
            }
        }
        rho[s] = Some(e.clone());
    }
    let mut known: Vec<usize> = (0..r.size()).filter(|&s| rho[s].is_some()).collect();
    let mut i = 0;
    while i < known.len() {
        for j in 0..=i {
            for (x, y) in [(known[i], known[j]), (known[j], known[i])] {
                let (fx, fy) = (rho[x].clone().unwrap(), rho[y].clone().unwrap());
                let sum: Vec<u32> = (0..n).map(|m| base.add(fx[m] as usize, fy[m] as usize) as u32).collect();
                // m·(xy) = (m·x)·y
                let prod: Vec<u32> = (0..n).map(|m| fy[fx[m] as usize]).collect();
                for (k, v) in [(r.add(x, y), sum), (r.mul(x, y), prod)] {
                    match &rho[k] {
                        Some(p) if *p != v => return None,
                        Some(_) => {}
                        None => {
                            rho[k] = Some(v);
                            known.push(k);
                        }
                    }
                }
            }
        }
        i += 1;
    }
    if rho.iter().any(|x| x.is_none()) {
        return None;
    }
    let rs = r.size();
    let mut act = vec![0u32; n * rs];
    for (s, f) in rho.iter().enumerate() {
        for (m, &v) in f.as_ref().unwrap().iter().enumerate() {
            act[m * rs + s] = v;
        }
    }
    let m = TableModule { act, ..base.clone() };
    m.check(r).ok().map(|_| m)
}

#[derive(Clone, Copy, Debug)]
pub struct FinModOptions {
    /// Largest carrier size.
    pub cap: usize,
    /// Keep one module per isomorphism class.
    pub skeletal: bool,
}

impl Default for FinModOptions {
    fn default() -> Self {
        FinModOptions { cap: 8, skeletal: false }
    }
}

/// An enumerated module with its dual data.
#[derive(Clone, Debug)]
pub struct ListedModule {
    pub label: String,
    pub group: Vec<usize>,
    pub module: TableModule,
}

/// The module category with its lax volutive structure.
pub struct FinModInstance {
    pub ring: StarRing,
    pub modules: Vec<ListedModule>,
    /// Maps of each morphism on elements.
    pub maps: Vec<Vec<u32>>,
    pub category: Arc<FiniteCategory>,
    pub volutive: VolutiveStructure,
    /// Enumerated modules dropped because the dual chain leaves the cap.
    pub dropped: Vec<String>,
}

impl FinModInstance {
    pub fn object_by_label(&self, label: &str) -> Option<Obj> {
        self.modules.iter().position(|m| m.label == label)
    }
}

/// Builds the module category and its structure.
pub fn build_finmod(r: &StarRing, opts: FinModOptions) -> Result<FinModInstance, FincatError> {
    let ch = r.characteristic();
    let mut listed: Vec<ListedModule> = Vec::new();
    for g in canonical_groups(opts.cap, ch) {
        for (i, m) in module_structures(r, &g).into_iter().enumerate() {
            if opts.skeletal && listed.iter().any(|l| find_iso(r, &l.module, &m).is_some()) {
                continue;
            }
            listed.push(ListedModule { label: format!("{}#{}", group_label(&g), i), group: g.clone(), module: m });
        }
    }
    // dual of each listed module, identified with the first isomorphic listed one
    let mut fp_index: HashMap<_, Vec<usize>> = HashMap::new();
    for (i, l) in listed.iter().enumerate() {
        fp_index.entry(l.module.fingerprint(r)).or_default().push(i);
    }
    struct DualData {
        target: usize,
        /// dual element index → element of the target
        to_target: Vec<u32>,
        elems: Vec<Vec<u32>>,
        dual: TableModule,
    }
    let mut duals: Vec<Option<DualData>> = Vec::with_capacity(listed.len());
    for l in &listed {
        let (d, elems) = dual_module(r, &l.module);
        let mut found = None;
        if d.size <= opts.cap {
            if let Some(cands) = fp_index.get(&d.fingerprint(r)) {
                for &c in cands {
                    if let Some(iso) = find_iso(r, &listed[c].module, &d) {
                        // iso: target → dual; invert it
                        let mut inv = vec![0u32; d.size];
                        for (x, &y) in iso.iter().enumerate() {
                            inv[y as usize] = x as u32;
                        }
                        found = Some(DualData { target: c, to_target: inv, elems: elems.clone(), dual: d.clone() });
                        break;
                    }
                }
            }
        }
        duals.push(found);
    }
    let mut keep: Vec<bool> = duals.iter().map(|d| d.is_some()).collect();
    loop {
        let mut changed = false;
        for i in 0..listed.len() {
            if keep[i] && !keep[duals[i].as_ref().unwrap().target] {
                keep[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let dropped = listed.iter().zip(&keep).filter(|(_, &k)| !k).map(|(l, _)| l.label.clone()).collect();
    let old_ids: Vec<usize> = (0..listed.len()).filter(|&i| keep[i]).collect();
    let mut new_id = vec![usize::MAX; listed.len()];
    for (k, &i) in old_ids.iter().enumerate() {
        new_id[i] = k;
    }
    let modules: Vec<ListedModule> = old_ids.iter().map(|&i| listed[i].clone()).collect();
    let dd: Vec<DualData> = {
        let mut duals = duals;
        old_ids.iter().map(|&i| duals[i].take().unwrap()).collect()
    };
    let n = modules.len();
    // morphisms
    let mut endpoints = Vec::new();
    let mut maps: Vec<Vec<u32>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut hs = module_homs(r, &modules[a].module, &modules[b].module);
            hs.sort();
            for h in hs {
                endpoints.push((a, b));
                maps.push(h);
            }
        }
    }
    let index: HashMap<(usize, usize, &[u32]), Mor> =
        maps.iter().enumerate().map(|(k, m)| ((endpoints[k].0, endpoints[k].1, m.as_slice()), k)).collect();
    let ids: Vec<Mor> = (0..n)
        .map(|a| {
            let id: Vec<u32> = (0..modules[a].module.size as u32).collect();
            index[&(a, a, id.as_slice())]
        })
        .collect();
    let labels: Vec<String> = modules.iter().map(|m| m.label.clone()).collect();
    let mlabels = maps
        .iter()
        .zip(&endpoints)
        .map(|(m, &(a, b))| {
            let img: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            format!("{}>{}[{}]", labels[a], labels[b], img.join(","))
        })
        .collect();
    let category = FiniteCategory::build(labels, &endpoints, Some(mlabels), ids, |g, f| {
        let h: Vec<u32> = maps[f].iter().map(|&x| maps[g][x as usize]).collect();
        index.get(&(endpoints[f].0, endpoints[g].1, h.as_slice())).copied()
    })?;
    // d on objects and morphisms
    let d_obj: Vec<Obj> = (0..n).map(|a| new_id[dd[a].target]).collect();
    let dual_index: Vec<HashMap<&[u32], usize>> = dd
        .iter()
        .map(|x| x.elems.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect())
        .collect();
    let from_target = |a: usize| -> Vec<u32> {
        let mut inv = vec![0u32; dd[a].to_target.len()];
        for (x, &y) in dd[a].to_target.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        inv
    };
    let from_targets: Vec<Vec<u32>> = (0..n).map(from_target).collect();
    let mut d_mor = Vec::with_capacity(maps.len());
    for (k, f) in maps.iter().enumerate() {
        let (a, b) = endpoints[k];
        // d(f): d(b) → d(a), x ↦ u_a(u_b^{-1}(x) ∘ f)
        let img: Vec<u32> = (0..modules[d_obj[b]].module.size)
            .map(|x| {
                let phi = &dd[b].elems[from_targets[b][x] as usize];
                let pulled: Vec<u32> = f.iter().map(|&m| phi[m as usize]).collect();
                dd[a].to_target[dual_index[a][pulled.as_slice()]]
            })
            .collect();
        let m = index
            .get(&(d_obj[b], d_obj[a], img.as_slice()))
            .copied()
            .ok_or_else(|| FincatError::Malformed("dual map is not a module map".into()))?;
        d_mor.push(m);
    }
    // η_M(m) = u_{dM}(ψ ↦ (u_M^{-1}(ψ))(m)^⋆)
    let mut eta = Vec::with_capacity(n);
    for a in 0..n {
        let da = d_obj[a];
        let img: Vec<u32> = (0..modules[a].module.size)
            .map(|m| {
                let ev: Vec<u32> = (0..modules[da].module.size)
                    .map(|psi| r.star(dd[a].elems[from_targets[a][psi] as usize][m] as usize) as u32)
                    .collect();
                dd[da].to_target[dual_index[da][ev.as_slice()]]
            })
            .collect();
        let m = index
            .get(&(a, d_obj[da], img.as_slice()))
            .copied()
            .ok_or_else(|| FincatError::Malformed("ι is not a module map".into()))?;
        eta.push(m);
    }
    let _ = dd.iter().map(|x| x.dual.size).sum::<usize>();
    let category = Arc::new(category);
    let volutive = VolutiveStructure::new(
        category.clone() as CatRef,
        Functor { variance: Variance::Contravariant, obj: d_obj, mor: d_mor },
        eta,
        Kind::Lax,
    );
    Ok(FinModInstance { ring: r.clone(), modules, maps, category, volutive, dropped })
}

/// The simple module `R/𝔪` of a local `F₂`-algebra: one nonzero element on
/// which every non-unit acts by zero.
pub fn simple_module(r: &StarRing) -> Option<TableModule> {
    module_structures(r, &[2]).into_iter().find(|m| (0..r.size()).all(|s| m.act(1, s) == 0 || m.act(1, s) == 1))
        .filter(|m| (0..r.size()).any(|s| s != r.zero && m.act(1, s) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{check_category, Category};
    use crate::volutive::{check_volutive, check_volutive_as};

    #[test]
    fn ring_presets_are_valid() {
        for r in [StarRing::z4(), StarRing::f2xy(), StarRing::t2f2()] {
            let back = StarRing::from_json(&r.to_json()).unwrap();
            assert_eq!(back, r);
        }
        assert_eq!(StarRing::z4().characteristic(), 4);
        assert_eq!(StarRing::f2xy().ring_generators().len(), 2);
    }

    #[test]
    fn regular_module_is_reflexive() {
        for r in [StarRing::z4(), StarRing::f2xy(), StarRing::t2f2()] {
            let reg = TableModule::regular(&r);
            let (i, dd) = iota(&r, &reg);
            assert_eq!(dd.size, reg.size);
            assert!(is_bijection(&i, dd.size));
        }
    }

    #[test]
    fn simple_module_over_f2xy_is_not_reflexive() {
        let r = StarRing::f2xy();
        let k = simple_module(&r).unwrap();
        let (d, _) = dual_module(&r, &k);
        assert_eq!(d.size, 4);
        let (i, dd) = iota(&r, &k);
        assert_eq!(dd.size, 16);
        assert_eq!(i.len(), 2);
    }

    #[test]
    fn z4_modules() {
        let inst = build_finmod(&StarRing::z4(), FinModOptions::default()).unwrap();
        assert!(check_category(&*inst.category).is_ok());
        assert!(check_volutive_as(&inst.volutive, Kind::Strict).is_ok());
        let z2 = inst.object_by_label("Z2#0").unwrap();
        assert!(inst.category.is_iso(inst.volutive.eta[z2]));
    }

    #[test]
    fn t2f2_has_a_non_reflexive_object() {
        let inst = build_finmod(&StarRing::t2f2(), FinModOptions { cap: 8, skeletal: true }).unwrap();
        let r = check_volutive(&inst.volutive);
        assert!(r.is_ok(), "{r}");
        assert!(inst.volutive.reflexive_objects().len() < inst.modules.len());
    }
}
