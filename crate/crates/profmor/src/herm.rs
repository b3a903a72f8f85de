//! Hermitian bimodules over star algebras and their composition.
//!
//! A hermitian structure on `M: A → B` is an F₂-bilinear pairing
//! `⟨−, −⟩: M × M → B` that is right `B`-linear in the second slot, satisfies
//! `⟨m, m'⟩* = ⟨m', m⟩` and `⟨a m, m'⟩ = ⟨m, a* m'⟩`. The pairing induces
//! `θ: M → d̄M = conj Hom_B(M, B)`, and symmetry is the fixed-point equation
//! `d̄θ ∘ η = θ`. The structure is honest when `θ` is invertible.

use crate::f2::Mat;
use crate::morita::{balanced_tensor, hom_space, verify_right_unitor, Bimodule, FinAlgebra, HomSpace, MoritaError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use volut_core::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermBimodule {
    pub module: Bimodule,
    /// `pairing[i][j] = ⟨e_i, e_j⟩`.
    pub pairing: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HermJson {
    pub module: crate::morita::BimoduleJson,
    pub pairing: Vec<Vec<u64>>,
}

impl HermBimodule {
    pub fn pair(&self, u: u64, v: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.module.dim {
            if u >> i & 1 == 1 {
                for j in 0..self.module.dim {
                    if v >> j & 1 == 1 {
                        out ^= self.pairing[i][j];
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> HermJson {
        HermJson { module: self.module.to_json(), pairing: self.pairing.clone() }
    }

    pub fn from_json(j: &HermJson) -> Result<HermBimodule, MoritaError> {
        let module = Bimodule::from_json(&j.module)?;
        let (n, bd) = (module.dim, module.right.dim);
        if j.pairing.len() != n || j.pairing.iter().any(|r| r.len() != n || r.iter().any(|&v| v >> bd != 0)) {
            return Err(MoritaError::Mismatch("pairing has the wrong shape".into()));
        }
        Ok(HermBimodule { module, pairing: j.pairing.clone() })
    }

    /// `B` with `⟨b, b'⟩ = b* b'`.
    pub fn unit(b: &Arc<FinAlgebra>) -> HermBimodule {
        let pairing = (0..b.dim).map(|i| (0..b.dim).map(|j| b.mul(b.star(1 << i), 1 << j)).collect()).collect();
        HermBimodule { module: Bimodule::regular(b), pairing }
    }
}

pub fn check_hermitian(h: &HermBimodule) -> ValidationReport {
    let mut r = ValidationReport::new();
    let m = &h.module;
    let (a, b) = (&m.left, &m.right);
    for i in 0..m.dim {
        for j in 0..m.dim {
            let (x, y) = (1u64 << i, 1u64 << j);
            r.require(b.star(h.pair(x, y)) == h.pair(y, x), "herm-symmetric", || format!("e{i}, e{j}"));
            for k in 0..b.dim {
                let lhs = h.pair(x, m.ract[k].apply(y));
                r.require(lhs == b.mul(h.pair(x, y), 1 << k), "herm-right-linear", || format!("e{i}, e{j} b{k}"));
            }
            for k in 0..a.dim {
                let lhs = h.pair(m.lact[k].apply(x), y);
                let rhs = h.pair(x, m.left_action(a.star(1 << k)).apply(y));
                r.require(lhs == rhs, "herm-adjoint", || format!("a{k} e{i}, e{j}"));
            }
        }
    }
    r
}

/// Every hermitian pairing on `m`.
pub fn enumerate_hermitian(m: &Bimodule) -> Vec<HermBimodule> {
    let (n, bd) = (m.dim, m.right.dim);
    let entries = n * n;
    let mut out = Vec::new();
    for code in 0u64..1 << (entries * bd) {
        let pairing = (0..n)
            .map(|i| (0..n).map(|j| code >> ((i * n + j) * bd) & ((1 << bd) - 1)).collect())
            .collect();
        let h = HermBimodule { module: m.clone(), pairing };
        if check_hermitian(&h).is_ok() {
            out.push(h);
        }
    }
    out
}

/// `d̄M = conj Hom_B(M, B)` with `a ▹ φ = φ(a* −)` and `φ ◃ b = b* φ`.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub module: Bimodule,
    pub space: HomSpace,
}

pub fn dual_module(m: &Bimodule) -> Result<DualModule, MoritaError> {
    let (a, b) = (&m.left, &m.right);
    let target = Bimodule {
        left: FinAlgebra::f2(),
        right: b.clone(),
        dim: b.dim,
        lact: vec![Mat::identity(b.dim)],
        ract: (0..b.dim).map(|k| b.right_mult(1 << k)).collect(),
    };
    let source = Bimodule { left: FinAlgebra::f2(), right: b.clone(), dim: m.dim, lact: vec![Mat::identity(m.dim)], ract: m.ract.clone() };
    let space = hom_space(&source, &target)?;
    let k = space.dim();
    let induce = |f: &dyn Fn(&Mat) -> Mat| -> Result<Mat, MoritaError> {
        let cols = space
            .basis
            .iter()
            .map(|phi| space.coordinates(&f(phi)).ok_or_else(|| MoritaError::Mismatch("action leaves the dual".into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mat::from_columns(k, &cols))
    };
    let lact = (0..a.dim)
        .map(|i| {
            let s = m.left_action(a.star(1 << i));
            induce(&|phi: &Mat| phi.mul(&s))
        })
        .collect::<Result<_, _>>()?;
    let ract = (0..b.dim)
        .map(|i| {
            let s = b.left_mult(b.star(1 << i));
            induce(&|phi: &Mat| s.mul(phi))
        })
        .collect::<Result<_, _>>()?;
    Ok(DualModule { module: Bimodule { left: a.clone(), right: b.clone(), dim: k, lact, ract }, space })
}

/// Outcome of the hermitian checks on one bimodule.
#[derive(Clone, Debug, Serialize)]
pub struct HermCheck {
    pub dim: usize,
    pub dual_dim: usize,
    pub theta_rank: usize,
    pub honest: bool,
    pub fixed_point: bool,
    pub report: ValidationReport,
}

/// Builds `θ`, `η` and `d̄θ` concretely and checks `d̄θ ∘ η = θ` alongside
/// the pairing axioms.
pub fn analyze_hermitian(h: &HermBimodule) -> Result<HermCheck, MoritaError> {
    let m = &h.module;
    let b = &m.right;
    let mut report = check_hermitian(h);
    let dm = dual_module(m)?;
    let ddm = dual_module(&dm.module)?;
    // θ(e_i) = ⟨e_i, −⟩
    let mut theta_cols = Vec::with_capacity(m.dim);
    for i in 0..m.dim {
        let phi = Mat::from_columns(b.dim, &(0..m.dim).map(|j| h.pairing[i][j]).collect::<Vec<_>>());
        match dm.space.coordinates(&phi) {
            Some(c) => theta_cols.push(c),
            None => {
                report.push("herm-theta-linear", format!("⟨e{i}, −⟩ is not right linear"));
                theta_cols.push(0);
            }
        }
    }
    let theta = Mat::from_columns(dm.module.dim, &theta_cols);
    for (s, t) in m.lact.iter().zip(&dm.module.lact).chain(m.ract.iter().zip(&dm.module.ract)) {
        report.require(theta.mul(s) == t.mul(&theta), "herm-theta-equivariant", || "θ is not a bimodule map".into());
    }
    // η(m)(φ) = φ(m)*
    let mut eta_cols = Vec::with_capacity(m.dim);
    for i in 0..m.dim {
        let vals: Vec<u64> = dm.space.basis.iter().map(|phi| b.star(phi.column(i))).collect();
        let psi = Mat::from_columns(b.dim, &vals);
        eta_cols.push(ddm.space.coordinates(&psi).unwrap_or_else(|| {
            report.push("herm-eta-linear", "evaluation is not right linear");
            0
        }));
    }
    let eta = Mat::from_columns(ddm.module.dim, &eta_cols);
    // d̄θ(ψ) = ψ ∘ θ, as a map d̄d̄M → d̄M in coordinates
    let mut dtheta_cols = Vec::with_capacity(ddm.module.dim);
    for psi in &ddm.space.basis {
        let mut cols = Vec::with_capacity(m.dim);
        for j in 0..m.dim {
            cols.push(psi.apply(theta.column(j)));
        }
        let comp = Mat::from_columns(b.dim, &cols);
        dtheta_cols.push(dm.space.coordinates(&comp).unwrap_or_else(|| {
            report.push("herm-dual-theta", "ψ ∘ θ is not right linear");
            0
        }));
    }
    let dtheta = Mat::from_columns(dm.module.dim, &dtheta_cols);
    let fixed_point = dtheta.mul(&eta) == theta;
    report.require(fixed_point, "herm-fixed-point", || "d̄θ ∘ η ≠ θ".into());
    let theta_rank = theta.rank();
    Ok(HermCheck {
        dim: m.dim,
        dual_dim: dm.module.dim,
        theta_rank,
        honest: theta_rank == m.dim && m.dim == dm.module.dim,
        fixed_point,
        report,
    })
}

/// `M ⊗_B N` with `⟨m ⊗ n, m' ⊗ n'⟩ = ⟨n, ⟨m, m'⟩ n'⟩`.
pub fn herm_compose(m: &HermBimodule, n: &HermBimodule) -> Result<(HermBimodule, ValidationReport), MoritaError> {
    let t = balanced_tensor(&m.module, &n.module)?;
    let nd = n.module.dim;
    let full_pair = |x: usize, y: usize| -> u64 {
        let (i, j) = (x / nd, x % nd);
        let (k, l) = (y / nd, y % nd);
        let b = m.pairing[i][k];
        n.pair(1 << j, n.module.left_action(b).apply(1 << l))
    };
    let bilinear = |u: u64, v: u64| -> u64 {
        let mut out = 0;
        for x in 0..t.full_dim {
            if u >> x & 1 == 1 {
                for y in 0..t.full_dim {
                    if v >> y & 1 == 1 {
                        out ^= full_pair(x, y);
                    }
                }
            }
        }
        out
    };
    let mut report = ValidationReport::new();
    for &rel in &t.relations {
        for y in 0..t.full_dim {
            report.require(bilinear(rel, 1 << y) == 0 && bilinear(1 << y, rel) == 0, "herm-compose-balanced", || {
                "pairing does not descend to the balanced tensor".into()
            });
        }
    }
    let pairing = t.kept.iter().map(|&x| t.kept.iter().map(|&y| full_pair(x, y)).collect()).collect();
    Ok((HermBimodule { module: t.module, pairing }, report))
}

/// Checks that `M ⊗_B B → M`, `m ⊗ b ↦ m b`, preserves the pairing.
pub fn verify_unit_isometry(m: &HermBimodule) -> Result<ValidationReport, MoritaError> {
    let unit = HermBimodule::unit(&m.module.right);
    let (comp, mut report) = herm_compose(m, &unit)?;
    let (iso_report, theta, _) = verify_right_unitor(&m.module)?;
    report.merge(iso_report);
    if let Some(theta) = theta {
        for s in 0..comp.module.dim {
            for t in 0..comp.module.dim {
                let ok = m.pair(theta.column(s), theta.column(t)) == comp.pairing[s][t];
                report.require(ok, "herm-unit-isometry", || format!("basis pair ({s}, {t})"));
            }
        }
    }
    Ok(report)
}

/// Quotient of `h` by its radical `{v : ⟨v, −⟩ = 0}`, with the hermitian
/// checks of the result.
pub fn nondegenerate(h: &HermBimodule) -> Result<(HermBimodule, HermCheck), MoritaError> {
    let m = &h.module;
    let radical: Vec<u64> = (0..1u64 << m.dim)
        .filter(|&v| (0..m.dim).all(|j| h.pair(v, 1 << j) == 0))
        .collect();
    let (_, _, kept, proj) = crate::morita::quotient(&radical, m.dim);
    let induce = |op: &Mat| Mat::from_columns(kept.len(), &kept.iter().map(|&t| proj.apply(op.apply(1 << t))).collect::<Vec<_>>());
    let module = Bimodule {
        left: m.left.clone(),
        right: m.right.clone(),
        dim: kept.len(),
        lact: m.lact.iter().map(induce).collect(),
        ract: m.ract.iter().map(induce).collect(),
    };
    let pairing = kept.iter().map(|&s| kept.iter().map(|&t| h.pairing[s][t]).collect()).collect();
    let q = HermBimodule { module, pairing };
    let check = analyze_hermitian(&q)?;
    Ok((q, check))
}

/// Two honest hermitian bimodules whose composite is degenerate.
#[derive(Clone, Debug)]
pub struct DegenerateWitness {
    pub first: HermBimodule,
    pub second: HermBimodule,
    pub composite: HermBimodule,
    pub composite_check: HermCheck,
    pub searched: usize,
}

/// Seeded search over honest hermitian bimodules of dimension `≤ max_dim`
/// for a composable pair with a degenerate composite.
pub fn find_degenerate_composite(seed: u64, max_dim: usize) -> Result<Option<DegenerateWitness>, MoritaError> {
    let algebras = crate::morita::small_star_algebras();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..algebras.len() {
        for b in 0..algebras.len() {
            for c in 0..algebras.len() {
                triples.push((a, b, c));
            }
        }
    }
    triples.shuffle(&mut rng);
    let honest = |x: &Arc<FinAlgebra>, y: &Arc<FinAlgebra>| -> Result<Vec<HermBimodule>, MoritaError> {
        let mut out = Vec::new();
        for m in crate::morita::enumerate_bimodules(x, y, max_dim) {
            if m.dim == 0 {
                continue;
            }
            for h in enumerate_hermitian(&m) {
                if analyze_hermitian(&h)?.honest {
                    out.push(h);
                }
            }
        }
        Ok(out)
    };
    let mut searched = 0;
    for (a, b, c) in triples {
        let mut firsts = honest(&algebras[a], &algebras[b])?;
        let mut seconds = honest(&algebras[b], &algebras[c])?;
        firsts.shuffle(&mut rng);
        seconds.shuffle(&mut rng);
        for m in &firsts {
            for n in &seconds {
                searched += 1;
                let (comp, rep) = herm_compose(m, n)?;
                if !rep.is_ok() {
                    continue;
                }
                let check = analyze_hermitian(&comp)?;
                if check.theta_rank < check.dim {
                    return Ok(Some(DegenerateWitness {
                        first: m.clone(),
                        second: n.clone(),
                        composite: comp,
                        composite_check: check,
                        searched,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morita::{enumerate_bimodules, small_star_algebras};

    fn one_dim(left: &Arc<FinAlgebra>, right: &Arc<FinAlgebra>, lact: Vec<Mat>, ract: Vec<Mat>) -> Bimodule {
        Bimodule { left: left.clone(), right: right.clone(), dim: 1, lact, ract }
    }

    #[test]
    fn known_degenerate_composite() {
        let f2 = FinAlgebra::f2();
        let e = FinAlgebra::dual_numbers();
        let id = Mat::identity(1);
        let zero = Mat::zero(1, 1);
        let m = HermBimodule { module: one_dim(&f2, &e, vec![id.clone()], vec![id.clone(), zero.clone()]), pairing: vec![vec![0b10]] };
        let n = HermBimodule { module: one_dim(&e, &f2, vec![id.clone(), zero], vec![id]), pairing: vec![vec![1]] };
        let (cm, cn) = (analyze_hermitian(&m).unwrap(), analyze_hermitian(&n).unwrap());
        assert!(cm.report.is_ok() && cm.honest, "{}", cm.report);
        assert!(cn.report.is_ok() && cn.honest, "{}", cn.report);
        let (comp, rep) = herm_compose(&m, &n).unwrap();
        assert!(rep.is_ok());
        assert_eq!(comp.pairing, vec![vec![0]]);
        let cc = analyze_hermitian(&comp).unwrap();
        assert!(cc.fixed_point && cc.theta_rank == 0);
        let (q, qc) = nondegenerate(&comp).unwrap();
        assert_eq!(q.module.dim, 0);
        assert!(qc.honest);
    }

    #[test]
    fn json_round_trip() {
        let h = HermBimodule::unit(&FinAlgebra::f4(true));
        assert_eq!(HermBimodule::from_json(&h.to_json()).unwrap(), h);
        let mut j = h.to_json();
        j.module.left = "nope".into();
        assert!(HermBimodule::from_json(&j).is_err());
    }

    #[test]
    fn radical_quotients_are_honest_for_dual_numbers() {
        let e = FinAlgebra::dual_numbers();
        for m in enumerate_bimodules(&FinAlgebra::f2(), &e, 2) {
            for h in enumerate_hermitian(&m) {
                let (q, c) = nondegenerate(&h).unwrap();
                assert!(c.report.is_ok(), "{}", c.report);
                assert_eq!(c.theta_rank, q.module.dim);
            }
        }
    }

    #[test]
    fn unit_is_honest_and_neutral() {
        for b in small_star_algebras() {
            let u = HermBimodule::unit(&b);
            let c = analyze_hermitian(&u).unwrap();
            assert!(c.report.is_ok() && c.honest, "{}: {}", b.name, c.report);
            assert!(verify_unit_isometry(&u).unwrap().is_ok());
        }
    }

    #[test]
    fn symmetry_is_the_fixed_point_equation() {
        // on pairings that satisfy the linearity axioms, the concrete
        // fixed-point check agrees with symmetry
        for a in small_star_algebras() {
            for b in small_star_algebras() {
                for m in enumerate_bimodules(&a, &b, 1) {
                    for h in enumerate_hermitian(&m) {
                        let c = analyze_hermitian(&h).unwrap();
                        assert!(c.fixed_point, "{} {}", a.name, b.name);
                        assert!(verify_unit_isometry(&h).unwrap().is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_search_finds_a_witness() {
        let w = find_degenerate_composite(8, 1).unwrap().expect("witness");
        assert!(analyze_hermitian(&w.first).unwrap().honest);
        assert!(analyze_hermitian(&w.second).unwrap().honest);
        assert!(w.composite_check.theta_rank < w.composite_check.dim);
    }
}
