//! File-based subcommands: building instances, checking serialized
//! structures, and the profunctor, Morita and relation operations.
//!
//! Every command returns an [`Outcome`]; the binary renders it and maps it to
//! an exit code.

use crate::report::{Builder, CheckEntry, SuiteReport};
use crate::CliError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;
use volut_core::closedmon::{build_lax_volutive, build_volutive_dualizing, ClosedSymMonoidal};
use volut_core::equiv::{
    adjunction_data_from_volutive, check_pairing, find_representation, pairing_from_volutive, representation_iso, verify_zorro,
    volutive_from_pairing, Pairing, DEFAULT_SEARCH_CAP,
};
use volut_core::fincat::{check_category, Category, FiniteCategory};
use volut_core::instances::catalog::bundled;
use volut_core::instances::fdvect::{FdVect, VectClosed};
use volut_core::instances::finmod::{build_finmod, FinModOptions, RingJson, StarRing};
use volut_core::instances::finset::{FinSetCat, FinSetClosed};
use volut_core::instances::quantale::{Quantale, QuantaleClosed};
use volut_core::volutive::{check_dagger, check_volutive_as, dagger_category, Kind, VolutiveJson, VolutiveStructure};
use volut_core::ValidationReport;
use volut_linrel::{compose as rel_compose, LinearRelation, RelationJson};
use volut_profmor::herm::{analyze_hermitian, nondegenerate, HermBimodule, HermJson};
use volut_profmor::local::{LocalHom, SelfDual};
use volut_profmor::morita::{balanced_tensor, check_bimodule, intertwiner_object, verify_morita_closedness, Bimodule, BimoduleJson, MoritaError};
use volut_profmor::prof::{check_profunctor, prof_compose, prof_internal_hom, verify_prof_zorro, Profunctor, ProfunctorJson, ProfError, DEFAULT_ENUM_CAP};

/// What a command produced.
#[derive(Debug)]
pub enum Outcome {
    /// A check report; the exit code follows its verdict.
    Report(SuiteReport),
    /// A constructed object, always exit 0.
    Data(Value),
}

impl Outcome {
    pub fn ok(&self) -> bool {
        match self {
            Outcome::Report(r) => r.passed(),
            Outcome::Data(_) => true,
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

fn malformed(e: impl std::fmt::Display) -> CliError {
    CliError::Malformed(e.to_string())
}

fn prof_err(e: ProfError) -> CliError {
    match e {
        ProfError::Cap { .. } => CliError::Cap(e.to_string()),
        e => CliError::Malformed(e.to_string()),
    }
}

fn morita_err(e: MoritaError) -> CliError {
    match e {
        MoritaError::Cap { .. } => CliError::Cap(e.to_string()),
        e => CliError::Malformed(e.to_string()),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn single(suite: &str, seed: u64, name: &str, r: &ValidationReport, extra: Option<Value>) -> SuiteReport {
    let mut b = Builder::new(suite, seed);
    let mut e = CheckEntry::from_report(name, r);
    if let Some(w) = extra {
        if r.is_ok() {
            e = e.witness(w);
        }
    }
    if r.violations.len() > 1 {
        let all: Vec<Value> = r.violations.iter().take(10).map(|v| json!({ "law": v.law, "detail": v.detail })).collect();
        e = e.witness(json!({ "law": r.violations[0].law, "detail": r.violations[0].detail, "violations": r.violations.len(), "first": all }));
    }
    b.push(e);
    b.finish()
}

// ---------------------------------------------------------------------------
// build

#[derive(Clone, Debug, Default)]
pub struct BuildArgs {
    pub family: String,
    pub q: Option<u8>,
    pub max_dim: Option<usize>,
    pub max_size: Option<usize>,
    /// Ring preset name or path to a ring JSON file.
    pub ring: Option<String>,
    /// Bundled instance, quantale preset or self-dual category name.
    pub name: Option<String>,
    pub target: Option<String>,
    pub dualizing: Option<usize>,
    pub kind: Option<Kind>,
    pub skeletal: bool,
    pub cap: Option<usize>,
}

pub const BUILD_FAMILIES: &[&str] = &["fdvect", "finset", "quantale", "finmod", "bundled", "prof-local"];

pub fn load_ring(spec: &str) -> Result<StarRing, CliError> {
    let path = Path::new(spec);
    if path.extension().is_some_and(|e| e == "json") || path.exists() {
        let j: RingJson = read_json(path)?;
        StarRing::from_json(&j).map_err(malformed)
    } else {
        StarRing::preset(spec).map_err(malformed)
    }
}

fn self_dual(name: &str) -> Result<SelfDual, CliError> {
    match name {
        "terminal" => Ok(SelfDual::terminal()),
        "arrow" => Ok(SelfDual::walking_arrow()),
        _ => match name.strip_prefix("chain").and_then(|n| n.parse().ok()) {
            Some(n) if (1..=4).contains(&n) => Ok(SelfDual::chain(n)),
            _ => Err(malformed(format!("unknown self-dual category {name}; expected terminal, arrow or chainN"))),
        },
    }
}

fn closed_build<C: ClosedSymMonoidal>(m: &C, a: &BuildArgs, default: Kind) -> Result<VolutiveStructure, CliError> {
    let v = match (a.dualizing, a.kind.unwrap_or(default)) {
        (Some(dd), _) => build_volutive_dualizing(m, dd),
        (None, Kind::Strict) => build_volutive_dualizing(m, m.unit()),
        (None, Kind::Lax) => build_lax_volutive(m),
    };
    v.map_err(|e| CliError::Malformed(e.to_string()))
}

/// Builds an instance and returns its serialized volutive structure.
pub fn cmd_build(a: &BuildArgs) -> Result<VolutiveJson, CliError> {
    let v = match a.family.as_str() {
        "fdvect" => {
            let c = FdVect::new(a.q.unwrap_or(2), a.max_dim.unwrap_or(2)).map_err(malformed)?;
            closed_build(&VectClosed::new(Arc::new(c)), a, Kind::Strict)?
        }
        "finset" => {
            let c = FinSetCat::new(a.max_size.unwrap_or(3)).map_err(malformed)?;
            closed_build(&FinSetClosed::new(Arc::new(c)), a, Kind::Lax)?
        }
        "quantale" => {
            let q = Quantale::preset(a.name.as_deref().unwrap_or("lukasiewicz3")).map_err(malformed)?;
            closed_build(&QuantaleClosed::new(q), a, Kind::Lax)?
        }
        "finmod" => {
            let r = load_ring(a.ring.as_deref().unwrap_or("f2xy"))?;
            let opts = FinModOptions { cap: a.cap.unwrap_or(8), skeletal: a.skeletal };
            let inst = build_finmod(&r, opts).map_err(malformed)?;
            inst.volutive.with_kind(a.kind.unwrap_or(Kind::Lax))
        }
        "bundled" => {
            let b = bundled(a.name.as_deref().unwrap_or("terminal")).map_err(malformed)?;
            let k = a.kind.unwrap_or(b.declared);
            b.volutive.with_kind(k)
        }
        "prof-local" => {
            let s = self_dual(a.name.as_deref().unwrap_or("terminal"))?;
            let t = self_dual(a.target.as_deref().unwrap_or("terminal"))?;
            LocalHom::build(s, t, a.max_size.unwrap_or(2)).map_err(prof_err)?.volutive
        }
        f => return Err(malformed(format!("unknown family {f}; expected one of {}", BUILD_FAMILIES.join(", ")))),
    };
    v.to_json().map_err(malformed)
}

// ---------------------------------------------------------------------------
// check

pub const STRUCTURES: &[&str] = &["volutive", "category", "zorro", "pairing", "dagger"];

#[derive(Clone, Debug)]
pub struct CheckArgs {
    pub structure: String,
    pub kind: Option<Kind>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub cap: Option<usize>,
}

pub fn load_volutive(path: &Path) -> Result<VolutiveStructure, CliError> {
    let j: VolutiveJson = read_json(path)?;
    VolutiveStructure::from_json(&j).map_err(malformed)
}

/// Runs one named checker on a serialized volutive structure.
pub fn cmd_check(path: &Path, a: &CheckArgs) -> Result<SuiteReport, CliError> {
    let v = load_volutive(path)?;
    let suite = format!("check {}", a.structure);
    let report = match a.structure.as_str() {
        "volutive" => {
            let kind = a.kind.unwrap_or(v.kind);
            let name = match kind {
                Kind::Strict => "volutive (strict)",
                Kind::Lax => "volutive (lax)",
            };
            single(&suite, a.seed, name, &check_volutive_as(&v, kind), None)
        }
        "category" => single(&suite, a.seed, "category", &check_category(&*v.base), None),
        "zorro" => single(&suite, a.seed, "zorro", &verify_zorro(&adjunction_data_from_volutive(&v)), None),
        "pairing" => pairing_report(&v, &suite, a)?,
        "dagger" => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let dc = dagger_category(&v);
            let r = check_dagger(&dc, a.cap.unwrap_or(50_000_000), a.samples.unwrap_or(200_000), &mut rng);
            let info = json!({ "points": dc.object_count(), "morphisms": dc.morphism_count() });
            single(&suite, a.seed, "dagger", &r, Some(info))
        }
        s => return Err(malformed(format!("unknown structure {s}; expected one of {}", STRUCTURES.join(", ")))),
    };
    Ok(report)
}

fn pairing_report(v: &VolutiveStructure, suite: &str, a: &CheckArgs) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new(suite, a.seed);
    let p = pairing_from_volutive(v);
    b.push(CheckEntry::from_report("pairing", &check_pairing(&p)));
    let e = match volutive_from_pairing(&p) {
        Ok(w) if w.d.obj == v.d.obj && w.d.mor == v.d.mor && w.eta == v.eta => CheckEntry::pass("round-trip"),
        Ok(_) => CheckEntry::fail("round-trip").witness(json!("recovered structure differs")),
        Err(r) => CheckEntry::from_report("round-trip", &r),
    };
    b.push(e);
    let bare = Pairing { representation: None, ..p.clone() };
    let e = match find_representation(&bare, a.cap.unwrap_or(DEFAULT_SEARCH_CAP)) {
        Ok(found) => match representation_iso(&p, p.representation.as_ref().expect("represented"), &found.representation) {
            Ok(_) => CheckEntry::pass("find-representation"),
            Err(w) => CheckEntry::fail("find-representation").witness(json!(w)),
        },
        Err(volut_core::equiv::RepresentationError::Cap { cap }) => return Err(CliError::Cap(format!("representation search exceeds {cap}"))),
        Err(e) => CheckEntry::fail("find-representation").witness(json!(e.to_string())),
    };
    b.push(e);
    Ok(b.finish())
}

// ---------------------------------------------------------------------------
// prof

pub fn load_profunctor(path: &Path) -> Result<Profunctor, CliError> {
    let j: ProfunctorJson = read_json(path)?;
    Profunctor::from_json(&j).map_err(prof_err)
}

fn checked_profunctor(path: &Path) -> Result<Result<Profunctor, SuiteReport>, CliError> {
    let p = load_profunctor(path)?;
    let r = check_profunctor(&p);
    if r.is_ok() {
        Ok(Ok(p))
    } else {
        Ok(Err(single("prof input", 0, &format!("profunctor {}", path.display()), &r, None)))
    }
}

/// `G ∘ F` for `F: A ↛ B` in `first` and `G: B ↛ C` in `second`.
pub fn cmd_prof_compose(first: &Path, second: &Path) -> Result<Outcome, CliError> {
    let f = match checked_profunctor(first)? {
        Ok(p) => p,
        Err(r) => return Ok(Outcome::Report(r)),
    };
    let g = match checked_profunctor(second)? {
        Ok(p) => p,
        Err(r) => return Ok(Outcome::Report(r)),
    };
    let c = prof_compose(&g, &f).map_err(prof_err)?;
    Ok(Outcome::Data(to_value(&c.profunctor.to_json())))
}

/// The internal hom `Y^X` with its natural families.
pub fn cmd_prof_ihom(x: &Path, y: &Path, cap: Option<usize>) -> Result<Outcome, CliError> {
    let x = match checked_profunctor(x)? {
        Ok(p) => p,
        Err(r) => return Ok(Outcome::Report(r)),
    };
    let y = match checked_profunctor(y)? {
        Ok(p) => p,
        Err(r) => return Ok(Outcome::Report(r)),
    };
    let ih = prof_internal_hom(&x, &y, cap.unwrap_or(DEFAULT_ENUM_CAP)).map_err(prof_err)?;
    Ok(Outcome::Data(json!({ "profunctor": ih.profunctor.to_json(), "families": ih.families })))
}

/// Zorro identities for the dual of a category read from a file or named.
pub fn cmd_prof_zorro(category: &str, seed: u64) -> Result<SuiteReport, CliError> {
    let c = match category {
        "terminal" => FiniteCategory::terminal(),
        "arrow" => FiniteCategory::walking_arrow(),
        name => match name.strip_prefix("chain").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if (1..=6).contains(&n) => FiniteCategory::chain(n),
            _ => FiniteCategory::from_json(&read_json(Path::new(name))?).map_err(malformed)?,
        },
    };
    let z = verify_prof_zorro(&Arc::new(c)).map_err(prof_err)?;
    Ok(single("prof zorro", seed, "zorro", &z.report, None))
}

// ---------------------------------------------------------------------------
// morita

pub fn load_bimodule(path: &Path) -> Result<Bimodule, CliError> {
    let j: BimoduleJson = read_json(path)?;
    Bimodule::from_json(&j).map_err(morita_err)
}

fn checked_bimodules(paths: &[&Path]) -> Result<Result<Vec<Bimodule>, SuiteReport>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        let m = load_bimodule(p)?;
        let r = check_bimodule(&m);
        if !r.is_ok() {
            return Ok(Err(single("morita input", 0, &format!("bimodule {}", p.display()), &r, None)));
        }
        out.push(m);
    }
    Ok(Ok(out))
}

pub fn cmd_morita_tensor(m: &Path, n: &Path) -> Result<Outcome, CliError> {
    let ms = match checked_bimodules(&[m, n])? {
        Ok(v) => v,
        Err(r) => return Ok(Outcome::Report(r)),
    };
    let t = balanced_tensor(&ms[0], &ms[1]).map_err(morita_err)?;
    Ok(Outcome::Data(json!({ "module": t.module.to_json(), "full_dim": t.full_dim, "kept": t.kept })))
}

/// The intertwiner object `M^N`.
pub fn cmd_morita_ihom(m: &Path, n: &Path) -> Result<Outcome, CliError> {
    let ms = match checked_bimodules(&[m, n])? {
        Ok(v) => v,
        Err(r) => return Ok(Outcome::Report(r)),
    };
    let i = intertwiner_object(&ms[0], &ms[1]).map_err(morita_err)?;
    let basis: Vec<Vec<u64>> = i.space.basis.iter().map(|b| b.columns()).collect();
    Ok(Outcome::Data(json!({ "module": i.module.to_json(), "basis": basis })))
}

/// `Hom(P ⊗ N, M) ≅ Hom(P, M^N)` for the three given bimodules.
pub fn cmd_morita_closedness(p: &Path, n: &Path, m: &Path, seed: u64) -> Result<SuiteReport, CliError> {
    let ms = match checked_bimodules(&[p, n, m])? {
        Ok(v) => v,
        Err(r) => return Ok(r),
    };
    let c = verify_morita_closedness(&ms[0], &ms[1], &ms[2], &[ms[0].clone()]).map_err(morita_err)?;
    let info = json!({ "lhs_dim": c.lhs_dim, "rhs_dim": c.rhs_dim, "naturality_cases": c.naturality_cases });
    Ok(single("morita closedness", seed, "closedness", &c.report, Some(info)))
}

/// Hermitian checks on a bimodule with pairing, and its radical quotient.
pub fn cmd_morita_herm(path: &Path, seed: u64) -> Result<SuiteReport, CliError> {
    let j: HermJson = read_json(path)?;
    let h = HermBimodule::from_json(&j).map_err(morita_err)?;
    let mut b = Builder::new("morita herm", seed);
    let r = check_bimodule(&h.module);
    if !r.is_ok() {
        b.push(CheckEntry::from_report("bimodule", &r));
        return Ok(b.finish());
    }
    let c = analyze_hermitian(&h).map_err(morita_err)?;
    b.push(CheckEntry::from_report("hermitian", &c.report).detail(format!("dim {}, θ rank {}", c.dim, c.theta_rank)));
    b.push(CheckEntry::from_bool("honest", c.honest).detail(format!("θ: {} → {} has rank {}", c.dim, c.dual_dim, c.theta_rank)));
    if c.report.is_ok() {
        let (q, qc) = nondegenerate(&h).map_err(morita_err)?;
        b.push(
            CheckEntry::from_bool("radical-quotient-honest", qc.report.is_ok() && qc.honest)
                .detail(format!("quotient dim {}", q.module.dim))
                .witness(to_value(&q.to_json())),
        );
    }
    Ok(b.finish())
}

// ---------------------------------------------------------------------------
// rel

pub fn load_relation(path: &Path) -> Result<LinearRelation, CliError> {
    let j: RelationJson = read_json(path)?;
    LinearRelation::from_json(&j).map_err(malformed)
}

pub fn cmd_rel_adjoint(path: &Path) -> Result<Outcome, CliError> {
    let v = load_relation(path)?;
    Ok(Outcome::Data(to_value(&v.adjoint().to_json())))
}

/// `W ∘ V` for `V` in `first` and `W` in `second`.
pub fn cmd_rel_compose(first: &Path, second: &Path) -> Result<Outcome, CliError> {
    let v = load_relation(first)?;
    let w = load_relation(second)?;
    let c = rel_compose(&w, &v).map_err(malformed)?;
    Ok(Outcome::Data(to_value(&c.to_json())))
}
