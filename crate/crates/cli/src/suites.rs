//! The named check batteries behind `volut suite`.
//!
//! Every suite draws its randomness from one `ChaCha8Rng` seeded with
//! `--seed`, so a report is reproducible up to its wall time.

use crate::report::{Builder, CheckEntry, SuiteReport};
use crate::CliError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::HashSet;
use std::sync::Arc;
use volut_core::closedmon::oplax_monoidality;
use volut_core::equiv::{
    adjunction_data_from_volutive, check_pairing, find_representation, pairing_from_volutive, representation_iso, verify_zorro, volutive_from_pairing, Pairing,
    RepresentationError, DEFAULT_SEARCH_CAP,
};
use volut_core::fincat::{random_concrete_category, Category, FiniteCategory};
use volut_core::instances::catalog::{bundled, Bundled, BUNDLED};
use volut_core::instances::finmod::{iota, simple_module, StarRing};
use volut_core::instances::quantale::{Quantale, QuantaleClosed};
use volut_core::volutive::{
    check_dagger, check_strict_extras, check_volutive_as, dagger_on, hermitian_points, HermPoint, mutation_sweep_local, mutations, volutive_holds, Kind, Mutation,
    MutationSummary, VolutiveStructure,
};
use volut_core::ValidationReport;
use volut_linrel::lemmas::run_lemma_suite;
use volut_profmor::herm::{analyze_hermitian, enumerate_hermitian, find_degenerate_composite, herm_compose};
use volut_profmor::local::{compose_hermitian, HermProf, LocalHom, SelfDual};
use volut_profmor::morita::{enumerate_bimodules, morita_sweep, small_algebras, small_star_algebras};
use volut_profmor::prof::{
    associator, check_transformation, coend_partition_by_closure, prof_compose, random_profunctor, verify_ihom_adjunction,
    verify_prof_zorro, yoneda_left, yoneda_right, Cat, Grid, ProfError, DEFAULT_ENUM_CAP,
};

pub const DEFAULT_SEED: u64 = 7;

/// Suite names in acceptance order.
pub const SUITES: &[&str] = &["coherence", "closed", "equivalence", "linrel", "prof", "local", "morita", "witnesses", "dagger"];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides the suite's default sample count.
    pub samples: Option<usize>,
    /// Overrides enumeration caps.
    pub cap: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, samples: None, cap: None }
    }
}

pub fn run_suite(name: &str, o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    match name {
        "coherence" => coherence(o),
        "closed" => closed(o),
        "equivalence" => equivalence(o),
        "linrel" => Ok(linrel(o)),
        "prof" => prof(o),
        "local" => local(o),
        "morita" => morita(o),
        "witnesses" => witnesses(o),
        "dagger" => dagger(o),
        _ => Err(CliError::Malformed(format!("unknown suite {name}; expected one of {}", SUITES.join(", ")))),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn load(name: &str) -> Result<Bundled, CliError> {
    bundled(name).map_err(|e| CliError::Malformed(e.to_string()))
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Strict => "strict",
        Kind::Lax => "lax",
    }
}

fn shape(v: &VolutiveStructure) -> String {
    format!("{} objects, {} morphisms", v.base.object_count(), v.base.morphism_count())
}

fn prof_err(e: ProfError) -> CliError {
    match e {
        ProfError::Cap { .. } => CliError::Cap(e.to_string()),
        e => CliError::Malformed(e.to_string()),
    }
}

/// Every η alternative up to `eta_alts` per object, one alternative per
/// d-entry on morphisms, one per d-entry on objects.
pub fn sweep_mutants(v: &VolutiveStructure, eta_alts: usize, rng: &mut ChaCha8Rng) -> Vec<Mutation> {
    let mut seen = HashSet::new();
    mutations(v, eta_alts, rng)
        .into_iter()
        .filter(|m| match m {
            Mutation::DMor { morphism, .. } => seen.insert(*morphism),
            _ => true,
        })
        .collect()
}

// ---------------------------------------------------------------------------

fn coherence(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("coherence", o.seed);
    let mut rng = rng(o.seed);
    let eta_alts = o.samples.unwrap_or(16);
    let mut total = MutationSummary::default();
    let mut per_instance = serde_json::Map::new();
    for &name in BUNDLED {
        let inst = load(name)?;
        let v = &inst.volutive;
        let r = check_volutive_as(v, inst.declared);
        b.push(CheckEntry::from_report(format!("{name}/{}", kind_name(inst.declared)), &r).detail(shape(v)));
        let ms = sweep_mutants(v, eta_alts, &mut rng);
        let s = mutation_sweep_local(v, &ms);
        per_instance.insert(
            name.into(),
            json!({ "mutants": s.total, "detected": s.detected, "valid_alternatives": s.valid_alternatives, "examples": s.witnesses.iter().take(3).collect::<Vec<_>>() }),
        );
        total.merge(s);
    }
    let rate = total.detection_rate();
    b.push(
        CheckEntry::from_bool("mutation-detection-rate", rate >= 0.95)
            .detail(format!("{} of {} mutants detected ({:.2}%), {} valid alternatives", total.detected, total.total, 100.0 * rate, total.valid_alternatives))
            .witness(serde_json::Value::Object(per_instance)),
    );
    Ok(b.finish())
}

fn closed(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("closed", o.seed);
    for &name in BUNDLED {
        let inst = load(name)?;
        let Some(m) = &inst.closed else { continue };
        match m.assemble_lax() {
            Err(e) => b.push(CheckEntry::fail(format!("{name}/lax")).witness(json!(e.to_string()))),
            Ok(v) => {
                let lax = check_volutive_as(&v, Kind::Lax);
                let extras = check_strict_extras(&v);
                let strict = lax.is_ok() && extras.is_ok();
                b.push(CheckEntry::from_report(format!("{name}/lax"), &lax).detail(shape(&v)));
                let mut e = CheckEntry::from_bool(format!("{name}/strict-iff-unit-dualizing"), strict == inst.unit_dualizing)
                    .detail(format!("strict: {strict}, unit dualizing: {}", inst.unit_dualizing));
                if let Some(x) = extras.violations.first() {
                    e = e.witness(json!({ "law": x.law, "detail": x.detail }));
                }
                b.push(e);
            }
        }
        if let Some(dd) = inst.dualizing {
            match m.build_dualizing(dd) {
                Ok(v) => b.push(CheckEntry::from_report(format!("{name}/dualizing-{dd}-strict"), &check_volutive_as(&v, Kind::Strict))),
                Err(e) => b.push(CheckEntry::fail(format!("{name}/dualizing-{dd}-strict")).witness(json!(e.to_string()))),
            }
        }
    }
    Ok(b.finish())
}

/// Instances used for the pairing round trips.
pub const EQUIVALENCE_INSTANCES: &[&str] = &[
    "terminal",
    "arrow_swap",
    "finset_4",
    "f2vect_2",
    "f2vect_3",
    "f3vect_2",
    "lukasiewicz3",
    "lukasiewicz3_dualizing",
    "heyting_chain_3",
    "heyting_chain_4",
    "bool2",
    "unit_below_top",
    "finmod_z4",
    "finmod_f2xy",
    "finmod_t2f2",
];

fn equivalence(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("equivalence", o.seed);
    let mut rng = rng(o.seed);
    let cap = o.cap.unwrap_or(DEFAULT_SEARCH_CAP);
    let eta_alts = o.samples.unwrap_or(16);
    let mut recovered = 0;
    for &name in EQUIVALENCE_INSTANCES {
        let inst = load(name)?;
        let v = &inst.volutive;
        let p = pairing_from_volutive(v);
        b.push(CheckEntry::from_report(format!("{name}/pairing"), &check_pairing(&p)));
        match volutive_from_pairing_checked(&p, v) {
            Ok(kind) => {
                recovered += 1;
                b.push(CheckEntry::pass(format!("{name}/round-trip")).detail(format!("recovered (d, η), {kind}")));
            }
            Err(w) => b.push(CheckEntry::fail(format!("{name}/round-trip")).witness(w)),
        }
        let bare = Pairing { representation: None, ..p.clone() };
        let e = match find_representation(&bare, cap) {
            Ok(found) => match representation_iso(&p, p.representation.as_ref().expect("pairing of a structure is represented"), &found.representation) {
                Ok(_) => CheckEntry::pass(format!("{name}/find-representation")).detail(format!("{} candidates", found.candidates_tried)),
                Err(w) => CheckEntry::fail(format!("{name}/find-representation")).witness(json!(w)),
            },
            Err(RepresentationError::Cap { cap }) => return Err(CliError::Cap(format!("representation search for {name} exceeds {cap}"))),
            Err(e) => CheckEntry::fail(format!("{name}/find-representation")).witness(json!(e.to_string())),
        };
        b.push(e);
        b.push(CheckEntry::from_report(format!("{name}/zorro"), &verify_zorro(&adjunction_data_from_volutive(v))));
        b.push(zorro_on_eta_mutants(name, v, eta_alts, &mut rng));
    }
    b.push(CheckEntry::from_bool("round-trips >= 10", recovered >= 10).detail(format!("{recovered} instances")));
    let constant = Pairing::constant(Arc::new(FiniteCategory::terminal()), 2);
    let e = match find_representation(&constant, cap) {
        Err(RepresentationError::NotRepresentable { object, candidates }) => {
            CheckEntry::pass("constant-2/not-representable").detail(format!("no representing object for F(-, {object}); {candidates} candidates"))
        }
        Err(e) => CheckEntry::fail("constant-2/not-representable").witness(json!(e.to_string())),
        Ok(_) => CheckEntry::fail("constant-2/not-representable").witness(json!("a representation was found")),
    };
    b.push(e);
    Ok(b.finish())
}

fn volutive_from_pairing_checked(p: &Pairing, v: &VolutiveStructure) -> Result<&'static str, serde_json::Value> {
    let w = volutive_from_pairing(p).map_err(|r| json!(r.violations.first().map(|v| format!("{}: {}", v.law, v.detail))))?;
    if w.d.obj != v.d.obj || w.d.mor != v.d.mor {
        let f = (0..v.d.mor.len()).find(|&f| w.d.mor[f] != v.d.mor[f]);
        return Err(json!({ "mismatch": "d", "morphism": f.map(|f| v.base.morphism_label(f)) }));
    }
    if let Some(a) = (0..v.eta.len()).find(|&a| w.eta[a] != v.eta[a]) {
        return Err(json!({ "mismatch": "eta", "object": v.base.object_label(a) }));
    }
    Ok(kind_name(w.kind))
}

/// Zorro must fail exactly on the η-mutants that break lax coherence.
fn zorro_on_eta_mutants(name: &str, v: &VolutiveStructure, eta_alts: usize, rng: &mut ChaCha8Rng) -> CheckEntry {
    let (mut total, mut rejected, mut valid) = (0, 0, 0);
    let mut bad = None;
    for m in mutations(v, eta_alts, rng) {
        if !matches!(m, Mutation::Eta { .. }) {
            continue;
        }
        let w = m.apply(v);
        total += 1;
        let ok = volutive_holds(&w, Kind::Lax);
        let zorro = verify_zorro(&adjunction_data_from_volutive(&w)).is_ok();
        if ok {
            valid += 1;
        } else {
            rejected += 1;
        }
        if ok != zorro && bad.is_none() {
            bad = Some(json!({ "mutation": format!("{m:?}"), "lax_holds": ok, "zorro_holds": zorro }));
        }
    }
    let mut e = CheckEntry::from_bool(format!("{name}/zorro-eta-mutants"), bad.is_none())
        .detail(format!("{total} η-mutants: zorro fails on all {rejected} incoherent ones; {valid} valid alternatives"));
    if let Some(w) = bad {
        e = e.witness(w);
    }
    e
}

fn linrel(o: &SuiteOptions) -> SuiteReport {
    let mut b = Builder::new("linrel", o.seed);
    let r = run_lemma_suite(o.seed, o.samples.unwrap_or(500), 4, false);
    for l in &r.laws {
        let mut e = CheckEntry::from_bool(&l.law, l.failures == 0).detail(format!("{} cases, {} failures", l.cases, l.failures));
        if let Some(w) = &l.first_failure {
            e = e.witness(json!(w));
        }
        b.push(e);
    }
    let e = match &r.strict_lax_witness {
        Some((v, w)) => CheckEntry::pass("strict-inclusion-witness").witness(json!({ "v": v, "w": w })),
        None => CheckEntry::fail("strict-inclusion-witness").detail(format!(
            "no composable pair with V† ∘ W† ≠ (W ∘ V)† among {} seeded cases and {} search trials",
            r.relations, r.witness_trials
        )),
    };
    b.push(e);
    b.finish()
}

// ---------------------------------------------------------------------------

fn random_cat(rng: &mut ChaCha8Rng) -> Cat {
    let n = rng.gen_range(1..=4);
    Arc::new(random_concrete_category(rng, n, 12, 2, 8))
}

fn tally(b: &mut Builder, name: &str, cases: usize, r: &ValidationReport, extra: String) {
    b.push(CheckEntry::from_report(name, r).detail(format!("{cases} cases{extra}")));
}

fn prof(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("prof", o.seed);
    let mut rng = rng(o.seed);
    let cases = o.samples.unwrap_or(50);
    let cap = o.cap.unwrap_or(DEFAULT_ENUM_CAP);
    let grid = |t: &Cat, s: &Cat| Grid::new(t.clone(), s.clone()).map_err(prof_err);

    let mut r = ValidationReport::with_limit(20);
    for i in 0..cases {
        let (c, d) = (random_cat(&mut rng), random_cat(&mut rng));
        let f = random_profunctor(&mut rng, &grid(&d, &c)?, 2);
        let (l, t) = yoneda_left(&f).map_err(prof_err)?;
        for v in check_transformation(&l.profunctor, &f, &t, true).violations {
            r.push(&format!("yoneda-left/{}", v.law), format!("case {i}: {}", v.detail));
        }
        let (rr, t) = yoneda_right(&f).map_err(prof_err)?;
        for v in check_transformation(&rr.profunctor, &f, &t, true).violations {
            r.push(&format!("yoneda-right/{}", v.law), format!("case {i}: {}", v.detail));
        }
    }
    tally(&mut b, "yoneda", cases, &r, String::new());

    let mut r = ValidationReport::with_limit(20);
    let mut oracle = ValidationReport::with_limit(20);
    for i in 0..cases {
        let cs: Vec<Cat> = (0..4).map(|_| random_cat(&mut rng)).collect();
        let f = random_profunctor(&mut rng, &grid(&cs[1], &cs[0])?, 2);
        let g = random_profunctor(&mut rng, &grid(&cs[2], &cs[1])?, 2);
        let h = random_profunctor(&mut rng, &grid(&cs[3], &cs[2])?, 2);
        let (left, right, t) = associator(&h, &g, &f).map_err(prof_err)?;
        for v in check_transformation(&left.profunctor, &right.profunctor, &t, true).violations {
            r.push(&format!("associator/{}", v.law), format!("case {i}: {}", v.detail));
        }
        let gf = prof_compose(&g, &f).map_err(prof_err)?;
        for e in 0..cs[2].object_count() {
            for c in 0..cs[0].object_count() {
                let n = coend_partition_by_closure(&g, &f, e, c).len();
                oracle.require(n == gf.profunctor.size(e, c), "coend-classes", || format!("case {i}: cell ({e}, {c})"));
            }
        }
    }
    tally(&mut b, "coend-associativity", cases, &r, String::new());
    tally(&mut b, "coend-union-find-vs-closure", cases, &oracle, String::new());

    let mut r = ValidationReport::with_limit(20);
    for i in 0..cases {
        let c = random_cat(&mut rng);
        for v in verify_prof_zorro(&c).map_err(prof_err)?.report.violations {
            r.push(&v.law, format!("case {i}: {}", v.detail));
        }
    }
    tally(&mut b, "zorro", cases, &r, String::new());

    let mut r = ValidationReport::with_limit(20);
    let (mut done, mut rejected, mut trivial, mut transformations) = (0, 0, 0, 0);
    while done < cases {
        if rejected + trivial > 50 * cases {
            return Err(CliError::Cap(format!("internal-hom adjunction: {rejected} samples exceeded the cap {cap}")));
        }
        let (a, bb, e) = (random_cat(&mut rng), random_cat(&mut rng), random_cat(&mut rng));
        let x = random_profunctor(&mut rng, &grid(&bb, &a)?, 2);
        let y = random_profunctor(&mut rng, &grid(&e, &a)?, 2);
        let z = random_profunctor(&mut rng, &grid(&e, &bb)?, 2);
        match verify_ihom_adjunction(&z, &x, &y, cap) {
            Ok(adj) if adj.left == 0 && adj.right == 0 => trivial += 1,
            Ok(adj) => {
                transformations += adj.left;
                for v in adj.report.violations {
                    r.push(&v.law, format!("case {done}: {}", v.detail));
                }
                done += 1;
            }
            Err(ProfError::Cap { .. }) => rejected += 1,
            Err(e) => return Err(prof_err(e)),
        }
    }
    tally(&mut b, "ihom-adjunction", cases, &r, format!(", {transformations} transformations enumerated; redrawn: {trivial} with both sides empty, {rejected} over the cap {cap}"));
    Ok(b.finish())
}

fn local(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("local", o.seed);
    let duals = [SelfDual::terminal(), SelfDual::walking_arrow()];
    let mut homs = Vec::new();
    for x in &duals {
        let mut row = Vec::new();
        for y in &duals {
            let h = LocalHom::build(x.clone(), y.clone(), 2).map_err(prof_err)?;
            let r = check_volutive_as(&h.volutive, Kind::Lax);
            let points = h.hermitian_points();
            b.push(CheckEntry::from_report(format!("hom({}, {})/lax", x.name(), y.name()), &r).detail(format!(
                "{}, {} lax hermitian fixed points",
                shape(&h.volutive),
                points.len()
            )));
            row.push((h, points));
        }
        homs.push(row);
    }
    for (i, a) in duals.iter().enumerate() {
        for (j, bd) in duals.iter().enumerate() {
            for (k, c) in duals.iter().enumerate() {
                let (hx, xs) = &homs[i][j];
                let (hy, ys) = &homs[j][k];
                let mut r = ValidationReport::with_limit(20);
                let mut n = 0;
                for p in xs {
                    for q in ys {
                        let x = HermProf { profunctor: hx.reps[p.object].clone(), theta: hx.concrete_theta(p) };
                        let y = HermProf { profunctor: hy.reps[q.object].clone(), theta: hy.concrete_theta(q) };
                        let comp = compose_hermitian(a, bd, c, &x, &y).map_err(prof_err)?;
                        for v in comp.report.violations {
                            r.push(&v.law, format!("points {} and {}: {}", p.object, q.object, v.detail));
                        }
                        n += 1;
                    }
                }
                let name = format!("compose {}→{}→{}", a.name(), bd.name(), c.name());
                b.push(CheckEntry::from_report(name, &r).detail(format!("{n} composites")));
            }
        }
    }
    let algs = small_star_algebras();
    let mut r = ValidationReport::with_limit(20);
    let mut n = 0;
    let f2 = &algs[0];
    for a in &algs {
        let firsts: Vec<_> = enumerate_bimodules(f2, a, 1).iter().flat_map(enumerate_hermitian).collect();
        for c in &algs {
            let seconds: Vec<_> = enumerate_bimodules(a, c, 1).iter().flat_map(enumerate_hermitian).collect();
            for h in &firsts {
                for k in &seconds {
                    let (comp, rep) = herm_compose(h, k).map_err(|e| CliError::Malformed(e.to_string()))?;
                    r.merge(rep);
                    let check = analyze_hermitian(&comp).map_err(|e| CliError::Malformed(e.to_string()))?;
                    r.require(check.fixed_point, "herm-fixed-point", || format!("{} ⊗ {}", a.name, c.name));
                    n += 1;
                }
            }
        }
    }
    b.push(CheckEntry::from_report("herm-compose bimodules", &r).detail(format!("{n} composites over algebras of dim ≤ 2")));
    Ok(b.finish())
}

fn morita(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("morita", o.seed);
    let s = morita_sweep(&small_algebras(), 2).map_err(|e| CliError::Cap(e.to_string()))?;
    b.push(CheckEntry::from_report("closedness+unit+associativity", &s.report).detail(format!(
        "{} algebra triples, {} bimodule classes, {} closedness cases ({} naturality), {} unitor and {} associator cases",
        s.algebra_triples, s.bimodule_classes, s.closedness_cases, s.naturality_cases, s.unitor_cases, s.associator_cases
    )));
    Ok(b.finish())
}

fn witnesses(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("witnesses", o.seed);

    let r = StarRing::f2xy();
    let e = match simple_module(&r) {
        Some(k) => {
            let (map, dd) = iota(&r, &k);
            let image: HashSet<_> = map.iter().collect();
            let bijective = map.len() == dd.size && image.len() == map.len();
            CheckEntry::from_bool("non-reflexive-module", !bijective).witness(json!({
                "ring": "F2[x,y]/(x,y)^2",
                "module": "simple module k",
                "size": k.size,
                "double_dual_size": dd.size,
                "eta": map,
            }))
        }
        None => CheckEntry::fail("non-reflexive-module").detail("the ring has no simple module of order 2"),
    };
    b.push(e);

    let q = QuantaleClosed::new(Quantale::unit_below_top());
    let cat = q.category();
    let data = oplax_monoidality(&q);
    let e = match data.phi.iter().find(|p| !p.invertible) {
        Some(p) => CheckEntry::pass("non-invertible-phi").witness(json!({
            "quantale": "0 < e < top",
            "a": cat.object_label(p.a),
            "b": cat.object_label(p.b),
            "phi": [cat.object_label(p.morphism.0), cat.object_label(p.morphism.1)],
        })),
        None => CheckEntry::fail("non-invertible-phi"),
    };
    b.push(e);

    let e = match find_degenerate_composite(o.seed, 2).map_err(|e| CliError::Cap(e.to_string()))? {
        Some(w) => CheckEntry::from_bool("degenerate-composite", w.composite_check.theta_rank < w.composite_check.dim).witness(json!({
            "first": w.first.to_json(),
            "second": w.second.to_json(),
            "composite": w.composite.to_json(),
            "theta_rank": w.composite_check.theta_rank,
            "searched": w.searched,
        })),
        None => CheckEntry::fail("degenerate-composite").detail("no degenerate composite among honest bimodules of dim ≤ 2"),
    };
    b.push(e);
    Ok(b.finish())
}

/// Largest dagger category materialized on every honest point.
pub const DAGGER_MORPHISM_CAP: usize = 5_000_000;
/// Composable pairs checked exhaustively; beyond this they are sampled.
pub const DAGGER_PAIR_CAP: usize = 50_000_000;

fn dagger(o: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let mut b = Builder::new("dagger", o.seed);
    let mut rng = rng(o.seed);
    let pair_cap = o.cap.unwrap_or(DAGGER_PAIR_CAP);
    let samples = o.samples.unwrap_or(200_000);
    for &name in BUNDLED {
        let inst = load(name)?;
        if inst.declared != Kind::Strict {
            continue;
        }
        let v = &inst.volutive;
        let c = &*v.base;
        let mut points: Vec<_> = hermitian_points(v).into_iter().filter(|p| p.honest).collect();
        let all = points.len();
        let size = |ps: &[HermPoint]| -> usize { ps.iter().flat_map(|p| ps.iter().map(move |q| (p, q))).map(|(p, q)| c.hom(p.object, q.object).len()).sum() };
        let restricted = size(&points) > DAGGER_MORPHISM_CAP;
        if restricted {
            let mut seen = HashSet::new();
            points.retain(|p| seen.insert(p.object));
        }
        let dc = dagger_on(v, points);
        let r = check_dagger(&dc, pair_cap, samples, &mut rng);
        let sampled = !r.skipped.is_empty();
        b.push(CheckEntry::from_report(format!("{name}/dagger"), &r).detail(format!(
            "{} of {all} honest points, {} morphisms",
            dc.object_count(),
            dc.morphism_count()
        )));
        let mut gaps = Vec::new();
        if restricted {
            gaps.push(format!("one honest point per object: all {all} points exceed {DAGGER_MORPHISM_CAP} morphisms"));
        }
        if sampled {
            gaps.push(r.skipped.join("; "));
        }
        b.push(if gaps.is_empty() { CheckEntry::pass(format!("{name}/exhaustive")) } else { CheckEntry::fail(format!("{name}/exhaustive")).detail(gaps.join("; ")) });
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suites_are_malformed() {
        assert!(matches!(run_suite("nope", &SuiteOptions::default()), Err(CliError::Malformed(_))));
    }

    #[test]
    fn sweep_keeps_one_mutant_per_d_entry() {
        let v = load("f2vect_2").unwrap().volutive;
        let ms = sweep_mutants(&v, 4, &mut rng(1));
        let d: Vec<_> = ms.iter().filter_map(|m| if let Mutation::DMor { morphism, .. } = m { Some(*morphism) } else { None }).collect();
        let unique: HashSet<_> = d.iter().collect();
        assert_eq!(d.len(), unique.len());
        assert!(ms.iter().any(|m| matches!(m, Mutation::Eta { .. })));
    }

    #[test]
    fn witness_suite_is_deterministic() {
        let o = SuiteOptions::default();
        let (a, b) = (run_suite("witnesses", &o).unwrap(), run_suite("witnesses", &o).unwrap());
        assert!(a.passed());
        assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn small_linrel_run_fails_only_on_the_witness() {
        let r = run_suite("linrel", &SuiteOptions { samples: Some(40), ..Default::default() }).unwrap();
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["strict-inclusion-witness"]);
    }
}
