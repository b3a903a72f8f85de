//! Named bundled instances with their declared kinds.

use super::fdvect::{FdVect, VectClosed};
use super::finmod::{build_finmod, FinModInstance, FinModOptions, StarRing};
use super::finset::{FinSetCat, FinSetClosed};
use super::quantale::{Quantale, QuantaleClosed};
use crate::closedmon::{assemble_volutive, build_lax_volutive, build_volutive_dualizing, ClosedError, ClosedSymMonoidal};
use crate::fincat::{FincatError, FiniteCategory, Functor, Obj, Variance};
use crate::volutive::{Kind, VolutiveStructure};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown instance {0}")]
    Unknown(String),
    #[error(transparent)]
    Closed(#[from] ClosedError),
    #[error(transparent)]
    Fincat(#[from] FincatError),
}

/// Closed symmetric monoidal instances, dispatched by kind.
pub enum ClosedInstance {
    FinSet(FinSetClosed),
    Vect(VectClosed),
    Quantale(QuantaleClosed),
}

impl ClosedInstance {
    pub fn build_lax(&self) -> Result<VolutiveStructure, ClosedError> {
        match self {
            ClosedInstance::FinSet(m) => build_lax_volutive(m),
            ClosedInstance::Vect(m) => build_lax_volutive(m),
            ClosedInstance::Quantale(m) => build_lax_volutive(m),
        }
    }

    /// The lax structure at the unit, without the coherence check.
    pub fn assemble_lax(&self) -> Result<VolutiveStructure, ClosedError> {
        match self {
            ClosedInstance::FinSet(m) => assemble_volutive(m, m.unit(), Kind::Lax),
            ClosedInstance::Vect(m) => assemble_volutive(m, m.unit(), Kind::Lax),
            ClosedInstance::Quantale(m) => assemble_volutive(m, m.unit(), Kind::Lax),
        }
    }

    pub fn build_dualizing(&self, dd: Obj) -> Result<VolutiveStructure, ClosedError> {
        match self {
            ClosedInstance::FinSet(m) => build_volutive_dualizing(m, dd),
            ClosedInstance::Vect(m) => build_volutive_dualizing(m, dd),
            ClosedInstance::Quantale(m) => build_volutive_dualizing(m, dd),
        }
    }

    fn assemble(&self, dd: Obj, kind: Kind) -> Result<VolutiveStructure, ClosedError> {
        match self {
            ClosedInstance::FinSet(m) => assemble_volutive(m, dd, kind),
            ClosedInstance::Vect(m) => assemble_volutive(m, dd, kind),
            ClosedInstance::Quantale(m) => assemble_volutive(m, dd, kind),
        }
    }
}

pub struct Bundled {
    pub name: &'static str,
    pub declared: Kind,
    /// Unchecked structure; suites verify it against `declared`.
    pub volutive: VolutiveStructure,
    pub closed: Option<ClosedInstance>,
    /// Expected strictness of the structure built from the monoidal unit.
    pub unit_dualizing: bool,
    /// Dualizing object used for `volutive`, when it is not the unit.
    pub dualizing: Option<Obj>,
    pub finmod: Option<Arc<FinModInstance>>,
}

pub const BUNDLED: &[&str] = &[
    "terminal",
    "arrow_swap",
    "finset_4",
    "f2vect_2",
    "f2vect_3",
    "f3vect_2",
    "f3vect_3",
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

/// Walking arrow `0 → 1` with `d` swapping the objects.
pub fn arrow_swap() -> VolutiveStructure {
    let c = FiniteCategory::walking_arrow();
    let i0 = c.morphism_index("0<0").expect("identity");
    let i1 = c.morphism_index("1<1").expect("identity");
    let f = c.morphism_index("0<1").expect("arrow");
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

pub fn terminal() -> VolutiveStructure {
    VolutiveStructure::new(
        Arc::new(FiniteCategory::terminal()),
        Functor { variance: Variance::Contravariant, obj: vec![0], mor: vec![0] },
        vec![0],
        Kind::Strict,
    )
}

fn plain(name: &'static str, v: VolutiveStructure) -> Bundled {
    Bundled { name, declared: v.kind, volutive: v, closed: None, unit_dualizing: false, dualizing: None, finmod: None }
}

fn closed(name: &'static str, m: ClosedInstance, unit_dualizing: bool, dualizing: Option<Obj>) -> Result<Bundled, CatalogError> {
    let declared = if unit_dualizing || dualizing.is_some() { Kind::Strict } else { Kind::Lax };
    let dd = match (&m, dualizing) {
        (_, Some(x)) => x,
        (ClosedInstance::FinSet(_), None) | (ClosedInstance::Vect(_), None) => 1,
        (ClosedInstance::Quantale(q), None) => q.q.unit,
    };
    let volutive = m.assemble(dd, declared)?;
    Ok(Bundled { name, declared, volutive, closed: Some(m), unit_dualizing, dualizing, finmod: None })
}

fn finmod(name: &'static str, r: StarRing, skeletal: bool, declared: Kind) -> Result<Bundled, CatalogError> {
    let inst = build_finmod(&r, FinModOptions { cap: 8, skeletal })?;
    let volutive = inst.volutive.clone().with_kind(declared);
    Ok(Bundled {
        name,
        declared,
        volutive,
        closed: None,
        unit_dualizing: false,
        dualizing: None,
        finmod: Some(Arc::new(inst)),
    })
}

pub fn bundled(name: &str) -> Result<Bundled, CatalogError> {
    let vect = |q: u8, n: usize| -> Result<ClosedInstance, CatalogError> {
        Ok(ClosedInstance::Vect(VectClosed::new(Arc::new(FdVect::new(q, n)?))))
    };
    let quant = |q: Quantale| ClosedInstance::Quantale(QuantaleClosed::new(q));
    match name {
        "terminal" => Ok(plain("terminal", terminal())),
        "arrow_swap" => Ok(plain("arrow_swap", arrow_swap())),
        "finset_4" => closed("finset_4", ClosedInstance::FinSet(FinSetClosed::new(Arc::new(FinSetCat::new(4)?))), false, None),
        "f2vect_2" => closed("f2vect_2", vect(2, 2)?, true, None),
        "f2vect_3" => closed("f2vect_3", vect(2, 3)?, true, None),
        "f3vect_2" => closed("f3vect_2", vect(3, 2)?, true, None),
        "f3vect_3" => closed("f3vect_3", vect(3, 3)?, true, None),
        "lukasiewicz3" => closed("lukasiewicz3", quant(Quantale::lukasiewicz3()), false, None),
        "lukasiewicz3_dualizing" => closed("lukasiewicz3_dualizing", quant(Quantale::lukasiewicz3()), false, Some(0)),
        "heyting_chain_3" => closed("heyting_chain_3", quant(Quantale::heyting_chain(3)), false, None),
        "heyting_chain_4" => closed("heyting_chain_4", quant(Quantale::heyting_chain(4)), false, None),
        "bool2" => closed("bool2", quant(Quantale::bool2()), false, None),
        "unit_below_top" => closed("unit_below_top", quant(Quantale::unit_below_top()), true, None),
        "finmod_z4" => finmod("finmod_z4", StarRing::z4(), false, Kind::Strict),
        "finmod_f2xy" => finmod("finmod_f2xy", StarRing::f2xy(), false, Kind::Strict),
        "finmod_t2f2" => finmod("finmod_t2f2", StarRing::t2f2(), true, Kind::Lax),
        _ => Err(CatalogError::Unknown(name.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volutive::check_volutive;

    #[test]
    fn small_bundled_instances_pass_their_kind() {
        for name in ["terminal", "arrow_swap", "f2vect_2", "lukasiewicz3", "lukasiewicz3_dualizing", "unit_below_top", "finmod_z4"] {
            let b = bundled(name).unwrap();
            let r = check_volutive(&b.volutive);
            assert!(r.is_ok(), "{name}: {r}");
        }
        assert!(bundled("nope").is_err());
    }
}
