//! Universes of machine characteristics and what an observer sees of them.
//!
//! A [`Universe`] holds intelligent behavior (IB) and the machine's
//! characteristics (MC); their intersection is the set of intelligent machine
//! characteristics (IMC). An [`Observer`] perceives a subset of MC (OMC), and
//! the observed intelligent characteristics (OIMC) follow as `IMC ∩ OMC`.
//! The classification codomain (CMC) lives in [`crate::test_model`] and is
//! kept detached from these sets.

mod observer;
mod world;

pub use observer::{observe, ObservedView, Observer};
pub use world::{check_world_function, PropertyReport, WorldModel};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::test_model::LabelSpace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpistemicError {
    #[error("monistic universe requires MC ⊆ IB, but {0:?} lie outside IB")]
    MonisticViolation(Vec<CharacteristicId>),
    #[error("characteristic id `{0}` appears more than once")]
    DuplicateId(CharacteristicId),
    #[error("observer mask contains ids outside MC: {0:?}")]
    MaskOutsideMc(Vec<CharacteristicId>),
    #[error("inclusion probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("intelligence function is undefined for {0:?}")]
    PartialFunction(Vec<CharacteristicId>),
    #[error("observed world characteristics {0:?} are not part of the world")]
    ObservedOutsideWorld(Vec<CharacteristicId>),
    #[error("intelligence function is defined outside the observed world: {0:?}")]
    MappingOutsideDomain(Vec<CharacteristicId>),
    #[error("intelligence function maps into ids outside IB: {0:?}")]
    ImageOutsideIb(Vec<CharacteristicId>),
}

/// Opaque identifier of a characteristic. Ordered by its string value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacteristicId(String);

impl CharacteristicId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CharacteristicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CharacteristicId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

impl From<String> for CharacteristicId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

pub type IdSet = BTreeSet<CharacteristicId>;

/// Convenience for tests and examples: `ids(["a", "b"])`.
pub fn ids<I, S>(items: I) -> IdSet
where
    I: IntoIterator<Item = S>,
    S: Into<CharacteristicId>,
{
    items.into_iter().map(Into::into).collect()
}

/// Intelligent behavior, machine characteristics and their derived intersection.
///
/// Immutable after construction; learning operations return new universes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    ib: IdSet,
    mc: IdSet,
    imc: IdSet,
    monistic: bool,
}

impl Universe {
    /// Builds a universe from id lists, rejecting repeated ids within either list.
    ///
    /// When `monistic` is set every machine characteristic must also be
    /// intelligent behavior (MC ⊆ IB).
    pub fn build<I, J>(ib: I, mc: J, monistic: bool) -> Result<Self, EpistemicError>
    where
        I: IntoIterator,
        I::Item: Into<CharacteristicId>,
        J: IntoIterator,
        J::Item: Into<CharacteristicId>,
    {
        let ib = collect_unique(ib)?;
        let mc = collect_unique(mc)?;
        Self::from_sets(ib, mc, monistic)
    }

    pub fn from_sets(ib: IdSet, mc: IdSet, monistic: bool) -> Result<Self, EpistemicError> {
        if monistic {
            let outside: Vec<_> = mc.difference(&ib).cloned().collect();
            if !outside.is_empty() {
                return Err(EpistemicError::MonisticViolation(outside));
            }
        }
        let imc = ib.intersection(&mc).cloned().collect();
        Ok(Self {
            ib,
            mc,
            imc,
            monistic,
        })
    }

    pub fn ib(&self) -> &IdSet {
        &self.ib
    }

    pub fn mc(&self) -> &IdSet {
        &self.mc
    }

    /// `IB ∩ MC`.
    pub fn imc(&self) -> &IdSet {
        &self.imc
    }

    pub fn is_monistic(&self) -> bool {
        self.monistic
    }

    /// Replaces MC, keeping IB and the monistic flag.
    pub fn with_mc(&self, mc: IdSet) -> Result<Self, EpistemicError> {
        Self::from_sets(self.ib.clone(), mc, self.monistic)
    }

    /// True when no characteristic id coincides with a label name of `space`.
    pub fn is_detached_from(&self, space: &LabelSpace) -> bool {
        space.labels().iter().all(|label| {
            let id = CharacteristicId::new(label.name.as_str());
            !self.ib.contains(&id) && !self.mc.contains(&id)
        })
    }
}

fn collect_unique<I>(items: I) -> Result<IdSet, EpistemicError>
where
    I: IntoIterator,
    I::Item: Into<CharacteristicId>,
{
    let mut set = IdSet::new();
    for id in items {
        let id = id.into();
        if set.contains(&id) {
            return Err(EpistemicError::DuplicateId(id));
        }
        set.insert(id);
    }
    Ok(set)
}

/// Truth, belief and knowledge, the classical reading of IB, MC and IMC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatonicSets {
    pub truth: IdSet,
    pub belief: IdSet,
    pub knowledge: IdSet,
}

/// Relabels a universe: IB is truth, MC is belief, IMC is knowledge.
pub fn map_to_platonic(universe: &Universe) -> PlatonicSets {
    PlatonicSets {
        truth: universe.ib.clone(),
        belief: universe.mc.clone(),
        knowledge: universe.imc.clone(),
    }
}

/// JSON document for a universe and, optionally, one observed OMC.
///
/// All arrays are emitted sorted so that identical universes serialize to
/// identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniverseDocument {
    pub ib: Vec<CharacteristicId>,
    pub mc: Vec<CharacteristicId>,
    #[serde(default)]
    pub monistic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omc: Option<Vec<CharacteristicId>>,
}

impl UniverseDocument {
    pub fn new(universe: &Universe, view: Option<&ObservedView>) -> Self {
        Self {
            ib: universe.ib.iter().cloned().collect(),
            mc: universe.mc.iter().cloned().collect(),
            monistic: universe.monistic,
            omc: view.map(|v| v.omc().iter().cloned().collect()),
        }
    }

    pub fn universe(&self) -> Result<Universe, EpistemicError> {
        Universe::build(
            self.ib.iter().cloned(),
            self.mc.iter().cloned(),
            self.monistic,
        )
    }

    /// The observed view recorded in the document, if any.
    pub fn view(&self) -> Result<Option<(Universe, ObservedView)>, EpistemicError> {
        let universe = self.universe()?;
        match &self.omc {
            None => Ok(None),
            Some(omc) => {
                let mask = collect_unique(omc.iter().cloned())?;
                let view = observe(&universe, &Observer::Mask(mask))?;
                Ok(Some((universe, view)))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("universe document is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imc_is_intersection() {
        let u = Universe::build(["a", "b", "c"], ["b", "c", "d"], false).unwrap();
        assert_eq!(u.imc(), &ids(["b", "c"]));
    }

    #[test]
    fn empty_machine_has_no_imc() {
        let u = Universe::build(["a", "b"], Vec::<&str>::new(), false).unwrap();
        assert!(u.imc().is_empty());
    }

    #[test]
    fn monistic_violation() {
        let err = Universe::build(["a"], ["a", "z"], true).unwrap_err();
        assert_eq!(err, EpistemicError::MonisticViolation(vec!["z".into()]));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = Universe::build(["a", "a"], ["a"], false).unwrap_err();
        assert_eq!(err, EpistemicError::DuplicateId("a".into()));
        let err = Universe::build(["a"], ["b", "b"], false).unwrap_err();
        assert_eq!(err, EpistemicError::DuplicateId("b".into()));
    }

    #[test]
    fn platonic_relabeling() {
        let u = Universe::build(["a", "b", "c"], ["b", "c", "d"], false).unwrap();
        let p = map_to_platonic(&u);
        assert_eq!(p.truth, ids(["a", "b", "c"]));
        assert_eq!(p.belief, ids(["b", "c", "d"]));
        assert_eq!(p.knowledge, ids(["b", "c"]));

        let empty = Universe::build(Vec::<&str>::new(), Vec::<&str>::new(), false).unwrap();
        let p = map_to_platonic(&empty);
        assert!(p.truth.is_empty() && p.belief.is_empty() && p.knowledge.is_empty());

        let mono = Universe::build(["a", "b"], ["a"], true).unwrap();
        let p = map_to_platonic(&mono);
        assert_eq!(p.knowledge, ids(["a"]));
        assert_eq!(p.knowledge, p.belief);
    }

    #[test]
    fn platonic_round_trip_matches_imc() {
        let u = Universe::build(["a", "b", "c", "e"], ["b", "c", "d", "e"], false).unwrap();
        let p = map_to_platonic(&u);
        let k: IdSet = p.truth.intersection(&p.belief).cloned().collect();
        assert_eq!(&k, u.imc());
    }

    #[test]
    fn detachment_from_labels() {
        let space = LabelSpace::binary();
        let u = Universe::build(["a"], ["a", "b"], false).unwrap();
        assert!(u.is_detached_from(&space));
        let clash = Universe::build(["intelligent"], ["b"], false).unwrap();
        assert!(!clash.is_detached_from(&space));
    }

    #[test]
    fn document_is_sorted_and_round_trips() {
        let u = Universe::build(["c", "a", "b"], ["d", "b"], false).unwrap();
        let view = observe(&u, &Observer::Mask(ids(["d"]))).unwrap();
        let doc = UniverseDocument::new(&u, Some(&view));
        let json = doc.to_json();
        assert_eq!(
            json,
            "{\n  \"ib\": [\n    \"a\",\n    \"b\",\n    \"c\"\n  ],\n  \"mc\": [\n    \"b\",\n    \"d\"\n  ],\n  \"monistic\": false,\n  \"omc\": [\n    \"d\"\n  ]\n}"
        );
        let back: UniverseDocument = serde_json::from_str(&json).unwrap();
        let (u2, v2) = back.view().unwrap().unwrap();
        assert_eq!(u2, u);
        assert_eq!(v2, view);
    }
}
