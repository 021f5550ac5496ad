use std::collections::BTreeMap;

use super::{CharacteristicId, EpistemicError, IdSet};

/// World characteristics (WC), the observed part (OWC) and an intelligence
/// function mapping OWC into intelligent behavior.
///
/// Ids here are a separate space from a [`super::Universe`]'s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldModel {
    wc: IdSet,
    owc: IdSet,
    fi: BTreeMap<CharacteristicId, CharacteristicId>,
}

impl WorldModel {
    /// Fails when OWC is not contained in WC. Totality of `fi` is checked by
    /// [`check_world_function`].
    pub fn new(
        wc: IdSet,
        owc: IdSet,
        fi: BTreeMap<CharacteristicId, CharacteristicId>,
    ) -> Result<Self, EpistemicError> {
        let outside: Vec<_> = owc.difference(&wc).cloned().collect();
        if !outside.is_empty() {
            return Err(EpistemicError::ObservedOutsideWorld(outside));
        }
        Ok(Self { wc, owc, fi })
    }

    pub fn wc(&self) -> &IdSet {
        &self.wc
    }

    pub fn owc(&self) -> &IdSet {
        &self.owc
    }

    pub fn fi(&self) -> &BTreeMap<CharacteristicId, CharacteristicId> {
        &self.fi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyReport {
    pub total: bool,
    pub surjective_onto_ib: bool,
    pub injective: bool,
}

impl PropertyReport {
    /// An ideal intelligence function reaches every element of IB.
    pub fn is_ideal(&self) -> bool {
        self.total && self.surjective_onto_ib
    }
}

pub fn check_world_function(
    world: &WorldModel,
    ib: &IdSet,
) -> Result<PropertyReport, EpistemicError> {
    let missing: Vec<_> = world
        .owc
        .iter()
        .filter(|x| !world.fi.contains_key(*x))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(EpistemicError::PartialFunction(missing));
    }
    let extra: Vec<_> = world
        .fi
        .keys()
        .filter(|x| !world.owc.contains(*x))
        .cloned()
        .collect();
    if !extra.is_empty() {
        return Err(EpistemicError::MappingOutsideDomain(extra));
    }
    let stray: IdSet = world
        .fi
        .values()
        .filter(|y| !ib.contains(*y))
        .cloned()
        .collect();
    if !stray.is_empty() {
        return Err(EpistemicError::ImageOutsideIb(stray.into_iter().collect()));
    }

    let image: IdSet = world.fi.values().cloned().collect();
    Ok(PropertyReport {
        total: true,
        surjective_onto_ib: image.len() == ib.len(),
        injective: image.len() == world.fi.len(),
    })
}
