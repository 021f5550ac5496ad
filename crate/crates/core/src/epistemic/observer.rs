use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CharacteristicId, EpistemicError, IdSet, Universe};

/// How a test (or a person) perceives machine characteristics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observer {
    /// Each characteristic of MC is noticed independently with the given probability.
    Bernoulli {
        seed: u64,
        inclusion_probability: f64,
    },
    /// Exactly these characteristics are noticed; must be a subset of MC.
    Mask(IdSet),
}

impl Observer {
    pub fn bernoulli(seed: u64, inclusion_probability: f64) -> Result<Self, EpistemicError> {
        check_probability(inclusion_probability)?;
        Ok(Self::Bernoulli {
            seed,
            inclusion_probability,
        })
    }

    /// Observer that notices everything in `universe`'s MC.
    pub fn full(universe: &Universe) -> Self {
        Self::Mask(universe.mc().clone())
    }

    pub fn blind() -> Self {
        Self::Mask(IdSet::new())
    }

    /// Drops mask entries that are no longer part of `mc`. Bernoulli observers
    /// are returned unchanged.
    pub fn restricted_to(&self, mc: &IdSet) -> Self {
        match self {
            Self::Mask(mask) => Self::Mask(mask.intersection(mc).cloned().collect()),
            other => other.clone(),
        }
    }

    /// Whether this observer notices `id`, ignoring MC membership.
    ///
    /// A Bernoulli draw depends only on the seed and the id itself, so the
    /// same characteristic gets the same verdict in every universe it
    /// belongs to.
    fn notices(&self, id: &CharacteristicId) -> bool {
        match self {
            Self::Mask(mask) => mask.contains(id),
            Self::Bernoulli {
                seed,
                inclusion_probability,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(fnv1a(id.as_str().as_bytes()));
                rng.gen::<f64>() < *inclusion_probability
            }
        }
    }
}

fn check_probability(p: f64) -> Result<(), EpistemicError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(EpistemicError::InvalidProbability(p))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// What an observer perceives of a universe: OMC and the derived OIMC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedView {
    omc: IdSet,
    oimc: IdSet,
}

impl ObservedView {
    pub fn omc(&self) -> &IdSet {
        &self.omc
    }

    /// `IMC ∩ OMC`.
    pub fn oimc(&self) -> &IdSet {
        &self.oimc
    }
}

/// Applies `observer` to `universe`. Pure: identical inputs give identical views.
pub fn observe(universe: &Universe, observer: &Observer) -> Result<ObservedView, EpistemicError> {
    match observer {
        Observer::Mask(mask) => {
            let outside: Vec<_> = mask.difference(universe.mc()).cloned().collect();
            if !outside.is_empty() {
                return Err(EpistemicError::MaskOutsideMc(outside));
            }
        }
        Observer::Bernoulli {
            inclusion_probability,
            ..
        } => check_probability(*inclusion_probability)?,
    }
    let omc: IdSet = universe
        .mc()
        .iter()
        .filter(|id| observer.notices(id))
        .cloned()
        .collect();
    let oimc = universe.imc().intersection(&omc).cloned().collect();
    Ok(ObservedView { omc, oimc })
}
