//! The three ways a machine can grow its intelligent characteristics:
//! acquirement (add characteristics drawn from intelligent behavior),
//! filtering (drop the least relevant characteristics) and specialization
//! (narrow intelligent behavior to a local focus IB*).
//!
//! Filtering removes characteristics, so it cannot grow `|IMC|`. What grows
//! is the share `|IMC|/|MC|`: while MC still holds non-intelligent
//! characteristics the ratio climbs, and once MC ⊆ IB every further step
//! shrinks `|IMC|`.

mod venn;

pub use venn::{lens_area, venn_step, VennConfiguration, VennError};

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemic::{observe, CharacteristicId, EpistemicError, IdSet, Observer, Universe};
use crate::metrics::{efficiency, EfficiencyInputs, MetricsError};
use crate::numfmt::serialize_report;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearningError {
    #[error("cannot acquire {requested} characteristics, only {available} remain in IB \\ MC")]
    AcquisitionExhausted { requested: usize, available: usize },
    #[error("cannot filter {requested} characteristics from an MC of {available}")]
    KTooLarge { requested: usize, available: usize },
    #[error("focus contains ids outside IB: {0:?}")]
    FocusOutsideIb(Vec<CharacteristicId>),
    #[error("relevance ranking is not a permutation of MC")]
    RankingMismatch,
    #[error("a trajectory needs at least one step")]
    NoSteps,
    #[error(transparent)]
    Epistemic(#[from] EpistemicError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Venn(#[from] VennError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearningMethod {
    Acquirement,
    Filtering,
    Specialization,
}

impl LearningMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Acquirement => "acquirement",
            Self::Filtering => "filtering",
            Self::Specialization => "specialization",
        }
    }
}

impl fmt::Display for LearningMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearningMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "acquirement" => Ok(Self::Acquirement),
            "filtering" => Ok(Self::Filtering),
            "specialization" => Ok(Self::Specialization),
            other => Err(format!("unknown learning method `{other}`")),
        }
    }
}

/// Adds `k` characteristics drawn uniformly (seeded) from `IB \ MC`.
///
/// Since every new characteristic is intelligent, `|IMC|` grows by exactly `k`
/// and a monistic universe stays monistic.
pub fn acquire(universe: &Universe, k: usize, seed: u64) -> Result<Universe, LearningError> {
    let candidates: Vec<&CharacteristicId> = universe.ib().difference(universe.mc()).collect();
    if candidates.len() < k {
        return Err(LearningError::AcquisitionExhausted {
            requested: k,
            available: candidates.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mc = universe.mc().clone();
    mc.extend(
        candidates
            .into_iter()
            .choose_multiple(&mut rng, k)
            .into_iter()
            .cloned(),
    );
    Ok(universe.with_mc(mc)?)
}

/// A total order over MC, least relevant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceRanking {
    order: Vec<CharacteristicId>,
}

impl RelevanceRanking {
    /// Takes `order` as given; [`filter_step`] checks it against MC.
    pub fn new(order: Vec<CharacteristicId>) -> Self {
        Self { order }
    }

    /// Characteristics outside the relevant set come first, then those inside;
    /// each band is shuffled with `seed`.
    ///
    /// The relevant set is IMC, or `IB* ∩ MC` when a focus is given.
    pub fn default_for(universe: &Universe, focus: Option<&Focus>, seed: u64) -> Self {
        let relevant = |id: &CharacteristicId| match focus {
            Some(f) => f.ib_star.contains(id),
            None => universe.imc().contains(id),
        };
        let (mut inside, mut outside): (Vec<_>, Vec<_>) =
            universe.mc().iter().cloned().partition(|id| relevant(id));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        outside.shuffle(&mut rng);
        inside.shuffle(&mut rng);
        outside.extend(inside);
        Self { order: outside }
    }

    pub fn order(&self) -> &[CharacteristicId] {
        &self.order
    }

    fn is_permutation_of(&self, mc: &IdSet) -> bool {
        let distinct: BTreeSet<&CharacteristicId> = self.order.iter().collect();
        self.order.len() == mc.len()
            && distinct.len() == mc.len()
            && distinct.iter().all(|id| mc.contains(*id))
    }
}

/// Removes the `k` lowest-ranked characteristics from MC. IB is untouched.
pub fn filter_step(
    universe: &Universe,
    ranking: &RelevanceRanking,
    k: usize,
) -> Result<Universe, LearningError> {
    if !ranking.is_permutation_of(universe.mc()) {
        return Err(LearningError::RankingMismatch);
    }
    if k > universe.mc().len() {
        return Err(LearningError::KTooLarge {
            requested: k,
            available: universe.mc().len(),
        });
    }
    let mut mc = universe.mc().clone();
    for id in &ranking.order[..k] {
        mc.remove(id);
    }
    Ok(universe.with_mc(mc)?)
}

/// A localized subset IB* of intelligent behavior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Focus {
    ib_star: IdSet,
}

impl Focus {
    pub fn new(universe: &Universe, ib_star: IdSet) -> Result<Self, LearningError> {
        let outside: Vec<_> = ib_star.difference(universe.ib()).cloned().collect();
        if !outside.is_empty() {
            return Err(LearningError::FocusOutsideIb(outside));
        }
        Ok(Self { ib_star })
    }

    /// The trivial focus IB* = IB.
    pub fn whole(universe: &Universe) -> Self {
        Self {
            ib_star: universe.ib().clone(),
        }
    }

    pub fn ib_star(&self) -> &IdSet {
        &self.ib_star
    }
}

/// The intelligent characteristics relative to a focus: `IB* ∩ MC`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedView {
    pub imc_star: IdSet,
}

/// Narrows the problem domain to `focus` without touching the universe.
///
/// The returned universe is the input itself; only the effective intelligent
/// set changes.
pub fn specialize<'u>(
    universe: &'u Universe,
    focus: &Focus,
) -> Result<(&'u Universe, SpecializedView), LearningError> {
    let outside: Vec<_> = focus.ib_star.difference(universe.ib()).cloned().collect();
    if !outside.is_empty() {
        return Err(LearningError::FocusOutsideIb(outside));
    }
    let imc_star = focus.ib_star.intersection(universe.mc()).cloned().collect();
    Ok((universe, SpecializedView { imc_star }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryStep {
    pub step: usize,
    pub mc_size: usize,
    /// `|IMC|`, or `|IB* ∩ MC|` for specialization.
    pub imc_size: usize,
    /// `imc_size / mc_size`; 1 when MC is empty.
    #[serde(serialize_with = "serialize_report")]
    pub ratio: f64,
    /// Efficiency seen by the reference observer, on the unfocused sets.
    #[serde(serialize_with = "serialize_report")]
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalReason {
    /// Acquirement ran out of `IB \ MC`.
    AcquisitionExhausted,
    /// Filtering emptied MC.
    MachineEmptied,
    /// Specialization emptied IB*.
    FocusEmptied,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub method: LearningMethod,
    pub steps: Vec<TrajectoryStep>,
    /// Set when the run stopped before the requested number of steps.
    pub terminal: Option<TerminalReason>,
}

impl Trajectory {
    pub const CSV_HEADER: [&'static str; 5] = ["step", "mc_size", "imc_size", "ratio", "eta"];

    pub fn imc_sizes(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.imc_size).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.ratio).collect()
    }
}

fn ratio(imc: usize, mc: usize) -> f64 {
    if mc == 0 {
        1.0
    } else {
        imc as f64 / mc as f64
    }
}

fn record(
    step: usize,
    universe: &Universe,
    imc_size: usize,
    observer: &Observer,
) -> Result<TrajectoryStep, LearningError> {
    // A mask cannot see characteristics that filtering has removed.
    let view = observe(universe, &observer.restricted_to(universe.mc()))?;
    let eta = efficiency(EfficiencyInputs::of(universe, &view))?;
    Ok(TrajectoryStep {
        step,
        mc_size: universe.mc().len(),
        imc_size,
        ratio: ratio(imc_size, universe.mc().len()),
        eta,
    })
}

/// Applies one unit step of `method` per iteration and records the state
/// after each step.
///
/// * acquirement adds one characteristic from `IB \ MC` (seed `seed + i` at step `i`);
/// * filtering removes the next characteristic of the default ranking drawn once from `seed`;
/// * specialization starts from IB* = IB and removes one seeded element of IB* per step.
///
/// A run that cannot continue stops early and reports why in `terminal`.
pub fn run_trajectory(
    universe: &Universe,
    method: LearningMethod,
    steps: usize,
    seed: u64,
    reference_observer: &Observer,
) -> Result<Trajectory, LearningError> {
    if steps == 0 {
        return Err(LearningError::NoSteps);
    }
    let mut records = Vec::with_capacity(steps);
    let mut terminal = None;
    match method {
        LearningMethod::Acquirement => {
            let mut current = universe.clone();
            for i in 0..steps {
                current = match acquire(&current, 1, seed.wrapping_add(i as u64)) {
                    Ok(next) => next,
                    Err(LearningError::AcquisitionExhausted { .. }) => {
                        terminal = Some(TerminalReason::AcquisitionExhausted);
                        break;
                    }
                    Err(e) => return Err(e),
                };
                records.push(record(
                    i,
                    &current,
                    current.imc().len(),
                    reference_observer,
                )?);
            }
        }
        LearningMethod::Filtering => {
            let mut current = universe.clone();
            let order = RelevanceRanking::default_for(universe, None, seed).order;
            for i in 0..steps.min(order.len()) {
                let remaining = RelevanceRanking::new(order[i..].to_vec());
                current = filter_step(&current, &remaining, 1)?;
                records.push(record(
                    i,
                    &current,
                    current.imc().len(),
                    reference_observer,
                )?);
            }
            if order.len() < steps {
                terminal = Some(TerminalReason::MachineEmptied);
            }
        }
        LearningMethod::Specialization => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut focus = Focus::whole(universe);
            for i in 0..steps {
                let Some(drop) = focus.ib_star.iter().choose(&mut rng).cloned() else {
                    terminal = Some(TerminalReason::FocusEmptied);
                    break;
                };
                focus.ib_star.remove(&drop);
                let (u, view) = specialize(universe, &focus)?;
                records.push(record(i, u, view.imc_star.len(), reference_observer)?);
            }
        }
    }
    Ok(Trajectory {
        method,
        steps: records,
        terminal,
    })
}

/// Orders machines by `|IMC|`; a larger intelligent core wins regardless of
/// how much of MC it covers.
pub fn compare_machines(u1: &Universe, u2: &Universe) -> Ordering {
    u1.imc().len().cmp(&u2.imc().len())
}
