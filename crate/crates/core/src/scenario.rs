//! Config-driven scenarios: one JSON document describes a universe, how it is
//! observed, which tests compete and what to simulate. Every run is a pure
//! function of the document, so identical configs render identical reports.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemic::{observe, CharacteristicId, EpistemicError, IdSet, Observer, Universe};
use crate::learning::{
    lens_area, run_trajectory, venn_step, LearningError, LearningMethod, Trajectory,
    VennConfiguration, VennError,
};
use crate::metrics::{evaluate_test, tournament, MetricsError, QualityReport, RankedTest};
use crate::numfmt::{format_report, serialize_report};
use crate::test_model::{oracle_for, Classifier, IntelligenceTest, LabelSpace, TestModelError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    /// The document does not parse or describes an impossible scenario.
    #[error("config error: {0}")]
    Config(String),
    #[error("infeasible universe shape: {0}")]
    InfeasibleShape(String),
    /// The scenario is well-formed but violates a domain rule.
    #[error("domain error: {0}")]
    Domain(String),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::InfeasibleShape(_) => 2,
            Self::Domain(_) => 3,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for ScenarioError {
            fn from(e: $t) -> Self {
                Self::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(
    EpistemicError,
    TestModelError,
    MetricsError,
    LearningError,
    VennError
);

fn config_err(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evaluate,
    Tournament,
    Learn,
    Venn,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Self::Evaluate,
        Self::Tournament,
        Self::Learn,
        Self::Venn,
        Self::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Evaluate => "evaluate",
            Self::Tournament => "tournament",
            Self::Learn => "learn",
            Self::Venn => "venn",
            Self::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown subcommand `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Either a generated shape (`ib_size`, `mc_size`, `overlap_size`) or
/// explicit id lists (`ib`, `mc`).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseSpec {
    pub ib_size: Option<usize>,
    pub mc_size: Option<usize>,
    pub overlap_size: Option<usize>,
    pub ib: Option<Vec<String>>,
    pub mc: Option<Vec<String>>,
    #[serde(default)]
    pub monistic: bool,
}

/// Exactly one of `inclusion_probability` or `mask`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSpec {
    pub inclusion_probability: Option<f64>,
    pub mask: Option<Vec<String>>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierSpec {
    /// The infallible classifier induced by the universe.
    Oracle,
    /// Every characteristic gets the same label.
    Constant { label: String },
    /// Oracle labels, each replaced by a different uniformly chosen label
    /// with probability `flip_probability`.
    Noisy {
        flip_probability: f64,
        seed: Option<u64>,
    },
    /// Characteristic id → label name.
    Explicit { labels: BTreeMap<String, String> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSpec {
    pub name: String,
    pub observer: Option<ObserverSpec>,
    pub classifier: ClassifierSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnSpec {
    pub method: LearningMethod,
    pub steps: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VennSpec {
    pub r_truth: f64,
    pub r_belief: f64,
    pub d: f64,
    pub method: LearningMethod,
    pub delta: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub inclusion_probabilities: Vec<f64>,
    #[serde(default = "one")]
    pub replicates: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: u64,
    pub universe: Option<UniverseSpec>,
    pub observer: Option<ObserverSpec>,
    pub label_space: Option<LabelSpace>,
    #[serde(default)]
    pub tests: Vec<TestSpec>,
    pub learn: Option<LearnSpec>,
    pub venn: Option<VennSpec>,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn check_probability(name: &str, p: f64) -> Result<(), ScenarioError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(config_err(format!("{name} = {p} is not in [0, 1]")))
    }
}

impl ObserverSpec {
    fn validate(&self, at: &str) -> Result<(), ScenarioError> {
        match (self.inclusion_probability, &self.mask) {
            (Some(p), None) => check_probability(&format!("{at}.inclusion_probability"), p),
            (None, Some(_)) => Ok(()),
            _ => Err(config_err(format!(
                "{at} needs exactly one of `inclusion_probability` or `mask`"
            ))),
        }
    }

    fn build(&self, default_seed: u64) -> Result<Observer, ScenarioError> {
        match (self.inclusion_probability, &self.mask) {
            (Some(p), None) => Ok(Observer::bernoulli(self.seed.unwrap_or(default_seed), p)?),
            (None, Some(mask)) => Ok(Observer::Mask(unique_ids(mask)?)),
            _ => Err(config_err(
                "observer needs exactly one of `inclusion_probability` or `mask`",
            )),
        }
    }
}

fn unique_ids(items: &[String]) -> Result<IdSet, ScenarioError> {
    let mut set = IdSet::new();
    for s in items {
        if !set.insert(CharacteristicId::new(s.as_str())) {
            return Err(EpistemicError::DuplicateId(s.as_str().into()).into());
        }
    }
    Ok(set)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let config: Self = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Structural checks that do not need the universe.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if let Some(u) = &self.universe {
            let shape = (u.ib_size, u.mc_size, u.overlap_size);
            let explicit = (&u.ib, &u.mc);
            match (shape, explicit) {
                ((Some(ib), Some(mc), Some(overlap)), (None, None)) => {
                    check_shape(ib, mc, overlap, u.monistic)?;
                }
                ((None, None, None), (Some(_), Some(_))) => {}
                _ => return Err(config_err(
                    "universe needs either ib_size/mc_size/overlap_size or explicit ib/mc lists",
                )),
            }
        }
        if let Some(o) = &self.observer {
            o.validate("observer")?;
        }
        for (i, t) in self.tests.iter().enumerate() {
            if let Some(o) = &t.observer {
                o.validate(&format!("tests[{i}].observer"))?;
            }
            if let ClassifierSpec::Noisy {
                flip_probability, ..
            } = t.classifier
            {
                check_probability(&format!("tests[{i}].flip_probability"), flip_probability)?;
            }
        }
        let mut names: Vec<_> = self.tests.iter().map(|t| t.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(config_err(format!("test name `{}` is used twice", w[0])));
        }
        if let Some(s) = &self.sweep {
            for p in &s.inclusion_probabilities {
                check_probability("sweep.inclusion_probabilities", *p)?;
            }
            if s.inclusion_probabilities.is_empty() || s.replicates == 0 {
                return Err(config_err(
                    "sweep needs at least one probability and one replicate",
                ));
            }
        }
        if let Some(l) = &self.learn {
            if l.steps == 0 {
                return Err(config_err("learn.steps must be at least 1"));
            }
        }
        if let Some(v) = &self.venn {
            VennConfiguration::new(v.r_truth, v.r_belief, v.d)
                .map_err(|e| config_err(format!("venn: {e}")))?;
            if !(v.delta.is_finite() && v.delta > 0.0) {
                return Err(config_err("venn.delta must be finite and positive"));
            }
        }
        Ok(())
    }

    /// Output format: explicit, else inferred from the path's extension, else JSON.
    pub fn output_format(&self) -> OutputFormat {
        self.output.format.unwrap_or_else(|| {
            match self.output.path.as_ref().and_then(|p| p.extension()) {
                Some(ext) if ext.eq_ignore_ascii_case("csv") => OutputFormat::Csv,
                _ => OutputFormat::Json,
            }
        })
    }

    fn label_space(&self) -> LabelSpace {
        self.label_space.clone().unwrap_or_else(LabelSpace::binary)
    }

    fn universe(&self) -> Result<Universe, ScenarioError> {
        let spec = self
            .universe
            .as_ref()
            .ok_or_else(|| config_err("this command needs a `universe` block"))?;
        match (spec.ib_size, spec.mc_size, spec.overlap_size) {
            (Some(ib), Some(mc), Some(overlap)) => {
                generate_universe(self.seed, ib, mc, overlap, spec.monistic)
            }
            _ => {
                let ib = spec.ib.as_deref().unwrap_or_default();
                let mc = spec.mc.as_deref().unwrap_or_default();
                Ok(Universe::build(
                    ib.iter().cloned(),
                    mc.iter().cloned(),
                    spec.monistic,
                )?)
            }
        }
    }

    /// The scenario-level observer; full observation when none is given.
    fn observer(&self, universe: &Universe) -> Result<Observer, ScenarioError> {
        match &self.observer {
            Some(o) => o.build(self.seed),
            None => Ok(Observer::full(universe)),
        }
    }

    fn tests(
        &self,
        universe: &Universe,
        space: &LabelSpace,
    ) -> Result<Vec<IntelligenceTest>, ScenarioError> {
        let scenario_observer = self.observer(universe)?;
        let full = observe(universe, &Observer::full(universe))?;
        let oracle = oracle_for(universe, &full, space)?.classifier;
        self.tests
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let derived_seed = self.seed.wrapping_add(i as u64 + 1);
                let observer = match &spec.observer {
                    Some(o) => o.build(derived_seed)?,
                    None => scenario_observer.clone(),
                };
                let classifier =
                    build_classifier(&spec.classifier, &oracle, universe, space, derived_seed)?;
                Ok(IntelligenceTest::new(
                    spec.name.clone(),
                    observer,
                    classifier,
                ))
            })
            .collect()
    }
}

fn check_shape(ib: usize, mc: usize, overlap: usize, monistic: bool) -> Result<(), ScenarioError> {
    if overlap > ib.min(mc) {
        return Err(ScenarioError::InfeasibleShape(format!(
            "overlap {overlap} exceeds min(ib_size {ib}, mc_size {mc})"
        )));
    }
    if monistic && overlap != mc {
        return Err(ScenarioError::InfeasibleShape(format!(
            "a monistic universe needs overlap_size = mc_size ({overlap} ≠ {mc})"
        )));
    }
    Ok(())
}

/// Builds a synthetic universe with exactly `ib_size` intelligent behaviors,
/// `mc_size` machine characteristics and `overlap_size` shared between them.
///
/// Ids are `c000`, `c001`, … and the seed decides which ids land in which
/// region.
pub fn generate_universe(
    seed: u64,
    ib_size: usize,
    mc_size: usize,
    overlap_size: usize,
    monistic: bool,
) -> Result<Universe, ScenarioError> {
    check_shape(ib_size, mc_size, overlap_size, monistic)?;
    let total = ib_size + mc_size - overlap_size;
    let width = total.saturating_sub(1).to_string().len().max(3);
    let mut pool: Vec<CharacteristicId> = (0..total)
        .map(|i| CharacteristicId::new(format!("c{i:0width$}")))
        .collect();
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let (shared, rest) = pool.split_at(overlap_size);
    let (ib_only, mc_only) = rest.split_at(ib_size - overlap_size);
    let ib: IdSet = shared.iter().chain(ib_only).cloned().collect();
    let mc: IdSet = shared.iter().chain(mc_only).cloned().collect();
    Ok(Universe::from_sets(ib, mc, monistic)?)
}

fn build_classifier(
    spec: &ClassifierSpec,
    oracle: &Classifier,
    universe: &Universe,
    space: &LabelSpace,
    default_seed: u64,
) -> Result<Classifier, ScenarioError> {
    match spec {
        ClassifierSpec::Oracle => Ok(oracle.clone()),
        ClassifierSpec::Constant { label } => {
            if !space.contains(label) {
                return Err(TestModelError::UnknownLabel(label.clone()).into());
            }
            Ok(universe
                .mc()
                .iter()
                .map(|id| (id.clone(), label.clone()))
                .collect())
        }
        ClassifierSpec::Noisy {
            flip_probability,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(default_seed));
            let names: Vec<&str> = space.labels().iter().map(|l| l.name.as_str()).collect();
            Ok(oracle
                .iter()
                .map(|(id, label)| {
                    let flip = rng.gen::<f64>() < *flip_probability;
                    let label = if flip {
                        let others: Vec<&str> =
                            names.iter().copied().filter(|n| n != label).collect();
                        others[rng.gen_range(0..others.len())].to_owned()
                    } else {
                        label.clone()
                    };
                    (id.clone(), label)
                })
                .collect())
        }
        ClassifierSpec::Explicit { labels } => Ok(labels
            .iter()
            .map(|(id, l)| (CharacteristicId::new(id.as_str()), l.clone()))
            .collect()),
    }
}

/// Universe, label space and the detachment check shared by every
/// universe-based command.
fn setup(config: &ScenarioConfig) -> Result<(Universe, LabelSpace), ScenarioError> {
    let universe = config.universe()?;
    let space = config.label_space();
    if !universe.is_detached_from(&space) {
        return Err(ScenarioError::Domain(
            "characteristic ids collide with label names".into(),
        ));
    }
    Ok((universe, space))
}

#[derive(Debug, Clone, Serialize)]
pub struct EvaluationRow {
    pub name: String,
    pub report: QualityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct TournamentRow {
    pub rank: usize,
    pub name: String,
    pub report: QualityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "serialize_report")]
    pub inclusion_probability: f64,
    pub replicate: usize,
    pub name: String,
    pub report: QualityReport,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VennRow {
    pub step: usize,
    #[serde(serialize_with = "serialize_report")]
    pub r_truth: f64,
    #[serde(serialize_with = "serialize_report")]
    pub r_belief: f64,
    #[serde(serialize_with = "serialize_report")]
    pub d: f64,
    #[serde(serialize_with = "serialize_report")]
    pub lens_area: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VennSeries {
    pub method: LearningMethod,
    #[serde(serialize_with = "serialize_report")]
    pub delta: f64,
    /// Step 0 is the initial configuration.
    pub steps: Vec<VennRow>,
    /// Set when a step would have collapsed a radius.
    pub terminal: Option<&'static str>,
}

/// The typed result of one command.
#[derive(Debug, Clone)]
pub enum Outcome {
    Evaluate(Vec<EvaluationRow>),
    Tournament(Vec<TournamentRow>),
    Learn(Trajectory),
    Venn(VennSeries),
    Sweep(Vec<SweepRow>),
}

const REPORT_COLUMNS: [&str; 6] = ["eta", "c_a", "q", "q_normalized", "n_e", "s_e"];

fn report_fields(r: &QualityReport) -> [String; 6] {
    [
        format_report(r.eta),
        format_report(r.c_a),
        format_report(r.q),
        format_report(r.q_normalized),
        r.n_e.to_string(),
        format_report(r.s_e),
    ]
}

fn csv_table<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn with_report(prefix: Vec<String>, r: &QualityReport) -> Vec<String> {
    prefix.into_iter().chain(report_fields(r)).collect()
}

impl Outcome {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = match self {
                    Self::Evaluate(rows) => serde_json::to_string_pretty(rows),
                    Self::Tournament(rows) => serde_json::to_string_pretty(rows),
                    Self::Learn(t) => serde_json::to_string_pretty(t),
                    Self::Venn(v) => serde_json::to_string_pretty(v),
                    Self::Sweep(rows) => serde_json::to_string_pretty(rows),
                }
                .expect("reports are always serializable");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> String {
        match self {
            Self::Evaluate(rows) => {
                let header: Vec<&str> = ["name"].into_iter().chain(REPORT_COLUMNS).collect();
                csv_table(
                    &header,
                    rows.iter()
                        .map(|r| with_report(vec![r.name.clone()], &r.report)),
                )
            }
            Self::Tournament(rows) => {
                let header: Vec<&str> =
                    ["rank", "name"].into_iter().chain(REPORT_COLUMNS).collect();
                csv_table(
                    &header,
                    rows.iter()
                        .map(|r| with_report(vec![r.rank.to_string(), r.name.clone()], &r.report)),
                )
            }
            Self::Learn(t) => csv_table(
                &Trajectory::CSV_HEADER,
                t.steps.iter().map(|s| {
                    vec![
                        s.step.to_string(),
                        s.mc_size.to_string(),
                        s.imc_size.to_string(),
                        format_report(s.ratio),
                        format_report(s.eta),
                    ]
                }),
            ),
            Self::Venn(v) => csv_table(
                &["step", "r_truth", "r_belief", "d", "lens_area"],
                v.steps.iter().map(|s| {
                    vec![
                        s.step.to_string(),
                        format_report(s.r_truth),
                        format_report(s.r_belief),
                        format_report(s.d),
                        format_report(s.lens_area),
                    ]
                }),
            ),
            Self::Sweep(rows) => {
                let header: Vec<&str> = ["inclusion_probability", "replicate", "name"]
                    .into_iter()
                    .chain(REPORT_COLUMNS)
                    .collect();
                csv_table(
                    &header,
                    rows.iter().map(|r| {
                        with_report(
                            vec![
                                format_report(r.inclusion_probability),
                                r.replicate.to_string(),
                                r.name.clone(),
                            ],
                            &r.report,
                        )
                    }),
                )
            }
        }
    }
}

/// Runs one command against a validated config.
pub fn run_scenario(command: Command, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    match command {
        Command::Evaluate => {
            let (universe, space) = setup(config)?;
            let tests = if config.tests.is_empty() {
                let view = observe(&universe, &config.observer(&universe)?)?;
                vec![oracle_for(&universe, &view, &space)?]
            } else {
                config.tests(&universe, &space)?
            };
            let rows = tests
                .iter()
                .map(|t| {
                    Ok(EvaluationRow {
                        name: t.name.clone(),
                        report: evaluate_test(t, &universe, &space)?,
                    })
                })
                .collect::<Result<_, ScenarioError>>()?;
            Ok(Outcome::Evaluate(rows))
        }
        Command::Tournament => {
            if config.tests.is_empty() {
                return Err(config_err("tournament needs at least one entry in `tests`"));
            }
            let (universe, space) = setup(config)?;
            let tests = config.tests(&universe, &space)?;
            let ranked = tournament(&tests, &universe, &space)?;
            Ok(Outcome::Tournament(
                ranked
                    .into_iter()
                    .enumerate()
                    .map(|(i, RankedTest { name, report })| TournamentRow {
                        rank: i + 1,
                        name,
                        report,
                    })
                    .collect(),
            ))
        }
        Command::Learn => {
            let learn = config
                .learn
                .as_ref()
                .ok_or_else(|| config_err("learn needs a `learn` block"))?;
            let (universe, _) = setup(config)?;
            let observer = config.observer(&universe)?;
            let trajectory = run_trajectory(
                &universe,
                learn.method,
                learn.steps,
                learn.seed.unwrap_or(config.seed),
                &observer,
            )?;
            Ok(Outcome::Learn(trajectory))
        }
        Command::Venn => {
            let spec = config
                .venn
                .as_ref()
                .ok_or_else(|| config_err("venn needs a `venn` block"))?;
            let mut v = VennConfiguration::new(spec.r_truth, spec.r_belief, spec.d)?;
            let row = |step: usize, v: &VennConfiguration| VennRow {
                step,
                r_truth: v.r_truth(),
                r_belief: v.r_belief(),
                d: v.d(),
                lens_area: lens_area(v),
            };
            let mut steps = vec![row(0, &v)];
            let mut terminal = None;
            for i in 1..=spec.steps {
                match venn_step(&v, spec.method, spec.delta) {
                    Ok(next) => v = next,
                    Err(VennError::RadiusUnderflow(_)) => {
                        terminal = Some("radius_underflow");
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                steps.push(row(i, &v));
            }
            Ok(Outcome::Venn(VennSeries {
                method: spec.method,
                delta: spec.delta,
                steps,
                terminal,
            }))
        }
        Command::Sweep => {
            let sweep = config
                .sweep
                .as_ref()
                .ok_or_else(|| config_err("sweep needs a `sweep` block"))?;
            let (universe, space) = setup(config)?;
            let tests = if config.tests.is_empty() {
                let full = observe(&universe, &Observer::full(&universe))?;
                vec![oracle_for(&universe, &full, &space)?]
            } else {
                config.tests(&universe, &space)?
            };
            let mut rows = Vec::new();
            for &p in &sweep.inclusion_probabilities {
                for replicate in 0..sweep.replicates {
                    let observer =
                        Observer::bernoulli(config.seed.wrapping_add(replicate as u64), p)?;
                    for t in &tests {
                        let probe = IntelligenceTest::new(
                            t.name.clone(),
                            observer.clone(),
                            t.classifier.clone(),
                        );
                        rows.push(SweepRow {
                            inclusion_probability: p,
                            replicate,
                            name: t.name.clone(),
                            report: evaluate_test(&probe, &universe, &space)?,
                        });
                    }
                }
            }
            Ok(Outcome::Sweep(rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_shape_is_exact() {
        let u = generate_universe(7, 10, 8, 4, false).unwrap();
        assert_eq!(u.ib().len(), 10);
        assert_eq!(u.mc().len(), 8);
        // recount the overlap by membership rather than trusting imc()
        let shared = u.mc().iter().filter(|id| u.ib().contains(*id)).count();
        assert_eq!(shared, 4);
        assert_eq!(u.imc().len(), 4);
        assert_eq!(generate_universe(7, 10, 8, 4, false).unwrap(), u);
        assert_ne!(generate_universe(8, 10, 8, 4, false).unwrap(), u);
    }

    #[test]
    fn infeasible_shapes() {
        assert!(matches!(
            generate_universe(1, 5, 8, 6, false),
            Err(ScenarioError::InfeasibleShape(_))
        ));
        assert!(matches!(
            generate_universe(1, 5, 3, 2, true),
            Err(ScenarioError::InfeasibleShape(_))
        ));
        let mono = generate_universe(1, 5, 3, 3, true).unwrap();
        assert!(mono.is_monistic());
    }

    #[test]
    fn probability_out_of_range_is_config_error() {
        let err = ScenarioConfig::from_json(
            r#"{"universe":{"ib_size":3,"mc_size":3,"overlap_size":1},"observer":{"inclusion_probability":1.5}}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn monistic_violation_is_domain_error() {
        let cfg = ScenarioConfig::from_json(
            r#"{"universe":{"ib":["a"],"mc":["a","z"],"monistic":true}}"#,
        )
        .unwrap();
        let err = run_scenario(Command::Evaluate, &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"sed": 4}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"universe":{"ib_size":3}}"#).is_err());
    }

    #[test]
    fn oracle_evaluation_is_perfect() {
        let cfg = ScenarioConfig::from_json(
            r#"{"seed":3,"universe":{"ib_size":12,"mc_size":9,"overlap_size":5}}"#,
        )
        .unwrap();
        let Outcome::Evaluate(rows) = run_scenario(Command::Evaluate, &cfg).unwrap() else {
            panic!("wrong outcome");
        };
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].report.eta, 1.0);
        assert_eq!(rows[0].report.n_e, 0);
    }

    #[test]
    fn learn_csv() {
        let cfg = ScenarioConfig::from_json(
            r#"{"seed":3,"universe":{"ib_size":12,"mc_size":4,"overlap_size":2},
                "learn":{"method":"acquirement","steps":5}}"#,
        )
        .unwrap();
        let out = run_scenario(Command::Learn, &cfg)
            .unwrap()
            .render(OutputFormat::Csv);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "step,mc_size,imc_size,ratio,eta");
        assert_eq!(lines.len(), 6);
        let imc: Vec<usize> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        assert_eq!(imc, vec![3, 4, 5, 6, 7]);
    }

    #[test]
    fn venn_series_stops_at_underflow() {
        let cfg = ScenarioConfig::from_json(
            r#"{"venn":{"r_truth":1,"r_belief":1,"d":1,"method":"specialization","delta":0.4,"steps":5}}"#,
        )
        .unwrap();
        let Outcome::Venn(v) = run_scenario(Command::Venn, &cfg).unwrap() else {
            panic!("wrong outcome");
        };
        assert_eq!(v.steps.len(), 3);
        assert_eq!(v.terminal, Some("radius_underflow"));
        let csv = Outcome::Venn(v).render(OutputFormat::Csv);
        assert!(csv.starts_with("step,r_truth,r_belief,d,lens_area\n0,1,1,1,1.22836969861\n"));
    }

    #[test]
    fn label_collision_is_domain_error() {
        let cfg = ScenarioConfig::from_json(
            r#"{"universe":{"ib":["intelligent"],"mc":["intelligent"]}}"#,
        )
        .unwrap();
        assert_eq!(
            run_scenario(Command::Evaluate, &cfg)
                .unwrap_err()
                .exit_code(),
            3
        );
    }

    #[test]
    fn output_format_inference() {
        let mut cfg = ScenarioConfig::default();
        assert_eq!(cfg.output_format(), OutputFormat::Json);
        cfg.output.path = Some("r.CSV".into());
        assert_eq!(cfg.output_format(), OutputFormat::Csv);
        cfg.output.format = Some(OutputFormat::Json);
        assert_eq!(cfg.output_format(), OutputFormat::Json);
    }

    #[test]
    fn command_names() {
        for c in Command::ALL {
            assert_eq!(c.as_str().parse::<Command>().unwrap(), c);
        }
    }
}
