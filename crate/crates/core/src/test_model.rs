//! Intelligence tests as total classification functions from OMC into a
//! label space (CMC), and the infallible test induced by a universe.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemic::{CharacteristicId, ObservedView, Observer, Universe};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TestModelError {
    #[error("label space needs at least two labels")]
    TooFewLabels,
    #[error("label `{0}` is defined twice")]
    DuplicateLabel(String),
    #[error("label `{0}` has a non-finite encoding")]
    NonFiniteEncoding(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("classifier is not total: no label for {0:?}")]
    NotTotal(Vec<CharacteristicId>),
    #[error("label space cannot separate intelligent from unintelligent")]
    DegenerateSpace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Label {
    pub name: String,
    pub encoding: f64,
}

impl Label {
    pub fn new(name: impl Into<String>, encoding: f64) -> Self {
        Self {
            name: name.into(),
            encoding,
        }
    }
}

/// Ordered labels with numeric encodings.
///
/// Serialized as a JSON array of `{"name", "encoding"}` objects; order is
/// significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Label>", into = "Vec<Label>")]
pub struct LabelSpace {
    labels: Vec<Label>,
}

pub const INTELLIGENT: &str = "intelligent";
pub const UNINTELLIGENT: &str = "unintelligent";

impl LabelSpace {
    pub fn new(labels: Vec<Label>) -> Result<Self, TestModelError> {
        if labels.len() < 2 {
            return Err(TestModelError::TooFewLabels);
        }
        Self::checked(labels)
    }

    /// A single-label space. Usable for classification, but no oracle can be
    /// induced from it.
    pub fn degenerate(label: Label) -> Result<Self, TestModelError> {
        Self::checked(vec![label])
    }

    fn checked(labels: Vec<Label>) -> Result<Self, TestModelError> {
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.name.as_str()) {
                return Err(TestModelError::DuplicateLabel(l.name.clone()));
            }
            if !l.encoding.is_finite() {
                return Err(TestModelError::NonFiniteEncoding(l.name.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// `{unintelligent → 0, intelligent → 1}`.
    pub fn binary() -> Self {
        Self {
            labels: vec![Label::new(UNINTELLIGENT, 0.0), Label::new(INTELLIGENT, 1.0)],
        }
    }

    /// `n` grades named `grade0 … grade{n-1}` encoded `0 … n-1`.
    pub fn graded(n: usize) -> Result<Self, TestModelError> {
        Self::new(
            (0..n)
                .map(|i| Label::new(format!("grade{i}"), i as f64))
                .collect(),
        )
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, name: &str) -> bool {
        self.labels.iter().any(|l| l.name == name)
    }

    pub fn encoding(&self, name: &str) -> Result<f64, TestModelError> {
        self.labels
            .iter()
            .find(|l| l.name == name)
            .map(|l| l.encoding)
            .ok_or_else(|| TestModelError::UnknownLabel(name.to_owned()))
    }

    /// `max encoding − min encoding`.
    pub fn max_distance(&self) -> f64 {
        let (lo, hi) = self
            .labels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| {
                (lo.min(l.encoding), hi.max(l.encoding))
            });
        hi - lo
    }

    /// The first label with the highest encoding.
    pub fn intelligent_label(&self) -> &Label {
        self.labels
            .iter()
            .reduce(|best, l| if l.encoding > best.encoding { l } else { best })
            .expect("label spaces are never empty")
    }

    /// The first label with the lowest encoding.
    pub fn unintelligent_label(&self) -> &Label {
        self.labels
            .iter()
            .reduce(|best, l| if l.encoding < best.encoding { l } else { best })
            .expect("label spaces are never empty")
    }

    /// Applies `e → scale·e + shift` to every encoding.
    pub fn reencoded(&self, scale: f64, shift: f64) -> Result<Self, TestModelError> {
        Self::checked(
            self.labels
                .iter()
                .map(|l| Label::new(l.name.clone(), scale * l.encoding + shift))
                .collect(),
        )
    }
}

impl TryFrom<Vec<Label>> for LabelSpace {
    type Error = TestModelError;

    fn try_from(labels: Vec<Label>) -> Result<Self, Self::Error> {
        Self::new(labels)
    }
}

impl From<LabelSpace> for Vec<Label> {
    fn from(space: LabelSpace) -> Self {
        space.labels
    }
}

/// `|encoding(a) − encoding(b)|`.
pub fn label_distance(space: &LabelSpace, a: &str, b: &str) -> Result<f64, TestModelError> {
    Ok((space.encoding(a)? - space.encoding(b)?).abs())
}

/// Characteristic → label name; JSON form is a plain object.
pub type Classifier = BTreeMap<CharacteristicId, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct IntelligenceTest {
    pub name: String,
    pub observer: Observer,
    pub classifier: Classifier,
}

impl IntelligenceTest {
    pub fn new(name: impl Into<String>, observer: Observer, classifier: Classifier) -> Self {
        Self {
            name: name.into(),
            observer,
            classifier,
        }
    }
}

/// The image of a test over one observed view. Every label is known to the
/// space it was produced against.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelAssignment {
    pairs: BTreeMap<CharacteristicId, String>,
}

impl LabelAssignment {
    /// Builds an assignment after checking every label against `space`.
    pub fn new(
        pairs: BTreeMap<CharacteristicId, String>,
        space: &LabelSpace,
    ) -> Result<Self, TestModelError> {
        if let Some(bad) = pairs.values().find(|l| !space.contains(l)) {
            return Err(TestModelError::UnknownLabel(bad.clone()));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &BTreeMap<CharacteristicId, String> {
        &self.pairs
    }

    pub fn get(&self, id: &CharacteristicId) -> Option<&str> {
        self.pairs.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn same_domain(&self, other: &Self) -> bool {
        self.pairs.len() == other.pairs.len() && self.pairs.keys().eq(other.pairs.keys())
    }
}

/// Applies the test's classifier to every element of `view`'s OMC.
///
/// Classifier entries outside OMC are ignored.
pub fn classify_all(
    test: &IntelligenceTest,
    view: &ObservedView,
    space: &LabelSpace,
) -> Result<LabelAssignment, TestModelError> {
    let mut missing = Vec::new();
    let mut pairs = BTreeMap::new();
    for id in view.omc() {
        match test.classifier.get(id) {
            Some(label) => {
                pairs.insert(id.clone(), label.clone());
            }
            None => missing.push(id.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(TestModelError::NotTotal(missing));
    }
    LabelAssignment::new(pairs, space)
}

/// The infallible test for `universe`: every characteristic of MC is labeled
/// with the highest-encoded label when it lies in IMC and with the
/// lowest-encoded label otherwise. The test observes exactly `view`'s OMC.
pub fn oracle_for(
    universe: &Universe,
    view: &ObservedView,
    space: &LabelSpace,
) -> Result<IntelligenceTest, TestModelError> {
    let hi = space.intelligent_label();
    let lo = space.unintelligent_label();
    if space.labels().len() < 2 || hi.name == lo.name {
        return Err(TestModelError::DegenerateSpace);
    }
    let classifier = universe
        .mc()
        .iter()
        .map(|id| {
            let label = if universe.imc().contains(id) { hi } else { lo };
            (id.clone(), label.name.clone())
        })
        .collect();
    Ok(IntelligenceTest::new(
        "oracle",
        Observer::Mask(view.omc().clone()),
        classifier,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::{ids, observe};

    fn classifier(pairs: &[(&str, &str)]) -> Classifier {
        pairs
            .iter()
            .map(|(id, l)| ((*id).into(), (*l).to_owned()))
            .collect()
    }

    fn view_of(u: &Universe, mask: &[&str]) -> ObservedView {
        observe(u, &Observer::Mask(ids(mask.iter().copied()))).unwrap()
    }

    #[test]
    fn classify_applies_classifier() {
        let u = Universe::build(["a", "b", "c"], ["b", "c", "d"], false).unwrap();
        let view = view_of(&u, &["c", "d"]);
        let test = IntelligenceTest::new(
            "t",
            Observer::blind(),
            classifier(&[("c", INTELLIGENT), ("d", UNINTELLIGENT)]),
        );
        let a = classify_all(&test, &view, &LabelSpace::binary()).unwrap();
        assert_eq!(a.get(&"c".into()), Some(INTELLIGENT));
        assert_eq!(a.get(&"d".into()), Some(UNINTELLIGENT));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn classify_empty_domain() {
        let u = Universe::build(["a"], ["b"], false).unwrap();
        let view = view_of(&u, &[]);
        let test = IntelligenceTest::new("t", Observer::blind(), classifier(&[("b", INTELLIGENT)]));
        assert!(classify_all(&test, &view, &LabelSpace::binary())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn classify_not_total() {
        let u = Universe::build(["a", "b", "c"], ["b", "c", "d"], false).unwrap();
        let view = view_of(&u, &["c", "d"]);
        let test = IntelligenceTest::new("t", Observer::blind(), classifier(&[("c", INTELLIGENT)]));
        assert_eq!(
            classify_all(&test, &view, &LabelSpace::binary()).unwrap_err(),
            TestModelError::NotTotal(vec!["d".into()])
        );
    }

    #[test]
    fn classify_unknown_label() {
        let u = Universe::build(["a"], ["a"], false).unwrap();
        let view = view_of(&u, &["a"]);
        let test = IntelligenceTest::new("t", Observer::blind(), classifier(&[("a", "genius")]));
        assert_eq!(
            classify_all(&test, &view, &LabelSpace::binary()).unwrap_err(),
            TestModelError::UnknownLabel("genius".into())
        );
    }

    #[test]
    fn oracle_labels_imc_as_intelligent() {
        let u = Universe::build(["a", "b", "c"], ["b", "c", "d"], false).unwrap();
        let view = view_of(&u, &["b", "c", "d"]);
        let oracle = oracle_for(&u, &view, &LabelSpace::binary()).unwrap();
        assert_eq!(
            oracle.classifier,
            classifier(&[("b", INTELLIGENT), ("c", INTELLIGENT), ("d", UNINTELLIGENT)])
        );

        let nothing = Universe::build(Vec::<&str>::new(), ["d"], false).unwrap();
        let view = view_of(&nothing, &["d"]);
        let oracle = oracle_for(&nothing, &view, &LabelSpace::binary()).unwrap();
        assert_eq!(oracle.classifier, classifier(&[("d", UNINTELLIGENT)]));

        let mono = Universe::build(["a", "b", "c"], ["a", "b"], true).unwrap();
        let view = view_of(&mono, &[]);
        let oracle = oracle_for(&mono, &view, &LabelSpace::binary()).unwrap();
        assert!(oracle.classifier.values().all(|l| l == INTELLIGENT));
        assert_eq!(oracle.classifier.len(), 2);
    }

    #[test]
    fn oracle_uses_extreme_encodings() {
        let space = LabelSpace::graded(5).unwrap();
        let u = Universe::build(["a"], ["a", "b"], false).unwrap();
        let view = view_of(&u, &["a", "b"]);
        let oracle = oracle_for(&u, &view, &space).unwrap();
        assert_eq!(
            oracle.classifier,
            classifier(&[("a", "grade4"), ("b", "grade0")])
        );
    }

    #[test]
    fn oracle_needs_two_labels() {
        let space = LabelSpace::degenerate(Label::new("only", 0.0)).unwrap();
        let u = Universe::build(["a"], ["a"], false).unwrap();
        let view = view_of(&u, &["a"]);
        assert_eq!(
            oracle_for(&u, &view, &space).unwrap_err(),
            TestModelError::DegenerateSpace
        );
        let flat = LabelSpace::new(vec![Label::new("x", 1.0), Label::new("y", 1.0)]).unwrap();
        assert_eq!(
            oracle_for(&u, &view, &flat).unwrap_err(),
            TestModelError::DegenerateSpace
        );
    }

    #[test]
    fn distances() {
        let b = LabelSpace::binary();
        assert_eq!(label_distance(&b, INTELLIGENT, UNINTELLIGENT).unwrap(), 1.0);
        assert_eq!(label_distance(&b, INTELLIGENT, INTELLIGENT).unwrap(), 0.0);
        let g = LabelSpace::graded(5).unwrap();
        assert_eq!(label_distance(&g, "grade0", "grade4").unwrap(), 4.0);
        assert_eq!(
            label_distance(&g, "grade0", "grade9").unwrap_err(),
            TestModelError::UnknownLabel("grade9".into())
        );
    }

    #[test]
    fn space_validation() {
        assert_eq!(
            LabelSpace::new(vec![Label::new("a", 0.0)]).unwrap_err(),
            TestModelError::TooFewLabels
        );
        assert_eq!(
            LabelSpace::new(vec![Label::new("a", 0.0), Label::new("a", 1.0)]).unwrap_err(),
            TestModelError::DuplicateLabel("a".into())
        );
        assert!(LabelSpace::new(vec![Label::new("a", 0.0), Label::new("b", f64::NAN)]).is_err());
        assert_eq!(LabelSpace::binary().max_distance(), 1.0);
    }

    #[test]
    fn space_json_shape() {
        let json = serde_json::to_string(&LabelSpace::binary()).unwrap();
        assert_eq!(
            json,
            r#"[{"name":"unintelligent","encoding":0.0},{"name":"intelligent","encoding":1.0}]"#
        );
        let back: LabelSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, LabelSpace::binary());
        assert!(serde_json::from_str::<LabelSpace>(r#"[{"name":"a","encoding":1}]"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn distance_is_a_pseudometric(
            enc in proptest::collection::vec(-1e6f64..1e6, 3..8),
            i in 0usize..8, j in 0usize..8, k in 0usize..8,
        ) {
            let n = enc.len();
            let space = LabelSpace::new(
                enc.iter().enumerate().map(|(i, e)| Label::new(format!("l{i}"), *e)).collect(),
            ).unwrap();
            let (a, b, c) = (format!("l{}", i % n), format!("l{}", j % n), format!("l{}", k % n));
            let ab = label_distance(&space, &a, &b).unwrap();
            let ba = label_distance(&space, &b, &a).unwrap();
            let bc = label_distance(&space, &b, &c).unwrap();
            let ac = label_distance(&space, &a, &c).unwrap();
            proptest::prop_assert_eq!(ab, ba);
            proptest::prop_assert_eq!(label_distance(&space, &a, &a).unwrap(), 0.0);
            proptest::prop_assert!(ac <= ab + bc + 1e-9);
            proptest::prop_assert!(ab <= space.max_distance());
        }
    }
}
