//! Continuous truth/belief model: two circles whose radii grow with the
//! cardinality of truth and belief, closer together the more they share.
//! Knowledge is the area of their intersection.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::LearningMethod;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum VennError {
    #[error(
        "invalid configuration: radii must be finite and positive, distance finite and nonnegative"
    )]
    InvalidConfiguration,
    #[error("step would shrink a radius to {0}")]
    RadiusUnderflow(f64),
    #[error("step size must be finite and positive, got {0}")]
    InvalidDelta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVenn")]
pub struct VennConfiguration {
    r_truth: f64,
    r_belief: f64,
    d: f64,
}

#[derive(Deserialize)]
struct RawVenn {
    r_truth: f64,
    r_belief: f64,
    d: f64,
}

impl TryFrom<RawVenn> for VennConfiguration {
    type Error = VennError;

    fn try_from(raw: RawVenn) -> Result<Self, Self::Error> {
        Self::new(raw.r_truth, raw.r_belief, raw.d)
    }
}

impl VennConfiguration {
    pub fn new(r_truth: f64, r_belief: f64, d: f64) -> Result<Self, VennError> {
        let radius_ok = |r: f64| r.is_finite() && r > 0.0;
        if !radius_ok(r_truth) || !radius_ok(r_belief) || !(d.is_finite() && d >= 0.0) {
            return Err(VennError::InvalidConfiguration);
        }
        Ok(Self {
            r_truth,
            r_belief,
            d,
        })
    }

    pub fn r_truth(&self) -> f64 {
        self.r_truth
    }

    pub fn r_belief(&self) -> f64 {
        self.r_belief
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Exact area of the intersection of the truth and belief circles.
///
/// Computed as the sum of two circular segments cut by the common chord,
/// which stays accurate near both tangencies.
pub fn lens_area(v: &VennConfiguration) -> f64 {
    let (r1, r2, d) = (v.r_truth, v.r_belief, v.d);
    let r_min = r1.min(r2);
    let cap = PI * r_min * r_min;
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        return cap;
    }
    // Heron-style product, 16·(triangle area)², for sides d, r1, r2.
    let kite = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    let half_chord = kite.max(0.0).sqrt() / (2.0 * d);
    // signed distances from each center to the chord
    let x1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let x2 = d - x1;
    let area = segment(r1, half_chord.atan2(x1)) + segment(r2, half_chord.atan2(x2));
    area.clamp(0.0, cap)
}

/// Area of a circular segment with half-angle `theta`: `r²/2 · (φ − sin φ)`, `φ = 2θ`.
fn segment(r: f64, theta: f64) -> f64 {
    let phi = 2.0 * theta;
    let phi_minus_sin = if phi < 1e-2 {
        let p2 = phi * phi;
        phi * p2 / 6.0 * (1.0 - p2 / 20.0 * (1.0 - p2 / 42.0))
    } else {
        phi - phi.sin()
    };
    0.5 * r * r * phi_minus_sin
}

/// One learning step in the circle model.
///
/// * acquirement enlarges belief: `r_belief += delta`;
/// * filtering shrinks belief and pulls it toward truth: `r_belief −= delta`, `d −= delta` (floored at 0);
/// * specialization shrinks truth: `r_truth −= delta`.
pub fn venn_step(
    v: &VennConfiguration,
    method: LearningMethod,
    delta: f64,
) -> Result<VennConfiguration, VennError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(VennError::InvalidDelta(delta));
    }
    let mut next = *v;
    match method {
        LearningMethod::Acquirement => next.r_belief += delta,
        LearningMethod::Filtering => {
            next.r_belief -= delta;
            next.d = (next.d - delta).max(0.0);
        }
        LearningMethod::Specialization => next.r_truth -= delta,
    }
    for r in [next.r_truth, next.r_belief] {
        if r <= 0.0 {
            return Err(VennError::RadiusUnderflow(r));
        }
    }
    VennConfiguration::new(next.r_truth, next.r_belief, next.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(r_t: f64, r_b: f64, d: f64) -> VennConfiguration {
        VennConfiguration::new(r_t, r_b, d).unwrap()
    }

    /// Hit-or-miss estimate over the bounding box of the smaller circle.
    fn monte_carlo(v: &VennConfiguration, samples: usize, seed: u64) -> (f64, f64) {
        let (small_r, small_x) = if v.r_truth() <= v.r_belief() {
            (v.r_truth(), 0.0)
        } else {
            (v.r_belief(), v.d())
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0usize;
        for _ in 0..samples {
            let x = small_x + rng.gen_range(-small_r..small_r);
            let y = rng.gen_range(-small_r..small_r);
            let in_truth = x * x + y * y <= v.r_truth().powi(2);
            let in_belief = (x - v.d()).powi(2) + y * y <= v.r_belief().powi(2);
            if in_truth && in_belief {
                hits += 1;
            }
        }
        let box_area = 4.0 * small_r * small_r;
        let p = hits as f64 / samples as f64;
        (
            box_area * p,
            box_area * (p * (1.0 - p) / samples as f64).sqrt(),
        )
    }

    #[test]
    fn reference_lenses() {
        assert!((lens_area(&cfg(1.0, 1.0, 0.0)) - PI).abs() < 1e-12);
        assert_eq!(lens_area(&cfg(1.0, 1.0, 2.0)), 0.0);
        assert_eq!(lens_area(&cfg(1.0, 1.0, 3.5)), 0.0);
        let expected = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
        assert!((lens_area(&cfg(1.0, 1.0, 1.0)) - expected).abs() < 1e-9);
        assert!((expected - 1.228370).abs() < 1e-6);
        // contained circle
        assert!((lens_area(&cfg(3.0, 1.0, 1.5)) - PI).abs() < 1e-12);
    }

    #[test]
    fn unit_lens_matches_monte_carlo() {
        let v = cfg(1.0, 1.0, 1.0);
        let (est, se) = monte_carlo(&v, 1_000_000, 17);
        assert!((est - lens_area(&v)).abs() <= 3.0 * se, "{est} ± {se}");
    }

    #[test]
    fn monte_carlo_agreement_on_assorted_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..10 {
            let v = cfg(
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.0..3.0),
            );
            let (est, se) = monte_carlo(&v, 200_000, i);
            assert!(
                (est - lens_area(&v)).abs() <= 4.0 * se + 1e-12,
                "{v:?}: {est} ± {se}"
            );
        }
    }

    #[test]
    fn continuous_at_tangency() {
        for (r1, r2) in [(1.0, 1.0), (1.0, 0.5), (2.0, 3.0), (0.3, 1.7)] {
            let outer: f64 = r1 + r2;
            let inner: f64 = (r1 - r2).abs();
            for d in [outer, inner] {
                let at = lens_area(&cfg(r1, r2, d));
                for eps in [1e-12, -1e-12] {
                    let near = (d + eps).max(0.0);
                    let area = lens_area(&cfg(r1, r2, near));
                    assert!(
                        (area - at).abs() < 1e-9,
                        "r=({r1},{r2}) d={near}: {area} vs {at}"
                    );
                }
            }
        }
    }

    #[test]
    fn steps() {
        let v = cfg(1.0, 1.0, 1.0);
        assert_eq!(
            venn_step(&v, LearningMethod::Acquirement, 0.5).unwrap(),
            cfg(1.0, 1.5, 1.0)
        );
        assert_eq!(
            venn_step(&v, LearningMethod::Filtering, 0.5).unwrap(),
            cfg(1.0, 0.5, 0.5)
        );
        assert_eq!(
            venn_step(&v, LearningMethod::Specialization, 1.0).unwrap_err(),
            VennError::RadiusUnderflow(0.0)
        );
        let close = cfg(2.0, 1.0, 0.2);
        assert_eq!(
            venn_step(&close, LearningMethod::Filtering, 0.5)
                .unwrap()
                .d(),
            0.0
        );
        assert!(venn_step(&v, LearningMethod::Acquirement, 0.0).is_err());
        assert!(venn_step(&v, LearningMethod::Filtering, 1.0).is_err());
    }

    #[test]
    fn invalid_configurations() {
        assert!(VennConfiguration::new(0.0, 1.0, 1.0).is_err());
        assert!(VennConfiguration::new(1.0, -1.0, 1.0).is_err());
        assert!(VennConfiguration::new(1.0, 1.0, -0.1).is_err());
        assert!(VennConfiguration::new(1.0, f64::INFINITY, 1.0).is_err());
        assert!(
            serde_json::from_str::<VennConfiguration>(r#"{"r_truth":1,"r_belief":0,"d":1}"#)
                .is_err()
        );
        let ok: VennConfiguration =
            serde_json::from_str(r#"{"r_truth":1,"r_belief":2,"d":0.5}"#).unwrap();
        assert_eq!(ok, cfg(1.0, 2.0, 0.5));
    }

    proptest! {
        #[test]
        fn monotone_in_distance_and_radii(
            r1 in 0.05f64..5.0, r2 in 0.05f64..5.0,
            d1 in 0.0f64..10.0, d2 in 0.0f64..10.0, grow in 0.0f64..2.0,
        ) {
            let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let a_near = lens_area(&cfg(r1, r2, near));
            prop_assert!(a_near + 1e-12 >= lens_area(&cfg(r1, r2, far)));
            prop_assert!(lens_area(&cfg(r1 + grow, r2, near)) + 1e-12 >= a_near);
            prop_assert!(lens_area(&cfg(r1, r2 + grow, near)) + 1e-12 >= a_near);
            let cap = PI * r1.min(r2) * r1.min(r2);
            prop_assert!(a_near >= 0.0 && a_near <= cap);
        }
    }
}
