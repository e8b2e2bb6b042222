//! Deng-style grey relational analysis over aligned numeric series.
//!
//! The full run is a four-step composition: min-max normalization of every
//! series, absolute deviations of each comparative from the reference, grey
//! relational coefficients with a distinguishing coefficient `delta`, and the
//! per-series grade (the coefficient mean). Grades are ranked descending and
//! classified against fixed influence thresholds.
//!
//! Everything here is a pure function over immutable inputs; no shared state.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraError {
    /// All values equal: min-max normalization would divide by zero and a
    /// constant series carries no relational information.
    #[error("series '{0}' is degenerate (all values equal)")]
    DegenerateSeries(String),
    #[error("series '{name}' has length {actual}, expected {expected}")]
    LengthMismatch {
        name: String,
        expected: usize,
        actual: usize,
    },
    #[error("series '{0}' needs at least 2 points")]
    TooShort(String),
    #[error("series '{0}' contains a non-finite value")]
    NonFinite(String),
    #[error("no comparative series supplied")]
    NoComparatives,
    #[error("grade {0} outside (0, 1]")]
    GradeOutOfRange(f64),
    #[error("distinguishing coefficient {0} outside (0, 1]")]
    InvalidDelta(f64),
    #[error("influence thresholds must be strictly decreasing")]
    InvalidThresholds,
}

/// Normalization direction of a raw series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Larger raw values map toward 1.
    HigherBetter,
    /// Smaller raw values map toward 1.
    LowerBetter,
}

/// A named sequence of raw observations over the shared time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    pub name: String,
    pub values: Vec<f64>,
    pub direction: Direction,
}

impl RawSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>, direction: Direction) -> Self {
        Self {
            name: name.into(),
            values,
            direction,
        }
    }

    pub fn higher_better(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self::new(name, values, Direction::HigherBetter)
    }

    fn validate(&self) -> Result<(), GraError> {
        if self.values.len() < 2 {
            return Err(GraError::TooShort(self.name.clone()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(GraError::NonFinite(self.name.clone()));
        }
        Ok(())
    }
}

/// A series mapped onto [0, 1]; at least one value is 0 and one is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSeries {
    pub name: String,
    pub values: Vec<f64>,
}

/// Absolute deviations of each comparative from the reference, together with
/// the global extrema over all rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationMatrix {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    delta_min: f64,
    delta_max: f64,
}

impl DeviationMatrix {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn delta_min(&self) -> f64 {
        self.delta_min
    }

    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }
}

/// Grey relational coefficients, one row per comparative series.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CoefficientMatrix {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Tunables of the analysis: the distinguishing coefficient and the influence
/// class boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraConfig {
    /// Distinguishing coefficient, restricted to (0, 1]. At 0 the coefficient
    /// formula degenerates to 0/0 whenever a deviation ties the minimum.
    pub delta: f64,
    /// Influence class boundaries, strictly decreasing.
    pub thresholds: [f64; 4],
}

impl Default for GraConfig {
    fn default() -> Self {
        Self {
            delta: 0.5,
            thresholds: [0.9, 0.8, 0.7, 0.6],
        }
    }
}

impl GraConfig {
    pub fn with_delta(delta: f64) -> Result<Self, GraError> {
        let config = Self {
            delta,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), GraError> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(GraError::InvalidDelta(self.delta));
        }
        if !self.thresholds.windows(2).all(|w| w[0] > w[1]) {
            return Err(GraError::InvalidThresholds);
        }
        Ok(())
    }
}

/// Influence strength of a grade against the configured thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceClass {
    Marked,
    RelativelyMarked,
    Noticeable,
    Weak,
    Negligible,
}

impl InfluenceClass {
    /// Stable token used in machine-readable output.
    pub fn token(self) -> &'static str {
        match self {
            Self::Marked => "marked",
            Self::RelativelyMarked => "relatively_marked",
            Self::Noticeable => "noticeable",
            Self::Weak => "weak",
            Self::Negligible => "negligible",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Marked => "Marked",
            Self::RelativelyMarked => "Relatively marked",
            Self::Noticeable => "Noticeable",
            Self::Weak => "Weak",
            Self::Negligible => "Negligible",
        }
    }
}

impl std::str::FromStr for InfluenceClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "marked" => Ok(Self::Marked),
            "relatively_marked" => Ok(Self::RelativelyMarked),
            "noticeable" => Ok(Self::Noticeable),
            "weak" => Ok(Self::Weak),
            "negligible" => Ok(Self::Negligible),
            other => Err(format!("unknown influence class '{other}'")),
        }
    }
}

impl std::fmt::Display for InfluenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// One ranked comparative series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeResult {
    pub name: String,
    pub grade: f64,
    pub rank: usize,
    pub influence: InfluenceClass,
}

/// Min-max normalization onto [0, 1] honouring the series direction.
pub fn normalize(series: &RawSeries) -> Result<NormalizedSeries, GraError> {
    series.validate()?;
    let min = series.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = series
        .values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Err(GraError::DegenerateSeries(series.name.clone()));
    }
    let range = max - min;
    let values = series
        .values
        .iter()
        .map(|&x| match series.direction {
            Direction::HigherBetter => (x - min) / range,
            Direction::LowerBetter => (max - x) / range,
        })
        .collect();
    Ok(NormalizedSeries {
        name: series.name.clone(),
        values,
    })
}

/// Row i, column k holds |x0*(k) - xi*(k)|; the extrema are global over all
/// rows and columns.
pub fn deviation_matrix(
    reference: &NormalizedSeries,
    comparatives: &[NormalizedSeries],
) -> Result<DeviationMatrix, GraError> {
    if comparatives.is_empty() {
        return Err(GraError::NoComparatives);
    }
    let n = reference.values.len();
    let mut rows = Vec::with_capacity(comparatives.len());
    let mut names = Vec::with_capacity(comparatives.len());
    let mut delta_min = f64::INFINITY;
    let mut delta_max = f64::NEG_INFINITY;
    for series in comparatives {
        if series.values.len() != n {
            return Err(GraError::LengthMismatch {
                name: series.name.clone(),
                expected: n,
                actual: series.values.len(),
            });
        }
        let row: Vec<f64> = reference
            .values
            .iter()
            .zip(&series.values)
            .map(|(r, c)| (r - c).abs())
            .collect();
        for &d in &row {
            delta_min = delta_min.min(d);
            delta_max = delta_max.max(d);
        }
        names.push(series.name.clone());
        rows.push(row);
    }
    Ok(DeviationMatrix {
        names,
        rows,
        delta_min,
        delta_max,
    })
}

/// Coefficient (i, k) = (dmin + delta*dmax) / (d(i,k) + delta*dmax).
///
/// When the global maximum deviation is zero every comparative is identical
/// to the reference; the coefficient is defined as 1 everywhere, consistent
/// with the limit.
pub fn grey_coefficients(
    dev: &DeviationMatrix,
    config: &GraConfig,
) -> Result<CoefficientMatrix, GraError> {
    config.validate()?;
    let rows = if dev.delta_max == 0.0 {
        dev.rows
            .iter()
            .map(|row| vec![1.0; row.len()])
            .collect()
    } else {
        let numerator = dev.delta_min + config.delta * dev.delta_max;
        dev.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&d| numerator / (d + config.delta * dev.delta_max))
                    .collect()
            })
            .collect()
    };
    Ok(CoefficientMatrix {
        names: dev.names.clone(),
        rows,
    })
}

/// Grade of each comparative: the arithmetic mean of its coefficient row.
pub fn relational_grades(coeffs: &CoefficientMatrix) -> Vec<(String, f64)> {
    coeffs
        .names
        .iter()
        .zip(&coeffs.rows)
        .map(|(name, row)| {
            let grade = row.iter().sum::<f64>() / row.len() as f64;
            (name.clone(), grade)
        })
        .collect()
}

/// Classify a grade against the configured boundaries. The top three classes
/// are open below ("greater than"); the gap between the last two boundaries
/// is Weak, and anything under the final boundary is Negligible.
pub fn classify_influence(grade: f64, config: &GraConfig) -> Result<InfluenceClass, GraError> {
    config.validate()?;
    if !(grade > 0.0 && grade <= 1.0) {
        return Err(GraError::GradeOutOfRange(grade));
    }
    let [marked, relatively, noticeable, weak] = config.thresholds;
    Ok(if grade > marked {
        InfluenceClass::Marked
    } else if grade > relatively {
        InfluenceClass::RelativelyMarked
    } else if grade > noticeable {
        InfluenceClass::Noticeable
    } else if grade >= weak {
        InfluenceClass::Weak
    } else {
        InfluenceClass::Negligible
    })
}

/// Sort descending by grade (stable: ties keep input order) and assign
/// 1-based consecutive ranks.
pub fn rank(
    grades: Vec<(String, f64)>,
    config: &GraConfig,
) -> Result<Vec<GradeResult>, GraError> {
    let mut sorted = grades;
    sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, (name, grade))| {
            Ok(GradeResult {
                influence: classify_influence(grade, config)?,
                name,
                grade,
                rank: i + 1,
            })
        })
        .collect()
}

/// The full analysis: normalize, deviations, coefficients, grades, rank.
pub fn run_gra(
    reference: &RawSeries,
    comparatives: &[RawSeries],
    config: &GraConfig,
) -> Result<Vec<GradeResult>, GraError> {
    config.validate()?;
    let reference = normalize(reference)?;
    let comparatives = comparatives
        .iter()
        .map(normalize)
        .collect::<Result<Vec<_>, _>>()?;
    let dev = deviation_matrix(&reference, &comparatives)?;
    let coeffs = grey_coefficients(&dev, config)?;
    rank(relational_grades(&coeffs), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(name: &str, values: &[f64]) -> RawSeries {
        RawSeries::higher_better(name, values.to_vec())
    }

    #[test]
    fn normalize_higher_better() {
        let n = normalize(&series("x", &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(n.values, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn normalize_lower_better_mirrors() {
        let n = normalize(&RawSeries::new(
            "x",
            vec![3.0, 2.0, 1.0],
            Direction::LowerBetter,
        ))
        .unwrap();
        assert_eq!(n.values, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn normalize_rejects_constant_series() {
        let err = normalize(&series("flat", &[5.0, 5.0, 5.0])).unwrap_err();
        assert_eq!(err, GraError::DegenerateSeries("flat".into()));
    }

    #[test]
    fn normalize_rejects_short_and_nonfinite() {
        assert_eq!(
            normalize(&series("s", &[1.0])).unwrap_err(),
            GraError::TooShort("s".into())
        );
        assert_eq!(
            normalize(&series("n", &[1.0, f64::NAN])).unwrap_err(),
            GraError::NonFinite("n".into())
        );
    }

    #[test]
    fn deviations_worked_example() {
        let r = NormalizedSeries {
            name: "ref".into(),
            values: vec![0.0, 0.5, 1.0],
        };
        let c = NormalizedSeries {
            name: "c".into(),
            values: vec![1.0, 0.5, 0.0],
        };
        let dev = deviation_matrix(&r, &[c]).unwrap();
        assert_eq!(dev.rows(), &[vec![1.0, 0.0, 1.0]]);
        assert_eq!(dev.delta_min(), 0.0);
        assert_eq!(dev.delta_max(), 1.0);
    }

    #[test]
    fn identical_comparative_gives_zero_row() {
        let r = NormalizedSeries {
            name: "ref".into(),
            values: vec![0.0, 0.5, 1.0],
        };
        let dev = deviation_matrix(&r, &[r.clone()]).unwrap();
        assert_eq!(dev.rows(), &[vec![0.0, 0.0, 0.0]]);
    }

    #[test]
    fn deviations_length_mismatch() {
        let r = NormalizedSeries {
            name: "ref".into(),
            values: vec![0.0, 0.5, 1.0],
        };
        let c = NormalizedSeries {
            name: "short".into(),
            values: vec![0.0, 0.5, 1.0, 0.2],
        };
        assert_eq!(
            deviation_matrix(&r, &[c]).unwrap_err(),
            GraError::LengthMismatch {
                name: "short".into(),
                expected: 3,
                actual: 4
            }
        );
    }

    #[test]
    fn coefficients_worked_example() {
        let dev = DeviationMatrix {
            names: vec!["a".into()],
            rows: vec![vec![1.0, 0.0, 1.0]],
            delta_min: 0.0,
            delta_max: 1.0,
        };
        let coeffs = grey_coefficients(&dev, &GraConfig::default()).unwrap();
        let row = &coeffs.rows()[0];
        assert!((row[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(row[1], 1.0);
        assert!((row[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn coefficients_all_one_when_deviation_free() {
        let dev = DeviationMatrix {
            names: vec!["a".into()],
            rows: vec![vec![0.0, 0.0]],
            delta_min: 0.0,
            delta_max: 0.0,
        };
        let coeffs = grey_coefficients(&dev, &GraConfig::default()).unwrap();
        assert_eq!(coeffs.rows(), &[vec![1.0, 1.0]]);
    }

    #[test]
    fn grades_worked_example() {
        let coeffs = CoefficientMatrix {
            names: vec!["a".into(), "b".into()],
            rows: vec![vec![1.0 / 3.0, 1.0, 1.0 / 3.0], vec![1.0, 1.0, 1.0]],
        };
        let grades = relational_grades(&coeffs);
        assert!((grades[0].1 - 5.0 / 9.0).abs() < 1e-12);
        assert_eq!(grades[1].1, 1.0);
    }

    #[test]
    fn classify_boundaries() {
        let c = GraConfig::default();
        assert_eq!(
            classify_influence(0.970055, &c).unwrap(),
            InfluenceClass::Marked
        );
        assert_eq!(
            classify_influence(0.9, &c).unwrap(),
            InfluenceClass::RelativelyMarked
        );
        assert_eq!(
            classify_influence(0.75, &c).unwrap(),
            InfluenceClass::Noticeable
        );
        // [0.6, 0.7] is the class the thresholds leave unnamed; see Weak.
        assert_eq!(classify_influence(0.7, &c).unwrap(), InfluenceClass::Weak);
        assert_eq!(classify_influence(0.65, &c).unwrap(), InfluenceClass::Weak);
        assert_eq!(classify_influence(0.6, &c).unwrap(), InfluenceClass::Weak);
        assert_eq!(
            classify_influence(0.55, &c).unwrap(),
            InfluenceClass::Negligible
        );
        assert_eq!(classify_influence(1.0, &c).unwrap(), InfluenceClass::Marked);
        assert!(classify_influence(0.0, &c).is_err());
        assert!(classify_influence(1.0 + 1e-9, &c).is_err());
    }

    #[test]
    fn rank_is_stable_on_ties() {
        let c = GraConfig::default();
        let ranked = rank(vec![("a".into(), 0.9), ("b".into(), 0.9)], &c).unwrap();
        assert_eq!(ranked[0].name, "a");
        assert_eq!(ranked[0].rank, 1);
        assert_eq!(ranked[1].name, "b");
        assert_eq!(ranked[1].rank, 2);
    }

    #[test]
    fn rank_sorts_descending() {
        let c = GraConfig::default();
        let ranked = rank(vec![("b".into(), 0.93), ("a".into(), 0.97)], &c).unwrap();
        assert_eq!(ranked[0].name, "a");
        assert_eq!(ranked[1].name, "b");
        assert_eq!(ranked.iter().map(|r| r.rank).collect::<Vec<_>>(), [1, 2]);
    }

    #[test]
    fn run_gra_worked_example() {
        let reference = series("ref", &[1.0, 2.0, 3.0]);
        let comps = vec![series("A", &[3.0, 2.0, 1.0]), series("B", &[1.0, 2.0, 3.0])];
        let results = run_gra(&reference, &comps, &GraConfig::default()).unwrap();
        assert_eq!(results[0].name, "B");
        assert_eq!(results[0].grade, 1.0);
        assert_eq!(results[0].rank, 1);
        assert_eq!(results[1].name, "A");
        assert!((results[1].grade - 5.0 / 9.0).abs() < 1e-12);
        assert_eq!(results[1].rank, 2);
    }

    #[test]
    fn run_gra_self_relation_is_exactly_one() {
        let x = series("x", &[4.0, 1.0, 7.0, 2.0]);
        let results = run_gra(&x, &[x.clone()], &GraConfig::default()).unwrap();
        assert_eq!(results[0].grade, 1.0);
        assert_eq!(results[0].rank, 1);
    }

    #[test]
    fn run_gra_names_degenerate_comparative() {
        let reference = series("ref", &[1.0, 2.0, 3.0]);
        let err = run_gra(
            &reference,
            &[series("A", &[5.0, 5.0, 5.0])],
            &GraConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, GraError::DegenerateSeries("A".into()));
    }

    #[test]
    fn delta_zero_is_rejected() {
        assert!(GraConfig::with_delta(0.0).is_err());
        assert!(GraConfig::with_delta(1.0).is_ok());
        assert!(GraConfig::with_delta(1.1).is_err());
    }

    prop_compose! {
        fn arb_values(n: usize)(values in prop::collection::vec(-1e6..1e6f64, n)) -> Vec<f64> {
            values
        }
    }

    fn non_constant(values: &[f64]) -> bool {
        values.iter().any(|v| v != &values[0])
    }

    proptest! {
        #[test]
        fn coefficients_bounded_and_one_iff_min(
            n in 2usize..12,
            seed_rows in prop::collection::vec(prop::collection::vec(-1e3..1e3f64, 12), 1..5)
        ) {
            let rows: Vec<Vec<f64>> = seed_rows.iter().map(|r| r[..n].iter().map(|v| v.abs()).collect()).collect();
            let delta_min = rows.iter().flatten().copied().fold(f64::INFINITY, f64::min);
            let delta_max = rows.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
            let dev = DeviationMatrix {
                names: (0..rows.len()).map(|i| format!("s{i}")).collect(),
                rows: rows.clone(),
                delta_min,
                delta_max,
            };
            let coeffs = grey_coefficients(&dev, &GraConfig::default()).unwrap();
            for (row, dev_row) in coeffs.rows().iter().zip(&rows) {
                for (&c, &d) in row.iter().zip(dev_row) {
                    prop_assert!(c > 0.0 && c <= 1.0);
                    if delta_max > 0.0 {
                        prop_assert_eq!(c == 1.0, d == delta_min);
                    } else {
                        prop_assert_eq!(c, 1.0);
                    }
                }
            }
        }

        #[test]
        fn grades_invariant_under_shared_permutation(
            reference in arb_values(8),
            comp_a in arb_values(8),
            comp_b in arb_values(8),
            perm_seed in 0u64..1000
        ) {
            prop_assume!(non_constant(&reference) && non_constant(&comp_a) && non_constant(&comp_b));
            let config = GraConfig::default();
            let base = run_gra(
                &series("ref", &reference),
                &[series("a", &comp_a), series("b", &comp_b)],
                &config,
            ).unwrap();

            // One shared index permutation applied to every series.
            let mut order: Vec<usize> = (0..8).collect();
            let mut state = perm_seed.wrapping_add(1);
            for i in (1..8).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                order.swap(i, j);
            }
            let apply = |v: &[f64]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
            let permuted = run_gra(
                &series("ref", &apply(&reference)),
                &[series("a", &apply(&comp_a)), series("b", &apply(&comp_b))],
                &config,
            ).unwrap();

            for (x, y) in base.iter().zip(&permuted) {
                prop_assert_eq!(&x.name, &y.name);
                prop_assert!((x.grade - y.grade).abs() <= 1e-12);
            }
        }

        #[test]
        fn grades_invariant_under_affine_map(
            reference in arb_values(6),
            comp in arb_values(6),
            a in 0.1f64..10.0,
            b in -1e3f64..1e3,
        ) {
            prop_assume!(non_constant(&reference) && non_constant(&comp));
            let config = GraConfig::default();
            let base = run_gra(&series("ref", &reference), &[series("c", &comp)], &config).unwrap();
            let scaled: Vec<f64> = comp.iter().map(|v| a * v + b).collect();
            let mapped = run_gra(&series("ref", &reference), &[series("c", &scaled)], &config).unwrap();
            prop_assert!((base[0].grade - mapped[0].grade).abs() <= 1e-9);
        }

        #[test]
        fn grades_weakly_increase_with_delta(
            reference in arb_values(6),
            comp_a in arb_values(6),
            comp_b in arb_values(6),
        ) {
            prop_assume!(non_constant(&reference) && non_constant(&comp_a) && non_constant(&comp_b));
            let mut previous: Option<Vec<f64>> = None;
            for delta in [0.1, 0.3, 0.5, 0.7, 0.9] {
                let config = GraConfig::with_delta(delta).unwrap();
                let mut results = run_gra(
                    &series("ref", &reference),
                    &[series("a", &comp_a), series("b", &comp_b)],
                    &config,
                ).unwrap();
                results.sort_by(|x, y| x.name.cmp(&y.name));
                let grades: Vec<f64> = results.iter().map(|r| r.grade).collect();
                if let Some(prev) = &previous {
                    for (lo, hi) in prev.iter().zip(&grades) {
                        prop_assert!(hi >= lo);
                    }
                }
                previous = Some(grades);
            }
        }

        #[test]
        fn deviation_extrema_bound_every_entry(
            reference in arb_values(7),
            comp in arb_values(7),
        ) {
            prop_assume!(non_constant(&reference) && non_constant(&comp));
            let r = normalize(&series("ref", &reference)).unwrap();
            let c = normalize(&series("c", &comp)).unwrap();
            let dev = deviation_matrix(&r, &[c]).unwrap();
            for row in dev.rows() {
                for &d in row {
                    prop_assert!(dev.delta_min() <= d && d <= dev.delta_max());
                }
            }
        }
    }
}
