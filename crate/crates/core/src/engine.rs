//! Naive Bayes fit and inference over marginal tables.
//!
//! Priors are `n_C / N` and conditionals `(count + alpha) / (d_C + alpha * V)`,
//! with `n_C`, `N` and `d_C` chosen by a [`ClassTotalsPolicy`]. Inference runs in
//! log space; a zero factor forces the class score to exactly zero.
//!
//! [`NBModel::posterior_exact`] evaluates the same formulas in arbitrary
//! precision rationals straight from the raw counts and serves as the oracle
//! for the float path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::{
    resolve_class_totals, AttributeSchema, ClassLabelSet, ClassTotals, ClassTotalsPolicy, MarginalTable,
    MarginalTableSet, Profile, SmoothingConfig,
};

#[derive(Debug, Clone, PartialEq)]
pub struct NBModel {
    raw_counts: MarginalTableSet,
    policy: ClassTotalsPolicy,
    smoothing: SmoothingConfig,
    totals: ClassTotals,
    priors: Vec<f64>,
    /// `conditionals[attribute][value][class]`
    conditionals: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorResult {
    /// Normalized posteriors in class declaration order; all zero when undefined.
    pub per_class: Vec<f64>,
    pub predicted_index: usize,
    pub predicted: String,
    /// The maximum was shared by more than one class before tie-breaking.
    pub tie: bool,
    /// False when every class score is zero; `predicted` is then the first class.
    pub scores_defined: bool,
}

impl PosteriorResult {
    pub fn probability(&self) -> f64 {
        self.per_class[self.predicted_index]
    }
}

pub fn fit(tables: &MarginalTableSet, policy: &ClassTotalsPolicy, smoothing: SmoothingConfig) -> Result<NBModel> {
    NBModel::fit(tables, policy, smoothing)
}

impl NBModel {
    pub fn fit(tables: &MarginalTableSet, policy: &ClassTotalsPolicy, smoothing: SmoothingConfig) -> Result<Self> {
        let totals = resolve_class_totals(tables, policy)?;
        let classes = tables.classes();
        if totals.grand_total == 0 {
            return Err(Error::Fit {
                class: classes.labels.join("/"),
                context: "priors (grand total is 0)".into(),
            });
        }
        let n = totals.grand_total as f64;
        let priors: Vec<f64> = totals.class_totals.iter().map(|&c| c as f64 / n).collect();

        let alpha_num = *smoothing.alpha().numer() as u128;
        let alpha_den = *smoothing.alpha().denom() as u128;
        let alpha = smoothing.alpha_f64();
        let mut conditionals = Vec::with_capacity(tables.schema().len());
        for ((attr, table), denoms) in tables
            .schema()
            .attributes
            .iter()
            .zip(tables.tables())
            .zip(&totals.denominators)
        {
            let v = attr.values.len() as u128;
            for (c, &d) in denoms.iter().enumerate() {
                if d == 0 && smoothing.is_zero() {
                    return Err(Error::Fit {
                        class: classes.labels[c].clone(),
                        context: format!("attribute '{}'", attr.name),
                    });
                }
                // (count + a) / (d + a*V) must not exceed 1; compared over the common denominator.
                let denom_scaled = d as u128 * alpha_den + alpha_num * v;
                for (value, row) in attr.values.iter().zip(&table.counts) {
                    if row[c] as u128 * alpha_den + alpha_num > denom_scaled {
                        return Err(Error::Fit {
                            class: classes.labels[c].clone(),
                            context: format!(
                                "attribute '{}' value '{value}' (count {} exceeds class total {d})",
                                attr.name, row[c]
                            ),
                        });
                    }
                }
            }
            let denom: Vec<f64> = denoms.iter().map(|&d| d as f64 + alpha * v as f64).collect();
            let rows = table
                .counts
                .iter()
                .map(|row| row.iter().zip(&denom).map(|(&k, &d)| (k as f64 + alpha) / d).collect())
                .collect();
            conditionals.push(rows);
        }

        Ok(NBModel {
            raw_counts: tables.clone(),
            policy: policy.clone(),
            smoothing,
            totals,
            priors,
            conditionals,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        self.raw_counts.schema()
    }

    pub fn classes(&self) -> &ClassLabelSet {
        self.raw_counts.classes()
    }

    pub fn raw_counts(&self) -> &MarginalTableSet {
        &self.raw_counts
    }

    pub fn policy(&self) -> &ClassTotalsPolicy {
        &self.policy
    }

    pub fn smoothing(&self) -> SmoothingConfig {
        self.smoothing
    }

    pub fn class_totals(&self) -> &ClassTotals {
        &self.totals
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `P(value | class)` by indices.
    pub fn conditional(&self, attribute: usize, value: usize, class: usize) -> f64 {
        self.conditionals[attribute][value][class]
    }

    /// The full `[value][class]` conditional matrix of one attribute.
    pub fn conditional_table(&self, attribute: usize) -> &[Vec<f64>] {
        &self.conditionals[attribute]
    }

    /// Per-class log of `P(C) * prod P(x|C)`; `None` marks an exact zero.
    fn log_scores(&self, resolved: &[Option<usize>], with_prior: bool) -> Vec<Option<f64>> {
        (0..self.classes().len())
            .map(|c| {
                let mut acc = 0.0;
                if with_prior {
                    if self.priors[c] == 0.0 {
                        return None;
                    }
                    acc += self.priors[c].ln();
                }
                for (a, v) in resolved.iter().enumerate() {
                    if let Some(v) = *v {
                        let p = self.conditionals[a][v][c];
                        if p == 0.0 {
                            return None;
                        }
                        acc += p.ln();
                    }
                }
                Some(acc)
            })
            .collect()
    }

    /// `P(profile | C)` per class. Absent attributes contribute a factor of 1.
    pub fn likelihood(&self, profile: &Profile) -> Result<Vec<f64>> {
        let resolved = profile.resolve(self.schema())?;
        Ok(self
            .log_scores(&resolved, false)
            .into_iter()
            .map(|s| s.map_or(0.0, f64::exp))
            .collect())
    }

    /// Unnormalized `P(C) * P(profile | C)` per class.
    pub fn scores(&self, profile: &Profile) -> Result<Vec<f64>> {
        let resolved = profile.resolve(self.schema())?;
        Ok(self
            .log_scores(&resolved, true)
            .into_iter()
            .map(|s| s.map_or(0.0, f64::exp))
            .collect())
    }

    pub fn posterior(&self, profile: &Profile) -> Result<PosteriorResult> {
        let resolved = profile.resolve(self.schema())?;
        let logs = self.log_scores(&resolved, true);
        let k = logs.len();

        let max = logs.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Ok(PosteriorResult {
                per_class: vec![0.0; k],
                predicted_index: 0,
                predicted: self.classes().labels[0].clone(),
                tie: false,
                scores_defined: false,
            });
        }
        let numerators: Vec<f64> = logs.iter().map(|s| s.map_or(0.0, |l| (l - max).exp())).collect();
        let total: f64 = numerators.iter().sum();
        let per_class: Vec<f64> = numerators.iter().map(|n| n / total).collect();

        let winners: Vec<usize> = (0..k).filter(|&c| logs[c] == Some(max)).collect();
        let predicted_index = winners[0];
        Ok(PosteriorResult {
            per_class,
            predicted_index,
            predicted: self.classes().labels[predicted_index].clone(),
            tie: winners.len() > 1,
            scores_defined: true,
        })
    }

    /// Predicted label and its posterior, or `None` when the posterior is undefined.
    pub fn predict(&self, profile: &Profile) -> Result<Option<(String, f64)>> {
        let p = self.posterior(profile)?;
        Ok(p.scores_defined.then(|| {
            let prob = p.probability();
            (p.predicted, prob)
        }))
    }

    /// Exact unnormalized scores `P(C) * prod P(x|C)`, recomputed from raw counts.
    pub fn scores_exact(&self, profile: &Profile) -> Result<Vec<BigRational>> {
        let resolved = profile.resolve(self.schema())?;
        let alpha = self.smoothing.alpha_exact();
        let totals = resolve_class_totals(&self.raw_counts, &self.policy)?;
        let big = |n: u64| BigRational::from_integer(BigInt::from(n));
        let grand = big(totals.grand_total);

        let mut scores = Vec::with_capacity(self.classes().len());
        for c in 0..self.classes().len() {
            let mut s = big(totals.class_totals[c]) / &grand;
            for (a, v) in resolved.iter().enumerate() {
                let Some(v) = *v else { continue };
                let n_values = big(self.schema().attributes[a].values.len() as u64);
                let num = big(self.raw_counts.count(a, v, c)) + &alpha;
                let den = big(totals.denominators[a][c]) + &alpha * n_values;
                s *= num / den;
            }
            scores.push(s);
        }
        Ok(scores)
    }

    /// Exact posterior, or `None` when every score is zero.
    pub fn posterior_exact(&self, profile: &Profile) -> Result<Option<Vec<BigRational>>> {
        let scores = self.scores_exact(profile)?;
        let total: BigRational = scores.iter().fold(BigRational::zero(), |acc, s| acc + s);
        if total.is_zero() {
            return Ok(None);
        }
        Ok(Some(scores.into_iter().map(|s| s / &total).collect()))
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            schema: self.schema().clone(),
            classes: self.classes().clone(),
            counts: self.raw_counts.tables().to_vec(),
            policy: self.policy.clone(),
            alpha: self.smoothing,
        }
    }

    /// Serializes schema, counts, policy and alpha. Probabilities are not stored.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("model document serializes");
        s.push('\n');
        s
    }

    /// Loads a persisted model and refits it.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        doc.into_model()
    }
}

pub const MODEL_FORMAT: &str = "divpredict-model";
pub const MODEL_VERSION: u32 = 1;

/// On-disk model: everything needed to refit, nothing derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    pub schema: AttributeSchema,
    pub classes: ClassLabelSet,
    pub counts: Vec<MarginalTable>,
    pub policy: ClassTotalsPolicy,
    pub alpha: SmoothingConfig,
}

impl ModelDocument {
    pub fn into_model(self) -> Result<NBModel> {
        if self.format != MODEL_FORMAT || self.version != MODEL_VERSION {
            return Err(Error::parse(
                0,
                format!("unsupported model format '{}' version {}", self.format, self.version),
            ));
        }
        let tables = MarginalTableSet::new(self.schema, self.classes, self.counts)?;
        NBModel::fit(&tables, &self.policy, self.alpha)
    }
}

/// First `digits` fractional decimal digits of a non-negative rational, truncated.
pub fn decimal_prefix(value: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (value * BigRational::from_integer(scale.clone())).floor().to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    format!("{int}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Sum of a rational vector; exposed for normalization checks.
pub fn rational_sum(values: &[BigRational]) -> BigRational {
    values.iter().fold(BigRational::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::schema::Attribute;

    fn replication() -> NBModel {
        fixtures::replication_model()
    }

    fn full(m: &str, c: &str, s: &str) -> Profile {
        Profile::new().with("medium", m).with("caste", c).with("stream", s)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn replication_priors() {
        let m = replication();
        let expected = [190.0 / 600.0, 248.0 / 600.0, 91.0 / 600.0, 71.0 / 600.0];
        for (p, e) in m.priors().iter().zip(expected) {
            assert!(close(*p, e, 1e-15));
        }
        assert!(close(m.priors()[0], 0.316667, 1e-6));
        assert!(close(m.priors().iter().sum::<f64>(), 1.0, 1e-12));
    }

    #[test]
    fn conditional_english_given_first() {
        let m = replication();
        assert!(close(m.conditional(0, 0, 0), 100.0 / 190.0, 1e-15));
        assert!(close(m.conditional(0, 0, 0), 0.526316, 1e-6));
    }

    #[test]
    fn likelihood_examples() {
        let m = replication();
        let l = m.likelihood(&full("ENGLISH", "GEN", "BSc(Math)")).unwrap();
        let oracle = (100.0 / 190.0) * (100.0 / 190.0) * (54.0 / 190.0);
        assert!(close(l[0], oracle, 1e-15));
        assert!(close(l[0], 0.078729, 1e-6));

        assert_eq!(m.likelihood(&Profile::new()).unwrap(), vec![1.0; 4]);

        let l = m.likelihood(&Profile::new().with("caste", "GEN")).unwrap();
        assert!(close(l[1], 120.0 / 248.0, 1e-15));
    }

    #[test]
    fn partial_profile_posterior() {
        let m = replication();
        let p = m.posterior(&Profile::new().with("caste", "GEN")).unwrap();
        let expected = [100.0 / 300.0, 120.0 / 300.0, 34.0 / 300.0, 46.0 / 300.0];
        for (a, b) in p.per_class.iter().zip(expected) {
            assert!(close(*a, b, 1e-12));
        }
        assert_eq!(p.predicted, "II");
        assert!(!p.tie);
    }

    #[test]
    fn anomaly_cell_is_formula_faithful() {
        let m = replication();
        let p = m.posterior(&full("HINDI", "SC/ST", "BCom")).unwrap();
        assert_eq!(p.predicted, "II");
        assert!(close(p.probability(), 0.401031, 1e-5));
        assert!(close(p.per_class[3], 0.356153, 1e-5));
    }

    #[test]
    fn predict_bundled_cells() {
        let m = replication();
        let (label, prob) = m.predict(&full("ENGLISH", "SC/ST", "BSc(Bio)")).unwrap().unwrap();
        assert_eq!(label, "I");
        assert!(close(prob, 0.601875, 1e-5));
        let (label, prob) = m.predict(&full("HINDI", "SC/ST", "BSc(Math)")).unwrap().unwrap();
        assert_eq!(label, "I");
        assert!(close(prob, 0.373642, 1e-5));
    }

    #[test]
    fn identical_columns_tie_to_first_class() {
        let t = MarginalTableSet::new(
            AttributeSchema::new(vec![Attribute::new("a", ["x", "y"])]),
            ClassLabelSet::new(["p", "q"]),
            vec![MarginalTable {
                attribute: "a".into(),
                counts: vec![vec![3, 3], vec![1, 1]],
            }],
        )
        .unwrap();
        let m = NBModel::fit(&t, &ClassTotalsPolicy::reference("a"), SmoothingConfig::none()).unwrap();
        let p = m.posterior(&Profile::new().with("a", "y")).unwrap();
        assert!(p.tie);
        assert_eq!(p.predicted, "p");
        assert_eq!(p.probability(), 0.5);
    }

    #[test]
    fn single_class_model() {
        let t = MarginalTableSet::new(
            AttributeSchema::new(vec![Attribute::new("a", ["x", "y", "z"])]),
            ClassLabelSet::new(["only"]),
            vec![MarginalTable {
                attribute: "a".into(),
                counts: vec![vec![1], vec![3], vec![0]],
            }],
        )
        .unwrap();
        let m = NBModel::fit(&t, &ClassTotalsPolicy::per_attribute("a"), SmoothingConfig::none()).unwrap();
        assert_eq!(m.priors(), &[1.0]);
        assert_eq!(m.conditional_table(0), &[vec![0.25], vec![0.75], vec![0.0]]);
        let p = m.posterior(&Profile::new().with("a", "z")).unwrap();
        assert!(!p.scores_defined);
        assert_eq!(m.predict(&Profile::new().with("a", "z")).unwrap(), None);
        assert_eq!(m.posterior_exact(&Profile::new().with("a", "z")).unwrap(), None);
    }

    #[test]
    fn zero_denominator_is_a_fit_error() {
        let t = MarginalTableSet::new(
            AttributeSchema::new(vec![Attribute::new("a", ["x"]), Attribute::new("b", ["y"])]),
            ClassLabelSet::new(["p", "q"]),
            vec![
                MarginalTable {
                    attribute: "a".into(),
                    counts: vec![vec![2, 1]],
                },
                MarginalTable {
                    attribute: "b".into(),
                    counts: vec![vec![3, 0]],
                },
            ],
        )
        .unwrap();
        let err = NBModel::fit(&t, &ClassTotalsPolicy::per_attribute("a"), SmoothingConfig::none()).unwrap_err();
        assert_eq!(
            err,
            Error::Fit {
                class: "q".into(),
                context: "attribute 'b'".into()
            }
        );
        assert!(NBModel::fit(&t, &ClassTotalsPolicy::per_attribute("a"), SmoothingConfig::integer(1)).is_ok());
        // b's count 3 exceeds a's total 2 for class p
        let err = NBModel::fit(&t, &ClassTotalsPolicy::reference("a"), SmoothingConfig::none()).unwrap_err();
        assert!(err.to_string().contains("exceeds"));
    }

    #[test]
    fn exact_expansion_of_first_cell() {
        let m = replication();
        let exact = m.posterior_exact(&full("ENGLISH", "GEN", "BA(NC)")).unwrap().unwrap();
        assert!(decimal_prefix(&exact[1], 6).starts_with("0.549218"));
        let priors = m.posterior_exact(&Profile::new()).unwrap().unwrap();
        let n = |a: u32, b: u32| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(priors, vec![n(190, 600), n(248, 600), n(91, 600), n(71, 600)]);
        assert!(num_traits::One::is_one(&rational_sum(&priors)));
    }

    #[test]
    fn decimal_prefix_pads() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(1000));
        assert_eq!(decimal_prefix(&r, 6), "0.001000");
        let r = BigRational::new(BigInt::from(7), BigInt::from(2));
        assert_eq!(decimal_prefix(&r, 2), "3.50");
    }

    #[test]
    fn unknown_value_is_input_error() {
        let m = replication();
        let err = m.posterior(&Profile::new().with("stream", "MBA")).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(err.to_string().contains("MBA"));
    }

    #[test]
    fn large_alpha_flattens_conditionals() {
        // |P(x|C) - 1/V| = |count - d/V| / (d + alpha V), at most ~3e-8 for
        // these counts at alpha = 1e9, so 1e-9 needs alpha = 1e12.
        for (alpha, tol) in [(1_000_000_000u64, 1e-7), (1_000_000_000_000, 1e-9)] {
            let m = NBModel::fit(
                &fixtures::table1(),
                &ClassTotalsPolicy::reference("stream"),
                SmoothingConfig::integer(alpha),
            )
            .unwrap();
            for (a, attr) in m.schema().attributes.iter().enumerate() {
                let flat = 1.0 / attr.values.len() as f64;
                for row in m.conditional_table(a) {
                    for &p in row {
                        assert!(close(p, flat, tol), "alpha {alpha}: {p} vs {flat}");
                    }
                }
            }
        }
    }

    #[test]
    fn persistence_round_trip() {
        let m = NBModel::fit(
            &fixtures::table1(),
            &ClassTotalsPolicy::per_attribute("caste"),
            SmoothingConfig::new(1, 2).unwrap(),
        )
        .unwrap();
        let text = m.to_json();
        let back = NBModel::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), text);
        assert!(NBModel::from_json("{").is_err());
        let tampered = text.replace(MODEL_FORMAT, "other");
        assert!(NBModel::from_json(&tampered).is_err());
    }
}
