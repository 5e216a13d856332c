//! Collision probabilities of two independent scrambles of the same word.
//!
//! Two quantities live here and they are not the same number:
//!
//! * [`collision_probability`] is the closed form `(1 / (n-2)!)^2`. For an
//!   all-distinct interior this is the probability that both scrambles land
//!   on one particular arrangement fixed in advance (for instance, both
//!   leave the word untouched).
//! * [`agreement_probability`] is `1 / (n-2)!`, the probability that the two
//!   scrambles spell the same string, whatever it is. This is what
//!   [`enumerated_collision_rate`] and [`empirical_collision_rate`] measure.
//!
//! The two coincide only for `n = 3`. Repeated interior letters raise the
//! agreement probability further; [`enumerated_collision_rate`] gives the
//! exact value for any short word by walking every interior permutation.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::analysis::AnalysisError;
use crate::gra::{gra, PerturbConfig, DEFAULT_MIN_LENGTH};
use crate::rng::Stream;

pub type Exact = Ratio<BigUint>;

/// Longest interior [`enumerated_collision_rate`] will walk (10! orderings).
pub const MAX_ENUMERATED_INTERIOR: usize = 10;

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(1 / (n-2)!)^2` as an exact fraction.
pub fn collision_probability(n: usize) -> Result<Exact, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::LengthTooSmall(n));
    }
    let f = factorial(n - 2);
    Ok(Ratio::new(BigUint::one(), &f * &f))
}

/// `1 / (n-2)!`: chance that two scrambles of a word with an all-distinct
/// interior spell the same string.
pub fn agreement_probability(n: usize) -> Result<Exact, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::LengthTooSmall(n));
    }
    Ok(Ratio::new(BigUint::one(), factorial(n - 2)))
}

/// Exact pairwise collision probability of `word`, counting repeated interior
/// letters: `sum_s c(s)^2 / (m!)^2` where `c(s)` is the number of the `m!`
/// positional permutations that spell `s`.
pub fn enumerated_collision_rate(word: &str) -> Result<Exact, AnalysisError> {
    let chars: Vec<char> = word.chars().collect();
    if chars.len() < 3 {
        return Err(AnalysisError::LengthTooSmall(chars.len()));
    }
    let mut interior: Vec<char> = chars[1..chars.len() - 1].to_vec();
    if interior.len() > MAX_ENUMERATED_INTERIOR {
        return Err(AnalysisError::TooLongToEnumerate(chars.len()));
    }

    // Heap's algorithm, iterative form.
    let mut counts: HashMap<Vec<char>, u64> = HashMap::new();
    *counts.entry(interior.clone()).or_default() += 1;
    let m = interior.len();
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                interior.swap(0, i);
            } else {
                interior.swap(c[i], i);
            }
            *counts.entry(interior.clone()).or_default() += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let total = factorial(m);
    let hits: BigUint = counts.values().map(|&k| BigUint::from(k) * k).sum();
    Ok(Ratio::new(hits, &total * &total))
}

fn ratio_string<S: Serializer>(r: &Exact, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn opt_ratio_string<S: Serializer>(r: &Option<Exact>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn ratio_to_f64(r: &Exact) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
    num / den
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    pub n: usize,
    /// Closed-form value, which assumes an all-distinct interior.
    #[serde(serialize_with = "ratio_string")]
    pub exact: Exact,
    pub exact_decimal: f64,
    /// `1 / (n-2)!`, the agreement probability for an all-distinct interior.
    #[serde(serialize_with = "ratio_string")]
    pub agreement: Exact,
    pub agreement_decimal: f64,
    /// Exact value for this particular word, repeated letters included.
    #[serde(serialize_with = "opt_ratio_string", skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated_decimal: Option<f64>,
    /// Fraction of sampled pairs that spelled the same string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<f64>,
    /// Fraction of sampled pairs where both scrambles left the word as it was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_both_unchanged: Option<f64>,
    pub trials: u64,
}

impl CollisionResult {
    /// The closed form alone, without sampling.
    pub fn exact_only(n: usize) -> Result<Self, AnalysisError> {
        let exact = collision_probability(n)?;
        let agreement = agreement_probability(n)?;
        Ok(CollisionResult {
            word: None,
            n,
            exact_decimal: ratio_to_f64(&exact),
            exact,
            agreement_decimal: ratio_to_f64(&agreement),
            agreement,
            enumerated: None,
            enumerated_decimal: None,
            empirical: None,
            empirical_both_unchanged: None,
            trials: 0,
        })
    }
}

/// Draws `trials` independent pairs of scrambles of `word` and reports the
/// fraction that agree, next to the closed form and, for short enough words,
/// the enumerated exact value.
pub fn empirical_collision_rate(
    word: &str,
    trials: u64,
    stream: &mut Stream,
) -> Result<CollisionResult, AnalysisError> {
    let n = word.chars().count();
    if n < DEFAULT_MIN_LENGTH {
        return Err(AnalysisError::Ineligible(word.to_owned()));
    }
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let config = PerturbConfig::new(1.0, 1.0, 0).expect("constant config is valid");
    let mut hits = 0u64;
    let mut unchanged = 0u64;
    for _ in 0..trials {
        let a = gra(word, &config, stream).expect("length checked");
        let b = gra(word, &config, stream).expect("length checked");
        hits += u64::from(a == b);
        unchanged += u64::from(a == word && b == word);
    }
    let mut result = CollisionResult::exact_only(n)?;
    let enumerated = enumerated_collision_rate(word).ok();
    result.enumerated_decimal = enumerated.as_ref().map(ratio_to_f64);
    result.enumerated = enumerated;
    result.word = Some(word.to_owned());
    result.empirical = Some(hits as f64 / trials as f64);
    result.empirical_both_unchanged = Some(unchanged as f64 / trials as f64);
    result.trials = trials;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: u64, d: u64) -> Exact {
        Ratio::new(BigUint::from(n), BigUint::from(d))
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(collision_probability(3).unwrap(), frac(1, 1));
        assert_eq!(collision_probability(4).unwrap(), frac(1, 4));
        assert_eq!(collision_probability(5).unwrap(), frac(1, 36));
        assert_eq!(collision_probability(3).unwrap().to_string(), "1");
        assert_eq!(collision_probability(5).unwrap().to_string(), "1/36");
        assert_eq!(agreement_probability(5).unwrap(), frac(1, 6));
        assert_eq!(agreement_probability(3).unwrap(), collision_probability(3).unwrap());
        assert!(matches!(
            collision_probability(2),
            Err(AnalysisError::LengthTooSmall(2))
        ));
    }

    #[test]
    fn enumeration_sees_repeats() {
        assert_eq!(enumerated_collision_rate("seen").unwrap(), frac(1, 1));
        // two of the four (ordering, ordering) pairs spell the same string
        assert_eq!(enumerated_collision_rate("abcd").unwrap(), frac(1, 2));
        assert_eq!(enumerated_collision_rate("crane").unwrap(), agreement_probability(5).unwrap());
        // "tattoo": interior "atto" has 4!/2! = 12 spellings, each hit by 2
        // of the 24 orderings: 12 * 4 / 576 = 1/12
        assert_eq!(enumerated_collision_rate("tattoo").unwrap(), frac(1, 12));
        assert!(enumerated_collision_rate("abcdefghijklm").is_err());
    }

    #[test]
    fn repeated_word_always_collides() {
        let mut s = Stream::from_seed(0);
        let r = empirical_collision_rate("seen", 1000, &mut s).unwrap();
        assert_eq!(r.empirical, Some(1.0));
        assert_eq!(r.empirical_both_unchanged, Some(1.0));
        assert_eq!(r.exact, frac(1, 4));
        assert_eq!(r.enumerated, Some(frac(1, 1)));
    }

    #[test]
    fn ineligible_words_rejected() {
        let mut s = Stream::from_seed(0);
        assert!(matches!(
            empirical_collision_rate("cat", 10, &mut s),
            Err(AnalysisError::Ineligible(_))
        ));
        assert!(empirical_collision_rate("word", 0, &mut s).is_err());
    }

    #[test]
    fn json_shape() {
        let r = CollisionResult::exact_only(5).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["exact"], "1/36");
        assert_eq!(v["n"], 5);
        assert_eq!(v["agreement"], "1/6");
        assert!((v["exact_decimal"].as_f64().unwrap() - 1.0 / 36.0).abs() < 1e-15);
    }
}
