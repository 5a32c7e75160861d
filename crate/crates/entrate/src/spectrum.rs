//! Schmidt spectra and their tensor algebra, kept exact throughout.
//!
//! A bipartite pure state enters this crate as its Schmidt spectrum: the
//! descending vector of squared Schmidt coefficients, a probability vector.
//! [`SchmidtSpectrum`] is the validated dense form; [`GroupedSpectrum`] is
//! the compressed (value, multiplicity) form that makes tensor powers
//! tractable. The m-th power of a spectrum with d distinct values has at
//! most C(m+d-1, d-1) groups, polynomial in m, while its expanded dimension
//! grows exponentially. All arithmetic here is exact rational; nothing in
//! this module rounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, parse_rational, ratio_from_biguint, Rational};
use crate::{Error, Result};

/// A validated Schmidt spectrum: positive rationals, sorted descending,
/// summing exactly to one. Zero entries are stripped at construction, so the
/// length is the Schmidt rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchmidtSpectrum {
    probs: Vec<Rational>,
}

impl SchmidtSpectrum {
    /// Validates and sorts a probability vector. Zeros are dropped;
    /// negative entries and vectors not summing exactly to one are rejected.
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if let Some(neg) = probs.iter().find(|p| *p < &Rational::zero()) {
            return Err(Error::NegativeEntry(format_rational(neg)));
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::SumNotOne {
                sum: format_rational(&sum),
                deficit: format_rational(&(Rational::one() - &sum)),
            });
        }
        let mut probs: Vec<Rational> = probs.into_iter().filter(|p| !p.is_zero()).collect();
        probs.sort_unstable_by(|x, y| y.cmp(x));
        Ok(Self { probs })
    }

    /// The descending probability entries.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Schmidt rank: the number of nonzero coefficients.
    pub fn dimension(&self) -> usize {
        self.probs.len()
    }

    /// A state is entangled exactly when it has at least two Schmidt
    /// coefficients.
    pub fn is_entangled(&self) -> bool {
        self.probs.len() >= 2
    }

    /// Compresses equal values into (value, multiplicity) groups.
    pub fn to_grouped(&self) -> GroupedSpectrum {
        let mut groups: Vec<(Rational, BigUint)> = Vec::new();
        for p in &self.probs {
            match groups.last_mut() {
                Some((v, m)) if v == p => *m += 1u32,
                _ => groups.push((p.clone(), BigUint::one())),
            }
        }
        GroupedSpectrum { groups }
    }
}

impl fmt::Display for SchmidtSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.probs {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(p))?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for SchmidtSpectrum {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.probs.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for SchmidtSpectrum {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<String>::deserialize(de)?;
        parse_spectrum(&entries).map_err(de::Error::custom)
    }
}

/// Parses spectrum entries given as exact strings: fractions ("2/5"),
/// integers ("1"), or decimal literals ("0.36", read exactly as 36/100).
/// Input that does not sum exactly to one is rejected, never renormalized.
pub fn parse_spectrum<S: AsRef<str>>(entries: &[S]) -> Result<SchmidtSpectrum> {
    if entries.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let probs = entries
        .iter()
        .map(|e| parse_rational(e.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    SchmidtSpectrum::new(probs)
}

/// A Schmidt spectrum in compressed form: strictly decreasing values with
/// arbitrary-precision multiplicities, total mass exactly one. This is the
/// working representation for tensor powers, whose expanded dimension is
/// astronomical but whose distinct-value count stays small.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedSpectrum {
    groups: Vec<(Rational, BigUint)>,
}

impl GroupedSpectrum {
    /// Builds a grouped spectrum from (value, multiplicity) pairs in any
    /// order. Zero values and zero multiplicities are dropped, duplicates
    /// merged; negative values and total mass different from one are
    /// rejected.
    pub fn new(pairs: Vec<(Rational, BigUint)>) -> Result<Self> {
        let mut acc: BTreeMap<Rational, BigUint> = BTreeMap::new();
        let mut sum = Rational::zero();
        for (v, m) in pairs {
            if v < Rational::zero() {
                return Err(Error::NegativeEntry(format_rational(&v)));
            }
            if v.is_zero() || m.is_zero() {
                continue;
            }
            sum += &v * ratio_from_biguint(&m);
            acc.entry(v).and_modify(|e| *e += &m).or_insert(m);
        }
        if acc.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if !sum.is_one() {
            return Err(Error::SumNotOne {
                sum: format_rational(&sum),
                deficit: format_rational(&(Rational::one() - &sum)),
            });
        }
        Ok(Self {
            groups: acc.into_iter().rev().collect(),
        })
    }

    /// The maximally entangled k-level spectrum (1/k, ..., 1/k).
    pub fn uniform(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptySpectrum);
        }
        Ok(Self {
            groups: vec![(Rational::new(1.into(), k.into()), BigUint::from(k))],
        })
    }

    /// The (value, multiplicity) groups, values strictly decreasing.
    pub fn groups(&self) -> &[(Rational, BigUint)] {
        &self.groups
    }

    /// Number of distinct values.
    pub fn distinct_values(&self) -> usize {
        self.groups.len()
    }

    /// Expanded dimension: the sum of all multiplicities.
    pub fn total_dimension(&self) -> BigUint {
        self.groups.iter().map(|(_, m)| m).sum()
    }

    /// True when the expanded dimension is at least two.
    pub fn is_entangled(&self) -> bool {
        self.groups.len() > 1 || self.groups[0].1 > BigUint::one()
    }

    /// The largest Schmidt coefficient, conventionally written alpha_1.
    pub fn largest_value(&self) -> &Rational {
        &self.groups[0].0
    }

    /// Total mass, exactly. Always one for spectra built through the public
    /// constructors; exposed so tests can assert the invariant after algebra.
    pub fn total_mass(&self) -> Rational {
        self.groups
            .iter()
            .map(|(v, m)| v * ratio_from_biguint(m))
            .sum()
    }

    /// Tensor product: all pairwise value products, multiplicities
    /// multiplied, equal values merged.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Rational, BigUint> = BTreeMap::new();
        for (va, ma) in &self.groups {
            for (vb, mb) in &other.groups {
                let v = va * vb;
                let m = ma * mb;
                acc.entry(v).and_modify(|e| *e += &m).or_insert(m);
            }
        }
        Self {
            groups: acc.into_iter().rev().collect(),
        }
    }

    /// m-th tensor power by binary exponentiation, merging at every step.
    pub fn power(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroPower);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = m;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.tensor(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.tensor(&base);
        }
        Ok(result.expect("m >= 1 sets at least one bit"))
    }
}

impl fmt::Display for GroupedSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, m) in &self.groups {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "({})x{}", format_rational(v), m)?;
            first = false;
        }
        Ok(())
    }
}

impl From<&SchmidtSpectrum> for GroupedSpectrum {
    fn from(s: &SchmidtSpectrum) -> Self {
        s.to_grouped()
    }
}

/// Compresses a dense spectrum into grouped form. Free-function form of
/// [`SchmidtSpectrum::to_grouped`].
pub fn to_grouped(s: &SchmidtSpectrum) -> GroupedSpectrum {
    s.to_grouped()
}

/// Tensor product of two grouped spectra. Free-function form of
/// [`GroupedSpectrum::tensor`].
pub fn tensor_product(a: &GroupedSpectrum, b: &GroupedSpectrum) -> GroupedSpectrum {
    a.tensor(b)
}

/// m-th tensor power of a grouped spectrum. Free-function form of
/// [`GroupedSpectrum::power`].
pub fn tensor_power(a: &GroupedSpectrum, m: u32) -> Result<GroupedSpectrum> {
    a.power(m)
}

/// The largest Schmidt coefficient of a grouped spectrum.
pub fn largest_value(a: &GroupedSpectrum) -> &Rational {
    a.largest_value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn grouped(entries: &[&str]) -> GroupedSpectrum {
        parse_spectrum(entries).unwrap().to_grouped()
    }

    fn binom(n: u32, k: u32) -> BigUint {
        let mut acc = BigUint::one();
        for i in 0..k {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        acc
    }

    #[test]
    fn parses_decimal_spectrum() {
        let s = parse_spectrum(&["0.5", "0.25", "0.25"]).unwrap();
        assert_eq!(s.probs(), &[rat("1/2"), rat("1/4"), rat("1/4")]);
        assert_eq!(s.dimension(), 3);
    }

    #[test]
    fn accepts_product_state() {
        let s = parse_spectrum(&["1"]).unwrap();
        assert_eq!(s.dimension(), 1);
        assert!(!s.is_entangled());
    }

    #[test]
    fn rejects_bad_sum_with_exact_deficit() {
        match parse_spectrum(&["0.4", "0.7"]) {
            Err(Error::SumNotOne { sum, deficit }) => {
                assert_eq!(sum, "11/10");
                assert_eq!(deficit, "-1/10");
            }
            other => panic!("expected SumNotOne, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_and_empty() {
        assert!(matches!(
            parse_spectrum(&["-0.1", "1.1"]),
            Err(Error::NegativeEntry(_))
        ));
        let none: &[&str] = &[];
        assert!(matches!(parse_spectrum(none), Err(Error::EmptySpectrum)));
    }

    #[test]
    fn strips_zeros_and_sorts() {
        let s = parse_spectrum(&["0.25", "0", "0.5", "0.25"]).unwrap();
        assert_eq!(s.probs(), &[rat("1/2"), rat("1/4"), rat("1/4")]);
    }

    #[test]
    fn grouping_merges_duplicates() {
        let g = grouped(&["0.4", "0.4", "0.2"]);
        assert_eq!(
            g.groups(),
            &[
                (rat("2/5"), BigUint::from(2u32)),
                (rat("1/5"), BigUint::one())
            ]
        );
        let g = grouped(&["1/2", "1/4", "1/4"]);
        assert_eq!(
            g.groups(),
            &[
                (rat("1/2"), BigUint::one()),
                (rat("1/4"), BigUint::from(2u32))
            ]
        );
        let g = grouped(&["1/3", "1/3", "1/3"]);
        assert_eq!(g.groups(), &[(rat("1/3"), BigUint::from(3u32))]);
    }

    #[test]
    fn grouped_round_trip_expansion() {
        let s = parse_spectrum(&["0.4", "0.36", "0.14", "0.1"]).unwrap();
        let g = s.to_grouped();
        let mut expanded = Vec::new();
        for (v, m) in g.groups() {
            let mut left = m.clone();
            while !left.is_zero() {
                expanded.push(v.clone());
                left -= 1u32;
            }
        }
        assert_eq!(expanded, s.probs());
    }

    #[test]
    fn tensor_with_point_mass_is_identity() {
        let x = grouped(&["0.5", "0.3", "0.2"]);
        let one = grouped(&["1"]);
        assert_eq!(one.tensor(&x), x);
        assert_eq!(x.tensor(&one), x);
    }

    #[test]
    fn tensor_of_uniforms_is_uniform() {
        let half = GroupedSpectrum::uniform(2).unwrap();
        assert_eq!(half.tensor(&half), GroupedSpectrum::uniform(4).unwrap());
    }

    #[test]
    fn tensor_square_matches_hand_enumeration() {
        // (2/5, 2/5, 1/5) squared: nine products merged into three groups.
        let g = grouped(&["0.4", "0.4", "0.2"]);
        let sq = g.tensor(&g);
        assert_eq!(
            sq.groups(),
            &[
                (rat("4/25"), BigUint::from(4u32)),
                (rat("2/25"), BigUint::from(4u32)),
                (rat("1/25"), BigUint::one()),
            ]
        );
        assert!(sq.total_mass().is_one());
    }

    #[test]
    fn power_one_is_identity() {
        let g = grouped(&["0.5", "0.25", "0.25"]);
        assert_eq!(g.power(1).unwrap(), g);
    }

    #[test]
    fn power_zero_rejected() {
        let g = grouped(&["0.5", "0.5"]);
        assert!(matches!(g.power(0), Err(Error::ZeroPower)));
    }

    #[test]
    fn power_hundred_has_multinomial_structure() {
        // (2/5 x2, 1/5 x1)^100: picking the 1/5 entry c times gives value
        // 2^(100-c)/5^100 with multiplicity C(100,c) * 2^(100-c).
        let g = grouped(&["0.4", "0.4", "0.2"]);
        let p = g.power(100).unwrap();
        assert_eq!(p.distinct_values(), 101);
        let five_100 = BigUint::from(5u32).pow(100);
        for (c, (v, m)) in p.groups().iter().enumerate() {
            let c = c as u32;
            let two_pow = BigUint::from(2u32).pow(100 - c);
            assert_eq!(
                v,
                &Rational::new(two_pow.clone().into(), five_100.clone().into())
            );
            assert_eq!(m, &(binom(100, c) * two_pow));
        }
        assert!(p.total_mass().is_one());
        assert_eq!(p.total_dimension(), BigUint::from(3u32).pow(100));
    }

    #[test]
    fn power_three_matches_full_expansion() {
        let g = grouped(&["0.5", "0.25", "0.25"]);
        let cube = g.power(3).unwrap();
        let expect = [
            ("1/8", 1u32),
            ("1/16", 6),
            ("1/32", 12),
            ("1/64", 8),
        ];
        assert_eq!(cube.distinct_values(), expect.len());
        for ((v, m), (ev, em)) in cube.groups().iter().zip(expect) {
            assert_eq!(v, &rat(ev));
            assert_eq!(m, &BigUint::from(em));
        }
    }

    #[test]
    fn power_splits_add() {
        let g = grouped(&["0.4", "0.36", "0.14", "0.1"]);
        let lhs = g.power(5).unwrap();
        let rhs = g.power(2).unwrap().tensor(&g.power(3).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn largest_value_examples() {
        assert_eq!(largest_value(&grouped(&["1/2", "1/4", "1/4"])), &rat("1/2"));
        assert_eq!(
            GroupedSpectrum::uniform(7).unwrap().largest_value(),
            &rat("1/7")
        );
        let g = grouped(&["0.7", "0.3"]);
        let p = g.power(6).unwrap();
        assert_eq!(p.largest_value(), &g.largest_value().pow(6));
    }

    #[test]
    fn grouped_constructor_merges_and_validates() {
        let g = GroupedSpectrum::new(vec![
            (rat("1/4"), BigUint::from(2u32)),
            (rat("1/2"), BigUint::one()),
            (rat("1/8"), BigUint::zero()),
            (rat("0"), BigUint::from(9u32)),
        ])
        .unwrap();
        assert_eq!(g, grouped(&["1/2", "1/4", "1/4"]));
        assert!(GroupedSpectrum::new(vec![(rat("1/2"), BigUint::one())]).is_err());
        assert!(GroupedSpectrum::new(vec![(rat("-1/2"), BigUint::one())]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let s = parse_spectrum(&["0.5", "0.25", "0.25"]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["1/2","1/4","1/4"]"#);
        let back: SchmidtSpectrum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
