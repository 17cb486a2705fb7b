//! Exhaustive sweep of small pairs against a spectrum description.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Int, Rational};
use crate::spectrum::{param_pairs, ExceptionalValue, SpectrumAnalysis, SpectrumDescription};
use crate::torus::{d_line_fraction, Subtorus2D};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Base,
    /// Index into the description's progressions.
    Progression(usize),
    Exceptional,
    Improper,
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::Base => "base".into(),
            Classification::Progression(i) => format!("progression:{i}"),
            Classification::Exceptional => "exceptional".into(),
            Classification::Improper => "improper".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedPair {
    pub a: i64,
    pub b: i64,
    /// `None` for improper lines.
    pub value: Option<Rational>,
    pub class: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificationReport {
    pub bound: i64,
    pub pairs: Vec<CertifiedPair>,
    pub base_count: usize,
    pub progression_counts: Vec<usize>,
    pub improper_count: usize,
    /// Distinct values outside every progression, each with its first pair.
    pub exceptional: Vec<ExceptionalValue>,
    /// Radius `max(|A|, |B|)` and pair at which each distinct value first appears.
    pub first_seen: BTreeMap<Rational, (i64, i64, i64)>,
}

impl CertificationReport {
    pub fn first_pair(&self, v: &Rational) -> Option<(i64, i64)> {
        self.first_seen.get(v).map(|&(_, a, b)| (a, b))
    }

    /// Largest radius at which a new value appeared.
    pub fn last_new_value_radius(&self) -> i64 {
        self.first_seen.values().map(|x| x.0).max().unwrap_or(0)
    }

    pub fn exceptional_count(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.class == Classification::Exceptional)
            .count()
    }
}

/// `D(<A u + B v>)` from the integer oracle, `None` when the line is improper.
pub fn pair_value(u: &Subtorus2D, a: i64, b: i64) -> Result<Option<Rational>> {
    let v = u
        .combo_i64(a, b)
        .ok_or_else(|| Error::Invariant(format!("({a}, {b}) overflows")))?;
    if v.contains(&0) {
        return Ok(None);
    }
    let (p, q) = d_line_fraction(&v);
    Ok(Some(Rational::new(Int::from(p), Int::from(q))))
}

/// Classify every normalised pair with `max(|A|, |B|) <= bound`.
pub fn certify(u: &Subtorus2D, desc: &SpectrumDescription, bound: i64) -> Result<CertificationReport> {
    let d = &desc.d_value;
    let mut report = CertificationReport {
        bound,
        pairs: Vec::new(),
        base_count: 0,
        progression_counts: vec![0; desc.progressions.len()],
        improper_count: 0,
        exceptional: Vec::new(),
        first_seen: BTreeMap::new(),
    };
    for (a, b) in param_pairs(bound) {
        let value = pair_value(u, a, b)?;
        let class = match &value {
            None => {
                report.improper_count += 1;
                Classification::Improper
            }
            Some(v) if v == d => {
                report.base_count += 1;
                Classification::Base
            }
            Some(v) => {
                if v < d {
                    return Err(Error::Invariant(format!(
                        "D of ({a}, {b}) is below the base value"
                    )));
                }
                let recip = Rational::one() / (v - d);
                match desc
                    .progressions
                    .iter()
                    .position(|p| p.index_of(&recip).is_some())
                {
                    Some(i) => {
                        report.progression_counts[i] += 1;
                        Classification::Progression(i)
                    }
                    None => Classification::Exceptional,
                }
            }
        };
        if let Some(v) = &value {
            if !report.first_seen.contains_key(v) {
                report.first_seen.insert(v.clone(), (a.abs().max(b.abs()), a, b));
                if class == Classification::Exceptional {
                    report.exceptional.push(ExceptionalValue {
                        value: v.clone(),
                        a: Int::from(a),
                        b: Int::from(b),
                    });
                }
            }
        }
        report.pairs.push(CertifiedPair { a, b, value, class });
    }
    report.exceptional.sort_by(|x, y| x.value.cmp(&y.value));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaViolation {
    pub a: i64,
    pub b: i64,
    pub predicted: Rational,
    pub actual: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormulaCheck {
    /// Pairs with a prediction.
    pub checked: usize,
    /// Proper pairs below every validity threshold.
    pub unpredicted: usize,
    pub violations: Vec<FormulaViolation>,
}

/// Compare every record prediction in the box against the oracle.
pub fn check_formulas(analysis: &SpectrumAnalysis, bound: i64) -> Result<FormulaCheck> {
    let u = &analysis.setup.subtorus;
    let mut out = FormulaCheck::default();
    for (a, b) in param_pairs(bound) {
        let Some(actual) = pair_value(u, a, b)? else {
            continue;
        };
        match analysis.predict(&Int::from(a), &Int::from(b)) {
            Some(p) => {
                out.checked += 1;
                if p != actual {
                    out.violations.push(FormulaViolation {
                        a,
                        b,
                        predicted: p,
                        actual,
                    });
                }
            }
            None => out.unpredicted += 1,
        }
    }
    Ok(out)
}
