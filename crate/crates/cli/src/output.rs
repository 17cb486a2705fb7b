//! Serialisable views of library results. Fractions are `p/q` strings.

use serde::{Deserialize, Serialize};

use spectrum_core::spectrum::certify::CertifiedPair;
use spectrum_core::{format_rational, Finiteness, LocusElement, Progression, Rational, SpectrumDescription, Subtorus2D};

/// `a,b,c;d,e,f`, accepted back by `--basis`.
pub fn basis_string(u: &Subtorus2D) -> String {
    let join = |v: &spectrum_core::IntVector| v.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("{};{}", join(u.u()), join(u.v()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub s: String,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionJson {
    pub alpha: String,
    pub beta: String,
    pub scaled: String,
    pub witnesses: Vec<WitnessJson>,
    pub unwitnessed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalJson {
    pub value: String,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub basis: String,
    pub d_value: String,
    pub progressions: Vec<ProgressionJson>,
    pub base_value_attained: bool,
    pub exceptional_values: Vec<ExceptionalJson>,
    pub certified_bound: i64,
}

fn progression_json(p: &Progression) -> ProgressionJson {
    ProgressionJson {
        alpha: format_rational(&p.alpha),
        beta: format_rational(&p.beta),
        scaled: p.describe_scaled(),
        witnesses: p
            .witnesses
            .iter()
            .map(|w| WitnessJson {
                s: w.s.to_string(),
                a: w.a.to_string(),
                b: w.b.to_string(),
            })
            .collect(),
        unwitnessed: p.unwitnessed.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn spectrum_json(u: &Subtorus2D, desc: &SpectrumDescription) -> SpectrumJson {
    let mut progs = desc.progressions.clone();
    progs.sort_by(|x, y| (&x.alpha, &x.beta).cmp(&(&y.alpha, &y.beta)));
    SpectrumJson {
        basis: basis_string(u),
        d_value: format_rational(&desc.d_value),
        progressions: progs.iter().map(progression_json).collect(),
        base_value_attained: desc.base_value_attained,
        exceptional_values: desc
            .exceptional_values
            .iter()
            .map(|e| ExceptionalJson {
                value: format_rational(&e.value),
                a: e.a.to_string(),
                b: e.b.to_string(),
            })
            .collect(),
        certified_bound: desc.certified_bound,
    }
}

pub fn spectrum_text(desc: &SpectrumDescription) -> String {
    let d = format_rational(&desc.d_value);
    let mut out = format!("D(U) = {d}\n");
    out.push_str(&format!(
        "base value attained: {}\n",
        if desc.base_value_attained { "yes" } else { "no" }
    ));
    if desc.progressions.is_empty() {
        out.push_str("progressions: none\n");
    }
    for p in &desc.progressions {
        out.push_str(&format!("{d} + {} = {d} + {}\n", p.describe(), p.describe_scaled()));
        let ws: Vec<String> = p.witnesses.iter().map(|w| format!("s={} ({},{})", w.s, w.a, w.b)).collect();
        out.push_str(&format!("  witnesses: {}\n", if ws.is_empty() { "none".into() } else { ws.join(" ") }));
        if !p.unwitnessed.is_empty() {
            let us: Vec<String> = p.unwitnessed.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("  not attained in the box: s = {}\n", us.join(", ")));
        }
    }
    if desc.exceptional_values.is_empty() {
        out.push_str("exceptional values: none\n");
    } else {
        out.push_str("exceptional values:\n");
        for e in &desc.exceptional_values {
            out.push_str(&format!("  {} at ({},{})\n", format_rational(&e.value), e.a, e.b));
        }
    }
    out.push_str(&format!("certified for max(|A|,|B|) <= {}\n", desc.certified_bound));
    out
}

fn pair(p: &(Rational, Rational)) -> String {
    format!("({},{})", format_rational(&p.0), format_rational(&p.1))
}

pub fn locus_text(e: &LocusElement) -> String {
    match e {
        LocusElement::Segment { start, direction, length } => format!(
            "segment start={} direction=({},{}) length={}",
            pair(start),
            direction.0,
            direction.1,
            format_rational(length)
        ),
        LocusElement::Point(p) => format!("point {}", pair(p)),
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LocusJson {
    Segment {
        start: [String; 2],
        direction: [String; 2],
        length: String,
    },
    Point {
        at: [String; 2],
    },
}

pub fn locus_json(e: &LocusElement) -> LocusJson {
    let p = |q: &(Rational, Rational)| [format_rational(&q.0), format_rational(&q.1)];
    match e {
        LocusElement::Segment { start, direction, length } => LocusJson::Segment {
            start: p(start),
            direction: [direction.0.to_string(), direction.1.to_string()],
            length: format_rational(length),
        },
        LocusElement::Point(q) => LocusJson::Point { at: p(q) },
    }
}

#[derive(Serialize)]
pub struct FinitenessJson {
    pub finite: bool,
    pub witnesses: Vec<LocusJson>,
    pub direction: Option<[String; 2]>,
}

pub fn finiteness_json(f: &Finiteness) -> FinitenessJson {
    match f {
        Finiteness::Finite { first, second } => FinitenessJson {
            finite: true,
            witnesses: vec![locus_json(first), locus_json(second)],
            direction: None,
        },
        Finiteness::Infinite { direction } => FinitenessJson {
            finite: false,
            witnesses: Vec::new(),
            direction: direction.as_ref().map(|d| [d.0.to_string(), d.1.to_string()]),
        },
    }
}

pub fn finiteness_text(f: &Finiteness) -> String {
    match f {
        Finiteness::Finite { first, second } => {
            format!("finite\n{}\n{}\n", locus_text(first), locus_text(second))
        }
        Finiteness::Infinite { direction: Some(d) } => {
            format!("infinite\nall segments parallel to ({},{})\n", d.0, d.1)
        }
        Finiteness::Infinite { direction: None } => "infinite\nno segments\n".into(),
    }
}

#[derive(Serialize)]
pub struct CertifiedRow {
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "B")]
    pub b: i64,
    #[serde(rename = "D_value")]
    pub d_value: String,
    pub classification: String,
}

pub fn certified_row(p: &CertifiedPair) -> CertifiedRow {
    CertifiedRow {
        a: p.a,
        b: p.b,
        d_value: p.value.as_ref().map(format_rational).unwrap_or_default(),
        classification: p.class.label(),
    }
}
