//! Lines left over when some minimising component has a flat minimum.
//!
//! A flat quadruple forces `D(T) = D(U)` once its `q` reaches the table threshold, so only
//! pairs with a small value of its `q`-form survive. These lie on finitely many integer
//! lines in the `(A, B)` plane, each cut by `A >= 0` into at most two half-lines.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_int, format_rational, gcd_ext, lcm, rat_int, Int, Rational};
use crate::pwl::coset_min_direct;
use crate::spectrum::progression::{Progression, Witness};
use crate::spectrum::ClassSetup;
use crate::torus::d_line_fraction;

/// The pairs `base + x dir`, `x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfLine {
    pub base: (Int, Int),
    pub dir: (Int, Int),
    /// Value of the flat `q`-form along the line.
    pub c: Int,
    /// Period in `x` of every residue datum.
    pub period: Int,
}

impl HalfLine {
    pub fn at(&self, x: &Int) -> (Int, Int) {
        (&self.base.0 + x * &self.dir.0, &self.base.1 + x * &self.dir.1)
    }

    /// The parameter `x >= 0` of `(a, b)`, if it lies on the half-line.
    pub fn position(&self, a: &Int, b: &Int) -> Option<Int> {
        let (da, db) = (a - &self.base.0, b - &self.base.1);
        let x = if !self.dir.0.is_zero() {
            if !(&da % &self.dir.0).is_zero() {
                return None;
            }
            &da / &self.dir.0
        } else {
            if !da.is_zero() || !(&db % &self.dir.1).is_zero() {
                return None;
            }
            &db / &self.dir.1
        };
        (!x.is_negative() && db == &x * &self.dir.1 && da == &x * &self.dir.0).then_some(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HalfLineKind {
    /// `gcd(A, B) > 1` throughout the class.
    Excluded,
    /// `D(T) = D(U)` for `x >= x_valid`.
    Base { quad: usize, x_valid: Int },
    /// `D(T) = D(U) + gamma / (e x + f)` for `x >= x_valid`.
    Offset {
        gamma: Rational,
        e: Int,
        f: Int,
        quad: usize,
        x_valid: Int,
    },
    /// No minimising term grows along the line.
    Unresolved,
}

/// Behaviour of the pairs with `x ≡ residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfLineRecord {
    pub residue: Int,
    pub modulus: Int,
    pub kind: HalfLineKind,
}

/// The half-lines of leftover pairs, or `None` when no minimising component is flat.
///
/// Flat quadruples with different kernel directions leave only finitely many pairs, and
/// the list is empty.
pub fn flat_shortcut(setup: &ClassSetup) -> Result<Option<Vec<HalfLine>>> {
    let flats: Vec<usize> = (0..setup.quads.len()).filter(|&k| setup.quads[k].flat).collect();
    let Some(&first) = flats.first() else {
        return Ok(None);
    };
    let norm = |k: usize| {
        let s = setup.slice_of(k);
        let (a, b) = (s.a0.clone(), s.b0.clone());
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            (-a, -b)
        } else {
            (a, b)
        }
    };
    let w = norm(first);
    if flats.iter().any(|&k| norm(k) != w) {
        return Ok(Some(Vec::new()));
    }
    let q0 = flats
        .iter()
        .map(|&k| setup.tables[k][0].q0.clone())
        .min()
        .expect("nonempty");
    let s = setup.slice_of(first);
    let (g, x0, y0) = gcd_ext(&s.z[1], &s.z[3]);
    if !g.is_one() {
        return Err(Error::Invariant(format!("flat q-form has content {g}")));
    }
    let mut out = Vec::new();
    let mut c: Int = Int::one() - &q0;
    while c < q0 {
        if !c.is_zero() {
            let p = (&c * &x0, &c * &y0);
            if w.0.is_positive() {
                let shift = ceil_int(&Rational::new(-&p.0, w.0.clone()));
                let base = (&p.0 + &shift * &w.0, &p.1 + &shift * &w.1);
                out.push(make_line(setup, base, w.clone(), &c));
            } else if p.0.is_positive() {
                out.push(make_line(setup, p.clone(), w.clone(), &c));
                out.push(make_line(setup, p, (-&w.0, -&w.1), &c));
            }
        }
        c += 1;
    }
    Ok(Some(out))
}

fn make_line(setup: &ClassSetup, base: (Int, Int), dir: (Int, Int), c: &Int) -> HalfLine {
    let cop = (&dir.0 * &base.1 - &dir.1 * &base.0).abs();
    let mut period = cop.clone();
    for k in 0..setup.quads.len() {
        let s = setup.slice_of(k);
        period = lcm(&period, &s.k);
        if !s.q_form(&dir.0, &dir.1).is_zero() {
            for t in &setup.tables[k] {
                period = lcm(&period, &t.modulus);
            }
        }
    }
    HalfLine {
        base,
        dir,
        c: c.clone(),
        period,
    }
}

fn sign(x: &Int) -> i8 {
    if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Residue records of one half-line.
pub fn halfline_analysis(setup: &ClassSetup, hl: &HalfLine) -> Result<Vec<HalfLineRecord>> {
    let nq = setup.quads.len();
    let cop = (&hl.dir.0 * &hl.base.1 - &hl.dir.1 * &hl.base.0).abs();
    let forms: Vec<(Int, Int)> = (0..nq)
        .map(|k| {
            let s = setup.slice_of(k);
            (
                s.q_form(&hl.dir.0, &hl.dir.1),
                s.q_form(&hl.base.0, &hl.base.1),
            )
        })
        .collect();
    let d = &setup.d_value;
    let mut out = Vec::new();
    let mut r = Int::zero();
    while r < hl.period {
        let (a, b) = hl.at(&r);
        let kind = if !a.gcd(&b).gcd(&cop).is_one() {
            HalfLineKind::Excluded
        } else {
            residue_kind(setup, &forms, &a, &b, &r, d)?
        };
        out.push(HalfLineRecord {
            residue: r.clone(),
            modulus: hl.period.clone(),
            kind,
        });
        r += 1;
    }
    Ok(out)
}

/// Smallest integer `x >= 0` with `x >= bound`.
fn at_least(bound: &Rational) -> Int {
    ceil_int(bound).max(Int::zero())
}

fn residue_kind(
    setup: &ClassSetup,
    forms: &[(Int, Int)],
    a: &Int,
    b: &Int,
    r: &Int,
    d: &Rational,
) -> Result<HalfLineKind> {
    let nq = setup.quads.len();
    let mut constants: Vec<Rational> = Vec::new();
    // (k, gamma, |e|, delta f, q0)
    let mut growing: Vec<(usize, Rational, Int, Int, Int)> = Vec::new();
    for k in 0..nq {
        let s = setup.slice_of(k);
        let quad = &setup.quads[k];
        let (e, f) = &forms[k];
        if e.is_zero() {
            let delta = sign(f);
            let q = f.abs();
            let ares = (s.p_form(a, b) * Int::from(delta)).mod_floor(&s.k);
            let off = crate::exact::frac(&Rational::new(&ares * Int::from(quad.l as u64), s.k.clone()));
            let v = coset_min_direct(&s.restrictions[quad.l], &off, &q)?;
            if &v == d {
                return Ok(HalfLineKind::Base {
                    quad: k,
                    x_valid: Int::zero(),
                });
            }
            constants.push(v - d);
        } else {
            let delta = sign(e);
            let ares = (s.p_form(a, b) * Int::from(delta)).mod_floor(&s.k);
            let ai: usize = (&ares).try_into().expect("residue fits");
            let table = &setup.tables[k][ai];
            let q_at_r = (e * r + f) * Int::from(delta);
            let gamma = table.gamma(&q_at_r).clone();
            let ea = e.abs();
            let df = f * Int::from(delta);
            if gamma.is_zero() {
                // gamma = 0: exact as soon as q is positive, or past q0 on a flat table
                let need = if table.flat { table.q0.clone() } else { Int::one() };
                let x_valid = at_least(&Rational::new(&need - &df, ea.clone()));
                return Ok(HalfLineKind::Base { quad: k, x_valid });
            }
            growing.push((k, gamma, ea, df, table.q0.clone()));
        }
    }
    if growing.is_empty() {
        return Ok(HalfLineKind::Unresolved);
    }
    let w = growing
        .iter()
        .min_by(|x, y| {
            let vx = &x.1 / rat_int(&x.2);
            let vy = &y.1 / rat_int(&y.2);
            vx.cmp(&vy).then_with(|| {
                let fx = Rational::new(x.3.clone(), x.2.clone());
                let fy = Rational::new(y.3.clone(), y.2.clone());
                fy.cmp(&fx)
            })
        })
        .expect("nonempty")
        .clone();
    let (wk, wg, we, wf, _) = &w;
    let mut bound = Rational::new(Int::one() - wf, we.clone());
    for (_, _, e, f, q0) in &growing {
        bound = bound.max(Rational::new(q0 - f, e.clone()));
    }
    for (k, g, e, f, _) in &growing {
        if k == wk {
            continue;
        }
        // wg (e x + f) <= g (we x + wf)
        let coef = wg * rat_int(e) - g * rat_int(we);
        let rhs = g * rat_int(wf) - wg * rat_int(f);
        if coef.is_zero() {
            if rhs.is_negative() {
                return Ok(HalfLineKind::Unresolved);
            }
        } else {
            bound = bound.max(rhs / coef);
        }
    }
    let mut excesses = constants;
    if let Some(g) = &setup.gap {
        excesses.push(g.clone());
    }
    for ex in &excesses {
        // wg / (we x + wf) <= ex
        bound = bound.max((wg / ex - rat_int(wf)) / rat_int(we));
    }
    Ok(HalfLineKind::Offset {
        gamma: wg.clone(),
        e: we.clone(),
        f: wf.clone(),
        quad: *wk,
        x_valid: at_least(&bound),
    })
}

/// Record value at `(a, b)` if it lies on the half-line past the record threshold.
pub fn predict_on(setup: &ClassSetup, hl: &HalfLine, recs: &[HalfLineRecord], a: &Int, b: &Int) -> Option<Rational> {
    let x = hl.position(a, b)?;
    let rec = &recs[x.mod_floor(&hl.period).to_usize()?];
    match &rec.kind {
        HalfLineKind::Base { x_valid, .. } if &x >= x_valid => Some(setup.d_value.clone()),
        HalfLineKind::Offset {
            gamma, e, f, x_valid, ..
        } if &x >= x_valid => Some(&setup.d_value + gamma / rat_int(&(e * &x + f))),
        _ => None,
    }
}

fn oracle_value(setup: &ClassSetup, a: &Int, b: &Int) -> Option<Rational> {
    let v = setup.subtorus.combo_i64(a.to_i64()?, b.to_i64()?)?;
    if v.contains(&0) {
        return None;
    }
    let (p, q) = d_line_fraction(&v);
    Some(Rational::new(Int::from(p), Int::from(q)))
}

/// Progressions of the offset records, with witnesses on the half-line itself.
pub fn halfline_progressions(
    setup: &ClassSetup,
    hl: &HalfLine,
    recs: &[HalfLineRecord],
    witness_range: i64,
) -> Result<Vec<Progression>> {
    let mut out = Vec::new();
    for rec in recs {
        let HalfLineKind::Offset { gamma, e, f, .. } = &rec.kind else {
            continue;
        };
        let alpha = rat_int(&(e * &hl.period)) / gamma;
        let beta = rat_int(&(e * &rec.residue + f)) / gamma;
        let mut prog = Progression::new(alpha, beta).normalized();
        for s in 0..=witness_range {
            let s = Int::from(s);
            let v = prog.value(&s);
            let xr = (&v * gamma - rat_int(f)) / rat_int(e);
            let found = if xr.is_integer() && !xr.is_negative() {
                let x = xr.to_integer();
                let (a, b) = hl.at(&x);
                let ok = a.gcd(&b).is_one()
                    && !(a.is_zero() && !b.is_one())
                    && oracle_value(setup, &a, &b) == Some(&setup.d_value + Rational::one() / &v);
                ok.then_some((a, b))
            } else {
                None
            };
            match found {
                Some((a, b)) => prog.witnesses.push(Witness { s, a, b }),
                None => prog.unwitnessed.push(s),
            }
        }
        out.push(prog);
    }
    Ok(out)
}

/// Text listing of one half-line.
pub fn describe(setup: &ClassSetup, hl: &HalfLine, recs: &[HalfLineRecord]) -> String {
    let mut out = format!(
        "half-line ({}, {}) + x({}, {}), flat q = {}, period {}\n",
        hl.base.0, hl.base.1, hl.dir.0, hl.dir.1, hl.c, hl.period
    );
    for rec in recs {
        let body = match &rec.kind {
            HalfLineKind::Excluded => "not primitive".to_string(),
            HalfLineKind::Unresolved => "unresolved".to_string(),
            HalfLineKind::Base { quad, x_valid } => {
                format!("0 [{}] for x >= {}", setup.quad_label(*quad), x_valid)
            }
            HalfLineKind::Offset {
                gamma,
                e,
                f,
                quad,
                x_valid,
            } => format!(
                "{}/({}x + {}) [{}] for x >= {}",
                format_rational(gamma),
                e,
                f,
                setup.quad_label(*quad),
                x_valid
            ),
        };
        out.push_str(&format!("  x = {} mod {}: {}\n", rec.residue, rec.modulus, body));
    }
    out
}
