//! Residue classes of `(A, B)` cut into sectors of directions on which one quadruple wins.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::exact::{format_rational, gcd_ext, lcm, rat_int, Int, Rational};
use crate::spectrum::progression::{Progression, Witness};
use crate::spectrum::ClassSetup;
use crate::torus::d_line_fraction;

/// A direction `(A, B)` with `A > 0`, or one of `(0, 1)` and `(0, -1)`.
pub type Dir = (Int, Int);

fn top() -> Dir {
    (Int::zero(), Int::one())
}

fn bottom() -> Dir {
    (Int::zero(), -Int::one())
}

/// Sort key, increasing clockwise from `(0, 1)` to `(0, -1)`.
fn dir_key(d: &Dir) -> (u8, Rational) {
    if d.0.is_zero() {
        if d.1.is_positive() {
            (0, Rational::zero())
        } else {
            (2, Rational::zero())
        }
    } else {
        (1, -Rational::new(d.1.clone(), d.0.clone()))
    }
}

fn cross(p: &Dir, q: &Dir) -> Int {
    &p.0 * &q.1 - &p.1 * &q.0
}

fn interior(d1: &Dir, d2: &Dir) -> Dir {
    if d1.0.is_zero() && d2.0.is_zero() {
        (Int::one(), Int::zero())
    } else {
        (&d1.0 + &d2.0, &d1.1 + &d2.1)
    }
}

/// The direction in the open half-plane `A > 0` on which `alpha A + beta B` vanishes.
fn zero_ray(alpha: &Rational, beta: &Rational) -> Option<Dir> {
    if alpha.is_zero() && beta.is_zero() {
        return None;
    }
    let den = lcm(alpha.denom(), beta.denom());
    let ai = (alpha * rat_int(&den)).to_integer();
    let bi = (beta * rat_int(&den)).to_integer();
    let g = ai.gcd(&bi);
    let (mut x, mut y) = (bi / &g, -(ai / &g));
    if x.is_zero() {
        return None;
    }
    if x.is_negative() {
        x = -x;
        y = -y;
    }
    Some((x, y))
}

fn strictly_between(d: &Dir, lo: &Dir, hi: &Dir) -> bool {
    let k = dir_key(d);
    dir_key(lo) < k && k < dir_key(hi)
}

/// `D - D(U) = gamma / (y A + z B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub gamma: Rational,
    pub y: Int,
    pub z: Int,
    pub quad: usize,
}

impl Formula {
    pub fn same_values(&self, other: &Formula) -> bool {
        self.gamma == other.gamma && self.y == other.y && self.z == other.z
    }

    /// The offset at `(A, B)`, if the denominator is positive.
    pub fn offset(&self, a: &Int, b: &Int) -> Option<Rational> {
        let q = &self.y * a + &self.z * b;
        q.is_positive().then(|| &self.gamma / rat_int(&q))
    }

    /// `(E, F)` with `D - D(U) = 1/(E A + F B)`.
    pub fn reciprocal_coefficients(&self) -> (Rational, Rational) {
        (rat_int(&self.y) / &self.gamma, rat_int(&self.z) / &self.gamma)
    }

    pub fn describe(&self) -> String {
        format!(
            "{}/({}A + {}B)",
            format_rational(&self.gamma),
            self.y,
            self.z
        )
    }
}

/// What a sector contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectorKind {
    /// `D(T) = D(U)` for large lines, attained exactly by quadruple `quad`.
    Base { quad: usize },
    Offset(Formula),
}

impl SectorKind {
    fn same_values(&self, other: &SectorKind) -> bool {
        match (self, other) {
            (SectorKind::Base { .. }, SectorKind::Base { .. }) => true,
            (SectorKind::Offset(f), SectorKind::Offset(g)) => f.same_values(g),
            _ => false,
        }
    }
}

/// Open cone of directions strictly clockwise from `start` and anticlockwise from `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub start: Dir,
    pub end: Dir,
    pub kind: SectorKind,
}

impl Sector {
    pub fn contains(&self, a: &Int, b: &Int) -> bool {
        let p = (a.clone(), b.clone());
        cross(&self.start, &p).is_negative() && cross(&p, &self.end).is_negative()
    }
}

/// The sectors of one residue class modulo the common modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSectorRecord {
    pub class: (Int, Int),
    /// `gcd(class, modulus) = 1`, so the class contains primitive pairs.
    pub admissible: bool,
    /// Ordered clockwise from `(0, 1)`.
    pub sectors: Vec<Sector>,
}

impl ClassSectorRecord {
    /// Slopes `B/A` of the rays separating consecutive sectors.
    pub fn dividing_slopes(&self) -> Vec<Rational> {
        self.sectors
            .iter()
            .skip(1)
            .map(|s| Rational::new(s.start.1.clone(), s.start.0.clone()))
            .collect()
    }

    pub fn sector_of(&self, a: &Int, b: &Int) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.contains(a, b))
    }
}

/// Sectors and winning formulas of the class `(A, B) ≡ class`.
pub fn sector_decomposition(setup: &ClassSetup, class: &(Int, Int)) -> Result<ClassSectorRecord> {
    let m = &setup.modulus;
    let admissible = class.0.gcd(&class.1).gcd(m).is_one();
    let nq = setup.quads.len();
    let forms: Vec<(Int, Int)> = (0..nq)
        .map(|k| {
            let s = setup.slice_of(k);
            (s.z[1].clone(), s.z[3].clone())
        })
        .collect();
    let mut crit: Vec<Dir> = vec![top(), bottom()];
    for (z2, z4) in &forms {
        if let Some(r) = zero_ray(&rat_int(z2), &rat_int(z4)) {
            crit.push(r);
        }
    }
    crit.sort_by_key(dir_key);
    crit.dedup();
    let mut pieces: Vec<Sector> = Vec::new();
    for w in crit.windows(2) {
        let (d1, d2) = (&w[0], &w[1]);
        let mid = interior(d1, d2);
        let deltas: Vec<i8> = forms
            .iter()
            .map(|(z2, z4)| if (z2 * &mid.0 + z4 * &mid.1).is_negative() { -1 } else { 1 })
            .collect();
        let gammas: Vec<Rational> = (0..nq)
            .map(|k| setup.class_gamma(k, class, deltas[k]))
            .collect();
        if let Some(k) = (0..nq).find(|&k| gammas[k].is_zero()) {
            pieces.push(Sector {
                start: d1.clone(),
                end: d2.clone(),
                kind: SectorKind::Base { quad: k },
            });
            continue;
        }
        let signed: Vec<(Int, Int)> = forms
            .iter()
            .zip(&deltas)
            .map(|((z2, z4), &d)| (z2 * Int::from(d), z4 * Int::from(d)))
            .collect();
        let mut cuts: Vec<Dir> = Vec::new();
        for k1 in 0..nq {
            for k2 in k1 + 1..nq {
                let alpha = &gammas[k1] * rat_int(&signed[k2].0) - &gammas[k2] * rat_int(&signed[k1].0);
                let beta = &gammas[k1] * rat_int(&signed[k2].1) - &gammas[k2] * rat_int(&signed[k1].1);
                if let Some(r) = zero_ray(&alpha, &beta) {
                    if strictly_between(&r, d1, d2) {
                        cuts.push(r);
                    }
                }
            }
        }
        cuts.sort_by_key(dir_key);
        cuts.dedup();
        let mut bounds = vec![d1.clone()];
        bounds.extend(cuts);
        bounds.push(d2.clone());
        for e in bounds.windows(2) {
            let mid = interior(&e[0], &e[1]);
            let mut best: Option<(Rational, usize)> = None;
            for k in 0..nq {
                let q = &signed[k].0 * &mid.0 + &signed[k].1 * &mid.1;
                let val = &gammas[k] / rat_int(&q);
                if best.as_ref().is_none_or(|(b, _)| val < *b) {
                    best = Some((val, k));
                }
            }
            let k = best.expect("at least one quadruple").1;
            pieces.push(Sector {
                start: e[0].clone(),
                end: e[1].clone(),
                kind: SectorKind::Offset(Formula {
                    gamma: gammas[k].clone(),
                    y: signed[k].0.clone(),
                    z: signed[k].1.clone(),
                    quad: k,
                }),
            });
        }
    }
    let mut sectors: Vec<Sector> = Vec::new();
    for p in pieces {
        match sectors.last_mut() {
            Some(last) if last.kind.same_values(&p.kind) => last.end = p.end,
            _ => sectors.push(p),
        }
    }
    Ok(ClassSectorRecord {
        class: class.clone(),
        admissible,
        sectors,
    })
}

/// Record value at `(A, B)` when every quadruple term is exact and nothing else can win.
pub fn predict_in(setup: &ClassSetup, rec: &ClassSectorRecord, a: &Int, b: &Int) -> Option<Rational> {
    let sector = rec.sector_of(a, b)?;
    match &sector.kind {
        SectorKind::Base { quad } => {
            let t = setup.term(*quad, a, b)?;
            (t.gamma().is_zero() && !t.table.flat).then(|| setup.d_value.clone())
        }
        SectorKind::Offset(f) => {
            let off = f.offset(a, b)?;
            (setup.all_exact(a, b) && setup.below_gap(&off)).then(|| &setup.d_value + off)
        }
    }
}

fn oracle_value(setup: &ClassSetup, a: &Int, b: &Int) -> Option<Rational> {
    let (ai, bi) = (a.to_i64()?, b.to_i64()?);
    let v = setup.subtorus.combo_i64(ai, bi)?;
    if v.contains(&0) {
        return None;
    }
    let (p, q) = d_line_fraction(&v);
    Some(Rational::new(Int::from(p), Int::from(q)))
}

/// Integer `x` with `c + x w < 0`, as an inclusive range `(lo, hi)`; `None` bounds are open.
fn solve_negative(c: &Int, w: &Int) -> Option<(Option<Int>, Option<Int>)> {
    if w.is_zero() {
        return c.is_negative().then_some((None, None));
    }
    let bound = Rational::new(-c, w.clone());
    if w.is_positive() {
        Some((None, Some(bound.ceil().to_integer() - 1)))
    } else {
        Some((Some(bound.floor().to_integer() + 1), None))
    }
}

const LEVEL_SCAN: i64 = 256;

/// Search the level set `y A + z B = q` of one class inside a sector for a realising line.
fn level_witness(
    setup: &ClassSetup,
    rec: &ClassSectorRecord,
    sector: &Sector,
    f: &Formula,
    q: &Int,
) -> Option<(Int, Int)> {
    let m = &setup.modulus;
    let (ca, cb) = &rec.class;
    let c0 = &f.y * ca + &f.z * cb;
    let k = (q - &c0) / m;
    let (_, b1, b2) = gcd_ext(&f.y, &f.z);
    let p0 = (ca + m * &k * &b1, cb + m * &k * &b2);
    let w = (m * &f.z, -(m * &f.y));
    let r1 = solve_negative(&cross(&sector.start, &p0), &cross(&sector.start, &w))?;
    let r2 = solve_negative(&(-cross(&sector.end, &p0)), &(-cross(&sector.end, &w)))?;
    let lo = match (r1.0, r2.0) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let hi = match (r1.1, r2.1) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let (lo, hi) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        (Some(l), None) => (l.clone(), l + LEVEL_SCAN),
        (None, Some(h)) => (&h - LEVEL_SCAN, h),
        (None, None) => (Int::from(-LEVEL_SCAN), Int::from(LEVEL_SCAN)),
    };
    let target = &setup.d_value + &f.gamma / rat_int(q);
    let mut x = lo;
    let mut scanned = 0;
    while x <= hi && scanned < LEVEL_SCAN {
        let a = &p0.0 + &x * &w.0;
        let b = &p0.1 + &x * &w.1;
        scanned += 1;
        if a.gcd(&b).is_one() && oracle_value(setup, &a, &b).as_ref() == Some(&target) {
            return Some((a, b));
        }
        x += 1;
    }
    None
}

/// Progressions realised by the sectors of every admissible class, with level-set witnesses.
pub fn realize_progressions(
    setup: &ClassSetup,
    records: &[ClassSectorRecord],
    witness_range: i64,
) -> Result<Vec<Progression>> {
    let m = &setup.modulus;
    let mut out = Vec::new();
    for rec in records.iter().filter(|r| r.admissible) {
        for sector in &rec.sectors {
            let SectorKind::Offset(f) = &sector.kind else {
                continue;
            };
            if !cross(&sector.start, &sector.end).is_negative() && !(sector.start.0.is_zero() && sector.end.0.is_zero()) {
                continue;
            }
            let c0 = (&f.y * &rec.class.0 + &f.z * &rec.class.1).mod_floor(m);
            let c0 = if c0.is_zero() { m.clone() } else { c0 };
            let mut prog = Progression::new(rat_int(m) / &f.gamma, rat_int(&c0) / &f.gamma);
            for s in 0..=witness_range {
                let s = Int::from(s);
                let q = &c0 + m * &s;
                match level_witness(setup, rec, sector, f, &q) {
                    Some((a, b)) => prog.witnesses.push(Witness { s, a, b }),
                    None => prog.unwitnessed.push(s),
                }
            }
            out.push(prog);
        }
    }
    Ok(out)
}

/// Text listing of one class.
pub fn describe(setup: &ClassSetup, rec: &ClassSectorRecord) -> String {
    let slopes: Vec<String> = rec.dividing_slopes().iter().map(format_rational).collect();
    let kinds: Vec<String> = rec
        .sectors
        .iter()
        .map(|s| match &s.kind {
            SectorKind::Base { quad } => format!("0 [{}]", setup.quad_label(*quad)),
            SectorKind::Offset(f) => format!("{} [{}]", f.describe(), setup.quad_label(f.quad)),
        })
        .collect();
    format!(
        "class ({}, {}): rays {{{}}}; offsets {}\n",
        rec.class.0,
        rec.class.1,
        slopes.join(", "),
        kinds.join(" | ")
    )
}
