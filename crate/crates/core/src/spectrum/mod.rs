//! Relative spectrum of a two-dimensional subtorus `U`: the D-values of the proper lines
//! `T = <A u + B v>` with `gcd(A, B) = 1`, `A >= 0` and `(A, B) != (0, -1)`.
//!
//! For large lines the value is `D(U)` or `D(U) + 1/(E A + F B)` with `(E, F)` constant on
//! each residue class of `(A, B)` and each sector of directions; when `D` is constant on an
//! arc of some slice component only finitely many lines near its direction are left over.

pub mod certify;
pub mod halfline;
pub mod progression;
pub mod sectors;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{lcm, rat, rat_int, Int, Rational};
use crate::pwl::{coset_min_direct, gamma_table_with, GammaTable, IsolatedMin};
use crate::slice::{slice_points, SliceStructure};
use crate::torus::{all_slices, Subtorus2D};

pub use certify::{certify, check_formulas, CertificationReport, Classification};
pub use halfline::{flat_shortcut, halfline_analysis, HalfLine, HalfLineKind, HalfLineRecord};
pub use progression::{Progression, ProgressionSet, Witness};
pub use sectors::{realize_progressions, sector_decomposition, ClassSectorRecord, Formula, Sector, SectorKind};

/// A parameter pair `(A, B)` describing `T = <A u + B v>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPair {
    pub a: Int,
    pub b: Int,
}

impl ParamPair {
    /// Accepts exactly the pairs with `gcd = 1`, `A >= 0` and `(A, B) != (0, -1)`.
    pub fn new(a: Int, b: Int) -> Result<Self> {
        if !a.gcd(&b).is_one() || a.is_negative() || (a.is_zero() && b.is_negative()) {
            return Err(Error::Invariant(format!("({a}, {b}) is not a normalised pair")));
        }
        Ok(ParamPair { a, b })
    }

    /// The normalised pair describing the same line as `(a, b)`.
    pub fn normalise(a: Int, b: Int) -> Result<Self> {
        let g = a.gcd(&b);
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let (mut a, mut b) = (a / &g, b / &g);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
        }
        Ok(ParamPair { a, b })
    }
}

/// Normalised pairs with `max(|A|, |B|) <= bound`, by increasing radius.
pub fn param_pairs(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for r in 1..=bound {
        for a in 0..=r {
            for b in -r..=r {
                if a.max(b.abs()) != r || a.gcd(&b) != 1 {
                    continue;
                }
                if a == 0 && b != 1 {
                    continue;
                }
                out.push((a, b));
            }
        }
    }
    out
}

/// Options for [`relative_spectrum`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    /// Use `D_l(x) = D_{-l}(-x)` to skip mirrored components and minimisers.
    pub tau_symmetry: bool,
    /// Box radius for the certification sweep.
    pub certify_bound: i64,
    /// Indices `s` searched for explicit witnesses.
    pub witness_range: i64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tau_symmetry: false,
            certify_bound: 200,
            witness_range: 10,
        }
    }
}

/// A slice component on which `D` attains `D(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub slice: usize,
    pub l: usize,
    pub flat: bool,
}

/// Everything the class analysis needs: slices, minimising components and their tables.
#[derive(Clone, Debug)]
pub struct ClassSetup {
    /// The subtorus after dropping duplicated coordinates.
    pub subtorus: Subtorus2D,
    pub d_value: Rational,
    pub slices: Vec<SliceStructure>,
    pub quads: Vec<Quadruple>,
    /// `tables[k][a]` is the residue table of quadruple `k` at offset `a l / K`.
    pub tables: Vec<Vec<GammaTable>>,
    /// Period of all residue data in `(A, B)`.
    pub modulus: Int,
    /// Smallest excess of a non-minimising component minimum over `D(U)`.
    pub gap: Option<Rational>,
    pub tau_symmetry: bool,
}

/// The contribution of one quadruple at a given pair.
#[derive(Clone, Debug)]
pub struct QuadTerm<'a> {
    pub q_signed: Int,
    pub delta: i8,
    pub q: Int,
    pub offset: Rational,
    pub table: &'a GammaTable,
}

impl QuadTerm<'_> {
    pub fn gamma(&self) -> &Rational {
        self.table.gamma(&self.q)
    }

    /// Whether the residue formula is exact at this pair.
    pub fn exact(&self) -> bool {
        self.q >= self.table.q0 || (!self.table.flat && self.gamma().is_zero())
    }
}

fn selected_minima(f: &crate::pwl::CirclePwl, l: usize, k: usize, tau_symmetry: bool) -> Vec<IsolatedMin> {
    let self_mirror = l == 0 || 2 * l == k;
    f.isolated_minima()
        .iter()
        .filter(|m| !(tau_symmetry && self_mirror) || m.tau <= rat(1, 2))
        .cloned()
        .collect()
}

/// Slices, `D(U)`, the minimising quadruples and the common modulus.
pub fn class_setup(u: &Subtorus2D, tau_symmetry: bool) -> Result<ClassSetup> {
    if !u.is_proper() {
        return Err(Error::ImproperSubtorus);
    }
    let p = u.projected();
    if p.dim() < 2 {
        return Err(Error::NotAPlane);
    }
    let slices = all_slices(&p)?;
    let d_value = slices
        .iter()
        .flat_map(|s| s.restrictions.iter().map(|f| f.min_value().clone()))
        .min()
        .ok_or(Error::NotAPlane)?;
    let mut quads = Vec::new();
    let mut tables = Vec::new();
    let mut modulus = Int::one();
    let mut gap: Option<Rational> = None;
    for (si, s) in slices.iter().enumerate() {
        let k: usize = (&s.k).try_into().map_err(|_| Error::Invariant("K too large".into()))?;
        for (l, f) in s.restrictions.iter().enumerate() {
            if f.min_value() != &d_value {
                let g = f.min_value() - &d_value;
                if gap.as_ref().is_none_or(|x| g < *x) {
                    gap = Some(g);
                }
                continue;
            }
            if tau_symmetry && 2 * l > k {
                continue;
            }
            modulus = lcm(&modulus, &s.k);
            for m in f.isolated_minima() {
                modulus = lcm(&modulus, m.tau.denom());
            }
            let minima = selected_minima(f, l, k, tau_symmetry);
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let b = Rational::new(Int::from(a * l), s.k.clone());
                row.push(gamma_table_with(f, &b, &minima)?);
            }
            tables.push(row);
            quads.push(Quadruple {
                slice: si,
                l,
                flat: f.is_flat(),
            });
        }
    }
    Ok(ClassSetup {
        subtorus: p,
        d_value,
        slices,
        quads,
        tables,
        modulus,
        gap,
        tau_symmetry,
    })
}

impl ClassSetup {
    pub fn slice_of(&self, k: usize) -> &SliceStructure {
        &self.slices[self.quads[k].slice]
    }

    /// Label such as `(1,2,-,0)` with one-based coordinates.
    pub fn quad_label(&self, k: usize) -> String {
        let s = self.slice_of(k);
        format!(
            "({},{},{},{})",
            s.i + 1,
            s.j + 1,
            if s.eps > 0 { '+' } else { '-' },
            self.quads[k].l
        )
    }

    /// Term of quadruple `k` at `(A, B)`; `None` when the line lies in the slice.
    pub fn term(&self, k: usize, a: &Int, b: &Int) -> Option<QuadTerm<'_>> {
        let s = self.slice_of(k);
        let pts = slice_points(s, a, b).ok()?;
        let ai: usize = (&pts.a).try_into().ok()?;
        let l = self.quads[k].l;
        Some(QuadTerm {
            q_signed: s.q_form(a, b),
            delta: pts.delta,
            q: pts.q.clone(),
            offset: pts.offsets[l].clone(),
            table: &self.tables[k][ai],
        })
    }

    /// Table of quadruple `k` in the class `(A, B) mod modulus` when `z2 A + z4 B` has sign `delta`.
    pub fn class_table(&self, k: usize, class: &(Int, Int), delta: i8) -> &GammaTable {
        let s = self.slice_of(k);
        let p = s.p_form(&class.0, &class.1) * Int::from(delta);
        let a: usize = p.mod_floor(&s.k).try_into().expect("residue fits");
        &self.tables[k][a]
    }

    /// `gamma` of quadruple `k` in a class and sign; depends only on `(A, B) mod modulus`.
    pub fn class_gamma(&self, k: usize, class: &(Int, Int), delta: i8) -> Rational {
        let s = self.slice_of(k);
        let q = s.q_form(&class.0, &class.1) * Int::from(delta);
        self.class_table(k, class, delta).gamma(&q).clone()
    }

    /// Exact `D(T ∩ component)` for quadruple `k`.
    pub fn quad_value(&self, k: usize, a: &Int, b: &Int) -> Result<Rational> {
        let quad = &self.quads[k];
        let s = &self.slices[quad.slice];
        match self.term(k, a, b) {
            Some(t) if t.q >= t.table.q0 => Ok(t.table.predict(&t.q)),
            Some(t) => coset_min_direct(&s.restrictions[quad.l], &t.offset, &t.q),
            None => Ok(s.restrictions[0].min_value().clone()),
        }
    }

    /// Whether some flat quadruple alone forces `D(T) = D(U)`.
    pub fn flat_hit(&self, a: &Int, b: &Int) -> bool {
        (0..self.quads.len()).any(|k| {
            self.quads[k].flat && self.term(k, a, b).is_some_and(|t| t.q >= t.table.q0)
        })
    }

    /// `offset <= gap`, so no non-minimising component can undercut it.
    pub fn below_gap(&self, offset: &Rational) -> bool {
        self.gap.as_ref().is_none_or(|g| offset <= g)
    }

    /// `|q| >= q0` for every quadruple.
    pub fn all_exact(&self, a: &Int, b: &Int) -> bool {
        (0..self.quads.len()).all(|k| self.term(k, a, b).is_some_and(|t| t.exact()))
    }
}

/// How large lines are organised.
#[derive(Clone, Debug)]
pub enum Route {
    /// `D` is constant on an arc of some component; leftover lines lie on half-lines.
    Flat {
        half_lines: Vec<(HalfLine, Vec<HalfLineRecord>)>,
    },
    /// Finitely many minimisers on every component; residue classes and sectors.
    Sectors { records: Vec<ClassSectorRecord> },
}

/// Output of the class, sector and half-line analysis.
#[derive(Clone, Debug)]
pub struct SpectrumAnalysis {
    pub setup: ClassSetup,
    pub route: Route,
    /// Progressions as produced, before merging.
    pub raw: Vec<Progression>,
    /// `D(U)` is attained by infinitely many lines.
    pub base_infinite: bool,
}

/// Run the analysis without certification.
pub fn analyse(u: &Subtorus2D, options: &SpectrumOptions) -> Result<SpectrumAnalysis> {
    let setup = class_setup(u, options.tau_symmetry)?;
    if let Some(lines) = flat_shortcut(&setup)? {
        let mut half_lines = Vec::new();
        let mut raw = Vec::new();
        for hl in lines {
            let recs = halfline_analysis(&setup, &hl)?;
            raw.extend(halfline::halfline_progressions(&setup, &hl, &recs, options.witness_range)?);
            half_lines.push((hl, recs));
        }
        return Ok(SpectrumAnalysis {
            setup,
            route: Route::Flat { half_lines },
            raw,
            base_infinite: true,
        });
    }
    let mut records = Vec::new();
    let m: i64 = (&setup.modulus)
        .try_into()
        .map_err(|_| Error::Invariant("modulus too large".into()))?;
    for x in 0..m {
        for y in 0..m {
            records.push(sector_decomposition(&setup, &(Int::from(x), Int::from(y)))?);
        }
    }
    let raw = realize_progressions(&setup, &records, options.witness_range)?;
    let base_infinite = records
        .iter()
        .any(|r| r.admissible && r.sectors.iter().any(|s| matches!(s.kind, SectorKind::Base { .. })));
    Ok(SpectrumAnalysis {
        setup,
        route: Route::Sectors { records },
        raw,
        base_infinite,
    })
}

impl SpectrumAnalysis {
    /// Value predicted by the applicable record, when the pair lies beyond its validity thresholds.
    pub fn predict(&self, a: &Int, b: &Int) -> Option<Rational> {
        let su = &self.setup;
        match &self.route {
            Route::Flat { half_lines } => {
                if su.flat_hit(a, b) {
                    return Some(su.d_value.clone());
                }
                for (hl, recs) in half_lines {
                    if let Some(v) = halfline::predict_on(su, hl, recs, a, b) {
                        return Some(v);
                    }
                }
                None
            }
            Route::Sectors { records } => {
                let m = &su.modulus;
                let idx = a.mod_floor(m) * m + b.mod_floor(m);
                let idx: usize = idx.try_into().ok()?;
                sectors::predict_in(su, &records[idx], a, b)
            }
        }
    }

    /// Merged description of the progression part.
    pub fn progressions(&self) -> Vec<Progression> {
        ProgressionSet::from_progressions(&self.raw).canonical()
    }

    /// Human readable listing of records.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        let su = &self.setup;
        out.push_str(&format!(
            "D(U) = {}, modulus = {}, minimising components: {}\n",
            crate::exact::format_rational(&su.d_value),
            su.modulus,
            (0..su.quads.len()).map(|k| su.quad_label(k)).collect::<Vec<_>>().join(" ")
        ));
        match &self.route {
            Route::Flat { half_lines } => {
                for (hl, recs) in half_lines {
                    out.push_str(&halfline::describe(su, hl, recs));
                }
            }
            Route::Sectors { records } => {
                for r in records.iter().filter(|r| r.admissible) {
                    out.push_str(&sectors::describe(su, r));
                }
            }
        }
        out
    }
}

/// A value of the spectrum outside every progression, with one line realising it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalValue {
    pub value: Rational,
    pub a: Int,
    pub b: Int,
}

/// Certified description of a relative spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumDescription {
    pub d_value: Rational,
    pub progressions: Vec<Progression>,
    pub base_value_attained: bool,
    pub exceptional_values: Vec<ExceptionalValue>,
    pub certified_bound: i64,
}

impl SpectrumDescription {
    /// Offsets `1/(D - D(U))` covered by the progressions.
    pub fn progression_set(&self) -> ProgressionSet {
        ProgressionSet::from_progressions(&self.progressions)
    }
}

/// Analyse, merge and certify; witnesses of the merged progressions come from the sweep.
pub fn relative_spectrum(u: &Subtorus2D, options: &SpectrumOptions) -> Result<(SpectrumDescription, SpectrumAnalysis, CertificationReport)> {
    let analysis = analyse(u, options)?;
    let progressions = analysis.progressions();
    let draft = SpectrumDescription {
        d_value: analysis.setup.d_value.clone(),
        progressions,
        base_value_attained: analysis.base_infinite,
        exceptional_values: Vec::new(),
        certified_bound: options.certify_bound,
    };
    let report = certify(&analysis.setup.subtorus, &draft, options.certify_bound)?;
    let mut desc = draft;
    desc.base_value_attained |= report.base_count > 0;
    desc.exceptional_values = report.exceptional.clone();
    let d = desc.d_value.clone();
    for p in desc.progressions.iter_mut() {
        for s in 0..=options.witness_range {
            let s = Int::from(s);
            let v = &d + p.offset(&s);
            match report.first_pair(&v) {
                Some((a, b)) => p.witnesses.push(Witness {
                    s,
                    a: Int::from(a),
                    b: Int::from(b),
                }),
                None => p.unwitnessed.push(s),
            }
        }
    }
    Ok((desc, analysis, report))
}

/// A rational `D(U) + gamma / q`.
pub fn offset_value(d: &Rational, gamma: &Rational, q: &Int) -> Rational {
    d + gamma / rat_int(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn pairs_are_normalised() {
        let p = param_pairs(2);
        assert_eq!(&p[..4], &[(0, 1), (1, -1), (1, 0), (1, 1)]);
        assert!(p.iter().all(|&(a, b)| a >= 0 && a.gcd(&b) == 1));
        assert!(ParamPair::new(int(0), int(-1)).is_err());
        assert_eq!(
            ParamPair::normalise(int(-2), int(4)).unwrap(),
            ParamPair { a: int(1), b: int(-2) }
        );
    }

    #[test]
    fn setup_of_u2() {
        let u = Subtorus2D::from_i64(&[1, 0, 1, 1], &[1, 1, 0, 2]).unwrap();
        let s = class_setup(&u, false).unwrap();
        assert_eq!(s.d_value, rat(1, 4));
        assert_eq!(s.modulus, int(4));
        assert!(s.quads.iter().all(|q| !q.flat));
    }
}

