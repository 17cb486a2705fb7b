//! Affine progressions `{alpha s + beta : s >= 0}` of positive rationals and finite unions
//! of them, compared up to finitely many elements.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{format_rational, lcm, modulo, rat_int, Int, Rational};

/// A pair `(A, B)` together with the progression index it realises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub s: Int,
    pub a: Int,
    pub b: Int,
}

/// The progression of reciprocal offsets `D - D(U) = 1/(alpha s + beta)`, `s >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub alpha: Rational,
    pub beta: Rational,
    pub witnesses: Vec<Witness>,
    /// Indices `s` in the searched range without a witness.
    pub unwitnessed: Vec<Int>,
}

impl Progression {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        Progression {
            alpha,
            beta,
            witnesses: Vec::new(),
            unwitnessed: Vec::new(),
        }
    }

    /// The same progression up to finitely many terms, with `beta` shifted into `(alpha, 2 alpha]`.
    pub fn normalized(&self) -> Progression {
        let k = (&self.beta / &self.alpha).ceil() - Rational::from_integer(Int::from(2));
        let beta = &self.beta - &self.alpha * k;
        Progression::new(self.alpha.clone(), beta)
    }

    /// `alpha s + beta`.
    pub fn value(&self, s: &Int) -> Rational {
        &self.alpha * rat_int(s) + &self.beta
    }

    /// The index `s >= 0` with `alpha s + beta = v`, if any.
    pub fn index_of(&self, v: &Rational) -> Option<Int> {
        let s = (v - &self.beta) / &self.alpha;
        (s.is_integer() && !s.is_negative()).then(|| s.to_integer())
    }

    /// Offset `1/(alpha s + beta)` above the base value.
    pub fn offset(&self, s: &Int) -> Rational {
        Rational::one() / self.value(s)
    }

    /// `(c, p, q)` with `1/(alpha s + beta) = c/(p s + q)` and coprime integers `p, q`.
    pub fn scaled_form(&self) -> (Rational, Int, Int) {
        let den = lcm(self.alpha.denom(), self.beta.denom());
        let a = (&self.alpha * rat_int(&den)).to_integer();
        let b = (&self.beta * rat_int(&den)).to_integer();
        let g = a.gcd(&b);
        (Rational::new(den, g.clone()), a / &g, b / g)
    }

    /// Written as `c·Prog(p,q)`.
    pub fn describe_scaled(&self) -> String {
        let (c, p, q) = self.scaled_form();
        if c.is_one() {
            format!("Prog({p},{q})")
        } else {
            format!("{}·Prog({p},{q})", format_rational(&c))
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "1/({}s + {})",
            format_rational(&self.alpha),
            format_rational(&self.beta)
        )
    }
}

/// A finite union of progressions, stored as residues of scaled integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressionSet {
    /// Common denominator of every `alpha` and `beta`.
    pub den: Int,
    /// Common period of the scaled progressions.
    pub period: Int,
    /// Scaled values modulo `period`.
    pub residues: BTreeSet<Int>,
}

fn common_scale<'a, I: IntoIterator<Item = &'a Progression>>(progs: I) -> (Int, Int) {
    let mut den = Int::one();
    let mut items = Vec::new();
    for p in progs {
        den = lcm(&den, p.alpha.denom());
        den = lcm(&den, p.beta.denom());
        items.push(p);
    }
    let mut period = Int::one();
    for p in items {
        period = lcm(&period, &(&p.alpha * rat_int(&den)).to_integer());
    }
    (den, period)
}

fn insert_residues(set: &mut BTreeSet<Int>, p: &Progression, den: &Int, period: &Int) {
    let a = (&p.alpha * rat_int(den)).to_integer();
    let b = (&p.beta * rat_int(den)).to_integer();
    let count = period / &a;
    let mut k = Int::zero();
    while k < count {
        set.insert(modulo(&(&b + &a * &k), period));
        k += 1;
    }
}

impl ProgressionSet {
    pub fn from_progressions(progs: &[Progression]) -> Self {
        Self::with_extra(progs, &[])
    }

    fn with_extra(progs: &[Progression], extra: &[&Progression]) -> Self {
        let (den, period) = common_scale(progs.iter().chain(extra.iter().copied()));
        let mut residues = BTreeSet::new();
        for p in progs {
            insert_residues(&mut residues, p, &den, &period);
        }
        ProgressionSet {
            den,
            period,
            residues,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Whether the scaled value `v * den` is positive and in one of the residue classes.
    pub fn contains(&self, v: &Rational) -> bool {
        if !v.is_positive() {
            return false;
        }
        let x = v * rat_int(&self.den);
        x.is_integer() && self.residues.contains(&modulo(&x.to_integer(), &self.period))
    }

    /// Canonical cover: coarsest residue classes first, beta in `(alpha, 2 alpha]`, sorted.
    pub fn canonical(&self) -> Vec<Progression> {
        let mut out = Vec::new();
        let mut covered: BTreeSet<Int> = BTreeSet::new();
        let mut divisors = Vec::new();
        let mut m = Int::one();
        while m <= self.period {
            if (&self.period % &m).is_zero() {
                divisors.push(m.clone());
            }
            m += 1;
        }
        for m in divisors {
            let reps = &self.period / &m;
            let mut r = Int::zero();
            while r < m {
                let class: Vec<Int> = {
                    let mut v = Vec::new();
                    let mut j = Int::zero();
                    while j < reps {
                        v.push(&r + &m * &j);
                        j += 1;
                    }
                    v
                };
                if class.iter().all(|x| self.residues.contains(x))
                    && class.iter().any(|x| !covered.contains(x))
                {
                    covered.extend(class);
                    let beta = if r.is_zero() { &m * 2 } else { &r + &m };
                    out.push(Progression::new(
                        Rational::new(m.clone(), self.den.clone()),
                        Rational::new(beta, self.den.clone()),
                    ));
                }
                r += 1;
            }
        }
        out.sort_by(|p, q| (&p.alpha, &p.beta).cmp(&(&q.alpha, &q.beta)));
        out
    }
}

/// Equality of the unions up to finitely many values.
pub fn same_up_to_finite(a: &[Progression], b: &[Progression]) -> bool {
    let all: Vec<Progression> = a.iter().chain(b).cloned().collect();
    let (den, period) = common_scale(&all);
    let mut ra = BTreeSet::new();
    let mut rb = BTreeSet::new();
    for p in a {
        insert_residues(&mut ra, p, &den, &period);
    }
    for p in b {
        insert_residues(&mut rb, p, &den, &period);
    }
    ra == rb
}

/// Whether `p` is contained in the union `set` up to finitely many values.
pub fn covered_up_to_finite(p: &Progression, set: &[Progression]) -> bool {
    let s = ProgressionSet::with_extra(set, &[p]);
    let mut rp = BTreeSet::new();
    insert_residues(&mut rp, p, &s.den, &s.period);
    rp.is_subset(&s.residues)
}

/// Whether `small` maps into `big` by an affine change of index.
pub fn absorbed_by(small: &Progression, big: &Progression) -> bool {
    let ratio = &small.alpha / &big.alpha;
    let shift = (&small.beta - &big.beta) / &big.alpha;
    ratio.is_integer() && ratio.is_positive() && shift.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(a: (i64, i64), b: (i64, i64)) -> Progression {
        Progression::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn canonical_merges_classes() {
        let s = ProgressionSet::from_progressions(&[p((4, 1), (1, 1)), p((4, 1), (3, 1))]);
        assert_eq!(s.canonical(), vec![p((2, 1), (3, 1))]);
        let s = ProgressionSet::from_progressions(&[p((8, 1), (4, 1))]);
        assert_eq!(s.canonical(), vec![p((8, 1), (12, 1))]);
    }

    #[test]
    fn finite_equivalence() {
        let ours = vec![
            p((5, 1), (3, 1)),
            p((5, 2), (1, 2)),
            p((5, 3), (4, 3)),
            p((5, 4), (2, 4)),
        ]
        .into_iter()
        .map(|q| Progression::new(&q.alpha * rat(5, 1), &q.beta * rat(5, 1)))
        .collect::<Vec<_>>();
        let theirs = vec![p((25, 4), (35, 4)), p((25, 3), (45, 3))];
        assert!(same_up_to_finite(&ours, &theirs));
        assert!(covered_up_to_finite(&p((25, 1), (15, 1)), &theirs));
        assert!(!covered_up_to_finite(&p((25, 1), (16, 1)), &theirs));
    }

    #[test]
    fn scaled_forms() {
        assert_eq!(p((8, 1), (12, 1)).describe_scaled(), "1/4·Prog(2,3)");
        assert_eq!(p((25, 4), (35, 4)).describe_scaled(), "4/5·Prog(5,7)");
        assert_eq!(p((25, 3), (15, 1)).describe_scaled(), "3/5·Prog(5,9)");
        assert_eq!(p((5, 1), (3, 1)).describe_scaled(), "Prog(5,3)");
    }

    #[test]
    fn absorption() {
        assert!(absorbed_by(&p((5, 1), (3, 1)), &p((5, 4), (1, 2))));
        assert!(!absorbed_by(&p((5, 4), (1, 2)), &p((5, 1), (3, 1))));
    }

    #[test]
    fn membership() {
        let s = ProgressionSet::from_progressions(&[p((8, 1), (12, 1))]);
        assert!(s.contains(&rat(20, 1)));
        assert!(s.contains(&rat(4, 1)));
        assert!(!s.contains(&rat(6, 1)));
        assert!(!s.contains(&rat(-4, 1)));
        let q = p((8, 1), (12, 1));
        assert_eq!(q.index_of(&rat(20, 1)), Some(Int::from(1)));
        assert_eq!(p((8, 1), (28, 1)).normalized(), q);
        assert_eq!(p((8, 1), (4, 1)).normalized(), q);
    }
}
