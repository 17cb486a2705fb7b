//! Two-dimensional proper subtori of `(R/Z)^3` and `(R/Z)^4` with a prescribed D-value,
//! up to signed coordinate permutations.
//!
//! Every subtorus has a basis of the shape `(u1, u1, u3, ...)`, `(v1, -v1, v3, ...)`.
//! Candidates of that shape are generated from the lines with large D-value, checked
//! with [`d_plane`] and reduced to canonical orbit representatives.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, rat, Int, Rational};
use crate::torus::{canonicalize_symmetry, d_plane, Subtorus2D};

/// The shape `(u1, u1, u3, ..., un)`, `(v1, -v1, v3, ..., vn)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizedBasis {
    pub first: Vec<i64>,
    pub second: Vec<i64>,
}

impl SymmetrizedBasis {
    /// From `(u1, u3, ..., un)` and `(v1, v3, ..., vn)`.
    pub fn new(u: &[i64], v: &[i64]) -> Self {
        let mut first = vec![u[0], u[0]];
        first.extend_from_slice(&u[1..]);
        let mut second = vec![v[0], -v[0]];
        second.extend_from_slice(&v[1..]);
        SymmetrizedBasis { first, second }
    }

    pub fn subtorus(&self) -> Result<Subtorus2D> {
        Subtorus2D::from_i64(&self.first, &self.second)
    }
}

/// Unordered coprime pairs `{x, 2r + 1 - x}` with `1 <= x <= r` and `4r + 2 <= 1/threshold`.
pub fn tight_pairs(threshold: &Rational) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if threshold <= &Rational::zero() {
        return out;
    }
    let limit = (Rational::one() / threshold).floor().to_integer();
    let mut r: i64 = 1;
    while Int::from(4 * r + 2) <= limit {
        for x in 1..=r {
            let y = 2 * r + 1 - x;
            if x.gcd(&y) == 1 {
                out.push((x, y));
            }
        }
        r += 1;
    }
    out.sort();
    out
}

/// D-value of `<(a, b)>` for positive integers; the pair is reduced first.
pub fn d_two_speeds(a: i64, b: i64) -> Result<Rational> {
    if a <= 0 || b <= 0 {
        return Err(Error::ZeroVector);
    }
    let g = a.gcd(&b);
    let (a, b) = (a / g, b / g);
    if a % 2 == 1 && b % 2 == 1 {
        Ok(Rational::zero())
    } else {
        Ok(rat(1, 2 * (a + b)))
    }
}

fn signed(v: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &x in v {
        let mut next = Vec::new();
        for p in &out {
            for s in if x == 0 { vec![0] } else { vec![x, -x] } {
                let mut q = p.clone();
                q.push(s);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn orderings(v: &[i64]) -> Vec<Vec<i64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in orderings(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn arrangements(v: &[i64]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = orderings(v).iter().flat_map(|p| signed(p)).collect();
    out.sort();
    out.dedup();
    out
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Collect the candidates with `d_plane = d`, keyed by their canonical form.
struct Collector {
    d: Rational,
    found: BTreeMap<String, Subtorus2D>,
}

impl Collector {
    fn try_add(&mut self, b: &SymmetrizedBasis) -> Result<()> {
        if !lines_allow(b, &self.d) {
            return Ok(());
        }
        let Ok(u) = b.subtorus() else {
            return Ok(());
        };
        if !u.is_proper() || d_plane(&u)? != self.d {
            return Ok(());
        }
        let c = canonicalize_symmetry(&u);
        self.found.entry(subtorus_key(&c)).or_insert(c);
        Ok(())
    }

    fn finish(self) -> Vec<Subtorus2D> {
        self.found.into_values().collect()
    }
}

/// Sort key of a canonical subtorus, e.g. `(0,1,4);(1,0,0)`.
pub fn subtorus_key(u: &Subtorus2D) -> String {
    format!("{};{}", u.u(), u.v())
}

/// Canonical representatives of the proper two-dimensional subtori with D-value `d`.
///
/// Supported: `n <= 2`, `n = 3` with any `d > 0`, and `n = 4` with `d = 1/4`.
pub fn enumerate_2d_subtori(n: usize, d: &Rational) -> Result<Vec<Subtorus2D>> {
    let unsupported = || Error::Unsupported {
        n,
        d: format_rational(d),
    };
    if d <= &Rational::zero() {
        return Err(unsupported());
    }
    match n {
        0..=2 => Ok(Vec::new()),
        3 => Ok(enumerate_n3(d)?),
        4 if d == &rat(1, 4) => Ok(enumerate_n4()?),
        _ => Err(unsupported()),
    }
}

fn enumerate_n3(d: &Rational) -> Result<Vec<Subtorus2D>> {
    let mut pairs: Vec<Vec<i64>> = Vec::new();
    for (x, y) in tight_pairs(d) {
        pairs.extend(arrangements(&[x, y]));
    }
    // a zero entry in either generator
    pairs.extend(arrangements(&[1, 0]));
    let mut c = Collector {
        d: d.clone(),
        found: BTreeMap::new(),
    };
    for p in &pairs {
        for q in &pairs {
            c.try_add(&SymmetrizedBasis::new(p, q))?;
        }
    }
    Ok(c.finish())
}

fn enumerate_n4() -> Result<Vec<Subtorus2D>> {
    let triples = arrangements(&[1, 2, 3]);
    let mut c = Collector {
        d: rat(1, 4),
        found: BTreeMap::new(),
    };
    // no zero entries
    for p in &triples {
        for q in &triples {
            c.try_add(&SymmetrizedBasis::new(p, q))?;
        }
    }
    for t in &triples {
        let (d, e, f) = (t[0], t[1], t[2]);
        // one zero, in the third coordinate of the first generator
        for (a, cc) in [(d, e - f), (d, f - e), (d, e + f), (d, -e - f)] {
            let first = primitive(&[a, 0, cc]);
            for s in arrangements(&first) {
                if s[0] == 0 || s.iter().filter(|&&x| x == 0).count() != 1 {
                    continue;
                }
                c.try_add(&SymmetrizedBasis::new(&s, t))?;
                c.try_add(&SymmetrizedBasis::new(t, &s))?;
            }
        }
        // two zeros in the same generator
        c.try_add(&SymmetrizedBasis::new(&[1, 0, 0], t))?;
        c.try_add(&SymmetrizedBasis::new(t, &[1, 0, 0]))?;
    }
    // one zero in each generator, in different coordinates
    for cc in [1, -1, 2, -2] {
        c.try_add(&SymmetrizedBasis::new(&[1, 0, cc], &[1, cc, 0]))?;
        c.try_add(&SymmetrizedBasis::new(&[1, cc, 0], &[1, 0, cc]))?;
    }
    Ok(c.finish())
}

/// Brute-force scan of symmetrized bases with entries in `[-bound, bound]`.
///
/// Each candidate is first bounded above by the D-values of a few lines it contains.
pub fn brute_force_2d_subtori(n: usize, d: &Rational, bound: i64) -> Result<Vec<Subtorus2D>> {
    if n < 3 {
        return Ok(Vec::new());
    }
    let m = n - 1;
    let total = (2 * bound + 1).pow(m as u32);
    let vectors: Vec<Vec<i64>> = (0..total)
        .map(|mut idx| {
            (0..m)
                .map(|_| {
                    let x = idx % (2 * bound + 1) - bound;
                    idx /= 2 * bound + 1;
                    x
                })
                .collect()
        })
        .filter(|v: &Vec<i64>| v.iter().any(|&x| x != 0) && primitive(v) == *v)
        .collect();
    let mut c = Collector {
        d: d.clone(),
        found: BTreeMap::new(),
    };
    for p in &vectors {
        for q in &vectors {
            c.try_add(&SymmetrizedBasis::new(p, q))?;
        }
    }
    Ok(c.finish())
}

/// `D(U) <= D(T)` for the lines `T` spanned by small combinations of the generators.
fn lines_allow(b: &SymmetrizedBasis, d: &Rational) -> bool {
    for (x, y) in [(1i64, 0i64), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1), (1, 3), (3, 1), (1, -3), (3, -1), (2, 3), (3, 2), (2, -3), (3, -2)] {
        let w: Vec<i64> = b.first.iter().zip(&b.second).map(|(p, q)| x * p + y * q).collect();
        if w.iter().all(|&z| z != 0) {
            let (p, q) = crate::torus::d_line_fraction(&w);
            if &Rational::new(Int::from(p), Int::from(q)) < d {
                return false;
            }
        }
    }
    true
}

/// Whether two subtori lie in the same symmetry orbit.
pub fn equivalent(a: &Subtorus2D, b: &Subtorus2D) -> bool {
    a.dim() == b.dim() && canonicalize_symmetry(a) == canonicalize_symmetry(b)
}
