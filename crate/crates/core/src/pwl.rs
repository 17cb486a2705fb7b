//! Piecewise-linear functions on `R/Z`, best one-sided approximation of a point by a
//! coset `b/q + <1/q>`, and the residue tables describing coset minima for large `q`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_int, frac, lcm, modulo, rat, rat_int, Int, Rational};
use crate::torus::{d_point, CosetLine};

/// A minimiser of a circle function: a point, or a closed arc `[start, end]`.
///
/// `start` lies in `[0, 1)`; `end` may exceed one when the arc wraps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Argmin {
    Point(Rational),
    Interval(Rational, Rational),
}

/// An isolated minimum with the slopes and lengths of the two adjacent pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedMin {
    pub tau: Rational,
    pub lambda_minus: Rational,
    pub lambda_plus: Rational,
    pub rho_minus: Rational,
    pub rho_plus: Rational,
}

/// Continuous piecewise-linear function on `R/Z`, given by exact breakpoints and values.
#[derive(Clone, Debug)]
pub struct CirclePwl {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
    min: Rational,
    argmin: Vec<Argmin>,
    minima: Vec<IsolatedMin>,
    gap: Option<Rational>,
}

fn push_cosets(set: &mut BTreeSet<Rational>, shift: &Rational, e: &Int) {
    // all t in [0,1) with t*e - shift in Z
    let m = e.abs();
    let mut j = Int::zero();
    while j < m {
        set.insert(frac(&((rat_int(&j) + shift) / rat_int(e))));
        j += 1;
    }
}

/// Restriction of D to a coset line, parametrised by `t ∈ [0, 1)`.
///
/// Breakpoints are every coordinate kink `{b_k + t d_k} ∈ {0, 1/2}` and every tie
/// `x_k ≡ ± x_l`; between consecutive ones a single coordinate is active.
pub fn build_restriction(line: &CosetLine) -> Result<CirclePwl> {
    let n = line.direction.len();
    let b = &line.base.0;
    let d = &line.direction.0;
    let mut cand: BTreeSet<Rational> = BTreeSet::new();
    cand.insert(Rational::zero());
    for k in 0..n {
        if !d[k].is_zero() {
            push_cosets(&mut cand, &(-(&b[k] * rat(2, 1))), &(&d[k] * 2));
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            for s in [1i64, -1] {
                let e = &d[k] - &d[l] * s;
                if !e.is_zero() {
                    let shift = -(&b[k] - &b[l] * rat(s, 1));
                    push_cosets(&mut cand, &shift, &e);
                }
            }
        }
    }
    let breakpoints: Vec<Rational> = cand.into_iter().collect();
    let values: Vec<Rational> = breakpoints.iter().map(|t| d_point(&line.at(t))).collect();
    Ok(CirclePwl::from_samples(breakpoints, values))
}

impl CirclePwl {
    /// Build from breakpoints in `[0, 1)` (strictly increasing) and the values there.
    pub fn from_samples(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Self {
        let mut f = CirclePwl {
            breakpoints,
            values,
            min: Rational::zero(),
            argmin: Vec::new(),
            minima: Vec::new(),
            gap: None,
        };
        f.analyse();
        f
    }

    fn analyse(&mut self) {
        let m = self.breakpoints.len();
        let len = |i: usize, j: usize, bp: &[Rational]| {
            if j > i {
                &bp[j] - &bp[i]
            } else {
                &bp[j] + Rational::one() - &bp[i]
            }
        };
        let slope = |i: usize, j: usize, bp: &[Rational], vs: &[Rational]| {
            (&vs[j] - &vs[i]) / len(i, j, bp)
        };
        // merge collinear breakpoints
        let mut keep: Vec<usize> = Vec::new();
        if m > 1 {
            for i in 0..m {
                let p = (i + m - 1) % m;
                let q = (i + 1) % m;
                let sl = slope(p, i, &self.breakpoints, &self.values);
                let sr = slope(i, q, &self.breakpoints, &self.values);
                if sl != sr {
                    keep.push(i);
                }
            }
        }
        self.min = self.values.iter().min().cloned().unwrap_or_else(Rational::zero);
        if keep.len() < 2 {
            self.argmin = vec![Argmin::Interval(Rational::zero(), Rational::one())];
            self.minima.clear();
            self.gap = None;
            return;
        }
        let bp: Vec<Rational> = keep.iter().map(|&i| self.breakpoints[i].clone()).collect();
        let vs: Vec<Rational> = keep.iter().map(|&i| self.values[i].clone()).collect();
        let k = bp.len();
        let flat_min = |i: usize| vs[i] == self.min && vs[(i + 1) % k] == self.min;
        let mut argmin = Vec::new();
        let mut minima = Vec::new();
        for i in 0..k {
            let prev = (i + k - 1) % k;
            let next = (i + 1) % k;
            if flat_min(i) {
                let end = if next > i {
                    bp[next].clone()
                } else {
                    &bp[next] + Rational::one()
                };
                argmin.push(Argmin::Interval(bp[i].clone(), end));
            } else if vs[i] == self.min && !flat_min(prev) {
                argmin.push(Argmin::Point(bp[i].clone()));
                minima.push(IsolatedMin {
                    tau: bp[i].clone(),
                    lambda_minus: -slope(prev, i, &bp, &vs),
                    lambda_plus: slope(i, next, &bp, &vs),
                    rho_minus: len(prev, i, &bp),
                    rho_plus: len(i, next, &bp),
                });
            }
        }
        self.gap = vs
            .iter()
            .filter(|v| **v > self.min)
            .map(|v| v - &self.min)
            .min();
        self.argmin = argmin;
        self.minima = minima;
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn min_value(&self) -> &Rational {
        &self.min
    }

    pub fn argmin(&self) -> &[Argmin] {
        &self.argmin
    }

    /// Isolated minimisers with their local slopes and linearity radii.
    pub fn isolated_minima(&self) -> &[IsolatedMin] {
        &self.minima
    }

    /// Whether some minimiser is an arc of positive length.
    pub fn is_flat(&self) -> bool {
        self.argmin.iter().any(|a| matches!(a, Argmin::Interval(..)))
    }

    /// Longest minimising arc.
    pub fn longest_flat(&self) -> Option<Rational> {
        self.argmin
            .iter()
            .filter_map(|a| match a {
                Argmin::Interval(s, e) => Some(e - s),
                Argmin::Point(_) => None,
            })
            .max()
    }

    /// Smallest excess over the minimum at a non-minimising breakpoint.
    pub fn gap(&self) -> Option<&Rational> {
        self.gap.as_ref()
    }

    /// Value at `t` by linear interpolation.
    pub fn eval(&self, t: &Rational) -> Rational {
        let t = frac(t);
        let m = self.breakpoints.len();
        if m == 1 {
            return self.values[0].clone();
        }
        let i = match self.breakpoints.binary_search(&t) {
            Ok(i) => return self.values[i].clone(),
            Err(0) => m - 1,
            Err(i) => i - 1,
        };
        let j = (i + 1) % m;
        let (t0, t1) = if j > i {
            (self.breakpoints[i].clone(), self.breakpoints[j].clone())
        } else {
            (self.breakpoints[i].clone(), &self.breakpoints[j] + Rational::one())
        };
        let t = if t < t0 { t + Rational::one() } else { t };
        &self.values[i] + (&self.values[j] - &self.values[i]) * (t - &t0) / (t1 - &t0)
    }
}

/// One-sided distances from `tau` to the nearest points of `b/q + <1/q>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    /// Distance to the nearest point `<= tau`.
    pub minus: Rational,
    /// Distance to the nearest point `>= tau`.
    pub plus: Rational,
    pub r_minus: Int,
    pub r_plus: Int,
    /// The distances are `r / (modulus * q)`.
    pub modulus: Int,
}

/// Residues `(r_minus, r_plus, modulus)`; they depend on `q` only modulo `modulus`.
pub fn approx_residues(tau: &Rational, b: &Rational, q: &Int) -> (Int, Int, Int) {
    let tau = frac(tau);
    let b = frac(b);
    let (w, x) = (tau.numer(), tau.denom());
    let (y, z) = (b.numer(), b.denom());
    let xz = x * z;
    let g = x.gcd(z);
    let rm = modulo(&(w * z * q - x * y), &xz);
    let rp = modulo(&(x * y - w * z * q), &xz);
    (rm / &g, rp / &g, xz / g)
}

/// Best approximation errors from below and above of `tau` by `b/q + <1/q>`.
pub fn approx(tau: &Rational, b: &Rational, q: &Int) -> Result<ApproxResult> {
    if !q.is_positive() {
        return Err(Error::Invariant("approximation denominator must be positive".into()));
    }
    let (r_minus, r_plus, modulus) = approx_residues(tau, b, q);
    let den = rat_int(&(&modulus * q));
    Ok(ApproxResult {
        minus: rat_int(&r_minus) / &den,
        plus: rat_int(&r_plus) / den,
        r_minus,
        r_plus,
        modulus,
    })
}

/// Minimum of `f` over `b/q + <1/q>` by evaluating every point.
pub fn coset_min_direct(f: &CirclePwl, b: &Rational, q: &Int) -> Result<Rational> {
    if !q.is_positive() {
        return Err(Error::Invariant("coset denominator must be positive".into()));
    }
    let qr = rat_int(q);
    let mut best: Option<Rational> = None;
    let mut r = Int::zero();
    while &r < q {
        let v = f.eval(&((b + rat_int(&r)) / &qr));
        if best.as_ref().is_none_or(|x| v < *x) {
            best = Some(v);
        }
        r += 1;
    }
    Ok(best.expect("q >= 1"))
}

/// Coset minima for large `q`: `min f + gammas[q mod modulus] / q` for all `q >= q0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    pub b: Rational,
    pub min: Rational,
    pub modulus: Int,
    pub gammas: Vec<Rational>,
    pub q0: Int,
    pub flat: bool,
}

impl GammaTable {
    pub fn gamma(&self, q: &Int) -> &Rational {
        let i = modulo(q, &self.modulus);
        let i: usize = i.try_into().expect("table index fits");
        &self.gammas[i]
    }

    /// Predicted coset minimum, valid for `q >= q0`.
    pub fn predict(&self, q: &Int) -> Rational {
        &self.min + self.gamma(q) / rat_int(q)
    }
}

/// Residue table of coset minima of `f` along `b/q + <1/q>`.
pub fn gamma_table(f: &CirclePwl, b: &Rational) -> Result<GammaTable> {
    gamma_table_with(f, b, f.isolated_minima())
}

/// As [`gamma_table`], restricted to the given isolated minima.
pub fn gamma_table_with(f: &CirclePwl, b: &Rational, minima: &[IsolatedMin]) -> Result<GammaTable> {
    let b = frac(b);
    if let Some(len) = f.longest_flat() {
        return Ok(GammaTable {
            b,
            min: f.min_value().clone(),
            modulus: Int::one(),
            gammas: vec![Rational::zero()],
            q0: ceil_int(&(Rational::one() / len)).max(Int::one()),
            flat: true,
        });
    }
    if minima.is_empty() {
        return Err(Error::Invariant("no minimiser selected".into()));
    }
    let mut modulus = b.denom().clone();
    for h in minima {
        modulus = lcm(&modulus, h.tau.denom());
    }
    let size: usize = (&modulus)
        .try_into()
        .map_err(|_| Error::Invariant("residue table too large".into()))?;
    let mut gammas = Vec::with_capacity(size);
    for qi in 0..size {
        let q = Int::from(qi);
        let g = minima
            .iter()
            .map(|h| {
                let (rm, rp, md) = approx_residues(&h.tau, &b, &q);
                let lo = &h.lambda_minus * rat_int(&rm);
                let hi = &h.lambda_plus * rat_int(&rp);
                lo.min(hi) / rat_int(&md)
            })
            .min()
            .expect("nonempty");
        gammas.push(g);
    }
    let rho = minima
        .iter()
        .map(|h| h.rho_minus.clone().min(h.rho_plus.clone()))
        .min()
        .expect("nonempty");
    let lambda = minima
        .iter()
        .map(|h| h.lambda_minus.clone().max(h.lambda_plus.clone()))
        .max()
        .expect("nonempty");
    let mut q0 = ceil_int(&(Rational::one() / rho));
    let gap = f
        .gap()
        .ok_or_else(|| Error::Invariant("isolated minimum without a gap".into()))?;
    let q_gap = (lambda / gap).floor().to_integer() + 1;
    q0 = q0.max(q_gap).max(Int::one());
    Ok(GammaTable {
        b,
        min: f.min_value().clone(),
        modulus,
        gammas,
        q0,
        flat: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, IntVector};
    use crate::torus::TorusPoint;

    fn line(base: &[(i64, i64)], dir: &[i64]) -> CosetLine {
        CosetLine::new(
            TorusPoint::new(base.iter().map(|&(p, q)| rat(p, q)).collect()),
            IntVector::from_i64(dir),
        )
        .unwrap()
    }

    #[test]
    fn restriction_slopes() {
        let f = build_restriction(&line(&[(0, 1); 4], &[1, 1, 2, 3])).unwrap();
        let m = &f.isolated_minima()[0];
        assert_eq!(m.tau, rat(1, 4));
        assert_eq!((m.lambda_minus.clone(), m.lambda_plus.clone()), (rat(1, 1), rat(3, 1)));
        let f = build_restriction(&line(&[(1, 2), (1, 2), (0, 1), (0, 1)], &[1, 0, 1, 1])).unwrap();
        let m = f.isolated_minima().iter().find(|m| m.tau == rat(1, 4)).unwrap();
        assert_eq!((m.lambda_minus.clone(), m.lambda_plus.clone()), (rat(1, 1), rat(1, 1)));
        assert_eq!(f.min_value(), &rat(1, 4));
    }

    #[test]
    fn interpolation_matches_direct() {
        let l = line(&[(1, 3), (0, 1), (2, 5)], &[2, -3, 5]);
        let f = build_restriction(&l).unwrap();
        for k in 0..97 {
            let t = rat(k, 97);
            assert_eq!(f.eval(&t), d_point(&l.at(&t)));
        }
    }

    #[test]
    fn approx_examples() {
        let a = approx(&rat(1, 2), &rat(0, 1), &int(3)).unwrap();
        assert_eq!((a.minus, a.plus), (rat(1, 6), rat(1, 6)));
        let a = approx(&rat(1, 6), &rat(1, 3), &int(4)).unwrap();
        assert_eq!((a.minus, a.plus), (rat(1, 12), rat(1, 6)));
        let a = approx(&rat(1, 4), &rat(1, 2), &int(2)).unwrap();
        assert_eq!((a.minus, a.plus), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn flat_table() {
        let f = build_restriction(&line(&[(0, 1), (1, 4), (2, 4), (3, 4)], &[1, 0, 0, 0])).unwrap();
        let g = gamma_table(&f, &rat(1, 3)).unwrap();
        assert!(g.flat);
        assert_eq!(g.q0, int(2));
        assert_eq!(g.gammas, vec![rat(0, 1)]);
    }

    #[test]
    fn table_matches_direct() {
        let f = build_restriction(&line(&[(0, 1); 4], &[1, 1, 2, 3])).unwrap();
        for b in [rat(0, 1), rat(1, 3), rat(3, 4)] {
            let g = gamma_table(&f, &b).unwrap();
            let mut q = g.q0.clone();
            let end = &g.q0 + &g.modulus * 4;
            while q <= end {
                assert_eq!(coset_min_direct(&f, &b, &q).unwrap(), g.predict(&q));
                q += 1;
            }
        }
    }
}
