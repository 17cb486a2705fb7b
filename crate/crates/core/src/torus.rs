//! Points, one- and two-dimensional subtori of `(R/Z)^n` and their D-values.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    frac, hnf2, lattice_coords, rat, rat_int, saturate_plane, Int, IntVector,
    Rational,
};
use crate::pwl::{build_restriction, Argmin};
use crate::slice::{slice_structure, SliceStructure};

/// Point of `(R/Z)^n`, coordinates reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint(pub Vec<Rational>);

impl TorusPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        TorusPoint(coords.iter().map(frac).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `max_k |x_k - 1/2|`.
pub fn d_point(x: &TorusPoint) -> Rational {
    let half = rat(1, 2);
    x.0.iter()
        .map(|c| (frac(c) - &half).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// One-dimensional subtorus `<v>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subtorus1D {
    direction: IntVector,
}

impl Subtorus1D {
    /// Normalises the direction to a primitive, sign-canonical vector.
    pub fn new(direction: IntVector) -> Result<Self> {
        Ok(Subtorus1D {
            direction: direction.primitive()?,
        })
    }

    pub fn from_i64(direction: &[i64]) -> Result<Self> {
        Self::new(IntVector::from_i64(direction))
    }

    pub fn direction(&self) -> &IntVector {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// No coordinate vanishes identically.
    pub fn is_proper(&self) -> bool {
        self.direction.0.iter().all(|x| !x.is_zero())
    }
}

/// Two-dimensional subtorus spanned by a saturated basis `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subtorus2D {
    u: IntVector,
    v: IntVector,
}

impl Subtorus2D {
    /// Saturates the given generators; a saturated input basis is kept as is.
    pub fn new(u: IntVector, v: IntVector) -> Result<Self> {
        let (u, v) = saturate_plane(&u, &v)?;
        Ok(Subtorus2D { u, v })
    }

    pub fn from_i64(u: &[i64], v: &[i64]) -> Result<Self> {
        Self::new(IntVector::from_i64(u), IntVector::from_i64(v))
    }

    pub fn u(&self) -> &IntVector {
        &self.u
    }

    pub fn v(&self) -> &IntVector {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// No coordinate vanishes identically on the subtorus.
    pub fn is_proper(&self) -> bool {
        (0..self.dim()).all(|k| !(self.u.0[k].is_zero() && self.v.0[k].is_zero()))
    }

    /// `A*u + B*v`.
    pub fn combo(&self, a: &Int, b: &Int) -> IntVector {
        self.u.combine(a, &self.v, b)
    }

    /// `A*u + B*v` with machine integers, if every entry fits.
    pub fn combo_i64(&self, a: i64, b: i64) -> Option<Vec<i64>> {
        let u = self.u.to_i64()?;
        let v = self.v.to_i64()?;
        u.iter()
            .zip(&v)
            .map(|(&x, &y)| x.checked_mul(a)?.checked_add(y.checked_mul(b)?))
            .collect()
    }

    /// The line `<A*u + B*v>`.
    pub fn line(&self, a: &Int, b: &Int) -> Result<Subtorus1D> {
        Subtorus1D::new(self.combo(a, b))
    }

    /// The point `a*u + b*v` for real parameters.
    pub fn point(&self, a: &Rational, b: &Rational) -> TorusPoint {
        TorusPoint::new(
            (0..self.dim())
                .map(|k| a * rat_int(&self.u.0[k]) + b * rat_int(&self.v.0[k]))
                .collect(),
        )
    }

    /// A pair `(i, j, eps)` with `x_i = eps * x_j` on the whole subtorus, if any.
    pub fn contained_diagonal(&self) -> Option<(usize, usize, i8)> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for eps in [1i8, -1] {
                    let e = Int::from(eps);
                    if self.u.0[i] == &e * &self.u.0[j] && self.v.0[i] == &e * &self.v.0[j] {
                        return Some((i, j, eps));
                    }
                }
            }
        }
        None
    }

    /// Drop coordinates that are `±` copies of others until no diagonal contains the subtorus.
    ///
    /// The projection is injective and keeps the basis saturated, so `(A, B)` parameters agree.
    pub fn projected(&self) -> Subtorus2D {
        let mut cur = self.clone();
        while let Some((_, j, _)) = cur.contained_diagonal() {
            let keep = |w: &IntVector| {
                IntVector(
                    w.0.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, x)| x.clone())
                        .collect(),
                )
            };
            cur = Subtorus2D {
                u: keep(&cur.u),
                v: keep(&cur.v),
            };
        }
        cur
    }

    /// Image under a signed permutation: coordinate `k` of the image is `sign[k] * x[perm[k]]`.
    pub fn signed_permutation(&self, perm: &[usize], sign: &[i8]) -> Subtorus2D {
        let map = |w: &IntVector| {
            IntVector(
                perm.iter()
                    .zip(sign)
                    .map(|(&p, &s)| if s < 0 { -&w.0[p] } else { w.0[p].clone() })
                    .collect(),
            )
        };
        Subtorus2D {
            u: map(&self.u),
            v: map(&self.v),
        }
    }

    /// Same underlying lattice.
    pub fn same_subtorus(&self, other: &Subtorus2D) -> bool {
        self.dim() == other.dim() && hnf2(&self.u, &self.v) == hnf2(&other.u, &other.v)
    }

    /// Whether the line `<w>` lies in this subtorus, with its `(A, B)` coordinates.
    pub fn line_coords(&self, w: &IntVector) -> Result<(Int, Int)> {
        lattice_coords(w, &self.u, &self.v)
    }
}

/// Coset line `base + R*direction` in `(R/Z)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetLine {
    pub base: TorusPoint,
    pub direction: IntVector,
}

impl CosetLine {
    pub fn new(base: TorusPoint, direction: IntVector) -> Result<Self> {
        if base.len() != direction.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: direction.len(),
            });
        }
        if direction.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(CosetLine { base, direction })
    }

    /// The point at parameter `t`.
    pub fn at(&self, t: &Rational) -> TorusPoint {
        TorusPoint::new(
            self.base
                .0
                .iter()
                .zip(&self.direction.0)
                .map(|(b, d)| b + t * rat_int(d))
                .collect(),
        )
    }
}

/// D-value of a line with entries given as machine integers, as a reduced `(num, den)`.
///
/// The minimum of D on `<v>` is attained on some `{x_i = ± x_j}`, whose points on the
/// line are the `k/|v_i ∓ v_j|`. Values are scanned with integer residues only.
pub fn d_line_fraction(v: &[i64]) -> (i64, i64) {
    let n = v.len();
    if n <= 1 {
        return (0, 1);
    }
    let mut ds: Vec<i64> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for d in [(v[i] - v[j]).abs(), (v[i] + v[j]).abs()] {
                if d > 0 {
                    ds.push(d);
                }
            }
        }
    }
    ds.sort_unstable_by(|a, b| b.cmp(a));
    ds.dedup();
    let maximal: Vec<i64> = ds
        .iter()
        .enumerate()
        .filter(|&(idx, &d)| !ds[..idx].iter().any(|&e| e % d == 0))
        .map(|(_, &d)| d)
        .collect();
    let (mut bn, mut bd) = (1i64, 2i64);
    let mut steps = vec![0i64; n];
    let mut res = vec![0i64; n];
    for &d in &maximal {
        for m in 0..n {
            steps[m] = v[m].rem_euclid(d);
            res[m] = 0;
        }
        let mut lim = (bn * 2 * d + bd - 1) / bd;
        for _ in 1..=d / 2 {
            let mut worst = 0i64;
            let mut better = true;
            for m in 0..n {
                let mut r = res[m] + steps[m];
                if r >= d {
                    r -= d;
                }
                res[m] = r;
                let t = (2 * r - d).abs();
                if t >= lim {
                    better = false;
                } else if t > worst {
                    worst = t;
                }
            }
            if better {
                bn = worst;
                bd = 2 * d;
                lim = (bn * 2 * d + bd - 1) / bd;
            }
        }
    }
    let g = bn.gcd(&bd);
    if g == 0 {
        (0, 1)
    } else {
        (bn / g, bd / g)
    }
}

fn d_line_big(v: &[Int]) -> Rational {
    let n = v.len();
    let mut ds: Vec<Int> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for d in [(&v[i] - &v[j]).abs(), (&v[i] + &v[j]).abs()] {
                if !d.is_zero() {
                    ds.push(d);
                }
            }
        }
    }
    ds.sort_by(|a, b| b.cmp(a));
    ds.dedup();
    if n <= 1 {
        return Rational::zero();
    }
    let mut best = rat(1, 2);
    for (idx, d) in ds.iter().enumerate() {
        if ds[..idx].iter().any(|e| (e % d).is_zero()) {
            continue;
        }
        let two_d: Int = d * 2;
        let mut k = Int::one();
        let half: Int = d / 2;
        while k <= half {
            let worst = v
                .iter()
                .map(|x| {
                    let r: Int = (x * &k).mod_floor(d);
                    let t: Int = r * 2 - d;
                    t.abs()
                })
                .max()
                .unwrap_or_else(Int::zero);
            let val = Rational::new(worst, two_d.clone());
            if val < best {
                best = val;
            }
            k += 1;
        }
    }
    best
}

/// Exact D-value of a proper line.
pub fn d_line_oracle(t: &Subtorus1D) -> Result<Rational> {
    if !t.is_proper() {
        return Err(Error::ImproperSubtorus);
    }
    let limit = 1i64 << 28;
    match t.direction.to_i64() {
        Some(v) if v.iter().all(|x| x.abs() <= limit) => {
            let (p, q) = d_line_fraction(&v);
            Ok(rat(p, q))
        }
        _ => Ok(d_line_big(&t.direction.0)),
    }
}

/// Minimum of D over a coset line together with all minimisers.
pub fn d_coset_line(line: &CosetLine) -> Result<(Rational, Vec<Argmin>)> {
    let f = build_restriction(line)?;
    Ok((f.min_value().clone(), f.argmin().to_vec()))
}

/// All slices `{x_i = eps x_j}` of a subtorus that is contained in no diagonal.
pub fn all_slices(u: &Subtorus2D) -> Result<Vec<SliceStructure>> {
    let n = u.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for eps in [1i8, -1] {
                out.push(slice_structure(u, i, j, eps)?);
            }
        }
    }
    Ok(out)
}

/// Exact D-value of a proper two-dimensional subtorus.
pub fn d_plane(u: &Subtorus2D) -> Result<Rational> {
    if !u.is_proper() {
        return Err(Error::ImproperSubtorus);
    }
    let p = u.projected();
    if p.dim() < 2 {
        return Err(Error::NotAPlane);
    }
    let mut best: Option<Rational> = None;
    for s in all_slices(&p)? {
        for f in &s.restrictions {
            let m = f.min_value();
            if best.as_ref().is_none_or(|b| m < b) {
                best = Some(m.clone());
            }
        }
    }
    best.ok_or(Error::NotAPlane)
}

fn entry_key(x: &Int) -> (Int, bool) {
    (x.abs(), x.is_negative())
}

fn cmp_key(a: &(IntVector, IntVector), b: &(IntVector, IntVector)) -> Ordering {
    let flat = |p: &(IntVector, IntVector)| {
        p.0 .0
            .iter()
            .chain(p.1 .0.iter())
            .map(entry_key)
            .collect::<Vec<_>>()
    };
    flat(a).cmp(&flat(b))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Canonical representative of the orbit under signed coordinate permutations.
///
/// The key is the Hermite normal form, minimised over the whole group with entries
/// ordered by absolute value and then positive before negative.
pub fn canonicalize_symmetry(u: &Subtorus2D) -> Subtorus2D {
    let n = u.dim();
    let mut best: Option<(IntVector, IntVector)> = None;
    let perms = permutations(n);
    for mask in 0u32..(1 << n.saturating_sub(1)) {
        let sign: Vec<i8> = (0..n)
            .map(|k| if k > 0 && mask & (1 << (k - 1)) != 0 { -1 } else { 1 })
            .collect();
        for p in &perms {
            let image = u.signed_permutation(p, &sign);
            let key = hnf2(&image.u, &image.v);
            if best.as_ref().is_none_or(|b| cmp_key(&key, b) == Ordering::Less) {
                best = Some(key);
            }
        }
    }
    let (cu, cv) = best.expect("at least one group element");
    Subtorus2D { u: cu, v: cv }
}

/// The `(num, den)` of a rational as `i64`, if it fits.
pub fn to_i64_pair(x: &Rational) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[i64]) -> Subtorus1D {
        Subtorus1D::from_i64(v).unwrap()
    }

    #[test]
    fn point_values() {
        let p = TorusPoint::new(vec![rat(1, 4), rat(3, 4)]);
        assert_eq!(d_point(&p), rat(1, 4));
        let p = TorusPoint::new(vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
        assert_eq!(d_point(&p), rat(0, 1));
        let p = TorusPoint::new(vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(d_point(&p), rat(1, 2));
    }

    #[test]
    fn line_values() {
        assert_eq!(d_line_oracle(&line(&[1, 2, 3])).unwrap(), rat(1, 4));
        assert_eq!(d_line_oracle(&line(&[8, 7, 15, 23])).unwrap(), rat(5, 19));
        assert_eq!(d_line_oracle(&line(&[1, 1])).unwrap(), rat(0, 1));
        assert_eq!(d_line_oracle(&line(&[5])).unwrap(), rat(0, 1));
        assert_eq!(d_line_oracle(&line(&[1, -2, 3])).unwrap(), rat(1, 4));
        assert_eq!(
            d_line_oracle(&line(&[1, 0, 2])),
            Err(Error::ImproperSubtorus)
        );
    }

    #[test]
    fn big_path_agrees() {
        for v in [[1i64, 2, 3, 4], [8, 7, 15, 23], [3, 5, 7, 2]] {
            let big: Vec<Int> = v.iter().map(|&x| Int::from(x)).collect();
            let (p, q) = d_line_fraction(&v);
            assert_eq!(d_line_big(&big), rat(p, q));
        }
    }

    #[test]
    fn coset_line_values() {
        let l = CosetLine::new(
            TorusPoint::new(vec![rat(0, 1); 4]),
            IntVector::from_i64(&[1, 1, 2, 3]),
        )
        .unwrap();
        let (m, arg) = d_coset_line(&l).unwrap();
        assert_eq!(m, rat(1, 4));
        assert_eq!(
            arg,
            vec![Argmin::Point(rat(1, 4)), Argmin::Point(rat(3, 4))]
        );
        let l = CosetLine::new(
            TorusPoint::new(vec![rat(0, 1), rat(1, 4), rat(2, 4), rat(3, 4)]),
            IntVector::from_i64(&[1, 0, 0, 0]),
        )
        .unwrap();
        let (m, arg) = d_coset_line(&l).unwrap();
        assert_eq!(m, rat(1, 4));
        assert_eq!(arg, vec![Argmin::Interval(rat(1, 4), rat(3, 4))]);
    }

    #[test]
    fn plane_values() {
        let u1 = Subtorus2D::from_i64(&[0, 1, 2, 3], &[1, 0, 0, 0]).unwrap();
        assert_eq!(d_plane(&u1).unwrap(), rat(1, 4));
        let u8 = Subtorus2D::from_i64(&[1, 2, 3, 2, 0, 0, 0], &[0, 0, 0, 2, 1, 2, 3]).unwrap();
        assert_eq!(d_plane(&u8).unwrap(), rat(3, 10));
        let u3 = Subtorus2D::from_i64(&[0, 1, 4], &[1, 0, 0]).unwrap();
        assert_eq!(d_plane(&u3).unwrap(), rat(1, 10));
        let full = Subtorus2D::from_i64(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(d_plane(&full).unwrap(), rat(0, 1));
        let diag = Subtorus2D::from_i64(&[0, 1, 2, 3, 3], &[1, 0, 0, 0, 0]).unwrap();
        assert_eq!(d_plane(&diag).unwrap(), rat(1, 4));
    }

    #[test]
    fn canonical_forms() {
        let u1 = Subtorus2D::from_i64(&[0, 1, 2, 3], &[1, 0, 0, 0]).unwrap();
        assert!(canonicalize_symmetry(&u1).same_subtorus(&u1));
        let u3 = Subtorus2D::from_i64(&[0, 1, 4], &[1, 0, 0]).unwrap();
        let alt = Subtorus2D::from_i64(&[1, 1, 4], &[-1, 1, 4]).unwrap();
        assert_eq!(canonicalize_symmetry(&u3), canonicalize_symmetry(&alt));
        let moved = u3.signed_permutation(&[2, 0, 1], &[-1, 1, -1]);
        assert_eq!(canonicalize_symmetry(&u3), canonicalize_symmetry(&moved));
    }

    #[test]
    fn projection_drops_copies() {
        let diag = Subtorus2D::from_i64(&[0, 1, 2, 3, -3], &[1, 0, 0, 0, 0]).unwrap();
        let p = diag.projected();
        assert_eq!(p.dim(), 4);
        assert!(p.contained_diagonal().is_none());
    }
}
