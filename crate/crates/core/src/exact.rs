//! Exact integers, rationals and the small amount of lattice linear algebra
//! needed for rank-two sublattices of `Z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational in lowest terms.
pub type Rational = BigRational;

/// Shorthand for an [`Int`] from a machine integer.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: &Int) -> Rational {
    Rational::from_integer(n.clone())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Least common multiple, always non-negative.
pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::zero();
    }
    a.lcm(b)
}

/// Least non-negative residue of `a` modulo `m > 0`.
pub fn modulo(a: &Int, m: &Int) -> Int {
    a.mod_floor(m)
}

/// Smallest integer `>= x`.
pub fn ceil_int(x: &Rational) -> Int {
    x.ceil().to_integer()
}

/// Format as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: Int = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Extended gcd: `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn gcd_ext(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Integer vector in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<Int>);

impl IntVector {
    pub fn from_i64(v: &[i64]) -> Self {
        IntVector(v.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![Int::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn get(&self, i: usize) -> &Int {
        &self.0[i]
    }

    /// gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, x| g.gcd(x))
    }

    /// `a*self + b*other`.
    pub fn combine(&self, a: &Int, other: &IntVector, b: &Int) -> IntVector {
        IntVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn scale(&self, a: &Int) -> IntVector {
        IntVector(self.0.iter().map(|x| a * x).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }

    /// Divide out the content and make the first nonzero entry positive.
    pub fn primitive(&self) -> Result<IntVector> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut w: Vec<Int> = self.0.iter().map(|x| x / &g).collect();
        if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            w.iter_mut().for_each(|x| *x = -&*x);
        }
        Ok(IntVector(w))
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Parse a comma separated integer list such as `1,2,3`.
pub fn parse_int_vector(s: &str) -> Result<IntVector> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Int>()
                .map_err(|_| Error::Parse(format!("invalid integer `{}`", t.trim())))
        })
        .collect::<Result<Vec<_>>>()
        .map(IntVector)
}

/// Parse a pair of vectors written `a,b,c;d,e,f`.
pub fn parse_basis(s: &str) -> Result<(IntVector, IntVector)> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("basis `{s}` needs two vectors separated by `;`")))?;
    let (u, v) = (parse_int_vector(a)?, parse_int_vector(b)?);
    if u.len() != v.len() {
        return Err(Error::Parse("basis vectors differ in length".into()));
    }
    Ok((u, v))
}

/// Primitive solution `(A0, B0)` of `alpha*A + beta*B = 0`, first nonzero entry positive.
pub fn primitive_kernel(alpha: &Int, beta: &Int) -> Result<(Int, Int)> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::DegenerateConstraint);
    }
    let g = alpha.gcd(beta);
    let (mut a, mut b) = (beta / &g, -(alpha / &g));
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
    }
    Ok((a, b))
}

/// gcd of the 2x2 minors of the matrix with rows `u`, `v`.
pub fn minors_gcd(u: &IntVector, v: &IntVector) -> Int {
    let n = u.len();
    let mut g = Int::zero();
    for i in 0..n {
        for j in i + 1..n {
            g = g.gcd(&(&u.0[i] * &v.0[j] - &u.0[j] * &v.0[i]));
        }
    }
    g
}

/// Basis of `span_R(u, v) ∩ Z^n`.
///
/// An already saturated input is returned unchanged; otherwise the Hermite
/// normal form of the saturation is returned.
pub fn saturate_plane(u: &IntVector, v: &IntVector) -> Result<(IntVector, IntVector)> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let g = minors_gcd(u, v);
    if g.is_zero() {
        return Err(Error::NotAPlane);
    }
    if g.is_one() {
        return Ok((u.clone(), v.clone()));
    }
    let n = u.len();
    // Rows of m are coordinates; w tracks the inverse of the accumulated row operations.
    let mut m: Vec<[Int; 2]> = (0..n).map(|k| [u.0[k].clone(), v.0[k].clone()]).collect();
    let mut w: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    for col in 0..2 {
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let (a, b) = (m[col][col].clone(), m[r][col].clone());
            let (gg, x, y) = gcd_ext(&a, &b);
            let (ag, bg) = (&a / &gg, &b / &gg);
            for c in 0..2 {
                let (p, q) = (m[col][c].clone(), m[r][c].clone());
                m[col][c] = &x * &p + &y * &q;
                m[r][c] = -&bg * &p + &ag * &q;
            }
            for row in w.iter_mut() {
                let (p, q) = (row[col].clone(), row[r].clone());
                row[col] = &p * &ag + &q * &bg;
                row[r] = -&p * &y + &q * &x;
            }
        }
    }
    let s1 = IntVector((0..n).map(|i| w[i][0].clone()).collect());
    let s2 = IntVector((0..n).map(|i| w[i][1].clone()).collect());
    Ok(hnf2(&s1, &s2))
}

/// Row Hermite normal form of a rank-two pair: pivots positive, the entry of the
/// first row above the second pivot reduced into `[0, pivot)`.
pub fn hnf2(u: &IntVector, v: &IntVector) -> (IntVector, IntVector) {
    let n = u.len();
    let (mut r1, mut r2) = (u.0.clone(), v.0.clone());
    let mut c1 = 0;
    while c1 < n && r1[c1].is_zero() && r2[c1].is_zero() {
        c1 += 1;
    }
    if c1 == n {
        return (IntVector(r1), IntVector(r2));
    }
    let (g, x, y) = gcd_ext(&r1[c1], &r2[c1]);
    let (ag, bg) = (&r1[c1] / &g, &r2[c1] / &g);
    let n1: Vec<Int> = (0..n).map(|k| &x * &r1[k] + &y * &r2[k]).collect();
    let n2: Vec<Int> = (0..n).map(|k| -&bg * &r1[k] + &ag * &r2[k]).collect();
    r1 = n1;
    r2 = n2;
    let mut c2 = c1 + 1;
    while c2 < n && r2[c2].is_zero() {
        c2 += 1;
    }
    if c2 < n {
        if r2[c2].is_negative() {
            r2.iter_mut().for_each(|t| *t = -&*t);
        }
        let q = r1[c2].div_floor(&r2[c2]);
        for k in 0..n {
            let t = &q * &r2[k];
            r1[k] -= t;
        }
    }
    (IntVector(r1), IntVector(r2))
}

/// A basis `(u', v')` of a rank-two lattice adapted to a primitive vector `u'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCompletion {
    /// `u' = a0*u + b0*v`.
    pub a0: Int,
    pub b0: Int,
    /// `v' = c*u + d*v`.
    pub c: Int,
    pub d: Int,
    pub v_prime: IntVector,
}

impl BasisCompletion {
    /// Determinant `a0*d - b0*c`, which is `±1`.
    pub fn det(&self) -> Int {
        &self.a0 * &self.d - &self.b0 * &self.c
    }
}

/// Coordinates of `w` in the basis `(u, v)`, if `w` lies in the integer span.
pub fn lattice_coords(w: &IntVector, u: &IntVector, v: &IntVector) -> Result<(Int, Int)> {
    let n = u.len();
    if w.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let det = &u.0[i] * &v.0[j] - &u.0[j] * &v.0[i];
            if det.is_zero() {
                continue;
            }
            let an = &w.0[i] * &v.0[j] - &w.0[j] * &v.0[i];
            let bn = &u.0[i] * &w.0[j] - &u.0[j] * &w.0[i];
            if !(&an % &det).is_zero() || !(&bn % &det).is_zero() {
                return Err(Error::NotOnSubtorus);
            }
            let (a, b) = (an / &det, bn / &det);
            if u.combine(&a, v, &b) != *w {
                return Err(Error::NotOnSubtorus);
            }
            return Ok((a, b));
        }
    }
    Err(Error::NotAPlane)
}

/// Complete the primitive lattice vector `w` to a basis `(w, v')` of `span_Z(u, v)`.
///
/// When `w` already pairs with `u` or `v` into a basis, that vector is used.
pub fn complete_to_basis(w: &IntVector, u: &IntVector, v: &IntVector) -> Result<BasisCompletion> {
    let (a0, b0) = lattice_coords(w, u, v)?;
    if !a0.gcd(&b0).is_one() {
        return Err(Error::NotPrimitive);
    }
    let (c, d) = if b0.abs().is_one() {
        (Int::one(), Int::zero())
    } else if a0.abs().is_one() {
        (Int::zero(), Int::one())
    } else {
        let (_, x, y) = gcd_ext(&a0, &b0);
        (-y, x)
    };
    let v_prime = u.combine(&c, v, &d);
    Ok(BasisCompletion { a0, b0, c, d, v_prime })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::from_i64(v)
    }

    #[test]
    fn gcd_ext_examples() {
        assert_eq!(gcd_ext(&int(8), &int(12)), (int(4), int(-1), int(1)));
        assert_eq!(gcd_ext(&int(1), &int(0)), (int(1), int(1), int(0)));
        assert_eq!(gcd_ext(&int(0), &int(0)).0, int(0));
        let (g, x, y) = gcd_ext(&int(-35), &int(15));
        assert_eq!(g, int(5));
        assert_eq!(int(-35) * x + int(15) * y, int(5));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(primitive_kernel(&int(1), &int(-1)).unwrap(), (int(1), int(1)));
        assert_eq!(primitive_kernel(&int(2), &int(4)).unwrap(), (int(2), int(-1)));
        assert_eq!(primitive_kernel(&int(0), &int(3)).unwrap(), (int(1), int(0)));
        assert_eq!(
            primitive_kernel(&int(0), &int(0)),
            Err(Error::DegenerateConstraint)
        );
    }

    #[test]
    fn saturation() {
        let (u, v) = saturate_plane(&iv(&[1, 0, 0]), &iv(&[0, 1, 0])).unwrap();
        assert_eq!((u, v), (iv(&[1, 0, 0]), iv(&[0, 1, 0])));
        let (u, v) = saturate_plane(&iv(&[2, 0, 0]), &iv(&[0, 2, 0])).unwrap();
        assert_eq!((u, v), (iv(&[1, 0, 0]), iv(&[0, 1, 0])));
        let (u, v) = saturate_plane(&iv(&[1, 1, 4]), &iv(&[-1, 1, 4])).unwrap();
        assert_eq!(minors_gcd(&u, &v), int(1));
        assert_eq!(hnf2(&u, &v), hnf2(&iv(&[0, 1, 4]), &iv(&[1, 0, 0])));
        assert_eq!(
            saturate_plane(&iv(&[1, 2, 3]), &iv(&[2, 4, 6])),
            Err(Error::NotAPlane)
        );
    }

    #[test]
    fn completion() {
        let (u, v) = (iv(&[0, 1, 2, 3]), iv(&[1, 0, 0, 0]));
        let c = complete_to_basis(&iv(&[1, 0, 0, 0]), &u, &v).unwrap();
        assert_eq!(c.v_prime, iv(&[0, 1, 2, 3]));
        assert!(c.det().abs().is_one());
        let c = complete_to_basis(&u, &u, &v).unwrap();
        assert_eq!(c.v_prime, v);
        assert_eq!(
            complete_to_basis(&iv(&[2, 2, 4, 6]), &u, &v),
            Err(Error::NotPrimitive)
        );
        let c = complete_to_basis(&iv(&[3, 2, 4, 6]), &u, &v).unwrap();
        assert!(c.det().abs().is_one());
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rat(6, 8)), "3/4");
        assert_eq!(format_rational(&rat(8, 1)), "8");
        assert_eq!(parse_rational(" -3/9 ").unwrap(), rat(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(
            parse_basis("0,1,2,3;1,0,0,0").unwrap(),
            (iv(&[0, 1, 2, 3]), iv(&[1, 0, 0, 0]))
        );
    }
}
