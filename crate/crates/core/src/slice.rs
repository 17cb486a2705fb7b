//! Slices `U ∩ {x_i = eps x_j}` of a two-dimensional subtorus and the points a line
//! `<A u + B v>` of `U` has on each of their components.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{complete_to_basis, frac, primitive_kernel, rat_int, Int, IntVector, Rational};
use crate::pwl::{build_restriction, coset_min_direct, CirclePwl};
use crate::torus::{CosetLine, Subtorus2D, TorusPoint};

/// Structure of one slice `U_{i,j,eps}`.
///
/// In the basis `(u', v')` the slice is `R/Z × {0, 1/K, …, (K-1)/K}`; `u = z1 u' + z2 v'`
/// and `v = z3 u' + z4 v'`.
#[derive(Clone, Debug)]
pub struct SliceStructure {
    /// Zero-based coordinate indices and the sign.
    pub i: usize,
    pub j: usize,
    pub eps: i8,
    /// `u' = a0 u + b0 v`.
    pub a0: Int,
    pub b0: Int,
    /// `v' = c u + d v`.
    pub c: Int,
    pub d: Int,
    pub u_prime: IntVector,
    pub v_prime: IntVector,
    pub k: Int,
    pub z: [Int; 4],
    pub omega: Int,
    /// Component `l` is the coset line `l v'/K + R u'`.
    pub lines: Vec<CosetLine>,
    pub restrictions: Vec<CirclePwl>,
}

/// Points of `<A u + B v>` on a slice: `b_l/q + <1/q>` on component `l`, with `b_l = a l / K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePoints {
    pub q: Int,
    pub delta: i8,
    pub a: Int,
    pub offsets: Vec<Rational>,
}

/// Structure of the slice `{x_i = eps x_j}` (zero-based `i`, `j`).
pub fn slice_structure(u: &Subtorus2D, i: usize, j: usize, eps: i8) -> Result<SliceStructure> {
    let n = u.dim();
    if i >= n || j >= n || i == j {
        return Err(Error::DimensionMismatch { expected: n, found: i.max(j) + 1 });
    }
    let e = Int::from(eps);
    let alpha = &u.u().0[i] - &e * &u.u().0[j];
    let beta = &u.v().0[i] - &e * &u.v().0[j];
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::DegenerateSlice);
    }
    let (a0, b0) = primitive_kernel(&alpha, &beta)?;
    let u_prime = u.combo(&a0, &b0);
    let comp = complete_to_basis(&u_prime, u.u(), u.v())?;
    let v_prime = comp.v_prime.clone();
    let k = (&v_prime.0[i] - &e * &v_prime.0[j]).abs();
    let det = comp.det();
    let z = [
        &comp.d * &det,
        -&comp.b0 * &det,
        -&comp.c * &det,
        &comp.a0 * &det,
    ];
    let omega = &z[0] * &z[3] - &z[1] * &z[2];
    if omega.abs() != Int::from(1) {
        return Err(Error::Invariant(format!("slice transition has determinant {omega}")));
    }
    if u.u() != &u_prime.combine(&z[0], &v_prime, &z[1])
        || u.v() != &u_prime.combine(&z[2], &v_prime, &z[3])
    {
        return Err(Error::Invariant("slice basis change does not invert".into()));
    }
    let kk: usize = (&k)
        .try_into()
        .map_err(|_| Error::Invariant("too many slice components".into()))?;
    let mut lines = Vec::with_capacity(kk);
    let mut restrictions = Vec::with_capacity(kk);
    for l in 0..kk {
        let t = Rational::new(Int::from(l), k.clone());
        let base = TorusPoint::new(v_prime.0.iter().map(|x| &t * rat_int(x)).collect());
        let line = CosetLine::new(base, u_prime.clone())?;
        restrictions.push(build_restriction(&line)?);
        lines.push(line);
    }
    Ok(SliceStructure {
        i,
        j,
        eps,
        a0,
        b0,
        c: comp.c.clone(),
        d: comp.d.clone(),
        u_prime,
        v_prime,
        k,
        z,
        omega,
        lines,
        restrictions,
    })
}

impl SliceStructure {
    /// `z2 A + z4 B`, whose absolute value is `q`.
    pub fn q_form(&self, a: &Int, b: &Int) -> Int {
        &self.z[1] * a + &self.z[3] * b
    }

    /// `z1 A + z3 B`.
    pub fn p_form(&self, a: &Int, b: &Int) -> Int {
        &self.z[0] * a + &self.z[2] * b
    }

    /// Label with one-based coordinates, e.g. `(2,4,-)`.
    pub fn label(&self) -> String {
        format!(
            "({},{},{})",
            self.i + 1,
            self.j + 1,
            if self.eps > 0 { '+' } else { '-' }
        )
    }

    /// `D(T ∩ U_{i,j,eps})` for `T = <A u + B v>`, by direct evaluation on every component.
    pub fn value_on(&self, a: &Int, b: &Int) -> Result<Rational> {
        match slice_points(self, a, b) {
            Ok(p) => {
                let mut best: Option<Rational> = None;
                for (f, off) in self.restrictions.iter().zip(&p.offsets) {
                    let v = coset_min_direct(f, off, &p.q)?;
                    if best.as_ref().is_none_or(|x| v < *x) {
                        best = Some(v);
                    }
                }
                best.ok_or(Error::DegenerateSlice)
            }
            Err(Error::LineInSlice) => Ok(self.restrictions[0].min_value().clone()),
            Err(e) => Err(e),
        }
    }
}

/// Points of `T = <A u + B v>` on each component of the slice.
pub fn slice_points(s: &SliceStructure, a: &Int, b: &Int) -> Result<SlicePoints> {
    let qf = s.q_form(a, b);
    if qf.is_zero() {
        return Err(Error::LineInSlice);
    }
    let delta: i8 = if qf.is_negative() { -1 } else { 1 };
    let q = qf.abs();
    let a_res = (s.p_form(a, b) * Int::from(delta)).mod_floor(&s.k);
    let offsets = (0..s.restrictions.len())
        .map(|l| frac(&Rational::new(&a_res * Int::from(l), s.k.clone())))
        .collect();
    Ok(SlicePoints {
        q,
        delta,
        a: a_res,
        offsets,
    })
}

/// `D(<A u + B v>)` as the minimum over all slices, each evaluated on its components.
pub fn d_line_via_slices(slices: &[SliceStructure], a: &Int, b: &Int) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for s in slices {
        let v = s.value_on(a, b)?;
        if best.as_ref().is_none_or(|x| v < *x) {
            best = Some(v);
        }
    }
    best.ok_or(Error::DegenerateSlice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::torus::{all_slices, d_line_oracle};

    fn u1() -> Subtorus2D {
        Subtorus2D::from_i64(&[0, 1, 2, 3], &[1, 0, 0, 0]).unwrap()
    }

    fn u2() -> Subtorus2D {
        Subtorus2D::from_i64(&[1, 0, 1, 1], &[1, 1, 0, 2]).unwrap()
    }

    #[test]
    fn component_counts() {
        assert_eq!(slice_structure(&u1(), 1, 3, -1).unwrap().k, int(4));
        assert_eq!(slice_structure(&u2(), 2, 3, 1).unwrap().k, int(2));
        assert_eq!(slice_structure(&u1(), 0, 1, 1).unwrap().k, int(1));
        let d = Subtorus2D::from_i64(&[0, 1, 1], &[1, 0, 0]).unwrap();
        assert!(matches!(slice_structure(&d, 1, 2, 1), Err(Error::DegenerateSlice)));
    }

    #[test]
    fn flat_components() {
        let s = slice_structure(&u1(), 1, 3, -1).unwrap();
        assert!(s.restrictions[1].is_flat());
        assert!(s.restrictions[3].is_flat());
        assert_eq!(s.restrictions[1].min_value(), &rat(1, 4));
    }

    #[test]
    fn points_lie_on_line() {
        let u = u2();
        for s in all_slices(&u).unwrap() {
            for (a, b) in [(1i64, 2i64), (3, -5), (7, 4)] {
                let (a, b) = (int(a), int(b));
                let p = slice_points(&s, &a, &b).unwrap();
                for (l, off) in p.offsets.iter().enumerate() {
                    let x = (off + rat(1, 1)) / rat_int(&p.q);
                    let y = Rational::new(Int::from(l), s.k.clone());
                    // parameters w.r.t. (u, v)
                    let pa = &x * rat_int(&s.a0) + &y * rat_int(&s.c);
                    let pb = &x * rat_int(&s.b0) + &y * rat_int(&s.d);
                    let fun = rat_int(&b) * pa - rat_int(&a) * pb;
                    assert!(fun.is_integer());
                }
            }
        }
    }

    #[test]
    fn slice_route_matches_oracle() {
        let u = u2();
        let slices = all_slices(&u).unwrap();
        for a in 0..6i64 {
            for b in -6..7i64 {
                if num_integer::gcd(a, b) != 1 || (a == 0 && b != 1) {
                    continue;
                }
                let t = u.line(&int(a), &int(b)).unwrap();
                if !t.is_proper() {
                    continue;
                }
                assert_eq!(
                    d_line_via_slices(&slices, &int(a), &int(b)).unwrap(),
                    d_line_oracle(&t).unwrap()
                );
            }
        }
    }
}
