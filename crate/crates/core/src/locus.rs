//! The set `Z(U)` of points of a two-dimensional subtorus at which `D` attains `D(U)`,
//! in the parameter square `x = a u + b v`, and the finiteness test built on it.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{frac, gcd_ext, rat, rat_int, Int, Rational};
use crate::pwl::{build_restriction, Argmin};
use crate::torus::{d_plane, d_point, CosetLine, Subtorus2D};

pub type Param = (Rational, Rational);

/// A point of `Z(U)` or a maximal closed segment `start + s direction`, `0 <= s <= length`.
///
/// `start` lies in `[0, 1)^2`; a segment of length one is a whole closed leaf.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LocusElement {
    Segment {
        start: Param,
        direction: (Int, Int),
        length: Rational,
    },
    Point(Param),
}

impl LocusElement {
    /// `start + length * direction`, not reduced modulo one.
    pub fn end(&self) -> Param {
        match self {
            LocusElement::Segment {
                start,
                direction,
                length,
            } => (
                &start.0 + length * rat_int(&direction.0),
                &start.1 + length * rat_int(&direction.1),
            ),
            LocusElement::Point(p) => p.clone(),
        }
    }

    pub fn is_segment(&self) -> bool {
        matches!(self, LocusElement::Segment { .. })
    }

    /// Points at which `D = D(U)` can be checked exactly.
    pub fn samples(&self) -> Vec<Param> {
        match self {
            LocusElement::Point(p) => vec![p.clone()],
            LocusElement::Segment {
                start,
                direction,
                length,
            } => [rat(0, 1), rat(1, 3), rat(1, 2), rat(1, 1)]
                .iter()
                .map(|f| {
                    let s = f * length;
                    (
                        &start.0 + &s * rat_int(&direction.0),
                        &start.1 + &s * rat_int(&direction.1),
                    )
                })
                .collect(),
        }
    }

    /// Whether the parameter point (taken modulo one) belongs to the element.
    pub fn contains(&self, q: &Param) -> bool {
        match self {
            LocusElement::Point(p) => frac(&p.0) == frac(&q.0) && frac(&p.1) == frac(&q.1),
            LocusElement::Segment {
                start,
                direction,
                length,
            } => {
                let g = Leaf::new(direction);
                if g.id(start) != g.id(q) {
                    return false;
                }
                let s = frac(&(g.coord(q) - g.coord(start)));
                &s <= length || length >= &Rational::one()
            }
        }
    }
}

/// A primitive direction `w` together with `e` such that `(w, e)` is unimodular.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Leaf {
    w: (Int, Int),
    e: (Int, Int),
}

fn cross(p: &Param, q: &Param) -> Rational {
    &p.0 * &q.1 - &p.1 * &q.0
}

fn as_param(v: &(Int, Int)) -> Param {
    (rat_int(&v.0), rat_int(&v.1))
}

impl Leaf {
    fn new(w: &(Int, Int)) -> Self {
        let (_, x, y) = gcd_ext(&w.0, &w.1);
        Leaf {
            w: w.clone(),
            e: (-y, x),
        }
    }

    /// Constant along each closed leaf of direction `w`.
    fn id(&self, q: &Param) -> Rational {
        frac(&cross(&as_param(&self.w), q))
    }

    /// Position along the leaf, modulo one.
    fn coord(&self, q: &Param) -> Rational {
        frac(&cross(q, &as_param(&self.e)))
    }

    fn point(&self, id: &Rational, s: &Rational) -> Param {
        (
            s * rat_int(&self.w.0) + id * rat_int(&self.e.0),
            s * rat_int(&self.w.1) + id * rat_int(&self.e.1),
        )
    }
}

fn normalise_dir(a: Int, b: Int) -> (Int, Int) {
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        (-a, -b)
    } else {
        (a, b)
    }
}

fn reduce(p: &Param) -> Param {
    (frac(&p.0), frac(&p.1))
}

/// Union of closed arcs `[s, s + len]` on `R/Z`; `None` when the union is the whole circle.
fn merge_arcs(mut arcs: Vec<(Rational, Rational)>) -> Option<Vec<(Rational, Rational)>> {
    if arcs.iter().any(|(_, l)| l >= &Rational::one()) {
        return None;
    }
    arcs.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (s, l) in arcs {
        let end = &s + &l;
        match merged.last_mut() {
            Some((_, me)) if &s <= me => {
                if &end > me {
                    *me = end;
                }
            }
            _ => merged.push((s, end)),
        }
    }
    if merged.len() > 1 {
        let first = merged[0].clone();
        let last = merged.last().expect("nonempty").clone();
        if last.1 >= &first.0 + Rational::one() {
            merged.remove(0);
            let lst = merged.last_mut().expect("nonempty");
            lst.1 = lst.1.clone().max(&first.1 + Rational::one());
        }
    }
    if merged.iter().any(|(s, e)| e - s >= Rational::one()) {
        return None;
    }
    Some(merged.into_iter().map(|(s, e)| (s.clone(), e - s)).collect())
}

/// `Z(U)`, with segments maximal and points lying on no segment.
pub fn zero_locus(u: &Subtorus2D) -> Result<Vec<LocusElement>> {
    let d = d_plane(u)?;
    let n = u.dim();
    let half = rat(1, 2);
    let mut levels = vec![&half - &d, &half + &d];
    levels.dedup();
    let mut leaves: BTreeMap<(Leaf, Rational), Vec<(Rational, Rational)>> = BTreeMap::new();
    for k in 0..n {
        let (uk, vk) = (u.u().0[k].clone(), u.v().0[k].clone());
        let (g, x, y) = gcd_ext(&uk, &vk);
        if g.is_zero() {
            return Err(Error::ImproperSubtorus);
        }
        let w = normalise_dir(-(&vk / &g), &uk / &g);
        let leaf = Leaf::new(&w);
        let dir_vec = u.combo(&w.0, &w.1);
        for c in &levels {
            let mut j = Int::zero();
            while j < g {
                let scale = (c + rat_int(&j)) / rat_int(&g);
                let p = (&scale * rat_int(&x), &scale * rat_int(&y));
                let line = CosetLine::new(u.point(&p.0, &p.1), dir_vec.clone())?;
                let f = build_restriction(&line)?;
                if f.min_value() == &d {
                    let id = leaf.id(&p);
                    let base = cross(&p, &as_param(&leaf.e));
                    for m in f.argmin() {
                        let (t, len) = match m {
                            Argmin::Point(t) => (t.clone(), Rational::zero()),
                            Argmin::Interval(s, e) => (s.clone(), e - s),
                        };
                        leaves
                            .entry((leaf.clone(), id.clone()))
                            .or_default()
                            .push((frac(&(&base + &t)), len));
                    }
                }
                j += 1;
            }
        }
    }
    let mut segments = Vec::new();
    let mut points = Vec::new();
    for ((leaf, id), arcs) in leaves {
        match merge_arcs(arcs) {
            None => segments.push(LocusElement::Segment {
                start: reduce(&leaf.point(&id, &Rational::zero())),
                direction: leaf.w.clone(),
                length: Rational::one(),
            }),
            Some(list) => {
                for (s, l) in list {
                    let start = reduce(&leaf.point(&id, &s));
                    if l.is_zero() {
                        points.push(LocusElement::Point(start));
                    } else {
                        segments.push(LocusElement::Segment {
                            start,
                            direction: leaf.w.clone(),
                            length: l,
                        });
                    }
                }
            }
        }
    }
    points.sort();
    points.dedup();
    let mut out: Vec<LocusElement> = segments;
    for p in points {
        let LocusElement::Point(q) = &p else { unreachable!() };
        if !out.iter().any(|s| s.is_segment() && s.contains(q)) {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// Whether every sample of every element attains `D(U)`.
pub fn verify_locus(u: &Subtorus2D, elements: &[LocusElement]) -> Result<bool> {
    let d = d_plane(u)?;
    Ok(elements
        .iter()
        .flat_map(|e| e.samples())
        .all(|p| d_point(&u.point(&p.0, &p.1)) == d))
}

/// Verdict on the relative spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    /// Two non-parallel segments of `Z(U)`.
    Finite {
        first: LocusElement,
        second: LocusElement,
    },
    /// All segments share `direction`, or there are none.
    Infinite { direction: Option<(Int, Int)> },
}

impl Finiteness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite { .. })
    }
}

/// The relative spectrum is finite exactly when `Z(U)` has non-parallel segments.
pub fn finiteness(u: &Subtorus2D) -> Result<Finiteness> {
    let z = zero_locus(u)?;
    let segs: Vec<&LocusElement> = z.iter().filter(|e| e.is_segment()).collect();
    let dir = |e: &LocusElement| match e {
        LocusElement::Segment { direction, .. } => direction.clone(),
        LocusElement::Point(_) => unreachable!(),
    };
    let Some(first) = segs.first() else {
        return Ok(Finiteness::Infinite { direction: None });
    };
    match segs.iter().find(|s| dir(s) != dir(first)) {
        Some(second) => Ok(Finiteness::Finite {
            first: (*first).clone(),
            second: (*second).clone(),
        }),
        None => Ok(Finiteness::Infinite {
            direction: Some(dir(first)),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn u8() -> Subtorus2D {
        Subtorus2D::from_i64(&[1, 2, 3, 2, 0, 0, 0], &[0, 0, 0, 2, 1, 2, 3]).unwrap()
    }

    fn seg(a: (i64, i64), b: (i64, i64), w: (i64, i64), l: (i64, i64)) -> LocusElement {
        LocusElement::Segment {
            start: (rat(a.0, a.1), rat(b.0, b.1)),
            direction: (int(w.0), int(w.1)),
            length: rat(l.0, l.1),
        }
    }

    #[test]
    fn u8_locus() {
        let z = zero_locus(&u8()).unwrap();
        let mut want = Vec::new();
        for x in [(2, 5), (3, 5)] {
            for y in [(1, 5), (11, 15)] {
                want.push(seg(x, y, (0, 1), (1, 15)));
                want.push(seg(y, x, (1, 0), (1, 15)));
            }
        }
        for k in 1..5 {
            want.push(LocusElement::Point((rat(k, 5), rat(k, 5))));
        }
        want.sort();
        assert_eq!(z, want);
        assert!(verify_locus(&u8(), &z).unwrap());
        assert!(finiteness(&u8()).unwrap().is_finite());
    }

    #[test]
    fn full_torus_locus() {
        let t = Subtorus2D::from_i64(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(
            zero_locus(&t).unwrap(),
            vec![LocusElement::Point((rat(1, 2), rat(1, 2)))]
        );
    }

    #[test]
    fn u1_locus_is_parallel() {
        let u = Subtorus2D::from_i64(&[0, 1, 2, 3], &[1, 0, 0, 0]).unwrap();
        let z = zero_locus(&u).unwrap();
        assert!(verify_locus(&u, &z).unwrap());
        assert!(z.iter().any(|e| e.is_segment()));
        for e in &z {
            if let LocusElement::Segment { direction, .. } = e {
                assert_eq!(direction, &(int(0), int(1)));
            }
        }
        assert_eq!(
            finiteness(&u).unwrap(),
            Finiteness::Infinite {
                direction: Some((int(0), int(1)))
            }
        );
    }

    #[test]
    fn product_with_circle_is_infinite() {
        let u = Subtorus2D::from_i64(&[1, 2, 0], &[0, 0, 1]).unwrap();
        assert!(!finiteness(&u).unwrap().is_finite());
    }

    #[test]
    fn grid_points_lie_on_locus() {
        for u in [u8(), Subtorus2D::from_i64(&[1, 0, 1, 1], &[1, 1, 0, 2]).unwrap()] {
            let d = d_plane(&u).unwrap();
            let z = zero_locus(&u).unwrap();
            let n = 60;
            for i in 0..n {
                for j in 0..n {
                    let p = (rat(i, n), rat(j, n));
                    if d_point(&u.point(&p.0, &p.1)) == d {
                        assert!(z.iter().any(|e| e.contains(&p)), "{p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn arc_union() {
        let r = |a, b| rat(a, b);
        assert_eq!(
            merge_arcs(vec![(r(1, 2), r(1, 4)), (r(5, 8), r(1, 4)), (r(1, 10), r(0, 1))]),
            Some(vec![(r(1, 10), r(0, 1)), (r(1, 2), r(3, 8))])
        );
        assert_eq!(
            merge_arcs(vec![(r(3, 4), r(1, 2)), (r(1, 8), r(1, 8))]),
            Some(vec![(r(3, 4), r(1, 2))])
        );
        assert_eq!(merge_arcs(vec![(r(0, 1), r(1, 2)), (r(1, 2), r(1, 2))]), None);
    }
}
