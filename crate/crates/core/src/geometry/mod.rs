//! Exact-arithmetic geometric kernel.
//!
//! Every coordinate is a [`Scalar`] (an arbitrary-precision rational), so the
//! orientation predicate and the hull feasibility tests never round.

mod hull;
mod lp;

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use hull::{common_point, hulls_intersect, in_convex_hull};
pub(crate) use hull::in_hull_unchecked;
pub use lp::{feasible_vertex, LinearSystem};

/// Exact rational scalar in canonical form (positive denominator, reduced).
pub type Scalar = BigRational;

/// Builds `num/den` as a canonical [`Scalar`]. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued [`Scalar`].
pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Canonical `"p/q"` rendering (always carries the denominator, `"0/1"` for zero).
pub fn format_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer into a canonical [`Scalar`].
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Sign of a scalar as `-1`, `0` or `+1`.
pub fn sign(x: &Scalar) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// A point of `R^d` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Scalar::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Index<usize> for Point {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, rhs: &'a Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, rhs: &'a Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Mul<&'a Scalar> for &'a Point {
    type Output = Point;
    fn mul(self, k: &'a Scalar) -> Point {
        self.scale(k)
    }
}

/// An ordered sequence of points sharing one ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSequence {
    dim: usize,
    points: Vec<Point>,
}

impl PointSequence {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(PointSequence { dim, points })
    }

    /// Sequence of integer points; the dimension is taken from the first row.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.first().map_or(1, |r| r.len());
        PointSequence::new(dim, rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn get(&self, i: usize) -> Result<&Point> {
        self.points.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.points.len(),
        })
    }

    /// The subsequence at the given (increasing) positions.
    pub fn select(&self, idx: &[usize]) -> Result<PointSequence> {
        let points = idx
            .iter()
            .map(|&i| self.get(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSequence {
            dim: self.dim,
            points,
        })
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

impl Index<usize> for PointSequence {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

impl<'a> IntoIterator for &'a PointSequence {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

pub(crate) fn check_same_dim<'a>(
    dim: usize,
    pts: impl IntoIterator<Item = &'a Point>,
) -> Result<()> {
    for p in pts {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    Ok(())
}

/// Orientation of `d+1` points in `R^d`: the sign of the determinant of the
/// point columns with an appended row of ones. Zero iff affinely dependent.
pub fn orient(tuple: &[&Point]) -> Result<i8> {
    let d = tuple.first().map_or(0, |p| p.dim());
    check_same_dim(d, tuple.iter().copied())?;
    if tuple.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: tuple.len(),
        });
    }
    Ok(orient_unchecked(tuple))
}

/// [`orient`] without the arity and dimension checks.
pub(crate) fn orient_unchecked(tuple: &[&Point]) -> i8 {
    let d = tuple.len() - 1;
    let base = tuple[0];
    if d == 1 {
        // det [[p0, p1], [1, 1]] = p0 - p1
        return sign(&(&base[0] - &tuple[1][0]));
    }
    if d == 2 {
        let (a, b) = (tuple[1], tuple[2]);
        let det = (&a[0] - &base[0]) * (&b[1] - &base[1]) - (&a[1] - &base[1]) * (&b[0] - &base[0]);
        return sign(&det);
    }
    // Row r of the integer matrix holds coordinate r of (p_i - p_0), each row
    // scaled by a positive common denominator so the sign is unchanged.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for r in 0..d {
        let diffs: Vec<Scalar> = tuple[1..].iter().map(|p| &p[r] - &base[r]).collect();
        let lcm = diffs
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(
            diffs
                .iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect(),
        );
    }
    let s = bareiss_sign(rows);
    if d % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Sign of the determinant of a square integer matrix (fraction-free elimination).
fn bareiss_sign(mut m: Vec<Vec<BigInt>>) -> i8 {
    let n = m.len();
    let mut flip = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    flip = !flip;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let s = if m[n - 1][n - 1].is_positive() {
        1
    } else if m[n - 1][n - 1].is_negative() {
        -1
    } else {
        0
    };
    if flip {
        -s
    } else {
        s
    }
}

/// True iff every `(d+1)`-subset of `P` has nonzero orientation.
pub fn is_general_position(seq: &PointSequence) -> bool {
    first_dependent_tuple(seq).is_none()
}

/// First (lexicographic) affinely dependent `(d+1)`-subset, if any.
pub fn first_dependent_tuple(seq: &PointSequence) -> Option<Vec<usize>> {
    let k = seq.dim() + 1;
    let cache = OrientCache::new(seq.points());
    let mut found = None;
    for_each_combination(seq.len(), k, |idx| {
        if cache.orient(idx) == 0 {
            found = Some(idx.to_vec());
            false
        } else {
            true
        }
    });
    found
}

/// Orientation oracle over a fixed point list.
///
/// Each axis is rescaled by the lcm of its denominators (a positive factor, so
/// signs are unchanged); when the resulting integers are small enough the
/// determinant is evaluated in `i128`.
pub(crate) struct OrientCache<'a> {
    points: &'a [Point],
    small: Option<Vec<Vec<i64>>>,
}

impl<'a> OrientCache<'a> {
    pub(crate) fn new(points: &'a [Point]) -> Self {
        let d = points.first().map_or(0, |p| p.dim());
        let bound: i64 = match d {
            1 => i64::MAX / 4,
            2 => 1 << 60,
            3 => 1 << 40,
            _ => 0,
        };
        let small = (bound > 0).then(|| Self::scaled(points, d, bound)).flatten();
        OrientCache { points, small }
    }

    fn scaled(points: &[Point], d: usize, bound: i64) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        let mut lcms = vec![BigInt::one(); d];
        for p in points {
            for (c, l) in lcms.iter_mut().enumerate() {
                *l = l.lcm(p[c].denom());
            }
        }
        points
            .iter()
            .map(|p| {
                (0..d)
                    .map(|c| {
                        let v = (p[c].numer() * (&lcms[c] / p[c].denom())).to_i64()?;
                        (v.abs() < bound).then_some(v)
                    })
                    .collect::<Option<Vec<i64>>>()
            })
            .collect()
    }

    /// Orientation of the points at `idx` (length `d+1`).
    pub(crate) fn orient(&self, idx: &[usize]) -> i8 {
        match &self.small {
            Some(v) => small_orient(v, idx),
            None => {
                let t: Vec<&Point> = idx.iter().map(|&i| &self.points[i]).collect();
                orient_unchecked(&t)
            }
        }
    }
}

fn small_orient(v: &[Vec<i64>], idx: &[usize]) -> i8 {
    let d = idx.len() - 1;
    let b = &v[idx[0]];
    let diff = |i: usize, c: usize| v[idx[i]][c] as i128 - b[c] as i128;
    let det = match d {
        1 => -diff(1, 0),
        2 => diff(1, 0) * diff(2, 1) - diff(1, 1) * diff(2, 0),
        3 => {
            // rows are coordinates, columns the difference vectors; (-1)^3 flips
            let m = |r: usize, c: usize| diff(c + 1, r);
            -(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
        }
        _ => unreachable!("small path only for d <= 3"),
    };
    det.signum() as i8
}

/// Calls `f` on every increasing `k`-subset of `0..n` in lexicographic order
/// until `f` returns `false`. Returns `false` if stopped early.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient as `u128`, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
