//! Point-set generators.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{for_each_combination, OrientCache, Point, PointSequence, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `(i, i^2, ..., i^d)` for `i = 1..n`.
    Moment,
    /// Rational points of the unit circle in angular order (`d = 2`).
    Circle,
    /// `B^(i d^(j-1))` in coordinate `j`: a rapidly growing convex curve.
    StretchedDiagonal,
    /// Random integer points, rejection-sampled into general position.
    Random,
    /// Moment-curve points at random parameters under a random affine map.
    RandomHomogeneous,
    /// The first `n` points of an integer grid in lexicographic order.
    Grid,
}

impl FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "moment" => Self::Moment,
            "circle" => Self::Circle,
            "stretched_diagonal" => Self::StretchedDiagonal,
            "random" => Self::Random,
            "random_homogeneous" => Self::RandomHomogeneous,
            "grid" => Self::Grid,
            _ => return Err(Error::InvalidSpec(format!("unknown kind {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// Base `B >= 2` for the stretched diagonal (default 2).
    pub base: Option<u64>,
    /// Circle: `None` places the points at parameters `0, 1, ..., n-1`;
    /// `Some(q)` spreads them evenly by angle using parameters with denominator `q`.
    pub denominator: Option<u64>,
    /// Coordinate range `[-R, R]` for random points (default `1000 n`).
    pub coord_bound: Option<i64>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, d: usize) -> Self {
        GeneratorSpec {
            kind,
            n,
            d,
            seed: 0,
            base: None,
            denominator: None,
            coord_bound: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<PointSequence> {
    if spec.n == 0 || spec.d == 0 {
        return Err(Error::InvalidSpec("n and d must be positive".into()));
    }
    let pts = match spec.kind {
        GeneratorKind::Moment => moment(spec.n, spec.d),
        GeneratorKind::Circle => {
            if spec.d != 2 {
                return Err(Error::InvalidSpec("circle points need d = 2".into()));
            }
            circle(spec.n, spec.denominator)?
        }
        GeneratorKind::StretchedDiagonal => {
            let b = spec.base.unwrap_or(2);
            if b < 2 {
                return Err(Error::InvalidSpec("base must be at least 2".into()));
            }
            stretched_diagonal(spec.n, spec.d, b)
        }
        GeneratorKind::Random => {
            let r = spec.coord_bound.unwrap_or(1000 * spec.n as i64);
            if r < 1 {
                return Err(Error::InvalidSpec("coordinate bound must be positive".into()));
            }
            random_general(spec.n, spec.d, r, spec.seed)?
        }
        GeneratorKind::RandomHomogeneous => random_homogeneous(spec.n, spec.d, spec.seed),
        GeneratorKind::Grid => grid(spec.n, spec.d),
    };
    PointSequence::new(spec.d, pts)
}

fn moment(n: usize, d: usize) -> Vec<Point> {
    (1..=n as i64)
        .map(|i| {
            let mut c = Vec::with_capacity(d);
            let mut x = BigInt::one();
            for _ in 0..d {
                x *= i;
                c.push(Scalar::from_integer(x.clone()));
            }
            Point::new(c)
        })
        .collect()
}

/// `s -> ((1 - s^2)/(1 + s^2), 2s/(1 + s^2))`, increasing angle in `s`.
fn on_circle(s: &Scalar) -> Point {
    let one = Scalar::one();
    let den = &one + s * s;
    Point::new(vec![(&one - s * s) / &den, (s + s) / den])
}

fn circle(n: usize, denominator: Option<u64>) -> Result<Vec<Point>> {
    let params: Vec<Scalar> = match denominator {
        None => (0..n as i64).map(|i| Scalar::from_integer(i.into())).collect(),
        Some(0) => return Err(Error::InvalidSpec("denominator must be positive".into())),
        Some(q) => {
            let mut v: Vec<Scalar> = (0..n)
                .map(|i| {
                    let theta = -std::f64::consts::PI + std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
                    let s = (theta / 2.0).tan();
                    Scalar::new(BigInt::from((s * q as f64).round() as i64), BigInt::from(q))
                })
                .collect();
            let before = v.len();
            v.dedup();
            if v.len() != before {
                return Err(Error::InvalidSpec(format!(
                    "denominator {q} too small to separate {n} circle points"
                )));
            }
            v
        }
    };
    Ok(params.iter().map(on_circle).collect())
}

fn stretched_diagonal(n: usize, d: usize, b: u64) -> Vec<Point> {
    let base = BigInt::from(b);
    (1..=n)
        .map(|i| {
            let mut c = Vec::with_capacity(d);
            let mut e = i;
            for _ in 0..d {
                c.push(Scalar::from_integer(Pow::pow(&base, e)));
                e *= d;
            }
            Point::new(c)
        })
        .collect()
}

fn random_general(n: usize, d: usize, r: i64, seed: u64) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while pts.len() < n {
        attempts += 1;
        if attempts > 1000 * n + 1000 {
            return Err(Error::InvalidSpec(format!(
                "coordinate range {r} too small for {n} points in general position"
            )));
        }
        let cand = Point::from_ints(&(0..d).map(|_| rng.gen_range(-r..=r)).collect::<Vec<_>>());
        pts.push(cand);
        if creates_dependency(&pts, d) {
            pts.pop();
        }
    }
    Ok(pts)
}

/// Whether the last point closes an affinely dependent `(d+1)`-tuple.
fn creates_dependency(pts: &[Point], d: usize) -> bool {
    let last = pts.len() - 1;
    if pts[..last].contains(&pts[last]) {
        return true;
    }
    if pts.len() < d + 1 {
        return false;
    }
    let cache = OrientCache::new(pts);
    let mut idx = vec![0usize; d + 1];
    !for_each_combination(last, d, |c| {
        idx[..d].copy_from_slice(c);
        idx[d] = last;
        cache.orient(&idx) != 0
    })
}

/// Random increasing parameters on the moment curve, then a random invertible
/// integer affine map. Affine maps scale every orientation by the sign of
/// their determinant, so the result stays orientation-homogeneous.
pub fn random_homogeneous(n: usize, d: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0i64;
    let params: Vec<i64> = (0..n)
        .map(|_| {
            t += rng.gen_range(1..=6);
            t
        })
        .collect();
    let shift = rng.gen_range(-3 * n as i64..=0);
    let base = moment_at(&params.iter().map(|x| x + shift).collect::<Vec<_>>(), d);
    let m = loop {
        let m: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let cols: Vec<Point> = std::iter::once(Point::origin(d))
            .chain((0..d).map(|j| Point::from_ints(&(0..d).map(|i| m[i][j]).collect::<Vec<_>>())))
            .collect();
        let refs: Vec<&Point> = cols.iter().collect();
        if crate::geometry::orient_unchecked(&refs) != 0 {
            break m;
        }
    };
    let off: Vec<i64> = (0..d).map(|_| rng.gen_range(-20..=20)).collect();
    base.iter()
        .map(|p| {
            Point::new(
                (0..d)
                    .map(|i| {
                        (0..d).fold(Scalar::from_integer(off[i].into()), |acc, j| {
                            acc + &p[j] * Scalar::from_integer(m[i][j].into())
                        })
                    })
                    .collect(),
            )
        })
        .collect()
}

fn moment_at(params: &[i64], d: usize) -> Vec<Point> {
    params
        .iter()
        .map(|&x| {
            let mut c = Vec::with_capacity(d);
            let mut v = BigInt::one();
            for _ in 0..d {
                v *= x;
                c.push(Scalar::from_integer(v.clone()));
            }
            Point::new(c)
        })
        .collect()
}

fn grid(n: usize, d: usize) -> Vec<Point> {
    let mut side = 1usize;
    while side.pow(d as u32) < n {
        side += 1;
    }
    (0..n)
        .map(|mut k| {
            let mut c = vec![0i64; d];
            for slot in c.iter_mut().rev() {
                *slot = (k % side) as i64;
                k /= side;
            }
            Point::from_ints(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{is_general_position, orient};
    use crate::homogeneous::is_orientation_homogeneous;

    #[test]
    fn moment_example() {
        let p = generate(&GeneratorSpec::new(GeneratorKind::Moment, 5, 2)).unwrap();
        assert_eq!(
            p,
            PointSequence::from_ints(&[&[1, 1], &[2, 4], &[3, 9], &[4, 16], &[5, 25]]).unwrap()
        );
        assert!(is_orientation_homogeneous(&p));
    }

    #[test]
    fn circle_example() {
        let p = generate(&GeneratorSpec::new(GeneratorKind::Circle, 3, 2)).unwrap();
        assert_eq!(p[0], Point::from_ints(&[1, 0]));
        assert_eq!(p[1], Point::from_ints(&[0, 1]));
        assert_ne!(orient(&[&p[0], &p[1], &p[2]]).unwrap(), 0);
        let mut spec = GeneratorSpec::new(GeneratorKind::Circle, 24, 2);
        spec.denominator = Some(1000);
        assert!(is_orientation_homogeneous(&generate(&spec).unwrap()));
    }

    #[test]
    fn random_is_general() {
        let p = generate(&GeneratorSpec::new(GeneratorKind::Random, 50, 3).seed(7)).unwrap();
        assert_eq!(p.len(), 50);
        assert!(is_general_position(&p));
    }

    #[test]
    fn stretched_and_random_homogeneous() {
        for d in 1..=3 {
            let p = generate(&GeneratorSpec::new(GeneratorKind::StretchedDiagonal, 9, d)).unwrap();
            assert!(is_orientation_homogeneous(&p), "d = {d}");
            let q = generate(&GeneratorSpec::new(GeneratorKind::RandomHomogeneous, 11, d).seed(d as u64))
                .unwrap();
            assert!(is_orientation_homogeneous(&q), "d = {d}");
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            generate(&GeneratorSpec::new(GeneratorKind::Circle, 5, 3)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(generate(&GeneratorSpec::new(GeneratorKind::Moment, 0, 2)).is_err());
        assert!("spiral".parse::<GeneratorKind>().is_err());
        let g = generate(&GeneratorSpec::new(GeneratorKind::Grid, 5, 2)).unwrap();
        assert!(!is_general_position(&g));
    }
}
