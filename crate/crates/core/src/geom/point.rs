//! Exact points in the plane.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use super::{GeomError, Scalar};

/// A point (or vector) in the rational plane.
///
/// Ordering is lexicographic: first by `x`, then by `y`. This is the
/// canonical total order used to sort configurations and break ties
/// deterministically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    /// Horizontal coordinate.
    pub x: Scalar,
    /// Vertical coordinate.
    pub y: Scalar,
}

impl Point {
    /// Builds a point from its coordinates.
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    /// The origin `(0, 0)`.
    pub fn origin() -> Self {
        Point::new(Scalar::zero(), Scalar::zero())
    }

    /// A point with small integer coordinates.
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    /// Whether this is exactly the origin.
    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Scales the point by a scalar factor.
    pub fn scale(&self, k: &Scalar) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    /// Dot product of `self` and `other` viewed as vectors.
    pub fn dot(&self, other: &Point) -> Scalar {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Z-component of the cross product of `self` and `other`.
    ///
    /// Positive when `other` lies counterclockwise of `self`.
    pub fn cross(&self, other: &Point) -> Scalar {
        &self.x * &other.y - &self.y * &other.x
    }

    /// Squared Euclidean norm.
    pub fn sq_norm(&self) -> Scalar {
        self.dot(self)
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Point) -> Point {
        let half = Scalar::ratio(1, 2);
        Point::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }
}

/// Squared Euclidean distance between two points.
pub fn sq_dist(a: &Point, b: &Point) -> Scalar {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    dx.sq() + dy.sq()
}

/// Compares `u` and `v` by their counterclockwise angle around `center`,
/// measured from the positive x direction in `[0, 2π)`.
///
/// Returns [`Ordering::Equal`] exactly when `u` and `v` lie on the same ray
/// out of `center`. Errors if either point coincides with `center`, where
/// the angle is undefined.
pub fn angle_cmp(center: &Point, u: &Point, v: &Point) -> Result<Ordering, GeomError> {
    let a = u - center;
    let b = v - center;
    if (a.x.is_zero() && a.y.is_zero()) || (b.x.is_zero() && b.y.is_zero()) {
        return Err(GeomError::ZeroVector);
    }
    // Partition the circle into four angular classes that are already
    // ordered: {0}, (0, π), {π}, (π, 2π). Within an open half-plane the
    // cross product sign decides.
    fn class(w: &Point) -> u8 {
        match w.y.signum() {
            0 => {
                if w.x.is_positive() {
                    0
                } else {
                    2
                }
            }
            1 => 1,
            _ => 3,
        }
    }
    let (ca, cb) = (class(&a), class(&b));
    if ca != cb {
        return Ok(ca.cmp(&cb));
    }
    let cr = a.cross(&b);
    Ok(match cr.signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    })
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

impl FromStr for Point {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim();
        let bad = || GeomError::BadPointLiteral(raw.to_string());
        let inner = raw
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (xs, ys) = inner.split_once(',').ok_or_else(bad)?;
        let x: Scalar = xs.parse().map_err(|_| bad())?;
        let y: Scalar = ys.parse().map_err(|_| bad())?;
        Ok(Point::new(x, y))
    }
}

macro_rules! impl_point_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Point {
            type Output = Point;
            fn $method(self, rhs: Point) -> Point {
                Point::new(self.x $op rhs.x, self.y $op rhs.y)
            }
        }
        impl<'a> $trait<&'a Point> for Point {
            type Output = Point;
            fn $method(self, rhs: &'a Point) -> Point {
                Point::new(self.x $op &rhs.x, self.y $op &rhs.y)
            }
        }
        impl<'a> $trait<Point> for &'a Point {
            type Output = Point;
            fn $method(self, rhs: Point) -> Point {
                Point::new(&self.x $op rhs.x, &self.y $op rhs.y)
            }
        }
        impl<'a, 'b> $trait<&'b Point> for &'a Point {
            type Output = Point;
            fn $method(self, rhs: &'b Point) -> Point {
                Point::new(&self.x $op &rhs.x, &self.y $op &rhs.y)
            }
        }
    };
}

impl_point_binop!(Add, add, +);
impl_point_binop!(Sub, sub, -);

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}
