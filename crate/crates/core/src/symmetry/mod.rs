//! Rotational symmetry of configurations and the observer-relative order.
//!
//! The key quantities for a configuration `P` with smallest-enclosing-circle
//! center `o`:
//!
//! * the **rotation order** `k`: how many rotations about `o` (including the
//!   identity) map `P` onto itself with multiplicities — `0` when the only
//!   distinct point is `o` itself, where every rotation fixes `P`;
//! * the **symmetricity** `σ = gcd(k, μ(o))`, where `μ(o)` is the
//!   multiplicity of the center (`gcd` with `0` returns the other operand);
//! * the **orbit partition**: distinct points with indistinguishable local
//!   views, each non-center orbit having exactly `k` members;
//! * the **view** from a point `q`: the configuration expressed in the
//!   self-centered frame whose x-axis points from `q` toward `o` and whose
//!   unit is the enclosing radius;
//! * the induced **point order**: higher multiplicity first, then smaller
//!   center distance, then lexicographically larger view. Points in one
//!   orbit compare equal; when `k = 1` every orbit is a singleton and a
//!   unique largest point exists.
//!
//! Symmetry predicates compare *dimensionless* normalized quantities
//! (ratios of squared distances, squared cosines of ray gaps) with the
//! relative tolerance from [`ToleranceConfig`], so configurations that are
//! rational approximations of symmetric shapes are classified like their
//! ideal counterparts while genuinely asymmetric inputs stay asymmetric.

use std::cmp::Ordering;

use num_integer::gcd;
use thiserror::Error;

use crate::geom::{
    angle_cmp, sq_dist, sqrt_approx, Configuration, GeomError, Point, Scalar, ToleranceConfig,
};

/// Errors from symmetry analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    /// The queried point is not one of the configuration's distinct points.
    #[error("point {0} is not in the support of the configuration")]
    NotInSupport(Point),
    /// A unique largest point exists only for rotation order 1.
    #[error("no unique largest point: rotation order is {rotation_order}")]
    NotAsymmetric {
        /// The configuration's rotation order.
        rotation_order: usize,
    },
    /// An underlying geometric operation failed.
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// The orbit structure of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Rotation order of the configuration.
    pub k: usize,
    /// Orbits of the support under the rotation group, largest-ranked
    /// first; points within an orbit are sorted ascending.
    pub orbits: Vec<Vec<Point>>,
}

/// A configuration as seen from one of its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct View {
    /// The observing point, in the coordinates of the analyzed
    /// configuration.
    pub origin: Point,
    /// All observed points (multiplicities expanded) in the observer's
    /// frame, sorted ascending. The observer itself appears as `(0, 0)`.
    pub coords: Vec<Point>,
}

/// One normalized view coordinate: a sign and a squared magnitude.
///
/// The value represented is `sign · √sq`, where `sq` is dimensionless
/// (normalized by center distance times enclosing radius), so keys from
/// different observers of the same configuration — or of similar
/// configurations — are directly comparable without taking square roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisKey {
    /// Sign of the coordinate: -1, 0, or 1 (0 after tolerance snapping).
    pub sign: i8,
    /// Squared magnitude, normalized; zero when `sign` is zero.
    pub sq: Scalar,
}

/// The comparison key of a support point: everything the point order needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointOrderKey {
    /// Multiplicity of the point.
    pub multiplicity: usize,
    /// Squared distance to the center, divided by the squared enclosing
    /// radius (dimensionless).
    pub sq_center_ratio: Scalar,
    /// Normalized view entries `(x, y)`, sorted ascending; empty for a
    /// point at the center, whose view has no preferred axis.
    pub view: Vec<(AxisKey, AxisKey)>,
}

impl AxisKey {
    fn zero() -> Self {
        AxisKey {
            sign: 0,
            sq: Scalar::zero(),
        }
    }

    /// Builds the key for the ratio `value / √denom_sq`, snapping to zero
    /// when the normalized magnitude is below tolerance.
    fn from_ratio(value: &Scalar, denom_sq: &Scalar, tol: &ToleranceConfig) -> Self {
        let sq = value.sq() / denom_sq;
        if sq <= tol.rel_eps().sq() {
            AxisKey::zero()
        } else {
            AxisKey {
                sign: value.signum(),
                sq,
            }
        }
    }

    /// Exact total order on represented values (used for deterministic
    /// sorting within one key).
    fn cmp_exact(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                1 => self.sq.cmp(&other.sq),
                -1 => other.sq.cmp(&self.sq),
                _ => Ordering::Equal,
            },
            ord => ord,
        }
    }

    /// Tolerant order on represented values (used when comparing keys of
    /// different observers).
    fn cmp_eps(&self, other: &Self, tol: &ToleranceConfig) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {
                if self.sign == 0 || tol.eq_dimensionless(&self.sq, &other.sq) {
                    Ordering::Equal
                } else if self.sign == 1 {
                    self.sq.cmp(&other.sq)
                } else {
                    other.sq.cmp(&self.sq)
                }
            }
            ord => ord,
        }
    }
}

impl PointOrderKey {
    /// Compares two keys in the point order: higher multiplicity wins;
    /// then the smaller center ratio; then the lexicographically larger
    /// view. `Greater` means "ranked higher".
    pub fn cmp_rank(&self, other: &Self, tol: &ToleranceConfig) -> Ordering {
        match self.multiplicity.cmp(&other.multiplicity) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if !tol.eq_dimensionless(&self.sq_center_ratio, &other.sq_center_ratio) {
            // Closer to the center ranks higher.
            return other.sq_center_ratio.cmp(&self.sq_center_ratio);
        }
        for (a, b) in self.view.iter().zip(other.view.iter()) {
            match a.0.cmp_eps(&b.0, tol) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.1.cmp_eps(&b.1, tol) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// A maximal group of support points lying on one exact ray out of the
/// center, with its distance/multiplicity signature.
struct Ray {
    dir: Point,
    /// `(squared distance ratio, multiplicity)` pairs sorted by distance.
    signature: Vec<(Scalar, usize)>,
}

/// The angular gap between consecutive rays, encoded exactly enough to
/// compare: sign of the sine, sign of the cosine, squared cosine.
#[derive(Clone)]
struct GapCode {
    sin_sign: i8,
    cos_sign: i8,
    sq_cos: Scalar,
}

fn gap_eq(a: &GapCode, b: &GapCode, tol: &ToleranceConfig) -> bool {
    a.sin_sign == b.sin_sign
        && a.cos_sign == b.cos_sign
        && tol.eq_dimensionless(&a.sq_cos, &b.sq_cos)
}

fn signature_eq(a: &[(Scalar, usize)], b: &[(Scalar, usize)], tol: &ToleranceConfig) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.1 == y.1 && tol.eq_dimensionless(&x.0, &y.0))
}

/// Splits the support into center occupants and rays of peripheral points
/// sorted counterclockwise. Returns `None` when there is no periphery.
fn build_rays(config: &Configuration, tol: &ToleranceConfig) -> Option<Vec<Ray>> {
    let circle = config.sec();
    let o = &circle.center;
    let sq_r = &circle.sq_radius;
    if sq_r.is_zero() {
        return None;
    }
    let eps_sq = tol.rel_eps().sq();
    let mut peripheral: Vec<(&Point, Scalar, usize)> = Vec::new();
    for (p, mult) in config.support_multiplicities() {
        let ratio = sq_dist(p, o) / sq_r;
        if ratio > eps_sq {
            peripheral.push((p, ratio, mult));
        }
    }
    if peripheral.is_empty() {
        return None;
    }
    // Sort by angle around the center; ties (same exact ray) by distance.
    peripheral.sort_by(|a, b| {
        angle_cmp(o, a.0, b.0)
            .expect("peripheral points are distinct from the center")
            .then_with(|| a.1.cmp(&b.1))
    });
    let mut rays: Vec<Ray> = Vec::new();
    for (p, ratio, mult) in peripheral {
        let same_ray = rays.last().is_some_and(|r: &Ray| {
            let v = p - o;
            r.dir.cross(&v).is_zero() && r.dir.dot(&v).is_positive()
        });
        if same_ray {
            rays.last_mut()
                .expect("nonempty by same_ray check")
                .signature
                .push((ratio, mult));
        } else {
            rays.push(Ray {
                dir: p - o,
                signature: vec![(ratio, mult)],
            });
        }
    }
    Some(rays)
}

fn gap_codes(rays: &[Ray], tol: &ToleranceConfig) -> Vec<GapCode> {
    let eps_sq = tol.rel_eps().sq();
    let r = rays.len();
    (0..r)
        .map(|i| {
            let d1 = &rays[i].dir;
            let d2 = &rays[(i + 1) % r].dir;
            let denom = d1.sq_norm() * d2.sq_norm();
            let cross = d1.cross(d2);
            let dot = d1.dot(d2);
            let sq_sin = cross.sq() / &denom;
            let sq_cos = dot.sq() / &denom;
            GapCode {
                sin_sign: if sq_sin <= eps_sq { 0 } else { cross.signum() },
                cos_sign: if sq_cos <= eps_sq { 0 } else { dot.signum() },
                sq_cos,
            }
        })
        .collect()
}

/// The rotation order `k` of a configuration: the number of rotations about
/// the center of its smallest enclosing circle (identity included) mapping
/// the multiset onto itself.
///
/// Returns `0` when the support is exactly the center — there every
/// rotation is a symmetry. Otherwise `k ≥ 1`.
pub fn rotation_order(config: &Configuration, tol: &ToleranceConfig) -> usize {
    let rays = match build_rays(config, tol) {
        None => return 0,
        Some(r) => r,
    };
    let r = rays.len();
    if r == 1 {
        return 1;
    }
    let gaps = gap_codes(&rays, tol);
    let mut k = 0;
    for shift in 0..r {
        let ok = (0..r).all(|i| {
            let j = (i + shift) % r;
            signature_eq(&rays[i].signature, &rays[j].signature, tol)
                && gap_eq(&gaps[i], &gaps[j], tol)
        });
        if ok {
            k += 1;
        }
    }
    k
}

/// Total multiplicity at the center of the smallest enclosing circle.
///
/// When the configuration has a single distinct point, that point is the
/// center and the whole multiset sits on it.
pub fn center_multiplicity(config: &Configuration, tol: &ToleranceConfig) -> usize {
    if config.m() == 1 {
        return config.n();
    }
    let circle = config.sec();
    let eps_sq = tol.rel_eps().sq();
    config
        .support_multiplicities()
        .filter(|(p, _)| sq_dist(p, &circle.center) / &circle.sq_radius <= eps_sq)
        .map(|(_, mult)| mult)
        .sum()
}

/// The symmetricity `σ = gcd(k, μ(o))` of a configuration, where `k` is the
/// rotation order and `μ(o)` the multiplicity of the center (`gcd(ℓ, 0)`
/// and `gcd(0, ℓ)` are `ℓ`).
///
/// This is the largest `s` such that the configuration can be partitioned
/// into regular `s`-gons concentric with the enclosing circle (points at
/// the center counting as degenerate `s`-gons for every `s` dividing their
/// multiplicity).
pub fn symmetricity(config: &Configuration, tol: &ToleranceConfig) -> usize {
    gcd(
        rotation_order(config, tol),
        center_multiplicity(config, tol),
    )
}

/// The comparison key of support point `q`: multiplicity, normalized
/// squared center distance, and the normalized view.
pub fn order_key(
    config: &Configuration,
    q: &Point,
    tol: &ToleranceConfig,
) -> Result<PointOrderKey, SymmetryError> {
    if !config.contains(q) {
        return Err(SymmetryError::NotInSupport(q.clone()));
    }
    let multiplicity = config.multiplicity(q);
    if config.m() == 1 {
        return Ok(PointOrderKey {
            multiplicity,
            sq_center_ratio: Scalar::zero(),
            view: Vec::new(),
        });
    }
    let circle = config.sec();
    let o = &circle.center;
    let sq_r = &circle.sq_radius;
    let sq_d = sq_dist(q, o);
    let sq_center_ratio = &sq_d / sq_r;
    if sq_center_ratio <= tol.rel_eps().sq() {
        // A center point's frame has no preferred axis; its view is never
        // decisive because no other point ties with it on center distance.
        return Ok(PointOrderKey {
            multiplicity,
            sq_center_ratio,
            view: Vec::new(),
        });
    }
    let axis = o - q;
    let denom = &sq_d * sq_r;
    let mut view: Vec<(AxisKey, AxisKey)> = config
        .points()
        .iter()
        .map(|p| {
            let v = p - q;
            let xi = axis.dot(&v);
            let eta = axis.cross(&v);
            (
                AxisKey::from_ratio(&xi, &denom, tol),
                AxisKey::from_ratio(&eta, &denom, tol),
            )
        })
        .collect();
    view.sort_by(|a, b| a.0.cmp_exact(&b.0).then_with(|| a.1.cmp_exact(&b.1)));
    Ok(PointOrderKey {
        multiplicity,
        sq_center_ratio,
        view,
    })
}

/// Compares two support points in the point order induced by the
/// configuration. `Greater` means `q1` ranks higher than `q2`; `Equal`
/// means they lie in the same orbit (indistinguishable observers).
pub fn compare_points(
    config: &Configuration,
    q1: &Point,
    q2: &Point,
    tol: &ToleranceConfig,
) -> Result<Ordering, SymmetryError> {
    if q1 == q2 {
        // Still validate membership for consistent error behavior.
        if !config.contains(q1) {
            return Err(SymmetryError::NotInSupport(q1.clone()));
        }
        return Ok(Ordering::Equal);
    }
    let k1 = order_key(config, q1, tol)?;
    let k2 = order_key(config, q2, tol)?;
    Ok(k1.cmp_rank(&k2, tol))
}

/// The unique highest-ranked point of a configuration with rotation order
/// one. With any other rotation order no single point can be
/// distinguished, and an error is returned.
pub fn largest_point(
    config: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Point, SymmetryError> {
    let k = rotation_order(config, tol);
    if k != 1 {
        return Err(SymmetryError::NotAsymmetric { rotation_order: k });
    }
    let mut best: Option<(&Point, PointOrderKey)> = None;
    for p in config.support() {
        let key = order_key(config, p, tol)?;
        let replace = match &best {
            None => true,
            Some((_, bk)) => key.cmp_rank(bk, tol) == Ordering::Greater,
        };
        if replace {
            best = Some((p, key));
        }
    }
    Ok(best.expect("configurations are nonempty").0.clone())
}

/// Partitions the support into orbits of the rotation group about the
/// center: points with tolerantly equal keys share an orbit. Orbits are
/// returned highest-ranked first; every non-center orbit has exactly `k`
/// members.
pub fn orbits(config: &Configuration, tol: &ToleranceConfig) -> OrbitPartition {
    let k = rotation_order(config, tol);
    let mut groups: Vec<(PointOrderKey, Vec<Point>)> = Vec::new();
    for p in config.support() {
        let key = order_key(config, p, tol).expect("support points are in the support");
        match groups
            .iter_mut()
            .find(|(gk, _)| gk.cmp_rank(&key, tol) == Ordering::Equal)
        {
            Some((_, members)) => members.push(p.clone()),
            None => groups.push((key, vec![p.clone()])),
        }
    }
    groups.sort_by(|a, b| b.0.cmp_rank(&a.0, tol));
    OrbitPartition {
        k,
        orbits: groups.into_iter().map(|(_, members)| members).collect(),
    }
}

/// The configuration as seen from support point `q`: origin at `q`, x-axis
/// toward the center, y-axis 90° counterclockwise, unit the enclosing
/// radius.
///
/// Coordinates divide by the (approximate) square root of an exact product,
/// so they are exact whenever that product is a perfect square of the
/// dyadic grid, and deterministic always. When `q` is itself the center the
/// x-axis falls back to the global +x direction; when the whole
/// configuration sits on one point the identity scale is used.
pub fn view(
    config: &Configuration,
    q: &Point,
    tol: &ToleranceConfig,
) -> Result<View, SymmetryError> {
    if !config.contains(q) {
        return Err(SymmetryError::NotInSupport(q.clone()));
    }
    let circle = config.sec();
    let o = &circle.center;
    let sq_r = &circle.sq_radius;
    let (axis, unit) = if sq_r.is_zero() {
        (Point::new(Scalar::one(), Scalar::zero()), Scalar::one())
    } else if q == o {
        (
            Point::new(Scalar::one(), Scalar::zero()),
            sqrt_approx(sq_r, tol)?,
        )
    } else {
        let axis = o - q;
        let unit = sqrt_approx(&(sq_dist(q, o) * sq_r), tol)?;
        (axis, unit)
    };
    let mut coords: Vec<Point> = config
        .points()
        .iter()
        .map(|p| {
            let v = p - q;
            Point::new(axis.dot(&v) / &unit, axis.cross(&v) / &unit)
        })
        .collect();
    coords.sort();
    Ok(View {
        origin: q.clone(),
        coords,
    })
}
