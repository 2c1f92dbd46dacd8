//! Deterministic square roots and comparison tolerances.

use num::{BigInt, Integer, One, Signed};

use super::{GeomError, Scalar};

/// Numeric policy shared by every approximate decision in the crate.
///
/// Exact rational arithmetic cannot represent most square roots, and point
/// sets produced by measurements or by rational approximation of symmetric
/// shapes are only *nearly* symmetric. Two knobs control how such cases are
/// resolved:
///
/// * `rel_eps` — relative tolerance applied to dimensionless normalized
///   quantities (ratios of squared distances, squared cosines). Two values
///   within `rel_eps` of each other are treated as equal by the symmetry
///   predicates.
/// * `sqrt_bits` — precision of [`sqrt_approx`]: the result `r` of
///   `sqrt_approx(s)` satisfies `|r² − s| ≤ s · 2^(−sqrt_bits)`.
///
/// The defaults (`rel_eps = 2⁻⁶⁴`, `sqrt_bits = 128`) keep the tolerance far
/// below any separation occurring in well-posed inputs while comfortably
/// absorbing rounding introduced by high-precision rational approximations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToleranceConfig {
    rel_eps: Scalar,
    sqrt_bits: u32,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rel_eps: Scalar::pow2(-64),
            sqrt_bits: 128,
        }
    }
}

impl ToleranceConfig {
    /// Builds a tolerance policy, validating `0 < rel_eps < 1` and
    /// `8 ≤ sqrt_bits ≤ 4096`.
    pub fn new(rel_eps: Scalar, sqrt_bits: u32) -> Result<Self, GeomError> {
        if !rel_eps.is_positive() || rel_eps >= Scalar::one() {
            return Err(GeomError::BadTolerance(format!(
                "rel_eps must be in (0, 1), got {rel_eps}"
            )));
        }
        if !(8..=4096).contains(&sqrt_bits) {
            return Err(GeomError::BadTolerance(format!(
                "sqrt_bits must be in [8, 4096], got {sqrt_bits}"
            )));
        }
        Ok(ToleranceConfig { rel_eps, sqrt_bits })
    }

    /// The relative tolerance for dimensionless comparisons.
    pub fn rel_eps(&self) -> &Scalar {
        &self.rel_eps
    }

    /// The precision (in bits) of square-root approximation.
    pub fn sqrt_bits(&self) -> u32 {
        self.sqrt_bits
    }

    /// Whether `a` and `b` are equal within `rel_eps · scale`.
    pub fn eq_within(&self, a: &Scalar, b: &Scalar, scale: &Scalar) -> bool {
        (a - b).abs() <= &self.rel_eps * scale
    }

    /// Whether two dimensionless quantities are equal within `rel_eps`.
    pub fn eq_dimensionless(&self, a: &Scalar, b: &Scalar) -> bool {
        (a - b).abs() <= self.rel_eps
    }
}

/// Deterministic approximation of `√s`, rounded down onto a dyadic grid.
///
/// The input is normalized as `s = m · 4^E` with `m ∈ [1, 4)`; the result is
/// `r = 2^E · ⌊√m · 2^F⌋ / 2^F` with `F = sqrt_bits + 3`. This construction
/// gives, for all inputs and any fixed configuration:
///
/// * **soundness**: `r² ≤ s` and `|r² − s| ≤ s · 2^(−sqrt_bits)`;
/// * **global monotonicity**: `s₁ ≤ s₂` implies `r₁ ≤ r₂`, including across
///   normalization boundaries;
/// * **exactness on grid squares**: if `√s` is dyadic (`1`, `4`, `9/4`,
///   `2^(−2k)`, …) the result is exact;
/// * **positivity**: `r = 0` if and only if `s = 0`.
///
/// Errors on negative input.
pub fn sqrt_approx(s: &Scalar, cfg: &ToleranceConfig) -> Result<Scalar, GeomError> {
    sqrt_grid(s, cfg.sqrt_bits(), false)
}

/// Like [`sqrt_approx`] but rounded *up* on the same grid, so `r² ≥ s`.
///
/// Used internally where a placement must certifiably reach at least a
/// required distance after rounding.
pub(crate) fn sqrt_ceil_approx(s: &Scalar, cfg: &ToleranceConfig) -> Result<Scalar, GeomError> {
    sqrt_grid(s, cfg.sqrt_bits(), true)
}

fn sqrt_grid(s: &Scalar, bits: u32, round_up: bool) -> Result<Scalar, GeomError> {
    if s.is_negative() {
        return Err(GeomError::NegativeSqrt(s.clone()));
    }
    if s.is_zero() {
        return Ok(Scalar::zero());
    }
    // Normalize s = (p/q) · 4^E with p/q ∈ [1, 4). Scaling the denominator
    // by 4 divides the mantissa by 4 and vice versa.
    let mut p = s.numer().clone();
    let mut q = s.denom().clone();
    let e2 = p.bits() as i64 - q.bits() as i64;
    let mut exp = e2 >> 1;
    match exp.cmp(&0) {
        std::cmp::Ordering::Greater => q <<= (2 * exp) as usize,
        std::cmp::Ordering::Less => p <<= (-2 * exp) as usize,
        std::cmp::Ordering::Equal => {}
    }
    while p >= (&q << 2usize) {
        q <<= 2usize;
        exp += 1;
    }
    while p < q {
        p <<= 2usize;
        exp -= 1;
    }
    // Mantissa grid value t = ⌊√(m · 4^F)⌋ computed as an integer square
    // root; for real x ≥ 0, ⌊√x⌋ = ⌊√⌊x⌋⌋, so flooring m · 4^F first is
    // lossless.
    let f = (bits + 3) as usize;
    let scaled: BigInt = (&p << (2 * f)).div_floor(&q);
    let mut t = scaled.sqrt();
    if round_up && &t * &t * &q != (&p << (2 * f)) {
        t += BigInt::one();
    }
    debug_assert!(t.is_positive());
    Ok(Scalar::from_big(t, BigInt::one()) * Scalar::pow2(exp - f as i64))
}
