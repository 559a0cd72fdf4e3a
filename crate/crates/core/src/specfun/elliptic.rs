//! Complete elliptic integral of the first kind.

use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Squared complementary modulus below which the logarithmic asymptote
/// `K ≈ ln(4/k′)` replaces the arithmetic-geometric mean.
pub const ASYMPTOTIC_THRESHOLD: f64 = 1e-12;

/// Complete elliptic integral of the first kind `K(k)` in the modulus
/// convention, `K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain("elliptic_k", format!("modulus {k} outside [0, 1)")));
    }
    elliptic_k_complement(((1.0 - k) * (1.0 + k)).sqrt())
}

/// `K` expressed through the complementary modulus `k′ = √(1 − k²)`.
///
/// Taking `k′` as the input keeps full relative accuracy when `k` is so
/// close to one that `1 − k²` cannot be formed in double precision.
pub fn elliptic_k_complement(kp: f64) -> Result<f64> {
    if !(kp > 0.0 && kp <= 1.0) {
        return Err(Error::domain(
            "elliptic_k_complement",
            format!("complementary modulus {kp} outside (0, 1]"),
        ));
    }
    if kp * kp < ASYMPTOTIC_THRESHOLD {
        return Ok((4.0 / kp).ln());
    }
    Ok(FRAC_PI_2 / agm(1.0, kp))
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_of_zero_is_half_pi() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_k_complement(0.0).is_err());
    }

    #[test]
    fn monotone_on_grid() {
        let mut last = 0.0;
        for i in 0..100 {
            let k = i as f64 / 100.0;
            let v = elliptic_k(k).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn asymptote_joins_agm_branch() {
        let kp = 0.999e-6;
        let direct = FRAC_PI_2 / agm(1.0, kp);
        let asym = elliptic_k_complement(kp).unwrap();
        assert_eq!(asym, (4.0 / kp).ln());
        assert!((direct - asym).abs() < 1e-10 * direct);
    }
}
