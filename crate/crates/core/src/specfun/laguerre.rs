//! Laguerre polynomials.

use num_complex::Complex64;

/// `Lₙ(x)` from the three-term recurrence
/// `(k+1)L_{k+1} = (2k+1−x)Lₖ − kL_{k−1}`.
pub fn laguerre(n: u32, x: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        let x = Complex64::new(0.4, -1.2);
        assert_eq!(laguerre(0, x), Complex64::new(1.0, 0.0));
        assert_eq!(laguerre(1, x), 1.0 - x);
        for n in 0..10 {
            assert_eq!(laguerre(n, Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        }
    }
}
