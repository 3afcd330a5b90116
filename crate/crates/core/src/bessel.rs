//! Integer-order Bessel functions of the first kind and the Jacobi–Anger sum.

use crate::linalg::{cis, C64};
use serde::Serialize;

/// Above this argument `J_0`, `J_1` come from the Hankel asymptotic series.
const ASYMPTOTIC_ARG: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// `J_alpha(z)` for integer `alpha` and real `z`.
pub fn bessel_j(alpha: i32, z: f64) -> f64 {
    let order = alpha.unsigned_abs() as usize;
    // J_{-a}(z) = (-1)^a J_a(z) and J_a(-z) = (-1)^a J_a(z)
    let mut sign = 1.0;
    if alpha < 0 && order % 2 == 1 {
        sign = -sign;
    }
    if z < 0.0 && order % 2 == 1 {
        sign = -sign;
    }
    let z = z.abs();
    if z == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    sign * bessel_j_nonneg(order, z)
}

fn bessel_j_nonneg(order: usize, z: f64) -> f64 {
    if z >= ASYMPTOTIC_ARG && (order as f64) < z {
        let (j0, j1) = hankel_j0_j1(z);
        if order == 0 {
            return j0;
        }
        // forward recurrence is stable while k < z
        let (mut prev, mut cur) = (j0, j1);
        for k in 1..order {
            let next = (2.0 * k as f64 / z) * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        miller(order, z)
    }
}

/// Backward recurrence normalized by `J_0 + 2 sum J_{2k} = 1`.
fn miller(order: usize, z: f64) -> f64 {
    let top = (order as f64).max(z);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut sum = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let below = (2.0 * k as f64 / z) * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == order {
            result = cur;
        }
        if idx > 0 && idx % 2 == 0 {
            sum += 2.0 * cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            sum /= RESCALE;
            result /= RESCALE;
        }
    }
    sum += cur;
    result / sum
}

fn hankel_j0_j1(z: f64) -> (f64, f64) {
    let amp = (2.0 / (std::f64::consts::PI * z)).sqrt();
    let one = |nu: f64| {
        let mu = 4.0 * nu * nu;
        let (mut p, mut q) = (1.0, 0.0);
        let mut term = 1.0;
        let mut last = f64::INFINITY;
        for k in 1..200 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * z);
            if term.abs() >= last || term.abs() < 1e-17 {
                break;
            }
            last = term.abs();
            // a_k / z^k alternates between Q (odd k) and P (even k), signs (-1)^{floor(k/2)}
            let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 1 {
                q += s * term;
            } else {
                p += s * term;
            }
        }
        let chi = z - (nu / 2.0 + 0.25) * std::f64::consts::PI;
        amp * (p * chi.cos() - q * chi.sin())
    };
    (one(0.0), one(1.0))
}

/// `(J_alpha(z) - J_alpha(-z)) / 2`: equals `J_alpha(z)` for odd alpha, zero for even.
pub fn odd_part(alpha: i32, z: f64) -> f64 {
    0.5 * (bessel_j(alpha, z) - bessel_j(alpha, -z))
}

/// `(J_alpha(z) + J_alpha(-z)) / 2`
pub fn even_part(alpha: i32, z: f64) -> f64 {
    0.5 * (bessel_j(alpha, z) + bessel_j(alpha, -z))
}

/// Default harmonic cutoff for a Bessel argument `z`.
pub fn default_cutoff(z: f64) -> usize {
    40usize.max((3.0 * z.abs()).ceil() as usize)
}

/// `J_alpha(argument)` for `|alpha| <= cutoff`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselSeries {
    argument: f64,
    cutoff: usize,
    coefficients: Vec<f64>,
}

impl BesselSeries {
    pub fn new(argument: f64, cutoff: usize) -> Self {
        let a = cutoff as i32;
        let coefficients = (-a..=a).map(|alpha| bessel_j(alpha, argument)).collect();
        Self { argument, cutoff, coefficients }
    }

    pub fn with_default_cutoff(argument: f64) -> Self {
        Self::new(argument, default_cutoff(argument))
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Stored `J_alpha`, zero outside the cutoff.
    pub fn get(&self, alpha: i32) -> f64 {
        if alpha.unsigned_abs() as usize > self.cutoff {
            return 0.0;
        }
        self.coefficients[(alpha + self.cutoff as i32) as usize]
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<i32> {
        -(self.cutoff as i32)..=self.cutoff as i32
    }

    /// `(z/2)^a / a!` at `a = cutoff + 1`, a bound on every dropped term once `a > z`.
    /// `None` when the cutoff does not exceed the argument.
    pub fn tail_bound(&self) -> Option<f64> {
        let a = self.cutoff + 1;
        let z = self.argument.abs();
        if (a as f64) <= z {
            return None;
        }
        let log = a as f64 * (z / 2.0).ln() - ln_factorial(a);
        Some(if z == 0.0 { 0.0 } else { log.exp() })
    }

    /// `sum_alpha J_alpha(argument) e^{i alpha phase}` over the stored orders.
    pub fn fourier_sum(&self, phase: f64) -> C64 {
        self.orders().map(|a| self.get(a) * cis(a as f64 * phase)).sum()
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Partial Jacobi–Anger sum `sum_{|a| <= cutoff} J_a(2 lambda g2 / omega_j) e^{i a omega_j t}`,
/// approximating `e^{2 i lambda (g2/omega_j) sin(omega_j t)}`.
pub fn jacobi_anger(lambda_sign: i8, g2: f64, omega_j: f64, t: f64, cutoff: usize) -> C64 {
    let z = 2.0 * lambda_sign as f64 * g2 / omega_j;
    let a = cutoff as i32;
    (-a..=a).map(|alpha| bessel_j(alpha, z) * cis(alpha as f64 * omega_j * t)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series `sum_k (-1)^k (z/2)^{2k+a} / (k! (k+a)!)`.
    fn series_oracle(a: u32, z: f64) -> f64 {
        let h = z / 2.0;
        let mut term = h.powi(a as i32) / (1..=a).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for k in 1..200 {
            term *= -h * h / (k as f64 * (k as f64 + a as f64));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
        assert_eq!(bessel_j(-4, 0.0), 0.0);
    }

    #[test]
    fn matches_power_series() {
        assert!((bessel_j(3, 2.5) - series_oracle(3, 2.5)).abs() < 1e-14);
        for a in 0..12u32 {
            for &z in &[0.1, 0.5, 1.0, 2.0, 3.7, 5.0, 8.0] {
                let err = (bessel_j(a as i32, z) - series_oracle(a, z)).abs();
                assert!(err < 1e-12, "J_{a}({z}) err {err}");
            }
        }
    }

    #[test]
    fn reference_values() {
        // tabulated
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(0, 30.0) - -0.086_367_983_581_040_21).abs() < 1e-13);
        assert!((bessel_j(1, 30.0) - -0.118_751_062_616_622_91).abs() < 1e-13);
        assert!((bessel_j(5, 100.0) - -0.074_195_736_964_513_93).abs() < 1e-13);
        assert!((bessel_j(50, 1.0) - 2.906_004_948_173_25e-80).abs() < 1e-92);
    }

    #[test]
    fn asymptotic_and_miller_agree_at_switch() {
        for a in 0..20 {
            for &z in &[25.0, 26.5, 40.0] {
                let asym = bessel_j_nonneg(a, z);
                let mil = miller(a, z);
                assert!((asym - mil).abs() < 1e-13, "a={a} z={z}: {asym} vs {mil}");
            }
        }
    }

    #[test]
    fn symmetry_relations() {
        for a in -9..=9 {
            for &z in &[0.3, 1.7, 6.0, 31.0] {
                let s = if a % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(bessel_j(a, -z), s * bessel_j(a, z));
                assert_eq!(bessel_j(-a, z), s * bessel_j(a, z));
            }
        }
    }

    #[test]
    fn odd_part_antisymmetry_in_order() {
        for a in 1..8 {
            for &z in &[0.4, 1.25, 3.0] {
                assert!((odd_part(-a, z) + odd_part(a, z)).abs() < 1e-15);
                if a % 2 == 0 {
                    assert_eq!(odd_part(a, z), 0.0);
                }
            }
        }
    }

    #[test]
    fn jacobi_anger_trivial_and_direct() {
        assert_eq!(jacobi_anger(1, 0.0, 1.3, 0.4, 0), C64::new(1.0, 0.0));
        assert_eq!(jacobi_anger(-1, 0.0, 1.3, 7.0, 5), C64::new(1.0, 0.0));
        let at_zero = jacobi_anger(1, 2.0, 1.0, 0.0, 40);
        assert!((at_zero - 1.0).norm() < 1e-14);
        // Gamma = 2 g2 / omega = 1.5
        let (g2, w, t): (f64, f64, f64) = (0.75, 1.0, 0.7);
        let direct = cis(2.0 * g2 / w * (w * t).sin());
        assert!((jacobi_anger(1, g2, w, t, 40) - direct).norm() < 1e-13);
        let direct_neg = cis(-2.0 * g2 / w * (w * t).sin());
        assert!((jacobi_anger(-1, g2, w, t, 40) - direct_neg).norm() < 1e-13);
    }

    #[test]
    fn series_tail_bound() {
        let s = BesselSeries::new(1.5, 40);
        let b = s.tail_bound().unwrap();
        assert!(b < 1e-50);
        assert!(bessel_j(41, 1.5).abs() <= b);
        assert_eq!(s.get(3), bessel_j(3, 1.5));
        assert_eq!(s.get(-41), 0.0);
        assert!(BesselSeries::new(10.0, 5).tail_bound().is_none());
        assert_eq!(default_cutoff(2.0), 40);
        assert_eq!(default_cutoff(100.0), 300);
    }
}
