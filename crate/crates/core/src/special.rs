//! Scalar special functions: the one-dimensional Gaussian Q-function, the
//! upper incomplete gamma function at half-integer orders, and the closed
//! form of the semi-infinite Gaussian-type integral obtained by completing
//! the square.
//!
//! `erfc` comes from `libm` (a port of the FreeBSD msun routines, accurate
//! to about one ulp); everything else is assembled here.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use crate::error::{ensure_finite, Error, Result};

const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// Above this argument `erfc` is replaced by its asymptotic expansion in
/// log space; `erfc(26)` is still a normal double.
const LN_ERFC_ASYMPTOTIC_FROM: f64 = 26.0;

/// Gaussian tail probability Q(x) = P(Z > x) = erfc(x / sqrt 2) / 2.
pub fn q1(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(gauss_q(x))
}

/// Unchecked Q(x) for internal hot loops. NaN propagates.
#[inline]
pub(crate) fn gauss_q(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// ln Q(x), finite for every finite x (no underflow in the far tail).
pub(crate) fn ln_gauss_q(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x <= 0.0 {
        // Q(x) = 1 - Q(-x) with Q(-x) <= 1/2
        (-gauss_q(-x)).ln_1p()
    } else {
        ln_erfc(x * FRAC_1_SQRT_2) - LN_2
    }
}

/// ln erfc(t) for t >= 0.
fn ln_erfc(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t < LN_ERFC_ASYMPTOTIC_FROM {
        return libm::erfc(t).ln();
    }
    if t.is_infinite() {
        return f64::NEG_INFINITY;
    }
    // erfc(t) ~ exp(-t^2) / (t sqrt(pi)) * sum_n (-1)^n (2n-1)!! / (2t^2)^n
    let inv = 1.0 / (2.0 * t * t);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..8 {
        term *= -((2 * n - 1) as f64) * inv;
        sum += term;
    }
    -t * t - t.ln() - LN_SQRT_PI + sum.ln()
}

/// ln(n!). Integer-exact inputs up to 20! are taken from the u64 factorial.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 20 {
        let f: u64 = (2..=n).product();
        (f as f64).ln()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// Order s = twice_s / 2 of the incomplete gamma function, restricted to
/// the positive half-integer lattice {1/2, 1, 3/2, ...}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIntOrder {
    twice_s: u32,
}

impl HalfIntOrder {
    pub fn new(twice_s: u32) -> Result<Self> {
        if twice_s == 0 {
            return Err(Error::domain("half-integer order requires twice_s >= 1"));
        }
        Ok(Self { twice_s })
    }

    /// The integer order s = n (n >= 1).
    pub fn integer(n: u32) -> Result<Self> {
        Self::new(2 * n)
    }

    pub fn twice(self) -> u32 {
        self.twice_s
    }

    pub fn value(self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    /// ln Γ(s), exact up to rounding via factorials:
    /// Γ(n + 1) = n! and Γ(n + 1/2) = (2n)! sqrt(pi) / (4^n n!).
    pub fn ln_gamma(self) -> f64 {
        if self.twice_s % 2 == 0 {
            log_factorial(u64::from(self.twice_s / 2 - 1))
        } else {
            let n = u64::from((self.twice_s - 1) / 2);
            log_factorial(2 * n) - 2.0 * n as f64 * LN_2 - log_factorial(n) + LN_SQRT_PI
        }
    }
}

/// ln Γ(s, x) for every half-integer order up to a cap, built by the upward
/// recurrence Γ(s+1, x) = s Γ(s, x) + x^s e^{-x} from the two bases
/// Γ(1/2, x) = sqrt(pi) erfc(sqrt x) and Γ(1, x) = e^{-x}.
///
/// The recurrence is run on the regularised ratio Γ(s, x) / Γ(s) in log
/// space, so that neither large orders nor large x overflow or underflow:
/// ln q(s+1) = logaddexp(ln q(s), s ln x - x - ln Γ(s+1)).
#[derive(Debug, Clone)]
pub struct UpperGammaLadder {
    x: f64,
    /// index twice_s - 1
    ln_values: Vec<f64>,
}

impl UpperGammaLadder {
    pub fn new(x: f64, max_order: HalfIntOrder) -> Result<Self> {
        ensure_finite("x", x)?;
        if x < 0.0 {
            return Err(Error::domain(format!(
                "upper incomplete gamma requires x >= 0, got {x}"
            )));
        }
        let n = max_order.twice_s as usize;
        let mut ln_values = vec![0.0; n];
        let ln_x = x.ln();

        // ln q for the half-integer chain and the integer chain
        let mut ln_q_half = ln_erfc(x.sqrt());
        let mut ln_q_int = -x;

        for twice_s in 1..=n as u32 {
            let order = HalfIntOrder { twice_s };
            let ln_q = if twice_s % 2 == 1 { &mut ln_q_half } else { &mut ln_q_int };
            if twice_s > 2 {
                // step from s - 1 to s
                let prev = (twice_s - 2) as f64 / 2.0;
                let ln_inc = if x == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    prev * ln_x - x - order.ln_gamma()
                };
                *ln_q = log_add_exp(*ln_q, ln_inc);
            }
            ln_values[twice_s as usize - 1] = order.ln_gamma() + *ln_q;
        }
        Ok(Self { x, ln_values })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn max_order(&self) -> HalfIntOrder {
        HalfIntOrder {
            twice_s: self.ln_values.len() as u32,
        }
    }

    /// ln Γ(s, x). Panics if `s` exceeds the ladder's cap.
    pub fn ln_gamma(&self, s: HalfIntOrder) -> f64 {
        self.ln_values[s.twice_s as usize - 1]
    }

    pub fn gamma(&self, s: HalfIntOrder) -> f64 {
        self.ln_gamma(s).exp()
    }
}

pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Upper incomplete gamma Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt at half-integer s.
pub fn upper_gamma_half(s: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(ln_upper_gamma_half(s, x)?.exp())
}

pub fn ln_upper_gamma_half(s: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(UpperGammaLadder::new(x, s)?.ln_gamma(s))
}

/// Shape of ∫_lower^∞ exp(-alpha v^2 + beta v) dv.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailKernelParams {
    alpha: f64,
    beta: f64,
    lower: f64,
}

impl TailKernelParams {
    /// `lower` may be -inf (full Gaussian integral); alpha must be positive.
    pub fn new(alpha: f64, beta: f64, lower: f64) -> Result<Self> {
        ensure_finite("alpha", alpha)?;
        ensure_finite("beta", beta)?;
        if lower.is_nan() || lower == f64::INFINITY {
            return Err(Error::NonFinite {
                name: "lower",
                value: lower,
            });
        }
        if alpha <= 0.0 {
            return Err(Error::domain(format!(
                "tail kernel needs alpha > 0 for the integral to converge, got {alpha}"
            )));
        }
        Ok(Self { alpha, beta, lower })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// Argument of the trailing Q factor, (2 alpha lower - beta) / sqrt(2 alpha).
    pub fn q_argument(&self) -> f64 {
        (2.0 * self.alpha * self.lower - self.beta) / (2.0 * self.alpha).sqrt()
    }
}

/// ∫_lower^∞ exp(-alpha v^2 + beta v) dv
///   = sqrt(pi / alpha) exp(beta^2 / (4 alpha)) Q((2 alpha lower - beta) / sqrt(2 alpha)).
pub fn gauss_tail_kernel(p: &TailKernelParams) -> f64 {
    ln_gauss_tail_kernel(p).exp()
}

pub fn ln_gauss_tail_kernel(p: &TailKernelParams) -> f64 {
    0.5 * (PI / p.alpha).ln() + p.beta * p.beta / (4.0 * p.alpha) + ln_gauss_q(p.q_argument())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Composite Gauss-Legendre (10 points per panel) on [a, b]; test-only,
    /// independent of the library's adaptive integrator.
    fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        const X: [f64; 5] = [
            0.148_874_338_981_631_2,
            0.433_395_394_129_247_2,
            0.679_409_568_299_024_4,
            0.865_063_366_688_984_5,
            0.973_906_528_517_171_7,
        ];
        const W: [f64; 5] = [
            0.295_524_224_714_752_9,
            0.269_266_719_309_996_4,
            0.219_086_362_515_982_0,
            0.149_451_349_150_580_6,
            0.066_671_344_308_688_1,
        ];
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for i in 0..panels {
            let c = a + (i as f64 + 0.5) * h;
            let r = 0.5 * h;
            let mut s = 0.0;
            for (x, w) in X.iter().zip(W.iter()) {
                s += w * (f(c - r * x) + f(c + r * x));
            }
            total += s * r;
        }
        total
    }

    #[test]
    fn q1_basic_values() {
        assert_eq!(q1(0.0).unwrap(), 0.5);
        // mpmath, 40 digits
        assert!(rel(q1(1.0).unwrap(), 0.158_655_253_931_457_05) < 1e-15);
        assert!(q1(f64::NAN).is_err());
        assert!(q1(f64::INFINITY).is_err());
    }

    #[test]
    fn q1_matches_density_quadrature() {
        let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
        let tail = gl_integrate(phi, 1.0, 40.0, 400);
        assert!(rel(q1(1.0).unwrap(), tail) < 1e-13);
    }

    #[test]
    fn q1_reflection_and_monotonicity() {
        for i in -800..=800 {
            let x = i as f64 / 100.0;
            assert!((q1(x).unwrap() + q1(-x).unwrap() - 1.0).abs() < 1e-14, "x = {x}");
        }
        // below about -8, Q(x) rounds to 1 and strict decrease is not representable
        let mut prev = f64::INFINITY;
        for i in -600..=3000 {
            let x = i as f64 / 100.0;
            let q = q1(x).unwrap();
            assert!(q < prev, "not decreasing at {x}");
            prev = q;
        }
    }

    #[test]
    fn ln_gauss_q_tail() {
        for x in [0.0, 0.5, 3.0, 10.0, 30.0, 36.0] {
            assert!((ln_gauss_q(x) - gauss_q(x).ln()).abs() < 1e-12, "x = {x}");
        }
        for x in [-0.5, -3.0, -10.0] {
            assert!((ln_gauss_q(x) - gauss_q(x).ln()).abs() < 1e-15);
        }
        // continuity across the asymptotic switch
        let t = LN_ERFC_ASYMPTOTIC_FROM;
        let below = libm::erfc(t).ln();
        let above = ln_erfc(t + 1e-12);
        assert!((below - above).abs() < 1e-10);
        // far tail stays finite
        let far = ln_gauss_q(60.0);
        assert!(far.is_finite() && far < -1800.0);
    }

    #[test]
    fn log_factorial_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_eq!(log_factorial(20), (2_432_902_008_176_640_000_u64 as f64).ln());
        assert!((log_factorial(20) - 42.335_616_460_753_485).abs() < 1e-13);
        // continuity into the lgamma branch
        assert!((log_factorial(21) - log_factorial(20) - 21f64.ln()).abs() < 1e-12);
        assert!((log_factorial(171) - log_factorial(170) - 171f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn half_int_order() {
        assert!(HalfIntOrder::new(0).is_err());
        let s = HalfIntOrder::new(3).unwrap();
        assert_eq!(s.value(), 1.5);
        assert!((s.ln_gamma() - (0.5 * PI.sqrt()).ln()).abs() < 1e-15);
        for twice in 1..60u32 {
            let o = HalfIntOrder::new(twice).unwrap();
            assert!((o.ln_gamma() - libm::lgamma(o.value())).abs() < 1e-12, "s = {}", o.value());
        }
    }

    #[test]
    fn upper_gamma_full_values() {
        let one = HalfIntOrder::integer(1).unwrap();
        let half = HalfIntOrder::new(1).unwrap();
        assert!((upper_gamma_half(one, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(rel(upper_gamma_half(half, 0.0).unwrap(), PI.sqrt()) < 1e-15);
        assert!(upper_gamma_half(one, -0.1).is_err());
    }

    #[test]
    fn upper_gamma_three_halves_against_quadrature() {
        let s = HalfIntOrder::new(3).unwrap();
        let got = upper_gamma_half(s, 0.5).unwrap();
        // Gauss-Legendre after t = 0.5 + u^2 to remove nothing singular; plain tail integral
        let quad = gl_integrate(|t| t.sqrt() * (-t).exp(), 0.5, 60.0, 600);
        assert!(rel(got, quad) < 1e-12);
        // mpmath gammainc(1.5, 0.5)
        assert!(rel(got, 0.710_091_058_277_556_96) < 1e-13);
    }

    #[test]
    fn gamma_recurrence_consistency() {
        for twice in 1..=20u32 {
            let s = HalfIntOrder::new(twice).unwrap();
            let s1 = HalfIntOrder::new(twice + 2).unwrap();
            for i in 0..=40 {
                let x = i as f64 * 0.5;
                let ladder = UpperGammaLadder::new(x, s1).unwrap();
                let lhs = ladder.gamma(s1);
                let rhs = s.value() * ladder.gamma(s) + x.powf(s.value()) * (-x).exp();
                assert!(((lhs - rhs) / lhs).abs() < 1e-12, "s = {}, x = {x}", s.value());
            }
        }
    }

    #[test]
    fn gamma_ladder_large_orders_stay_finite() {
        let top = HalfIntOrder::new(602).unwrap();
        let ladder = UpperGammaLadder::new(12.5, top).unwrap();
        let v = ladder.ln_gamma(top);
        // Γ(301, 12.5) ≈ Γ(301) for x far below the order
        assert!((v - top.ln_gamma()).abs() < 1e-12);
        let big_x = UpperGammaLadder::new(900.0, HalfIntOrder::new(8).unwrap()).unwrap();
        assert!(big_x.ln_gamma(HalfIntOrder::new(2).unwrap()) == -900.0);
        assert!(big_x.ln_gamma(HalfIntOrder::new(8).unwrap()).is_finite());
    }

    #[test]
    fn kernel_examples() {
        let p = TailKernelParams::new(0.5, 0.0, 0.0).unwrap();
        assert!(rel(gauss_tail_kernel(&p), (PI / 2.0).sqrt()) < 1e-15);
        let p = TailKernelParams::new(1.0, 0.0, -40.0).unwrap();
        assert!(rel(gauss_tail_kernel(&p), PI.sqrt()) < 1e-15);
        let p = TailKernelParams::new(1.0, 0.0, f64::NEG_INFINITY).unwrap();
        assert!(rel(gauss_tail_kernel(&p), PI.sqrt()) < 1e-15);
        let p = TailKernelParams::new(0.8, 0.3, 0.5).unwrap();
        let quad = gl_integrate(|v| (-0.8 * v * v + 0.3 * v).exp(), 0.5, 12.0, 200);
        assert!(rel(gauss_tail_kernel(&p), quad) < 1e-10);
        // mpmath quad
        assert!(rel(gauss_tail_kernel(&p), 0.705_858_296_102_298_85) < 1e-13);
    }

    #[test]
    fn kernel_rejects_bad_alpha() {
        assert!(TailKernelParams::new(0.0, 1.0, 0.0).is_err());
        assert!(TailKernelParams::new(-1.0, 1.0, 0.0).is_err());
        assert!(TailKernelParams::new(1.0, 1.0, f64::INFINITY).is_err());
        assert!(TailKernelParams::new(1.0, f64::NAN, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn kernel_matches_quadrature(alpha in 0.1f64..10.0, beta in -5.0f64..5.0, lower in -3.0f64..5.0) {
            let p = TailKernelParams::new(alpha, beta, lower).unwrap();
            let centre = beta / (2.0 * alpha);
            let width = 40.0 / alpha.sqrt();
            let hi = lower.max(centre) + width;
            let f = |v: f64| (-alpha * v * v + beta * v).exp();
            let quad = gl_integrate(f, lower, hi, 800);
            prop_assert!(rel(gauss_tail_kernel(&p), quad) < 1e-10);
        }
    }
}
