//! Reproducing kernels of the three families, in hypergeometric closed form
//! and in brute-force coefficient-series form.
//!
//! Every kernel is a function of `xi = z conj(w)` alone. The closed forms
//! consist of a polynomial head (indices below the order `m`), a `pFq` tail,
//! and a Laurent correction active when the pole order `p` exceeds `m`:
//!
//! - disk:  `sum_{n<m} (a+b+2)_n/(b+1)_n (xi/R^2)^n
//!           + xi^m/(m!)^2 4F3(1,1,1,a+b+2; m+1,m+1,b+1 | xi/R^2) + A(xi)`
//! - plane: `sum_{n<m} (theta xi)^n/(b+1)_n
//!           + xi^m/(m!)^2 3F3(1,1,1; m+1,m+1,b+1 | theta xi) + B(xi)`
//! - circle: `(1-xi^m)/(1-xi) + xi^m/(m!)^2 3F2(1,1,1; m+1,m+1 | xi) + C(xi)`
//!
//! The series route `kernel_series` sums `xi^n / ||z^n||^2` directly from the
//! monomial norms and is the independent oracle for the closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::{
    BargmannDirichletParams, BergmanDirichletParams, DirichletSpace, HardyDirichletParams,
};
use crate::specfun::{
    factorial, factorial_quotient, gamma_ratio, ln_gamma_ratio, pfq, pfq_eval, poch_ratio,
    HypergeomSpec,
};

/// Closed-form evaluation refuses arguments this close to the convergence
/// boundary of the Gauss-type series.
const EDGE_GUARD: f64 = 0.999;

/// Point pair a kernel is queried at; all kernels depend on the pair only
/// through `xi = z conj(w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub z: Complex64,
    pub w: Complex64,
}

impl KernelQuery {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self { z, w }
    }

    pub fn xi(&self) -> Complex64 {
        self.z * self.w.conj()
    }
}

fn check_laurent_argument(xi: Complex64, p: u32, m: u32) -> Result<()> {
    if p > m && xi == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "kernel has a pole at xi = 0 when p > m".into(),
        ));
    }
    Ok(())
}

/// Disk-family kernel in closed form.
pub fn bergman_kernel(xi: Complex64, params: &BergmanDirichletParams) -> Result<Complex64> {
    let r2 = params.radius * params.radius;
    if xi.norm() >= EDGE_GUARD * r2 {
        return Err(Error::Domain(format!(
            "|xi| = {} too close to the convergence boundary R^2 = {r2}",
            xi.norm()
        )));
    }
    check_laurent_argument(xi, params.p, params.m)?;
    let m = params.m;
    let beta_full = params.beta();
    let a2 = params.alpha + beta_full + 2.0;
    let x = xi / r2;

    // polynomial head
    let mut head = Complex64::new(0.0, 0.0);
    let mut coeff = 1.0;
    let mut xpow = Complex64::new(1.0, 0.0);
    for n in 0..m {
        head += coeff * xpow;
        coeff *= (a2 + n as f64) / (beta_full + 1.0 + n as f64);
        xpow *= x;
    }

    // hypergeometric tail
    let mf = factorial(m);
    let spec = HypergeomSpec::new(
        vec![1.0, 1.0, 1.0, a2],
        vec![m as f64 + 1.0, m as f64 + 1.0, beta_full + 1.0],
    )?;
    let tail = xi.powu(m) / (mf * mf) * pfq_eval(&spec, x)?.value;

    // Laurent correction; the two Gamma ratios are combined in log space
    // because each alone overflows once alpha grows with R^2
    let mut correction = Complex64::new(0.0, 0.0);
    if params.p > m {
        let ln_gr = ln_gamma_ratio(beta_full + 1.0, a2)?;
        let r2m = r2.powi(m as i32);
        for k in 0..(params.p - m) {
            let kf = k as f64;
            let ln_ratio = ln_gamma_ratio(
                params.alpha + beta_full + 1.0 - m as f64 - kf,
                beta_full - m as f64 - kf,
            )?;
            let fq = factorial_quotient(k, m + k);
            correction += r2m * (ln_ratio + ln_gr).exp() * fq * fq * (r2 / xi).powi(k as i32 + 1);
        }
    }
    Ok(head + tail + correction)
}

/// Plane-family kernel in closed form.
pub fn bargmann_kernel(xi: Complex64, params: &BargmannDirichletParams) -> Result<Complex64> {
    check_laurent_argument(xi, params.p, params.m)?;
    let m = params.m;
    let beta_full = params.beta();
    let x = params.theta * xi;

    let mut head = Complex64::new(0.0, 0.0);
    let mut coeff = 1.0;
    let mut xpow = Complex64::new(1.0, 0.0);
    for n in 0..m {
        head += coeff * xpow;
        coeff /= beta_full + 1.0 + n as f64;
        xpow *= x;
    }

    let mf = factorial(m);
    let spec = HypergeomSpec::new(
        vec![1.0, 1.0, 1.0],
        vec![m as f64 + 1.0, m as f64 + 1.0, beta_full + 1.0],
    )?;
    let tail = xi.powu(m) / (mf * mf) * pfq_eval(&spec, x)?.value;

    let mut correction = Complex64::new(0.0, 0.0);
    if params.p > m {
        let theta_m = params.theta.powi(m as i32);
        for k in 0..(params.p - m) {
            let kf = k as f64;
            let ratio = gamma_ratio(beta_full + 1.0, beta_full - m as f64 - kf)?;
            let fq = factorial_quotient(k, m + k);
            correction += ratio * fq * fq / theta_m * x.powi(-(k as i32 + 1));
        }
    }
    Ok(head + tail + correction)
}

/// Circle-family kernel in closed form (`s = 2` only).
pub fn hardy_kernel(xi: Complex64, params: &HardyDirichletParams) -> Result<Complex64> {
    if params.s != 2.0 {
        return Err(Error::Unsupported(
            "the Hardy kernel exists only for s = 2".into(),
        ));
    }
    if xi.norm() >= EDGE_GUARD {
        return Err(Error::Domain(format!(
            "|xi| = {} too close to the unit circle",
            xi.norm()
        )));
    }
    check_laurent_argument(xi, params.p, params.m)?;
    let m = params.m;

    // the m = 0, p = 0 kernel is the plain geometric series
    if m == 0 && params.p == 0 {
        return Ok(1.0 / (Complex64::new(1.0, 0.0) - xi));
    }

    let mut head = Complex64::new(0.0, 0.0);
    let mut xpow = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        head += xpow;
        xpow *= xi;
    }

    let mf = factorial(m);
    let spec = HypergeomSpec::new(
        vec![1.0, 1.0, 1.0],
        vec![m as f64 + 1.0, m as f64 + 1.0],
    )?;
    let tail = xi.powu(m) / (mf * mf) * pfq_eval(&spec, xi)?.value;

    let mut correction = Complex64::new(0.0, 0.0);
    if params.p > m {
        for k in 0..(params.p - m) {
            let fq = factorial_quotient(k, m + k);
            correction += fq * fq * xi.powi(-(k as i32 + 1));
        }
    }
    Ok(head + tail + correction)
}

/// Brute-force kernel series `sum_{n >= min(m-p, 0)} xi^n / ||z^n||^2`,
/// truncated at index `truncation`. Consecutive terms are chained through
/// the norm ratio so very high indices never form an overflowing norm.
pub fn kernel_series<S: DirichletSpace>(
    space: &S,
    xi: Complex64,
    truncation: i64,
) -> Result<Complex64> {
    let min = space.min_index();
    if min < 0 && xi == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "kernel series has a pole at xi = 0 when p > m".into(),
        ));
    }
    let m = space.order() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in min..=truncation.min(m) {
        sum += xi.powi(n as i32) / space.monomial_norm_sq(n)?;
    }
    if truncation > m {
        let mut term = xi.powi(m as i32) / space.monomial_norm_sq(m)?;
        for n in m..truncation {
            term *= xi / space.norm_sq_ratio(n);
            sum += term;
        }
    }
    Ok(sum)
}

/// Series oracle for [`bergman_kernel`].
pub fn bergman_kernel_series(
    xi: Complex64,
    params: &BergmanDirichletParams,
    truncation: i64,
) -> Result<Complex64> {
    if xi.norm() >= params.radius * params.radius {
        return Err(Error::Domain(
            "series argument outside the disk of convergence".into(),
        ));
    }
    kernel_series(params, xi, truncation)
}

/// Series oracle for [`bargmann_kernel`].
pub fn bargmann_kernel_series(
    xi: Complex64,
    params: &BargmannDirichletParams,
    truncation: i64,
) -> Result<Complex64> {
    kernel_series(params, xi, truncation)
}

/// Series oracle for [`hardy_kernel`].
pub fn hardy_kernel_series(
    xi: Complex64,
    params: &HardyDirichletParams,
    truncation: i64,
) -> Result<Complex64> {
    if xi.norm() >= 1.0 {
        return Err(Error::Domain(
            "series argument outside the unit disk".into(),
        ));
    }
    kernel_series(params, xi, truncation)
}

/// The three independent order-zero rewrites of the disk kernel.
#[derive(Debug, Clone, Copy)]
pub struct KernelM0Forms {
    /// Laurent prefactor times `2F1(1, a+b0+2; b0+1 | xi/R^2)`.
    pub gauss: Complex64,
    /// Euler-transformed variant with the factor `(1 - xi/R^2)^(-(alpha+2))`.
    pub euler: Complex64,
    /// Binomial-sum variant; absent when `beta0 = 0` (each term carries
    /// `beta0 / (n + beta0)`).
    pub binomial: Option<Complex64>,
}

/// Evaluates all order-zero closed forms of the disk kernel independently.
pub fn bergman_kernel_m0_forms(
    xi: Complex64,
    params: &BergmanDirichletParams,
) -> Result<KernelM0Forms> {
    if params.m != 0 {
        return Err(Error::Domain(format!(
            "order-zero forms require m = 0, got m = {}",
            params.m
        )));
    }
    let r2 = params.radius * params.radius;
    if xi == Complex64::new(0.0, 0.0) || xi.norm() >= EDGE_GUARD * r2 {
        return Err(Error::Domain(format!(
            "forms require 0 < |xi| < R^2, got |xi| = {}",
            xi.norm()
        )));
    }
    let a0 = params.alpha + params.beta0 + 2.0;
    let b0 = params.beta0 + 1.0;
    let x = xi / r2;
    let prefactor = poch_ratio(b0, a0, params.p) * (r2 / xi).powi(params.p as i32);

    let gauss = prefactor * pfq(&[1.0, a0], &[b0], x)?;

    let euler_factor = (Complex64::new(1.0, 0.0) - x).powf(-(params.alpha + 2.0));
    let euler = prefactor * euler_factor * pfq(&[params.beta0, -(params.alpha + 1.0)], &[b0], x)?;

    let binomial = if params.beta0 == 0.0 {
        None
    } else {
        Some(prefactor * euler_factor * params.beta0 * binomial_weighted_sum(params, x)?)
    };

    Ok(KernelM0Forms {
        gauss,
        euler,
        binomial,
    })
}

/// `sum_n (-1)^n / (n + beta0) * C(alpha+1, n) * x^n` with the same stopping
/// rule as the `pFq` machinery.
fn binomial_weighted_sum(params: &BergmanDirichletParams, x: Complex64) -> Result<Complex64> {
    let alpha = params.alpha;
    let beta0 = params.beta0;
    let mut binom = 1.0;
    let mut xpow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small_run = 0;
    for n in 0..crate::specfun::DEFAULT_MAX_TERMS {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign / (nf + beta0) * binom * xpow;
        sum += term;
        if term.norm() <= crate::specfun::DEFAULT_REL_TOL * sum.norm() {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        binom *= (alpha + 1.0 - nf) / (nf + 1.0);
        if binom == 0.0 {
            return Ok(sum);
        }
        xpow *= x;
    }
    Err(Error::Convergence(
        "binomial kernel series did not converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceParams;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel_err(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1.0)
    }

    #[test]
    fn bergman_kernel_at_origin() {
        for m in 1..4u32 {
            let params = BergmanDirichletParams::new(0.7, -0.3, m, 1.0, m).unwrap();
            assert_eq!(bergman_kernel(c(0.0), &params).unwrap(), c(1.0));
        }
    }

    #[test]
    fn kernel_query_swapping_arguments_conjugates() {
        let params = BergmanDirichletParams::new(0.7, -0.3, 1, 1.0, 1).unwrap();
        let z = Complex64::new(0.4, 0.2);
        let w = Complex64::new(-0.3, 0.5);
        let forward = KernelQuery::new(z, w);
        let swapped = KernelQuery::new(w, z);
        assert_eq!(forward.xi(), swapped.xi().conj());
        let k = bergman_kernel(forward.xi(), &params).unwrap();
        let k_swapped = bergman_kernel(swapped.xi(), &params).unwrap();
        assert!((k - k_swapped.conj()).norm() < 1e-13);
    }

    #[test]
    fn bergman_kernel_order_one_logarithm() {
        // flat weight, m = 1: kernel telescopes to 1 - ln(1 - xi)
        let params = BergmanDirichletParams::new(0.0, 0.0, 0, 1.0, 1).unwrap();
        let v = bergman_kernel(c(0.5), &params).unwrap();
        assert_relative_eq!(v.re, 1.0 - 0.5f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(v.re, 1.6931471805599453, max_relative = 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn bergman_kernel_classical_case() {
        // m = 0, flat weight on the unit disk: 1/(1-xi)^2
        let params = BergmanDirichletParams::new(0.0, 0.0, 0, 1.0, 0).unwrap();
        let v = bergman_kernel(c(0.5), &params).unwrap();
        assert_relative_eq!(v.re, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn bergman_kernel_matches_series() {
        let params = BergmanDirichletParams::new(1.5, -0.5, 2, 1.0, 1).unwrap();
        let xi = c(0.3);
        let closed = bergman_kernel(xi, &params).unwrap();
        let series = bergman_kernel_series(xi, &params, 800).unwrap();
        assert!(rel_err(closed, series) < 1e-10, "closed {closed} vs series {series}");
    }

    #[test]
    fn bergman_kernel_domain_errors() {
        let params = BergmanDirichletParams::new(0.0, 0.0, 0, 1.0, 0).unwrap();
        assert!(bergman_kernel(c(1.0), &params).is_err());
        let laurent = BergmanDirichletParams::new(0.0, 0.0, 2, 1.0, 0).unwrap();
        assert!(bergman_kernel(c(0.0), &laurent).is_err());
    }

    #[test]
    fn kernel_series_single_term() {
        let params = BergmanDirichletParams::new(0.5, 0.0, 0, 1.0, 1).unwrap();
        assert_eq!(
            bergman_kernel_series(c(0.4), &params, 0).unwrap(),
            c(1.0)
        );
        assert_eq!(bergman_kernel_series(c(0.0), &params, 5).unwrap(), c(1.0));
    }

    #[test]
    fn m0_forms_agree_pairwise() {
        let params = BergmanDirichletParams::new(0.5, -0.3, 1, 1.0, 0).unwrap();
        let xi = c(0.4);
        let forms = bergman_kernel_m0_forms(xi, &params).unwrap();
        let series = bergman_kernel_series(xi, &params, 900).unwrap();
        assert!(rel_err(forms.gauss, forms.euler) < 1e-9);
        let binom = forms.binomial.unwrap();
        assert!(rel_err(forms.gauss, binom) < 1e-9);
        assert!(rel_err(forms.gauss, series) < 1e-9);
    }

    #[test]
    fn m0_forms_flat_case_geometric_derivative() {
        let params = BergmanDirichletParams::new(0.0, 0.0, 0, 1.0, 0).unwrap();
        let forms = bergman_kernel_m0_forms(c(0.5), &params).unwrap();
        assert_relative_eq!(forms.gauss.re, 4.0, max_relative = 1e-12);
        assert!(forms.binomial.is_none());
    }

    #[test]
    fn m0_forms_leading_laurent_coefficient() {
        // xi^p * K(xi) at xi -> 0 approaches 1 / ||z^{-p}||^2
        let params = BergmanDirichletParams::new(0.5, -0.3, 1, 1.0, 0).unwrap();
        let xi = c(1e-6);
        let forms = bergman_kernel_m0_forms(xi, &params).unwrap();
        let leading = (forms.gauss * xi.powu(1)).re;
        let expected = 1.0 / params.monomial_norm_sq(-1).unwrap();
        assert_relative_eq!(leading, expected, max_relative = 1e-5);
    }

    #[test]
    fn bargmann_kernel_exponential_case() {
        let params = BargmannDirichletParams::new(1.0, 0.0, 0, 0).unwrap();
        let v = bargmann_kernel(c(1.0), &params).unwrap();
        assert_relative_eq!(v.re, std::f64::consts::E, max_relative = 1e-13);
    }

    #[test]
    fn bargmann_kernel_at_origin() {
        let params = BargmannDirichletParams::new(2.0, -0.5, 1, 1).unwrap();
        assert_eq!(bargmann_kernel(c(0.0), &params).unwrap(), c(1.0));
    }

    #[test]
    fn bargmann_kernel_laurent_case_matches_confluent_form() {
        // m = 0: kernel = (b0+1)_p / (theta xi)^p * 1F1(1; b0+1 | theta xi)
        let params = BargmannDirichletParams::new(2.0, -0.5, 1, 0).unwrap();
        let xi = c(0.7);
        let v = bargmann_kernel(xi, &params).unwrap();
        let x = params.theta * xi;
        let confluent = crate::specfun::pochhammer(0.5, 1) / x.powu(1)
            * pfq(&[1.0], &[0.5], x).unwrap();
        assert!(rel_err(v, confluent) < 1e-12, "{v} vs {confluent}");
        let series = bargmann_kernel_series(xi, &params, 400).unwrap();
        assert!(rel_err(v, series) < 1e-10);
    }

    #[test]
    fn hardy_kernel_geometric_laurent_form() {
        // m = 0, p = 1: kernel = 1 / (xi (1 - xi)) = 4 at xi = 1/2
        let params = HardyDirichletParams::hilbert(-0.3, 1, 0).unwrap();
        let v = hardy_kernel(c(0.5), &params).unwrap();
        assert_relative_eq!(v.re, 4.0, max_relative = 1e-13);
    }

    #[test]
    fn hardy_kernel_at_origin() {
        let params = HardyDirichletParams::hilbert(0.0, 0, 1).unwrap();
        assert_eq!(hardy_kernel(c(0.0), &params).unwrap(), c(1.0));
    }

    #[test]
    fn hardy_kernel_matches_series() {
        let params = HardyDirichletParams::hilbert(0.0, 0, 2).unwrap();
        let xi = c(0.3);
        let closed = hardy_kernel(xi, &params).unwrap();
        let series = hardy_kernel_series(xi, &params, 200).unwrap();
        assert!(rel_err(closed, series) < 1e-10);
    }

    proptest! {
        #[test]
        fn kernels_are_hermitian_and_positive(
            re in -0.6..0.6f64,
            im in -0.6..0.6f64,
            alpha in -0.5..2.5f64,
            beta0 in -0.9..0.0f64,
            p in 0u32..3,
            m in 0u32..3,
        ) {
            let xi = Complex64::new(re, im);
            prop_assume!(xi.norm() > 1e-3 && xi.norm() < 0.8);
            let params = BergmanDirichletParams::new(alpha, beta0, p, 1.0, m).unwrap();
            let k = bergman_kernel(xi, &params).unwrap();
            let k_conj = bergman_kernel(xi.conj(), &params).unwrap();
            // K(z,w) = conj(K(w,z)) reduces to K(conj(xi)) = conj(K(xi))
            prop_assert!((k - k_conj.conj()).norm() <= 1e-12 * k.norm().max(1.0));
            // positivity on the diagonal: xi = |z|^2 > 0
            let diag = bergman_kernel(c(xi.norm_sqr().min(0.6)), &params).unwrap();
            prop_assert!(diag.re > 0.0);
            prop_assert!(diag.im.abs() <= 1e-12 * diag.re.abs());
        }

        #[test]
        fn closed_form_tracks_series(
            alpha in -0.5..2.5f64,
            beta0 in -0.9..0.0f64,
            p in 0u32..4,
            m in 0u32..3,
            radius in 0.8..1.3f64,
            re in -0.7..0.7f64,
            im in -0.7..0.7f64,
        ) {
            let params = BergmanDirichletParams::new(alpha, beta0, p, radius, m).unwrap();
            let r2 = radius * radius;
            let xi = Complex64::new(re, im) * r2;
            prop_assume!(xi.norm() > 1e-3 && xi.norm() <= 0.8 * r2);
            let closed = bergman_kernel(xi, &params).unwrap();
            let series = kernel_series(&SpaceParams::Bergman(params), xi, 800).unwrap();
            prop_assert!(
                (closed - series).norm() <= 1e-9 * (1.0 + series.norm()),
                "closed {} vs series {}", closed, series
            );
        }
    }
}
