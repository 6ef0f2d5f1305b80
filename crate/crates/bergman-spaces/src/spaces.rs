//! Function representation (finite Laurent series), the polynomial/tail
//! splitting, monomial norms for the three space families, and
//! coefficient-space inner products.
//!
//! A space of order `m` carries the norm
//! `||f||^2 = ||f_1||^2 + ||d^m f_2 / dz^m||^2` where `f_1` collects the
//! indices `0..m-1` and `f_2` the rest (including the Laurent indices
//! `m-p..-1` when `p > m`). Monomials are orthogonal in every family, so all
//! inner products reduce to diagonal sums against the squared monomial norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{DiskMeasureParams, FockMeasureParams};
use crate::specfun::{factorial_quotient, pochhammer, poch_ratio};

/// Finitely supported Laurent series `sum a_n z^n`, `n >= min_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "LaurentSeriesRepr", into = "LaurentSeriesRepr")]
pub struct LaurentSeries {
    min_index: i64,
    coeffs: Vec<Complex64>,
}

/// JSON shape: `{"min_index": n, "coefficients": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct LaurentSeriesRepr {
    min_index: i64,
    coefficients: Vec<[f64; 2]>,
}

impl From<LaurentSeriesRepr> for LaurentSeries {
    fn from(repr: LaurentSeriesRepr) -> Self {
        LaurentSeries::new(
            repr.min_index,
            repr.coefficients
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<LaurentSeries> for LaurentSeriesRepr {
    fn from(series: LaurentSeries) -> Self {
        LaurentSeriesRepr {
            min_index: series.min_index,
            coefficients: series.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl LaurentSeries {
    /// Coefficient at position `k` corresponds to the power `min_index + k`.
    pub fn new(min_index: i64, coeffs: Vec<Complex64>) -> Self {
        let mut s = Self { min_index, coeffs };
        s.trim();
        s
    }

    pub fn zero() -> Self {
        Self {
            min_index: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(n: i64, c: Complex64) -> Self {
        Self::new(n, vec![c])
    }

    /// Drops zero coefficients at both ends of the support.
    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if *last == Complex64::new(0.0, 0.0) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        let leading_zeros = self
            .coeffs
            .iter()
            .take_while(|c| **c == Complex64::new(0.0, 0.0))
            .count();
        if leading_zeros > 0 {
            self.coeffs.drain(..leading_zeros);
            self.min_index += leading_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.min_index = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> i64 {
        self.min_index
    }

    /// Largest index carrying a coefficient (`min_index - 1` for the zero series).
    pub fn max_index(&self) -> i64 {
        self.min_index + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        if n < self.min_index || n > self.max_index() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n - self.min_index) as usize]
        }
    }

    /// Indices and coefficients of the support.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.min_index + k as i64, c))
    }

    /// Evaluates the finite Laurent sum; the polynomial part by a Horner
    /// sweep in `z`, the principal part by a Horner sweep in `1/z`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let has_poles = self.terms().any(|(n, c)| n < 0 && c.norm() > 0.0);
        if z == Complex64::new(0.0, 0.0) {
            if has_poles {
                return Err(Error::Domain(
                    "evaluation at z = 0 with negative powers present".into(),
                ));
            }
            return Ok(self.coeff(0));
        }
        let mut positive = Complex64::new(0.0, 0.0);
        for n in (0..=self.max_index().max(0)).rev() {
            positive = positive * z + self.coeff(n);
        }
        let mut principal = Complex64::new(0.0, 0.0);
        if self.min_index < 0 {
            let inv = 1.0 / z;
            for n in self.min_index..0 {
                principal = principal * inv + self.coeff(n);
            }
            principal *= inv;
        }
        Ok(positive + principal)
    }

    /// Exact term-by-term derivative: `a_n z^n -> n a_n z^(n-1)`.
    pub fn derivative(&self) -> LaurentSeries {
        let coeffs = self
            .terms()
            .map(|(n, c)| c * n as f64)
            .collect::<Vec<_>>();
        LaurentSeries::new(self.min_index - 1, coeffs)
    }

    pub fn derivative_m(&self, m: u32) -> LaurentSeries {
        let mut d = self.clone();
        for _ in 0..m {
            d = d.derivative();
        }
        d
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;

    fn add(self, other: &LaurentSeries) -> LaurentSeries {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let min = self.min_index.min(other.min_index);
        let max = self.max_index().max(other.max_index());
        let coeffs = (min..=max).map(|n| self.coeff(n) + other.coeff(n)).collect();
        LaurentSeries::new(min, coeffs)
    }
}

/// Splits `f = f_1 + f_2`: `f_1` holds the indices `0..m-1`, `f_2` the tail
/// `n >= m` together with the Laurent part `m-p..-1` when present.
pub fn split_f1_f2(f: &LaurentSeries, m: u32, p: u32) -> (LaurentSeries, LaurentSeries) {
    debug_assert!(
        f.is_zero() || f.min_index() >= (m as i64 - p as i64).min(0),
        "series has a pole of higher order than the space admits"
    );
    let mut f1 = Vec::new();
    let mut f2_pairs = Vec::new();
    for (n, c) in f.terms() {
        if n >= 0 && n < m as i64 {
            f1.push((n, c));
        } else {
            f2_pairs.push((n, c));
        }
    }
    (from_pairs(f1), from_pairs(f2_pairs))
}

fn from_pairs(pairs: Vec<(i64, Complex64)>) -> LaurentSeries {
    if pairs.is_empty() {
        return LaurentSeries::zero();
    }
    let min = pairs.iter().map(|(n, _)| *n).min().unwrap();
    let max = pairs.iter().map(|(n, _)| *n).max().unwrap();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (max - min + 1) as usize];
    for (n, c) in pairs {
        coeffs[(n - min) as usize] = c;
    }
    LaurentSeries::new(min, coeffs)
}

/// Weighted Bergman-Dirichlet space of order `m` on the disk of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergmanDirichletParams {
    pub alpha: f64,
    pub beta0: f64,
    pub p: u32,
    pub radius: f64,
    pub m: u32,
}

impl BergmanDirichletParams {
    pub fn new(alpha: f64, beta0: f64, p: u32, radius: f64, m: u32) -> Result<Self> {
        DiskMeasureParams::new(alpha, beta0, p, radius)?;
        Ok(Self {
            alpha,
            beta0,
            p,
            radius,
            m,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta0 + self.p as f64
    }

    pub fn measure(&self) -> DiskMeasureParams {
        DiskMeasureParams {
            alpha: self.alpha,
            beta0: self.beta0,
            p: self.p,
            radius: self.radius,
        }
    }
}

/// Bargmann-Fock-Dirichlet space of order `m` on the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargmannDirichletParams {
    pub theta: f64,
    pub beta0: f64,
    pub p: u32,
    pub m: u32,
}

impl BargmannDirichletParams {
    pub fn new(theta: f64, beta0: f64, p: u32, m: u32) -> Result<Self> {
        FockMeasureParams::new(theta, beta0, p)?;
        Ok(Self { theta, beta0, p, m })
    }

    pub fn beta(&self) -> f64 {
        self.beta0 + self.p as f64
    }

    pub fn measure(&self) -> FockMeasureParams {
        FockMeasureParams {
            theta: self.theta,
            beta0: self.beta0,
            p: self.p,
        }
    }
}

/// Hardy-Dirichlet space of order `m` on the unit circle; the Hilbert
/// structure exists only for exponent `s = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyDirichletParams {
    pub beta0: f64,
    pub p: u32,
    pub m: u32,
    pub s: f64,
}

impl HardyDirichletParams {
    pub fn new(beta0: f64, p: u32, m: u32, s: f64) -> Result<Self> {
        if !(beta0 > -1.0 && beta0 <= 0.0) {
            return Err(Error::Domain(format!(
                "beta0 must lie in (-1, 0], got {beta0}"
            )));
        }
        if s <= 0.0 {
            return Err(Error::Domain(format!("s must be positive, got {s}")));
        }
        Ok(Self { beta0, p, m, s })
    }

    pub fn hilbert(beta0: f64, p: u32, m: u32) -> Result<Self> {
        Self::new(beta0, p, m, 2.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta0 + self.p as f64
    }
}

/// Admissible pole order: `floor(2(beta+1)/s)`, reduced by one when
/// `2(beta+1)/s` is a non-negative integer.
pub fn eta(s: f64, beta: f64) -> Result<u32> {
    if s <= 0.0 {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    if beta <= -1.0 {
        return Err(Error::Domain(format!("beta must exceed -1, got {beta}")));
    }
    let x = 2.0 * (beta + 1.0) / s;
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 && rounded >= 1.0 {
        Ok(rounded as u32 - 1)
    } else {
        Ok(x.floor() as u32)
    }
}

/// Common interface of the three families: minimal admissible index and
/// squared monomial norms, the data from which kernels and inner products
/// are assembled.
pub trait DirichletSpace {
    /// `min(0, m - p)`.
    fn min_index(&self) -> i64;

    /// Order `m` of the space.
    fn order(&self) -> u32;

    /// `||z^n||^2` in the space norm.
    fn monomial_norm_sq(&self, n: i64) -> Result<f64>;

    /// `||z^(n+1)||^2 / ||z^n||^2` for `n >= m`, in a form that stays finite
    /// when the individual norms overflow.
    fn norm_sq_ratio(&self, n: i64) -> f64;
}

fn check_index(n: i64, min: i64) -> Result<()> {
    if n < min {
        Err(Error::IndexRange { index: n, min })
    } else {
        Ok(())
    }
}

fn space_min_index(m: u32, p: u32) -> i64 {
    (m as i64 - p as i64).min(0)
}

impl DirichletSpace for BergmanDirichletParams {
    fn min_index(&self) -> i64 {
        space_min_index(self.m, self.p)
    }

    fn order(&self) -> u32 {
        self.m
    }

    fn monomial_norm_sq(&self, n: i64) -> Result<f64> {
        check_index(n, self.min_index())?;
        let m = self.m as i64;
        let beta_full = self.beta();
        let a2 = self.alpha + beta_full + 2.0;
        if n >= 0 && n < m {
            Ok(self.radius.powi(2 * n as i32) * poch_ratio(beta_full + 1.0, a2, n as u32))
        } else if n >= m {
            let j = (n - m) as u32;
            let fq = factorial_quotient(n as u32, (n - m) as u32);
            Ok(self.radius.powi(2 * j as i32) * poch_ratio(beta_full + 1.0, a2, j) * fq * fq)
        } else {
            // Laurent range m-p <= n <= -1
            let shift = (n - m + self.p as i64) as u32;
            let a0 = self.alpha + self.beta0 + 2.0;
            let fq = factorial_quotient((m - n - 1) as u32, (-n - 1) as u32);
            Ok(self.radius.powi(2 * (n - m) as i32)
                * poch_ratio(self.beta0 + 1.0, a0, shift)
                * poch_ratio(a0, self.beta0 + 1.0, self.p)
                * fq
                * fq)
        }
    }

    fn norm_sq_ratio(&self, n: i64) -> f64 {
        debug_assert!(n >= self.m as i64);
        let j = (n - self.m as i64) as f64;
        let beta_full = self.beta();
        let step = (n as f64 + 1.0) / (j + 1.0);
        self.radius * self.radius * (beta_full + 1.0 + j) / (self.alpha + beta_full + 2.0 + j)
            * step
            * step
    }
}

impl DirichletSpace for BargmannDirichletParams {
    fn min_index(&self) -> i64 {
        space_min_index(self.m, self.p)
    }

    fn order(&self) -> u32 {
        self.m
    }

    fn monomial_norm_sq(&self, n: i64) -> Result<f64> {
        check_index(n, self.min_index())?;
        let m = self.m as i64;
        let beta_full = self.beta();
        if n >= 0 && n < m {
            Ok(pochhammer(beta_full + 1.0, n as u32) / self.theta.powi(n as i32))
        } else if n >= m {
            let j = (n - m) as u32;
            let fq = factorial_quotient(n as u32, (n - m) as u32);
            Ok(fq * fq * pochhammer(beta_full + 1.0, j) / self.theta.powi(j as i32))
        } else {
            // Gamma(beta+1+j)/Gamma(beta+1) = 1/(beta+1+j)_(-j) for j = n-m < 0
            let j = n - m;
            let fq = factorial_quotient((m - n - 1) as u32, (-n - 1) as u32);
            Ok(fq * fq / pochhammer(beta_full + 1.0 + j as f64, (-j) as u32)
                / self.theta.powi(j as i32))
        }
    }

    fn norm_sq_ratio(&self, n: i64) -> f64 {
        debug_assert!(n >= self.m as i64);
        let j = (n - self.m as i64) as f64;
        let step = (n as f64 + 1.0) / (j + 1.0);
        (self.beta() + 1.0 + j) / self.theta * step * step
    }
}

impl DirichletSpace for HardyDirichletParams {
    fn min_index(&self) -> i64 {
        space_min_index(self.m, self.p)
    }

    fn order(&self) -> u32 {
        self.m
    }

    fn monomial_norm_sq(&self, n: i64) -> Result<f64> {
        if self.s != 2.0 {
            return Err(Error::Unsupported(
                "Hardy monomial norms exist only for s = 2".into(),
            ));
        }
        check_index(n, self.min_index())?;
        let m = self.m as i64;
        if n >= 0 && n < m {
            Ok(1.0)
        } else if n >= m {
            let fq = factorial_quotient(n as u32, (n - m) as u32);
            Ok(fq * fq)
        } else {
            let fq = factorial_quotient((m - n - 1) as u32, (-n - 1) as u32);
            Ok(fq * fq)
        }
    }

    fn norm_sq_ratio(&self, n: i64) -> f64 {
        debug_assert!(n >= self.m as i64);
        let j = (n - self.m as i64) as f64;
        let step = (n as f64 + 1.0) / (j + 1.0);
        step * step
    }
}

/// Tagged union over the three families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceParams {
    Bergman(BergmanDirichletParams),
    Bargmann(BargmannDirichletParams),
    Hardy(HardyDirichletParams),
}

impl DirichletSpace for SpaceParams {
    fn min_index(&self) -> i64 {
        match self {
            SpaceParams::Bergman(s) => s.min_index(),
            SpaceParams::Bargmann(s) => s.min_index(),
            SpaceParams::Hardy(s) => s.min_index(),
        }
    }

    fn order(&self) -> u32 {
        match self {
            SpaceParams::Bergman(s) => s.order(),
            SpaceParams::Bargmann(s) => s.order(),
            SpaceParams::Hardy(s) => s.order(),
        }
    }

    fn monomial_norm_sq(&self, n: i64) -> Result<f64> {
        match self {
            SpaceParams::Bergman(s) => s.monomial_norm_sq(n),
            SpaceParams::Bargmann(s) => s.monomial_norm_sq(n),
            SpaceParams::Hardy(s) => s.monomial_norm_sq(n),
        }
    }

    fn norm_sq_ratio(&self, n: i64) -> f64 {
        match self {
            SpaceParams::Bergman(s) => s.norm_sq_ratio(n),
            SpaceParams::Bargmann(s) => s.norm_sq_ratio(n),
            SpaceParams::Hardy(s) => s.norm_sq_ratio(n),
        }
    }
}

/// `||z^n||` in the disk space.
pub fn monomial_norm_bergman(n: i64, params: &BergmanDirichletParams) -> Result<f64> {
    Ok(params.monomial_norm_sq(n)?.sqrt())
}

/// `||z^n||` in the plane space.
pub fn monomial_norm_bargmann(n: i64, params: &BargmannDirichletParams) -> Result<f64> {
    Ok(params.monomial_norm_sq(n)?.sqrt())
}

/// `||z^n||` in the circle space (`s = 2` only).
pub fn monomial_norm_hardy(n: i64, params: &HardyDirichletParams) -> Result<f64> {
    Ok(params.monomial_norm_sq(n)?.sqrt())
}

/// Diagonal coefficient-space inner product
/// `<f, g> = sum a_n conj(b_n) ||z^n||^2`.
pub fn dirichlet_inner_product<S: DirichletSpace>(
    f: &LaurentSeries,
    g: &LaurentSeries,
    space: &S,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, a) in f.terms() {
        let b = g.coeff(n);
        if a.norm() == 0.0 || b.norm() == 0.0 {
            continue;
        }
        acc += a * b.conj() * space.monomial_norm_sq(n)?;
    }
    Ok(acc)
}

/// Space norm `sqrt(<f, f>)`.
pub fn dirichlet_norm<S: DirichletSpace>(f: &LaurentSeries, space: &S) -> Result<f64> {
    Ok(dirichlet_inner_product(f, f, space)?.re.max(0.0).sqrt())
}

/// Angular mean `M_s(r, f) = (avg_theta |f(r e^(i theta))|^s)^(1/s)` by the
/// uniform trapezoid rule; exact for `s = 2` once the grid exceeds the mode
/// span of `|f|^2`.
pub fn radial_mean(f: &LaurentSeries, r: f64, s: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1), got {r}")));
    }
    if s <= 0.0 {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let span = (f.max_index() - f.min_index()).max(0) as usize;
    let n = if s == 2.0 {
        (2 * span + 16).max(64)
    } else {
        (4 * span + 16).max(1024)
    };
    let mut acc = 0.0;
    for k in 0..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let z = Complex64::from_polar(r, theta);
        acc += f.evaluate(z)?.norm().powf(s);
    }
    Ok((acc / n as f64).powf(1.0 / s))
}
