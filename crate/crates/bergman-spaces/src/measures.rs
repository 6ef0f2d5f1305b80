//! Probability measures on the punctured disk and plane, and Gauss-type
//! quadrature rules realizing their inner products.
//!
//! The disk measure has density `|z|^(2 beta) (R^2 - |z|^2)^alpha` up to
//! probability normalization; the substitution `t = |z|^2 / R^2` turns its
//! radial part into the Jacobi weight `t^beta (1-t)^alpha` on `(0, 1)`. The
//! plane measure has density `|z|^(2 beta) e^(-theta |z|^2)`; `t = theta |z|^2`
//! turns it into the generalized Laguerre weight `t^beta e^(-t)`. Nodes and
//! weights come from the Golub-Welsch eigenvalue method on the symmetric
//! recurrence matrix.
//!
//! Both rules fold the factor `t^p` into the weights: the underlying
//! Gauss rule is built for the exponent `beta0 = beta - p`, so every Laurent
//! radial power down to `t^(-p)` is integrated with full polynomial
//! exactness, while the weights still sum to one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{beta, ln_gamma};

/// Parameters of the disk measure with weight
/// `|z|^(2 beta) (R^2 - |z|^2)^alpha`, `beta = beta0 + p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMeasureParams {
    pub alpha: f64,
    pub beta0: f64,
    pub p: u32,
    pub radius: f64,
}

impl DiskMeasureParams {
    pub fn new(alpha: f64, beta0: f64, p: u32, radius: f64) -> Result<Self> {
        if alpha <= -1.0 {
            return Err(Error::Domain(format!("alpha must exceed -1, got {alpha}")));
        }
        if !(beta0 > -1.0 && beta0 <= 0.0) {
            return Err(Error::Domain(format!(
                "beta0 must lie in (-1, 0], got {beta0}"
            )));
        }
        if radius <= 0.0 {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        Ok(Self {
            alpha,
            beta0,
            p,
            radius,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta0 + self.p as f64
    }
}

/// Parameters of the plane measure with weight `|z|^(2 beta) e^(-theta |z|^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockMeasureParams {
    pub theta: f64,
    pub beta0: f64,
    pub p: u32,
}

impl FockMeasureParams {
    pub fn new(theta: f64, beta0: f64, p: u32) -> Result<Self> {
        if theta <= 0.0 {
            return Err(Error::Domain(format!("theta must be positive, got {theta}")));
        }
        if !(beta0 > -1.0 && beta0 <= 0.0) {
            return Err(Error::Domain(format!(
                "beta0 must lie in (-1, 0], got {beta0}"
            )));
        }
        Ok(Self { theta, beta0, p })
    }

    pub fn beta(&self) -> f64 {
        self.beta0 + self.p as f64
    }
}

/// Density of the disk measure with respect to the normalized area measure.
pub fn disk_density(z: Complex64, params: &DiskMeasureParams) -> Result<f64> {
    let beta_exp = params.beta();
    let r2 = params.radius * params.radius;
    let zn2 = z.norm_sqr();
    if zn2 >= r2 {
        return Err(Error::Domain(format!(
            "|z| = {} outside the open disk of radius {}",
            z.norm(),
            params.radius
        )));
    }
    if zn2 == 0.0 && beta_exp < 0.0 {
        return Err(Error::Domain(
            "density is singular at the origin for beta < 0".into(),
        ));
    }
    let norm = r2.powf(params.alpha + beta_exp + 1.0) * beta(params.alpha + 1.0, beta_exp + 1.0)?;
    Ok(zn2.powf(beta_exp) * (r2 - zn2).powf(params.alpha) / norm)
}

/// Density of the plane measure with respect to the area measure.
pub fn fock_density(z: Complex64, params: &FockMeasureParams) -> Result<f64> {
    let beta_exp = params.beta();
    let zn2 = z.norm_sqr();
    if zn2 == 0.0 && beta_exp < 0.0 {
        return Err(Error::Domain(
            "density is singular at the origin for beta < 0".into(),
        ));
    }
    let norm = (ln_gamma(beta_exp + 1.0) - (beta_exp + 1.0) * params.theta.ln()).exp();
    Ok(zn2.powf(beta_exp) * (-params.theta * zn2).exp() / norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RadialDomain {
    Disk { radius: f64 },
    Plane { theta: f64 },
}

/// Tensor quadrature rule: radial Gauss nodes in the substitution variable
/// paired with a uniform angular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    angular_count: usize,
    domain: RadialDomain,
}

impl QuadratureRule {
    pub fn radial_nodes(&self) -> &[f64] {
        &self.radial_nodes
    }

    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// Radius in the plane corresponding to the i-th substitution node.
    pub fn radius_at(&self, i: usize) -> f64 {
        let t = self.radial_nodes[i];
        match self.domain {
            RadialDomain::Disk { radius } => radius * t.sqrt(),
            RadialDomain::Plane { theta } => (t / theta).sqrt(),
        }
    }

    /// Quadrature estimate of `int f dmu`.
    pub fn integrate<F>(&self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        let n_ang = self.angular_count;
        let mut angles = Vec::with_capacity(n_ang);
        for k in 0..n_ang {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_ang as f64;
            angles.push(Complex64::new(theta.cos(), theta.sin()));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..self.radial_nodes.len() {
            let r = self.radius_at(i);
            let mut ring = Complex64::new(0.0, 0.0);
            for dir in &angles {
                ring += f(r * dir)?;
            }
            total += self.radial_weights[i] * ring / n_ang as f64;
        }
        Ok(total)
    }
}

/// Tensor quadrature estimate of the inner product `int f conj(g) dmu`.
pub fn inner_product<F, G>(f: F, g: G, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
    G: Fn(Complex64) -> Result<Complex64>,
{
    rule.integrate(|z| Ok(f(z)? * g(z)?.conj()))
}

/// Builds the disk rule: Gauss-Jacobi nodes for the weight
/// `t^beta0 (1-t)^alpha` on `(0,1)`, with the `t^p` factor folded into the
/// weights and the total normalized against `B(alpha+1, beta+1)`.
pub fn build_disk_quadrature(
    params: &DiskMeasureParams,
    n_radial: usize,
    n_angular: usize,
) -> Result<QuadratureRule> {
    check_sizes(n_radial, n_angular)?;
    let (nodes, raw_weights) = jacobi_rule_unit(params.alpha, params.beta0, n_radial)?;
    let full_mass = beta(params.alpha + 1.0, params.beta() + 1.0)?;
    finish_rule(
        nodes,
        raw_weights,
        params.p,
        full_mass,
        n_angular,
        RadialDomain::Disk {
            radius: params.radius,
        },
    )
}

/// Builds the plane rule: generalized Gauss-Laguerre nodes for the weight
/// `t^beta0 e^(-t)`, with the `t^p` factor folded into the weights and the
/// total normalized against `Gamma(beta+1)`.
pub fn build_fock_quadrature(
    params: &FockMeasureParams,
    n_radial: usize,
    n_angular: usize,
) -> Result<QuadratureRule> {
    check_sizes(n_radial, n_angular)?;
    let (nodes, raw_weights) = laguerre_rule(params.beta0, n_radial)?;
    let full_mass = ln_gamma(params.beta() + 1.0).exp();
    finish_rule(
        nodes,
        raw_weights,
        params.p,
        full_mass,
        n_angular,
        RadialDomain::Plane {
            theta: params.theta,
        },
    )
}

fn check_sizes(n_radial: usize, n_angular: usize) -> Result<()> {
    if n_radial < 2 {
        return Err(Error::Construction(format!(
            "need at least 2 radial nodes, got {n_radial}"
        )));
    }
    if n_angular < 4 {
        return Err(Error::Construction(format!(
            "need at least 4 angular nodes, got {n_angular}"
        )));
    }
    Ok(())
}

fn finish_rule(
    nodes: Vec<f64>,
    raw_weights: Vec<f64>,
    p: u32,
    full_mass: f64,
    n_angular: usize,
    domain: RadialDomain,
) -> Result<QuadratureRule> {
    let weights: Vec<f64> = nodes
        .iter()
        .zip(&raw_weights)
        .map(|(&t, &w)| w * t.powi(p as i32) / full_mass)
        .collect();
    let sum: f64 = weights.iter().sum();
    if !(sum - 1.0).abs().is_finite() || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Construction(format!(
            "radial weights sum to {sum}, expected 1"
        )));
    }
    for pair in nodes.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Construction("radial nodes are not increasing".into()));
        }
    }
    Ok(QuadratureRule {
        radial_nodes: nodes,
        radial_weights: weights,
        angular_count: n_angular,
        domain,
    })
}

/// Gauss rule for the weight `t^b (1-t)^a` on `(0, 1)`.
/// Returned weights sum to `B(a+1, b+1)`.
fn jacobi_rule_unit(a: f64, b: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    // symmetric Jacobi recurrence for the weight (1-x)^a (1+x)^b on (-1, 1)
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n - 1);
    diag.push((b - a) / (a + b + 2.0));
    for k in 1..n {
        let kf = k as f64;
        let denom = 2.0 * kf + a + b;
        diag.push((b * b - a * a) / (denom * (denom + 2.0)));
        let b_sq = if k == 1 {
            // the factors (k+a+b) and (2k+a+b-1) coincide at k = 1; cancel
            // them analytically so a+b near -1 stays finite
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                / (denom * denom * (denom + 1.0) * (denom - 1.0))
        };
        offdiag.push(b_sq.sqrt());
    }
    let mass = beta(a + 1.0, b + 1.0)?;
    let (x, w) = golub_welsch(&diag, &offdiag, mass)?;
    // map (-1, 1) to (0, 1)
    let nodes = x.iter().map(|&xi| 0.5 * (1.0 + xi)).collect();
    Ok((nodes, w))
}

/// Gauss rule for the weight `t^b e^(-t)` on `(0, inf)`.
/// Returned weights sum to `Gamma(b+1)`.
fn laguerre_rule(b: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n - 1);
    for k in 0..n {
        let kf = k as f64;
        diag.push(2.0 * kf + b + 1.0);
        if k >= 1 {
            offdiag.push((kf * (kf + b)).sqrt());
        }
    }
    let mass = ln_gamma(b + 1.0).exp();
    golub_welsch(&diag, &offdiag, mass)
}

/// Nodes and weights from the symmetric tridiagonal recurrence matrix:
/// nodes are its eigenvalues, weights the squared first components of the
/// normalized eigenvectors scaled by the total mass of the weight function.
fn golub_welsch(diag: &[f64], offdiag: &[f64], mass: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if diag.iter().chain(offdiag).any(|v| !v.is_finite()) {
        return Err(Error::Construction(
            "recurrence matrix contains non-finite entries".into(),
        ));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let z = tridiagonal_eigen_first_row(&mut d, &mut e)?;
    let mut pairs: Vec<(f64, f64)> = d
        .iter()
        .zip(&z)
        .map(|(&x, &q0)| (x, mass * q0 * q0))
        .collect();
    if pairs.iter().any(|(x, w)| !x.is_finite() || !w.is_finite()) {
        return Err(Error::Construction(
            "eigenvalue solver produced non-finite nodes or weights".into(),
        ));
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(pairs.into_iter().unzip())
}

/// Symmetric tridiagonal QL with implicit shifts. `d` holds the diagonal,
/// `e` the subdiagonal with a trailing zero; on return `d` holds the
/// eigenvalues and the returned vector the first components of the
/// normalized eigenvectors. Operating on the tridiagonal form directly keeps
/// the tiny first components accurate enough for high-order moments, which a
/// dense-matrix eigensolver does not.
fn tridiagonal_eigen_first_row(d: &mut [f64], e: &mut [f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    if n == 1 {
        return Ok(z);
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Construction(
                    "QL iteration for the recurrence matrix did not converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let fz = z[i + 1];
                z[i + 1] = s * z[i] + c * fz;
                z[i] = c * z[i] - s * fz;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(z)
}
