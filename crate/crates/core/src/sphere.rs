//! Spherical harmonics on `S^{d−1}`: dimensions, explicit real bases for
//! `d = 2, 3`, Gegenbauer polynomials, the addition formula and product
//! quadrature rules.
//!
//! All sphere averages use the normalized measure `dσ/σ_d`.

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::poly::MultivariatePolynomial;
use crate::quadrature::{gauss_jacobi, QuadratureRule};
use crate::special::{binom_int, ln_gamma};
use std::f64::consts::PI;

/// Ambient dimension `d ≥ 2` with `δ = (d−2)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereDim {
    d: usize,
    delta: f64,
}

impl SphereDim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(SphereDim { d, delta: (d as f64 - 2.0) / 2.0 })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Surface area `σ_d = 2π^{d/2}/Γ(d/2)`.
    pub fn sigma(&self) -> f64 {
        let h = self.d as f64 / 2.0;
        (2f64.ln() + h * PI.ln() - ln_gamma(h)).exp()
    }

    pub fn harmonic_dim(&self, n: usize) -> usize {
        harmonic_dim(self.d, n)
    }
}

/// `a_n^d = C(n+d−1, n) − C(n+d−3, n−2)`.
pub fn harmonic_dim(d: usize, n: usize) -> usize {
    let first = binom_int((n + d - 1) as u64, n as u64);
    let second = if n >= 2 { binom_int((n + d - 3) as u64, (n - 2) as u64) } else { 0.0 };
    (first - second).round() as usize
}

/// Ultraspherical `C_k^δ(s)` for `δ > 0`.
pub fn gegenbauer_eval(delta: f64, k: usize, s: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::ParameterDomain(format!("Gegenbauer parameter must be positive, got {delta}")));
    }
    Ok(gegenbauer_unchecked(delta, k, s))
}

pub(crate) fn gegenbauer_unchecked(delta: f64, k: usize, s: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * delta * s;
    for i in 2..=k {
        let fi = i as f64;
        let next = (2.0 * s * (fi + delta - 1.0) * cur - (fi + 2.0 * delta - 2.0) * prev) / fi;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_k(s)` by the Chebyshev recurrence.
pub(crate) fn chebyshev_t(k: usize, s: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, s);
    for _ in 2..=k {
        let next = 2.0 * s * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Zonal factor `Σ_ν Y_ν^k(ξ)Y_ν^k(ϱ)` as a function of `s = ⟨ξ,ϱ⟩`.
///
/// `d ≥ 3`: `((k+δ)/δ) C_k^δ(s)`. `d = 2`: `1` for `k = 0` and `2 cos(kγ) = 2T_k(s)` otherwise.
pub fn zonal(d: usize, k: usize, s: f64) -> f64 {
    let s = s.clamp(-1.0, 1.0);
    if d == 2 {
        if k == 0 {
            1.0
        } else {
            2.0 * chebyshev_t(k, s)
        }
    } else {
        let delta = (d as f64 - 2.0) / 2.0;
        (k as f64 + delta) / delta * gegenbauer_unchecked(delta, k, s)
    }
}

fn check_unit(xi: &[f64]) -> Result<()> {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitVector(norm));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ_ν Y_ν^k(ξ)Y_ν^k(ϱ)` for unit vectors.
pub fn addition_formula(d: usize, k: usize, xi: &[f64], rho: &[f64]) -> Result<f64> {
    SphereDim::new(d)?;
    if xi.len() != d || rho.len() != d {
        return Err(Error::ParameterDomain(format!("points must have {d} coordinates")));
    }
    check_unit(xi)?;
    check_unit(rho)?;
    Ok(zonal(d, k, dot(xi, rho)))
}

/// Real orthonormal basis `{Y_ν^k}` of degree-`k` harmonics for `d ∈ {2, 3}`.
///
/// Ordering: for `d = 2`, `ν = 1` is the cosine and `ν = 2` the sine.
/// For `d = 3`, `ν = 1` is the zonal harmonic, `ν = 2m` the `cos(mφ)` and
/// `ν = 2m+1` the `sin(mφ)` harmonic of order `m`.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    d: usize,
    k: usize,
    norms: Vec<f64>,
}

impl HarmonicBasis {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        let norms = match d {
            2 => vec![if k == 0 { 1.0 } else { std::f64::consts::SQRT_2 }],
            3 => (0..=k)
                .map(|m| {
                    let ratio = (ln_gamma((k - m) as f64 + 1.0) - ln_gamma((k + m) as f64 + 1.0)).exp();
                    let c = if m == 0 { 1.0 } else { 2.0 };
                    (c * (2 * k + 1) as f64 * ratio).sqrt()
                })
                .collect(),
            _ => return Err(Error::UnsupportedDimension(d)),
        };
        Ok(HarmonicBasis { d, k, norms })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        harmonic_dim(self.d, self.k)
    }

    fn check_nu(&self, nu: usize) -> Result<()> {
        if nu == 0 || nu > self.dim() {
            return Err(Error::InvalidIndex(format!("ν = {nu} outside 1..={} for degree {}", self.dim(), self.k)));
        }
        Ok(())
    }

    /// `(m, is_sine)` for index `ν` in the `d = 3` ordering.
    fn order3(nu: usize) -> (usize, bool) {
        if nu == 1 {
            (0, false)
        } else {
            (nu / 2, nu % 2 == 1)
        }
    }

    /// `Y_ν^k(ξ)` for a unit vector.
    pub fn eval(&self, nu: usize, xi: &[f64]) -> Result<f64> {
        self.check_nu(nu)?;
        if xi.len() != self.d {
            return Err(Error::ParameterDomain(format!("point must have {} coordinates", self.d)));
        }
        check_unit(xi)?;
        Ok(self.eval_homogeneous_unchecked(nu, xi))
    }

    /// Homogeneous extension `‖x‖^k Y_ν^k(x/‖x‖)`, polynomial in `x`.
    pub fn eval_homogeneous(&self, nu: usize, x: &[f64]) -> Result<f64> {
        self.check_nu(nu)?;
        if x.len() != self.d {
            return Err(Error::ParameterDomain(format!("point must have {} coordinates", self.d)));
        }
        Ok(self.eval_homogeneous_unchecked(nu, x))
    }

    /// All `a_k^d` homogeneous values at `x`.
    pub fn eval_all_homogeneous(&self, x: &[f64]) -> Vec<f64> {
        (1..=self.dim()).map(|nu| self.eval_homogeneous_unchecked(nu, x)).collect()
    }

    pub(crate) fn eval_homogeneous_unchecked(&self, nu: usize, x: &[f64]) -> f64 {
        let k = self.k;
        match self.d {
            2 => {
                if k == 0 {
                    return 1.0;
                }
                let (re, im) = complex_power(x[0], x[1], k);
                self.norms[0] * if nu == 1 { re } else { im }
            }
            _ => {
                let (m, sine) = Self::order3(nu);
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let pi = solid_legendre(k, m, x[2], r2);
                let (re, im) = complex_power(x[0], x[1], m);
                self.norms[m] * pi * if sine { im } else { re }
            }
        }
    }

    /// `Y_ν^k` as an explicit homogeneous polynomial.
    pub fn polynomial(&self, nu: usize) -> Result<MultivariatePolynomial> {
        self.check_nu(nu)?;
        let k = self.k;
        let d = self.d;
        let x = MultivariatePolynomial::variable(d, 0);
        let y = MultivariatePolynomial::variable(d, 1);
        // Re/Im of (x + iy)^m
        let cplx = |m: usize| {
            let mut re = MultivariatePolynomial::constant(d, 1.0);
            let mut im = MultivariatePolynomial::zero(d);
            for _ in 0..m {
                let nre = re.mul(&x).add_scaled(&im.mul(&y), -1.0);
                let nim = re.mul(&y).add(&im.mul(&x));
                re = nre;
                im = nim;
            }
            (re, im)
        };
        Ok(match d {
            2 => {
                if k == 0 {
                    return Ok(MultivariatePolynomial::constant(2, 1.0));
                }
                let (re, im) = cplx(k);
                (if nu == 1 { re } else { im }).scale(self.norms[0])
            }
            _ => {
                let (m, sine) = Self::order3(nu);
                let z = MultivariatePolynomial::variable(3, 2);
                let r2 = x.mul(&x).add(&y.mul(&y)).add(&z.mul(&z));
                let mut pm = MultivariatePolynomial::constant(3, double_factorial(m));
                let pi = if k == m {
                    pm
                } else {
                    let mut cur = z.scale((2 * m + 1) as f64).mul(&pm);
                    for l in (m + 2)..=k {
                        let next = z
                            .scale((2 * l - 1) as f64)
                            .mul(&cur)
                            .add_scaled(&r2.mul(&pm), -((l + m - 1) as f64))
                            .scale(1.0 / (l - m) as f64);
                        pm = cur;
                        cur = next;
                    }
                    cur
                };
                let (re, im) = cplx(m);
                pi.mul(if sine { &im } else { &re }).scale(self.norms[m])
            }
        })
    }
}

fn double_factorial(m: usize) -> f64 {
    (1..=m).map(|i| (2 * i - 1) as f64).product()
}

/// `(x + iy)^m` as `(Re, Im)`.
fn complex_power(x: f64, y: f64, m: usize) -> (f64, f64) {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..m {
        let nre = re * x - im * y;
        im = re * y + im * x;
        re = nre;
    }
    (re, im)
}

/// Homogeneous associated-Legendre factor `Π_l^m(z, r²)` with
/// `r^l P_l^m(z/r) = Π_l^m · (x² + y²)^{m/2}`.
fn solid_legendre(l: usize, m: usize, z: f64, r2: f64) -> f64 {
    let mut prev = double_factorial(m);
    if l == m {
        return prev;
    }
    let mut cur = (2 * m + 1) as f64 * z * prev;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * z * cur - (ll + m - 1) as f64 * r2 * prev) / (ll - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Rule computing `(1/σ_d)∫_{S^{d−1}} f dσ` exactly for polynomials of degree ≤ `degree`.
pub fn sphere_quadrature(d: usize, degree: usize) -> Result<QuadratureRule<Vec<f64>>> {
    let m = degree + 1;
    match d {
        2 => {
            let w = 1.0 / m as f64;
            let nodes = (0..m)
                .map(|i| {
                    let th = 2.0 * PI * i as f64 / m as f64;
                    vec![th.cos(), th.sin()]
                })
                .collect();
            Ok(QuadratureRule { nodes, weights: vec![w; m], exactness: degree })
        }
        3 => {
            let gl = gauss_jacobi(&JacobiParams::new(0.0, 0.0)?, degree / 2 + 1)?;
            let mut nodes = Vec::with_capacity(gl.len() * m);
            let mut weights = Vec::with_capacity(gl.len() * m);
            for (&z, &wz) in gl.nodes.iter().zip(&gl.weights) {
                let rho = (1.0 - z * z).max(0.0).sqrt();
                for i in 0..m {
                    let ph = 2.0 * PI * i as f64 / m as f64;
                    nodes.push(vec![rho * ph.cos(), rho * ph.sin(), z]);
                    weights.push(0.5 * wz / m as f64);
                }
            }
            Ok(QuadratureRule { nodes, weights, exactness: degree })
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// `(1/σ_d)∫ ξ^κ dσ = Γ(d/2) Π Γ((κ_i+1)/2) / (π^{d/2} Γ((|κ|+d)/2))`, zero if some `κ_i` is odd.
pub fn sphere_monomial_integral(d: usize, kappa: &[u32]) -> f64 {
    assert_eq!(kappa.len(), d);
    if kappa.iter().any(|k| k % 2 == 1) {
        return 0.0;
    }
    let total: u32 = kappa.iter().sum();
    let h = d as f64 / 2.0;
    let ln = ln_gamma(h) + kappa.iter().map(|&k| ln_gamma((k as f64 + 1.0) / 2.0)).sum::<f64>()
        - h * PI.ln()
        - ln_gamma((total as f64 + d as f64) / 2.0);
    ln.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dimensions() {
        for d in 2..6 {
            assert_eq!(harmonic_dim(d, 0), 1);
        }
        assert_eq!(harmonic_dim(3, 2), 5);
        for k in 1..10 {
            assert_eq!(harmonic_dim(2, k), 2);
            assert_eq!(harmonic_dim(3, k), 2 * k + 1);
        }
        // Σ_{k≤n} a_{n−2j} = dim of polynomials of degree exactly n
        assert_eq!(harmonic_dim(4, 3) + harmonic_dim(4, 1), 20);
    }

    #[test]
    fn sigma_known_values() {
        assert_relative_eq!(SphereDim::new(2).unwrap().sigma(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(SphereDim::new(3).unwrap().sigma(), 4.0 * PI, max_relative = 1e-15);
        assert!(SphereDim::new(1).is_err());
    }

    #[test]
    fn gegenbauer_values() {
        assert!(gegenbauer_eval(0.0, 2, 0.1).is_err());
        for k in 0..12 {
            let d = 1.3;
            let at_one = crate::special::binom(k as f64 + 2.0 * d - 1.0, k);
            assert_relative_eq!(gegenbauer_eval(d, k, 1.0).unwrap(), at_one, max_relative = 1e-13);
        }
        // Legendre recurrence oracle
        let s = 0.37;
        let mut p = vec![1.0, s];
        for n in 1..10 {
            let nf = n as f64;
            p.push(((2.0 * nf + 1.0) * s * p[n] - nf * p[n - 1]) / (nf + 1.0));
        }
        for (k, v) in p.iter().enumerate() {
            assert_relative_eq!(gegenbauer_eval(0.5, k, s).unwrap(), *v, max_relative = 1e-13);
        }
    }

    #[test]
    fn addition_formula_examples() {
        let xi = [0.0, 0.6, 0.8];
        for k in 0..8 {
            assert_relative_eq!(addition_formula(3, k, &xi, &xi).unwrap(), (2 * k + 1) as f64, max_relative = 1e-13);
        }
        assert_eq!(addition_formula(4, 0, &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!(addition_formula(3, 1, &[1.0, 1.0, 0.0], &xi).is_err());
    }

    #[test]
    fn d2_basis_examples() {
        let b = HarmonicBasis::new(2, 0).unwrap();
        assert_eq!(b.eval(1, &[0.6, 0.8]).unwrap(), 1.0);
        let b = HarmonicBasis::new(2, 2).unwrap();
        assert_relative_eq!(b.eval(1, &[1.0, 0.0]).unwrap(), std::f64::consts::SQRT_2);
        assert!(HarmonicBasis::new(4, 1).is_err());
        assert!(b.eval(3, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let r3 = sphere_quadrature(3, 8).unwrap();
        assert_relative_eq!(r3.integrate(|_| 1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(r3.integrate(|x| x[0] * x[0]), 1.0 / 3.0, max_relative = 1e-14);
        let r2 = sphere_quadrature(2, 6).unwrap();
        assert_relative_eq!(r2.integrate(|x| (2.0 * x[1].atan2(x[0])).cos().powi(2)), 0.5, max_relative = 1e-14);
        assert!(sphere_quadrature(4, 3).is_err());
    }

    #[test]
    fn monomial_examples() {
        assert_relative_eq!(sphere_monomial_integral(3, &[0, 0, 0]), 1.0, max_relative = 1e-15);
        assert_relative_eq!(sphere_monomial_integral(2, &[2, 0]), 0.5, max_relative = 1e-15);
        assert_relative_eq!(sphere_monomial_integral(3, &[2, 0, 0]), 1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(sphere_monomial_integral(3, &[1, 2, 0]), 0.0);
    }
}
