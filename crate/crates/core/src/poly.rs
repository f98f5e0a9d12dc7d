//! Sparse multivariate polynomials with floating-point coefficients.

use std::collections::BTreeMap;

/// `Σ c_κ x^κ`, keyed by exponent multi-index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultivariatePolynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl MultivariatePolynomial {
    pub fn zero(dim: usize) -> Self {
        MultivariatePolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn monomial(exps: Vec<u32>, c: f64) -> Self {
        let mut p = Self::zero(exps.len());
        if c != 0.0 {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|κ|` with nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.iter().sum()).max()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        use std::collections::btree_map::Entry;
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    /// `self + c·other`
    pub fn add_scaled(&self, other: &Self, c: f64) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term(k.clone(), c * v);
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero(self.dim);
        }
        MultivariatePolynomial { dim: self.dim, terms: self.terms.iter().map(|(k, &v)| (k.clone(), c * v)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ka, &va) in &self.terms {
            for (kb, &vb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(k, va * vb);
            }
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, &v) in &self.terms {
            if k[i] > 0 {
                let mut e = k.clone();
                e[i] -= 1;
                out.add_term(e, v * k[i] as f64);
            }
        }
        out
    }

    /// `Σ x_i ∂/∂x_i`; each monomial is multiplied by its total degree.
    pub fn normal_derivative(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, &v) in &self.terms {
            let deg: u32 = k.iter().sum();
            out.add_term(k.clone(), v * deg as f64);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(k, &v)| v * k.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }

    /// `p(‖x‖²)·self` for a univariate `p` given by coefficients, lowest first.
    pub fn mul_radial(&self, coeffs: &[f64]) -> Self {
        let r2 = (0..self.dim).fold(Self::zero(self.dim), |acc, i| {
            let mut e = vec![0; self.dim];
            e[i] = 2;
            acc.add(&Self::monomial(e, 1.0))
        });
        let mut radial = Self::zero(self.dim);
        let mut power = Self::constant(self.dim, 1.0);
        for (i, &c) in coeffs.iter().enumerate() {
            if i > 0 {
                power = power.mul(&r2);
            }
            radial = radial.add_scaled(&power, c);
        }
        radial.mul(self)
    }
}
