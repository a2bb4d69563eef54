//! Separable 3-D fields built from [`Func1D`] factors.
//!
//! A scalar field is `term + term + ...`, each term a `*`-product of an
//! optional numeric coefficient and per-axis factors `x=<func>`, `y=<func>`,
//! `z=<func>`; missing axes contribute 1. `0` is the zero field. A vector
//! field is three scalar fields separated by `;`.
//!
//! ```
//! use fracvec::fracvec3d::{ScalarFieldSpec, VectorFieldSpec};
//! let f: ScalarFieldSpec = "x=poly:0,0,1 * y=sin + 2 * z=exp".parse().unwrap();
//! assert!((f.eval(1.0, 0.0, 0.0) - 2.0).abs() < 1e-15);
//! let v: VectorFieldSpec = "0; x=poly:0,1; 0".parse().unwrap();
//! assert_eq!(v.eval(0.5, 0.0, 0.0), [0.0, 0.5, 0.0]);
//! ```

use super::field::{BoxDomain, ScalarField3D, VectorField3D};
use crate::error::{FvcError, Result};
use crate::frac1d::Func1D;
use crate::grid::FracOrder;
use ndarray::{Array3, Zip};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const AXES: [char; 3] = ['x', 'y', 'z'];

fn one() -> Func1D {
    Func1D::Poly(vec![1.0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub factors: [Func1D; 3],
}

impl Term {
    fn is_unit(f: &Func1D) -> bool {
        matches!(f, Func1D::Poly(c) if c == &[1.0])
    }
}

/// A finite sum of separable products.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScalarFieldSpec {
    pub terms: Vec<Term>,
}

impl ScalarFieldSpec {
    pub fn zero() -> Self {
        ScalarFieldSpec { terms: Vec::new() }
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        let p = [x, y, z];
        self.terms.iter().map(|t| t.coefficient * (0..3).map(|l| t.factors[l].eval(p[l])).product::<f64>()).sum()
    }

    pub fn sample(&self, domain: BoxDomain) -> Result<ScalarField3D> {
        let mut acc = Array3::zeros(domain.shape());
        for t in &self.terms {
            let v: Vec<Vec<f64>> =
                (0..3).map(|l| domain.nodes(l).iter().map(|&s| t.factors[l].eval(s)).collect()).collect();
            add_separable(&mut acc, t.coefficient, [&v[0], &v[1], &v[2]]);
        }
        ScalarField3D::new(domain, acc)
    }

    /// Exact `^CD^α_W[x_axis]` sampled on the grid, via power series about the
    /// axis's lower bound. Nodes where the exact value is singular (lower
    /// face, factor exponents below α) hold 0.
    pub fn caputo_axis(&self, domain: BoxDomain, axis: usize, ord: FracOrder) -> Result<ScalarField3D> {
        let iv = domain.bounds[axis];
        let mut acc = Array3::zeros(domain.shape());
        for t in &self.terms {
            let s = t.factors[axis].series(iv.a, iv.b)?;
            let mut v: Vec<Vec<f64>> = Vec::with_capacity(3);
            for l in 0..3 {
                let nodes = domain.nodes(l);
                if l == axis {
                    let mut d = Vec::with_capacity(nodes.len());
                    for &x in &nodes {
                        d.push(match s.caputo(ord, x) {
                            Ok(val) => val,
                            Err(FvcError::Precondition(_)) => 0.0,
                            Err(e) => return Err(e),
                        });
                    }
                    v.push(d);
                } else {
                    v.push(nodes.iter().map(|&x| t.factors[l].eval(x)).collect());
                }
            }
            add_separable(&mut acc, t.coefficient, [&v[0], &v[1], &v[2]]);
        }
        ScalarField3D::new(domain, acc)
    }

    /// Exact fractional gradient sampled on the grid.
    pub fn grad_exact(&self, domain: BoxDomain, ord: FracOrder) -> Result<VectorField3D> {
        VectorField3D::new(
            self.caputo_axis(domain, 0, ord)?,
            self.caputo_axis(domain, 1, ord)?,
            self.caputo_axis(domain, 2, ord)?,
        )
    }
}

fn add_separable(acc: &mut Array3<f64>, c: f64, v: [&Vec<f64>; 3]) {
    Zip::indexed(acc).par_for_each(|(i, j, k), a| *a += c * v[0][i] * v[1][j] * v[2][k]);
}

impl FromStr for ScalarFieldSpec {
    type Err = FvcError;

    fn from_str(s: &str) -> Result<Self> {
        let miss = || FvcError::RegistryMiss(s.trim().to_string());
        if s.trim() == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for term in s.split('+') {
            let mut t = Term { coefficient: 1.0, factors: [one(), one(), one()] };
            let mut seen = [false; 3];
            for factor in term.split('*') {
                let factor = factor.trim();
                if let Some((ax, func)) = factor.split_once('=') {
                    let l = match ax.trim() {
                        "x" => 0,
                        "y" => 1,
                        "z" => 2,
                        _ => return Err(miss()),
                    };
                    if seen[l] {
                        return Err(miss());
                    }
                    seen[l] = true;
                    t.factors[l] = func.parse()?;
                } else {
                    let c: f64 = factor.parse().map_err(|_| miss())?;
                    if !c.is_finite() {
                        return Err(miss());
                    }
                    t.coefficient *= c;
                }
            }
            terms.push(t);
        }
        Ok(ScalarFieldSpec { terms })
    }
}

impl fmt::Display for ScalarFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut p = Vec::new();
                if t.coefficient != 1.0 {
                    p.push(t.coefficient.to_string());
                }
                for l in 0..3 {
                    if !Term::is_unit(&t.factors[l]) {
                        p.push(format!("{}={}", AXES[l], t.factors[l]));
                    }
                }
                if p.is_empty() {
                    p.push("1".into());
                }
                p.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Three [`ScalarFieldSpec`] components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldSpec {
    pub components: [ScalarFieldSpec; 3],
}

impl VectorFieldSpec {
    pub fn eval(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        [0, 1, 2].map(|l| self.components[l].eval(x, y, z))
    }

    pub fn sample(&self, domain: BoxDomain) -> Result<VectorField3D> {
        VectorField3D::new(
            self.components[0].sample(domain)?,
            self.components[1].sample(domain)?,
            self.components[2].sample(domain)?,
        )
    }

    /// Exact `^CD^α_W[x_axis]` of every component.
    pub fn caputo_axis(&self, domain: BoxDomain, axis: usize, ord: FracOrder) -> Result<VectorField3D> {
        VectorField3D::new(
            self.components[0].caputo_axis(domain, axis, ord)?,
            self.components[1].caputo_axis(domain, axis, ord)?,
            self.components[2].caputo_axis(domain, axis, ord)?,
        )
    }

    pub fn div_exact(&self, domain: BoxDomain, ord: FracOrder) -> Result<ScalarField3D> {
        let mut acc = self.components[0].caputo_axis(domain, 0, ord)?;
        for l in 1..3 {
            acc = acc.add(&self.components[l].caputo_axis(domain, l, ord)?)?;
        }
        Ok(acc)
    }

    pub fn curl_exact(&self, domain: BoxDomain, ord: FracOrder) -> Result<VectorField3D> {
        let comp = |l: usize| -> Result<ScalarField3D> {
            let (m, k) = ((l + 1) % 3, (l + 2) % 3);
            self.components[k].caputo_axis(domain, m, ord)?.sub(&self.components[m].caputo_axis(domain, k, ord)?)
        };
        VectorField3D::new(comp(0)?, comp(1)?, comp(2)?)
    }
}

impl FromStr for VectorFieldSpec {
    type Err = FvcError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(FvcError::RegistryMiss(s.trim().to_string()));
        }
        Ok(VectorFieldSpec { components: [parts[0].parse()?, parts[1].parse()?, parts[2].parse()?] })
    }
}

impl fmt::Display for VectorFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}", self.components[0], self.components[1], self.components[2])
    }
}
