use crate::error::{FvcError, Result};
use crate::grid::{Interval, MIN_NODES};
use ndarray::{s, Array3, Axis, Zip};
use serde::{Deserialize, Serialize};

/// The parallelepiped `[a,b]×[c,d]×[g,h]` sampled with `(mx, my, mz)` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub bounds: [Interval; 3],
    pub resolution: [usize; 3],
}

impl BoxDomain {
    pub fn new(bounds: [Interval; 3], resolution: [usize; 3]) -> Result<Self> {
        for &m in &resolution {
            if m < MIN_NODES {
                return Err(FvcError::GridTooSmall { got: m, min: MIN_NODES });
            }
        }
        Ok(BoxDomain { bounds, resolution })
    }

    /// `[0,1]^3` with `m` nodes per axis.
    pub fn unit_cube(m: usize) -> Result<Self> {
        Self::new([Interval::unit(); 3], [m; 3])
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.resolution[0], self.resolution[1], self.resolution[2])
    }

    pub fn step(&self, axis: usize) -> f64 {
        self.bounds[axis].step(self.resolution[axis])
    }

    pub fn node(&self, axis: usize, i: usize) -> f64 {
        self.bounds[axis].node(self.resolution[axis], i)
    }

    pub fn nodes(&self, axis: usize) -> Vec<f64> {
        (0..self.resolution[axis]).map(|i| self.node(axis, i)).collect()
    }

    /// Index of the node at coordinate `v` on `axis`, if `v` is a node.
    pub fn node_index(&self, axis: usize, v: f64) -> Option<usize> {
        let iv = self.bounds[axis];
        let m = self.resolution[axis];
        let t = (v - iv.a) / iv.step(m);
        let i = t.round();
        let tol = 1e-9 * (m as f64);
        if i >= 0.0 && i <= (m - 1) as f64 && (t - i).abs() <= tol {
            Some(i as usize)
        } else {
            None
        }
    }
}

/// Samples of a scalar field on a [`BoxDomain`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField3D {
    domain: BoxDomain,
    values: Array3<f64>,
}

impl ScalarField3D {
    pub fn new(domain: BoxDomain, values: Array3<f64>) -> Result<Self> {
        if values.dim() != domain.shape() {
            return Err(FvcError::DomainMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FvcError::Parameter("non-finite field sample".into()));
        }
        Ok(ScalarField3D { domain, values })
    }

    pub(crate) fn from_raw(domain: BoxDomain, values: Array3<f64>) -> Self {
        debug_assert_eq!(values.dim(), domain.shape());
        ScalarField3D { domain, values }
    }

    pub fn zeros(domain: BoxDomain) -> Self {
        ScalarField3D { domain, values: Array3::zeros(domain.shape()) }
    }

    pub fn from_fn<F: Fn(f64, f64, f64) -> f64 + Sync>(domain: BoxDomain, f: F) -> Result<Self> {
        let (xs, ys, zs) = (domain.nodes(0), domain.nodes(1), domain.nodes(2));
        let mut values = Array3::zeros(domain.shape());
        Zip::indexed(&mut values).par_for_each(|(i, j, k), v| *v = f(xs[i], ys[j], zs[k]));
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array3<f64> {
        self.values
    }

    fn check(&self, other: &ScalarField3D) -> Result<()> {
        if self.domain != other.domain {
            Err(FvcError::DomainMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &ScalarField3D) -> Result<ScalarField3D> {
        self.check(other)?;
        Ok(Self::from_raw(self.domain, &self.values + &other.values))
    }

    pub fn sub(&self, other: &ScalarField3D) -> Result<ScalarField3D> {
        self.check(other)?;
        Ok(Self::from_raw(self.domain, &self.values - &other.values))
    }

    pub fn mul(&self, other: &ScalarField3D) -> Result<ScalarField3D> {
        self.check(other)?;
        Ok(Self::from_raw(self.domain, &self.values * &other.values))
    }

    pub fn scale(&self, c: f64) -> ScalarField3D {
        Self::from_raw(self.domain, &self.values * c)
    }

    /// Max `|v|` over nodes at least one step away from every face.
    pub fn interior_max_abs(&self) -> f64 {
        interior_max_abs3(&self.values)
    }

    /// Max `|v|` over all nodes.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Values on the line through `(j, k)` (or the matching indices) along `axis`.
    pub fn line(&self, axis: usize, fixed: [usize; 2]) -> Vec<f64> {
        let v = &self.values;
        match axis {
            0 => v.slice(s![.., fixed[0], fixed[1]]).to_vec(),
            1 => v.slice(s![fixed[0], .., fixed[1]]).to_vec(),
            _ => v.slice(s![fixed[0], fixed[1], ..]).to_vec(),
        }
    }

    /// Sets every node on the six faces to zero.
    pub fn zero_faces(&mut self) {
        for axis in 0..3 {
            let m = self.domain.resolution[axis];
            self.values.index_axis_mut(Axis(axis), 0).fill(0.0);
            self.values.index_axis_mut(Axis(axis), m - 1).fill(0.0);
        }
    }

    /// The 2-D slice at index `idx` normal to `axis`, indexed by the remaining axes in increasing order.
    pub fn plane(&self, axis: usize, idx: usize) -> ndarray::Array2<f64> {
        self.values.index_axis(Axis(axis), idx).to_owned()
    }
}

pub(crate) fn interior_max_abs3(v: &Array3<f64>) -> f64 {
    margin_max_abs3(v, 1)
}

/// Max `|v|` over nodes at least `k` nodes away from every face.
pub(crate) fn margin_max_abs3(v: &Array3<f64>, k: usize) -> f64 {
    let (mx, my, mz) = v.dim();
    v.slice(s![k..mx - k, k..my - k, k..mz - k]).iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Three scalar components on one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3D {
    components: [ScalarField3D; 3],
}

impl VectorField3D {
    pub fn new(x: ScalarField3D, y: ScalarField3D, z: ScalarField3D) -> Result<Self> {
        if x.domain != y.domain || x.domain != z.domain {
            return Err(FvcError::DomainMismatch);
        }
        Ok(VectorField3D { components: [x, y, z] })
    }

    pub fn zeros(domain: BoxDomain) -> Self {
        let z = ScalarField3D::zeros(domain);
        VectorField3D { components: [z.clone(), z.clone(), z] }
    }

    pub fn from_fn<F: Fn(f64, f64, f64) -> [f64; 3] + Sync>(domain: BoxDomain, f: F) -> Result<Self> {
        Self::new(
            ScalarField3D::from_fn(domain, |x, y, z| f(x, y, z)[0])?,
            ScalarField3D::from_fn(domain, |x, y, z| f(x, y, z)[1])?,
            ScalarField3D::from_fn(domain, |x, y, z| f(x, y, z)[2])?,
        )
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.components[0].domain
    }

    pub fn component(&self, axis: usize) -> &ScalarField3D {
        &self.components[axis]
    }

    pub fn components(&self) -> &[ScalarField3D; 3] {
        &self.components
    }

    fn zip3<F: Fn(&ScalarField3D, &ScalarField3D) -> Result<ScalarField3D>>(
        &self,
        other: &VectorField3D,
        f: F,
    ) -> Result<VectorField3D> {
        Self::new(
            f(&self.components[0], &other.components[0])?,
            f(&self.components[1], &other.components[1])?,
            f(&self.components[2], &other.components[2])?,
        )
    }

    pub fn add(&self, other: &VectorField3D) -> Result<VectorField3D> {
        self.zip3(other, |p, q| p.add(q))
    }

    pub fn sub(&self, other: &VectorField3D) -> Result<VectorField3D> {
        self.zip3(other, |p, q| p.sub(q))
    }

    pub fn scale(&self, c: f64) -> VectorField3D {
        VectorField3D { components: self.components.clone().map(|f| f.scale(c)) }
    }

    /// `Σ_l c_l * other_l` added componentwise: `self + c * other`.
    pub fn axpy(&self, c: f64, other: &VectorField3D) -> Result<VectorField3D> {
        self.zip3(other, |p, q| {
            p.check(q)?;
            Ok(ScalarField3D::from_raw(p.domain, &p.values + &(&q.values * c)))
        })
    }

    pub fn zero_faces(&mut self) {
        self.components.iter_mut().for_each(|c| c.zero_faces());
    }

    pub fn interior_max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.interior_max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub(crate) fn margin_max_abs(&self, k: usize) -> f64 {
        self.components.iter().map(|c| margin_max_abs3(&c.values, k)).fold(0.0, f64::max)
    }

    /// Sum of squares over all nodes and components.
    pub fn sum_squares(&self) -> f64 {
        self.components.iter().map(|c| c.values.iter().map(|v| v * v).sum::<f64>()).sum()
    }
}
