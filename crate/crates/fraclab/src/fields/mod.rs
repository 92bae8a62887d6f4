//! Grids and sampled fields.
//!
//! All operators in this crate act on scalar or vector fields sampled on
//! a uniform cell-centered lattice over a centered box in R^n, n in {1,2}.
//! Cell-centering means no node ever coincides with the origin, so
//! singular kernels and singular test fields are never evaluated at
//! their singularity.

mod testfn;
pub mod io;

pub use testfn::{besov_counterexample, cutoff_eta, eta_profile, sample, TestFunction};

use crate::error::{FraclabError, Result};

/// Uniform cell-centered sampling lattice over [-L, L]^n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    half_width: f64,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(n: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(FraclabError::domain(format!(
                "grid dimension must be 1 or 2, got {n}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(FraclabError::domain(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if points_per_axis == 0 || points_per_axis % 2 != 0 {
            return Err(FraclabError::domain(format!(
                "points per axis must be even and positive, got {points_per_axis}"
            )));
        }
        Ok(Grid {
            n,
            half_width,
            points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Lattice spacing h = 2L/N.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Cell measure h^n.
    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn num_nodes(&self) -> usize {
        self.points_per_axis.pow(self.n as u32)
    }

    /// Coordinate of node k along one axis: -L + (k + 1/2) h.
    pub fn axis_coord(&self, k: usize) -> f64 {
        -self.half_width + (k as f64 + 0.5) * self.spacing()
    }

    /// Full coordinates of a node by row-major flat index.
    pub fn node_coords(&self, idx: usize) -> [f64; 2] {
        match self.n {
            1 => [self.axis_coord(idx), 0.0],
            _ => {
                let nn = self.points_per_axis;
                [self.axis_coord(idx / nn), self.axis_coord(idx % nn)]
            }
        }
    }

    /// Euclidean norm of the node position.
    pub fn node_radius(&self, idx: usize) -> f64 {
        let c = self.node_coords(idx);
        (c[0] * c[0] + c[1] * c[1]).sqrt()
    }

    /// Grid with the same spacing and dimension but a doubled box,
    /// used by box-growth diagnostics.
    pub fn doubled_box(&self) -> Grid {
        Grid {
            n: self.n,
            half_width: 2.0 * self.half_width,
            points_per_axis: 2 * self.points_per_axis,
        }
    }

    /// Decompose a flat index into per-axis indices.
    pub fn axis_indices(&self, idx: usize) -> [usize; 2] {
        match self.n {
            1 => [idx, 0],
            _ => [idx / self.points_per_axis, idx % self.points_per_axis],
        }
    }

    pub fn flat_index(&self, ij: [usize; 2]) -> usize {
        match self.n {
            1 => ij[0],
            _ => ij[0] * self.points_per_axis + ij[1],
        }
    }
}

/// Sampled real scalar function on a grid.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
    tag: String,
    singular: bool,
}

impl ScalarField {
    /// A regular field; every value must be finite.
    pub fn new(grid: Grid, values: Vec<f64>, tag: impl Into<String>) -> Result<Self> {
        if values.len() != grid.num_nodes() {
            return Err(FraclabError::GridMismatch(format!(
                "expected {} values, got {}",
                grid.num_nodes(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(FraclabError::domain(format!(
                "non-finite value at node {bad}"
            )));
        }
        Ok(ScalarField {
            grid,
            values,
            tag: tag.into(),
            singular: false,
        })
    }

    /// A field sampled from a deliberately singular formula; finiteness is
    /// still enforced (cell-centering keeps samples finite), but operators
    /// that require smoothness refuse it.
    pub fn new_singular(grid: Grid, values: Vec<f64>, tag: impl Into<String>) -> Result<Self> {
        let mut f = Self::new(grid, values, tag)?;
        f.singular = true;
        Ok(f)
    }

    pub fn zero(grid: Grid) -> Self {
        ScalarField {
            values: vec![0.0; grid.num_nodes()],
            grid,
            tag: "zero".into(),
            singular: false,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Discrete integral sum f h^n.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_measure()
    }

    /// First moment along one axis, sum x_j f h^n.
    pub fn first_moment(&self, axis: usize) -> f64 {
        let mut acc = 0.0;
        for (idx, v) in self.values.iter().enumerate() {
            acc += self.grid.node_coords(idx)[axis] * v;
        }
        acc * self.grid.cell_measure()
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
            tag: "computed".into(),
            singular: self.singular,
        }
    }

    /// Rescale so the discrete integral equals 1.
    pub fn normalize_mass(&self) -> Result<ScalarField> {
        let m = self.integral();
        if m.abs() < 1e-300 {
            return Err(FraclabError::hypothesis(
                "cannot normalize a zero-mass field".to_string(),
            ));
        }
        Ok(self.scale(1.0 / m))
    }

    /// Node-wise difference on a shared grid.
    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        if self.grid != other.grid {
            return Err(FraclabError::GridMismatch("sub on different grids".into()));
        }
        Ok(ScalarField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            tag: "computed".into(),
            singular: self.singular || other.singular,
        })
    }

    /// Zero-fill embedding into a grid with the same spacing and a larger box.
    pub fn embed(&self, target: &Grid) -> Result<ScalarField> {
        if target.dim() != self.grid.dim() {
            return Err(FraclabError::GridMismatch("embed dimension".into()));
        }
        let rel = (target.spacing() - self.grid.spacing()).abs() / self.grid.spacing();
        if rel > 1e-12 {
            return Err(FraclabError::GridMismatch(
                "embed requires identical spacing".into(),
            ));
        }
        if target.points_per_axis() < self.grid.points_per_axis()
            || (target.points_per_axis() - self.grid.points_per_axis()) % 2 != 0
        {
            return Err(FraclabError::GridMismatch(
                "embed requires a centered superset grid".into(),
            ));
        }
        let off = (target.points_per_axis() - self.grid.points_per_axis()) / 2;
        let mut out = vec![0.0; target.num_nodes()];
        let nn = self.grid.points_per_axis();
        match self.grid.dim() {
            1 => {
                out[off..off + nn].copy_from_slice(&self.values);
            }
            _ => {
                for i in 0..nn {
                    for j in 0..nn {
                        out[(i + off) * target.points_per_axis() + (j + off)] =
                            self.values[i * nn + j];
                    }
                }
            }
        }
        Ok(ScalarField {
            grid: *target,
            values: out,
            tag: self.tag.clone(),
            singular: self.singular,
        })
    }
}

/// Sampled vector field; all components share one grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        if components.is_empty() {
            return Err(FraclabError::domain("vector field needs components"));
        }
        let grid = *components[0].grid();
        if components.len() != grid.dim() {
            return Err(FraclabError::GridMismatch(format!(
                "expected {} components, got {}",
                grid.dim(),
                components.len()
            )));
        }
        for c in &components {
            if *c.grid() != grid {
                return Err(FraclabError::GridMismatch(
                    "vector components on different grids".into(),
                ));
            }
        }
        Ok(VectorField { components })
    }

    /// Promote a scalar field to the vector field (f, 0, ...).
    pub fn from_scalar(f: ScalarField) -> Self {
        let grid = *f.grid();
        let mut components = vec![f];
        for _ in 1..grid.dim() {
            components.push(ScalarField::zero(grid));
        }
        VectorField { components }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &ScalarField {
        &self.components[j]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        let grid = *self.grid();
        let mut out = vec![0.0; grid.num_nodes()];
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(c.values()) {
                *o += v * v;
            }
        }
        for o in out.iter_mut() {
            *o = o.sqrt();
        }
        ScalarField {
            grid,
            values: out,
            tag: "computed".into(),
            singular: false,
        }
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        if self.dim() != other.dim() {
            return Err(FraclabError::GridMismatch("vector sub dims".into()));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(comps)
    }
}

/// Shift by whole cells with zero-fill outside the original support.
pub fn translate_cells(f: &ScalarField, shift: &[i64]) -> Result<ScalarField> {
    let grid = *f.grid();
    if shift.len() != grid.dim() {
        return Err(FraclabError::domain(format!(
            "translate expects {} shift components",
            grid.dim()
        )));
    }
    let nn = grid.points_per_axis() as i64;
    let mut out = vec![0.0; grid.num_nodes()];
    match grid.dim() {
        1 => {
            let s = shift[0];
            for k in 0..nn {
                let src = k + s;
                if (0..nn).contains(&src) {
                    out[k as usize] = f.values[src as usize];
                }
            }
        }
        _ => {
            let (si, sj) = (shift[0], shift[1]);
            for i in 0..nn {
                let src_i = i + si;
                if !(0..nn).contains(&src_i) {
                    continue;
                }
                for j in 0..nn {
                    let src_j = j + sj;
                    if (0..nn).contains(&src_j) {
                        out[(i * nn + j) as usize] = f.values[(src_i * nn + src_j) as usize];
                    }
                }
            }
        }
    }
    Ok(ScalarField {
        grid,
        values: out,
        tag: "computed".into(),
        singular: f.singular,
    })
}

/// Translate by a vector that must be an integer multiple of h per axis;
/// the result samples f(. + y) with zero-fill outside the box.
pub fn translate(f: &ScalarField, shift: &[f64]) -> Result<ScalarField> {
    let h = f.grid().spacing();
    let mut cells = Vec::with_capacity(shift.len());
    for &s in shift {
        let c = s / h;
        if (c - c.round()).abs() > 1e-9 {
            return Err(FraclabError::domain(format!(
                "shift {s} is not a lattice multiple of h = {h}"
            )));
        }
        cells.push(c.round() as i64);
    }
    translate_cells(f, &cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = Grid::new(1, 12.0, 1024).unwrap();
        assert_eq!(g.spacing(), 24.0 / 1024.0);
        assert_eq!(g.num_nodes(), 1024);
        assert!(Grid::new(1, 12.0, 1023).is_err());
        assert!(Grid::new(3, 12.0, 64).is_err());
        assert!(Grid::new(1, -1.0, 64).is_err());
    }

    #[test]
    fn cell_centering_avoids_origin() {
        for (n, nn) in [(1usize, 64usize), (2, 32)] {
            let g = Grid::new(n, 4.0, nn).unwrap();
            let min_r = (0..g.num_nodes())
                .map(|i| g.node_radius(i))
                .fold(f64::INFINITY, f64::min);
            assert!(min_r >= g.spacing() / 2.0 - 1e-14, "n = {n}: min |x| = {min_r}");
        }
    }

    #[test]
    fn field_rejects_nonfinite() {
        let g = Grid::new(1, 1.0, 4).unwrap();
        assert!(ScalarField::new(g, vec![0.0, f64::NAN, 0.0, 0.0], "t").is_err());
        assert!(ScalarField::new(g, vec![0.0; 3], "t").is_err());
    }

    #[test]
    fn translate_identity_and_gaussian() {
        let g = Grid::new(1, 6.0, 256).unwrap();
        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        let same = translate(&f, &[0.0]).unwrap();
        assert_eq!(f.values(), same.values());

        let h = g.spacing();
        let shifted = translate(&f, &[h]).unwrap();
        // f(. + h) sampled at x equals exp(-(x+h)^2); check away from the
        // zero-fill boundary.
        for k in 1..255 {
            let x = g.axis_coord(k);
            let expect = (-(x + h) * (x + h)).exp();
            assert!((shifted.values()[k] - expect).abs() < 1e-12);
        }
        assert!(translate(&f, &[h * 0.5]).is_err());
    }

    #[test]
    fn translate_indicator_l1_distance() {
        // || chi(.+y) - chi ||_1 = 2 min(|y|, 1) for the unit indicator.
        let g = Grid::new(1, 12.0, 2400).unwrap(); // h = 0.01
        let f = sample(
            &TestFunction::IndicatorInterval { a: 0.0, b: 1.0 },
            &g,
        )
        .unwrap();
        let shifted = translate(&f, &[0.1]).unwrap();
        let mut l1 = 0.0;
        for (a, b) in shifted.values().iter().zip(f.values()) {
            l1 += (a - b).abs();
        }
        l1 *= g.cell_measure();
        assert!((l1 - 0.2).abs() < 0.02, "got {l1}");
    }

    #[test]
    fn embed_preserves_mass() {
        let g = Grid::new(2, 4.0, 32).unwrap();
        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        let big = g.doubled_box();
        let e = f.embed(&big).unwrap();
        assert!((e.integral() - f.integral()).abs() < 1e-12);
        assert_eq!(e.grid().num_nodes(), 4 * g.num_nodes());
    }

    #[test]
    fn vector_field_invariants() {
        let g = Grid::new(2, 4.0, 16).unwrap();
        let f = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g).unwrap();
        let v = VectorField::from_scalar(f.clone());
        assert_eq!(v.dim(), 2);
        let g2 = Grid::new(2, 4.0, 32).unwrap();
        let f2 = sample(&TestFunction::Gaussian { sigma: 1.0 }, &g2).unwrap();
        assert!(VectorField::new(vec![f, f2]).is_err());
    }
}
