//! Grid-discretized measures on boxes, relative entropy, and cost bookkeeping.
//!
//! All integrals against grid densities use the cell-center (midpoint) rule:
//! it preserves positivity and is second-order on smooth integrands. A
//! [`GridMeasure`] stores densities (mass per volume); cell masses are
//! `density * cell_volume()`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Mass-conservation tolerance for probability measures.
pub const MASS_TOL: f64 = 1e-9;

/// A point in the ambient space. 1D points carry 0.0 in the second slot.
pub type Point = [f64; 2];

/// Squared-distance transport cost `c(x, y) = |x - y|^2 / 2`.
#[inline]
pub fn quadratic_cost(x: Point, y: Point) -> f64 {
    let dx = x[0] - y[0];
    let dy = x[1] - y[1];
    0.5 * (dx * dx + dy * dy)
}

/// An axis-aligned box in 1 or 2 dimensions with a uniform cell grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    dim: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    resolution: [usize; 2],
}

impl BoxDomain {
    /// Interval `[lo, hi]` split into `resolution` cells.
    pub fn interval(lo: f64, hi: f64, resolution: usize) -> Result<Self> {
        Self::new(1, [lo, 0.0], [hi, 1.0], [resolution, 1])
    }

    /// Rectangle `[lo0, hi0] x [lo1, hi1]` with `res0 x res1` cells.
    pub fn rectangle(lo: [f64; 2], hi: [f64; 2], resolution: [usize; 2]) -> Result<Self> {
        Self::new(2, lo, hi, resolution)
    }

    fn new(dim: usize, lo: [f64; 2], hi: [f64; 2], resolution: [usize; 2]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Dimension(format!("dim must be 1 or 2, got {dim}")));
        }
        for a in 0..dim {
            if !(lo[a] < hi[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return Err(Error::Invalid(format!(
                    "axis {a}: need finite lo < hi, got [{}, {}]",
                    lo[a], hi[a]
                )));
            }
            if resolution[a] == 0 {
                return Err(Error::Invalid(format!("axis {a}: zero resolution")));
            }
        }
        let mut b = BoxDomain { dim, lo, hi, resolution };
        if dim == 1 {
            // keep the unused axis in a canonical state so PartialEq is meaningful
            b.lo[1] = 0.0;
            b.hi[1] = 1.0;
            b.resolution[1] = 1;
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo[..self.dim]
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi[..self.dim]
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution[..self.dim]
    }

    /// Total number of grid cells.
    pub fn num_cells(&self) -> usize {
        self.resolution[..self.dim].iter().product()
    }

    /// Cell width along `axis`.
    pub fn cell_width(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.resolution[axis] as f64
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.cell_width(a)).product()
    }

    /// Length of the cell diagonal.
    pub fn cell_diagonal(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.cell_width(a).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Center of cell `k` (row-major: axis 0 outermost).
    pub fn cell_center(&self, k: usize) -> Point {
        debug_assert!(k < self.num_cells());
        let mut p = [0.0, 0.0];
        if self.dim == 1 {
            p[0] = self.lo[0] + (k as f64 + 0.5) * self.cell_width(0);
        } else {
            let n1 = self.resolution[1];
            let i0 = k / n1;
            let i1 = k % n1;
            p[0] = self.lo[0] + (i0 as f64 + 0.5) * self.cell_width(0);
            p[1] = self.lo[1] + (i1 as f64 + 0.5) * self.cell_width(1);
        }
        p
    }

    /// Whether `p` lies in the closed box, within `slack` per axis.
    pub fn contains(&self, p: Point, slack: f64) -> bool {
        (0..self.dim).all(|a| p[a] >= self.lo[a] - slack && p[a] <= self.hi[a] + slack)
    }

    /// Index of the cell containing `p`, clamped to the grid.
    pub fn cell_index_of(&self, p: Point) -> usize {
        let clamp_axis = |a: usize| -> usize {
            let t = (p[a] - self.lo[a]) / self.cell_width(a);
            (t.floor() as isize).clamp(0, self.resolution[a] as isize - 1) as usize
        };
        if self.dim == 1 {
            clamp_axis(0)
        } else {
            clamp_axis(0) * self.resolution[1] + clamp_axis(1)
        }
    }
}

/// An absolutely continuous probability measure on a box, stored as
/// nonnegative density samples at cell centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeasure {
    #[serde(rename = "box")]
    domain: BoxDomain,
    density: Vec<f64>,
}

impl GridMeasure {
    /// Wraps a density vector, validating nonnegativity and unit total mass
    /// (within [`MASS_TOL`]).
    pub fn new(domain: BoxDomain, density: Vec<f64>) -> Result<Self> {
        if density.len() != domain.num_cells() {
            return Err(Error::Dimension(format!(
                "density has {} entries, grid has {} cells",
                density.len(),
                domain.num_cells()
            )));
        }
        for (k, &d) in density.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::Invalid(format!("density[{k}] = {d} is not a finite nonnegative value")));
            }
        }
        let total: f64 = density.iter().sum::<f64>() * domain.cell_volume();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::MassMismatch((total - 1.0).abs()));
        }
        Ok(GridMeasure { domain, density })
    }

    /// Builds a measure from unnormalized nonnegative weights, rescaling to
    /// unit mass.
    pub fn normalized(domain: BoxDomain, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum::<f64>() * domain.cell_volume();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Invalid(format!("cannot normalize weights with total mass {total}")));
        }
        let density = weights.into_iter().map(|w| w / total).collect();
        Self::new(domain, density)
    }

    /// As [`GridMeasure::normalized`], but first clamps weights at `floor`.
    /// Used when the caller declares density data bounded away from zero.
    pub fn normalized_with_floor(domain: BoxDomain, weights: Vec<f64>, floor: f64) -> Result<Self> {
        let clamped = weights.into_iter().map(|w| w.max(floor)).collect();
        Self::normalized(domain, clamped)
    }

    /// Uniform probability measure on the box.
    pub fn uniform(domain: BoxDomain) -> Self {
        let n = domain.num_cells();
        let d = 1.0 / (n as f64 * domain.cell_volume());
        GridMeasure { density: vec![d; n], domain }
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Mass of cell `k`.
    pub fn cell_mass(&self, k: usize) -> f64 {
        self.density[k] * self.domain.cell_volume()
    }

    /// Cell masses as a vector.
    pub fn masses(&self) -> Vec<f64> {
        self.density.iter().map(|d| d * self.domain.cell_volume()).collect()
    }

    /// Density at `p` by multilinear interpolation between cell centers,
    /// clamped to the outermost centers.
    pub fn density_at(&self, p: Point) -> f64 {
        let axis_weights = |a: usize| -> (usize, usize, f64) {
            let n = self.domain.resolution[a];
            let t = (p[a] - self.domain.lo[a]) / self.domain.cell_width(a) - 0.5;
            let t = t.clamp(0.0, (n - 1) as f64);
            let i = (t.floor() as usize).min(n.saturating_sub(2).max(0));
            let i = i.min(n - 1);
            let j = (i + 1).min(n - 1);
            (i, j, t - i as f64)
        };
        if self.domain.dim == 1 {
            let (i, j, w) = axis_weights(0);
            self.density[i] * (1.0 - w) + self.density[j] * w
        } else {
            let (i0, j0, w0) = axis_weights(0);
            let (i1, j1, w1) = axis_weights(1);
            let n1 = self.domain.resolution[1];
            let at = |a: usize, b: usize| self.density[a * n1 + b];
            at(i0, i1) * (1.0 - w0) * (1.0 - w1)
                + at(i0, j1) * (1.0 - w0) * w1
                + at(j0, i1) * w0 * (1.0 - w1)
                + at(j0, j1) * w0 * w1
        }
    }

    /// `sum |self_k - other_k| * vol` over cells; total-variation style L1.
    pub fn l1_distance(&self, other: &GridMeasure) -> Result<f64> {
        self.check_same_box(other)?;
        Ok(self
            .density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.domain.cell_volume())
    }

    pub fn check_same_box(&self, other: &GridMeasure) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::BoxMismatch(format!(
                "{:?} vs {:?}",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    /// CSV rows `x[,y],density`, one per cell.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        if self.domain.dim == 1 {
            wtr.write_record(["x", "density"])?;
        } else {
            wtr.write_record(["x", "y", "density"])?;
        }
        for (k, &d) in self.density.iter().enumerate() {
            let c = self.domain.cell_center(k);
            if self.domain.dim == 1 {
                wtr.write_record(&[c[0].to_string(), d.to_string()])?;
            } else {
                wtr.write_record(&[c[0].to_string(), c[1].to_string(), d.to_string()])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Transport cost specification. The quadratic kind is `c(x,y) = |x-y|^2/2`;
/// tabulated costs carry an explicit matrix over fixed supports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CostKind {
    Quadratic,
    Tabulated {
        values: Vec<f64>,
        rows: usize,
        cols: usize,
    },
}

/// A cost together with the global quantities the estimates need:
/// a Lipschitz bound in the second argument, the oscillation
/// `osc(c) = max c - min c` over the product of the domains, and
/// `b0 = exp(-max c)`, the floor of the utility density `s = exp(-c)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostSpec {
    pub kind: CostKind,
    pub lipschitz_bound: f64,
    pub oscillation: f64,
    pub b0: f64,
}

impl CostSpec {
    /// Quadratic cost with bounds computed from the box corners (never stored
    /// stale: construct anew per domain pair).
    pub fn quadratic(x: &BoxDomain, y: &BoxDomain) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::Dimension(format!(
                "cost domains have dims {} and {}",
                x.dim(),
                y.dim()
            )));
        }
        let mut max_sq = 0.0;
        let mut min_sq = 0.0;
        for a in 0..x.dim() {
            let far = (x.hi[a] - y.lo[a]).abs().max((y.hi[a] - x.lo[a]).abs());
            let gap = (y.lo[a] - x.hi[a]).max(x.lo[a] - y.hi[a]).max(0.0);
            max_sq += far * far;
            min_sq += gap * gap;
        }
        let max_c = 0.5 * max_sq;
        let min_c = 0.5 * min_sq;
        Ok(CostSpec {
            kind: CostKind::Quadratic,
            lipschitz_bound: max_sq.sqrt(),
            oscillation: max_c - min_c,
            b0: (-max_c).exp(),
        })
    }

    /// Tabulated cost over `rows x cols` fixed support pairs, row-major.
    pub fn tabulated(values: Vec<f64>, rows: usize, cols: usize, lipschitz_bound: f64) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "table has {} entries for {rows}x{cols}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("tabulated cost has non-finite entries".into()));
        }
        let max_c = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min_c = values.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(CostSpec {
            kind: CostKind::Tabulated { values, rows, cols },
            lipschitz_bound,
            oscillation: max_c - min_c,
            b0: (-max_c).exp(),
        })
    }

    /// Cost of moving a unit from `x` to `y`. Tabulated kinds use the support
    /// indices `(i, j)`.
    #[inline]
    pub fn eval(&self, i: usize, j: usize, x: Point, y: Point) -> f64 {
        match &self.kind {
            CostKind::Quadratic => quadratic_cost(x, y),
            CostKind::Tabulated { values, cols, .. } => values[i * cols + j],
        }
    }

    /// Utility density `s = exp(-c)`.
    #[inline]
    pub fn utility(&self, i: usize, j: usize, x: Point, y: Point) -> f64 {
        (-self.eval(i, j, x, y)).exp()
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.kind, CostKind::Quadratic)
    }
}

/// Relative entropy `H_ν(β) = ∫ ln(dβ/dν) dβ` over a shared grid.
///
/// Returns `+∞` when `β` puts mass where `ν` vanishes. Nonnegative for
/// probability pairs (Jensen); zero iff the densities agree cellwise.
pub fn relative_entropy(beta: &GridMeasure, nu: &GridMeasure) -> Result<f64> {
    beta.check_same_box(nu)?;
    let vol = beta.domain().cell_volume();
    let mut h = 0.0;
    for (b, n) in beta.density.iter().zip(&nu.density) {
        if *b > 0.0 {
            if *n <= 0.0 {
                return Ok(f64::INFINITY);
            }
            h += (b / n).ln() * b * vol;
        }
    }
    Ok(h)
}

/// Certified bound on `|W_c(μ, β1) - W_c(μ, β2)|` when `β1`, `β2` agree off a
/// set of the given diameter carrying mass `eta`: mass can be re-routed
/// within that set at unit cost at most `lipschitz_bound * diam`.
pub fn cost_shift_bound(cost: &CostSpec, diam: f64, eta: f64) -> Result<f64> {
    if diam < 0.0 || eta < 0.0 || eta > 1.0 {
        return Err(Error::Invalid(format!(
            "need diam >= 0 and eta in [0,1], got diam={diam}, eta={eta}"
        )));
    }
    Ok(cost.lipschitz_bound * diam * eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_interval(n: usize) -> BoxDomain {
        BoxDomain::interval(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn grid_measure_rejects_bad_mass() {
        let b = unit_interval(4);
        assert!(GridMeasure::new(b.clone(), vec![1.0; 4]).is_ok());
        assert!(matches!(
            GridMeasure::new(b, vec![2.0; 4]),
            Err(Error::MassMismatch(_))
        ));
    }

    #[test]
    fn entropy_identity_is_zero() {
        let nu = GridMeasure::uniform(unit_interval(16));
        assert_eq!(relative_entropy(&nu, &nu).unwrap(), 0.0);
    }

    #[test]
    fn entropy_half_support_is_ln2() {
        // nu uniform on [0,1], beta density 2 on [0,1/2] and 0 elsewhere.
        let b = unit_interval(64);
        let nu = GridMeasure::uniform(b.clone());
        let mut d = vec![0.0; 64];
        for v in d.iter_mut().take(32) {
            *v = 2.0;
        }
        let beta = GridMeasure::new(b, d).unwrap();
        let h = relative_entropy(&beta, &nu).unwrap();
        assert!((h - 2.0f64.ln()).abs() < 1e-12, "h = {h}");
    }

    #[test]
    fn entropy_four_cell_oracle() {
        // Direct-summation oracle: four cells of nu-mass 0.25 each, beta
        // masses (0.4, 0.3, 0.2, 0.1).
        let b = unit_interval(4);
        let nu = GridMeasure::uniform(b.clone());
        let beta_masses = [0.4, 0.3, 0.2, 0.1];
        let beta = GridMeasure::new(
            b.clone(),
            beta_masses.iter().map(|m| m / b.cell_volume()).collect(),
        )
        .unwrap();
        let oracle: f64 = beta_masses.iter().map(|m| m * (m / 0.25f64).ln()).sum();
        assert!((oracle - 0.10644015).abs() < 1e-7);
        let h = relative_entropy(&beta, &nu).unwrap();
        assert!((h - oracle).abs() < 1e-12, "h = {h}, oracle = {oracle}");
    }

    #[test]
    fn entropy_infinite_when_nu_vanishes_under_beta() {
        let b = unit_interval(2);
        let nu = GridMeasure::new(b.clone(), vec![2.0, 0.0]).unwrap();
        let beta = GridMeasure::uniform(b);
        assert!(relative_entropy(&beta, &nu).unwrap().is_infinite());
    }

    #[test]
    fn quadratic_cost_bounds_unit_boxes() {
        let x = unit_interval(8);
        let y = unit_interval(8);
        let c = CostSpec::quadratic(&x, &y).unwrap();
        assert!((c.lipschitz_bound - 1.0).abs() < 1e-15);
        assert!((c.oscillation - 0.5).abs() < 1e-15);
        assert!((c.b0 - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn quadratic_cost_bounds_shifted_boxes() {
        let x = unit_interval(8);
        let y = BoxDomain::interval(2.0, 3.0, 8).unwrap();
        let c = CostSpec::quadratic(&x, &y).unwrap();
        assert!((c.lipschitz_bound - 3.0).abs() < 1e-15);
        // max c = 9/2 at (0,3); min c = 1/2 at (1,2)
        assert!((c.oscillation - 4.0).abs() < 1e-15);
        assert!((c.b0 - (-4.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cost_shift_bound_edges() {
        let x = unit_interval(4);
        let c = CostSpec::quadratic(&x, &x).unwrap();
        assert_eq!(cost_shift_bound(&c, 0.5, 0.0).unwrap(), 0.0);
        assert_eq!(cost_shift_bound(&c, 0.0, 0.5).unwrap(), 0.0);
        let b = cost_shift_bound(&c, 0.1, 0.2).unwrap();
        assert!((b - 0.02).abs() < 1e-15);
        assert!(cost_shift_bound(&c, -1.0, 0.1).is_err());
        assert!(cost_shift_bound(&c, 0.1, 1.5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = BoxDomain::rectangle([0.0, 0.0], [1.0, 2.0], [3, 4]).unwrap();
        let m = GridMeasure::uniform(b);
        let s = serde_json::to_string(&m).unwrap();
        let back: GridMeasure = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn csv_export_has_one_row_per_cell() {
        let m = GridMeasure::uniform(unit_interval(5));
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6); // header + 5 cells
        assert!(text.starts_with("x,density"));
    }

    #[test]
    fn cell_centers_and_indexing_agree() {
        let b = BoxDomain::rectangle([0.0, -1.0], [2.0, 1.0], [4, 8]).unwrap();
        for k in 0..b.num_cells() {
            assert_eq!(b.cell_index_of(b.cell_center(k)), k);
        }
    }

    proptest! {
        #[test]
        fn entropy_nonnegative_on_probability_pairs(
            bw in prop::collection::vec(0.01f64..10.0, 16),
            nw in prop::collection::vec(0.01f64..10.0, 16),
        ) {
            let b = unit_interval(16);
            let beta = GridMeasure::normalized(b.clone(), bw).unwrap();
            let nu = GridMeasure::normalized(b, nw).unwrap();
            let h = relative_entropy(&beta, &nu).unwrap();
            prop_assert!(h >= -1e-12);
        }

        #[test]
        fn entropy_zero_iff_equal(
            w in prop::collection::vec(0.01f64..10.0, 8),
            bump in 1.2f64..3.0,
        ) {
            let b = unit_interval(8);
            let nu = GridMeasure::normalized(b.clone(), w.clone()).unwrap();
            prop_assert!(relative_entropy(&nu, &nu).unwrap().abs() < 1e-12);
            let mut w2 = w;
            w2[0] *= bump;
            let beta = GridMeasure::normalized(b, w2).unwrap();
            prop_assert!(relative_entropy(&beta, &nu).unwrap() > 1e-12);
        }
    }
}
