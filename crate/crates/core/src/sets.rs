//! Closed convex feasible sets and Euclidean projection onto them.

use crate::error::{Error, Result};
use crate::tensor::{distance, dot};

/// Tolerance used by [`FeasibleSet::contains_origin`] and other default checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Dykstra iteration limits for polyhedral projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DykstraConfig {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for DykstraConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            tol: 1e-10,
        }
    }
}

/// The halfspace `{x : a^T x <= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset }
    }

    fn project_in_place(&self, z: &mut [f64]) {
        let nn = dot(&self.normal, &self.normal);
        if nn == 0.0 {
            return;
        }
        let excess = dot(&self.normal, z) - self.offset;
        if excess > 0.0 {
            let s = excess / nn;
            for (zi, ai) in z.iter_mut().zip(&self.normal) {
                *zi -= s * ai;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    WholeSpace {
        dim: usize,
    },
    /// Componentwise bounds; entries may be infinite, and `lower[i] == upper[i]` fixes a coordinate.
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// The probability simplex `{x >= 0, sum x = 1}`.
    Simplex {
        dim: usize,
    },
    Polyhedron {
        dim: usize,
        halfspaces: Vec<Halfspace>,
        dykstra: DykstraConfig,
    },
    Product(Vec<FeasibleSet>),
}

impl FeasibleSet {
    pub fn whole_space(dim: usize) -> Self {
        FeasibleSet::WholeSpace { dim }
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let set = FeasibleSet::Box { lower, upper };
        set.validate()?;
        Ok(set)
    }

    pub fn nonnegative_orthant(dim: usize) -> Self {
        FeasibleSet::Box {
            lower: vec![0.0; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    pub fn unit_box(dim: usize) -> Self {
        FeasibleSet::Box {
            lower: vec![0.0; dim],
            upper: vec![1.0; dim],
        }
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let set = FeasibleSet::Ball { center, radius };
        set.validate()?;
        Ok(set)
    }

    pub fn simplex(dim: usize) -> Self {
        FeasibleSet::Simplex { dim }
    }

    pub fn polyhedron(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let set = FeasibleSet::Polyhedron {
            dim,
            halfspaces,
            dykstra: DykstraConfig::default(),
        };
        set.validate()?;
        Ok(set)
    }

    pub fn product(factors: Vec<FeasibleSet>) -> Result<Self> {
        let set = FeasibleSet::Product(factors);
        set.validate()?;
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::WholeSpace { dim }
            | FeasibleSet::Simplex { dim }
            | FeasibleSet::Polyhedron { dim, .. } => *dim,
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Product(factors) => factors.iter().map(FeasibleSet::dim).sum(),
        }
    }

    /// Checks the structural invariants of the set description.
    pub fn validate(&self) -> Result<()> {
        match self {
            FeasibleSet::WholeSpace { dim } | FeasibleSet::Simplex { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidSet("dimension must be positive".into()));
                }
            }
            FeasibleSet::Box { lower, upper } => {
                if lower.len() != upper.len() {
                    return Err(Error::InvalidSet(format!(
                        "box bounds have lengths {} and {}",
                        lower.len(),
                        upper.len()
                    )));
                }
                if lower.is_empty() {
                    return Err(Error::InvalidSet("dimension must be positive".into()));
                }
                for (i, (l, u)) in lower.iter().zip(upper).enumerate() {
                    if l.is_nan() || u.is_nan() {
                        return Err(Error::InvalidSet(format!("box bound {i} is NaN")));
                    }
                    if l > u {
                        return Err(Error::InvalidSet(format!(
                            "box coordinate {i} has lower {l} > upper {u}"
                        )));
                    }
                    if *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                        return Err(Error::InvalidSet(format!(
                            "box coordinate {i} has no feasible value"
                        )));
                    }
                }
            }
            FeasibleSet::Ball { center, radius } => {
                if center.is_empty() {
                    return Err(Error::InvalidSet("dimension must be positive".into()));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidSet("ball center must be finite".into()));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidSet(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
            }
            FeasibleSet::Polyhedron {
                dim, halfspaces, ..
            } => {
                if *dim == 0 {
                    return Err(Error::InvalidSet("dimension must be positive".into()));
                }
                for (k, h) in halfspaces.iter().enumerate() {
                    if h.normal.len() != *dim {
                        return Err(Error::InvalidSet(format!(
                            "halfspace {k} has normal of length {}, expected {dim}",
                            h.normal.len()
                        )));
                    }
                    if h.normal.iter().any(|a| !a.is_finite()) || !h.offset.is_finite() {
                        return Err(Error::InvalidSet(format!("halfspace {k} is not finite")));
                    }
                    if h.normal.iter().all(|&a| a == 0.0) && h.offset < 0.0 {
                        return Err(Error::InvalidSet(format!(
                            "halfspace {k} reads 0 <= {} and is empty",
                            h.offset
                        )));
                    }
                }
            }
            FeasibleSet::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::InvalidSet("product has no factors".into()));
                }
                for f in factors {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Euclidean projection of `z` onto the set.
    ///
    /// Exact for every variant except `Polyhedron`, which runs Dykstra's
    /// alternating projections and reports non-convergence as an error.
    pub fn project(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.dim() {
            return Err(Error::dims(self.dim(), z.len(), "projection input"));
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("projection input".into()));
        }
        let mut out = z.to_vec();
        self.project_into(&mut out)?;
        Ok(out)
    }

    fn project_into(&self, z: &mut [f64]) -> Result<()> {
        match self {
            FeasibleSet::WholeSpace { .. } => {}
            FeasibleSet::Box { lower, upper } => {
                for ((zi, l), u) in z.iter_mut().zip(lower).zip(upper) {
                    *zi = zi.clamp(*l, *u);
                }
            }
            FeasibleSet::Ball { center, radius } => {
                let d = distance(z, center);
                if d > *radius {
                    let s = radius / d;
                    for (zi, c) in z.iter_mut().zip(center) {
                        *zi = c + (*zi - c) * s;
                    }
                }
            }
            FeasibleSet::Simplex { .. } => project_simplex(z),
            FeasibleSet::Polyhedron {
                halfspaces,
                dykstra,
                ..
            } => dykstra_project(z, halfspaces, dykstra)?,
            FeasibleSet::Product(factors) => {
                let mut start = 0;
                for f in factors {
                    let d = f.dim();
                    f.project_into(&mut z[start..start + d])?;
                    start += d;
                }
            }
        }
        Ok(())
    }

    /// True iff the distance from `z` to its projection is at most `tol`.
    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        match self.project(z) {
            Ok(p) => distance(z, &p) <= tol,
            Err(_) => false,
        }
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&vec![0.0; self.dim()], DEFAULT_TOL)
    }

    /// Splits a vector of this product set's dimension into factor blocks.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        match self {
            FeasibleSet::Product(factors) => {
                let mut start = 0;
                factors
                    .iter()
                    .map(|f| {
                        let r = start..start + f.dim();
                        start = r.end;
                        r
                    })
                    .collect()
            }
            other => vec![0..other.dim()],
        }
    }
}

/// Sort-and-threshold projection onto `{x >= 0, sum x = 1}`.
fn project_simplex(z: &mut [f64]) {
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    for zi in z.iter_mut() {
        *zi = (*zi - theta).max(0.0);
    }
}

const INFEASIBILITY_SLACK: f64 = 1e-6;

fn dykstra_project(z: &mut [f64], halfspaces: &[Halfspace], cfg: &DykstraConfig) -> Result<()> {
    if halfspaces.is_empty() {
        return Ok(());
    }
    if halfspaces.len() == 1 {
        halfspaces[0].project_in_place(z);
        return Ok(());
    }
    let n = z.len();
    let mut x = z.to_vec();
    let mut increments = vec![vec![0.0; n]; halfspaces.len()];
    let mut y = vec![0.0; n];
    let mut last_change = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let prev = x.clone();
        for (h, p) in halfspaces.iter().zip(increments.iter_mut()) {
            for i in 0..n {
                y[i] = x[i] + p[i];
            }
            let before = y.clone();
            h.project_in_place(&mut y);
            for i in 0..n {
                p[i] = before[i] - y[i];
            }
            x.copy_from_slice(&y);
        }
        last_change = distance(&x, &prev);
        if last_change <= cfg.tol {
            // Dykstra can settle on a point of the last halfspace when the intersection is empty.
            if let Some(k) = halfspaces.iter().position(|h| {
                dot(&h.normal, &x) - h.offset > INFEASIBILITY_SLACK * (1.0 + h.offset.abs())
            }) {
                return Err(Error::InvalidSet(format!(
                    "polyhedron appears empty: halfspace {k} violated at the Dykstra limit point"
                )));
            }
            z.copy_from_slice(&x);
            return Ok(());
        }
    }
    Err(Error::ProjectionNotConverged {
        iterations: cfg.max_iters,
        last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfline_box_clamps() {
        let x = FeasibleSet::boxed(vec![1.0, 1.0], vec![f64::INFINITY, 1.0]).unwrap();
        assert_eq!(x.project(&[0.5, 3.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn ball_scales_radially() {
        let b = FeasibleSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let p = b.project(&[3.0, 4.0]).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
        assert!(!b.contains(&[3.0, 4.0], 1e-9));
    }

    #[test]
    fn simplex_projection_satisfies_kkt() {
        let p = FeasibleSet::simplex(2).project(&[0.3, 0.9]).unwrap();
        assert!((p[0] - 0.2).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
        // Both coordinates positive, so z - p must be a constant multiple of the ones vector.
        let shift = [0.3 - p[0], 0.9 - p[1]];
        assert!((shift[0] - shift[1]).abs() < 1e-15);
    }

    #[test]
    fn simplex_projection_zeroes_small_coordinates() {
        let p = FeasibleSet::simplex(3).project(&[2.0, 0.0, -1.0]).unwrap();
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn membership_examples() {
        assert!(FeasibleSet::nonnegative_orthant(2).contains(&[0.0, 0.0], 0.0));
        assert!(FeasibleSet::simplex(3).contains(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], DEFAULT_TOL));
    }

    #[test]
    fn origin_membership() {
        assert!(FeasibleSet::unit_box(2).contains_origin());
        let halfline = FeasibleSet::boxed(vec![1.0, 1.0], vec![f64::INFINITY, 1.0]).unwrap();
        assert!(!halfline.contains_origin());
        let pair = FeasibleSet::product(vec![FeasibleSet::simplex(2), FeasibleSet::simplex(2)])
            .unwrap();
        assert!(!pair.contains_origin());
    }

    #[test]
    fn invalid_descriptions_rejected() {
        assert!(FeasibleSet::boxed(vec![2.0], vec![1.0]).is_err());
        assert!(FeasibleSet::boxed(vec![f64::INFINITY], vec![f64::INFINITY]).is_err());
        assert!(FeasibleSet::ball(vec![0.0], 0.0).is_err());
        assert!(FeasibleSet::polyhedron(2, vec![Halfspace::new(vec![0.0, 0.0], -1.0)]).is_err());
        assert!(FeasibleSet::polyhedron(2, vec![Halfspace::new(vec![1.0], 1.0)]).is_err());
        assert!(FeasibleSet::product(vec![]).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            FeasibleSet::simplex(3).project(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(!FeasibleSet::simplex(3).contains(&[1.0, 2.0], 1.0));
    }

    #[test]
    fn polyhedron_projection_matches_box() {
        // The unit square written as four halfspaces.
        let square = FeasibleSet::polyhedron(
            2,
            vec![
                Halfspace::new(vec![1.0, 0.0], 1.0),
                Halfspace::new(vec![-1.0, 0.0], 0.0),
                Halfspace::new(vec![0.0, 1.0], 1.0),
                Halfspace::new(vec![0.0, -1.0], 0.0),
            ],
        )
        .unwrap();
        let p = square.project(&[2.0, -3.0]).unwrap();
        assert!(distance(&p, &[1.0, 0.0]) < 1e-9);
    }

    #[test]
    fn polyhedron_projection_onto_wedge() {
        // {x1 + x2 <= 1, x1 - x2 <= 1}: the point (3, 0) projects onto the vertex (1, 0).
        let wedge = FeasibleSet::polyhedron(
            2,
            vec![
                Halfspace::new(vec![1.0, 1.0], 1.0),
                Halfspace::new(vec![1.0, -1.0], 1.0),
            ],
        )
        .unwrap();
        let p = wedge.project(&[3.0, 0.0]).unwrap();
        assert!(distance(&p, &[1.0, 0.0]) < 1e-9, "{p:?}");
    }

    #[test]
    fn infeasible_polyhedron_is_reported() {
        let empty = FeasibleSet::Polyhedron {
            dim: 1,
            halfspaces: vec![Halfspace::new(vec![1.0], 0.0), Halfspace::new(vec![-1.0], -1.0)],
            dykstra: DykstraConfig {
                max_iters: 200,
                tol: 1e-10,
            },
        };
        assert!(matches!(
            empty.project(&[0.5]),
            Err(Error::ProjectionNotConverged { .. }) | Err(Error::InvalidSet(_))
        ));
    }

    #[test]
    fn product_projects_blockwise() {
        let x = FeasibleSet::product(vec![
            FeasibleSet::simplex(2),
            FeasibleSet::ball(vec![0.0], 1.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(x.dim(), 3);
        assert_eq!(x.project(&[0.3, 0.9, -5.0]).unwrap()[2], -1.0);
        assert_eq!(x.block_ranges(), vec![0..2, 2..3]);
    }
}
