//! Domains of Weierstrass data: punctured planes and square-root curves.

mod involution;
mod loops;
mod path;

use alloc::vec::Vec;

use crate::algebra::{is_branch_point, Chart, ComplexRational, PointLocus};
use crate::{Error, Result, C64};

pub use involution::{apply_involution, InvolutionSpec, ZMap};
pub use loops::{canonical_loops, involution_on_homology, periods_over, LoopId};
pub use path::{lift_path, lift_path_with_clearance, LiftSample, LiftedPath, PathSpec, Segment};

/// Tolerance of the curve relation for a point `(z, w)`.
pub const CURVE_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    PuncturedPlane {
        punctures: Vec<C64>,
    },
    /// `w^2 = f(z)` with the ends removed.
    RootCurve {
        f: ComplexRational,
        branch_points: Vec<C64>,
        branch_at_infinity: bool,
        removed: Vec<PointLocus>,
    },
}

/// A finite point of a domain. `w` is `None` on punctured planes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub z: C64,
    pub w: Option<C64>,
}

impl SurfacePoint {
    pub fn plane(z: C64) -> Self {
        SurfacePoint { z, w: None }
    }

    pub fn on_curve(z: C64, w: C64) -> Self {
        SurfacePoint { z, w: Some(w) }
    }
}

impl Domain {
    pub fn punctured_plane(punctures: Vec<C64>) -> Self {
        Domain::PuncturedPlane { punctures }
    }

    /// Square-root curve; branch points are the odd-order zeros and poles of `f`.
    pub fn root_curve(f: ComplexRational, removed: Vec<PointLocus>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let mut branch_points = Vec::new();
        for (z, m) in f.numerator().distinct_roots().into_iter().chain(f.denominator().distinct_roots()) {
            if m % 2 == 1 {
                branch_points.push(z);
            }
        }
        let branch_at_infinity = is_branch_point(&f, Chart::Infinity)?;
        Ok(Domain::RootCurve { f, branch_points, branch_at_infinity, removed })
    }

    pub fn curve_rhs(&self) -> Option<&ComplexRational> {
        match self {
            Domain::PuncturedPlane { .. } => None,
            Domain::RootCurve { f, .. } => Some(f),
        }
    }

    pub fn is_curve(&self) -> bool {
        matches!(self, Domain::RootCurve { .. })
    }

    /// Finite points paths must keep away from: punctures, branch points,
    /// every zero and pole of `f`, and removed points.
    pub fn obstacles(&self) -> Vec<C64> {
        match self {
            Domain::PuncturedPlane { punctures } => punctures.clone(),
            Domain::RootCurve { f, removed, .. } => {
                let mut out: Vec<C64> = f
                    .numerator()
                    .distinct_roots()
                    .into_iter()
                    .chain(f.denominator().distinct_roots())
                    .map(|(z, _)| z)
                    .collect();
                for p in removed {
                    if let Chart::Finite(z) = p.chart {
                        if !out.iter().any(|q| (q - z).norm() < 1e-12) {
                            out.push(z);
                        }
                    }
                }
                out
            }
        }
    }

    /// Size of the configuration of obstacles, at least 1.
    pub fn spread(&self) -> f64 {
        self.obstacles().iter().fold(1.0f64, |m, z| m.max(z.norm()))
    }

    pub fn default_clearance(&self) -> f64 {
        1e-3 * self.spread()
    }

    /// Distance from `z` to the nearest obstacle.
    pub fn obstacle_distance(&self, z: C64) -> f64 {
        self.obstacles().iter().fold(f64::INFINITY, |m, q| m.min((z - q).norm()))
    }

    /// The two values of `w` over `z` (principal root first).
    pub fn sheets(&self, z: C64) -> Option<[C64; 2]> {
        self.curve_rhs().map(|f| {
            let w = f.eval_unchecked(z).sqrt();
            [w, -w]
        })
    }

    /// Principal sheet point over `z`.
    pub fn principal_point(&self, z: C64) -> SurfacePoint {
        match self.sheets(z) {
            Some([w, _]) => SurfacePoint::on_curve(z, w),
            None => SurfacePoint::plane(z),
        }
    }

    /// Validates a point: on the curve up to [`CURVE_RESIDUAL_TOL`] and not an
    /// end or puncture.
    pub fn check_point(&self, p: &SurfacePoint) -> Result<()> {
        match self {
            Domain::PuncturedPlane { punctures } => {
                if p.w.is_some() {
                    return Err(Error::NotOnDomain);
                }
                if punctures.iter().any(|q| (q - p.z).norm() <= 1e-14 * (1.0 + q.norm())) {
                    return Err(Error::NotOnDomain);
                }
                Ok(())
            }
            Domain::RootCurve { f, removed, .. } => {
                let w = p.w.ok_or(Error::NotOnDomain)?;
                let fz = f.eval(p.z).map_err(|_| Error::NotOnDomain)?;
                if (w * w - fz).norm() > CURVE_RESIDUAL_TOL * (1.0 + fz.norm()) {
                    return Err(Error::NotOnDomain);
                }
                for q in removed {
                    if let Chart::Finite(z) = q.chart {
                        if (z - p.z).norm() <= 1e-14 * (1.0 + z.norm()) {
                            return Err(Error::NotOnDomain);
                        }
                    }
                }
                Ok(())
            }
        }
    }
}
