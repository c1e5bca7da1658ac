use super::{Domain, SurfacePoint};
use crate::{Error, Result, C64};

/// Antiholomorphic involutions of the catalog domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionSpec {
    /// `z -> -1/conj(z)`
    PlaneAntipodal,
    /// `(z, w) -> (-1/conj(z), -1/conj(w))`
    CurveAntipodal,
    /// `z -> 1/conj(z)`; has fixed points on the unit circle.
    PlaneConjugateAntipodal,
    /// Reference map for tests of the homology machinery.
    Identity,
}

/// Maps of the `z`-plane used to transport paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZMap {
    Identity,
    /// `z -> -1/conj(z)`
    NegInvConj,
    /// `z -> 1/conj(z)`
    InvConj,
    /// `z -> conj(z)`
    Conj,
}

impl ZMap {
    pub fn apply(self, z: C64) -> C64 {
        match self {
            ZMap::Identity => z,
            ZMap::NegInvConj => -1.0 / z.conj(),
            ZMap::InvConj => 1.0 / z.conj(),
            ZMap::Conj => z.conj(),
        }
    }

    /// Velocity of the image curve given position `z` and velocity `dz`.
    pub fn push_velocity(self, z: C64, dz: C64) -> C64 {
        match self {
            ZMap::Identity => dz,
            ZMap::NegInvConj => dz.conj() / (z.conj() * z.conj()),
            ZMap::InvConj => -dz.conj() / (z.conj() * z.conj()),
            ZMap::Conj => dz.conj(),
        }
    }
}

impl InvolutionSpec {
    pub fn zmap(self) -> ZMap {
        match self {
            InvolutionSpec::PlaneAntipodal | InvolutionSpec::CurveAntipodal => ZMap::NegInvConj,
            InvolutionSpec::PlaneConjugateAntipodal => ZMap::InvConj,
            InvolutionSpec::Identity => ZMap::Identity,
        }
    }

    /// Image of the `w` coordinate.
    pub fn map_w(self, w: C64) -> C64 {
        match self {
            InvolutionSpec::CurveAntipodal => -1.0 / w.conj(),
            _ => w,
        }
    }

    pub fn is_antiholomorphic(self) -> bool {
        !matches!(self, InvolutionSpec::Identity)
    }
}

pub fn apply_involution(spec: InvolutionSpec, domain: &Domain, p: &SurfacePoint) -> Result<SurfacePoint> {
    if p.z.norm() == 0.0 && spec != InvolutionSpec::Identity {
        return Err(Error::NotOnDomain);
    }
    let z = spec.zmap().apply(p.z);
    let w = match (spec, p.w) {
        (InvolutionSpec::CurveAntipodal, Some(w)) => {
            if w.norm() == 0.0 {
                return Err(Error::NotOnDomain);
            }
            Some(spec.map_w(w))
        }
        (InvolutionSpec::CurveAntipodal, None) => return Err(Error::NotOnDomain),
        (_, w) => w,
    };
    if let Domain::PuncturedPlane { punctures } = domain {
        if punctures.iter().any(|q| (q - p.z).norm() <= 1e-14 * (1.0 + q.norm())) {
            return Err(Error::NotOnDomain);
        }
    }
    Ok(SurfacePoint { z, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::surface::tests::klein_curve;
    use crate::{c, re};

    #[test]
    fn plane_antipodal_of_i() {
        let d = Domain::punctured_plane(alloc::vec![re(0.0)]);
        let p = apply_involution(InvolutionSpec::PlaneAntipodal, &d, &SurfacePoint::plane(c(0.0, 1.0))).unwrap();
        assert!((p.z - c(0.0, -1.0)).norm() < 1e-15);
        let back = apply_involution(InvolutionSpec::PlaneAntipodal, &d, &p).unwrap();
        assert!((back.z - c(0.0, 1.0)).norm() <= 1e-14);
    }

    #[test]
    fn puncture_is_rejected() {
        let d = Domain::punctured_plane(alloc::vec![re(0.0)]);
        assert!(apply_involution(InvolutionSpec::PlaneAntipodal, &d, &SurfacePoint::plane(re(0.0))).is_err());
    }

    #[test]
    fn curve_image_stays_on_curve() {
        let d = klein_curve(0.37);
        let f = d.curve_rhs().unwrap().clone();
        for z in sampling::annulus(100, 0.05, 20.0) {
            let p = d.principal_point(z);
            let q = apply_involution(InvolutionSpec::CurveAntipodal, &d, &p).unwrap();
            let w = q.w.unwrap();
            let fz = f.eval(q.z).unwrap();
            assert!((w * w - fz).norm() <= 1e-12 * (1.0 + fz.norm()));
            let back = apply_involution(InvolutionSpec::CurveAntipodal, &d, &q).unwrap();
            assert!((back.z - p.z).norm() <= 1e-14 * (1.0 + p.z.norm()));
            assert!((back.w.unwrap() - p.w.unwrap()).norm() <= 1e-14 * (1.0 + w.norm()));
        }
    }

    #[test]
    fn fixed_point_free() {
        let d = klein_curve(0.5);
        let mut min_plane = f64::INFINITY;
        let mut min_curve = f64::INFINITY;
        let plane = Domain::punctured_plane(alloc::vec![re(0.0)]);
        for z in sampling::annulus(10_000, 1e-3, 1e3) {
            let q = apply_involution(InvolutionSpec::PlaneAntipodal, &plane, &SurfacePoint::plane(z)).unwrap();
            min_plane = min_plane.min((q.z - z).norm());
            let p = d.principal_point(z);
            let q = apply_involution(InvolutionSpec::CurveAntipodal, &d, &p).unwrap();
            let dist = (q.z - p.z).norm() + (q.w.unwrap() - p.w.unwrap()).norm();
            min_curve = min_curve.min(dist);
        }
        assert!(min_plane > 0.0);
        assert!(min_curve > 0.0);
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let gamma = |t: f64| c(1.0 + 0.3 * t, 0.5 * t * t);
        let dgamma = |t: f64| c(0.3, t);
        for m in [ZMap::NegInvConj, ZMap::InvConj, ZMap::Conj, ZMap::Identity] {
            let t = 0.4;
            let h = 1e-6;
            let fd = (m.apply(gamma(t + h)) - m.apply(gamma(t - h))) / (2.0 * h);
            assert!((m.push_velocity(gamma(t), dgamma(t)) - fd).norm() < 1e-8);
        }
    }
}
