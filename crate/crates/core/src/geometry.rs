//! Spherical/Cartesian frames for points and vectors.

/// Vector components in the orthonormal spherical frame `(i_r, i_theta, i_phi)`
/// attached to an evaluation point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SphericalVec {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalVec {
    pub const ZERO: SphericalVec = SphericalVec {
        r: 0.0,
        theta: 0.0,
        phi: 0.0,
    };

    pub fn dot(&self, other: &SphericalVec) -> f64 {
        self.r * other.r + self.theta * other.theta + self.phi * other.phi
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> SphericalVec {
        SphericalVec {
            r: s * self.r,
            theta: s * self.theta,
            phi: s * self.phi,
        }
    }

    pub fn add(&self, other: &SphericalVec) -> SphericalVec {
        SphericalVec {
            r: self.r + other.r,
            theta: self.theta + other.theta,
            phi: self.phi + other.phi,
        }
    }

    /// Cartesian components of the vector anchored at colatitude `theta`,
    /// longitude `phi`.
    pub fn to_cartesian(&self, theta: f64, phi: f64) -> [f64; 3] {
        let (st, ct) = (theta.sin(), theta.cos());
        let (sp, cp) = (phi.sin(), phi.cos());
        [
            self.r * st * cp + self.theta * ct * cp - self.phi * sp,
            self.r * st * sp + self.theta * ct * sp + self.phi * cp,
            self.r * ct - self.theta * st,
        ]
    }

    /// Inverse of [`SphericalVec::to_cartesian`] at the same anchor point.
    pub fn from_cartesian(v: [f64; 3], theta: f64, phi: f64) -> SphericalVec {
        let (st, ct) = (theta.sin(), theta.cos());
        let (sp, cp) = (phi.sin(), phi.cos());
        SphericalVec {
            r: v[0] * st * cp + v[1] * st * sp + v[2] * ct,
            theta: v[0] * ct * cp + v[1] * ct * sp - v[2] * st,
            phi: -v[0] * sp + v[1] * cp,
        }
    }
}

/// `(r, theta, phi)` of a Cartesian point, with `phi` in `[0, 2*pi)`.
pub fn cartesian_to_spherical(p: [f64; 3]) -> (f64, f64, f64) {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if r == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let theta = (p[2] / r).clamp(-1.0, 1.0).acos();
    let mut phi = p[1].atan2(p[0]);
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    (r, theta, phi)
}

pub fn spherical_to_cartesian(r: f64, theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    [r * st * cp, r * st * sp, r * ct]
}
