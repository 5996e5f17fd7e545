//! Shared helpers for integration tests, kept independent of the library's
//! own mode construction wherever they serve as oracles.

use curlball::geometry::SphericalVec;
use curlball::specfun::{h_operator, psi, psi_prime, real_sph_harm, AngularIndex};

/// Independent construction of a curl eigenfield from the scalar Helmholtz
/// solution ψ = ψ_n(λr) Y_n^k:
///
///   T = rot(x ψ),  S = (1/λ) rot T,  u± = S ± T,
///
/// which satisfies rot u± = ±λ u± by construction. Evaluated directly from
/// the recurrences, with no reference to the library's Φ-based tangential
/// profiles; agreement up to one scalar factor per mode is a nontrivial
/// cross-check.
pub fn chandrasekhar_kendall(
    n: u32,
    k: i32,
    lambda: f64,
    sign: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> SphericalVec {
    assert!(n >= 1 && lambda > 0.0 && r > 0.0);
    let idx = AngularIndex { n, k };
    let y = real_sph_harm(idx, theta, phi);
    let h = h_operator(idx, theta, phi);
    let z = lambda * r;
    let psi_z = psi(n, z);
    let g = psi_z + z * psi_prime(n, z);
    // T = (0, ψ·Re H, -ψ·Im H) in the (r, θ, φ) frame
    let t_theta = psi_z * h.re;
    let t_phi = -psi_z * h.im;
    // S = ((n(n+1)/z) ψ Y, (g/z)·Im H, (g/z)·Re H)
    let s_r = (n * (n + 1)) as f64 * psi_z / z * y;
    let s_theta = g / z * h.im;
    let s_phi = g / z * h.re;
    SphericalVec {
        r: s_r,
        theta: s_theta + sign * t_theta,
        phi: s_phi + sign * t_phi,
    }
}

/// Deterministic interior sample points with `lo·R ≤ |x| ≤ hi·R`.
pub fn interior_points(count: usize, radius: f64, lo: f64, hi: f64, seed: u64) -> Vec<[f64; 3]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let p = [
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        ];
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r >= lo * radius && r <= hi * radius {
            pts.push(p);
        }
    }
    pts
}
