//! The three eigenfamilies on the ball `|x| < R` with zero normal trace:
//!
//! * grad-div modes `q_κ = ∇g_κ` with `-∇div q = ν² q`, `ν = α_{n,m}/R`,
//! * curl modes `u±_κ` with `rot u± = ±λ u±`, `λ = ρ_{n,m}/R`,
//!
//! plus the scalar Dirichlet/Neumann eigenfunctions they derive from.
//! All vector modes are normalized to unit L₂(B) norm by quadrature.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ballquad::{gauss_legendre, pairwise_sum, SphereQuadrature};
use crate::geometry::SphericalVec;
use crate::specfun::{
    h_operator, psi, psi_prime, real_sph_harm, zeros_psi, zeros_psi_prime, AngularIndex,
};
use crate::{Error, Result};

/// Eigenfamily tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "grad-div")]
    GradDiv,
    #[serde(rename = "curl-plus")]
    CurlPlus,
    #[serde(rename = "curl-minus")]
    CurlMinus,
}

impl Family {
    /// Sign of the curl eigenvalue; grad-div modes have no sign.
    pub fn sign(&self) -> f64 {
        match self {
            Family::CurlMinus => -1.0,
            _ => 1.0,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::GradDiv => "grad-div",
            Family::CurlPlus => "curl-plus",
            Family::CurlMinus => "curl-minus",
        })
    }
}

/// Multi-index κ = (n, m, k) with its family tag.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct ModeIndex {
    pub family: Family,
    pub n: u32,
    pub m: u32,
    pub k: i32,
}

impl ModeIndex {
    /// Validates the family constraints: `m ≥ 1`, `|k| ≤ n`, and `n ≥ 1`
    /// for the curl families (their n = 0 series vanishes identically).
    pub fn new(family: Family, n: u32, m: u32, k: i32) -> Result<ModeIndex> {
        if m < 1 {
            return Err(Error::InvalidIndex(format!(
                "radial index m = {m} must be >= 1"
            )));
        }
        if k.unsigned_abs() > n {
            return Err(Error::InvalidIndex(format!("|k| = {} > n = {n}", k.unsigned_abs())));
        }
        if family != Family::GradDiv && n == 0 {
            return Err(Error::InvalidIndex(format!(
                "{family} modes require n >= 1 (the n = 0 series vanishes)"
            )));
        }
        Ok(ModeIndex { family, n, m, k })
    }

    pub fn angular(&self) -> AngularIndex {
        AngularIndex {
            n: self.n,
            k: self.k,
        }
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({},{},{})", self.family, self.n, self.m, self.k)
    }
}

fn gauss16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

fn gauss64() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(64))
}

fn reference_sphere() -> &'static SphereQuadrature {
    static Q: OnceLock<SphereQuadrature> = OnceLock::new();
    Q.get_or_init(|| SphereQuadrature::build(64, 128))
}

/// `(∫ Y² dΩ, ∫ |HY|² dΩ)` for the harmonic `idx`, by the reference sphere
/// quadrature.
pub fn angular_norms(idx: AngularIndex) -> (f64, f64) {
    let q = reference_sphere();
    let iy = q.integrate(|t, p| real_sph_harm(idx, t, p).powi(2));
    let ih = q.integrate(|t, p| h_operator(idx, t, p).norm_sqr());
    (iy, ih)
}

/// Φ_n(z) = ∫₀^z e^{i(z-τ)} ψ_n(τ)/τ dτ, by composite Gauss quadrature on
/// the unit parameter s = τ/z (the integrand is analytic in s for n ≥ 1);
/// the panel count scales with the number of oscillation periods in `z`.
fn phi_gauss(n: u32, z: f64, panels: usize) -> Complex64 {
    let (x, w) = gauss16();
    let mut re = Vec::with_capacity(panels * 16);
    let mut im = Vec::with_capacity(panels * 16);
    let width = 1.0 / panels as f64;
    for p in 0..panels {
        let left = p as f64 * width;
        for (xi, wi) in x.iter().zip(w) {
            let s = left + 0.5 * width * (xi + 1.0);
            let weight = 0.5 * width * wi;
            let amp = weight * psi(n, z * s) / s;
            let phase = z * (1.0 - s);
            re.push(amp * phase.cos());
            im.push(amp * phase.sin());
        }
    }
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

fn phi_panels(z: f64) -> usize {
    8 + 2 * (z.abs() / std::f64::consts::PI).ceil() as usize
}

/// Φ_n(λr); requires n ≥ 1 (for n = 0 the integrand ~ 1/τ diverges) and
/// λ ≠ 0. Absolute accuracy better than 1e-10 on the spectra used here.
pub fn phi_n(n: u32, lambda: f64, r: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidIndex(
            "phi is undefined for n = 0 (divergent integrand)".into(),
        ));
    }
    if lambda == 0.0 {
        return Err(Error::LambdaZero);
    }
    let z = lambda * r;
    if z == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(phi_gauss(n, z, phi_panels(z)))
}

/// Eigenvalue of the index without building the mode: `±ρ_{n,m}/R` for the
/// curl families, `ν = α_{n,m}/R` for grad-div.
pub fn eigenvalue_of(index: ModeIndex, radius: f64) -> Result<f64> {
    let m = index.m as usize;
    match index.family {
        Family::GradDiv => Ok(zeros_psi_prime(index.n, m)?[m - 1] / radius),
        _ => Ok(index.family.sign() * zeros_psi(index.n, m)?[m - 1] / radius),
    }
}

/// Serialized description of a [`VectorMode`].
#[derive(Serialize, Deserialize)]
pub struct ModeMetadata {
    pub version: u32,
    pub index: ModeIndex,
    pub eigenvalue: f64,
    pub c: f64,
    pub radius: f64,
}

/// A fully constructed, unit-norm eigenfield.
///
/// For curl families `eigenvalue` is `±ρ_{n,m}/R` and `rot u = eigenvalue·u`;
/// for grad-div it is `ν = α_{n,m}/R` with `-∇div q = ν² q`.
#[derive(Clone, Debug)]
pub struct VectorMode {
    pub index: ModeIndex,
    pub eigenvalue: f64,
    pub c: f64,
    pub radius: f64,
    /// Dimensionless root the mode is built on (ρ_{n,m} or α_{n,m}).
    pub zero: f64,
    /// Φ_n(eigenvalue·r) on the 64-node reference radial grid (curl only).
    phi_cache: Vec<(f64, Complex64)>,
}

impl VectorMode {
    pub fn build(index: ModeIndex, radius: f64) -> Result<VectorMode> {
        assert!(radius > 0.0);
        let (zero, eigenvalue) = match index.family {
            Family::GradDiv => {
                let alpha = zeros_psi_prime(index.n, index.m as usize)?[index.m as usize - 1];
                (alpha, alpha / radius)
            }
            _ => {
                let rho = zeros_psi(index.n, index.m as usize)?[index.m as usize - 1];
                (rho, index.family.sign() * rho / radius)
            }
        };
        let mut mode = VectorMode {
            index,
            eigenvalue,
            c: 1.0,
            radius,
            zero,
            phi_cache: Vec::new(),
        };
        if index.family != Family::GradDiv {
            let (x, _) = gauss64();
            mode.phi_cache = x
                .iter()
                .map(|&t| {
                    let r = 0.5 * radius * (t + 1.0);
                    (r, phi_gauss(index.n, eigenvalue * r, phi_panels(eigenvalue * r)))
                })
                .collect();
        }
        mode.c = 1.0 / mode.norm_unnormalized().sqrt();
        Ok(mode)
    }

    /// ‖mode‖² with c = 1, by the factorized 64-point radial rule and the
    /// reference sphere quadrature.
    fn norm_unnormalized(&self) -> f64 {
        let (iy, ih) = angular_norms(self.index.angular());
        let (x, w) = gauss64();
        let half = 0.5 * self.radius;
        let mut terms = Vec::with_capacity(x.len());
        for (&t, &wi) in x.iter().zip(w) {
            let r = half * (t + 1.0);
            let (fr, a, b) = self.radial_profiles(r);
            terms.push(half * wi * r * r * (fr * fr * iy + (a * a + b * b) * ih));
        }
        pairwise_sum(&terms)
    }

    /// Radial profile triple `(f_r, a, b)` at radius `r`, scaled by the
    /// normalization constant, so that the mode is
    /// `f_r·Y i_r + (a + ib)·HY` split onto the (φ, θ) axes:
    /// `v_θ = a·Im HY + b·Re HY`, `v_φ = a·Re HY − b·Im HY`.
    pub fn radial_profiles(&self, r: f64) -> (f64, f64, f64) {
        let c = self.c;
        let n = self.index.n;
        match self.index.family {
            Family::GradDiv => {
                let nu = self.eigenvalue;
                let z = nu * r;
                let fr = c * nu * psi_prime(n, z);
                let a = if n == 0 {
                    0.0
                } else if r == 0.0 {
                    if n == 1 {
                        c * nu / 3.0
                    } else {
                        0.0
                    }
                } else {
                    c * psi(n, z) / r
                };
                (fr, a, 0.0)
            }
            _ => {
                let z = self.eigenvalue * r;
                if z == 0.0 {
                    return if n == 1 {
                        (c / 3.0, c / 3.0, 0.0)
                    } else {
                        (0.0, 0.0, 0.0)
                    };
                }
                let fr = c * psi(n, z) / z;
                let phi = phi_gauss(n, z, phi_panels(z));
                (fr, c * phi.re / z, c * phi.im / z)
            }
        }
    }

    /// Evaluates the mode in the spherical frame at `(r, θ, φ)`, 0 ≤ r ≤ R;
    /// continuous at r = 0 via series limits.
    pub fn eval(&self, r: f64, theta: f64, phi: f64) -> SphericalVec {
        let (fr, a, b) = self.radial_profiles(r);
        let y = real_sph_harm(self.index.angular(), theta, phi);
        let h = h_operator(self.index.angular(), theta, phi);
        SphericalVec {
            r: fr * y,
            theta: a * h.im + b * h.re,
            phi: a * h.re - b * h.im,
        }
    }

    /// Cartesian value at a Cartesian point inside the ball.
    pub fn eval_cartesian(&self, p: [f64; 3]) -> [f64; 3] {
        let (r, theta, phi) = crate::geometry::cartesian_to_spherical(p);
        self.eval(r, theta, phi).to_cartesian(theta, phi)
    }

    /// Φ_n values cached on the reference radial grid (empty for grad-div).
    pub fn phi_cache(&self) -> &[(f64, Complex64)] {
        &self.phi_cache
    }

    pub fn metadata(&self) -> ModeMetadata {
        ModeMetadata {
            version: 1,
            index: self.index,
            eigenvalue: self.eigenvalue,
            c: self.c,
            radius: self.radius,
        }
    }
}

/// Builds the grad-div eigenfield `q_κ` (requires `family == GradDiv`).
pub fn graddiv_mode(index: ModeIndex, radius: f64) -> Result<VectorMode> {
    if index.family != Family::GradDiv {
        return Err(Error::InvalidIndex(format!(
            "{index} is not a grad-div index"
        )));
    }
    VectorMode::build(index, radius)
}

/// Builds the curl eigenfield `u±_κ` (requires a curl family, n ≥ 1).
pub fn curl_mode(index: ModeIndex, radius: f64) -> Result<VectorMode> {
    if index.family == Family::GradDiv {
        return Err(Error::InvalidIndex(format!("{index} is not a curl index")));
    }
    VectorMode::build(index, radius)
}

/// Unit-norm scalar eigenfunction `c ψ_n(σ r) Y_n^k`; Dirichlet modes use
/// `σ = ρ_{n,m}/R` (zero boundary value), Neumann modes `σ = α_{n,m}/R`
/// (zero normal derivative).
#[derive(Clone, Copy, Debug)]
pub struct ScalarMode {
    pub n: u32,
    pub m: u32,
    pub k: i32,
    /// Radial frequency σ (the eigenvalue of −Δ is σ²).
    pub sigma: f64,
    pub c: f64,
    pub radius: f64,
}

impl ScalarMode {
    pub fn eval(&self, r: f64, theta: f64, phi: f64) -> f64 {
        self.c
            * psi(self.n, self.sigma * r)
            * real_sph_harm(AngularIndex { n: self.n, k: self.k }, theta, phi)
    }
}

fn scalar_mode(n: u32, m: u32, k: i32, sigma: f64, radius: f64) -> ScalarMode {
    let (iy, _) = angular_norms(AngularIndex { n, k });
    let (x, w) = gauss64();
    let half = 0.5 * radius;
    let terms: Vec<f64> = x
        .iter()
        .zip(w)
        .map(|(&t, &wi)| {
            let r = half * (t + 1.0);
            half * wi * r * r * psi(n, sigma * r).powi(2)
        })
        .collect();
    let norm2 = pairwise_sum(&terms) * iy;
    ScalarMode {
        n,
        m,
        k,
        sigma,
        c: 1.0 / norm2.sqrt(),
        radius,
    }
}

/// Scalar Dirichlet eigenfunction: `-Δv = (ρ_{n,m}/R)² v`, `v|_{r=R} = 0`.
pub fn scalar_dirichlet_mode(n: u32, m: u32, k: i32, radius: f64) -> Result<ScalarMode> {
    AngularIndex::new(n, k)?;
    let rho = zeros_psi(n, m as usize)?[m as usize - 1];
    Ok(scalar_mode(n, m, k, rho / radius, radius))
}

/// Scalar Neumann eigenfunction: `-Δg = (α_{n,m}/R)² g`, `∂_r g|_{r=R} = 0`.
pub fn scalar_neumann_mode(n: u32, m: u32, k: i32, radius: f64) -> Result<ScalarMode> {
    AngularIndex::new(n, k)?;
    let alpha = zeros_psi_prime(n, m as usize)?[m as usize - 1];
    Ok(scalar_mode(n, m, k, alpha / radius, radius))
}
