//! Product quadrature on the solid ball and on the unit sphere.
//!
//! Radial direction: Gauss–Legendre on `(0, R)` with the `r²` Jacobian folded
//! into the weights. Angular directions: Gauss–Legendre in `cos θ` crossed
//! with a uniform (trapezoidal) grid in `φ`, which is spectrally accurate for
//! the trigonometric `φ`-dependence of every integrand we meet.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration from the Chebyshev-like initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre polynomial and derivative at z by recurrence
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Quadrature over the unit sphere; weights sum to `4π`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    /// Colatitudes (Gauss nodes in `cos θ`, mapped back).
    pub thetas: Vec<f64>,
    /// Weight per colatitude row (Gauss weight, `φ` weight folded in).
    pub theta_weights: Vec<f64>,
    /// Uniform longitudes `2π j / n_phi`.
    pub phis: Vec<f64>,
}

impl SphereQuadrature {
    pub fn build(n_theta: usize, n_phi: usize) -> SphereQuadrature {
        assert!(n_theta >= 1 && n_phi >= 1);
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        SphereQuadrature {
            thetas: x.iter().map(|&c| c.clamp(-1.0, 1.0).acos()).collect(),
            theta_weights: w.iter().map(|&wi| wi * dphi).collect(),
            phis: (0..n_phi).map(|j| dphi * j as f64).collect(),
        }
    }

    /// `∫ f dΩ` by the product rule.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut terms = Vec::with_capacity(self.thetas.len() * self.phis.len());
        for (it, &theta) in self.thetas.iter().enumerate() {
            let wt = self.theta_weights[it];
            for &phi in &self.phis {
                terms.push(wt * f(theta, phi));
            }
        }
        pairwise_sum(&terms)
    }
}

/// Node of a ball quadrature: position in spherical coordinates plus the
/// volume weight (the `r² sin θ` Jacobian folded in).
#[derive(Clone, Copy, Debug)]
pub struct BallNode {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

/// Tensor-product quadrature over the ball `|x| < R`.
///
/// The grid is kept separable (`radii × thetas × phis`) so that integrals of
/// products of radial profiles and spherical harmonics can be factored.
#[derive(Clone, Debug)]
pub struct BallQuadrature {
    pub radius: f64,
    pub radii: Vec<f64>,
    /// Radial weights including the `r²` Jacobian; they sum to `R³/3`.
    pub radial_weights: Vec<f64>,
    pub sphere: SphereQuadrature,
}

impl BallQuadrature {
    pub fn build(radius: f64, n_r: usize, n_theta: usize, n_phi: usize) -> BallQuadrature {
        assert!(radius > 0.0);
        let (x, w) = gauss_legendre(n_r);
        let half = 0.5 * radius;
        let radii: Vec<f64> = x.iter().map(|&t| half * (t + 1.0)).collect();
        let radial_weights = radii
            .iter()
            .zip(&w)
            .map(|(&r, &wi)| half * wi * r * r)
            .collect();
        BallQuadrature {
            radius,
            radii,
            radial_weights,
            sphere: SphereQuadrature::build(n_theta, n_phi),
        }
    }

    pub fn orders(&self) -> (usize, usize, usize) {
        (
            self.radii.len(),
            self.sphere.thetas.len(),
            self.sphere.phis.len(),
        )
    }

    /// Iterates all nodes row-major in `(r, θ, φ)`.
    pub fn nodes(&self) -> impl Iterator<Item = BallNode> + '_ {
        self.radii.iter().zip(&self.radial_weights).flat_map(
            move |(&r, &wr)| {
                self.sphere
                    .thetas
                    .iter()
                    .zip(&self.sphere.theta_weights)
                    .flat_map(move |(&theta, &wt)| {
                        self.sphere.phis.iter().map(move |&phi| BallNode {
                            r,
                            theta,
                            phi,
                            weight: wr * wt,
                        })
                    })
            },
        )
    }

    /// `∫_B f dV` for a scalar integrand given in spherical coordinates.
    pub fn integrate<F: FnMut(f64, f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut terms = Vec::with_capacity(self.node_count());
        for node in self.nodes() {
            terms.push(node.weight * f(node.r, node.theta, node.phi));
        }
        pairwise_sum(&terms)
    }

    pub fn node_count(&self) -> usize {
        self.radii.len() * self.sphere.thetas.len() * self.sphere.phis.len()
    }
}

/// Deterministic pairwise (cascade) summation; error grows like `log n`
/// rather than `n`, and the result is independent of chunking choices made
/// elsewhere.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        2 => terms[0] + terms[1],
        n if n <= 16 => {
            let mut s = 0.0;
            for &t in terms {
                s += t;
            }
            s
        }
        n => {
            let mid = n / 2;
            pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
        }
    }
}
