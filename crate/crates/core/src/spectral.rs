//! Fourier analysis in the combined eigenbasis: coefficient extraction,
//! potential/solenoidal splitting, Parseval bookkeeping, and the
//! eigenvalue-weighted Sobolev diagnostic.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ballquad::{pairwise_sum, BallQuadrature, SphereQuadrature};
use crate::eigenbasis::{eigenvalue_of, Family, ModeIndex, VectorMode};
use crate::geometry::SphericalVec;
use crate::specfun::{h_operator, real_sph_harm, zeros_psi, zeros_psi_prime, AngularIndex};
use crate::Result;

/// Truncation lattice: all `(n, m)` with `ρ_{n,m} < cutoff` and
/// `α_{n,m} < cutoff`, ordered by `(n, m)`.
pub fn lattice(cutoff: f64) -> Result<Vec<(u32, u32)>> {
    assert!(cutoff > 0.0);
    // ρ_{n,m} ≥ mπ bounds the radial index
    let m_cap = (cutoff / std::f64::consts::PI).ceil() as usize + 1;
    let mut out = Vec::new();
    let mut n = 0u32;
    loop {
        let rho = zeros_psi(n, m_cap)?;
        if rho[0] >= cutoff {
            break;
        }
        let alpha = zeros_psi_prime(n, m_cap)?;
        for m in 0..m_cap {
            if rho[m] < cutoff && alpha[m] < cutoff {
                out.push((n, m as u32 + 1));
            }
        }
        n += 1;
    }
    Ok(out)
}

/// All eigenfields of the truncation: grad-div modes for every lattice pair
/// (n ≥ 0) and both curl families for n ≥ 1, over all orders |k| ≤ n.
/// Mode order is fixed: lattice order, then k ascending, then
/// grad-div / curl-plus / curl-minus.
pub struct Basis {
    pub radius: f64,
    pub cutoff: f64,
    pub modes: Vec<VectorMode>,
    positions: BTreeMap<ModeIndex, usize>,
}

impl Basis {
    pub fn build(radius: f64, cutoff: f64) -> Result<Basis> {
        let mut modes = Vec::new();
        for (n, m) in lattice(cutoff)? {
            for k in -(n as i32)..=(n as i32) {
                modes.push(VectorMode::build(
                    ModeIndex::new(Family::GradDiv, n, m, k)?,
                    radius,
                )?);
                if n >= 1 {
                    modes.push(VectorMode::build(
                        ModeIndex::new(Family::CurlPlus, n, m, k)?,
                        radius,
                    )?);
                    modes.push(VectorMode::build(
                        ModeIndex::new(Family::CurlMinus, n, m, k)?,
                        radius,
                    )?);
                }
            }
        }
        let positions = modes
            .iter()
            .enumerate()
            .map(|(i, m)| (m.index, i))
            .collect();
        Ok(Basis {
            radius,
            cutoff,
            modes,
            positions,
        })
    }

    pub fn position(&self, index: ModeIndex) -> Option<usize> {
        self.positions.get(&index).copied()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Coefficients of a field in the combined basis. Grad-div entries form the
/// potential part, curl entries the solenoidal part.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCoefficients {
    pub radius: f64,
    pub cutoff: f64,
    /// Quadrature orders `(n_r, n_θ, n_φ)` the coefficients were computed
    /// with (provenance only).
    pub quadrature: (usize, usize, usize),
    entries: BTreeMap<ModeIndex, f64>,
}

#[derive(Serialize, Deserialize)]
struct CoeffFile {
    version: u32,
    radius: f64,
    cutoff: f64,
    quadrature: QuadratureOrders,
    entries: Vec<CoeffEntry>,
}

#[derive(Serialize, Deserialize)]
struct QuadratureOrders {
    nr: usize,
    ntheta: usize,
    nphi: usize,
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    family: Family,
    n: u32,
    m: u32,
    k: i32,
    value: f64,
}

impl SpectralCoefficients {
    pub fn empty(radius: f64, cutoff: f64, quadrature: (usize, usize, usize)) -> Self {
        SpectralCoefficients {
            radius,
            cutoff,
            quadrature,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, index: ModeIndex) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, index: ModeIndex, value: f64) {
        self.entries.insert(index, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, f64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Σ coeff² (the Parseval sum of the truncation).
    pub fn norm_sq(&self) -> f64 {
        let terms: Vec<f64> = self.entries.values().map(|v| v * v).collect();
        pairwise_sum(&terms)
    }

    /// Splits into (potential part, solenoidal part): grad-div entries vs
    /// curl entries.
    pub fn split(&self) -> (SpectralCoefficients, SpectralCoefficients) {
        let mut a = SpectralCoefficients::empty(self.radius, self.cutoff, self.quadrature);
        let mut b = a.clone();
        for (idx, v) in self.iter() {
            if idx.family == Family::GradDiv {
                a.set(idx, v);
            } else {
                b.set(idx, v);
            }
        }
        (a, b)
    }

    /// Σ ν_κ^{2s} a_κ² + Σ λ_κ^{2s} (b⁺_κ² + b⁻_κ²): finite iff the
    /// truncated field would lie in the order-s eigenvalue-weighted space;
    /// s = 0 reduces to the Parseval sum.
    pub fn sobolev_diagnostic(&self, s: u32) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.entries.len());
        for (idx, v) in self.iter() {
            let ev = eigenvalue_of(idx, self.radius)?.abs();
            terms.push(ev.powi(2 * s as i32) * v * v);
        }
        Ok(pairwise_sum(&terms))
    }

    pub fn to_json(&self) -> String {
        let file = CoeffFile {
            version: 1,
            radius: self.radius,
            cutoff: self.cutoff,
            quadrature: QuadratureOrders {
                nr: self.quadrature.0,
                ntheta: self.quadrature.1,
                nphi: self.quadrature.2,
            },
            entries: self
                .entries
                .iter()
                .map(|(&idx, &value)| CoeffEntry {
                    family: idx.family,
                    n: idx.n,
                    m: idx.m,
                    k: idx.k,
                    value,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("coefficients serialize")
    }

    pub fn from_json(s: &str) -> Result<SpectralCoefficients> {
        let file: CoeffFile = serde_json::from_str(s)?;
        let mut c = SpectralCoefficients::empty(
            file.radius,
            file.cutoff,
            (
                file.quadrature.nr,
                file.quadrature.ntheta,
                file.quadrature.nphi,
            ),
        );
        for e in file.entries {
            if !e.value.is_finite() {
                return Err(crate::Error::InvalidIndex(format!(
                    "non-finite coefficient for ({},{},{})",
                    e.n, e.m, e.k
                )));
            }
            c.set(ModeIndex::new(e.family, e.n, e.m, e.k)?, e.value);
        }
        Ok(c)
    }
}

/// `Y` and `HY` tabulated on the sphere grid, row-major in `(θ, φ)`.
fn angular_tables(idx: AngularIndex, sphere: &SphereQuadrature) -> (Vec<f64>, Vec<Complex64>) {
    let mut y = Vec::with_capacity(sphere.thetas.len() * sphere.phis.len());
    let mut h = Vec::with_capacity(y.capacity());
    for &theta in &sphere.thetas {
        for &phi in &sphere.phis {
            y.push(real_sph_harm(idx, theta, phi));
            h.push(h_operator(idx, theta, phi));
        }
    }
    (y, h)
}

fn angular_weights(sphere: &SphereQuadrature) -> Vec<f64> {
    let mut w = Vec::with_capacity(sphere.thetas.len() * sphere.phis.len());
    for &wt in &sphere.theta_weights {
        for _ in 0..sphere.phis.len() {
            w.push(wt);
        }
    }
    w
}

/// Coefficients `(f, mode)` for every basis mode, by the tensor quadrature.
///
/// The field is sampled once per node; inner products then factor into
/// per-shell angular projections (shared across the three profile slots of
/// every mode with the same harmonic) times radial sums, so the cost is
/// `O(nodes · #harmonics + n_r · #modes)`.
pub fn analyze<F: FnMut(f64, f64, f64) -> SphericalVec>(
    mut f: F,
    basis: &Basis,
    q: &BallQuadrature,
) -> SpectralCoefficients {
    let njl = q.sphere.thetas.len() * q.sphere.phis.len();
    let nr = q.radii.len();
    let mut samples = Vec::with_capacity(nr * njl);
    for &r in &q.radii {
        for &theta in &q.sphere.thetas {
            for &phi in &q.sphere.phis {
                samples.push(f(r, theta, phi));
            }
        }
    }
    analyze_samples(&samples, basis, q)
}

/// [`analyze`] on field values already tabulated on the nodes of `q`,
/// row-major in `(r, θ, φ)`.
pub fn analyze_samples(
    samples: &[SphericalVec],
    basis: &Basis,
    q: &BallQuadrature,
) -> SpectralCoefficients {
    let njl = q.sphere.thetas.len() * q.sphere.phis.len();
    let nr = q.radii.len();
    assert_eq!(samples.len(), nr * njl);
    let wang = angular_weights(&q.sphere);

    let mut coeffs = SpectralCoefficients::empty(basis.radius, basis.cutoff, q.orders());
    // per-shell projections (FY, FA, FB) keyed by harmonic
    let mut proj: BTreeMap<(u32, i32), (Vec<f64>, Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut ybuf = vec![0.0; njl];
    let mut abuf = vec![0.0; njl];
    let mut bbuf = vec![0.0; njl];
    for mode in &basis.modes {
        let key = (mode.index.n, mode.index.k);
        let (fy, fa, fb) = proj.entry(key).or_insert_with(|| {
            let (y, h) = angular_tables(mode.index.angular(), &q.sphere);
            let mut fy = Vec::with_capacity(nr);
            let mut fa = Vec::with_capacity(nr);
            let mut fb = Vec::with_capacity(nr);
            for i in 0..nr {
                let shell = &samples[i * njl..(i + 1) * njl];
                for jl in 0..njl {
                    let v = shell[jl];
                    let w = wang[jl];
                    ybuf[jl] = w * v.r * y[jl];
                    abuf[jl] = w * (v.theta * h[jl].im + v.phi * h[jl].re);
                    bbuf[jl] = w * (v.theta * h[jl].re - v.phi * h[jl].im);
                }
                fy.push(pairwise_sum(&ybuf));
                fa.push(pairwise_sum(&abuf));
                fb.push(pairwise_sum(&bbuf));
            }
            (fy, fa, fb)
        });
        let terms: Vec<f64> = q
            .radii
            .iter()
            .zip(&q.radial_weights)
            .enumerate()
            .map(|(i, (&r, &wr))| {
                let (fr, a, b) = mode.radial_profiles(r);
                wr * (fr * fy[i] + a * fa[i] + b * fb[i])
            })
            .collect();
        coeffs.set(mode.index, pairwise_sum(&terms));
    }
    coeffs
}

/// Partial sum Σ coeff·mode at a single point.
pub fn synthesize(
    basis: &Basis,
    coeffs: &SpectralCoefficients,
    r: f64,
    theta: f64,
    phi: f64,
) -> SphericalVec {
    let mut acc = SphericalVec::ZERO;
    for mode in &basis.modes {
        let c = coeffs.get(mode.index);
        if c != 0.0 {
            acc = acc.add(&mode.eval(r, theta, phi).scaled(c));
        }
    }
    acc
}

/// Partial sum evaluated on every node of `q` (row-major in `(r, θ, φ)`),
/// sharing angular tables across modes; much faster than per-point
/// synthesis when the whole grid is needed.
pub fn synthesize_on_grid(
    basis: &Basis,
    coeffs: &SpectralCoefficients,
    q: &BallQuadrature,
) -> Vec<SphericalVec> {
    let njl = q.sphere.thetas.len() * q.sphere.phis.len();
    let nr = q.radii.len();
    let mut out = vec![SphericalVec::ZERO; nr * njl];
    let mut tables: BTreeMap<(u32, i32), (Vec<f64>, Vec<Complex64>)> = BTreeMap::new();
    for mode in &basis.modes {
        let c = coeffs.get(mode.index);
        if c == 0.0 {
            continue;
        }
        let (y, h) = tables
            .entry((mode.index.n, mode.index.k))
            .or_insert_with(|| angular_tables(mode.index.angular(), &q.sphere));
        for (i, &r) in q.radii.iter().enumerate() {
            let (fr, a, b) = mode.radial_profiles(r);
            let (fr, a, b) = (c * fr, c * a, c * b);
            let row = &mut out[i * njl..(i + 1) * njl];
            for jl in 0..njl {
                row[jl].r += fr * y[jl];
                row[jl].theta += a * h[jl].im + b * h[jl].re;
                row[jl].phi += a * h[jl].re - b * h[jl].im;
            }
        }
    }
    out
}

/// Gram matrix of the given modes under the tensor quadrature, via the same
/// radial × angular factorization as [`analyze`].
pub fn gram_matrix(modes: &[VectorMode], q: &BallQuadrature) -> Vec<Vec<f64>> {
    let nm = modes.len();
    let njl = q.sphere.thetas.len() * q.sphere.phis.len();
    let wang = angular_weights(&q.sphere);

    // unique harmonics and per-mode harmonic ids
    let mut harmonics: Vec<(u32, i32)> = Vec::new();
    let mut hid = Vec::with_capacity(nm);
    for mode in modes {
        let key = (mode.index.n, mode.index.k);
        let id = harmonics.iter().position(|&k| k == key).unwrap_or_else(|| {
            harmonics.push(key);
            harmonics.len() - 1
        });
        hid.push(id);
    }
    let tables: Vec<(Vec<f64>, Vec<Complex64>)> = harmonics
        .iter()
        .map(|&(n, k)| angular_tables(AngularIndex { n, k }, &q.sphere))
        .collect();

    // angular pair integrals ∫Y_u Y_v, ∫(Re/Im H products), ∫cross
    let na = harmonics.len();
    let mut iy = vec![vec![0.0; na]; na];
    let mut ih = vec![vec![0.0; na]; na];
    let mut ix = vec![vec![0.0; na]; na];
    let mut buf = vec![0.0; njl];
    for u in 0..na {
        for v in 0..na {
            let (yu, hu) = &tables[u];
            let (yv, hv) = &tables[v];
            for jl in 0..njl {
                buf[jl] = wang[jl] * yu[jl] * yv[jl];
            }
            iy[u][v] = pairwise_sum(&buf);
            for jl in 0..njl {
                buf[jl] = wang[jl] * (hu[jl].re * hv[jl].re + hu[jl].im * hv[jl].im);
            }
            ih[u][v] = pairwise_sum(&buf);
            for jl in 0..njl {
                buf[jl] = wang[jl] * (hu[jl].im * hv[jl].re - hu[jl].re * hv[jl].im);
            }
            ix[u][v] = pairwise_sum(&buf);
        }
    }

    // radial profiles on the grid
    let profiles: Vec<Vec<(f64, f64, f64)>> = modes
        .iter()
        .map(|m| q.radii.iter().map(|&r| m.radial_profiles(r)).collect())
        .collect();

    let mut g = vec![vec![0.0; nm]; nm];
    let nr = q.radii.len();
    let mut ry = vec![0.0; nr];
    let mut rh = vec![0.0; nr];
    let mut rx = vec![0.0; nr];
    for u in 0..nm {
        for v in u..nm {
            for i in 0..nr {
                let wr = q.radial_weights[i];
                let (fu, au, bu) = profiles[u][i];
                let (fv, av, bv) = profiles[v][i];
                ry[i] = wr * fu * fv;
                rh[i] = wr * (au * av + bu * bv);
                rx[i] = wr * (au * bv - bu * av);
            }
            let val = pairwise_sum(&ry) * iy[hid[u]][hid[v]]
                + pairwise_sum(&rh) * ih[hid[u]][hid[v]]
                + pairwise_sum(&rx) * ix[hid[u]][hid[v]];
            g[u][v] = val;
            if u != v {
                // the factorization is symmetric up to the sign of the
                // cross block, which integrates to zero for basis modes
                g[v][u] = val;
            }
        }
    }
    g
}
