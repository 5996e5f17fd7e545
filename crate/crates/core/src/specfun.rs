//! The radial functions psi_n, their zeros, associated Legendre functions,
//! real spherical harmonics and the H-operator.
//!
//! psi_n(z) = sqrt(pi/2z) J_{n+1/2}(z) is the spherical Bessel function of
//! the first kind; its positive zeros rho_{n,m} and the zeros alpha_{n,m}
//! of psi_n' generate the curl and grad-div spectra on the ball.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Residual bound every tabulated zero must satisfy.
pub const ZERO_RESIDUAL: f64 = 1e-12;

/// psi_n(z); total on finite inputs, psi_n(0) = delta_{n0}.
pub fn psi(n: u32, z: f64) -> f64 {
    if z == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let az = z.abs();
    let parity = if n % 2 == 1 && z < 0.0 { -1.0 } else { 1.0 };
    let v = if n == 0 {
        psi0(az)
    } else if n == 1 {
        psi1(az)
    } else if az >= n as f64 {
        psi_upward(n, az)
    } else {
        psi_miller(n, az)
    };
    parity * v
}

/// d psi_n / dz.
pub fn psi_prime(n: u32, z: f64) -> f64 {
    if n == 0 {
        return -psi(1, z);
    }
    if z == 0.0 {
        return if n == 1 { 1.0 / 3.0 } else { 0.0 };
    }
    psi(n - 1, z) - (n + 1) as f64 / z * psi(n, z)
}

/// d^2 psi_n / dz^2 from the radial equation
/// psi'' = -(2/z) psi' - (1 - n(n+1)/z^2) psi.
pub fn psi_second(n: u32, z: f64) -> f64 {
    if z == 0.0 {
        // series limit: psi_n ~ z^n/(2n+1)!!
        return match n {
            0 => -1.0 / 3.0,
            2 => 2.0 / 15.0,
            _ => 0.0,
        };
    }
    let nn = (n * (n + 1)) as f64;
    -(2.0 / z) * psi_prime(n, z) - (1.0 - nn / (z * z)) * psi(n, z)
}

fn psi0(z: f64) -> f64 {
    z.sin() / z
}

fn psi1(z: f64) -> f64 {
    if z < 0.5 {
        // sin z / z^2 - cos z / z cancels badly near 0
        let z2 = z * z;
        z / 3.0
            * (1.0 - z2 / 10.0 * (1.0 - z2 / 28.0 * (1.0 - z2 / 54.0 * (1.0 - z2 / 88.0))))
    } else {
        (z.sin() / z - z.cos()) / z
    }
}

fn psi_upward(n: u32, z: f64) -> f64 {
    let mut pm = psi0(z);
    let mut p = psi1(z);
    for m in 1..n {
        let next = (2 * m + 1) as f64 / z * p - pm;
        pm = p;
        p = next;
    }
    p
}

/// Downward (Miller) recurrence, used where upward recurrence is unstable
/// (z below the order).
fn psi_miller(n: u32, z: f64) -> f64 {
    let start = n as usize + 50;
    let mut fp = 0.0_f64; // f_{m+1}
    let mut f = 1e-280_f64; // f_m
    let mut at_n = 0.0_f64;
    let mut at_1 = 0.0_f64;
    let mut at_0 = 0.0_f64;
    for m in (1..=start).rev() {
        let fm1 = (2 * m + 1) as f64 / z * f - fp;
        fp = f;
        f = fm1;
        if m - 1 == n as usize {
            at_n = f;
        }
        if m - 1 == 1 {
            at_1 = f;
        }
        if m - 1 == 0 {
            at_0 = f;
        }
        if f.abs() > 1e250 {
            let s = 1e-250;
            f *= s;
            fp *= s;
            at_n *= s;
            at_1 *= s;
            at_0 *= s;
        }
    }
    let (exact, raw) = if at_0.abs() >= at_1.abs() {
        (psi0(z), at_0)
    } else {
        (psi1(z), at_1)
    };
    at_n * (exact / raw)
}

fn zero_search_ceiling(n: u32, count: usize) -> f64 {
    (count as f64 + n as f64 / 2.0 + 3.0) * PI + n as f64
}

/// First `count` positive zeros of psi_n, each polished to residual <= 1e-14.
pub fn zeros_psi(n: u32, count: usize) -> Result<Vec<f64>> {
    let start = n as f64 + 1e-9;
    find_zeros(
        n,
        count,
        start,
        zero_search_ceiling(n, count),
        |z| psi(n, z),
        |z| psi_prime(n, z),
    )
}

/// First `count` positive zeros of psi_n' (z = 0 excluded).
pub fn zeros_psi_prime(n: u32, count: usize) -> Result<Vec<f64>> {
    // the first extremum of psi_n lies above n as well
    let start = n as f64 + 1e-9;
    find_zeros(
        n,
        count,
        start,
        zero_search_ceiling(n, count),
        |z| psi_prime(n, z),
        |z| psi_second(n, z),
    )
}

fn find_zeros<F, D>(
    n: u32,
    count: usize,
    start: f64,
    ceiling: f64,
    f: F,
    df: D,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let step = (PI / 4.0).min(PI / (2 * n + 2) as f64);
    let mut zeros = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a);
    while zeros.len() < count {
        let b = a + step;
        if b > ceiling {
            return Err(Error::SearchCeiling {
                n,
                requested: count,
                ceiling,
            });
        }
        let fb = f(b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(refine_zero(a, b, &f, &df));
        }
        a = b;
        fa = fb;
    }
    zeros.truncate(count);
    Ok(zeros)
}

/// Bisection into a tight bracket, then bracket-safe Newton polish.
fn refine_zero<F, D>(mut a: f64, mut b: f64, f: &F, df: &D) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut fa = f(a);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if b - a <= 1e-13 * b.max(1.0) {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..4 {
        let fx = f(x);
        let dfx = df(x);
        if dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if next < a || next > b || !next.is_finite() {
            break;
        }
        if (next - x).abs() <= f64::EPSILON * x.abs() {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Which function a zero table holds roots of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroFamily {
    #[serde(rename = "psi")]
    PsiZeros,
    #[serde(rename = "psi-prime")]
    PsiPrimeZeros,
}

/// Cached positive zeros rho_{n,m} of psi_n or alpha_{n,m} of psi_n'.
/// Built once, then frozen; dimensionless (independent of the ball radius).
#[derive(Clone, Debug)]
pub struct ZeroTable {
    family: ZeroFamily,
    entries: BTreeMap<(u32, u32), f64>,
}

#[derive(Serialize, Deserialize)]
struct ZeroTableFile {
    version: u32,
    family: ZeroFamily,
    entries: Vec<ZeroEntry>,
}

#[derive(Serialize, Deserialize)]
struct ZeroEntry {
    n: u32,
    m: u32,
    z: f64,
}

impl ZeroTable {
    /// Tabulates zeros for n = 0..=n_max, m = 1..=m_max.
    pub fn build(family: ZeroFamily, n_max: u32, m_max: u32) -> Result<ZeroTable> {
        let mut entries = BTreeMap::new();
        for n in 0..=n_max {
            let zs = match family {
                ZeroFamily::PsiZeros => zeros_psi(n, m_max as usize)?,
                ZeroFamily::PsiPrimeZeros => zeros_psi_prime(n, m_max as usize)?,
            };
            for (i, z) in zs.iter().enumerate() {
                let residual = match family {
                    ZeroFamily::PsiZeros => psi(n, *z),
                    ZeroFamily::PsiPrimeZeros => psi_prime(n, *z),
                };
                if residual.abs() > ZERO_RESIDUAL {
                    return Err(Error::InvalidIndex(format!(
                        "zero refinement failed for n = {n}, m = {}: residual {residual:e}",
                        i + 1
                    )));
                }
                entries.insert((n, i as u32 + 1), *z);
            }
        }
        Ok(ZeroTable { family, entries })
    }

    pub fn family(&self) -> ZeroFamily {
        self.family
    }

    pub fn get(&self, n: u32, m: u32) -> Option<f64> {
        self.entries.get(&(n, m)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.entries.iter().map(|(&(n, m), &z)| (n, m, z))
    }

    pub fn to_json(&self) -> String {
        let file = ZeroTableFile {
            version: 1,
            family: self.family,
            entries: self
                .entries
                .iter()
                .map(|(&(n, m), &z)| ZeroEntry { n, m, z })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("zero table serializes")
    }

    pub fn from_json(s: &str) -> Result<ZeroTable> {
        let file: ZeroTableFile = serde_json::from_str(s)?;
        Ok(ZeroTable {
            family: file.family,
            entries: file
                .entries
                .into_iter()
                .map(|e| ((e.n, e.m), e.z))
                .collect(),
        })
    }
}

/// Angular index (degree n, order k) of a real spherical harmonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngularIndex {
    pub n: u32,
    pub k: i32,
}

impl AngularIndex {
    pub fn new(n: u32, k: i32) -> Result<AngularIndex> {
        if k.unsigned_abs() > n {
            return Err(Error::InvalidIndex(format!(
                "|k| = {} exceeds degree n = {n}",
                k.unsigned_abs()
            )));
        }
        Ok(AngularIndex { n, k })
    }
}

/// Ferrers associated Legendre function P_n^k(x), unnormalized, without the
/// Condon-Shortley phase; 0 <= k <= n.
pub fn legendre_p(n: u32, k: u32, x: f64) -> f64 {
    // sqrt(1-x²) loses relative accuracy near the poles; trig callers
    // should use legendre_ps with the exact sine
    legendre_ps(n, k, x, (1.0 - x * x).max(0.0).sqrt())
}

fn legendre_ps(n: u32, k: u32, x: f64, s: f64) -> f64 {
    debug_assert!(k <= n);
    let mut pkk = 1.0;
    for i in 1..=k {
        pkk *= (2 * i - 1) as f64 * s;
    }
    if n == k {
        return pkk;
    }
    let mut pm = pkk;
    let mut p = (2 * k + 1) as f64 * x * pkk;
    for m in (k + 2)..=n {
        let next = ((2 * m - 1) as f64 * x * p - (m + k - 1) as f64 * pm) / (m - k) as f64;
        pm = p;
        p = next;
    }
    p
}

/// d/dtheta P_n^k(cos theta), away from the poles, via
/// (1-x^2) dP/dx = (n+k) P_{n-1}^k - n x P_n^k.
fn legendre_p_dtheta(n: u32, k: u32, theta: f64) -> f64 {
    let x = theta.cos();
    let s = theta.sin();
    let prev = if k <= n.saturating_sub(1) && n >= 1 {
        legendre_ps(n - 1, k, x, s)
    } else {
        0.0
    };
    -((n + k) as f64 * prev - n as f64 * x * legendre_ps(n, k, x, s)) / s
}

/// Real spherical harmonic in the unnormalized convention:
/// P_n^k(cos theta) cos(k phi) for k >= 0, P_n^|k|(cos theta) sin(|k| phi)
/// for k < 0.
pub fn real_sph_harm(idx: AngularIndex, theta: f64, phi: f64) -> f64 {
    let ka = idx.k.unsigned_abs();
    let p = legendre_p(idx.n, ka, theta.cos());
    if idx.k >= 0 {
        p * (ka as f64 * phi).cos()
    } else {
        p * (ka as f64 * phi).sin()
    }
}

const POLE_EPS: f64 = 1e-12;

/// H Y_n^k = ((1/sin theta) d/dphi + i d/dtheta) Y_n^k, from analytic
/// recurrences; at the poles the analytic limit is returned (zero unless
/// |k| = 1).
pub fn h_operator(idx: AngularIndex, theta: f64, phi: f64) -> Complex64 {
    let n = idx.n;
    let ka = idx.k.unsigned_abs();
    let s = theta.sin();
    let (p_over_s_times_k, dp) = if s.abs() < POLE_EPS || theta <= 0.0 || theta >= PI {
        if ka != 1 {
            return Complex64::new(0.0, 0.0);
        }
        let l = (n * (n + 1)) as f64 / 2.0;
        if theta < PI / 2.0 {
            (l, l)
        } else {
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            (sign * l, -sign * l)
        }
    } else {
        let p = legendre_ps(n, ka, theta.cos(), s);
        (ka as f64 * p / s, legendre_p_dtheta(n, ka, theta))
    };
    let kphi = ka as f64 * phi;
    if idx.k >= 0 {
        Complex64::new(-p_over_s_times_k * kphi.sin(), dp * kphi.cos())
    } else {
        Complex64::new(p_over_s_times_k * kphi.cos(), dp * kphi.sin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent bisection oracle on an explicit closed form.
    fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
        let mut fa = f(a);
        assert!(fa * f(b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fa * fm <= 0.0 {
                b = m;
            } else {
                a = m;
                fa = f(a);
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn psi_at_zero_and_pi() {
        assert_eq!(psi(0, 0.0), 1.0);
        assert_abs_diff_eq!(psi(0, PI), 0.0, epsilon = 1e-15);
        assert_eq!(psi(3, 0.0), 0.0);
    }

    #[test]
    fn psi1_vanishes_at_oracle_root() {
        // root of sin z / z^2 - cos z / z via bisection
        let oracle = bisect(|z: f64| z.sin() / (z * z) - z.cos() / z, 4.0, 5.0);
        assert_abs_diff_eq!(oracle, 4.493409457909064, epsilon = 1e-12);
        assert!(psi(1, 4.493409457909064).abs() <= 1e-12);
    }

    #[test]
    fn psi_parity() {
        for n in 0..6u32 {
            for &z in &[0.3, 1.7, 9.2] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(psi(n, -z), sign * psi(n, z), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn psi_against_euler_closed_forms() {
        // small-n closed forms from (-z)^n (d/zdz)^n (sin z / z)
        for &z in &[0.2f64, 0.9, 3.3, 17.0, 120.0] {
            let j0 = z.sin() / z;
            let j1 = z.sin() / (z * z) - z.cos() / z;
            let j2 = (3.0 / (z * z) - 1.0) * z.sin() / z - 3.0 * z.cos() / (z * z);
            assert_abs_diff_eq!(psi(0, z), j0, epsilon = 1e-14 * j0.abs().max(1e-3));
            assert_abs_diff_eq!(psi(1, z), j1, epsilon = 1e-14);
            assert_abs_diff_eq!(psi(2, z), j2, epsilon = 1e-13);
        }
    }

    #[test]
    fn psi_recurrence_consistency() {
        // psi_{n-1} + psi_{n+1} = (2n+1) psi_n / z
        for n in 1..40u32 {
            for i in 0..25 {
                let z = 0.1 + 99.9 * (i as f64 + 0.5) / 25.0;
                let lhs = psi(n - 1, z) + psi(n + 1, z);
                let rhs = (2 * n + 1) as f64 / z * psi(n, z);
                let scale = lhs.abs().max(rhs.abs()).max(1e-300);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * scale,
                    "n={n} z={z} lhs={lhs:e} rhs={rhs:e}"
                );
            }
        }
    }

    #[test]
    fn psi_prime_identity_with_psi1() {
        // psi_0' = -psi_1 on 200 samples of (0, 60]
        for i in 1..=200 {
            let z = 60.0 * i as f64 / 200.0;
            assert_abs_diff_eq!(psi_prime(0, z) + psi(1, z), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn psi_prime_values() {
        assert_abs_diff_eq!(psi_prime(0, PI), -1.0 / PI, epsilon = 1e-14);
        assert_eq!(psi_prime(0, 0.0), 0.0);
        assert_abs_diff_eq!(psi_prime(1, 0.0), 1.0 / 3.0, epsilon = 1e-15);
        // central finite difference oracle
        let h = 1e-6;
        let fd = (psi(2, 1.3 + h) - psi(2, 1.3 - h)) / (2.0 * h);
        assert_abs_diff_eq!(psi_prime(2, 1.3), fd, epsilon = 1e-8);
    }

    #[test]
    fn zeros_of_psi0_are_multiples_of_pi() {
        let zs = zeros_psi(0, 3).unwrap();
        for (i, z) in zs.iter().enumerate() {
            assert_abs_diff_eq!(*z, (i + 1) as f64 * PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn first_zero_of_psi1() {
        let zs = zeros_psi(1, 1).unwrap();
        assert_abs_diff_eq!(zs[0], 4.493409457909064, epsilon = 1e-12);
    }

    #[test]
    fn psi_prime_zeros() {
        // psi_0' = -psi_1, so alpha_{0,m} = rho_{1,m}
        let a = zeros_psi_prime(0, 1).unwrap();
        assert_abs_diff_eq!(a[0], 4.493409457909064, epsilon = 1e-12);

        // oracle: bisection on the closed form of psi_1'
        let p1p = |z: f64| 2.0 * z.cos() / (z * z) - 2.0 * z.sin() / (z * z * z) + z.sin() / z;
        let oracle = bisect(p1p, 1.5, 3.0);
        let a1 = zeros_psi_prime(1, 1).unwrap();
        assert_abs_diff_eq!(a1[0], oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(a1[0], 2.0815759778181, epsilon = 1e-10);

        for n in 0..5u32 {
            for z in zeros_psi_prime(n, 4).unwrap() {
                assert!(psi_prime(n, z).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn zero_tables_interlace() {
        let mut tables = Vec::new();
        for n in 0..=11u32 {
            tables.push(zeros_psi(n, 10).unwrap());
        }
        for n in 0..=10usize {
            for m in 0..10usize {
                assert!(tables[n][m] < tables[n + 1][m]);
                if m + 1 < 10 {
                    assert!(tables[n + 1][m] < tables[n][m + 1]);
                }
            }
        }
    }

    #[test]
    fn zero_table_roundtrip_and_residuals() {
        let t = ZeroTable::build(ZeroFamily::PsiZeros, 4, 3).unwrap();
        for (n, _, z) in t.entries() {
            assert!(psi(n, z).abs() <= ZERO_RESIDUAL);
        }
        let t2 = ZeroTable::from_json(&t.to_json()).unwrap();
        assert_eq!(t2.to_json(), t.to_json());

        let tp = ZeroTable::build(ZeroFamily::PsiPrimeZeros, 3, 2).unwrap();
        for (n, _, z) in tp.entries() {
            assert!(psi_prime(n, z).abs() <= ZERO_RESIDUAL);
        }
    }

    #[test]
    fn zero_tables_are_reproducible() {
        let a = ZeroTable::build(ZeroFamily::PsiZeros, 6, 6).unwrap();
        let b = ZeroTable::build(ZeroFamily::PsiZeros, 6, 6).unwrap();
        for ((n, m, za), (_, _, zb)) in a.entries().zip(b.entries()) {
            assert_eq!(za.to_bits(), zb.to_bits(), "n={n} m={m}");
        }
    }

    #[test]
    fn sph_harm_low_orders() {
        let idx00 = AngularIndex::new(0, 0).unwrap();
        let idx10 = AngularIndex::new(1, 0).unwrap();
        for &theta in &[0.1, 1.0, 2.7] {
            for &phi in &[0.0, 2.0, 5.5] {
                assert_eq!(real_sph_harm(idx00, theta, phi), 1.0);
                assert_abs_diff_eq!(
                    real_sph_harm(idx10, theta, phi),
                    theta.cos(),
                    epsilon = 1e-15
                );
            }
        }
        // P_1^1 = sin theta, negative k picks the sine branch
        let idx1m1 = AngularIndex::new(1, -1).unwrap();
        assert_abs_diff_eq!(
            real_sph_harm(idx1m1, 0.8, 0.3),
            0.8f64.sin() * 0.3f64.sin(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn h_operator_low_orders() {
        let idx00 = AngularIndex::new(0, 0).unwrap();
        let idx10 = AngularIndex::new(1, 0).unwrap();
        for &theta in &[0.2, 1.3] {
            for &phi in &[0.4, 3.0] {
                assert_eq!(h_operator(idx00, theta, phi), Complex64::new(0.0, 0.0));
                let h = h_operator(idx10, theta, phi);
                assert_abs_diff_eq!(h.re, 0.0, epsilon = 1e-15);
                assert_abs_diff_eq!(h.im, -theta.sin(), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn h_operator_matches_finite_differences() {
        // 4th-order central differences of the harmonic itself
        let d4 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
            (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
        };
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let h = 1e-4;
        for _ in 0..100 {
            let theta = 0.3 + 2.5 * next();
            let phi = 6.2 * next();
            for &(n, k) in &[(1u32, 1i32), (2, -1), (3, 2), (4, -3), (5, 0)] {
                let idx = AngularIndex::new(n, k).unwrap();
                let dphi = d4(&|p| real_sph_harm(idx, theta, p), phi, h);
                let dth = d4(&|t| real_sph_harm(idx, t, phi), theta, h);
                let hv = h_operator(idx, theta, phi);
                let scale = hv.norm().max(1.0);
                assert!(
                    (hv.re - dphi / theta.sin()).abs() <= 1e-7 * scale,
                    "re n={n} k={k}"
                );
                assert!((hv.im - dth).abs() <= 1e-7 * scale, "im n={n} k={k}");
            }
        }
    }

    #[test]
    fn h_operator_pole_limits() {
        // finite for |k| = 1, zero otherwise
        let idx = AngularIndex::new(3, 1).unwrap();
        let at_pole = h_operator(idx, 0.0, 0.7);
        let near = h_operator(idx, 1e-7, 0.7);
        assert!((at_pole.re - near.re).abs() <= 1e-5);
        assert!((at_pole.im - near.im).abs() <= 1e-5);
        let idx2 = AngularIndex::new(3, 2).unwrap();
        assert_eq!(h_operator(idx2, 0.0, 0.7), Complex64::new(0.0, 0.0));
        let near2 = h_operator(idx2, 1e-7, 0.7);
        assert!(near2.norm() <= 1e-5);
        // south pole
        let near_s = h_operator(idx, PI - 1e-7, 0.7);
        let at_s = h_operator(idx, PI, 0.7);
        assert!((at_s.re - near_s.re).abs() <= 1e-5);
        assert!((at_s.im - near_s.im).abs() <= 1e-5);
    }
}
