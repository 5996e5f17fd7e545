//! Series resolvents in coefficient space: `rot u + λu = f` and
//! `∇div u + λu = f` with zero normal trace, including the resonant
//! (Fredholm) case.
//!
//! On the eigenbasis both operators act diagonally: `rot` multiplies a curl
//! coefficient by its signed eigenvalue and kills grad-div coefficients;
//! `∇div` multiplies a grad-div coefficient by `-ν²` and kills curl
//! coefficients. Solving is division mode-by-mode; resonance is a vanishing
//! denominator.

use std::collections::BTreeSet;

use crate::eigenbasis::{eigenvalue_of, Family, ModeIndex};
use crate::spectral::{lattice, SpectralCoefficients};
use crate::{Error, Result};

/// Scale-aware tolerance bases: resonance is declared when a denominator is
/// within `res_base·(1+|λ|)` of zero, and a resonant problem is compatible
/// when every blocked coefficient is within `compat_base·‖f‖`.
#[derive(Clone, Copy, Debug)]
pub struct ResolventTolerances {
    pub res_base: f64,
    pub compat_base: f64,
}

impl Default for ResolventTolerances {
    fn default() -> Self {
        ResolventTolerances {
            res_base: 1e-9,
            compat_base: 1e-8,
        }
    }
}

/// Outcome of a resolvent solve.
#[derive(Clone, Debug)]
pub struct ResolventReport {
    pub lambda: f64,
    pub resonant: bool,
    /// Kernel directions hit by λ (empty when not resonant); the solution
    /// is minimal-norm, i.e. zero along these, and any multiple of them may
    /// be added.
    pub offending_modes: Vec<ModeIndex>,
    /// max |blocked coefficient| (0 when not resonant).
    pub compatibility_residual: f64,
    pub solution: SpectralCoefficients,
}

/// Denominator of the mode equation `(A + λ) u_κ = f_κ`.
fn curl_denominator(idx: ModeIndex, lambda: f64, radius: f64) -> Result<f64> {
    Ok(match idx.family {
        Family::GradDiv => lambda,
        _ => lambda + eigenvalue_of(idx, radius)?,
    })
}

fn graddiv_denominator(idx: ModeIndex, lambda: f64, radius: f64) -> Result<f64> {
    Ok(match idx.family {
        Family::GradDiv => {
            let nu = eigenvalue_of(idx, radius)?;
            lambda - nu * nu
        }
        _ => lambda,
    })
}

fn solve_diagonal<D: Fn(ModeIndex, f64, f64) -> Result<f64>>(
    c_f: &SpectralCoefficients,
    lambda: f64,
    tol: &ResolventTolerances,
    denom: D,
) -> Result<ResolventReport> {
    if lambda == 0.0 {
        return Err(Error::LambdaZero);
    }
    let tol_res = tol.res_base * (1.0 + lambda.abs());
    let tol_compat = tol.compat_base * c_f.norm_sq().sqrt();
    // resonance is decided against the whole truncation, not just the modes
    // the right-hand side happens to load
    let mut modes: BTreeSet<ModeIndex> = c_f.iter().map(|(i, _)| i).collect();
    for (n, m) in lattice(c_f.cutoff)? {
        for k in -(n as i32)..=(n as i32) {
            modes.insert(ModeIndex::new(Family::GradDiv, n, m, k)?);
            if n >= 1 {
                modes.insert(ModeIndex::new(Family::CurlPlus, n, m, k)?);
                modes.insert(ModeIndex::new(Family::CurlMinus, n, m, k)?);
            }
        }
    }
    let mut solution = SpectralCoefficients::empty(c_f.radius, c_f.cutoff, c_f.quadrature);
    let mut offending = Vec::new();
    let mut residual = 0.0_f64;
    let entries: BTreeSet<ModeIndex> = c_f.iter().map(|(i, _)| i).collect();
    for &idx in &modes {
        let d = denom(idx, lambda, c_f.radius)?;
        if d.abs() <= tol_res {
            offending.push(idx);
            residual = residual.max(c_f.get(idx).abs());
            if entries.contains(&idx) {
                // minimal-norm solution: drop the kernel direction
                solution.set(idx, 0.0);
            }
        } else if entries.contains(&idx) {
            solution.set(idx, c_f.get(idx) / d);
        }
    }
    if residual > tol_compat {
        let modes = offending
            .iter()
            .copied()
            .filter(|&i| c_f.get(i).abs() > tol_compat)
            .collect();
        return Err(Error::Incompatible {
            lambda,
            residual,
            modes,
        });
    }
    Ok(ResolventReport {
        lambda,
        resonant: !offending.is_empty(),
        offending_modes: offending,
        compatibility_residual: residual,
        solution,
    })
}

/// Solves `rot u + λu = f` in coefficient space. Resonance occurs when
/// `λ = ∓λ_{n,m}` matches a curl eigenvalue present in the truncation;
/// compatible resonant problems return the minimal-norm solution.
pub fn solve_curl(
    c_f: &SpectralCoefficients,
    lambda: f64,
    tol: &ResolventTolerances,
) -> Result<ResolventReport> {
    solve_diagonal(c_f, lambda, tol, curl_denominator)
}

/// Solves `∇div u + λu = f` in coefficient space; with `∇div q = -ν²q` the
/// resonant set is `λ = ν_κ²`.
pub fn solve_graddiv(
    c_f: &SpectralCoefficients,
    lambda: f64,
    tol: &ResolventTolerances,
) -> Result<ResolventReport> {
    solve_diagonal(c_f, lambda, tol, graddiv_denominator)
}

/// Coefficients of `rot u + λu` given those of `u` (the forward operator of
/// [`solve_curl`]).
pub fn apply_curl_operator(c_u: &SpectralCoefficients, lambda: f64) -> Result<SpectralCoefficients> {
    let mut out = SpectralCoefficients::empty(c_u.radius, c_u.cutoff, c_u.quadrature);
    for (idx, v) in c_u.iter() {
        out.set(idx, v * curl_denominator(idx, lambda, c_u.radius)?);
    }
    Ok(out)
}

/// Coefficients of `∇div u + λu` given those of `u`.
pub fn apply_graddiv_operator(
    c_u: &SpectralCoefficients,
    lambda: f64,
) -> Result<SpectralCoefficients> {
    let mut out = SpectralCoefficients::empty(c_u.radius, c_u.cutoff, c_u.quadrature);
    for (idx, v) in c_u.iter() {
        out.set(idx, v * graddiv_denominator(idx, lambda, c_u.radius)?);
    }
    Ok(out)
}
