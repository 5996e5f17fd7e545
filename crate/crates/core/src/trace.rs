//! Streamline integration: `dx/dt = u(x)` by the classical 4th-order
//! one-step method with a fixed step, for reproducibility.

use crate::{Error, Result};

/// Factor by which a trajectory may overshoot the ball before integration
/// stops.
pub const EXIT_SLACK: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Streamline {
    /// Polyline including the seed; one entry per accepted step.
    pub points: Vec<[f64; 3]>,
    /// True if the trajectory left `|x| ≤ R(1 + EXIT_SLACK)` early.
    pub exited: bool,
    /// Largest |x| seen along the trajectory.
    pub max_radius: f64,
}

fn add_scaled(p: [f64; 3], v: [f64; 3], s: f64) -> [f64; 3] {
    [p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]]
}

fn norm(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// Integrates from `x0` for total time `t_total` with step `h`, stopping
/// early (with `exited = true`) once the point leaves the slightly enlarged
/// ball.
pub fn trace_streamline<F: FnMut([f64; 3]) -> [f64; 3]>(
    mut field: F,
    x0: [f64; 3],
    h: f64,
    t_total: f64,
    radius: f64,
) -> Result<Streamline> {
    assert!(h > 0.0 && t_total > 0.0);
    if norm(x0) >= radius {
        return Err(Error::OutsideBall {
            x: x0[0],
            y: x0[1],
            z: x0[2],
            radius,
        });
    }
    let steps = (t_total / h).round() as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut x = x0;
    let mut max_radius = norm(x);
    points.push(x);
    let barrier = radius * (1.0 + EXIT_SLACK);
    let mut exited = false;
    for _ in 0..steps {
        let k1 = field(x);
        let k2 = field(add_scaled(x, k1, 0.5 * h));
        let k3 = field(add_scaled(x, k2, 0.5 * h));
        let k4 = field(add_scaled(x, k3, h));
        for i in 0..3 {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        points.push(x);
        let r = norm(x);
        max_radius = max_radius.max(r);
        if r > barrier {
            exited = true;
            break;
        }
    }
    Ok(Streamline {
        points,
        exited,
        max_radius,
    })
}
