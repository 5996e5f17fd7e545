//! Finite-difference differential operators on Cartesian vector fields.
//!
//! Fourth-order central stencils, used as independent checks that sampled
//! fields satisfy their defining differential relations. With step `h` the
//! truncation error is `O(h⁴ max|f⁽⁵⁾|)`, so `h ≈ 1e-4` resolves residuals
//! well below `1e-5` on the smooth fields handled here.

/// Recommended step for the stencils below.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Fourth-order first derivative of a scalar function of one variable.
pub fn diff1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order second derivative of a scalar function of one variable.
pub fn diff2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

fn partial<F: Fn([f64; 3]) -> f64>(f: &F, p: [f64; 3], axis: usize, h: f64) -> f64 {
    let shift = |t: f64| {
        let mut q = p;
        q[axis] += t;
        f(q)
    };
    diff1(shift, 0.0, h)
}

/// `∇g` at `p`.
pub fn grad<F: Fn([f64; 3]) -> f64>(g: &F, p: [f64; 3], h: f64) -> [f64; 3] {
    [
        partial(g, p, 0, h),
        partial(g, p, 1, h),
        partial(g, p, 2, h),
    ]
}

/// `div v` at `p` for a Cartesian vector field `v`.
pub fn divergence<F: Fn([f64; 3]) -> [f64; 3]>(v: &F, p: [f64; 3], h: f64) -> f64 {
    let comp = |i: usize| {
        let vi = |q: [f64; 3]| v(q)[i];
        partial(&vi, p, i, h)
    };
    comp(0) + comp(1) + comp(2)
}

/// `rot v` at `p` for a Cartesian vector field `v`.
pub fn curl<F: Fn([f64; 3]) -> [f64; 3]>(v: &F, p: [f64; 3], h: f64) -> [f64; 3] {
    let d = |i: usize, axis: usize| {
        let vi = |q: [f64; 3]| v(q)[i];
        partial(&vi, p, axis, h)
    };
    [
        d(2, 1) - d(1, 2),
        d(0, 2) - d(2, 0),
        d(1, 0) - d(0, 1),
    ]
}

/// `∇(div v)` at `p` via a nested stencil; the effective error is
/// `O(h⁴)` in each stage but the inner evaluation noise is amplified by
/// `1/h`, so keep `h` no smaller than ~1e-4.
pub fn grad_div<F: Fn([f64; 3]) -> [f64; 3]>(v: &F, p: [f64; 3], h: f64) -> [f64; 3] {
    let dv = |q: [f64; 3]| divergence(v, q, h);
    grad(&dv, p, h)
}
