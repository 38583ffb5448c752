//! Shared oracles for the integration tests: finite-difference radial
//! operators that are independent of every production code path.

/// Relative error against `b`, guarding the zero denominator.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Radial Laplacian `f'' + (n-1) f'/r` from fourth-order central stencils.
/// The step balances the composed stencil's truncation `h⁴` against its
/// rounding amplification `ε/h⁴`, which puts it near `ε^{1/8}`.
pub fn radial_laplacian_fd<F: Fn(f64) -> f64>(f: &F, n: u32, r: f64) -> f64 {
    let h = 1e-2 * r.max(1.0);
    let fm2 = f(r - 2.0 * h);
    let fm1 = f(r - h);
    let f0 = f(r);
    let fp1 = f(r + h);
    let fp2 = f(r + 2.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    d2 + (n as f64 - 1.0) / r * d1
}

/// Radial bilaplacian by composing the stencil Laplacian twice.
pub fn radial_bilaplacian_fd<F: Fn(f64) -> f64>(f: &F, n: u32, r: f64) -> f64 {
    let lap = |x: f64| radial_laplacian_fd(f, n, x);
    radial_laplacian_fd(&lap, n, r)
}
