//! Half-integer Gamma/Beta values and sphere surface measures.
//!
//! Every argument that shows up in the radial energy integrals is a
//! half-integer once the dimension is an integer, so the values are
//! computed by the exact recursion from `Γ(1/2) = √π` and `Γ(1) = 1`
//! instead of a general-purpose approximation.

use std::f64::consts::PI;

/// `Γ(k/2)` for a positive half-integer argument given as `k = 2x`.
pub fn gamma_half(two_x: u32) -> f64 {
    assert!(two_x > 0, "gamma_half requires a positive argument");
    let mut k = two_x;
    let mut acc = if k % 2 == 1 { PI.sqrt() } else { 1.0 };
    let base = if k % 2 == 1 { 1 } else { 2 };
    while k > base {
        k -= 2;
        acc *= k as f64 / 2.0;
    }
    acc
}

/// `B(a/2, b/2)` with both arguments given doubled.
pub fn beta_half(two_a: u32, two_b: u32) -> f64 {
    gamma_half(two_a) * gamma_half(two_b) / gamma_half(two_a + two_b)
}

/// Surface measure of the unit sphere `S^{n-1}`, i.e. `2 π^{n/2} / Γ(n/2)`.
pub fn sphere_surface(n: u32) -> f64 {
    let half_power = if n % 2 == 0 {
        PI.powi(n as i32 / 2)
    } else {
        PI.powi((n as i32 - 1) / 2) * PI.sqrt()
    };
    2.0 * half_power / gamma_half(n)
}
