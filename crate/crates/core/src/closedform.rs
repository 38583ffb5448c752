//! Exact reference solutions and closed-form energies used as oracles for
//! the numerical paths: the critical-exponent bubble profile, the singular
//! power profile, and the closed-form instability energy of the standard
//! test function.

use crate::quartic::{biharmonic_symbol, ProblemParams, QuarticError};
use crate::radial_ode::State;
use crate::special::{beta_half, sphere_surface};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormError {
    InvalidDimension(u32),
    InvalidParameter(String),
    /// Evaluation at the singular point `r = 0`.
    SingularPoint,
}

impl fmt::Display for ClosedFormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedFormError::InvalidDimension(n) => {
                write!(f, "dimension n = {n} must be at least 5")
            }
            ClosedFormError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            ClosedFormError::SingularPoint => write!(f, "singular profile is not defined at r = 0"),
        }
    }
}

impl std::error::Error for ClosedFormError {}

/// The explicit entire solution at the Sobolev-critical exponent, with the
/// translation fixed at the origin. The exponent is implied by the
/// dimension: `p = (n+4)/(n-4)`, so `1/(p-1) = (n-4)/8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSolution {
    pub n: u32,
    pub lambda: f64,
}

impl CriticalSolution {
    pub fn new(n: u32, lambda: f64) -> Result<Self, ClosedFormError> {
        if n < 5 {
            return Err(ClosedFormError::InvalidDimension(n));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(ClosedFormError::InvalidParameter(format!(
                "scale lambda = {lambda} must be positive and finite"
            )));
        }
        Ok(CriticalSolution { n, lambda })
    }

    /// Member of the scaling family with `u(0) = alpha`.
    pub fn for_alpha(n: u32, alpha: f64) -> Result<Self, ClosedFormError> {
        if !(alpha > 0.0) {
            return Err(ClosedFormError::InvalidParameter(format!(
                "alpha = {alpha} must be positive"
            )));
        }
        let probe = CriticalSolution::new(n, 1.0)?;
        let lambda = (probe.coefficient() / alpha).powf(2.0 / (n as f64 - 4.0));
        CriticalSolution::new(n, lambda)
    }

    /// `[(n-4)(n-2)n(n+2)]^{(n-4)/8}`, the amplitude prefactor.
    pub fn coefficient(&self) -> f64 {
        let nf = self.n as f64;
        let prod = (nf - 4.0) * (nf - 2.0) * nf * (nf + 2.0);
        prod.powf((nf - 4.0) / 8.0)
    }

    /// The implied exponent `(n+4)/(n-4)`.
    pub fn exponent(&self) -> f64 {
        (self.n as f64 + 4.0) / (self.n as f64 - 4.0)
    }

    fn decay(&self) -> f64 {
        (self.n as f64 - 4.0) / 2.0
    }

    pub fn eval(&self, r: f64) -> f64 {
        let l = self.lambda;
        self.coefficient() * (l / (l * l + r * r)).powf(self.decay())
    }

    /// Value at the origin, `coefficient · λ^{-(n-4)/2}`.
    pub fn alpha(&self) -> f64 {
        self.coefficient() * self.lambda.powf(-self.decay())
    }

    pub fn eval_deriv(&self, r: f64) -> f64 {
        let l = self.lambda;
        -(self.n as f64 - 4.0) * r / (l * l + r * r) * self.eval(r)
    }

    /// Radial Laplacian of the profile.
    pub fn laplacian(&self, r: f64) -> f64 {
        let nf = self.n as f64;
        let k = self.decay();
        let l = self.lambda;
        let s = l * l + r * r;
        let base = self.coefficient() * l.powf(k);
        base * (-2.0 * k * nf * s.powf(-k - 1.0) + 4.0 * k * (k + 1.0) * r * r * s.powf(-k - 2.0))
    }

    /// Radial derivative of the Laplacian.
    pub fn laplacian_deriv(&self, r: f64) -> f64 {
        let nf = self.n as f64;
        let k = self.decay();
        let l = self.lambda;
        let s = l * l + r * r;
        let base = self.coefficient() * l.powf(k);
        base * 4.0 * k * (k + 1.0) * r * ((nf + 2.0) * l * l + 2.0 * r * r) * s.powf(-k - 3.0)
    }

    /// `Δu(0)`, the exact second shooting datum for the critical case.
    /// Strictly negative: the profile has a strict maximum at the origin.
    pub fn laplacian_at_origin(&self) -> f64 {
        let nf = self.n as f64;
        -nf * (nf - 4.0) * self.coefficient() * self.lambda.powf(-self.decay() - 2.0)
    }

    /// Full radial state, from the analytic derivatives.
    pub fn state_at(&self, r: f64) -> State {
        State {
            r,
            u: self.eval(r),
            du: self.eval_deriv(r),
            v: self.laplacian(r),
            dv: self.laplacian_deriv(r),
        }
    }
}

/// The exact homogeneous singular solution `amplitude · r^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSolution {
    pub params: ProblemParams,
}

impl SingularSolution {
    /// Requires the symbol at `m` to be positive so the real `(p-1)`-th
    /// root exists; this holds exactly on `p > p_n`.
    pub fn new(params: ProblemParams) -> Result<Self, QuarticError> {
        if biharmonic_symbol(params.m(), params.n) <= 0.0 {
            return Err(QuarticError::SubcriticalExponent {
                n: params.n,
                p: params.p,
            });
        }
        Ok(SingularSolution { params })
    }

    pub fn amplitude(&self) -> f64 {
        self.params.singular_amplitude()
    }

    pub fn eval(&self, r: f64) -> Result<f64, ClosedFormError> {
        if r <= 0.0 {
            return Err(ClosedFormError::SingularPoint);
        }
        Ok(self.amplitude() * r.powf(-self.params.m()))
    }

    /// Full radial state with the exact power-law derivatives.
    pub fn state_at(&self, r: f64) -> Result<State, ClosedFormError> {
        if r <= 0.0 {
            return Err(ClosedFormError::SingularPoint);
        }
        let m = self.params.m();
        let nf = self.params.n as f64;
        let amp = self.amplitude();
        let u = amp * r.powf(-m);
        let lap = m * (m + 2.0 - nf); // Δ r^{-m} = m(m+2-n) r^{-m-2}
        Ok(State {
            r,
            u,
            du: -m * u / r,
            v: lap * u / (r * r),
            dv: -(m + 2.0) * lap * u / (r * r * r),
        })
    }
}

/// Closed-form energy of the standard decaying test function against the
/// critical solution of matching scale:
/// `-8 λ⁴ n (n-2) (n+1) · I` with
/// `I = ω_{n-1} · λ^{-(n+4)} · B(n/2, (n+4)/2) / 2`.
///
/// Always negative, which is the certificate of a negative direction of
/// the stability quadratic form at the critical exponent.
pub fn instability_energy(n: u32, lambda: f64) -> Result<f64, ClosedFormError> {
    if n < 5 {
        return Err(ClosedFormError::InvalidDimension(n));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(ClosedFormError::InvalidParameter(format!(
            "scale lambda = {lambda} must be positive and finite"
        )));
    }
    let nf = n as f64;
    let integral = sphere_surface(n) * 0.5 * lambda.powi(-(n as i32) - 4) * beta_half(n, n + 4);
    Ok(-8.0 * lambda.powi(4) * nf * (nf - 2.0) * (nf + 1.0) * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn critical_value_at_origin() {
        let sol = CriticalSolution::new(5, 1.0).unwrap();
        assert!(rel(sol.eval(0.0), 105f64.powf(0.125)) < 1e-14);
        assert!(rel(sol.alpha(), 105f64.powf(0.125)) < 1e-14);
    }

    #[test]
    fn critical_profile_decreases_from_its_origin_value() {
        for n in [5u32, 9, 13] {
            let sol = CriticalSolution::new(n, 1.7).unwrap();
            let mut prev = sol.eval(0.0);
            assert!(rel(prev, sol.alpha()) < 1e-15);
            for k in 1..200 {
                let u = sol.eval(k as f64 * 0.1);
                assert!(u < prev, "n={n} not strictly decreasing at r={}", k as f64 * 0.1);
                prev = u;
            }
        }
    }

    #[test]
    fn critical_scaling_family() {
        let base = CriticalSolution::new(7, 1.0).unwrap();
        for lambda in [0.5, 2.0, 3.7] {
            let scaled = CriticalSolution::new(7, lambda).unwrap();
            let k = (7.0 - 4.0) / 2.0;
            for r in [0.0, 0.3, 1.0, 4.0] {
                let expect = lambda.powf(-k) * base.eval(r / lambda);
                assert!(rel(scaled.eval(r), expect) < 1e-13, "lambda={lambda} r={r}");
            }
        }
    }

    #[test]
    fn for_alpha_inverts_origin_value() {
        for n in [5u32, 9, 13] {
            for alpha in [0.25, 1.0, 16.0] {
                let sol = CriticalSolution::for_alpha(n, alpha).unwrap();
                assert!(rel(sol.alpha(), alpha) < 1e-13, "n={n} alpha={alpha}");
            }
        }
        // alpha = 1 in dimension 5 pins lambda to 105^(1/4)
        let sol = CriticalSolution::for_alpha(5, 1.0).unwrap();
        assert!(rel(sol.lambda, 105f64.powf(0.25)) < 1e-13);
    }

    #[test]
    fn critical_laplacian_matches_difference_quotient() {
        for (n, lambda) in [(5u32, 1.0), (5, 0.5), (5, 2.0), (9, 1.3)] {
            let sol = CriticalSolution::new(n, lambda).unwrap();
            let h = 1e-4;
            // second difference at the origin: u ~ alpha + (Δu(0)/2n) r²
            let quot = (sol.eval(h) - sol.alpha()) / (h * h) * 2.0 * n as f64;
            let exact = sol.laplacian_at_origin();
            assert!(exact < 0.0);
            assert!(
                rel(quot, exact) < 1e-6,
                "n={n} lambda={lambda}: {quot} vs {exact}"
            );
        }
    }

    #[test]
    fn critical_laplacian_scaling_pattern() {
        let n = 5u32;
        let base = CriticalSolution::new(n, 1.0).unwrap().laplacian_at_origin();
        for lambda in [0.5, 1.0, 2.0] {
            let sol = CriticalSolution::new(n, lambda).unwrap();
            let expect = lambda.powf(-(n as f64 - 4.0) / 2.0 - 2.0) * base;
            assert!(rel(sol.laplacian_at_origin(), expect) < 1e-13);
        }
    }

    #[test]
    fn analytic_laplacians_match_finite_differences() {
        let sol = CriticalSolution::new(6, 1.4).unwrap();
        let n = 6.0;
        for r in [0.3f64, 1.0, 2.5] {
            let h = 1e-5 * r.max(1.0);
            let d1 = (sol.eval(r + h) - sol.eval(r - h)) / (2.0 * h);
            let d2 = (sol.eval(r + h) - 2.0 * sol.eval(r) + sol.eval(r - h)) / (h * h);
            let lap = d2 + (n - 1.0) / r * d1;
            assert!(rel(d1, sol.eval_deriv(r)) < 1e-8, "r={r}");
            assert!(rel(lap, sol.laplacian(r)) < 1e-5, "r={r}");
            let dl = (sol.laplacian(r + h) - sol.laplacian(r - h)) / (2.0 * h);
            assert!(rel(dl, sol.laplacian_deriv(r)) < 1e-8, "r={r}");
        }
    }

    #[test]
    fn singular_profile_values() {
        let params = ProblemParams::new(13, 30.0).unwrap();
        let sol = SingularSolution::new(params).unwrap();
        let amp = biharmonic_symbol(4.0 / 29.0, 13).powf(1.0 / 29.0);
        assert!(rel(sol.eval(1.0).unwrap(), amp) < 1e-15);
        assert!(sol.eval(0.0).is_err());
        // constant log-radius profile: r^m u is the amplitude everywhere
        for r in [0.01f64, 1.0, 7.0, 1e3] {
            let w = r.powf(4.0 / 29.0) * sol.eval(r).unwrap();
            assert!(rel(w, amp) < 1e-13, "r={r}");
        }
    }

    #[test]
    fn singular_profile_rejected_where_symbol_is_negative() {
        // the decay rate lands between the symbol's upper roots here
        let params = ProblemParams::new(13, 1.4).unwrap();
        assert!(biharmonic_symbol(params.m(), 13) < 0.0);
        assert!(SingularSolution::new(params).is_err());
    }

    #[test]
    fn instability_energy_dimension_five() {
        // Beta reduction gives I = 7π³/768 at λ = 1, hence E = -720·7π³/768.
        let e = instability_energy(5, 1.0).unwrap();
        let exact = -720.0 * 7.0 * PI.powi(3) / 768.0;
        assert!(rel(e, exact) < 1e-13, "{e} vs {exact}");
        assert!((e + 203.5).abs() < 0.1);
    }

    #[test]
    fn instability_energy_always_negative() {
        for n in 5..=12 {
            for lambda in [0.25, 0.5, 1.0, 2.0, 8.0] {
                assert!(instability_energy(n, lambda).unwrap() < 0.0, "n={n}");
            }
        }
        assert!(instability_energy(4, 1.0).is_err());
        assert!(instability_energy(5, 0.0).is_err());
    }

    #[test]
    fn instability_energy_lambda_scaling() {
        for n in [5u32, 6, 7] {
            let base = instability_energy(n, 1.0).unwrap();
            for lambda in [0.5, 2.0] {
                let e = instability_energy(n, lambda).unwrap();
                assert!(
                    rel(e, lambda.powi(-(n as i32)) * base) < 1e-13,
                    "n={n} λ={lambda}"
                );
            }
        }
    }
}
