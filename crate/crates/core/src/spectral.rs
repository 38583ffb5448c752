//! Variational stability verification: the pointwise Hardy-type bound that
//! drives the stability proof, radial quadrature of the stability
//! quadratic form, and test-function sweeps that certify instability by
//! exhibiting a negative energy.

use crate::closedform::CriticalSolution;
use crate::quad::{adaptive_simpson_rel, integrate_log_tail, QuadResult};
use crate::quartic::{biharmonic_symbol, rellich_constant};
use crate::radial_ode::RadialSolution;
use crate::report::{Applicability, VerificationReport};
use crate::special::sphere_surface;
use serde::Serialize;
use std::fmt;

/// Relative slack on the pointwise bound check.
pub const RELLICH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    NonConvergent(String),
    InvalidParameter(String),
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::NonConvergent(msg) => write!(f, "integral did not converge: {msg}"),
            SpectralError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for SpectralError {}

/// Radial test functions with closed-form Laplacians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TestFunction {
    /// `(λ² + r²)^{-(n-2)/2}`, the profile that certifies instability at
    /// the Sobolev-critical exponent.
    CriticalZeta { n: u32, lambda: f64 },
    /// `r^{-σ}` between the cut radii, brought to zero by quintic
    /// smoothsteps over one decade on each side (in log radius). With
    /// `σ = (n-4)/2` this imitates the extremal profile of the Hardy-type
    /// bound, concentrating where the potential tail dominates.
    HardyProfile {
        n: u32,
        sigma: f64,
        inner_cut: f64,
        outer_cut: f64,
    },
}

fn smoothstep(x: f64) -> (f64, f64, f64) {
    // value, first and second derivative of 6x⁵ - 15x⁴ + 10x³ on [0, 1]
    let x2 = x * x;
    let x3 = x2 * x;
    (
        ((6.0 * x - 15.0) * x + 10.0) * x3,
        30.0 * x2 * (x - 1.0) * (x - 1.0),
        60.0 * x * (2.0 * x - 1.0) * (x - 1.0),
    )
}

impl TestFunction {
    pub fn dimension(&self) -> u32 {
        match self {
            TestFunction::CriticalZeta { n, .. } => *n,
            TestFunction::HardyProfile { n, .. } => *n,
        }
    }

    fn validate(&self) -> Result<(), SpectralError> {
        match self {
            TestFunction::CriticalZeta { n, lambda } => {
                if *n < 5 || !(*lambda > 0.0) {
                    return Err(SpectralError::InvalidParameter(format!(
                        "critical test function needs n >= 5 and lambda > 0, got n = {n}, lambda = {lambda}"
                    )));
                }
            }
            TestFunction::HardyProfile {
                n,
                inner_cut,
                outer_cut,
                ..
            } => {
                if *n < 5 || !(*inner_cut > 0.0) || !(*outer_cut > *inner_cut) {
                    return Err(SpectralError::InvalidParameter(format!(
                        "cut radii must be positive and ordered, got {inner_cut} and {outer_cut}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cutoff window and its log-derivatives for the Hardy profile.
    fn cutoff(t: f64, t0: f64, t1: f64) -> (f64, f64, f64) {
        let d = std::f64::consts::LN_10;
        if t <= t0 - d || t >= t1 + d {
            (0.0, 0.0, 0.0)
        } else if t < t0 {
            let (s, s1, s2) = smoothstep((t - (t0 - d)) / d);
            (s, s1 / d, s2 / (d * d))
        } else if t <= t1 {
            (1.0, 0.0, 0.0)
        } else {
            let (s, s1, s2) = smoothstep((t - t1) / d);
            (1.0 - s, -s1 / d, -s2 / (d * d))
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            TestFunction::CriticalZeta { n, lambda } => {
                (lambda * lambda + r * r).powf(-(*n as f64 - 2.0) / 2.0)
            }
            TestFunction::HardyProfile {
                sigma,
                inner_cut,
                outer_cut,
                ..
            } => {
                if r <= 0.0 {
                    return 0.0;
                }
                let t = r.ln();
                let (chi, _, _) = Self::cutoff(t, inner_cut.ln(), outer_cut.ln());
                (-sigma * t).exp() * chi
            }
        }
    }

    /// Radial Laplacian, in closed form.
    pub fn laplacian(&self, r: f64) -> f64 {
        match self {
            TestFunction::CriticalZeta { n, lambda } => {
                let nf = *n as f64;
                let s = lambda * lambda + r * r;
                -nf * (nf - 2.0) * lambda * lambda * s.powf(-(nf + 2.0) / 2.0)
            }
            TestFunction::HardyProfile {
                n,
                sigma,
                inner_cut,
                outer_cut,
            } => {
                if r <= 0.0 {
                    return 0.0;
                }
                let nf = *n as f64;
                let t = r.ln();
                let (chi, chi1, chi2) = Self::cutoff(t, inner_cut.ln(), outer_cut.ln());
                if chi == 0.0 && chi1 == 0.0 && chi2 == 0.0 {
                    return 0.0;
                }
                let e = (-sigma * t).exp();
                let g1 = e * (chi1 - sigma * chi);
                let g2 = e * (chi2 - 2.0 * sigma * chi1 + sigma * sigma * chi);
                (g2 + (nf - 2.0) * g1) / (r * r)
            }
        }
    }

    /// Radii outside of which the function is identically zero, when such
    /// a window exists.
    fn support(&self) -> Option<(f64, f64)> {
        match self {
            TestFunction::CriticalZeta { .. } => None,
            TestFunction::HardyProfile {
                inner_cut,
                outer_cut,
                ..
            } => Some((inner_cut / 10.0, outer_cut * 10.0)),
        }
    }
}

/// The two quadratic-form integrals and their difference.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyReport {
    /// `∫ (Δζ)² dx`
    pub bilaplacian_term: f64,
    /// `∫ V ζ² dx` for the supplied potential `V` (normally `p u^{p-1}`)
    pub potential_term: f64,
    /// `bilaplacian_term - potential_term`
    pub energy: f64,
    pub quadrature_error_estimate: f64,
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    adaptive_simpson_rel(f, a, b, rel_tol)
}

fn radial_integral<F: Fn(f64) -> f64>(
    test: &TestFunction,
    weight: F,
    rel_tol: f64,
) -> Result<QuadResult, SpectralError> {
    let n = test.dimension();
    let omega = sphere_surface(n);
    match test.support() {
        Some((r_lo, r_hi)) => {
            // compact support: integrate on the log axis where the
            // integrand is uniformly resolved across the decades
            let g = |t: f64| {
                let r = t.exp();
                weight(r) * r.powi(n as i32) * omega
            };
            let out = refine(&g, r_lo.ln(), r_hi.ln(), rel_tol);
            Ok(out)
        }
        None => {
            let lambda = match test {
                TestFunction::CriticalZeta { lambda, .. } => *lambda,
                _ => 1.0,
            };
            let g = |r: f64| weight(r) * r.powi(n as i32 - 1) * omega;
            let head = refine(&g, 0.0, lambda, rel_tol);
            let tail = integrate_log_tail(&g, lambda, rel_tol, 60)
                .map_err(SpectralError::NonConvergent)?;
            Ok(QuadResult {
                value: head.value + tail.value,
                error: head.error + tail.error,
            })
        }
    }
}

/// Quadrature of the stability quadratic form
/// `E(ζ) = ∫ (Δζ)² dx - ∫ V ζ² dx` against a radial potential handle.
pub fn energy<V: Fn(f64) -> f64>(
    test: &TestFunction,
    potential: V,
) -> Result<EnergyReport, SpectralError> {
    energy_with_tolerance(test, potential, 1e-11)
}

/// As [`energy`] with an explicit relative quadrature tolerance.
pub fn energy_with_tolerance<V: Fn(f64) -> f64>(
    test: &TestFunction,
    potential: V,
    rel_tol: f64,
) -> Result<EnergyReport, SpectralError> {
    test.validate()?;
    let bilap = radial_integral(test, |r| test.laplacian(r).powi(2), rel_tol)?;
    let pot = radial_integral(
        test,
        |r| {
            let z = test.eval(r);
            potential(r) * z * z
        },
        rel_tol,
    )?;
    Ok(EnergyReport {
        bilaplacian_term: bilap.value,
        potential_term: pot.value,
        energy: bilap.value - pot.value,
        quadrature_error_estimate: bilap.error + pot.error,
    })
}

/// Radial potential `p u(r)^{p-1}` of a solved profile, extended past the
/// solved window by its proven tail: `p Q4(m) r^{-4}` in the supercritical
/// regime, and the matched fast-decay power at the critical exponent.
pub fn potential_from_solution(sol: &RadialSolution) -> impl Fn(f64) -> f64 + '_ {
    let params = sol.params;
    let p = params.p;
    let r_max = sol.r_max();
    let supercritical = params.is_supercritical();
    let tail_coefficient = if supercritical {
        p * biharmonic_symbol(params.m(), params.n)
    } else {
        // u ~ c r^{-(n-4)} at the critical exponent; then
        // u^{p-1} = c^{p-1} r^{-8}
        let last = sol.grid.last().expect("solved profile has samples");
        let c = last.u * r_max.powi(params.n as i32 - 4);
        p * c.powf(p - 1.0)
    };
    move |r: f64| {
        if r <= r_max {
            let u = sol.eval(r).unwrap_or(0.0);
            if u > 0.0 {
                p * u.powf(p - 1.0)
            } else {
                0.0
            }
        } else if supercritical {
            tail_coefficient * r.powi(-4)
        } else {
            tail_coefficient * r.powi(-8)
        }
    }
}

/// The complete numerical content of the stability mechanism: the sampled
/// profile satisfies `p r⁴ u^{p-1} <= n²(n-4)²/16` pointwise. The checked
/// quantity is scale invariant, so the verdict does not depend on `α`.
pub fn check_rellich_bound(sol: &RadialSolution) -> VerificationReport {
    check_rellich_bound_states(&sol.params, &sol.grid)
}

/// As [`check_rellich_bound`] over a raw sampled state list.
pub fn check_rellich_bound_states(
    params: &crate::quartic::ProblemParams,
    states: &[crate::radial_ode::State],
) -> VerificationReport {
    let constant = rellich_constant(params.n).expect("params enforce n >= 5");
    let m = params.m();
    let pm1 = params.p - 1.0;
    let mut max_val = f64::NEG_INFINITY;
    for st in states {
        let w = st.r.powf(m) * st.u;
        let val = params.p * w.powf(pm1);
        max_val = max_val.max(val);
    }
    let applicability = match params.regime() {
        crate::quartic::Regime::SupercriticalStable => Applicability::TheoremApplies,
        _ => Applicability::NoTheoremApplies,
    };
    let report = VerificationReport::new(
        "rellich-pointwise-bound",
        max_val <= constant * (1.0 + RELLICH_SLACK),
        (constant - max_val) / constant,
        applicability,
    );
    if applicability == Applicability::NoTheoremApplies {
        report.with_note("outside the stable regime a failure is expected, not a defect")
    } else {
        report
    }
}

/// A test function that certified a negative energy.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeOutcome {
    pub test: TestFunction,
    pub report: EnergyReport,
}

/// Default probe sweep for a solved profile: Hardy windows swept over a
/// logarithmic grid in the tail of the solution, plus the matched decaying
/// test function at the Sobolev-critical exponent.
pub fn default_probe_grid(sol: &RadialSolution) -> Vec<TestFunction> {
    let params = sol.params;
    let n = params.n;
    let sigma_star = (n as f64 - 4.0) / 2.0;
    let transient = sol.alpha.powf(-1.0 / params.m());
    let mut tests = Vec::new();
    if !params.is_supercritical() {
        if let Ok(matched) = CriticalSolution::for_alpha(n, sol.alpha) {
            for factor in [1.0, 0.5, 2.0] {
                tests.push(TestFunction::CriticalZeta {
                    n,
                    lambda: matched.lambda * factor,
                });
            }
        }
    }
    for sigma_factor in [1.0, 0.95, 1.05] {
        for inner_decades in [1.0, 2.0] {
            for span_decades in [5.0, 3.0, 2.0] {
                let inner = transient * 10f64.powf(inner_decades);
                tests.push(TestFunction::HardyProfile {
                    n,
                    sigma: sigma_star * sigma_factor,
                    inner_cut: inner,
                    outer_cut: inner * 10f64.powf(span_decades),
                });
            }
        }
    }
    tests
}

/// Sweep test functions against the solution's potential and return the
/// first certified negative direction of the quadratic form, or `None`.
///
/// `None` is an inconclusive outcome, never a stability claim.
pub fn instability_probe(sol: &RadialSolution) -> Result<Option<ProbeOutcome>, SpectralError> {
    instability_probe_with(sol, &default_probe_grid(sol))
}

/// As [`instability_probe`] over an explicit sweep grid.
pub fn instability_probe_with(
    sol: &RadialSolution,
    tests: &[TestFunction],
) -> Result<Option<ProbeOutcome>, SpectralError> {
    let potential = potential_from_solution(sol);
    for test in tests {
        let report = energy(test, &potential)?;
        if report.energy < -10.0 * report.quadrature_error_estimate.max(1e-300) {
            return Ok(Some(ProbeOutcome {
                test: *test,
                report,
            }));
        }
    }
    Ok(None)
}
