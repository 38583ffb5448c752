//! Exact polynomial layer: the bilaplacian symbol on power profiles, the
//! stability polynomial and its critical exponent, regime classification,
//! and the characteristic roots used by the qualitative arguments.

use serde::Serialize;
use std::fmt;

/// Default ceiling for the upward bracket search in [`critical_exponent`].
pub const DEFAULT_P_CEILING: f64 = 1e6;

/// Errors from the polynomial layer.
#[derive(Debug, Clone, PartialEq)]
pub enum QuarticError {
    /// Dimension outside the admissible range `n >= 5`.
    InvalidDimension(u32),
    /// Exponent at or below the Sobolev threshold where the operation is undefined.
    SubcriticalExponent { n: u32, p: f64 },
    /// Stability condition fails, so the middle root pair is complex.
    StabilityViolated { q: f64 },
    /// Upward doubling search hit the ceiling without a sign change.
    NoBracket { ceiling: f64 },
    /// Parameter outside its documented domain.
    InvalidParameter(String),
}

impl fmt::Display for QuarticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuarticError::InvalidDimension(n) => {
                write!(
                    f,
                    "dimension n = {n} is outside the admissible range n >= 5"
                )
            }
            QuarticError::SubcriticalExponent { n, p } => {
                write!(
                    f,
                    "exponent p = {p} is not above the Sobolev exponent for n = {n}"
                )
            }
            QuarticError::StabilityViolated { q } => {
                write!(f, "stability condition fails (stability polynomial = {q}); middle roots are complex")
            }
            QuarticError::NoBracket { ceiling } => {
                write!(
                    f,
                    "no sign change found below the bracket ceiling p = {ceiling}"
                )
            }
            QuarticError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for QuarticError {}

/// Dimension and nonlinearity exponent of the problem, with the derived
/// decay rate `m = 4/(p-1)` cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    pub n: u32,
    pub p: f64,
    m: f64,
}

impl ProblemParams {
    pub fn new(n: u32, p: f64) -> Result<Self, QuarticError> {
        if n < 5 {
            return Err(QuarticError::InvalidDimension(n));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(QuarticError::InvalidParameter(format!(
                "exponent p = {p} must be finite and greater than 1"
            )));
        }
        Ok(ProblemParams {
            n,
            p,
            m: 4.0 / (p - 1.0),
        })
    }

    /// Decay rate of the singular profile, `m = 4/(p-1)`.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Sobolev exponent for this dimension.
    pub fn sobolev_exponent(&self) -> f64 {
        sobolev_exponent(self.n).expect("n >= 5 by construction")
    }

    /// Whether `p` lies strictly above the Sobolev exponent.
    pub fn is_supercritical(&self) -> bool {
        self.p > self.sobolev_exponent()
    }

    /// Amplitude of the singular profile, the `(p-1)`-th root of the
    /// bilaplacian symbol at `m`. Positive whenever `p >= p_n`.
    pub fn singular_amplitude(&self) -> f64 {
        biharmonic_symbol(self.m, self.n).powf(1.0 / (self.p - 1.0))
    }

    pub fn regime(&self) -> Regime {
        classify(self.n, self.p)
    }
}

/// Existence/stability regime of the pair `(n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    NoPositiveSolution,
    CriticalSobolev,
    SupercriticalUnstable,
    SupercriticalStable,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::NoPositiveSolution => "no-positive-solution",
            Regime::CriticalSobolev => "critical-sobolev",
            Regime::SupercriticalUnstable => "supercritical-unstable",
            Regime::SupercriticalStable => "supercritical-stable",
        };
        f.write_str(s)
    }
}

/// Which characteristic polynomial a [`RootSet`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CharPolynomial {
    /// Linearisation about the singular amplitude with weight `p`.
    Stability,
    /// Comparison polynomial with weight one, used for the derivative bound.
    Monotonicity,
}

/// Ordered real roots of one of the two characteristic quartics, together
/// with the symmetry centre they are reflected about.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    /// Roots in ascending order.
    pub roots: [f64; 4],
    /// Centre of the pairwise symmetry `roots[0]+roots[3] = roots[1]+roots[2]`.
    pub symmetry_center: f64,
    pub which: CharPolynomial,
}

/// Value of `|x|^{α+4} Δ² |x|^{-α}` as a product of linear factors,
/// `α (α+2) (α+2-n) (α+4-n)`.
pub fn biharmonic_symbol(alpha: f64, n: u32) -> f64 {
    let nf = n as f64;
    alpha * (alpha + 2.0) * (alpha + 2.0 - nf) * (alpha + 4.0 - nf)
}

/// Sharp constant `n²(n-4)²/16` of the second-order Hardy-type inequality
/// for the bilaplacian; equals the unique local maximum of the symbol.
pub fn rellich_constant(n: u32) -> Result<f64, QuarticError> {
    if n < 5 {
        return Err(QuarticError::InvalidDimension(n));
    }
    let nf = n as f64;
    Ok(nf * nf * (nf - 4.0) * (nf - 4.0) / 16.0)
}

/// Sobolev exponent `(n+4)/(n-4)`, the existence threshold.
pub fn sobolev_exponent(n: u32) -> Result<f64, QuarticError> {
    if n < 5 {
        return Err(QuarticError::InvalidDimension(n));
    }
    let nf = n as f64;
    Ok((nf + 4.0) / (nf - 4.0))
}

/// Evaluation route for [`stability_polynomial`]. The two forms are the
/// same quartic in `p`; the factored one has a removable singularity at
/// `p = 1` and is routed to the expanded form there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QForm {
    Factored,
    Expanded,
}

/// The degree-four stability polynomial in `p` whose sign decides linear
/// stability: negative means unstable, non-negative means stable.
pub fn stability_polynomial(p: f64, n: u32, form: QForm) -> f64 {
    let nf = n as f64;
    match form {
        QForm::Factored if (p - 1.0).abs() > 1e-6 => {
            let m = 4.0 / (p - 1.0);
            let q = (p - 1.0).powi(4);
            let local_max = nf * nf * (nf - 4.0) * (nf - 4.0) / 16.0;
            16.0 * q * (local_max - p * biharmonic_symbol(m, n))
        }
        _ => {
            let a = nf * nf * (nf - 4.0) * (nf - 4.0) * (p - 1.0).powi(4);
            let b = 128.0 * p * (p + 1.0) * ((nf - 4.0) * p - nf) * ((nf - 2.0) * p - (nf + 2.0));
            a - b
        }
    }
}

/// Leading coefficient of the stability polynomial as `p → ∞`:
/// `(n-4)(n³ - 4n² - 128n + 256)`. Negative for `5 <= n <= 12`,
/// positive from `n = 13` on.
pub fn stability_leading_coefficient(n: u32) -> f64 {
    let nf = n as f64;
    (nf - 4.0) * (nf * nf * nf - 4.0 * nf * nf - 128.0 * nf + 256.0)
}

/// Unique root of the stability polynomial above the Sobolev exponent.
/// Returns `None` for `5 <= n <= 12`, where no such root exists and every
/// supercritical exponent is unstable.
pub fn critical_exponent(n: u32) -> Result<Option<f64>, QuarticError> {
    critical_exponent_with_ceiling(n, DEFAULT_P_CEILING)
}

/// As [`critical_exponent`] with an explicit ceiling for the upward
/// doubling search. Hitting the ceiling signals a misconfiguration for
/// `n >= 13`, not a mathematical case, and is reported as an error.
pub fn critical_exponent_with_ceiling(n: u32, ceiling: f64) -> Result<Option<f64>, QuarticError> {
    if n < 5 {
        return Err(QuarticError::InvalidDimension(n));
    }
    if n <= 12 {
        return Ok(None);
    }
    let q = |p: f64| stability_polynomial(p, n, QForm::Expanded);
    let mut lo = sobolev_exponent(n)?;
    debug_assert!(q(lo) < 0.0);
    let mut hi = 2.0 * lo;
    while q(hi) <= 0.0 {
        hi *= 2.0;
        if hi > ceiling {
            return Err(QuarticError::NoBracket { ceiling });
        }
    }
    // Plain bisection run down to the floating-point collapse of the
    // bracket, so the residual at the returned point is limited only by
    // the local slope times one ulp.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = q(mid);
        if v == 0.0 {
            return Ok(Some(mid));
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Classify the pair `(n, p)` into its existence/stability regime.
///
/// A tie `stability_polynomial(p) = 0` classifies as stable, matching the
/// non-strict inequality in the stability condition.
pub fn classify(n: u32, p: f64) -> Regime {
    if n <= 4 {
        return Regime::NoPositiveSolution;
    }
    let pn = (n as f64 + 4.0) / (n as f64 - 4.0);
    if p < pn {
        Regime::NoPositiveSolution
    } else if p == pn {
        Regime::CriticalSobolev
    } else if stability_polynomial(p, n, QForm::Expanded) < 0.0 {
        Regime::SupercriticalUnstable
    } else {
        Regime::SupercriticalStable
    }
}

/// Characteristic value `Q4(m-λ) - p·Q4(m)` of the weighted linearisation,
/// evaluated directly from the product form.
pub fn stability_char_value(params: &ProblemParams, lambda: f64) -> f64 {
    biharmonic_symbol(params.m() - lambda, params.n)
        - params.p * biharmonic_symbol(params.m(), params.n)
}

/// Characteristic value `Q4(m-μ) - Q4(m)` of the unit-weight comparison
/// polynomial.
pub fn monotonicity_char_value(params: &ProblemParams, mu: f64) -> f64 {
    biharmonic_symbol(params.m() - mu, params.n) - biharmonic_symbol(params.m(), params.n)
}

/// Monic coefficients `[c0, c1, c2, c3, 1]` of `Q4(m-x) - w·Q4(m)` in `x`.
pub fn char_polynomial_coeffs(params: &ProblemParams, weight: f64) -> [f64; 5] {
    let nf = params.n as f64;
    let m = params.m();
    let r = [m, m + 2.0, m + 2.0 - nf, m + 4.0 - nf];
    // Π (r_i - x): expand by repeated multiplication with (r_i - x).
    let mut c = [0.0f64; 5];
    c[0] = 1.0;
    let mut deg = 0;
    for ri in r {
        let mut next = [0.0f64; 5];
        for k in 0..=deg {
            next[k] += c[k] * ri;
            next[k + 1] -= c[k];
        }
        deg += 1;
        c = next;
    }
    c[0] -= weight * biharmonic_symbol(m, params.n);
    c
}

fn require_supercritical(params: &ProblemParams) -> Result<(), QuarticError> {
    if params.p <= params.sobolev_exponent() {
        return Err(QuarticError::SubcriticalExponent {
            n: params.n,
            p: params.p,
        });
    }
    Ok(())
}

/// Four real roots `λ1 <= λ2 <= λ3 < 0 < λ4` of the weighted characteristic
/// quartic under the stability condition.
///
/// The quartic is symmetric about `λ* = m - (n-4)/2`, so the shift
/// `t = λ - λ*` turns it into a quadratic in `t²` that is solved in closed
/// form; the middle pair collapses onto `λ*` when the stability polynomial
/// vanishes and becomes complex when it is negative.
pub fn stability_roots(params: &ProblemParams) -> Result<RootSet, QuarticError> {
    require_supercritical(params)?;
    let nf = params.n as f64;
    let q = stability_polynomial(params.p, params.n, QForm::Expanded);
    if q < 0.0 {
        return Err(QuarticError::StabilityViolated { q });
    }
    let a = (nf - 4.0) / 2.0;
    let b = nf / 2.0;
    let center = params.m() - a;
    let sum = a * a + b * b;
    let sym = biharmonic_symbol(params.m(), params.n);
    let disc = 4.0 * (nf - 2.0) * (nf - 2.0) + 4.0 * params.p * sym;
    let sq = disc.sqrt();
    let t_outer = ((sum + sq) / 2.0).sqrt();
    // Product route avoids the cancellation in (sum - sq)/2 near the
    // stability boundary; the product of the two t² roots is exactly
    // a²b² - p·Q4(m), which is the stability polynomial up to a positive
    // factor, hence non-negative here.
    let prod = a * a * b * b - params.p * sym;
    let t_inner = (prod.max(0.0) / ((sum + sq) / 2.0)).sqrt();
    let roots = [
        center - t_outer,
        center - t_inner,
        center + t_inner,
        center + t_outer,
    ];
    debug_assert!(roots[2] < 0.0 && roots[3] > 0.0);
    Ok(RootSet {
        roots,
        symmetry_center: center,
        which: CharPolynomial::Stability,
    })
}

/// Four real roots `μ1 < μ2 < μ3 = 0 < μ4` of the unit-weight comparison
/// quartic, with `μ2 = 2μ*` and `μ3 = 0` exact by construction.
pub fn monotonicity_roots(params: &ProblemParams) -> Result<RootSet, QuarticError> {
    require_supercritical(params)?;
    let nf = params.n as f64;
    let a = (nf - 4.0) / 2.0;
    let b = nf / 2.0;
    let center = params.m() - a;
    // 0 and 2μ* are roots; the remaining pair is μ* ± sqrt(a² + b² - μ*²).
    let t = (a * a + b * b - center * center).sqrt();
    let roots = [center - t, 2.0 * center, 0.0, center + t];
    debug_assert!(roots[0] < roots[1] && roots[1] < 0.0 && roots[3] > 0.0);
    Ok(RootSet {
        roots,
        symmetry_center: center,
        which: CharPolynomial::Monotonicity,
    })
}

/// Largest root of the weighted characteristic quartic: the growth rate of
/// the mode that carries a perturbed trajectory away from the singular
/// amplitude on the log-radius axis. Real and positive for every `p`
/// above the Sobolev exponent, including the unstable band where the
/// middle root pair is complex.
pub fn growth_exponent(params: &ProblemParams) -> Option<f64> {
    if params.p <= params.sobolev_exponent() {
        return None;
    }
    let nf = params.n as f64;
    let a = (nf - 4.0) / 2.0;
    let b = nf / 2.0;
    let center = params.m() - a;
    let sum = a * a + b * b;
    let disc =
        4.0 * (nf - 2.0) * (nf - 2.0) + 4.0 * params.p * biharmonic_symbol(params.m(), params.n);
    let outer = (sum + disc.sqrt()) / 2.0;
    Some(center + outer.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn symbol_spot_values() {
        assert_eq!(biharmonic_symbol(0.0, 13), 0.0);
        // local maximum at (n-4)/2 equals the sharp constant
        assert!(rel(biharmonic_symbol(4.5, 13), 855.5625) < 1e-15);
        assert!(rel(biharmonic_symbol(4.5, 13), 4.5 * 6.5 * 6.5 * 4.5) < 1e-15);
        assert_eq!(biharmonic_symbol(2.0, 13), 2.0 * 4.0 * (-9.0) * (-7.0));
    }

    #[test]
    fn symbol_reflection_symmetry() {
        for n in [5u32, 8, 13, 20] {
            let c = (n as f64 - 4.0) / 2.0;
            for k in -40..=40 {
                let alpha = k as f64 * 0.37;
                let a = biharmonic_symbol(alpha, n);
                let b = biharmonic_symbol(2.0 * c - alpha, n);
                let scale = a.abs().max(b.abs()).max(1.0);
                assert!((a - b).abs() <= 1e-12 * scale, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn rellich_constant_values() {
        assert_eq!(rellich_constant(5).unwrap(), 25.0 / 16.0);
        assert_eq!(rellich_constant(13).unwrap(), 855.5625);
        assert!(rellich_constant(4).is_err());
        for n in 5..25 {
            let c = rellich_constant(n).unwrap();
            let at_max = biharmonic_symbol((n as f64 - 4.0) / 2.0, n);
            assert!(rel(c, at_max) < 1e-15, "n={n}");
        }
    }

    #[test]
    fn sobolev_exponent_values() {
        assert_eq!(sobolev_exponent(5).unwrap(), 9.0);
        assert!(rel(sobolev_exponent(13).unwrap(), 17.0 / 9.0) < 1e-16);
        assert!(sobolev_exponent(4).is_err());
        // 4/(p_n - 1) = (n-4)/2
        for n in 5..30 {
            let pn = sobolev_exponent(n).unwrap();
            assert!(rel(4.0 / (pn - 1.0), (n as f64 - 4.0) / 2.0) < 1e-14);
        }
    }

    #[test]
    fn stability_polynomial_exact_values() {
        for n in 5..=20 {
            let nf = n as f64;
            assert_eq!(
                stability_polynomial(1.0, n, QForm::Expanded),
                -4096.0,
                "n={n}"
            );
            assert_eq!(
                stability_polynomial(1.0, n, QForm::Factored),
                -4096.0,
                "n={n}"
            );
            let q0 = nf * nf * (nf - 4.0) * (nf - 4.0);
            assert_eq!(stability_polynomial(0.0, n, QForm::Expanded), q0, "n={n}");
            let pn = sobolev_exponent(n).unwrap();
            let expect = -2f64.powi(15) * nf * nf / (nf - 4.0).powi(3);
            assert!(
                rel(stability_polynomial(pn, n, QForm::Factored), expect) < 1e-12,
                "n={n}"
            );
            let serrin = (nf + 2.0) / (nf - 2.0);
            let expect = 2f64.powi(8) * nf * nf * (nf - 4.0) * (nf - 4.0) / (nf - 2.0).powi(4);
            assert!(rel(stability_polynomial(serrin, n, QForm::Factored), expect) < 1e-12);
        }
        // n = 13 spot value used by the table command
        assert!(
            rel(
                stability_polynomial(17.0 / 9.0, 13, QForm::Expanded),
                -(2f64.powi(15)) * 169.0 / 729.0
            ) < 1e-12
        );
    }

    /// Scale against which two evaluation routes of the same quartic can
    /// be compared: the sum of its term magnitudes. Near the roots the
    /// value itself cancels to zero and is no yardstick.
    fn term_scale(p: f64, n: u32) -> f64 {
        let nf = n as f64;
        nf * nf * (nf - 4.0) * (nf - 4.0) * (p - 1.0).powi(4).abs()
            + (128.0 * p * (p + 1.0) * ((nf - 4.0) * p - nf) * ((nf - 2.0) * p - (nf + 2.0))).abs()
            + 1.0
    }

    #[test]
    fn stability_polynomial_forms_agree() {
        for n in [5u32, 7, 12, 13, 16, 20] {
            for k in 0..500 {
                let p = 1.01 + 49.0 * k as f64 / 499.0;
                let f = stability_polynomial(p, n, QForm::Factored);
                let e = stability_polynomial(p, n, QForm::Expanded);
                assert!(
                    (f - e).abs() <= 1e-12 * term_scale(p, n),
                    "n={n} p={p}: {f} vs {e}"
                );
            }
        }
    }

    #[test]
    fn leading_coefficient_sign_change() {
        assert_eq!(stability_leading_coefficient(12), -1024.0);
        assert_eq!(stability_leading_coefficient(13), 1017.0);
        for n in 5..=12 {
            assert!(stability_leading_coefficient(n) < 0.0, "n={n}");
        }
        for n in 13..=40 {
            assert!(stability_leading_coefficient(n) > 0.0, "n={n}");
        }
    }

    #[test]
    fn low_dimensions_always_unstable() {
        // Negative on the whole supercritical range for n <= 12.
        for n in 5..=12u32 {
            let pn = sobolev_exponent(n).unwrap();
            for k in 0..400 {
                let p = pn + (1e4 - pn) * k as f64 / 399.0;
                assert!(
                    stability_polynomial(p, n, QForm::Expanded) < 0.0,
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn critical_exponent_dichotomy() {
        for n in 5..=12 {
            assert_eq!(critical_exponent(n).unwrap(), None, "n={n}");
        }
        for n in 13..=20 {
            let pc = critical_exponent(n)
                .unwrap()
                .expect("root exists for n >= 13");
            let pn = sobolev_exponent(n).unwrap();
            assert!(pc > pn, "n={n}");
            let resid = stability_polynomial(pc, n, QForm::Expanded).abs();
            let scale = stability_polynomial(0.0, n, QForm::Expanded);
            assert!(
                resid <= 1e-9 * scale,
                "n={n}: residual {resid} vs scale {scale}"
            );
        }
        assert!(critical_exponent(4).is_err());
    }

    #[test]
    fn critical_exponent_13_bracket() {
        // Direct evaluation of the expanded quartic pins the bracket.
        assert_eq!(
            stability_polynomial(20.0, 13, QForm::Expanded),
            -56_509_431.0
        );
        assert_eq!(
            stability_polynomial(30.0, 13, QForm::Expanded),
            45_086_409.0
        );
        let pc = critical_exponent(13).unwrap().unwrap();
        assert!(pc > 20.0 && pc < 30.0, "pc = {pc}");
        // n = 15 bracket
        assert_eq!(stability_polynomial(5.0, 15, QForm::Expanded), -403_200.0);
        assert_eq!(
            stability_polynomial(10.0, 15, QForm::Expanded),
            27_474_425.0
        );
        let pc = critical_exponent(15).unwrap().unwrap();
        assert!(pc > 5.0 && pc < 10.0, "pc = {pc}");
    }

    #[test]
    fn sign_pattern_around_the_critical_exponent() {
        // negative on [p_n, p_c), non-negative from p_c on
        for n in 13..=20u32 {
            let pn = sobolev_exponent(n).unwrap();
            let pc = critical_exponent(n).unwrap().unwrap();
            for k in 0..200 {
                let p = pn + (pc - pn) * k as f64 / 200.0;
                assert!(stability_polynomial(p, n, QForm::Expanded) < 0.0, "n={n} p={p}");
            }
            for k in 1..=200 {
                let p = pc + 50.0 * k as f64 / 200.0;
                assert!(stability_polynomial(p, n, QForm::Expanded) >= 0.0, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(5, 2.0), Regime::NoPositiveSolution);
        assert_eq!(classify(12, 100.0), Regime::SupercriticalUnstable);
        assert_eq!(classify(13, 30.0), Regime::SupercriticalStable);
        assert_eq!(classify(13, 17.0 / 9.0), Regime::CriticalSobolev);
        assert_eq!(classify(13, 2.0), Regime::SupercriticalUnstable);
        assert_eq!(classify(3, 7.0), Regime::NoPositiveSolution);
        // ties classify as stable
        let pc = critical_exponent(13).unwrap().unwrap();
        assert_eq!(classify(13, pc.next_up()), Regime::SupercriticalStable);
    }

    #[test]
    fn problem_params_validation() {
        assert!(ProblemParams::new(4, 2.0).is_err());
        assert!(ProblemParams::new(13, 1.0).is_err());
        assert!(ProblemParams::new(13, f64::NAN).is_err());
        let params = ProblemParams::new(13, 30.0).unwrap();
        assert!(rel(params.m(), 4.0 / 29.0) < 1e-16);
        assert!(params.is_supercritical());
    }

    #[test]
    fn stability_roots_structure() {
        let params = ProblemParams::new(13, 30.0).unwrap();
        let rs = stability_roots(&params).unwrap();
        let center = 4.0 / 29.0 - 4.5;
        assert!(rel(rs.symmetry_center, center) < 1e-14);
        assert!(rs.roots[0] < 0.0 && rs.roots[1] < 0.0 && rs.roots[2] < 0.0);
        assert!(rs.roots[3] > 0.0);
        for w in rs.roots.windows(2) {
            assert!(w[0] <= w[1]);
        }
        // pairwise symmetry
        let twice = 2.0 * rs.symmetry_center;
        assert!((rs.roots[0] + rs.roots[3] - twice).abs() <= 1e-10 * twice.abs());
        assert!((rs.roots[1] + rs.roots[2] - twice).abs() <= 1e-10 * twice.abs());
    }

    #[test]
    fn stability_roots_residuals() {
        for (n, p) in [(13u32, 30.0), (15, 10.0), (14, 20.0), (20, 4.0)] {
            let params = ProblemParams::new(n, p).unwrap();
            let rs = stability_roots(&params).unwrap();
            let coeffs = char_polynomial_coeffs(&params, p);
            let scale = coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
            for &root in &rs.roots {
                let v = stability_char_value(&params, root);
                assert!(v.abs() <= 1e-8 * scale, "(n,p)=({n},{p}) root {root}: {v}");
            }
        }
    }

    #[test]
    fn stability_roots_double_root_at_threshold() {
        let pc = critical_exponent(13).unwrap().unwrap();
        let params = ProblemParams::new(13, pc).unwrap();
        let rs = stability_roots(&params).unwrap();
        // middle pair collapses onto the symmetry centre
        assert!((rs.roots[1] - rs.symmetry_center).abs() < 1e-6);
        assert!((rs.roots[2] - rs.symmetry_center).abs() < 1e-6);
    }

    #[test]
    fn stability_roots_rejects_unstable() {
        let params = ProblemParams::new(13, 2.0).unwrap();
        match stability_roots(&params) {
            Err(QuarticError::StabilityViolated { q }) => assert!(q < 0.0),
            other => panic!("expected StabilityViolated, got {other:?}"),
        }
        let params = ProblemParams::new(13, 1.5).unwrap();
        assert!(matches!(
            stability_roots(&params),
            Err(QuarticError::SubcriticalExponent { .. })
        ));
    }

    #[test]
    fn monotonicity_roots_structure() {
        for (n, p) in [(13u32, 30.0), (15, 10.0), (13, 2.0)] {
            let params = ProblemParams::new(n, p).unwrap();
            let rs = monotonicity_roots(&params).unwrap();
            assert_eq!(rs.roots[2], 0.0, "zero root exact");
            assert_eq!(rs.roots[1], 2.0 * rs.symmetry_center, "paired root exact");
            assert!(rs.roots[0] < rs.roots[1]);
            assert!(rs.roots[3] > params.m(), "(n,p)=({n},{p})");
            let coeffs = char_polynomial_coeffs(&params, 1.0);
            let scale = coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
            for &root in &rs.roots {
                let v = monotonicity_char_value(&params, root);
                assert!(v.abs() <= 1e-8 * scale, "root {root}: {v}");
            }
        }
        let params = ProblemParams::new(13, 17.0 / 9.0).unwrap();
        assert!(monotonicity_roots(&params).is_err());
    }

    /// Cross-check of the symmetry-reduction roots against eigenvalues of
    /// the companion matrix of the expanded quartic.
    fn companion_roots(coeffs: [f64; 5]) -> Vec<f64> {
        use nalgebra::DMatrix;
        // coeffs are monic ascending: c0 + c1 x + c2 x² + c3 x³ + x⁴
        let mut m = DMatrix::<f64>::zeros(4, 4);
        for i in 1..4 {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..4 {
            m[(i, 3)] = -coeffs[i];
        }
        let eigen = m.complex_eigenvalues();
        let mut out: Vec<f64> = eigen
            .iter()
            .filter(|z| z.im.abs() < 1e-7 * (1.0 + z.re.abs()))
            .map(|z| z.re)
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    #[test]
    fn roots_match_companion_matrix_oracle() {
        for (n, p) in [(13u32, 30.0), (15, 10.0), (14, 25.0)] {
            let params = ProblemParams::new(n, p).unwrap();
            for (rs, weight) in [
                (stability_roots(&params).unwrap(), p),
                (monotonicity_roots(&params).unwrap(), 1.0),
            ] {
                let oracle = companion_roots(char_polynomial_coeffs(&params, weight));
                assert_eq!(oracle.len(), 4, "(n,p)=({n},{p})");
                for (ours, theirs) in rs.roots.iter().zip(&oracle) {
                    assert!(
                        (ours - theirs).abs() < 1e-8 * (1.0 + theirs.abs()),
                        "(n,p)=({n},{p}): {ours} vs oracle {theirs}"
                    );
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn symbol_symmetric_about_local_max(alpha in -50.0f64..50.0, n in 5u32..25) {
                let c = (n as f64 - 4.0) / 2.0;
                let a = biharmonic_symbol(alpha, n);
                let b = biharmonic_symbol(2.0 * c - alpha, n);
                let scale = a.abs().max(b.abs()).max(1.0);
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }

            #[test]
            fn forms_agree_everywhere(p in 1.01f64..50.0, n in 5u32..25) {
                let f = stability_polynomial(p, n, QForm::Factored);
                let e = stability_polynomial(p, n, QForm::Expanded);
                prop_assert!((f - e).abs() <= 1e-12 * super::term_scale(p, n));
            }

            #[test]
            fn root_sets_keep_their_invariants(n in 13u32..22, extra in 0.1f64..40.0) {
                // p above the critical exponent keeps the stability condition.
                let pc = critical_exponent(n).unwrap().unwrap();
                let params = ProblemParams::new(n, pc + extra).unwrap();
                let rs = stability_roots(&params).unwrap();
                let twice = 2.0 * rs.symmetry_center;
                prop_assert!(rs.roots[2] < 0.0 && rs.roots[3] > 0.0);
                prop_assert!((rs.roots[0] + rs.roots[3] - twice).abs() <= 1e-10 * twice.abs().max(1.0));
                prop_assert!((rs.roots[1] + rs.roots[2] - twice).abs() <= 1e-10 * twice.abs().max(1.0));
                let ms = monotonicity_roots(&params).unwrap();
                prop_assert!(ms.roots[3] > params.m());
                prop_assert!(ms.roots[0] < ms.roots[1] && ms.roots[1] < 0.0);
            }
        }
    }
}
