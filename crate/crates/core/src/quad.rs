//! Adaptive Simpson quadrature with an accumulated error estimate.

pub(crate) struct QuadResult {
    pub value: f64,
    pub error: f64,
}

fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut u64,
    err_acc: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, fa, m, fm, flm);
    let right = simpson(m, fm, b, fb, frm);
    let delta = left + right - whole;
    if depth == 0 || *budget == 0 || delta.abs() <= 15.0 * tol {
        *err_acc += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    *budget -= 1;
    recurse(
        f,
        a,
        fa,
        m,
        fm,
        flm,
        left,
        tol / 2.0,
        depth - 1,
        budget,
        err_acc,
    ) + recurse(
        f,
        m,
        fm,
        b,
        fb,
        frm,
        right,
        tol / 2.0,
        depth - 1,
        budget,
        err_acc,
    )
}

/// Integrate `f` over `[a, b]` to the requested absolute tolerance.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
        };
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    let mut err_acc = 0.0;
    let mut budget: u64 = 1_000_000;
    let value = recurse(
        f,
        a,
        fa,
        b,
        fb,
        fm,
        whole,
        tol.max(1e-300),
        40,
        &mut budget,
        &mut err_acc,
    );
    QuadResult {
        value,
        error: err_acc,
    }
}

/// As [`adaptive_simpson`] with the tolerance chosen relative to a crude
/// composite estimate of the integral's own magnitude.
pub(crate) fn adaptive_simpson_rel<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> QuadResult {
    let panels = 32;
    let h = (b - a) / panels as f64;
    let mut crude = 0.0f64;
    for k in 0..panels {
        let xa = a + k as f64 * h;
        crude += simpson(xa, f(xa), xa + h, f(xa + h), f(xa + 0.5 * h)).abs();
    }
    adaptive_simpson(f, a, b, rel_tol * crude)
}

/// Integrate `f` over `[a, ∞)` by fixed-width log-radius blocks, stopping
/// once a block is negligible against the accumulated total. The estimated
/// truncation remainder is folded into the error, assuming the observed
/// geometric block decay continues.
pub(crate) fn integrate_log_tail<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    rel_tol: f64,
    max_blocks: u32,
) -> Result<QuadResult, String> {
    let mut total = 0.0f64;
    let mut err = 0.0f64;
    let mut left = a;
    let mut prev_block: Option<f64> = None;
    let mut ratio = 0.5f64;
    for _ in 0..max_blocks {
        let right = left * 10.0;
        let block = adaptive_simpson_rel(f, left, right, rel_tol);
        total += block.value;
        err += block.error;
        if let Some(prev) = prev_block {
            if prev.abs() > 0.0 {
                ratio = (block.value.abs() / prev.abs()).min(0.99);
            }
        }
        prev_block = Some(block.value);
        if block.value.abs() <= rel_tol * total.abs().max(1e-300) {
            err += block.value.abs() * ratio / (1.0 - ratio);
            return Ok(QuadResult {
                value: total,
                error: err,
            });
        }
        left = right;
    }
    Err(format!(
        "integral over [{a}, inf) did not converge within {max_blocks} decades"
    ))
}
