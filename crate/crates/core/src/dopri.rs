//! Dormand-Prince 5(4) embedded pair. One explicit step with a scaled
//! error estimate; the adaptive driver lives with the radial system.

const STAGES: usize = 7;

const C: [f64; STAGES] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; STAGES] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Fifth-order weights (identical to the last tableau row).
const B: [f64; STAGES] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Difference between the fifth- and fourth-order weights.
const E: [f64; STAGES] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) const ORDER: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepResult<const N: usize> {
    pub y: [f64; N],
    /// RMS of the embedded error over the tolerance scale; accept when <= 1.
    pub err_norm: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Stepper<const N: usize> {
    pub rtol: f64,
    /// Per-component absolute floor, scaled to each component's natural
    /// magnitude so the controller is equivariant under problem rescaling.
    pub atol: [f64; N],
}

impl<const N: usize> Stepper<N> {
    pub fn step<F>(&self, f: &F, t: f64, y: &[f64; N], h: f64) -> StepResult<N>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let mut k = [[0.0f64; N]; STAGES];
        k[0] = f(t, y);
        for i in 1..STAGES {
            let mut yi = *y;
            for (j, kj) in k.iter().enumerate().take(i) {
                let a = A[i][j];
                if a != 0.0 {
                    for (yin, kjn) in yi.iter_mut().zip(kj.iter()) {
                        *yin += h * a * kjn;
                    }
                }
            }
            k[i] = f(t + C[i] * h, &yi);
        }

        let mut y_new = *y;
        for (i, ki) in k.iter().enumerate() {
            if B[i] != 0.0 {
                for (yn, kin) in y_new.iter_mut().zip(ki.iter()) {
                    *yn += h * B[i] * kin;
                }
            }
        }

        let mut err_sq = 0.0;
        for comp in 0..N {
            let mut e = 0.0;
            for (i, ki) in k.iter().enumerate() {
                e += E[i] * ki[comp];
            }
            e *= h;
            let scale = self.atol[comp] + self.rtol * y[comp].abs().max(y_new[comp].abs());
            let ratio = e / scale;
            err_sq += ratio * ratio;
        }
        StepResult {
            y: y_new,
            err_norm: (err_sq / N as f64).sqrt(),
        }
    }

    /// Step-size factor from the embedded error, clamped to [0.2, 5].
    pub fn factor(&self, err_norm: f64) -> f64 {
        if err_norm == 0.0 {
            return 5.0;
        }
        (0.9 * err_norm.powf(-1.0 / ORDER)).clamp(0.2, 5.0)
    }
}
