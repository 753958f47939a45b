//! Log-gamma for positive real arguments.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// zeta(n) - 1 for n = 2..40.
const ZETA_MINUS_ONE: [f64; 39] = [
    6.44934066848226406e-01,
    2.02056903159594292e-01,
    8.23232337111381857e-02,
    3.69277551433699266e-02,
    1.73430619844491402e-02,
    8.34927738192282713e-03,
    4.07735619794433960e-03,
    2.00839282608221426e-03,
    9.94575127818085256e-04,
    4.94188604119464529e-04,
    2.46086553308048320e-04,
    1.22713347578489145e-04,
    6.12481350587048277e-05,
    3.05882363070204933e-05,
    1.52822594086518710e-05,
    7.63719763789976257e-06,
    3.81729326499984022e-06,
    1.90821271655393897e-06,
    9.53962033872796212e-07,
    4.76932986787806447e-07,
    2.38450502727733004e-07,
    1.19219925965311064e-07,
    5.96081890512594801e-08,
    2.98035035146522793e-08,
    1.49015548283650427e-08,
    7.45071178983543006e-09,
    3.72533402478845728e-09,
    1.86265972351304914e-09,
    9.31327432419668166e-10,
    4.65662906503378366e-10,
    2.32831183367650534e-10,
    1.16415501727005193e-10,
    5.82077208790270145e-11,
    2.91038504449710001e-11,
    1.45519218910419849e-11,
    7.27595983505748180e-12,
    3.63797954737865086e-12,
    1.81898965030706607e-12,
    9.09494784026388841e-13,
];

/// `ln Gamma(2 + z)` for `|z| <= 1/2`.
fn ln_gamma_2p(z: f64) -> f64 {
    let mut s = 0.0;
    let mut p = -z;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let n = (i + 2) as f64;
        p *= -z;
        s += zm1 * p / n;
    }
    z * (1.0 - EULER_GAMMA) + s
}

fn stirling(x: f64) -> f64 {
    let x2 = x * x;
    let series = (1.0 / 12.0
        + (-1.0 / 360.0
            + (1.0 / 1260.0
                + (-1.0 / 1680.0 + (1.0 / 1188.0 + (-691.0 / 360360.0 + 1.0 / (156.0 * x2)) / x2) / x2)
                    / x2)
                / x2)
            / x2)
        / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParams(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(log_gamma_pos(x))
}

pub(crate) fn log_gamma_pos(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        return log_gamma_pos(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_2p(x - 1.0) - x.ln();
    }
    if x <= 2.5 {
        return ln_gamma_2p(x - 2.0);
    }
    if x >= 15.0 {
        return stirling(x);
    }
    let mut shifted = x;
    let mut logs = 0.0;
    while shifted < 15.0 {
        logs += shifted.ln();
        shifted += 1.0;
    }
    stirling(shifted) - logs
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    log_gamma_pos(n as f64 + 1.0)
}
