//! Terminating Gauss hypergeometric series and log-gamma.

use crate::error::{GmpError, Result};

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn check_pole(n: usize, c: f64) -> Result<()> {
    // (c)_j vanishes for some j < n when c is one of 0, -1, ..., -(n-1).
    if c <= 0.0 && c.fract() == 0.0 && c > -(n as f64) {
        return Err(GmpError::Pole { n, c });
    }
    Ok(())
}

/// `2F1(-n, s; c; z)`: the finite sum over `j = 0..=n`, accumulated with the
/// term ratio `t_{j+1} / t_j = (j - n)(s + j) z / ((c + j)(j + 1))`.
pub fn hyp2f1_terminating(n: usize, s: f64, c: f64, z: f64) -> Result<f64> {
    check_pole(n, c)?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..n {
        let jf = j as f64;
        term *= (jf - n as f64) * (s + jf) * z / ((c + jf) * (jf + 1.0));
        sum += term;
    }
    Ok(sum)
}

/// Coefficients `p_j` of `2F1(-n, s; c; -y) = sum_j p_j y^j`; `p_0 = 1`.
pub fn hyp2f1_poly_in_y(n: usize, s: f64, c: f64) -> Result<Vec<f64>> {
    check_pole(n, c)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut term = 1.0;
    coeffs.push(term);
    for j in 0..n {
        let jf = j as f64;
        // z = -y folded into the ratio
        term *= -(jf - n as f64) * (s + jf) / ((c + jf) * (jf + 1.0));
        coeffs.push(term);
    }
    Ok(coeffs)
}

/// Horner evaluation of `sum_j p_j y^j` and its derivative.
pub fn poly_eval(coeffs: &[f64], y: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * y + p;
        p = p * y + c;
    }
    (p, dp)
}
