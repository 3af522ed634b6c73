//! Closed forms for trees: the magnitude of any tree, and the spread and
//! maximum diversity of the linear tree `L_N` and the corona `C_N`.

use crate::error::{check_scale, Error, Result};

fn check_count(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        Err(Error::param(format!("{what} needs N >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

/// `|tT_N| = (N (e^t - 1) + 2) / (e^t + 1)` for every tree with `N` vertices
/// and unit edges.
pub fn tree_magnitude(n: usize, t: f64) -> Result<f64> {
    check_count(n, 1, "tree magnitude")?;
    check_scale(t)?;
    let nf = n as f64;
    if t < 1.0 {
        let u = t.exp_m1();
        Ok((nf * u + 2.0) / (u + 2.0))
    } else {
        let e = (-t).exp();
        Ok((nf * (1.0 - e) + 2.0 * e) / (1.0 + e))
    }
}

/// One summand of `E_0(tL_N)`: the reciprocal row sum at a vertex with `a`
/// vertices on one side and `b` on the other. Written divided through by
/// `e^t` so that large `t` does not overflow.
fn linear_term(t: f64, a: f64, b: f64) -> (f64, f64) {
    let e = (-t).exp();
    let num = -(-t).exp_m1();
    let den = 1.0 + e - (-t * (a + 1.0)).exp() - (-t * (b + 1.0)).exp();
    (num, den)
}

/// `E_0(tL_N) = sum_i (e^t - 1) / (1 + e^t - e^{-t(i-1)} - e^{-t(N-i)})`.
pub fn linear_tree_spread(n: usize, t: f64) -> Result<f64> {
    check_count(n, 2, "linear tree")?;
    check_scale(t)?;
    let u = t.exp_m1();
    Ok((1..=n)
        .map(|i| {
            let (a, b) = ((i - 1) as f64, (n - i) as f64);
            if t < 1.0 {
                // expm1 keeps the small-t denominator accurate
                u / (u - (-t * a).exp_m1() - (-t * b).exp_m1())
            } else {
                let (num, den) = linear_term(t, a, b);
                num / den
            }
        })
        .sum())
}

/// Analytic `d/dt E_0(tL_N)`.
pub fn linear_tree_spread_derivative(n: usize, t: f64) -> Result<f64> {
    check_count(n, 2, "linear tree")?;
    check_scale(t)?;
    let e = (-t).exp();
    Ok((1..=n)
        .map(|i| {
            let (a, b) = ((i - 1) as f64, (n - i) as f64);
            let (num, den) = linear_term(t, a, b);
            let d_num = e;
            let d_den =
                -e + (a + 1.0) * (-t * (a + 1.0)).exp() + (b + 1.0) * (-t * (b + 1.0)).exp();
            (d_num * den - num * d_den) / (den * den)
        })
        .sum())
}

/// `E_0(tC_N) = 1/(1 + (N-1)e^{-t}) + (N-1)/(1 + e^{-t} + (N-2)e^{-2t})`.
pub fn corona_spread(n: usize, t: f64) -> Result<f64> {
    check_count(n, 2, "corona")?;
    check_scale(t)?;
    let nf = n as f64;
    let e = (-t).exp();
    Ok(1.0 / (1.0 + (nf - 1.0) * e) + (nf - 1.0) / (1.0 + e + (nf - 2.0) * e * e))
}

/// `|tC_N|_+`: the tree magnitude for `t >= ln(N-2)`; below that the centre
/// is dropped and the `N-1` leaves give `(N-1)/(1 + (N-2)e^{-2t})`.
pub fn corona_maxdiv(n: usize, t: f64) -> Result<f64> {
    check_count(n, 3, "corona maximum diversity")?;
    check_scale(t)?;
    let nf = n as f64;
    if t >= (nf - 2.0).ln() {
        tree_magnitude(n, t)
    } else {
        Ok((nf - 1.0) / (1.0 + (nf - 2.0) * (-2.0 * t).exp()))
    }
}
