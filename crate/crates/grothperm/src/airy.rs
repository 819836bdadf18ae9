//! Airy function `Ai` and its derivative.
//!
//! `|x| <= 8`: Maclaurin series in double-double arithmetic, which absorbs
//! the cancellation between the two series (about `e^{2|x|^{3/2}/3}`).
//! `|x| > 8`: the standard asymptotic expansions, truncated at the smallest
//! term; there `e^{-2ζ} < 10^{-13}`.

use std::f64::consts::{FRAC_PI_4, PI};

use twofloat::TwoFloat;

pub const SWITCHOVER: f64 = 8.0;

const AI0: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: (f64, f64) = (0.2588194037928068, -2.522243111610832e-17);

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> (f64, f64) {
    if x.abs() <= SWITCHOVER {
        maclaurin(x)
    } else if x > 0.0 {
        asymptotic_pos(x)
    } else {
        asymptotic_neg(-x)
    }
}

pub fn ai(x: f64) -> f64 {
    airy(x).0
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x = TwoFloat::from(x);
    let x3 = x * x * x;
    let mut f = TwoFloat::from(1.0);
    let mut g = x;
    let mut fp = TwoFloat::from(0.0);
    let mut gp = TwoFloat::from(1.0);
    let mut t = TwoFloat::from(1.0);
    let mut u = x;
    let mut d = x * x / 2.0;
    let mut e = TwoFloat::from(1.0);
    let eps = 1e-34;
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        t = t * x3 / ((k3 + 2.0) * (k3 + 3.0));
        u = u * x3 / ((k3 + 3.0) * (k3 + 4.0));
        e = e * x3 / ((k3 + 1.0) * (k3 + 3.0));
        f += t;
        g += u;
        fp += d;
        gp += e;
        d = d * x3 / ((k3 + 3.0) * (k3 + 5.0));
        let small = |v: TwoFloat, s: TwoFloat| v.hi().abs() <= eps * s.hi().abs().max(1.0);
        if small(t, f) && small(u, g) && small(d, fp) && small(e, gp) {
            break;
        }
    }
    let c1 = TwoFloat::new_add(AI0.0, AI0.1);
    let c2 = TwoFloat::new_add(MINUS_AIP0.0, MINUS_AIP0.1);
    (f64::from(c1 * f - c2 * g), f64::from(c1 * fp - c2 * gp))
}

/// Coefficients `u_k` and `v_k` of the asymptotic expansions.
fn uv(k_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..=k_max {
        let kf = k as f64;
        let prev = u[k - 1];
        let uk = prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0));
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

fn truncated(coef: &[f64], z: f64, alternate: bool, start: usize, stride: usize) -> f64 {
    let mut s = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < coef.len() {
        let term = coef[k] / z.powi(k as i32);
        if term.abs() > last {
            break;
        }
        s += sign * term;
        last = term.abs();
        if alternate {
            sign = -sign;
        }
        k += stride;
    }
    s
}

fn asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = uv(60);
    let su = truncated(&u, zeta, true, 0, 1);
    let sv = truncated(&v, zeta, true, 0, 1);
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    (pre / x.powf(0.25) * su, -pre * x.powf(0.25) * sv)
}

fn asymptotic_neg(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (u, v) = uv(60);
    let th = zeta + FRAC_PI_4;
    let (s, c) = th.sin_cos();
    let ue = truncated(&u, zeta, true, 0, 2);
    let uo = truncated(&u, zeta, true, 1, 2);
    let ve = truncated(&v, zeta, true, 0, 2);
    let vo = truncated(&v, zeta, true, 1, 2);
    let ai = (s * ue - c * uo) / (PI.sqrt() * z.powf(0.25));
    let aip = -z.powf(0.25) / PI.sqrt() * (c * ve + s * vo);
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let cases = [
            (-9.0, -0.02213372154734140367, -0.97566398092633159471),
            (-7.5, 0.32177571638064787527, 0.31880950669855459621),
            (-3.0, -0.37881429367765807435, 0.31458376921659881365),
            (0.5, 0.23169360648083348977, -0.22491053266468389314),
            (4.9, 1.3599211701506742767e-4, -3.0761599633764950659e-4),
            (7.9, 6.2396400972839341797e-8, -1.7729958329430335231e-7),
            (9.0, 2.4711684308724898433e-9, -7.4806413896589464128e-9),
        ];
        for (x, a, ap) in cases {
            let (ga, gap) = airy(x);
            assert!(((ga - a) / a).abs() < 1e-10, "Ai({x}) = {ga}, want {a}");
            assert!(((gap - ap) / ap).abs() < 1e-10, "Ai'({x}) = {gap}, want {ap}");
        }
    }

    #[test]
    fn continuous_at_switchover() {
        for x in [SWITCHOVER, -SWITCHOVER] {
            let a = maclaurin(x);
            let b = if x > 0.0 { asymptotic_pos(x) } else { asymptotic_neg(-x) };
            assert!(((a.0 - b.0) / a.0).abs() < 1e-10);
            assert!(((a.1 - b.1) / a.1).abs() < 1e-10);
        }
    }
}
