//! Closed-form bounds: asymptotic limits of the linear programs, the
//! hypercontractive alternative, and the noise-agreement consequences.
//!
//! Everything representable exactly is kept exact; quantities that are
//! genuinely irrational (square roots of non-squares, logarithms, the
//! hypercontractive infimum) drop to f64.

use crate::arith::{rat, rat_int, sqrt_exact, to_f64};
use crate::{Error, Rational, Result};
use num::{One, Signed, Zero};

/// A bound that is either an exact rational or a float approximation.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(Rational),
    Approx(f64),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => to_f64(r),
            BoundValue::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            BoundValue::Exact(r) => Some(r),
            BoundValue::Approx(_) => None,
        }
    }

    fn scale(&self, factor: &Rational) -> BoundValue {
        match self {
            BoundValue::Exact(r) => BoundValue::Exact(factor * r),
            BoundValue::Approx(v) => BoundValue::Approx(to_f64(factor) * v),
        }
    }
}

fn check_density(a: &Rational) -> Result<()> {
    if !a.is_positive() || a > &rat(1, 2) {
        return Err(Error::domain(format!("density {a} outside (0, 1/2]")));
    }
    Ok(())
}

/// Limit of the LP bound on the first-level weight: W_1 <= 8 a^2 phi(a).
/// Below density 1/4 this is 1/sqrt(a) - 1; above, the degree-n
/// certificate is already optimal and the value is 1/(4a).
pub fn phi(a: &Rational) -> Result<BoundValue> {
    check_density(a)?;
    if a > &rat(1, 4) {
        return Ok(BoundValue::Exact(rat(1, 4) / a));
    }
    Ok(match sqrt_exact(a) {
        Some(s) => BoundValue::Exact(s.recip() - Rational::one()),
        None => BoundValue::Approx(1.0 / to_f64(a).sqrt() - 1.0),
    })
}

/// Limit of the LP gap itself: theta(a) = (1 - sqrt(a))^2 / a below
/// density 1/4 and 1/(2a) - 1 above. Related to phi by
/// phi(a) = -(1/2 - 1/(2a) + theta(a)/2).
pub fn theta(a: &Rational) -> Result<BoundValue> {
    check_density(a)?;
    if a >= &rat(1, 4) {
        return Ok(BoundValue::Exact(rat(1, 2) / a - Rational::one()));
    }
    Ok(match sqrt_exact(a) {
        Some(s) => {
            let one_minus = Rational::one() - s;
            BoundValue::Exact(&one_minus * &one_minus / a)
        }
        None => {
            let s = to_f64(a).sqrt();
            BoundValue::Approx((1.0 - s) * (1.0 - s) / to_f64(a))
        }
    })
}

/// The classical level-1 comparison point: W_1 <= 8 a^2 ln(1/a).
pub fn chang_gap(a: &Rational) -> Result<f64> {
    check_density(a)?;
    Ok((1.0 / to_f64(a)).ln())
}

/// Integrand of the hypercontractive bound. Near t = 1 the closed form
/// cancels catastrophically, so a series in u = t - 1 takes over; its
/// error there is O(u^3), far below the 1e-9 accuracy target.
fn hyper_integrand(a: f64, t: f64) -> f64 {
    let ab = 1.0 - a;
    let u = t - 1.0;
    if u.abs() < 1e-3 {
        (ab / (2.0 * a))
            * (1.0 + (2.0 * a - 1.0) * u / 3.0 + (1.0 - a - a * a) * u * u / 6.0)
    } else {
        let w = t * a + ab;
        w * (a * t * t.ln() - w * w.ln()) / (a * a * u * u)
    }
}

/// Hypercontractive bound psi(a) = inf over t > 0 of the integrand;
/// W_1 <= 8 a^2 psi(a). Always below ln(1/a), which is its own t -> inf
/// limit. Coarse log-grid scan plus golden-section refinement.
pub fn psi(a: &Rational) -> Result<f64> {
    check_density(a)?;
    let af = to_f64(a);
    let g = |t: f64| hyper_integrand(af, t);

    const POINTS: usize = 601;
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    let grid = |i: usize| 10f64.powf(-6.0 + 12.0 * i as f64 / (POINTS - 1) as f64);
    for i in 0..POINTS {
        let v = g(grid(i));
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut lo = grid(best_i.saturating_sub(1));
    let mut hi = grid((best_i + 1).min(POINTS - 1));

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..200 {
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    Ok(best_v.min(f1).min(f2))
}

/// Combined level-1 bound eta(a) = min(phi(a), psi(a)), keeping the exact
/// branch on ties so that e.g. eta(1/2) stays the rational 1/2.
pub fn eta(a: &Rational) -> Result<BoundValue> {
    let p = phi(a)?;
    let h = psi(a)?;
    if p.to_f64() <= h + 1e-9 {
        Ok(p)
    } else {
        Ok(BoundValue::Approx(h))
    }
}

/// Optimal certificate location parameter. Below density 1/4 the improved
/// certificate concentrates near degree beta* n with
/// beta* = 1 / (2 (1 - sqrt(a))); at 1/4 and above the optimum sits at
/// the boundary degree n.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaStar {
    Interior(BoundValue),
    Boundary,
}

pub fn beta_star(a: &Rational) -> Result<BetaStar> {
    check_density(a)?;
    if a >= &rat(1, 4) {
        return Ok(BetaStar::Boundary);
    }
    Ok(BetaStar::Interior(match sqrt_exact(a) {
        Some(s) => BoundValue::Exact(((Rational::one() - s) * rat_int(2)).recip()),
        None => BoundValue::Approx(1.0 / (2.0 * (1.0 - to_f64(a).sqrt()))),
    }))
}

/// Finite-n upper bound on the dual optimum. For a <= 1/4 it needs
/// n > 1/a - 1 (the formula degenerates to 0/0 at equality); for
/// a > 1/4 the dual optimum already equals its limit 1/(2a) - 1 once
/// n >= (1-a) / (a - (1-2a)^2).
pub fn lambda_bar_upper(n: usize, a: &Rational) -> Result<BoundValue> {
    check_density(a)?;
    if n == 0 {
        return Err(Error::domain("need n >= 1"));
    }
    let nr = rat_int(n as i64);
    if a <= &rat(1, 4) {
        // strict: at n = 1/a - 1 the expression is 0/0
        if nr <= a.recip() - Rational::one() {
            return Err(Error::domain(format!(
                "upper bound needs n > 1/a - 1 = {}, got {n}",
                a.recip() - Rational::one()
            )));
        }
        let af = to_f64(a);
        let nf = n as f64;
        let s = (af - (1.0 - af) / nf).sqrt();
        let r = (1.0 + s) / (1.0 - af);
        Ok(BoundValue::Approx(
            (1.0 - 1.0 / nf) * (s / af) / (r * (r - 1.0 - 1.0 / nf)),
        ))
    } else {
        let gap = a - (Rational::one() - a * rat_int(2)) * (Rational::one() - a * rat_int(2));
        let threshold = (Rational::one() - a) / gap;
        if nr < threshold {
            return Err(Error::domain(format!(
                "closed form needs n >= {threshold}, got {n}"
            )));
        }
        Ok(BoundValue::Exact(rat(1, 2) / a - Rational::one()))
    }
}

/// Levels m >= 2 admit density-only bounds: W_m <= 4a(1-a) for even m,
/// W_m <= 2a for odd m.
pub fn wm_upper(a: &Rational, m: usize) -> Result<Rational> {
    check_density(a)?;
    if m < 2 {
        return Err(Error::domain("level bounds start at m = 2; use w1_upper"));
    }
    if m % 2 == 0 {
        Ok(a * rat_int(4) * (Rational::one() - a))
    } else {
        Ok(a * rat_int(2))
    }
}

/// Which level-1 bound multiplies 8a^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum W1Mode {
    /// LP limit phi(a)
    ClosedForm,
    /// hypercontractive psi(a)
    Hypercontractive,
    /// eta(a) = min of the two
    Combined,
}

/// First-level weight bound W_1 <= 8 a^2 * {phi, psi, eta}(a).
pub fn w1_upper(a: &Rational, mode: W1Mode) -> Result<BoundValue> {
    let gap = match mode {
        W1Mode::ClosedForm => phi(a)?,
        W1Mode::Hypercontractive => BoundValue::Approx(psi(a)?),
        W1Mode::Combined => eta(a)?,
    };
    let factor = rat_int(8) * a * a;
    Ok(gap.scale(&factor))
}

#[derive(Debug, Clone)]
pub struct NoiseBounds {
    pub lower: BoundValue,
    pub upper: BoundValue,
}

/// Two-sided bounds on the rho-correlated agreement probability
/// q = Pr[x in A, y in A]:
///   q <= min{a, a^2 + 2 a^2 eta rho + (a(1-a) - 2 a^2 eta) rho^2}
///   q >= max{0, a^2 - 2 a^2 eta rho - (a(1-a) - 2 a^2 eta) rho^2}
/// Exact whenever eta(a) is exact.
pub fn noise_bounds(a: &Rational, rho: &Rational) -> Result<NoiseBounds> {
    check_density(a)?;
    if rho.is_negative() || rho > &Rational::one() {
        return Err(Error::domain(format!("rho = {rho} outside [0, 1]")));
    }
    match eta(a)? {
        BoundValue::Exact(e) => {
            let a2 = a * a;
            let lin = &a2 * rat_int(2) * &e * rho;
            let quad = (a * (Rational::one() - a) - &a2 * rat_int(2) * &e) * rho * rho;
            let up = &a2 + &lin + &quad;
            let low = &a2 - &lin - &quad;
            Ok(NoiseBounds {
                lower: BoundValue::Exact(if low.is_negative() { Rational::zero() } else { low }),
                upper: BoundValue::Exact(if &up > a { a.clone() } else { up }),
            })
        }
        BoundValue::Approx(e) => {
            let af = to_f64(a);
            let rf = to_f64(rho);
            let lin = 2.0 * af * af * e * rf;
            let quad = (af * (1.0 - af) - 2.0 * af * af * e) * rf * rf;
            Ok(NoiseBounds {
                lower: BoundValue::Approx((af * af - lin - quad).max(0.0)),
                upper: BoundValue::Approx((af * af + lin + quad).min(af)),
            })
        }
    }
}

/// All the density-only curves at one density, for tabulation.
#[derive(Debug, Clone)]
pub struct BoundProfile {
    pub a: Rational,
    /// degree-n certificate: 1/(4a)
    pub fwy: f64,
    /// LP limit phi(a)
    pub lp: f64,
    /// ln(1/a)
    pub chang: f64,
    /// hypercontractive psi(a)
    pub hyper: f64,
    /// min of lp and hyper
    pub eta: f64,
    /// 8 a^2 eta(a)
    pub w1: f64,
}

pub fn bound_profile(a: &Rational) -> Result<BoundProfile> {
    check_density(a)?;
    let e = eta(a)?;
    let af = to_f64(a);
    Ok(BoundProfile {
        a: a.clone(),
        fwy: 1.0 / (4.0 * af),
        lp: phi(a)?.to_f64(),
        chang: chang_gap(a)?,
        hyper: psi(a)?,
        eta: e.to_f64(),
        w1: 8.0 * af * af * e.to_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }

    #[test]
    fn phi_branches() {
        assert_eq!(phi(&rat(1, 4)).unwrap(), BoundValue::Exact(rat(1, 1)));
        assert_eq!(phi(&rat(1, 16)).unwrap(), BoundValue::Exact(rat(3, 1)));
        assert_eq!(phi(&rat(1, 2)).unwrap(), BoundValue::Exact(rat(1, 2)));
        assert_eq!(phi(&rat(3, 8)).unwrap(), BoundValue::Exact(rat(2, 3)));
        match phi(&rat(1, 8)).unwrap() {
            BoundValue::Approx(v) => assert_close(v, 8f64.sqrt() - 1.0, 1e-12),
            other => panic!("expected approx, got {other:?}"),
        }
        assert!(phi(&rat(3, 4)).is_err());
        assert!(phi(&rat(0, 1)).is_err());
    }

    #[test]
    fn theta_branches_and_identity_with_phi() {
        assert_eq!(theta(&rat(1, 16)).unwrap(), BoundValue::Exact(rat(9, 1)));
        assert_eq!(theta(&rat(1, 2)).unwrap(), BoundValue::Exact(rat(0, 1)));
        assert_eq!(theta(&rat(1, 4)).unwrap(), BoundValue::Exact(rat(1, 1)));
        // phi = -(1/2 - 1/(2a) + theta/2) across both branches
        for den in 2..=40i64 {
            let a = rat(1, den);
            let lhs = phi(&a).unwrap().to_f64();
            let rhs = -(0.5 - 0.5 * den as f64 + theta(&a).unwrap().to_f64() / 2.0);
            assert_close(lhs, rhs, 1e-10);
        }
    }

    #[test]
    fn psi_reference_points() {
        // minimum at t = 1 when a = 1/2, value exactly (1-a)/(2a) = 1/2
        assert_close(psi(&rat(1, 2)).unwrap(), 0.5, 1e-9);
        for den in [3i64, 5, 10, 20, 100] {
            let a = rat(1, den);
            let p = psi(&a).unwrap();
            assert!(p > 0.0);
            assert!(p <= chang_gap(&a).unwrap() + 1e-9, "a = 1/{den}");
            // t = 1 is a feasible point, so psi is below the limit there
            let at_one = (1.0 - 1.0 / den as f64) / (2.0 / den as f64);
            assert!(p <= at_one + 1e-9);
        }
    }

    #[test]
    fn hyper_integrand_series_consistent_with_closed_form() {
        // compare just outside the series window against the series value
        for a in [0.1f64, 0.3, 0.5] {
            for u in [1.5e-3f64, -1.5e-3] {
                let closed = hyper_integrand(a, 1.0 + u);
                let series = (1.0 - a) / (2.0 * a)
                    * (1.0 + (2.0 * a - 1.0) * u / 3.0 + (1.0 - a - a * a) * u * u / 6.0);
                assert_close(closed, series, 1e-8 * closed.abs().max(1.0));
            }
        }
    }

    #[test]
    fn eta_prefers_exact_branch_on_ties() {
        // at a = 1/2, phi = psi = 1/2; the exact side must win
        assert_eq!(eta(&rat(1, 2)).unwrap(), BoundValue::Exact(rat(1, 2)));
        // small density: hypercontractive wins (phi(1/100) = 9, psi < ln 100)
        match eta(&rat(1, 100)).unwrap() {
            BoundValue::Approx(v) => assert!(v < 4.7),
            other => panic!("expected approx, got {other:?}"),
        }
        for den in 2..=50i64 {
            let a = rat(1, den);
            let e = eta(&a).unwrap().to_f64();
            let expect = phi(&a).unwrap().to_f64().min(psi(&a).unwrap());
            assert_close(e, expect, 1e-9);
        }
    }

    #[test]
    fn beta_star_branches() {
        assert_eq!(beta_star(&rat(1, 4)).unwrap(), BetaStar::Boundary);
        assert_eq!(beta_star(&rat(1, 2)).unwrap(), BetaStar::Boundary);
        match beta_star(&rat(1, 16)).unwrap() {
            BetaStar::Interior(BoundValue::Exact(b)) => assert_eq!(b, rat(2, 3)),
            other => panic!("{other:?}"),
        }
        match beta_star(&rat(1, 10)).unwrap() {
            BetaStar::Interior(BoundValue::Approx(b)) => {
                assert_close(b, 1.0 / (2.0 * (1.0 - 0.1f64.sqrt())), 1e-12);
                assert!(b > 0.5 && b < 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lambda_upper_low_density_branch() {
        let v = lambda_bar_upper(12, &rat(1, 4)).unwrap().to_f64();
        assert_close(v, 1.00437, 1e-4);
        // decreases toward the limit theta(1/4) = 1 as n grows
        let v24 = lambda_bar_upper(24, &rat(1, 4)).unwrap().to_f64();
        let v96 = lambda_bar_upper(96, &rat(1, 4)).unwrap().to_f64();
        assert!(v > v24 && v24 > v96 && v96 > 1.0);
        // threshold is strict: n = 1/a - 1 degenerates
        assert!(lambda_bar_upper(3, &rat(1, 4)).is_err());
        assert!(lambda_bar_upper(19, &rat(1, 20)).is_err());
        assert!(lambda_bar_upper(20, &rat(1, 20)).is_ok());
    }

    #[test]
    fn lambda_upper_high_density_branch() {
        assert_eq!(
            lambda_bar_upper(2, &rat(3, 8)).unwrap(),
            BoundValue::Exact(rat(1, 3))
        );
        assert_eq!(
            lambda_bar_upper(1, &rat(1, 2)).unwrap(),
            BoundValue::Exact(rat(0, 1))
        );
        assert!(lambda_bar_upper(1, &rat(3, 8)).is_err());
    }

    #[test]
    fn higher_level_bounds() {
        assert_eq!(wm_upper(&rat(1, 4), 2).unwrap(), rat(3, 4));
        assert_eq!(wm_upper(&rat(1, 4), 3).unwrap(), rat(1, 2));
        assert_eq!(wm_upper(&rat(1, 2), 4).unwrap(), rat(1, 1));
        assert!(wm_upper(&rat(1, 4), 1).is_err());
    }

    #[test]
    fn w1_upper_modes() {
        assert_eq!(
            w1_upper(&rat(1, 2), W1Mode::Combined).unwrap(),
            BoundValue::Exact(rat(1, 1))
        );
        assert_eq!(
            w1_upper(&rat(1, 16), W1Mode::ClosedForm).unwrap(),
            BoundValue::Exact(rat(3, 32))
        );
        let h = w1_upper(&rat(1, 16), W1Mode::Hypercontractive).unwrap();
        assert!(h.exact().is_none());
    }

    #[test]
    fn noise_bounds_exact_at_half_density() {
        for num in 0..=4i64 {
            let rho = rat(num, 4);
            let b = noise_bounds(&rat(1, 2), &rho).unwrap();
            // upper = 1/4 + rho/4 exactly; at rho = 1 it clamps to a = 1/2
            let expect_up = rat(1, 4) + &rho * rat(1, 4);
            assert_eq!(b.upper, BoundValue::Exact(expect_up));
            let expect_low = rat(1, 4) - &rho * rat(1, 4);
            assert_eq!(b.lower, BoundValue::Exact(expect_low));
        }
        let b = noise_bounds(&rat(1, 2), &rat(0, 1)).unwrap();
        assert_eq!(b.upper, BoundValue::Exact(rat(1, 4)));
        assert_eq!(b.lower, BoundValue::Exact(rat(1, 4)));
        assert!(noise_bounds(&rat(1, 2), &rat(3, 2)).is_err());
    }

    #[test]
    fn noise_bounds_clamped_and_ordered() {
        for den in [3i64, 5, 8, 20] {
            let a = rat(1, den);
            for num in 0..=4i64 {
                let rho = rat(num, 4);
                let b = noise_bounds(&a, &rho).unwrap();
                let (lo, hi) = (b.lower.to_f64(), b.upper.to_f64());
                assert!(lo >= 0.0);
                assert!(hi <= to_f64(&a) + 1e-15);
                assert!(lo <= hi + 1e-15);
            }
        }
    }

    #[test]
    fn profile_is_consistent() {
        let p = bound_profile(&rat(1, 10)).unwrap();
        assert_close(p.fwy, 2.5, 1e-12);
        assert_close(p.lp, 10f64.sqrt() - 1.0, 1e-12);
        assert_close(p.chang, 10f64.ln(), 1e-12);
        assert_close(p.eta, p.lp.min(p.hyper), 1e-9);
        assert_close(p.w1, 8.0 * 0.01 * p.eta, 1e-12);
    }
}
