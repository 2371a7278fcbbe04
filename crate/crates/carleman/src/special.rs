//! Real special functions: the gamma function and the generalized binomial
//! coefficient, in plain and log form.
//!
//! The asymptotic scalings elsewhere in the crate combine factors like
//! `binom(n, −λ−1)·ρ^{n+1+λ}` whose pieces overflow or underflow doubles
//! long before the product does; the log forms here let callers assemble
//! such products in log space and exponentiate once.
//!
//! Gamma uses the Spouge approximation, whose term count scales with the
//! working precision, with the reflection identity
//! `Γ(1−x)Γ(x) = π/sin(πx)` for arguments left of 1/2.

use crate::error::{Error, Result};
use crate::scalar::{pi, real};
use rug::ops::Pow;
use rug::{Assign, Float};

/// Inputs within this distance of a non-positive integer are treated as
/// sitting on the pole itself.
const INTEGER_SNAP: f64 = 1e-12;

/// Inputs this close to a pole (but not snapped onto it) are rejected
/// rather than evaluated: the result would be finite but enormous, and the
/// asymptotics callers must not silently amplify argument noise.
const POLE_GUARD: f64 = 1e-9;

const GUARD_BITS: u32 = 64;

/// Returns `Some(k)` when `x` is within `tol` of the integer `k`.
fn near_integer(x: &Float, tol: f64) -> Option<i64> {
    let r = x.clone().round();
    let d = Float::with_val(x.prec(), x - &r).abs();
    if d.to_f64() < tol {
        Some(r.to_f64() as i64)
    } else {
        None
    }
}

/// Number of Spouge series terms needed for roughly `prec` result bits.
fn spouge_terms(prec: u32) -> u32 {
    // Error bound ~ (2π)^{-(a+1/2)} / sqrt(a): each term buys log2(2π) bits.
    ((prec + 16) as f64 / std::f64::consts::TAU.log2()).ceil() as u32 + 2
}

/// Γ(x) for x ≥ 1/2 at working precision: the argument is first reduced
/// into [1/2, 5/2) through the recurrence Γ(x) = (x−1)Γ(x−1), because the
/// Spouge sum cancels badly when evaluated far from the origin.
fn gamma_pos(x: &Float, work: u32) -> Float {
    let shift = (x.to_f64() - 1.5).floor().max(0.0) as u64;
    if shift == 0 {
        return gamma_spouge(x, work);
    }
    let mut prod = Float::with_val(work, 1u32);
    let mut xi = Float::with_val(work, x);
    for _ in 0..shift {
        xi -= 1u32;
        prod *= &xi;
    }
    prod * gamma_spouge(&xi, work)
}

/// `ln Γ(x)` for x ≥ 1/2, same reduction as [`gamma_pos`] but summed in
/// log space so huge arguments stay representable cheaply.
fn ln_gamma_pos(x: &Float, work: u32) -> Float {
    let shift = (x.to_f64() - 1.5).floor().max(0.0) as u64;
    if shift == 0 {
        return gamma_spouge(x, work).ln();
    }
    let mut acc = Float::new(work);
    let mut xi = Float::with_val(work, x);
    for _ in 0..shift {
        xi -= 1u32;
        acc += Float::with_val(work, xi.clone().ln());
    }
    acc + gamma_spouge(&xi, work).ln()
}

/// Spouge series sum `c0 + Σ c_k/(z+k)` and the log-prefactor pieces, for
/// `z = x − 1` with `x` in the reduced range. Returns Γ(x) at working
/// precision.
fn gamma_spouge(x: &Float, work: u32) -> Float {
    let a = spouge_terms(work);
    let z = Float::with_val(work, x - 1u32);

    let two_pi = Float::with_val(work, pi(work) * 2u32);
    let mut sum = two_pi.sqrt();
    // c_k = (-1)^{k-1} (a-k)^{k-1/2} e^{a-k} / (k-1)!
    let mut fact = Float::with_val(work, 1u32); // (k-1)!
    for k in 1..a {
        if k > 1 {
            fact *= k - 1;
        }
        let amk = Float::with_val(work, a - k);
        let ex = Float::with_val(work, Float::with_val(work, k) - 0.5f64);
        let mut ck = amk.clone().pow(&ex);
        ck *= amk.exp();
        ck /= &fact;
        if k % 2 == 0 {
            ck = -ck;
        }
        let den = Float::with_val(work, &z + Float::with_val(work, k));
        sum += ck / den;
    }

    // (z+a)^{z+1/2} e^{-(z+a)} * sum
    let za = Float::with_val(work, &z + Float::with_val(work, a));
    let expo = Float::with_val(work, &z + Float::with_val(work, 0.5));
    let mut g = za.clone().pow(&expo);
    g *= Float::with_val(work, -za).exp();
    g * sum
}

/// Euler gamma function Γ(x).
///
/// Non-positive integers (and anything within `1e−9` of one) raise
/// [`Error::Pole`]. Integer arguments snap to the exact factorial.
pub fn gamma(x: &Float) -> Result<Float> {
    let prec = x.prec();
    let work = prec + GUARD_BITS;

    if let Some(k) = near_integer(x, INTEGER_SNAP) {
        if k <= 0 {
            return Err(Error::Pole { argument: x.to_f64() });
        }
        // Γ(k) = (k-1)!
        return Ok(Float::with_val(prec, Float::factorial((k - 1) as u32)));
    }
    if x.to_f64() < 0.5 {
        if let Some(k) = near_integer(x, POLE_GUARD) {
            if k <= 0 {
                return Err(Error::Pole { argument: x.to_f64() });
            }
        }
        // Reflection: Γ(x) = π / (sin(πx) Γ(1−x)).
        let xw = Float::with_val(work, x);
        let s = sin_pi(&xw);
        let one_minus = Float::with_val(work, 1u32 - &xw);
        let g = gamma_pos(&one_minus, work);
        let mut r = pi(work);
        r /= Float::with_val(work, &s * &g);
        return Ok(Float::with_val(prec, r));
    }
    let xw = Float::with_val(work, x);
    Ok(Float::with_val(prec, gamma_pos(&xw, work)))
}

/// `sin(πx)` with the argument reduced modulo 2 before multiplying by π,
/// so accuracy does not degrade for large |x|.
fn sin_pi(x: &Float) -> Float {
    let work = x.prec();
    let half = Float::with_val(work, x / 2u32);
    let frac = Float::with_val(work, x - half.floor() * 2u32);
    (pi(work) * frac).sin()
}

/// `(log|Γ(x)|, sign of Γ(x))`.
pub fn ln_abs_gamma(x: &Float) -> Result<(Float, i32)> {
    let prec = x.prec();
    let work = prec + GUARD_BITS;

    if let Some(k) = near_integer(x, POLE_GUARD) {
        if k <= 0 {
            return Err(Error::Pole { argument: x.to_f64() });
        }
    }
    if x.to_f64() >= 0.5 {
        let xw = Float::with_val(work, x);
        return Ok((Float::with_val(prec, ln_gamma_pos(&xw, work)), 1));
    }
    // log|Γ(x)| = log π − log|sin πx| − log Γ(1−x); sign follows sin(πx).
    let xw = Float::with_val(work, x);
    let s = sin_pi(&xw);
    let sign = if s.is_sign_negative() { -1 } else { 1 };
    let one_minus = Float::with_val(work, 1u32 - &xw);
    let mut v = pi(work).ln();
    v -= s.abs().ln();
    v -= ln_gamma_pos(&one_minus, work);
    Ok((Float::with_val(prec, v), sign))
}

/// Exact binomial coefficient for non-negative integer arguments.
fn integer_binomial(prec: u32, n: i64, k: i64) -> Float {
    if k < 0 || k > n {
        return real(prec, 0.0);
    }
    let k = k.min(n - k);
    let mut v = Float::with_val(prec + GUARD_BITS, 1u32);
    for i in 1..=k {
        v *= n - k + i;
        v /= i;
    }
    Float::with_val(prec, v)
}

/// Pole classification for one of the three gamma arguments of the
/// generalized binomial.
enum GammaArg {
    Regular,
    Pole,
}

fn classify(x: &Float) -> GammaArg {
    match near_integer(x, POLE_GUARD) {
        Some(k) if k <= 0 => GammaArg::Pole,
        _ => GammaArg::Regular,
    }
}

/// Generalized binomial coefficient `Γ(a+1) / (Γ(b+1) Γ(a−b+1))`.
///
/// Non-negative integer pairs with `b ≤ a` take the exact integer path.
/// A pole in a denominator gamma sends the coefficient to zero; a pole in
/// the numerator that is not cancelled raises [`Error::Pole`].
pub fn gen_binomial(a: &Float, b: &Float) -> Result<Float> {
    let prec = a.prec().max(b.prec());
    let work = prec + GUARD_BITS;

    let ai = near_integer(a, INTEGER_SNAP);
    let bi = near_integer(b, INTEGER_SNAP);
    if let (Some(an), Some(bn)) = (ai, bi) {
        if an >= 0 && bn >= 0 {
            return Ok(integer_binomial(prec, an, bn));
        }
    }

    let a1 = Float::with_val(work, a + 1u32);
    let b1 = Float::with_val(work, b + 1u32);
    let ab1 = Float::with_val(work, Float::with_val(work, a - b) + 1u32);

    if let GammaArg::Pole = classify(&a1) {
        return Err(Error::Pole { argument: a1.to_f64() });
    }
    let den_pole = matches!(classify(&b1), GammaArg::Pole)
        || matches!(classify(&ab1), GammaArg::Pole);
    if den_pole {
        return Ok(real(prec, 0.0));
    }

    let mut v = gamma(&a1)?;
    v /= gamma(&b1)?;
    v /= gamma(&ab1)?;
    Ok(Float::with_val(prec, v))
}

/// `(log|binom(a,b)|, sign)`. Denominator poles yield `(−∞, +1)`.
pub fn log_abs_gen_binomial(a: &Float, b: &Float) -> Result<(Float, i32)> {
    let prec = a.prec().max(b.prec());
    let work = prec + GUARD_BITS;

    let a1 = Float::with_val(work, a + 1u32);
    let b1 = Float::with_val(work, b + 1u32);
    let ab1 = Float::with_val(work, Float::with_val(work, a - b) + 1u32);

    if let GammaArg::Pole = classify(&a1) {
        return Err(Error::Pole { argument: a1.to_f64() });
    }
    if matches!(classify(&b1), GammaArg::Pole) || matches!(classify(&ab1), GammaArg::Pole) {
        let mut v = real(prec, 0.0);
        v.assign(rug::float::Special::NegInfinity);
        return Ok((v, 1));
    }

    let (ln, sn) = ln_abs_gamma(&a1)?;
    let (ld1, sd1) = ln_abs_gamma(&b1)?;
    let (ld2, sd2) = ln_abs_gamma(&ab1)?;
    let mut v = Float::with_val(work, &ln - &ld1);
    v -= &ld2;
    Ok((Float::with_val(prec, v), sn * sd1 * sd2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    const P: u32 = 192;

    fn f(v: f64) -> Float {
        real(P, v)
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma(&f(0.5)).unwrap();
        let sp = pi(P).sqrt();
        let rel = Float::with_val(P, &g - &sp).abs() / sp;
        assert!(rel.to_f64() < 1e-50);
    }

    #[test]
    fn gamma_five_is_24() {
        let g = gamma(&f(5.0)).unwrap();
        assert_eq!(g.to_f64(), 24.0);
    }

    #[test]
    fn gamma_negative_half() {
        // Γ(−1/2) = −2√π by the reflection identity.
        let g = gamma(&f(-0.5)).unwrap();
        let expect = -(pi(P).sqrt() * 2u32);
        let rel = (Float::with_val(P, &g - &expect) / expect).abs();
        assert!(rel.to_f64() < 1e-50);
    }

    #[test]
    fn gamma_pole_rejected() {
        for x in [0.0, -1.0, -2.0, -7.0, -3.0 + 3e-10] {
            assert!(matches!(gamma(&f(x)), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn gamma_matches_mpfr_oracle() {
        // rug exposes MPFR's own gamma; use it as the independent
        // arbitrary-precision evaluation.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..120 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            if (x - x.round()).abs() < 1e-3 {
                continue;
            }
            let ours = gamma(&f(x)).unwrap();
            let theirs = f(x).gamma();
            let rel = (Float::with_val(P, &ours - &theirs) / theirs).abs();
            assert!(
                rel.to_f64() < 1e-45,
                "gamma({x}) off by {:e}",
                rel.to_f64()
            );
        }
        // A couple of large arguments to exercise the prefactor.
        for x in [21.25, 100.5, 1000.25] {
            let ours = gamma(&f(x)).unwrap();
            let theirs = f(x).gamma();
            let rel = (Float::with_val(P, &ours - &theirs) / theirs).abs();
            assert!(rel.to_f64() < 1e-44);
        }
    }

    #[test]
    fn reflection_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut n = 0;
        while n < 200 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            if (x - x.round()).abs() < 1e-3 {
                continue;
            }
            n += 1;
            let gx = gamma(&f(x)).unwrap();
            let g1mx = gamma(&f(1.0 - x)).unwrap();
            let lhs = Float::with_val(P, &gx * &g1mx);
            let rhs = pi(P) / sin_pi(&f(x));
            let rel = (Float::with_val(P, &lhs - &rhs) / &rhs).abs().to_f64();
            assert!(rel < 1e-12, "reflection off at x={x}: {rel:e}");
        }
    }

    #[test]
    fn recurrence_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut n = 0;
        while n < 200 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            if (x - x.round()).abs() < 1e-3 || (x + 1.0 - (x + 1.0).round()).abs() < 1e-3 {
                continue;
            }
            n += 1;
            let lhs = gamma(&f(x + 1.0)).unwrap();
            let rhs = f(x) * gamma(&f(x)).unwrap();
            let rel = (Float::with_val(P, &lhs - &rhs) / &rhs).abs().to_f64();
            assert!(rel < 1e-13, "recurrence off at x={x}: {rel:e}");
        }
    }

    #[test]
    fn integer_binomials_exact() {
        for n in 0..=30i64 {
            let mut expect = 1u128;
            for k in 0..=n {
                let got = gen_binomial(&f(n as f64), &f(k as f64)).unwrap();
                assert_eq!(got.to_f64(), expect as f64, "C({n},{k})");
                // Pascal update to the next k.
                if k < n {
                    expect = expect * (n - k) as u128 / (k + 1) as u128;
                }
            }
        }
    }

    #[test]
    fn binomial_fixtures() {
        // binom(0, -1.5) = 1/(Γ(−1/2)Γ(5/2)) = −2/(3π).
        let v = gen_binomial(&f(0.0), &f(-1.5)).unwrap().to_f64();
        assert!((v - (-0.21220659078919378)).abs() < 1e-14);

        // binom(10, −4/3) = Γ(11)/(Γ(−1/3)Γ(37/3)); value frozen from an
        // independent arbitrary-precision gamma product.
        let v = gen_binomial(&f(10.0), &f(-4.0 / 3.0)).unwrap().to_f64();
        assert!((v - (-0.009866004173121420)).abs() < 1e-15);

        // b > a ≥ 0 integers: denominator pole, coefficient vanishes.
        let v = gen_binomial(&f(3.0), &f(5.0)).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn log_form_fixtures() {
        let (l, s) = log_abs_gen_binomial(&f(5.0), &f(2.0)).unwrap();
        assert_eq!(s, 1);
        assert!((l.to_f64() - 10f64.ln()).abs() < 1e-14);

        let (l, s) = log_abs_gen_binomial(&f(0.0), &f(-1.5)).unwrap();
        assert_eq!(s, -1);
        assert!((l.to_f64() - (2.0 / (3.0 * std::f64::consts::PI)).ln()).abs() < 1e-13);
    }

    #[test]
    fn log_form_consistent_with_direct() {
        for (a, b) in [(200.0, -1.5), (60.0, -4.0 / 3.0), (37.0, 2.5), (150.0, -0.25)] {
            let direct = gen_binomial(&f(a), &f(b)).unwrap();
            let (l, s) = log_abs_gen_binomial(&f(a), &f(b)).unwrap();
            let recon = Float::with_val(P, l.exp() * s);
            let rel = (Float::with_val(P, &recon - &direct) / &direct)
                .abs()
                .to_f64();
            assert!(rel < 1e-12, "log form off at ({a},{b}): {rel:e}");
        }
    }

    #[test]
    fn binomial_asymptotic_scaling() {
        // binom(n, −λ−1) Γ(−λ) n^{λ+1} → 1.
        for lambda in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
            let g = gamma(&f(-lambda)).unwrap();
            let mut devs = Vec::new();
            for n in [1000u32, 10000u32] {
                let b = gen_binomial(&f(n as f64), &f(-lambda - 1.0)).unwrap();
                let scale = real(P, n as f64).pow(&f(lambda + 1.0));
                let ratio = Float::with_val(P, &b * &g) * scale;
                devs.push((ratio.to_f64() - 1.0).abs());
            }
            assert!(devs[0] <= 0.02, "λ={lambda}: dev {:.3e}", devs[0]);
            assert!(devs[1] <= 0.02);
            assert!(devs[1] < devs[0], "deviation must shrink with n");
        }
    }

    #[test]
    fn numerator_pole_raises() {
        assert!(matches!(
            gen_binomial(&f(-2.0), &f(0.5)),
            Err(Error::Pole { .. })
        ));
    }
}
