//! Polynomial root finding, zero counting measures, and the zero-location
//! diagnostics: which regions must be free of zeros at large degree, and
//! how the normalized counting measures drift toward the equilibrium
//! measure of the critical curve.

use crate::error::{Error, Result};
use crate::geometry::{DomainKind, DomainSpec};
use crate::ortho::{OrthonormalSet, Poly};
use crate::scalar::{real, Cx};
use crate::special::log_abs_gen_binomial;
use num_complex::Complex64;
use rug::Float;
use std::fmt::Write as _;

/// Weighted point set on the plane.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫ z^k dμ`.
    pub fn moment(&self, k: u32) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in self.points.iter().zip(&self.weights) {
            acc += w * z.powu(k);
        }
        acc
    }

    /// CSV with header `re,im,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,weight\n");
        for (z, w) in self.points.iter().zip(&self.weights) {
            let _ = writeln!(out, "{},{},{}", z.re, z.im, w);
        }
        out
    }
}

/// Roots of one polynomial (with multiplicity; length = degree) and their
/// scaled residuals `|p(root)| / max(1,|root|)^degree`.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub roots: Vec<Cx>,
    pub residuals: Vec<f64>,
}

impl ZeroSet {
    pub fn roots_c64(&self) -> Vec<Complex64> {
        self.roots.iter().map(Cx::to_c64).collect()
    }

    /// CSV with header `re,im,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,residual\n");
        for (z, r) in self.roots.iter().zip(&self.residuals) {
            let zc = z.to_c64();
            let _ = writeln!(out, "{},{},{}", zc.re, zc.im, r);
        }
        out
    }
}

const MAX_SWEEPS: usize = 2000;

/// All roots of `p` by Ehrlich–Aberth simultaneous iteration at
/// `precision_bits` bits, followed by one Newton polish per root.
///
/// Starting points sit on a circle whose radius comes from the coefficient
/// root bound `2·max_k |c_{n−k}/c_n|^{1/k}` (capped by the cruder
/// `1 + max|c_i/c_n|`), with a fixed angular offset to break symmetry.
/// A sweep updates each point in place; iteration stops when every update
/// satisfies `|Δz| ≤ 1e−14·(1+|z|)`.
pub fn find_roots(p: &Poly, precision_bits: u32) -> Result<ZeroSet> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::invalid("root finding needs degree ≥ 1"));
    }
    let prec = precision_bits.max(crate::scalar::MIN_PREC);
    let coeffs: Vec<Cx> = p
        .coeffs()
        .iter()
        .map(|c| Cx::new(Float::with_val(prec, &c.re), Float::with_val(prec, &c.im)))
        .collect();
    let dcoeffs: Vec<Cx> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&real(prec, i as f64)))
        .collect();

    let lead = coeffs[deg].abs().to_f64();
    let mut cauchy = 0f64;
    let mut fuji = 0f64;
    for k in 1..=deg {
        let ratio = coeffs[deg - k].abs().to_f64() / lead;
        cauchy = cauchy.max(ratio);
        if ratio > 0.0 {
            fuji = fuji.max(ratio.powf(1.0 / k as f64));
        }
    }
    let radius = (2.0 * fuji).min(1.0 + cauchy).max(1e-3);

    let eval = |cs: &[Cx], z: &Cx| -> Cx {
        let mut acc = Cx::zero(prec);
        for c in cs.iter().rev() {
            acc = acc.mul(z) + c;
        }
        acc
    };

    let mut zs: Vec<Cx> = (0..deg)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / deg as f64 + 0.376739;
            Cx::from_c64(prec, Complex64::from_polar(radius, theta))
        })
        .collect();

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut max_rel_step = 0f64;
        for i in 0..deg {
            let pv = eval(&coeffs, &zs[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = eval(&dcoeffs, &zs[i]);
            let newton = if dv.is_zero() {
                // Flat spot: nudge off it instead of dividing by zero.
                Cx::from_f64(prec, 1e-6 * (1.0 + zs[i].abs().to_f64()), 0.0)
            } else {
                pv.div(&dv)
            };
            let mut repulse = Cx::zero(prec);
            for j in 0..deg {
                if j != i {
                    repulse = &repulse + (&zs[i] - &zs[j]).recip();
                }
            }
            let denom = Cx::one(prec) - newton.mul(&repulse);
            let step = if denom.is_zero() { newton.clone() } else { newton.div(&denom) };
            let rel = step.abs().to_f64() / (1.0 + zs[i].abs().to_f64());
            max_rel_step = max_rel_step.max(rel);
            zs[i] = &zs[i] - &step;
        }
        if max_rel_step <= 1e-14 {
            converged = true;
            break;
        }
    }

    // One Newton polish per root.
    for z in zs.iter_mut() {
        let pv = eval(&coeffs, z);
        let dv = eval(&dcoeffs, z);
        if !dv.is_zero() && !pv.is_zero() {
            *z = &*z - &pv.div(&dv);
        }
    }

    let residuals: Vec<f64> = zs
        .iter()
        .map(|z| {
            let pv = eval(&coeffs, z).abs().to_f64();
            pv / z.abs().to_f64().max(1.0).powi(deg as i32)
        })
        .collect();

    if !converged {
        let worst = residuals.iter().cloned().fold(0f64, f64::max);
        let max_c = coeffs.iter().map(|c| c.abs().to_f64()).fold(0f64, f64::max);
        if worst > 1e-8 * max_c {
            return Err(Error::NoConvergence { worst_residual: worst });
        }
    }
    Ok(ZeroSet { roots: zs, residuals })
}

/// Normalized counting measure: weight `1/n` on every root.
pub fn counting_measure(zs: &ZeroSet) -> DiscreteMeasure {
    let n = zs.roots.len();
    DiscreteMeasure {
        points: zs.roots_c64(),
        weights: vec![1.0 / n as f64; n],
    }
}

/// `max_{1≤k≤K} |∫z^k da − ∫z^k db|`, a weak-* convergence proxy.
pub fn moment_discrepancy(a: &DiscreteMeasure, b: &DiscreteMeasure, k_max: u32) -> f64 {
    let mut worst = 0f64;
    for k in 1..=k_max {
        worst = worst.max((a.moment(k) - b.moment(k)).norm());
    }
    worst
}

/// Zero-free region to check a [`ZeroSet`] against.
#[derive(Clone, Copy, Debug)]
pub enum ZeroFreeRegion {
    /// Closed exterior of the critical curve minus disks of radius `eps`
    /// around the corners.
    OmegaRhoMinusCornerDisks { eps: f64 },
    /// Points at level depth `margin` inside the critical curve
    /// (`|z^s − 1| ≤ 1 − margin` for the lemniscate).
    CompactInGRho { margin: f64 },
}

/// Output of [`zero_free_check`]: the offending roots, and whether the
/// region makes sense for the domain at all (it degenerates for the disk).
#[derive(Clone, Debug)]
pub struct ZeroFreeReport {
    pub violations: Vec<Complex64>,
    pub region_supported: bool,
}

/// Lists the roots that violate a claimed zero-free region.
pub fn zero_free_check(d: &DomainSpec, zs: &ZeroSet, region: ZeroFreeRegion) -> ZeroFreeReport {
    if d.is_disk() {
        return ZeroFreeReport { violations: Vec::new(), region_supported: false };
    }
    let s = d.petals();
    let corners: Vec<Complex64> = d.corners().iter().map(|c| c.location.to_c64()).collect();
    let mut violations = Vec::new();
    for z in zs.roots_c64() {
        let level = (z.powu(s) - 1.0).norm();
        let hit = match region {
            ZeroFreeRegion::OmegaRhoMinusCornerDisks { eps } => {
                level >= 1.0 && corners.iter().all(|c| (z - c).norm() > eps)
            }
            ZeroFreeRegion::CompactInGRho { margin } => level <= 1.0 - margin,
        };
        if hit {
            violations.push(z);
        }
    }
    ZeroFreeReport { violations, region_supported: true }
}

fn require_corners(d: &DomainSpec) -> Result<()> {
    if d.corners().is_empty() {
        return Err(Error::domain("operation needs a corner-bearing domain"));
    }
    Ok(())
}

fn corner_kernel_sum(d: &DomainSpec, z: &Cx, phases: &[Cx]) -> Result<Cx> {
    let p = z.prec();
    let df = d.interior_map_deriv(z)?;
    let fz = d.interior_map(z)?;
    let mut acc = Cx::zero(p);
    for (c, ph) in d.corners().iter().zip(phases) {
        let fzk = d.interior_map(&c.location)?;
        let dfk = d.interior_map_deriv(&c.location)?;
        let den = &fz - &fzk;
        acc = &acc + dfk.mul(&c.coeff_hat).mul(ph).div(&den.mul(&den));
    }
    Ok(df.mul(&acc))
}

/// The limit functions of the corner-driven normalization: with caller
/// supplied phases `γ_k`,
/// `f(z) = φ_int'(z) Σ_k φ_int'(z_k)·Â_k·e^{2πiγ_k}/[φ_int(z)−φ_int(z_k)]²`.
pub fn limit_function_eval(d: &DomainSpec, phases: &[f64], z: &Cx) -> Result<Cx> {
    require_corners(d)?;
    if phases.len() != d.corners().len() {
        return Err(Error::invalid(format!(
            "need one phase per corner ({} corners, {} phases)",
            d.corners().len(),
            phases.len()
        )));
    }
    let p = z.prec();
    check_off_corners(d, z)?;
    let ph: Vec<Cx> = phases
        .iter()
        .map(|g| Cx::unit(&(crate::scalar::two_pi(p) * real(p, *g))))
        .collect();
    corner_kernel_sum(d, z, &ph)
}

fn check_off_corners(d: &DomainSpec, z: &Cx) -> Result<()> {
    if !d.in_g_rho(z, 1e-3) {
        return Err(Error::domain("point must sit inside the critical curve"));
    }
    for c in d.corners() {
        if (z - &c.location).abs().to_f64() < 1e-3 {
            return Err(Error::domain("point too close to a corner"));
        }
    }
    Ok(())
}

/// `H_n(z)`: the limit function with the phases the degree-n normalization
/// actually produces, `e^{2πinθ_k}` where `e^{2πiθ_k} = e^{i(Θ_k−Θ₁)}`.
pub fn h_n_eval(d: &DomainSpec, n: u32, z: &Cx) -> Result<Cx> {
    require_corners(d)?;
    check_off_corners(d, z)?;
    let p = z.prec();
    let theta1 = d.corners()[0].theta.clone();
    let ph: Vec<Cx> = d
        .corners()
        .iter()
        .map(|c| Cx::unit(&(Float::with_val(p, &c.theta - &theta1) * n)))
        .collect();
    corner_kernel_sum(d, z, &ph)
}

/// `P*_n(z) = −P_n(z) / (√(n+1)·binom(n,−λ₁−1)·ω₁^{n+1+λ₁})`, the
/// normalization under which the polynomials track `H_n` inside the
/// critical curve.
pub fn p_star_eval(d: &DomainSpec, set: &OrthonormalSet, n: u32, z: &Cx) -> Result<Cx> {
    require_corners(d)?;
    let p = z.prec();
    let c1 = &d.corners()[0];
    let lambda = Float::with_val(p, &c1.lambda);
    let expo = Float::with_val(p, &lambda + Float::with_val(p, n + 1));

    // log|√(n+1)·binom(n,−λ−1)·ρ^{n+1+λ}| assembled in log space.
    let (lb, sb) = log_abs_gen_binomial(
        &real(p, n as f64),
        &(-Float::with_val(p, &lambda + 1u32)),
    )?;
    let mut lnmag = Float::with_val(p, Float::with_val(p, n + 1).ln() / 2u32);
    lnmag += &lb;
    lnmag += Float::with_val(p, real(p, d.rho()).ln() * &expo);
    let mag = Float::with_val(p, lnmag.exp() * sb);
    let phase = Cx::unit(&Float::with_val(p, &c1.theta * &expo));

    let pv = set.poly(n as usize).eval(z);
    Ok((-pv).div(&phase.scale(&mag)))
}

// ---------------------------------------------------------------------------

/// Counts roots within `tol` of a target point.
pub fn cluster_count(zs: &ZeroSet, target: Complex64, tol: f64) -> usize {
    zs.roots_c64().iter().filter(|z| (*z - target).norm() <= tol).count()
}

/// Reconstructs `κ·Π(z − root_i)` and returns the worst relative
/// coefficient error against `p`; the reconstruction check for a
/// [`ZeroSet`].
pub fn reconstruction_error(p: &Poly, zs: &ZeroSet) -> f64 {
    let prec = zs.roots.first().map(|r| r.prec()).unwrap_or(crate::scalar::MIN_PREC);
    let mut coeffs = vec![Cx::one(prec)];
    for r in &zs.roots {
        let mut next = vec![Cx::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - c.mul(r);
        }
        coeffs = next;
    }
    let lead = p.leading();
    let scale = p.coeffs().iter().map(|c| c.abs().to_f64()).fold(0f64, f64::max);
    let mut worst = 0f64;
    for (a, b) in coeffs.iter().zip(p.coeffs()) {
        let diff = (&a.mul(lead) - b).abs().to_f64();
        worst = worst.max(diff / scale);
    }
    worst
}
