//! Domain descriptions: exterior and interior conformal maps, corner data,
//! the kernels `K` and `L`, Schwarz reflection, level curves, and the
//! equilibrium measure of the innermost level curve.
//!
//! Two families are supported. `disk(R)` is the disk `|z| < R`. For an
//! integer `s ≥ 2` and `R > 1`, `lemniscate(s, R)` is the domain bounded by
//! `|z^s − 1| = R^s`; its exterior map is `ψ(w) = (R^s w^s + 1)^{1/s}` on
//! the branch that assigns `arg(w^s + 1) ∈ [2π(k−1), 2πk)` whenever
//! `arg w ∈ [2π(k−1)/s, 2πk/s)`. The map continues univalently down to
//! `|w| = ρ = 1/R`; the image of that circle is the s-petalled curve
//! `|z^s − 1| = 1`, which carries `s` corners of opening `π/s`, all located
//! at the origin.
//!
//! Branch bookkeeping never tracks sector indices explicitly: with
//! `v = R^s w^s` we have `ψ(w) = |v+1|^{1/s}·e^{i·arg₀(w)}·e^{i·arg(1+1/v)/s}`
//! where `arg₀` is the argument folded to `[0, 2π)`. On `|w| ≥ ρ` the
//! quantity `1 + 1/v` stays off the closed negative real axis, so the
//! principal argument is safe and the expression is continuous across the
//! sector rays. The inverse map uses the mirrored identity.

use crate::error::{Error, Result};
use crate::scalar::{pi, real, two_pi, Cx};
use crate::zeros::DiscreteMeasure;
use num_complex::Complex64;
use rug::ops::Pow;
use rug::Float;

/// Which curve family a [`DomainSpec`] describes.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    /// Disk of the given radius centered at the origin.
    Disk { radius: f64 },
    /// Interior of `|z^s − 1| = R^s` with `s = petals ≥ 2`, `R = scale > 1`.
    Lemniscate { petals: u32, scale: f64 },
}

/// One corner of the innermost level curve: preimage `ω = ρe^{iΘ}` on the
/// critical circle, opening parameter `λ` (the corner angle is `λπ`),
/// leading expansion coefficient `A` of `ψ(w) − z₀ ~ A·(w−ω)^λ`, corner
/// location `z₀`, and the rotated coefficient `Â = A·e^{i(λ+1)(Θ−Θ₁)}`.
#[derive(Clone, Debug)]
pub struct CornerDatum {
    pub omega: Cx,
    pub theta: Float,
    pub lambda: Float,
    pub coeff: Cx,
    pub location: Cx,
    pub coeff_hat: Cx,
}

/// An analytic Jordan curve given through its exterior conformal map data,
/// plus derived corner data. Immutable after construction; all operations
/// are pure.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    kind: DomainKind,
    prec: u32,
    corners: Vec<CornerDatum>,
}

/// Ladder of ray offsets used to fit corner coefficients; each value halves
/// the previous one so convergence-order estimates come from ratio tests.
const CORNER_FIT_STEPS: [f64; 5] = [1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6];

impl DomainSpec {
    /// Disk of radius `radius > 0`. `ρ = 0`, `φ'(∞) = 1/radius`, no corners.
    pub fn disk(radius: f64, prec: u32) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid("disk radius must be positive"));
        }
        if prec < crate::scalar::MIN_PREC {
            return Err(Error::invalid("precision must be at least 53 bits"));
        }
        Ok(DomainSpec { kind: DomainKind::Disk { radius }, prec, corners: Vec::new() })
    }

    /// Interior of `|z^s − 1| = R^s` for `petals = s ≥ 2` and `scale = R > 1`.
    ///
    /// Corner coefficients are fitted numerically from the limit of
    /// `ψ(ω + t·e^{iΘ}) / (t·e^{iΘ})^{1/s}` along the outward ray, with
    /// convergence acceleration over [`CORNER_FIT_STEPS`], and cross-checked
    /// in modulus against `(R·s)^{1/s}`.
    pub fn lemniscate(petals: u32, scale: f64, prec: u32) -> Result<Self> {
        if petals < 2 {
            return Err(Error::invalid("lemniscate needs at least 2 petals"));
        }
        if !(scale > 1.0) {
            return Err(Error::invalid("R must exceed 1"));
        }
        if prec < crate::scalar::MIN_PREC {
            return Err(Error::invalid("precision must be at least 53 bits"));
        }
        let mut d = DomainSpec {
            kind: DomainKind::Lemniscate { petals, scale },
            prec,
            corners: Vec::new(),
        };
        d.corners = d.fit_lemniscate_corners()?;
        Ok(d)
    }

    /// Same curve, re-derived (corner fits included) at another precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        match self.kind {
            DomainKind::Disk { radius } => DomainSpec::disk(radius, prec),
            DomainKind::Lemniscate { petals, scale } => DomainSpec::lemniscate(petals, scale, prec),
        }
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn corners(&self) -> &[CornerDatum] {
        &self.corners
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.kind, DomainKind::Disk { .. })
    }

    /// Number of petals `s`; 1 for the disk (rotational symmetry order).
    pub fn petals(&self) -> u32 {
        match self.kind {
            DomainKind::Disk { .. } => 1,
            DomainKind::Lemniscate { petals, .. } => petals,
        }
    }

    /// The radius-like parameter: disk radius, or the lemniscate `R`.
    pub fn scale(&self) -> f64 {
        match self.kind {
            DomainKind::Disk { radius } => radius,
            DomainKind::Lemniscate { scale, .. } => scale,
        }
    }

    /// Smallest radius of univalent continuation of the exterior map.
    pub fn rho(&self) -> f64 {
        match self.kind {
            DomainKind::Disk { .. } => 0.0,
            DomainKind::Lemniscate { scale, .. } => 1.0 / scale,
        }
    }

    /// `φ'(∞)`, the reciprocal logarithmic capacity of the curve.
    pub fn cap(&self) -> f64 {
        1.0 / self.scale()
    }

    fn scale_at(&self, p: u32) -> Float {
        real(p, self.scale())
    }

    /// `R^s` at precision `p` (|z^s − 1| on the outer curve).
    fn scale_pow_s(&self, p: u32) -> Float {
        let s = self.petals();
        self.scale_at(p).pow(s)
    }

    // ----- exterior map and inverse -------------------------------------

    /// Exterior map `ψ`: `|w| > ρ` onto the exterior of the curve, with
    /// `ψ(w) ~ R·w` at infinity.
    pub fn exterior_map(&self, w: &Cx) -> Result<Cx> {
        let p = w.prec();
        match self.kind {
            DomainKind::Disk { radius } => Ok(w.scale(&real(p, radius))),
            DomainKind::Lemniscate { petals: s, .. } => {
                let aw = w.abs().to_f64();
                if aw < self.rho() * (1.0 - 1e-12) {
                    return Err(Error::domain(format!(
                        "|w| = {aw} below the critical radius {}",
                        self.rho()
                    )));
                }
                let v = w.powi(s as u64).scale(&self.scale_pow_s(p));
                let u = &v + Cx::one(p);
                if u.abs().to_f64() == 0.0 {
                    // Exactly at a corner preimage.
                    return Ok(Cx::zero(p));
                }
                // |u|^{1/s} e^{i arg01(w)} e^{i arg(1 + 1/v)/s}
                let m = u.abs().root(s);
                let shift = (&u / &v).arg(); // arg(1 + 1/v), principal-safe
                let mut theta = w.arg_unsigned();
                theta += Float::with_val(p, &shift / s);
                Ok(Cx::polar(&m, &theta))
            }
        }
    }

    /// `ψ'(w)`.
    pub fn exterior_map_deriv(&self, w: &Cx) -> Result<Cx> {
        let p = w.prec();
        match self.kind {
            DomainKind::Disk { radius } => Ok(Cx::from_f64(p, radius, 0.0)),
            DomainKind::Lemniscate { petals: s, .. } => {
                // ψ' = R^s w^{s-1} ψ(w) / (R^s w^s + 1)
                let psi = self.exterior_map(w)?;
                let v = w.powi(s as u64).scale(&self.scale_pow_s(p));
                let u = &v + Cx::one(p);
                if u.abs().to_f64() == 0.0 {
                    return Err(Error::domain("derivative blows up at a corner preimage"));
                }
                let num = w.powi((s - 1) as u64).scale(&self.scale_pow_s(p)).mul(&psi);
                Ok(num.div(&u))
            }
        }
    }

    /// Modulus of the exterior coordinate: `|φ(z)|`, i.e. the level `r`
    /// with `z ∈ L_r`. Defined on the closed exterior region.
    pub fn level_of(&self, z: &Cx) -> Float {
        let p = z.prec();
        match self.kind {
            DomainKind::Disk { radius } => z.abs() / real(p, radius),
            DomainKind::Lemniscate { petals: s, .. } => {
                let v = &z.powi(s as u64) - Cx::one(p);
                let m = v.abs().root(s);
                m / self.scale_at(p)
            }
        }
    }

    /// Exterior inverse `φ = ψ^{-1}`, defined for `|φ(z)| ≥ ρ` (closed
    /// exterior of the critical curve), with `φ(z) ~ z/R` at infinity.
    pub fn exterior_inverse(&self, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        match self.kind {
            DomainKind::Disk { radius } => {
                if z.abs().to_f64() == 0.0 {
                    return Err(Error::domain("center of the disk has no exterior coordinate"));
                }
                Ok(z.scale(&real(p, 1.0 / radius)))
            }
            DomainKind::Lemniscate { petals: s, .. } => {
                let zs = z.powi(s as u64);
                let v = &zs - Cx::one(p);
                let av = v.abs().to_f64();
                if av < 1.0 - 1e-12 {
                    return Err(Error::domain(format!(
                        "|z^s - 1| = {av} < 1: point inside the critical curve"
                    )));
                }
                // (1/R) |v|^{1/s} e^{i arg01(z)} e^{i arg(1 - z^{-s})/s};
                // v/z^s avoids the negative real axis on the admissible set.
                let m = v.abs().root(s) / self.scale_at(p);
                let shift = v.div(&zs).arg();
                let mut theta = z.arg_unsigned();
                theta += Float::with_val(p, &shift / s);
                Ok(Cx::polar(&m, &theta))
            }
        }
    }

    /// `φ'(z)`.
    pub fn exterior_inverse_deriv(&self, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        match self.kind {
            DomainKind::Disk { radius } => Ok(Cx::from_f64(p, 1.0 / radius, 0.0)),
            DomainKind::Lemniscate { petals: s, .. } => {
                // φ' = z^{s-1} φ(z) / (z^s − 1)
                let phi = self.exterior_inverse(z)?;
                let v = &z.powi(s as u64) - Cx::one(p);
                Ok(z.powi((s - 1) as u64).mul(&phi).div(&v))
            }
        }
    }

    // ----- interior map and inverse -------------------------------------

    /// Interior map onto the unit disk, normalized by `φ_int(c) = 0` and
    /// `φ_int'(c) > 0` at the symmetry center (the origin for both
    /// families). Valid on the closed domain.
    pub fn interior_map(&self, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        match self.kind {
            DomainKind::Disk { radius } => Ok(z.scale(&real(p, 1.0 / radius))),
            DomainKind::Lemniscate { petals: s, .. } => {
                self.require_closure_g1(z)?;
                // R z / (R^{2s} − 1 + z^s)^{1/s}, principal root: the
                // radicand has positive real part on the closed domain.
                let q = self.interior_radicand(z);
                let root = q.root_principal(s);
                Ok(z.scale(&self.scale_at(p)).div(&root))
            }
        }
    }

    fn interior_radicand(&self, z: &Cx) -> Cx {
        let p = z.prec();
        let s = self.petals();
        let r2s = self.scale_at(p).pow(2 * s);
        &z.powi(s as u64) + Cx::from_real(r2s - 1u32)
    }

    /// `φ_int'(z)`.
    pub fn interior_map_deriv(&self, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        match self.kind {
            DomainKind::Disk { radius } => Ok(Cx::from_f64(p, 1.0 / radius, 0.0)),
            DomainKind::Lemniscate { petals: s, .. } => {
                self.require_closure_g1(z)?;
                // R (R^{2s} − 1) (R^{2s} − 1 + z^s)^{-(s+1)/s}
                let q = self.interior_radicand(z);
                let root = q.root_principal(s);
                let r2s1 = Float::with_val(p, self.scale_at(p).pow(2 * s) - 1u32);
                let c = Float::with_val(p, &r2s1 * &self.scale_at(p));
                Ok(Cx::from_real(c).div(&q.mul(&root)))
            }
        }
    }

    /// Inverse of the interior map on `|w| < 1`.
    pub fn interior_inverse(&self, w: &Cx) -> Result<Cx> {
        let p = w.prec();
        if w.abs().to_f64() >= 1.0 + 1e-12 {
            return Err(Error::domain("interior inverse needs |w| < 1"));
        }
        match self.kind {
            DomainKind::Disk { radius } => Ok(w.scale(&real(p, radius))),
            DomainKind::Lemniscate { petals: s, .. } => {
                // w ((R^{2s} − 1)/(R^s − w^s))^{1/s}; the denominator keeps
                // positive real part for |w| ≤ 1 < R.
                let r2s1 = Float::with_val(p, self.scale_at(p).pow(2 * s) - 1u32);
                let den = Cx::from_real(self.scale_pow_s(p)) - w.powi(s as u64);
                let ratio = Cx::from_real(r2s1).div(&den);
                Ok(w.mul(&ratio.root_principal(s)))
            }
        }
    }

    /// Derivative of [`Self::interior_inverse`].
    pub fn interior_inverse_deriv(&self, w: &Cx) -> Result<Cx> {
        let p = w.prec();
        if w.abs().to_f64() >= 1.0 + 1e-12 {
            return Err(Error::domain("interior inverse needs |w| < 1"));
        }
        match self.kind {
            DomainKind::Disk { radius } => Ok(Cx::from_f64(p, radius, 0.0)),
            DomainKind::Lemniscate { petals: s, .. } => {
                // (R^{2s} − 1)^{1/s} R^s (R^s − w^s)^{-(s+1)/s}
                let r2s1 = Float::with_val(p, self.scale_at(p).pow(2 * s) - 1u32);
                let den = Cx::from_real(self.scale_pow_s(p)) - w.powi(s as u64);
                let den_root = den.root_principal(s);
                let num = Cx::from_real(Float::with_val(p, r2s1.root(s) * &self.scale_pow_s(p)));
                Ok(num.div(&den.mul(&den_root)))
            }
        }
    }

    // ----- membership helpers -------------------------------------------

    /// Closed orthogonality domain `Ḡ₁`.
    pub fn in_closure_g1(&self, z: &Cx) -> bool {
        self.level_of(z).to_f64() <= 1.0 + 1e-12
    }

    fn require_closure_g1(&self, z: &Cx) -> Result<()> {
        if self.in_closure_g1(z) {
            Ok(())
        } else {
            Err(Error::domain("point outside the closed orthogonality domain"))
        }
    }

    /// Open exterior `Ω_ρ` of the critical curve, with a safety margin.
    pub fn in_omega_rho(&self, z: &Cx, margin: f64) -> bool {
        if self.is_disk() {
            return z.abs().to_f64() > margin;
        }
        self.level_of(z).to_f64() >= self.rho() * (1.0 + margin)
    }

    /// Open interior `G_ρ` of the critical curve, with a safety margin.
    /// Empty for the disk.
    pub fn in_g_rho(&self, z: &Cx, margin: f64) -> bool {
        if self.is_disk() {
            return false;
        }
        let s = self.petals();
        let v = (&z.powi(s as u64) - Cx::one(z.prec())).abs().to_f64();
        v <= 1.0 - margin
    }

    // ----- kernels --------------------------------------------------------

    /// The meromorphic kernel
    /// `L(ζ,z) = φ_int'(ζ)·φ_int'(z)/[φ_int(ζ) − φ_int(z)]²`, symmetric in
    /// its arguments and independent of the normalization of `φ_int`.
    pub fn kernel_l(&self, zeta: &Cx, z: &Cx) -> Result<Cx> {
        let sep = (zeta - z).abs().to_f64();
        if sep < 1e-13 {
            return Err(Error::Coincidence { separation: sep });
        }
        let fz = self.interior_map(z)?;
        let fzeta = self.interior_map(zeta)?;
        let dz = self.interior_map_deriv(z)?;
        let dzeta = self.interior_map_deriv(zeta)?;
        let diff = &fzeta - &fz;
        Ok(dzeta.mul(&dz).div(&diff.mul(&diff)))
    }

    /// Bergman kernel
    /// `K(ζ,z) = conj(φ_int'(z))·φ_int'(ζ)/[1 − conj(φ_int(z))·φ_int(ζ)]²`.
    pub fn bergman_kernel(&self, zeta: &Cx, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        let fz = self.interior_map(z)?;
        let fzeta = self.interior_map(zeta)?;
        let dz = self.interior_map_deriv(z)?;
        let dzeta = self.interior_map_deriv(zeta)?;
        let den = Cx::one(p) - fz.conj().mul(&fzeta);
        Ok(dz.conj().mul(&dzeta).div(&den.mul(&den)))
    }

    /// Closed form for `∂^j L/∂ζ^j (0, z)` on the lemniscate, valid for
    /// derivative orders `j = s − l − 2` with `0 ≤ l ≤ s − 2`:
    ///
    /// `(j+1)! · z^{-(j+2)} · [(R^{2s}−1)/(R^{2s}−1+z^s)]^{(s−j−1)/s}`.
    pub fn kernel_l_zeta_deriv_at_zero(&self, order: u32, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        let s = match self.kind {
            DomainKind::Disk { .. } => {
                return Err(Error::domain("kernel derivative closed form needs a lemniscate"))
            }
            DomainKind::Lemniscate { petals, .. } => petals,
        };
        if order > s - 2 {
            return Err(Error::range(format!("derivative order {order} exceeds s-2 = {}", s - 2)));
        }
        if z.abs().to_f64() < 1e-13 {
            return Err(Error::Coincidence { separation: z.abs().to_f64() });
        }
        let r2s1 = Float::with_val(p, self.scale_at(p).pow(2 * s) - 1u32);
        let q = self.interior_radicand(z);
        let ratio = Cx::from_real(r2s1).div(&q);
        let expo = Float::with_val(p, Float::with_val(p, s - order - 1) / s);
        let pow = cx_pow_real(&ratio, &expo);
        let fact = Float::with_val(p, Float::factorial(order + 1));
        let zpow = z.powi((order + 2) as u64);
        Ok(pow.scale(&fact).div(&zpow))
    }

    /// `∂^j L/∂ζ^j (0, z)` for any order, through the contour form of the
    /// Taylor coefficient: `j!/(2πi) ∮ L(ζ,z) ζ^{-j-1} dζ` on a small
    /// circle, refined until stable. Used where closed forms stop.
    pub fn kernel_l_deriv_at_zero_quadrature(&self, order: u32, z: &Cx) -> Result<Cx> {
        let p = z.prec();
        let radius = real(p, 0.45 * z.abs().to_f64().min(1.0));
        if radius.to_f64() <= 0.0 {
            return Err(Error::Coincidence { separation: z.abs().to_f64() });
        }
        let mut m = 64usize;
        let mut prev: Option<Cx> = None;
        let mut last_change = f64::INFINITY;
        for _ in 0..6 {
            let mut acc = Cx::zero(p);
            for i in 0..m {
                let theta = Float::with_val(p, two_pi(p) * i as u32) / m as u32;
                let zeta = Cx::polar(&radius, &theta);
                let lv = self.kernel_l(&zeta, z)?;
                let phase = Cx::unit(&(-Float::with_val(p, &theta * order)));
                acc = &acc + lv.mul(&phase);
            }
            let rj = radius.clone().pow(order);
            let fact = Float::with_val(p, Float::factorial(order));
            let val = acc.scale(&Float::with_val(p, fact / rj)).scale(&real(p, 1.0 / m as f64));
            if let Some(pv) = &prev {
                let denom = val.abs().to_f64().max(1e-300);
                last_change = (&val - pv).abs().to_f64() / denom;
                if last_change < 1e-12 {
                    return Ok(val);
                }
            }
            prev = Some(val);
            m *= 2;
        }
        Err(Error::Convergence { last_change })
    }

    // ----- reflection, level curves, equilibrium measure ------------------

    /// Schwarz reflection about the curve: `z* = ψ(1/conj(φ(z)))`, defined
    /// on the annular neighborhood where both maps continue.
    pub fn schwarz_reflect(&self, z: &Cx) -> Result<Cx> {
        match self.kind {
            DomainKind::Disk { radius } => {
                let p = z.prec();
                if z.abs().to_f64() == 0.0 {
                    return Err(Error::domain("reflection undefined at the center"));
                }
                let r2 = real(p, radius * radius);
                Ok(z.conj().recip().scale(&r2))
            }
            DomainKind::Lemniscate { scale, .. } => {
                let level = self.level_of(z).to_f64();
                if level < self.rho() * (1.0 + 1e-10) || level > scale * (1.0 + 1e-10) {
                    return Err(Error::domain(format!(
                        "reflection needs ρ < |φ(z)| < 1/ρ; got level {level}"
                    )));
                }
                let w = self.exterior_inverse(z)?;
                self.exterior_map(&w.conj().recip())
            }
        }
    }

    /// `m` equally spaced (in the circle parameter) points of the level
    /// curve `L_r = ψ({|w| = r})`.
    pub fn level_curve(&self, r: f64, m: usize) -> Result<Vec<Cx>> {
        if r <= self.rho() {
            return Err(Error::domain(format!("level curve needs r > ρ = {}", self.rho())));
        }
        if m < 8 {
            return Err(Error::invalid("need at least 8 level-curve samples"));
        }
        let p = self.prec;
        let rr = real(p, r);
        (0..m)
            .map(|j| {
                let theta = Float::with_val(p, two_pi(p) * j as u32) / m as u32;
                self.exterior_map(&Cx::polar(&rr, &theta))
            })
            .collect()
    }

    /// Equilibrium measure of the critical curve: the pushforward of
    /// normalized arc length on `|w| = ρ` under `ψ`, sampled at `m` points
    /// with a midpoint shift that avoids the corner preimages.
    pub fn equilibrium_measure(&self, m: usize) -> Result<DiscreteMeasure> {
        if self.is_disk() {
            return Err(Error::domain(
                "the critical curve of a disk degenerates; no equilibrium measure",
            ));
        }
        if m < 16 {
            return Err(Error::invalid("need at least 16 equilibrium sample points"));
        }
        let p = self.prec;
        let rho = real(p, 1.0) / self.scale_at(p);
        let mut points = Vec::with_capacity(m);
        for j in 0..m {
            let theta = Float::with_val(p, two_pi(p) * Float::with_val(p, j as f64 + 0.5)) / m as u32;
            let z = self.exterior_map(&Cx::polar(&rho, &theta))?;
            points.push(z.to_c64());
        }
        let w = 1.0 / m as f64;
        Ok(DiscreteMeasure { weights: vec![w; m], points })
    }

    /// Logarithmic potential of the equilibrium measure, evaluated through
    /// the identity `U(z) = log|φ'(∞)| − log|φ(z)|` valid outside the
    /// critical curve.
    pub fn equilibrium_potential(&self, z: &Cx) -> Result<Float> {
        let p = z.prec();
        let phi = self.exterior_inverse(z)?;
        let mut v = real(p, self.cap()).ln();
        v -= phi.abs().ln();
        Ok(v)
    }

    // ----- corner fitting -------------------------------------------------

    fn fit_lemniscate_corners(&self) -> Result<Vec<CornerDatum>> {
        let p = self.prec;
        let s = self.petals();
        let lambda = Float::with_val(p, Float::with_val(p, 1u32) / s);
        let rho = real(p, 1.0) / self.scale_at(p);
        let expect_mod = Float::with_val(p, self.scale_at(p) * s).root(s);

        let mut corners = Vec::with_capacity(s as usize);
        for k in 1..=s {
            let theta = Float::with_val(p, pi(p) * (2 * k - 1)) / s;
            let omega = Cx::polar(&rho, &theta);
            let coeff = self.fit_corner_coefficient(&omega, &theta, &lambda)?;
            let rel = Float::with_val(p, coeff.abs() - &expect_mod)
                .abs()
                .to_f64()
                / expect_mod.to_f64();
            if rel > 1e-6 {
                return Err(Error::degenerate(format!(
                    "corner coefficient fit at k={k} off the modulus cross-check by {rel:e}"
                )));
            }
            corners.push(CornerDatum {
                omega,
                theta,
                lambda: lambda.clone(),
                coeff,
                location: Cx::zero(p),
                coeff_hat: Cx::zero(p), // filled below once Θ₁ is fixed
            });
        }

        // Â_k = A_k e^{i(λ+1)(Θ_k − Θ₁)} with Θ₁ the smallest argument.
        let theta1 = corners[0].theta.clone();
        for c in corners.iter_mut() {
            let dphi = Float::with_val(p, &c.theta - &theta1);
            let rot = Cx::unit(&Float::with_val(p, dphi * Float::with_val(p, &c.lambda + 1u32)));
            c.coeff_hat = c.coeff.mul(&rot);
        }
        Ok(corners)
    }

    /// Ratio `ψ(ω + t e^{iΘ}) / (t e^{iΘ})^λ` along the outward ray,
    /// extrapolated to `t → 0`. The ladder exponents are measured from the
    /// data rather than assumed, and each accelerated stage reuses the same
    /// real combination coefficients for the whole sequence, so phase
    /// relations between corners survive the fit exactly.
    fn fit_corner_coefficient(&self, omega: &Cx, theta: &Float, lambda: &Float) -> Result<Cx> {
        let p = self.prec;
        let dir = Cx::unit(theta);
        let mut vals: Vec<Cx> = Vec::with_capacity(CORNER_FIT_STEPS.len());
        for &t in CORNER_FIT_STEPS.iter() {
            let w = omega + dir.scale(&real(p, t));
            let z = self.exterior_map(&w)?;
            // (t e^{iΘ})^λ on the branch arg = Θ.
            let m = real(p, t).pow(lambda);
            let ph = Cx::unit(&Float::with_val(p, theta * lambda));
            vals.push(z.div(&ph.scale(&m)));
        }
        Ok(extrapolate_measured(vals))
    }
}

/// `base^e` for complex base (principal branch) and real exponent.
pub fn cx_pow_real(base: &Cx, e: &Float) -> Cx {
    let lnb = base.ln();
    Cx { re: Float::with_val(lnb.prec(), &lnb.re * e), im: Float::with_val(lnb.prec(), &lnb.im * e) }
        .exp()
}

/// Repeated Richardson-style acceleration with measured convergence orders.
///
/// Input values correspond to steps halving left to right; each stage
/// estimates the dominant error exponent `q` from successive differences
/// and forms `(2^q v_{j+1} − v_j)/(2^q − 1)`.
fn extrapolate_measured(mut vals: Vec<Cx>) -> Cx {
    while vals.len() > 1 {
        let n = vals.len();
        let d_last = (&vals[n - 1] - &vals[n - 2]).abs().to_f64();
        if d_last < 1e-40 || !d_last.is_finite() {
            return vals.pop().unwrap();
        }
        let q = if n >= 3 {
            let d_prev = (&vals[n - 2] - &vals[n - 3]).abs().to_f64();
            if d_prev > 0.0 {
                (d_prev / d_last).log2().clamp(0.2, 8.0)
            } else {
                1.0
            }
        } else {
            1.0
        };
        let p = vals[0].prec();
        let f = real(p, 2f64.powf(q));
        let inv_denom = Float::with_val(p, &f - 1u32).recip();
        let next: Vec<Cx> = (0..n - 1)
            .map(|j| (&vals[j + 1].scale(&f) - &vals[j]).scale(&inv_denom))
            .collect();
        vals = next;
    }
    vals.pop().unwrap()
}
