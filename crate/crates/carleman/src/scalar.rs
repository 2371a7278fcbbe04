//! Extended-precision real and complex scalars.
//!
//! Everything numerically delicate in this crate (moment quadrature, Gram
//! factorization, root clusters of high multiplicity) runs on MPFR floats
//! via [`rug`]. `Cx` is a plain re/im pair of [`Float`]s; each value carries
//! its precision and all derived values are rounded at the precision of the
//! left operand. Plain `f64` work uses [`num_complex::Complex64`] and the
//! conversion helpers at the bottom.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Minimum precision we accept anywhere (IEEE double mantissa).
pub const MIN_PREC: u32 = 53;

/// Fresh [`Float`] of value `v` at `prec` bits.
pub fn real(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

/// π at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// 2π at `prec` bits.
pub fn two_pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi) * 2u32
}

/// Complex number with extended-precision parts.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        Cx { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx { re: real(prec, re), im: real(prec, im) }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Cx::from_f64(prec, z.re, z.im)
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Cx { re, im: real(prec, 0.0) }
    }

    pub fn zero(prec: u32) -> Self {
        Cx::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Self {
        Cx::from_f64(prec, 1.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        Cx { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, t: &Float) -> Self {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * t),
            im: Float::with_val(p, &self.im * t),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut s = Float::with_val(p, &self.re * &self.re);
        s += Float::with_val(p, &self.im * &self.im);
        s
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().hypot(&self.im))
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    /// Argument folded to [0, 2π).
    pub fn arg_unsigned(&self) -> Float {
        let a = self.arg();
        if a.is_sign_negative() && !a.is_zero() {
            a + two_pi(self.prec())
        } else {
            a
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, rhs: &Cx) -> Cx {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        Cx { re, im }
    }

    pub fn div(&self, rhs: &Cx) -> Cx {
        let p = self.prec();
        let d = rhs.norm_sqr();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        re /= &d;
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        im /= &d;
        Cx { re, im }
    }

    pub fn recip(&self) -> Cx {
        let p = self.prec();
        let d = self.norm_sqr();
        Cx {
            re: Float::with_val(p, &self.re / &d),
            im: -Float::with_val(p, &self.im / &d),
        }
    }

    /// Integer power by binary exponentiation; `powi(0)` is one.
    pub fn powi(&self, n: u64) -> Cx {
        let mut acc = Cx::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn exp(&self) -> Cx {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (sin, cos) = self.im.clone().sin_cos(Float::new(p));
        Cx {
            re: Float::with_val(p, &m * &cos),
            im: Float::with_val(p, &m * &sin),
        }
    }

    /// Principal logarithm: `ln|z| + i arg z`, arg in (−π, π].
    pub fn ln(&self) -> Cx {
        Cx { re: self.abs().ln(), im: self.arg() }
    }

    /// Principal s-th root, `|z|^{1/s} e^{i arg(z)/s}` with arg in (−π, π].
    pub fn root_principal(&self, s: u32) -> Cx {
        let p = self.prec();
        let m = self.abs().root(s);
        let theta = Float::with_val(p, self.arg() / s);
        Cx::polar(&m, &theta)
    }

    /// s-th root on the branch whose total argument is
    /// `arg_unsigned(z) + 2π·sector`.
    pub fn root_on_sector(&self, s: u32, sector: u32) -> Cx {
        let p = self.prec();
        let m = self.abs().root(s);
        let mut theta = self.arg_unsigned();
        theta += Float::with_val(p, two_pi(p) * sector);
        theta /= s;
        Cx::polar(&m, &theta)
    }

    /// `m·e^{iθ}` for real `m`, `θ`.
    pub fn polar(m: &Float, theta: &Float) -> Cx {
        let p = m.prec();
        let (sin, cos) = theta.clone().sin_cos(Float::new(p));
        Cx {
            re: Float::with_val(p, m * &cos),
            im: Float::with_val(p, m * &sin),
        }
    }

    /// `e^{iθ}` on the unit circle.
    pub fn unit(theta: &Float) -> Cx {
        let one = real(theta.prec(), 1.0);
        Cx::polar(&one, theta)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident, $p:ident| $body:expr) => {
        impl std::ops::$trait<&Cx> for &Cx {
            type Output = Cx;
            fn $method(self, rhs: &Cx) -> Cx {
                let $a = self;
                let $b = rhs;
                let $p = self.prec();
                $body
            }
        }
        impl std::ops::$trait<Cx> for Cx {
            type Output = Cx;
            fn $method(self, rhs: Cx) -> Cx {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Cx> for Cx {
            type Output = Cx;
            fn $method(self, rhs: &Cx) -> Cx {
                std::ops::$trait::$method(&self, rhs)
            }
        }
        impl std::ops::$trait<Cx> for &Cx {
            type Output = Cx;
            fn $method(self, rhs: Cx) -> Cx {
                std::ops::$trait::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b, p| Cx {
    re: Float::with_val(p, &a.re + &b.re),
    im: Float::with_val(p, &a.im + &b.im),
});
binop!(Sub, sub, |a, b, p| Cx {
    re: Float::with_val(p, &a.re - &b.re),
    im: Float::with_val(p, &a.im - &b.im),
});
binop!(Mul, mul, |a, b, _p| a.mul(b));
binop!(Div, div, |a, b, _p| a.div(b));

impl std::ops::Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl std::ops::Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        -&self
    }
}

/// `base^e` for positive real `base` and real exponent `e`.
pub fn pow_real(base: &Float, e: &Float) -> Float {
    base.clone().pow(e)
}

/// Relative distance `|a − b| / max(|b|, floor)`; `floor` guards division
/// when `b` is itself tiny.
pub fn rel_err_c64(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn mul_div_roundtrip() {
        let a = Cx::from_f64(P, 1.25, -0.75);
        let b = Cx::from_f64(P, -2.0, 0.5);
        let c = (&a * &b).div(&b);
        assert!((c.re.to_f64() - 1.25).abs() < 1e-30);
        assert!((c.im.to_f64() + 0.75).abs() < 1e-30);
    }

    #[test]
    fn exp_ln_roundtrip() {
        let a = Cx::from_f64(P, 0.3, 2.1);
        let b = a.ln().exp();
        assert!((b.re.to_f64() - 0.3).abs() < 1e-30);
        assert!((b.im.to_f64() - 2.1).abs() < 1e-30);
    }

    #[test]
    fn sectored_root_matches_power() {
        // Cube root on sector 2, cubed, must reproduce the argument mod 2π.
        let z = Cx::from_f64(P, -1.0, -0.5);
        let r = z.root_on_sector(3, 2);
        let back = r.powi(3);
        assert!((back.re.to_f64() - z.re.to_f64()).abs() < 1e-30);
        assert!((back.im.to_f64() - z.im.to_f64()).abs() < 1e-30);
    }

    #[test]
    fn arg_unsigned_range() {
        let z = Cx::from_f64(P, 0.0, -1.0);
        let a = z.arg_unsigned().to_f64();
        assert!((a - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
