//! Mixed exact/floating-point complex scalars.
//!
//! Algebraic identities (coassociativity, Itô homomorphism, Yang-Baxter,
//! classification dimensions) are checked in exact rational arithmetic;
//! spectral and Fock-space computations run in `f64`. A [`Scalar`] records
//! which regime it lives in: exact values stay exact under ring operations,
//! any operation involving a float degrades to float.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Exact complex rational: re + i·im with `BigRational` parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        ExactComplex::new(BigRational::one(), BigRational::zero())
    }

    pub fn conj(&self) -> Self {
        ExactComplex::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// A complex number that is either exact rational or floating point.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(ExactComplex::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(ExactComplex::one())
    }

    /// Exact rational `num/den`.
    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Exact(ExactComplex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        ))
    }

    pub fn int(n: i64) -> Self {
        Scalar::rational(n, 1)
    }

    /// Exact Gaussian rational (re_n/re_d) + i (im_n/im_d).
    pub fn gaussian(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Scalar::Exact(ExactComplex::new(
            BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        ))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(ExactComplex::new(r, BigRational::zero()))
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(Complex64::new(x, 0.0))
    }

    pub fn from_c64(z: Complex64) -> Self {
        Scalar::Float(z)
    }

    pub fn i() -> Self {
        Scalar::gaussian(0, 1, 1, 1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(e) => e.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Exact(e) => Scalar::Exact(e.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact equality when both operands are exact, `f64` equality otherwise.
    pub fn eq_scalar(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_c64() == other.to_c64(),
        }
    }

    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        (self.to_c64() - other.to_c64()).norm() <= tol
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Exact(e) => {
                let n = e.norm_sqr();
                assert!(!n.is_zero(), "division by zero scalar");
                Scalar::Exact(ExactComplex::new(&e.re / &n, -&e.im / &n))
            }
            Scalar::Float(z) => Scalar::Float(Complex64::new(1.0, 0.0) / z),
        }
    }

    /// Real part as a rational when exact; `None` otherwise.
    pub fn exact_real(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(e) if e.im.is_zero() => Some(e.re.clone()),
            _ => None,
        }
    }

    /// True when exact with non-negative real part and zero imaginary part.
    pub fn is_exact_nonneg_real(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.im.is_zero() && !e.re.is_negative(),
            _ => false,
        }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_scalar(other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(e) => {
                if e.im.is_zero() {
                    write!(f, "{}", e.re)
                } else if e.re.is_zero() {
                    write!(f, "{}i", e.im)
                } else {
                    write!(f, "{}+{}i", e.re, e.im)
                }
            }
            Scalar::Float(z) => write!(f, "{}", z),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(ExactComplex::new(
                        &a.re $op &b.re,
                        &a.im $op &b.im,
                    )),
                    _ => Scalar::Float(self.to_c64() $op rhs.to_c64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(ExactComplex::new(
                &a.re * &b.re - &a.im * &b.im,
                &a.re * &b.im + &a.im * &b.re,
            )),
            _ => Scalar::Float(self.to_c64() * rhs.to_c64()),
        }
    }
}

impl Mul<Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs.inv())
    }
}

impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(ExactComplex::new(-e.re, -e.im)),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.clone().neg()
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = &*self * &rhs;
    }
}
