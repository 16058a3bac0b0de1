//! Precision-tagged complex floating point on top of MPFR reals.
//!
//! Every value carries its mantissa precision in bits. Binary operations
//! compute at the larger of the two operand precisions. The representation
//! is deterministic: identical inputs at identical precision produce
//! bit-identical results.

use num_complex::Complex64;
use rug::float::Round;
use rug::Float;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseComplexError {
    #[error("cannot parse complex number from {0:?}")]
    Invalid(String),
}

/// Complex number with explicit mantissa precision.
#[derive(Debug, Clone, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn with_f64(re: f64, im: f64, prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        Self::with_f64(z.re, z.im, prec)
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        Self {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        Self {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        Self {
            re: ac - bd,
            im: ad + bc,
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let den = rhs.norm_sq(p);
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        Self {
            re: Float::with_val(p, ac + bd) / &den,
            im: Float::with_val(p, bc - ad) / &den,
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, -&self.re),
            im: Float::with_val(p, -&self.im),
        }
    }

    fn norm_sq(&self, p: u32) -> Float {
        let rr = Float::with_val(p, &self.re * &self.re);
        let ii = Float::with_val(p, &self.im * &self.im);
        rr + ii
    }

    /// Integer power by repeated squaring; `n ≥ 1`.
    pub fn powu(&self, n: u32) -> Self {
        assert!(n >= 1);
        let mut base = self.clone();
        let mut n = n;
        let mut acc: Option<MpComplex> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Modulus rounded to f64 (saturates to infinity on overflow).
    pub fn abs(&self) -> f64 {
        let p = self.prec();
        let h = Float::with_val(p, self.re.clone().hypot(&self.im));
        h.to_f64()
    }

    /// Modulus at full precision.
    pub fn abs_float(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().hypot(&self.im))
    }

    pub fn add_f64(&self, x: f64) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re + x),
            im: self.im.clone(),
        }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * x),
            im: Float::with_val(p, &self.im * x),
        }
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal_parts(&self, digits: usize) -> (String, String) {
        (
            float_to_decimal(&self.re, digits),
            float_to_decimal(&self.im, digits),
        )
    }

    /// Parses "a+bi" / "a-bi" / "a" / "bi" at the given precision.
    pub fn parse(text: &str, prec: u32) -> Result<Self, ParseComplexError> {
        parse_complex(text, prec)
    }
}

/// Digit count that preserves a `prec`-bit value through one decimal trip.
pub fn decimal_digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// Renders an MPFR float as a plain decimal string with the requested
/// number of significant digits, e.g. "-1.234e-5" becomes "-0.00001234".
pub fn float_to_decimal(value: &Float, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    if !value.is_finite() {
        return if value.is_infinite() {
            if value.is_sign_negative() { "-inf" } else { "inf" }.to_string()
        } else {
            "nan".to_string()
        };
    }
    let (sign, mantissa, exp) = value.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let sign = if sign { "-" } else { "" };
    let mantissa = mantissa.trim_end_matches('0');
    let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
    let exp = exp.unwrap_or(0);
    // exp is the position of the decimal point: value = 0.mantissa * 10^exp
    if exp <= 0 {
        let zeros = "0".repeat((-exp) as usize);
        format!("{sign}0.{zeros}{mantissa}")
    } else if (exp as usize) >= mantissa.len() {
        let zeros = "0".repeat(exp as usize - mantissa.len());
        format!("{sign}{mantissa}{zeros}")
    } else {
        let (int_part, frac_part) = mantissa.split_at(exp as usize);
        format!("{sign}{int_part}.{frac_part}")
    }
}

fn parse_float(text: &str, prec: u32) -> Option<Float> {
    let parsed = Float::parse(text).ok()?;
    Some(Float::with_val(prec, parsed))
}

fn parse_complex(text: &str, prec: u32) -> Result<MpComplex, ParseComplexError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ParseComplexError::Invalid(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some(body) = s.strip_suffix(['i', 'j']) {
        // Split at the last +/- that is not part of an exponent and not leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re = parse_float(&body[..i], prec).ok_or_else(err)?;
                let im_text = &body[i..];
                let im = if im_text == "+" {
                    Float::with_val(prec, 1)
                } else if im_text == "-" {
                    Float::with_val(prec, -1)
                } else {
                    parse_float(im_text, prec).ok_or_else(err)?
                };
                Ok(MpComplex::from_floats(re, im))
            }
            None => {
                // Pure imaginary.
                let im = if body.is_empty() {
                    Float::with_val(prec, 1)
                } else if body == "-" {
                    Float::with_val(prec, -1)
                } else {
                    parse_float(body, prec).ok_or_else(err)?
                };
                Ok(MpComplex::from_floats(Float::new(prec), im))
            }
        }
    } else {
        let re = parse_float(&s, prec).ok_or_else(err)?;
        Ok(MpComplex::from_floats(re, Float::new(prec)))
    }
}

/// `2^(-prec/2)`, the closeness-to-pole band at a given precision.
pub fn pole_guard(prec: u32) -> f64 {
    (-(prec as f64) / 2.0).exp2()
}

/// Hit-detection tolerance. Loose on purpose: hits get refined afterwards.
pub fn hit_tolerance(prec: u32) -> f64 {
    if prec <= 53 {
        1e-12
    } else {
        (-(prec as f64) / 4.0).exp2()
    }
}

/// Newton stopping tolerance for residuals at a given precision.
pub fn newton_tolerance(prec: u32) -> f64 {
    if prec <= 53 {
        1e-13
    } else {
        (-(prec as f64) * 0.75).exp2()
    }
}

/// Certification tolerance `2^(-prec/2)` for orbit residuals.
pub fn certification_tolerance(prec: u32) -> f64 {
    (-(prec as f64) / 2.0).exp2()
}
