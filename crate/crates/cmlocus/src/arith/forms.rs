//! Positive definite binary quadratic forms and the form class group.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{check_discriminant, divisors};
use crate::error::{Error, Result};

/// Default bound on |delta| for exhaustive enumeration.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// The form a x^2 + b x y + c y^2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// The principal form of discriminant d.
    pub fn principal(d: &BigInt) -> Form {
        let b = if d.is_odd() { BigInt::one() } else { BigInt::zero() };
        let c = (&b - d) / 4;
        Form { a: BigInt::one(), b, c }
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn is_reduced(&self) -> bool {
        let absb = self.b.abs();
        if absb > self.a || self.a > self.c {
            return false;
        }
        if (absb == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// Ambiguous reduced forms are exactly the reduced forms of order dividing 2.
    pub fn is_ambiguous(&self) -> bool {
        self.b.is_zero() || self.a == self.b || self.a == self.c
    }

    // Translate b into (-a, a].
    fn normalize(&mut self, d: &BigInt) {
        let two_a = BigInt::from(2) * &self.a;
        let k = (&self.a - &self.b).div_floor(&two_a);
        self.b += &two_a * k;
        self.c = (&self.b * &self.b - d) / (BigInt::from(4) * &self.a);
    }

    /// The reduced form equivalent to a positive definite form.
    pub fn reduce(&self) -> Form {
        let d = self.disc();
        let mut f = self.clone();
        f.normalize(&d);
        while f.a > f.c {
            f = Form { a: f.c.clone(), b: -f.b.clone(), c: f.a.clone() };
            f.normalize(&d);
        }
        if f.a == f.c && f.b.is_negative() {
            f.b = -f.b;
        }
        f
    }

    /// The inverse class (a, -b, c), reduced.
    pub fn conj(&self) -> Form {
        Form { a: self.a.clone(), b: -self.b.clone(), c: self.c.clone() }.reduce()
    }

    pub fn is_principal(&self) -> bool {
        self.reduce().a.is_one()
    }

    /// Gaussian composition of two primitive forms of the same discriminant.
    pub fn compose(&self, other: &Form) -> Form {
        let d = self.disc();
        debug_assert_eq!(d, other.disc());
        let (a1, b1) = (&self.a, &self.b);
        let (a2, b2, c2) = (&other.a, &other.b, &other.c);
        let s = (b1 + b2) / 2;
        let e1 = a1.extended_gcd(a2);
        let e2 = e1.gcd.extended_gcd(&s);
        let d0 = e2.gcd;
        let v = &e1.y * &e2.x;
        let w = e2.y;
        let a3 = a1 * a2 / (&d0 * &d0);
        let b3 = b2 + BigInt::from(2) * (a2 / &d0) * (v * (&s - b2) - w * c2);
        let b3 = b3.mod_floor(&(BigInt::from(2) * &a3));
        let c3 = (&b3 * &b3 - &d) / (BigInt::from(4) * &a3);
        Form { a: a3, b: b3, c: c3 }.reduce()
    }

    pub fn pow(&self, mut e: u64) -> Form {
        let mut base = self.reduce();
        let mut acc = Form::principal(&self.disc());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Image of this class under Pic(ell^2 D) -> Pic(D).
    pub fn up(&self, ell: u64) -> Result<Form> {
        let l = BigInt::from(ell);
        let d_big = self.disc();
        let l2 = &l * &l;
        if !(&d_big % &l2).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "form {self} has discriminant not divisible by {ell}^2"
            )));
        }
        let d = &d_big / &l2;
        let candidates = [
            self.clone(),
            Form { a: self.c.clone(), b: -self.b.clone(), c: self.a.clone() },
            Form {
                a: &self.a + &self.b + &self.c,
                b: &self.b + BigInt::from(2) * &self.c,
                c: self.c.clone(),
            },
        ];
        let g = candidates
            .into_iter()
            .find(|g| !(&g.a % &l).is_zero())
            .ok_or_else(|| Error::Consistency(format!("no representative of {self} prime to {ell}")))?;
        let two_a = BigInt::from(2) * &g.a;
        let big_b = if ell == 2 {
            let half = &g.b / 2;
            let diff: BigInt = &half - &d;
            if diff.is_even() {
                half
            } else {
                half + &g.a
            }
        } else {
            let inv = l
                .extended_gcd(&two_a)
                .x
                .mod_floor(&two_a);
            (&g.b * inv).mod_floor(&two_a)
        };
        let four_a = BigInt::from(4) * &g.a;
        let num = &big_b * &big_b - &d;
        if !(&num % &four_a).is_zero() {
            return Err(Error::Consistency(format!("up-map of {self} is not integral")));
        }
        let up = Form { a: g.a.clone(), b: big_b, c: num / four_a };
        if !up.is_primitive() {
            return Err(Error::Consistency(format!("up-map of {self} is not primitive")));
        }
        Ok(up.reduce())
    }
}

fn cap_check(d: &BigInt, cap: u64) -> Result<i64> {
    check_discriminant(d)?;
    let n = d.abs();
    match n.to_u64() {
        Some(v) if v <= cap => Ok(-(v as i64)),
        _ => Err(Error::CapExceeded(d.to_string(), cap)),
    }
}

/// All reduced primitive forms of discriminant d, by exhaustive enumeration.
pub fn reduced_forms_with_cap(d: &BigInt, cap: u64) -> Result<Vec<Form>> {
    let d = cap_check(d, cap)?;
    let mut out = Vec::new();
    visit_reduced(d, |a, b, c| out.push(Form::new(a, b, c)));
    Ok(out)
}

pub fn reduced_forms(d: &BigInt) -> Result<Vec<Form>> {
    reduced_forms_with_cap(d, DEFAULT_CAP)
}

fn visit_reduced(d: i64, mut visit: impl FnMut(i64, i64, i64)) {
    let n = -d;
    let mut a: i64 = 1;
    while 3 * a * a <= n {
        let start = if (a - d) % 2 == 0 { -a + 2 } else { -a + 1 };
        let mut b = start;
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && !(b < 0 && a == c) && a.gcd(&b).gcd(&c) == 1 {
                    visit(a, b, c);
                }
            }
            b += 2;
        }
        a += 1;
    }
}

/// Class number by exhaustive enumeration, with an explicit cap on |d|.
pub fn class_number_with_cap(d: &BigInt, cap: u64) -> Result<u64> {
    let d = cap_check(d, cap)?;
    let mut h = 0u64;
    visit_reduced(d, |_, _, _| h += 1);
    Ok(h)
}

/// Class number by exhaustive enumeration (|d| <= 10^7).
pub fn class_number(d: &BigInt) -> Result<u64> {
    class_number_with_cap(d, DEFAULT_CAP)
}

/// Ambiguous reduced primitive forms of discriminant d, found from the divisors of |d|.
pub fn ambiguous_forms(d: &BigInt) -> Result<Vec<Form>> {
    check_discriminant(d)?;
    let n = d
        .abs()
        .to_u64()
        .ok_or_else(|| Error::FactorLimit(d.to_string()))?;
    let divs = divisors(n)?;
    let mut out = Vec::new();
    let coprime = |x: u64, y: u64| x.gcd(&y) == 1;
    // b = 0
    if n % 4 == 0 {
        let m = n / 4;
        for &a in &divs {
            if m % a != 0 {
                continue;
            }
            let c = m / a;
            if a <= c && coprime(a, c) {
                out.push(Form::new(a, 0, c));
            }
        }
    }
    // b = a
    for &a in &divs {
        let num = a as u128 * a as u128 + n as u128;
        if !num.is_multiple_of(4 * a as u128) {
            continue;
        }
        let c = (num / (4 * a as u128)) as u64;
        if c >= a && coprime(a, c) {
            out.push(Form::new(a, a, c));
        }
    }
    // a = c, 0 < b < a
    for &x in &divs {
        let y = n / x;
        if x >= y || (x + y) % 4 != 0 {
            continue;
        }
        let b = (y - x) / 2;
        let a = (x + y) / 4;
        if b > 0 && b < a && a.gcd(&b) == 1 {
            out.push(Form::new(a, b, a));
        }
    }
    out.sort();
    Ok(out)
}

/// Order of the 2-torsion subgroup of the class group.
pub fn two_torsion_count(d: &BigInt) -> Result<u64> {
    Ok(ambiguous_forms(d)?.len() as u64)
}
