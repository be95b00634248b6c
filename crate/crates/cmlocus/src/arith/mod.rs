//! Integer arithmetic on imaginary quadratic discriminants.

pub mod field;
pub mod forms;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use field::{
    compose_rcf, field_degree, in_s, rcf_rel_degree, tensor_rcf, Base, CompositumResult,
    FieldSymbol,
};
pub use forms::{class_number, class_number_with_cap, reduced_forms, two_torsion_count, Form};

/// Largest integer factored by trial division alone.
pub const TRIAL_LIMIT: u64 = 1_000_000_000_000;

/// Kronecker symbol (a/n), full extension to n even, negative and zero.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let v = n.trailing_zeros().unwrap_or(0);
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        n >>= v;
        if v % 2 == 1 {
            let r = a.mod_floor(&BigInt::from(8u8));
            if r == BigInt::from(3u8) || r == BigInt::from(5u8) {
                result = -result;
            }
        }
    }
    result * jacobi(a, &n)
}

/// Kronecker symbol on machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

// Jacobi symbol for odd positive n.
fn jacobi(a: &BigInt, n: &BigInt) -> i8 {
    let three = BigInt::from(3u8);
    let five = BigInt::from(5u8);
    let eight = BigInt::from(8u8);
    let four = BigInt::from(4u8);
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t: i8 = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted (prime, exponent) pairs.
///
/// Trial division covers n up to 10^12; larger 64-bit inputs fall back to Pollard rho.
pub fn factor(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m && p <= 1_000_000 {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if m <= TRIAL_LIMIT || is_prime(m) {
            out.push((m, 1));
        } else {
            let mut stack = vec![m];
            let mut big: Vec<u64> = Vec::new();
            while let Some(x) = stack.pop() {
                if is_prime(x) {
                    big.push(x);
                } else {
                    let d = pollard_rho(x);
                    stack.push(d);
                    stack.push(x / d);
                }
            }
            big.sort_unstable();
            for q in big {
                match out.last_mut() {
                    Some((r, e)) if *r == q => *e += 1,
                    _ => out.push((q, 1)),
                }
            }
        }
    }
    Ok(out)
}

/// Prime divisors of n.
pub fn prime_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

/// All positive divisors of n, sorted.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n)? {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    Ok(ds)
}

/// Exponent of the prime p in n (n > 0).
pub fn ord(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Checked integer power.
pub fn ipow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::InvalidArgument(format!("{base}^{exp} overflows")))
}

/// psi(n) = n * prod_{p | n} (1 + 1/p), the degree of X0(n) -> X(1).
pub fn psi(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("psi(0)".into()));
    }
    let mut r = BigUint::one();
    for (p, e) in factor(n)? {
        r *= BigUint::from(p).pow(e - 1) * BigUint::from(p + 1);
    }
    Ok(r)
}

/// Euler's totient.
pub fn phi(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("phi(0)".into()));
    }
    let mut r = BigUint::one();
    for (p, e) in factor(n)? {
        r *= BigUint::from(p).pow(e - 1) * BigUint::from(p - 1);
    }
    Ok(r)
}

fn as_u64_abs(x: &BigInt) -> Result<u64> {
    x.abs()
        .to_u64()
        .ok_or_else(|| Error::FactorLimit(x.to_string()))
}

/// True when d is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: u64| factor(m).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false);
    let r = d.rem_euclid(4);
    if r == 1 {
        squarefree(d.unsigned_abs())
    } else if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        (mr == 2 || mr == 3) && squarefree(m.unsigned_abs())
    } else {
        false
    }
}

/// Validates a negative discriminant.
pub fn check_discriminant(delta: &BigInt) -> Result<()> {
    if !delta.is_negative() {
        return Err(Error::InvalidDiscriminant(delta.to_string(), "must be negative"));
    }
    let r = delta.mod_floor(&BigInt::from(4u8));
    if !(r.is_zero() || r.is_one()) {
        return Err(Error::InvalidDiscriminant(delta.to_string(), "must be 0 or 1 mod 4"));
    }
    Ok(())
}

/// An imaginary quadratic discriminant delta = f^2 * delta_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderDisc {
    pub delta: BigInt,
    pub delta_k: i64,
    pub f: u64,
}

impl OrderDisc {
    /// Builds the order of conductor f in the field of discriminant delta_k.
    pub fn new(delta_k: i64, f: u64) -> Result<Self> {
        if delta_k >= 0 || !is_fundamental(delta_k) {
            return Err(Error::InvalidDiscriminant(
                delta_k.to_string(),
                "not a negative fundamental discriminant",
            ));
        }
        if f == 0 {
            return Err(Error::InvalidArgument("conductor must be positive".into()));
        }
        let delta = BigInt::from(f) * BigInt::from(f) * BigInt::from(delta_k);
        Ok(OrderDisc { delta, delta_k, f })
    }

    /// Same as `new`, restricted to delta_k in {-3, -4}.
    pub fn cm(delta_k: i64, f: u64) -> Result<Self> {
        if delta_k != -3 && delta_k != -4 {
            return Err(Error::UnsupportedField(delta_k));
        }
        Self::new(delta_k, f)
    }

    /// ord_ell(f).
    pub fn level(&self, ell: u64) -> u32 {
        ord(ell, self.f)
    }

    /// The prime-to-ell part of f.
    pub fn f0(&self, ell: u64) -> u64 {
        let mut f = self.f;
        while f.is_multiple_of(ell) {
            f /= ell;
        }
        f
    }

    /// Number of units of the maximal order.
    pub fn w_k(&self) -> u64 {
        units(self.delta_k)
    }

    /// Number of units of this order.
    pub fn w(&self) -> u64 {
        if self.f == 1 {
            self.w_k()
        } else {
            2
        }
    }

    pub fn is_even(&self) -> bool {
        self.delta.is_even()
    }

    /// (delta/ell).
    pub fn chi(&self, ell: u64) -> i8 {
        kronecker(&self.delta, &BigInt::from(ell))
    }

    /// (delta_k/ell).
    pub fn chi_k(&self, ell: u64) -> i8 {
        kronecker_i64(self.delta_k, ell as i64)
    }

    /// ord_2(delta_k).
    pub fn ord2_k(&self) -> u32 {
        ord(2, self.delta_k.unsigned_abs())
    }
}

/// #Z_K^x for a fundamental discriminant.
pub fn units(delta_k: i64) -> u64 {
    match delta_k {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Splits delta into (delta_k, f).
pub fn split_discriminant(delta: &BigInt) -> Result<OrderDisc> {
    check_discriminant(delta)?;
    let n = as_u64_abs(delta)?;
    let mut sq = 1u64;
    let mut core = 1u64;
    for (p, e) in factor(n)? {
        sq *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    // -core is the squarefree kernel with sign.
    let core = -(core as i64);
    let (dk, f) = if core.rem_euclid(4) == 1 {
        (core, sq)
    } else {
        (4 * core, sq / 2)
    };
    let od = OrderDisc::new(dk, f)?;
    debug_assert_eq!(&od.delta, delta);
    Ok(od)
}
