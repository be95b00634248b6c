//! Invariant suites behind `check`.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{is_prime, phi, OrderDisc};
use crate::error::{Error, Result};
use crate::locus::fiber::{has_elliptic_points, primitive_from_fiber};
use crate::locus::oracle::compare;
use crate::locus::tables::psi_check;
use crate::locus::{
    closed_point_classes, fiber_x0mn, lifted_classes, minimal_fields, primitive_prime_power, primitive_x0mn, x1_fiber,
};

const PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

struct Suite {
    name: &'static str,
    cases: u64,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, what: impl FnOnce() -> String, outcome: Result<bool>) {
        self.cases += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(what()),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }

    fn report(&self, out: &mut dyn Write) -> Result<()> {
        let status = if self.failures.is_empty() { "ok".to_string() } else { format!("{} FAILED", self.failures.len()) };
        let mut text = format!("{:<12} {:>6} cases  {status}\n", self.name, self.cases);
        for f in self.failures.iter().take(5) {
            text += &format!("    {f}\n");
        }
        out.write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}")))
    }
}

fn divisors_of(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |m| n.is_multiple_of(*m))
}

fn prime_powers(limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for ell in (2..=limit).filter(|&p| is_prime(p)) {
        let mut a = 1;
        while ell.pow(a) <= limit {
            out.push((ell, a));
            a += 1;
        }
    }
    out
}

/// Runs every suite, printing one line each. Returns true when all pass.
pub fn run(full: bool, out: &mut dyn Write) -> Result<bool> {
    let (f_max, a_max, depth, n_fiber, n_prim, pp_limit, f_case) =
        if full { (6, 5, 6, 60, 200, 200, 12) } else { (2, 3, 4, 20, 50, 50, 4) };
    let mut suites = Vec::new();

    let mut s = Suite::new("psi-sum");
    for dk in [-3i64, -4] {
        for f in 1..=f_max {
            let o = OrderDisc::new(dk, f)?;
            for ell in PRIMES {
                for a in 1..=a_max {
                    s.record(
                        || format!("dk={dk} f={f} ell={ell} a={a}"),
                        closed_point_classes(&o, ell, a).and_then(|c| psi_check(&c, ell, a)),
                    );
                }
            }
        }
    }
    suites.push(s);

    let mut s = Suite::new("oracle");
    for dk in [-3i64, -4] {
        for ell in PRIMES {
            for level in 0..depth {
                for a in 1..=(depth - level) {
                    s.record(
                        || format!("dk={dk} ell={ell} L={level} a={a}"),
                        compare(dk, ell, 1, level, a).map(|c| c.agrees()),
                    );
                }
            }
        }
    }
    suites.push(s);

    let mut s = Suite::new("casework");
    for dk in [-3i64, -4] {
        for f in 1..=f_case {
            let o = OrderDisc::new(dk, f)?;
            for (ell, a) in prime_powers(pp_limit) {
                for ap in 0..=a {
                    let outcome = (|| {
                        let fields: Vec<_> = lifted_classes(&o, ell, ap, a)?.into_iter().map(|c| c.field).collect();
                        let p = primitive_prime_power(&o, ell, ap, a)?;
                        Ok(minimal_fields(&fields)? == minimal_fields(&p.fields)?)
                    })();
                    s.record(|| format!("dk={dk} f={f} ell={ell} a'={ap} a={a}"), outcome);
                }
            }
        }
    }
    suites.push(s);

    let mut s = Suite::new("composite");
    for dk in [-3i64, -4] {
        for f in 1..=f_max {
            let o = OrderDisc::new(dk, f)?;
            for n in 1..=n_fiber {
                for m in divisors_of(n) {
                    s.record(|| format!("dk={dk} f={f} M={m} N={n}"), fiber_x0mn(&o, m, n).map(|r| r.psi_check()));
                }
            }
        }
    }
    suites.push(s);

    let mut s = Suite::new("primitive");
    for dk in [-3i64, -4] {
        for f in 1..=f_max {
            let o = OrderDisc::new(dk, f)?;
            for n in 1..=n_prim {
                for m in [1u64, 2].into_iter().filter(|m| n % m == 0 && (*m == 1 || o.is_even())) {
                    let outcome = (|| {
                        let p = primitive_x0mn(&o, m, n)?;
                        let (fields, degrees) = primitive_from_fiber(&fiber_x0mn(&o, m, n)?)?;
                        let mut want = p.degrees.clone();
                        want.sort();
                        let mut ok = minimal_fields(&p.fields)? == fields && want == degrees;
                        if let (Some(b), Some(c)) = (&p.bold_b, &p.bold_c) {
                            ok &= c <= b && (b * 2u8 % c).is_zero();
                        }
                        Ok(ok)
                    })();
                    s.record(|| format!("dk={dk} f={f} M={m} N={n}"), outcome);
                }
            }
        }
    }
    suites.push(s);

    let mut s = Suite::new("x1");
    for dk in [-3i64, -4] {
        let o = OrderDisc::new(dk, 1)?;
        for n in 4..=50u64 {
            let outcome = (|| {
                let inert = x1_fiber(&o, 2 - n % 2, n, false)?;
                let half = phi(n)? / BigUint::from(2u8);
                let mut ok = inert.e == 1 && BigUint::from(inert.f) == half;
                if has_elliptic_points(&o, n)? {
                    let t = x1_fiber(&o, 1, n, true)?;
                    ok &= t.e as u64 == o.w() / 2 && BigUint::from(t.e) * BigUint::from(t.f) == half && t.points == 1;
                } else {
                    ok &= x1_fiber(&o, 1, n, true).is_err();
                }
                Ok(ok)
            })();
            s.record(|| format!("dk={dk} N={n}"), outcome);
        }
    }
    suites.push(s);

    let mut all = true;
    for s in &suites {
        s.report(out)?;
        all &= s.failures.is_empty();
    }
    Ok(all)
}
