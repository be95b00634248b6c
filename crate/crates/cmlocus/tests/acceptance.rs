//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use cmlocus::arith::{
    class_number, compose_rcf, in_s, is_prime, phi, psi, rcf_rel_degree, reduced_forms, FieldSymbol, OrderDisc,
};
use cmlocus::locus::fiber::{has_elliptic_points, primitive_from_fiber};
use cmlocus::locus::oracle::compare;
use cmlocus::locus::tables::degree_sum;
use cmlocus::locus::{
    closed_point_classes, count_fiber_x0mn, fiber_x0mn, lifted_classes, minimal_fields, primitive_prime_power,
    primitive_x0mn, x1_fiber, PrimeLocalDatum,
};
use cmlocus::Result;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

type Outcome = Result<(bool, String)>;

fn prime_fiber(dk: i64, ell: u64) -> Outcome {
    let o = OrderDisc::new(dk, 1)?;
    let r = fiber_x0mn(&o, 1, ell)?;
    let want = vec![(FieldSymbol::q(1, dk), 1, 1, 1), (FieldSymbol::q(ell, dk), 1, ell as u32, 1)];
    let got = r.merged();
    let collapses = FieldSymbol::q(ell, dk).canonical_m()? == 1;
    let total = r.check_total == psi(ell)?;
    let shown: Vec<String> = got.iter().map(|(f, d, e, c)| format!("{f} d={d} e={e} x{c}")).collect();
    Ok((got == want && collapses && total, format!("{}; sum = {}", shown.join(", "), r.check_total)))
}

fn psi_sweep() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for dk in [-3i64, -4] {
        for f in 1..=6u64 {
            let o = OrderDisc::new(dk, f)?;
            for ell in PRIMES {
                for a in 1..=5u32 {
                    cases += 1;
                    if degree_sum(&closed_point_classes(&o, ell, a)?) != psi(ell.pow(a))? {
                        bad.push(format!("({dk},{f},{ell},{a})"));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty() && cases >= 300, format!("{cases} fibers, {} mismatches {}", bad.len(), bad.join(" "))))
}

fn class_numbers() -> Outcome {
    let h = |d: i64| class_number(&BigInt::from(d));
    let examples = h(-4)? == 1 && h(-64)? == 2 && h(-243)? == 3;
    let mut bad = Vec::new();
    for dk in [-3i64, -4] {
        for f in 1..=500u64 {
            let d = BigInt::from(dk) * BigInt::from(f) * BigInt::from(f);
            if rcf_rel_degree(dk, f)? != BigUint::from(reduced_forms(&d)?.len()) {
                bad.push(format!("({dk},{f})"));
            }
        }
    }
    Ok((examples && bad.is_empty(), format!("h(-4), h(-64), h(-243) = 1, 2, 3: {examples}; 1000 conductors, {} mismatches", bad.len())))
}

fn compositum() -> Outcome {
    let r = compose_rcf(&[FieldSymbol::k(2, -3), FieldSymbol::k(3, -3)])?;
    let anomaly = r.closure == FieldSymbol::k(6, -3)
        && r.index == 3
        && r.degree()? == FieldSymbol::k(1, -3).degree()?
        && rcf_rel_degree(-3, 6)? == BigUint::from(3u8);
    let mut pairs = 0;
    let mut bad = 0;
    for dk in [-3i64, -4] {
        let half = if dk == -3 { 3 } else { 2 };
        for m1 in (2..=40u64).filter(|m| !in_s(*m, dk)) {
            for m2 in (m1 + 1..=40).filter(|m| !in_s(*m, dk) && m.gcd(&m1) == 1) {
                pairs += 1;
                if compose_rcf(&[FieldSymbol::k(m1, dk), FieldSymbol::k(m2, dk)])?.index != half {
                    bad += 1;
                }
            }
        }
    }
    Ok((anomaly && bad == 0, format!("K(2)K(3) = K(1) with [K(6):K(1)] = 3: {anomaly}; {pairs} coprime pairs, {bad} with index other than w/2")))
}

fn x1_transfer() -> Outcome {
    let mut elliptic = 0;
    let mut bad = Vec::new();
    for n in 4..=50u64 {
        let half = phi(n)?.to_u64().unwrap_or(0) / 2;
        for dk in [-4i64, -3] {
            let o = OrderDisc::new(dk, 1)?;
            if has_elliptic_points(&o, n)? {
                elliptic += 1;
                let t = x1_fiber(&o, 1, n, true)?;
                let want_e = if dk == -4 { 2 } else { 3 };
                if t.e != want_e || t.f * want_e as u64 != half || t.points != 1 {
                    bad.push(format!("elliptic ({dk},{n})"));
                }
            } else if x1_fiber(&o, 1, n, true).is_ok() {
                bad.push(format!("spurious elliptic ({dk},{n})"));
            }
            for (order, m) in [(OrderDisc::new(dk, 2)?, 1u64), (OrderDisc::new(dk, 3)?, 1), (o.clone(), n)] {
                let t = x1_fiber(&order, m, n, false)?;
                if (t.e, t.f, t.points) != (1, half, 1) || x1_fiber(&order, m, n, true).is_ok() {
                    bad.push(format!("inert ({},{m},{n})", order.delta));
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{elliptic} elliptic cases, {} failures {}", bad.len(), bad.join(" "))))
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

fn casework() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for dk in [-3i64, -4] {
        for f in 1..=12u64 {
            let o = OrderDisc::new(dk, f)?;
            for (ell, a) in prime_powers(200) {
                for ap in 0..=a {
                    cases += 1;
                    let fields: Vec<FieldSymbol> = lifted_classes(&o, ell, ap, a)?.into_iter().map(|c| c.field).collect();
                    let p = primitive_prime_power(&o, ell, ap, a)?;
                    if minimal_fields(&fields)? != minimal_fields(&p.fields)? {
                        bad.push(format!("({dk},{f},{ell},{ap},{a}) case {}", p.case));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} (order, a', ell^a) triples, {} mismatches {}", bad.len(), bad.join(" "))))
}

fn oracle() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for dk in [-3i64, -4] {
        for ell in PRIMES {
            for level in 0..6u32 {
                for a in 1..=(6 - level) {
                    cases += 1;
                    if !compare(dk, ell, 1, level, a)?.agrees() {
                        bad.push(format!("({dk},{ell},L={level},a={a})"));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} (ell, L, a) cases, {} disagreements {}", bad.len(), bad.join(" "))))
}

/// Every choice of one point of X0(ell_i^a_i) per prime of N.
fn tuples(order: &OrderDisc, m: u64, n: u64) -> Result<Vec<Vec<PrimeLocalDatum>>> {
    let mut out: Vec<Vec<PrimeLocalDatum>> = vec![Vec::new()];
    for (ell, a) in cmlocus::arith::factor(n)? {
        let a_prime = cmlocus::arith::ord(ell, m);
        let mut next = Vec::new();
        for t in &out {
            for c in closed_point_classes(order, ell, a)? {
                let mut t = t.clone();
                t.push(PrimeLocalDatum::new(order, ell, a_prime, a, c)?);
                next.push(t);
            }
        }
        out = next;
    }
    Ok(out)
}

fn composite_totals() -> Outcome {
    let mut fibers = 0;
    let mut counts = 0;
    let mut bad = Vec::new();
    for dk in [-3i64, -4] {
        for f in 1..=6u64 {
            let o = OrderDisc::new(dk, f)?;
            for n in 1..=60u64 {
                for m in (1..=n).filter(|m| n % m == 0) {
                    fibers += 1;
                    match fiber_x0mn(&o, m, n) {
                        Ok(r) if r.check_total == psi(n)? * BigUint::from(m) * phi(m)? => {}
                        Ok(r) => bad.push(format!("total ({dk},{f},{m},{n}) = {}", r.check_total)),
                        Err(e) => bad.push(format!("({dk},{f},{m},{n}): {e}")),
                    }
                    if f == 1 && m >= 2 {
                        for t in tuples(&o, m, n)? {
                            counts += 1;
                            if !matches!(count_fiber_x0mn(&o, m, n, &t), Ok(c) if c > 0) {
                                bad.push(format!("count ({dk},{m},{n})"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{fibers} fibers, {counts} point counts, {} failures {}", bad.len(), bad.join(" "))))
}

fn primitive_degrees() -> Outcome {
    let mut instances = 0;
    let mut two_degrees = 0;
    let mut bad = Vec::new();
    for dk in [-3i64, -4] {
        for f in 1..=12u64 {
            let o = OrderDisc::new(dk, f)?;
            for n in 1..=200u64 {
                for m in [1u64, 2].into_iter().filter(|&m| n % m == 0 && (m == 1 || o.is_even())) {
                    let p = primitive_x0mn(&o, m, n)?;
                    let (Some(b), Some(c)) = (&p.bold_b, &p.bold_c) else { continue };
                    instances += 1;
                    let (_, degrees) = primitive_from_fiber(&fiber_x0mn(&o, m, n)?)?;
                    let special = p.local.iter().filter(|(_, l)| l.fields.len() == 2).all(|(_, l)| l.case == "1.5b");
                    if degrees.len() == 2 {
                        two_degrees += 1;
                    }
                    if !(c <= b && (b * 2u8 % c).is_zero() && (degrees.len() == 2) == special) {
                        bad.push(format!("({dk},{f},{m},{n})"));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{instances} two-field instances, {two_degrees} with two degrees, {} failures {}", bad.len(), bad.join(" "))))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("fiber of X0(2) over J_-4", || prime_fiber(-4, 2)),
        ("fiber of X0(3) over J_-3", || prime_fiber(-3, 3)),
        ("psi-sum sweep", psi_sweep),
        ("class numbers and relative degrees", class_numbers),
        ("compositum index", compositum),
        ("X1 transfer", x1_transfer),
        ("prime-power casework", casework),
        ("graph oracle", oracle),
        ("composite-level totals", composite_totals),
        ("primitive degrees", primitive_degrees),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = std::time::Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
