use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{Integer, Rational};

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &Integer, n: &Integer) -> i32 {
    assert!(n.is_positive() && n.is_odd(), "jacobi needs an odd positive modulus");
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1;
    let three = Integer::from(3);
    let five = Integer::from(5);
    let eight = Integer::from(8);
    let four = Integer::from(4);
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

pub fn jacobi_i64(a: i64, n: u64) -> i32 {
    jacobi(&Integer::from(a), &Integer::from(n))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub fn reduce(x: &Integer, m: u64) -> u64 {
    x.mod_floor(&Integer::from(m)).to_u64().expect("reduced below modulus")
}

/// Inverse of x mod m, if gcd(x, m) = 1.
pub fn inv_mod(x: &Integer, m: u64) -> Option<u64> {
    let m_int = Integer::from(m);
    let e = x.mod_floor(&m_int).extended_gcd(&m_int);
    if !e.gcd.is_one() {
        return None;
    }
    Some(reduce(&e.x, m))
}

/// A rational reduced mod m; None when the denominator is not invertible.
pub fn rational_mod(q: &Rational, m: u64) -> Option<u64> {
    let inv = inv_mod(q.denom(), m)?;
    Some(mul_mod(reduce(q.numer(), m), inv, m))
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row n of Pascal's triangle mod m, built by additions only.
pub fn pascal_row_mod(n: usize, m: u64) -> Vec<u64> {
    let mut row = vec![1 % m];
    for _ in 0..n {
        row = next_row(&row, m);
    }
    row
}

fn next_row(row: &[u64], m: u64) -> Vec<u64> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(1 % m);
    for w in row.windows(2) {
        next.push((w[0] + w[1]) % m);
    }
    next.push(1 % m);
    next
}

/// T_n(b, c) mod m for n <= max_n via the direct sum over Pascal rows.
/// Several parameter pairs share one pass; `central[j]` = C(2j, j) mod m is
/// returned as well.
pub struct TrinomialsMod {
    pub central: Vec<u64>,
    pub values: Vec<Vec<u64>>,
}

pub fn trinomials_mod(params: &[(Integer, Integer)], max_n: usize, m: u64) -> TrinomialsMod {
    let pows = |x: &Integer| {
        let x = reduce(x, m);
        let mut v = vec![1 % m];
        for _ in 0..max_n {
            let last = *v.last().unwrap();
            v.push(mul_mod(last, x, m));
        }
        v
    };
    let tables: Vec<(Vec<u64>, Vec<u64>)> = params.iter().map(|(b, c)| (pows(b), pows(c))).collect();
    let mut central = Vec::with_capacity(max_n / 2 + 1);
    let mut values = vec![Vec::with_capacity(max_n + 1); params.len()];
    let mut row = vec![1 % m];
    for n in 0..=max_n {
        if n % 2 == 0 {
            central.push(row[n / 2]);
        }
        for (i, (bp, cp)) in tables.iter().enumerate() {
            let mut s = 0u64;
            for j in 0..=n / 2 {
                let t = mul_mod(mul_mod(row[2 * j], central[j], m), mul_mod(bp[n - 2 * j], cp[j], m), m);
                s = (s + t) % m;
            }
            values[i].push(s);
        }
        if n < max_n {
            row = next_row(&row, m);
        }
    }
    TrinomialsMod { central, values }
}
