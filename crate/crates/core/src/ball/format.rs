use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_traits::{One, Zero};

/// Decimal scientific notation of `man * 2^exp` with `digits` significant
/// digits. Rounds to nearest, or away from zero when `round_up` is set.
pub fn format_scientific(man: &BigInt, exp: i64, digits: usize, round_up: bool) -> String {
    let digits = digits.max(1);
    if man.is_zero() {
        return "0".to_string();
    }
    let neg = man.sign() == num_bigint::Sign::Minus;
    let (num, den): (BigUint, BigUint) = if exp >= 0 {
        (man.magnitude() << exp as usize, BigUint::one())
    } else {
        (man.magnitude().clone(), BigUint::one() << (-exp) as usize)
    };
    let approx_bits = man.bits() as f64 + exp as f64;
    let mut e10 = ((approx_bits - 1.0) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigUint::from(10u32);
    let lower = ten.pow(digits as u32 - 1);
    let upper = ten.pow(digits as u32);
    let mut n;
    loop {
        let s = digits as i64 - 1 - e10;
        let (q, r, d) = if s >= 0 {
            let scaled = &num * ten.pow(s as u32);
            let (q, r) = scaled.div_rem(&den);
            (q, r, den.clone())
        } else {
            let d = &den * ten.pow((-s) as u32);
            let (q, r) = num.div_rem(&d);
            (q, r, d)
        };
        if q >= upper {
            e10 += 1;
            continue;
        }
        if q < lower {
            e10 -= 1;
            continue;
        }
        n = q;
        let bump = if round_up { !r.is_zero() } else { &r + &r >= d };
        if bump {
            n += 1u32;
        }
        if n == upper {
            n = lower.clone();
            e10 += 1;
        }
        break;
    }
    let s = n.to_string();
    let (head, tail) = s.split_at(1);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push('e');
    out.push_str(&e10.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_simple_values() {
        assert_eq!(format_scientific(&BigInt::from(3), 0, 3, false), "3.00e0");
        assert_eq!(format_scientific(&BigInt::from(-1), -1, 2, false), "-5.0e-1");
        assert_eq!(format_scientific(&BigInt::from(1), -2, 1, true), "3e-1");
        assert_eq!(format_scientific(&BigInt::from(999), 0, 2, false), "1.0e3");
        assert_eq!(format_scientific(&BigInt::from(1000), 0, 4, false), "1.000e3");
    }
}
