use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::Rational;

const MAG_BITS: u32 = 30;
const MAG_TOP: u64 = 1 << (MAG_BITS - 1);

/// Low-precision nonnegative magnitude `man * 2^exp` with a 30-bit mantissa.
/// Every arithmetic routine states its rounding direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const fn zero() -> Mag {
        Mag { man: 0, exp: 0 }
    }

    pub fn one() -> Mag {
        Mag::pow2(0)
    }

    pub fn pow2(e: i64) -> Mag {
        Mag { man: MAG_TOP, exp: e - (MAG_BITS as i64 - 1) }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    fn normalize(v: u128, exp: i64, up: bool) -> Mag {
        if v == 0 {
            return Mag::zero();
        }
        let bits = 128 - v.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let mut m = (v >> shift) as u64;
            let lost = v & ((1u128 << shift) - 1) != 0;
            let mut e = exp + shift as i64;
            if up && lost {
                m += 1;
                if m == 1 << MAG_BITS {
                    m >>= 1;
                    e += 1;
                }
            }
            Mag { man: m, exp: e }
        } else {
            let shift = MAG_BITS - bits;
            Mag { man: (v as u64) << shift, exp: exp - shift as i64 }
        }
    }

    pub fn from_u64_up(v: u64) -> Mag {
        Mag::normalize(v as u128, 0, true)
    }

    /// Upper bound on `x * 2^exp`.
    pub fn from_biguint_up(x: &BigUint, exp: i64) -> Mag {
        Mag::from_biguint(x, exp, true)
    }

    /// Lower bound on `x * 2^exp`.
    pub fn from_biguint_down(x: &BigUint, exp: i64) -> Mag {
        Mag::from_biguint(x, exp, false)
    }

    fn from_biguint(x: &BigUint, exp: i64, up: bool) -> Mag {
        let bits = x.bits();
        if bits == 0 {
            return Mag::zero();
        }
        if bits <= 64 {
            return Mag::normalize(x.to_u64().unwrap_or(0) as u128, exp, up);
        }
        let shift = bits - 64;
        let top = (x >> shift).to_u64().unwrap_or(0);
        let lost = x.trailing_zeros().unwrap_or(0) < shift;
        let mut m = Mag::normalize(top as u128, exp + shift as i64, up);
        if up && lost {
            m = m.add_ulp();
        }
        m
    }

    pub fn from_bigint_up(x: &BigInt, exp: i64) -> Mag {
        Mag::from_biguint_up(x.magnitude(), exp)
    }

    pub fn from_bigint_down(x: &BigInt, exp: i64) -> Mag {
        Mag::from_biguint_down(x.magnitude(), exp)
    }

    /// Upper bound on |q|.
    pub fn from_rational_up(q: &Rational) -> Mag {
        let n = Mag::from_bigint_up(q.numer(), 0);
        let d = Mag::from_bigint_down(q.denom(), 0);
        n.div_up(d)
    }

    /// Some value >= 2^x. Used for semi-rigorous tail estimates.
    pub fn from_log2_up(x: f64) -> Mag {
        if x == f64::NEG_INFINITY {
            return Mag::zero();
        }
        let e = x.floor();
        let frac = x - e;
        // 2^frac in [1, 2), scaled to a 30-bit mantissa with slack for f64 error
        let m = (frac.exp2() * (1u64 << (MAG_BITS - 1)) as f64).ceil() as u128 + 4;
        Mag::normalize(m, e as i64 - (MAG_BITS as i64 - 1), true)
    }

    fn add_ulp(self) -> Mag {
        Mag::normalize(self.man as u128 + 1, self.exp, true)
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag { man: self.man, exp: self.exp + e }
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let diff = hi.exp - lo.exp;
        if diff > 64 {
            return hi.add_ulp();
        }
        let v = ((hi.man as u128) << diff) + lo.man as u128;
        Mag::normalize(v, lo.exp, true)
    }

    /// max(self - o, 0), rounded down.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self <= o {
            return Mag::zero();
        }
        let diff = self.exp - o.exp;
        if diff > 64 {
            if self.man > MAG_TOP {
                return Mag { man: self.man - 1, exp: self.exp };
            }
            return Mag::normalize(((self.man as u128) << 1) - 1, self.exp - 1, false);
        }
        if diff >= 0 {
            let v = ((self.man as u128) << diff) - o.man as u128;
            Mag::normalize(v, o.exp, false)
        } else {
            // o has the larger exponent but a smaller value: exponents differ by one at most
            let d = (-diff) as u32;
            let v = self.man as u128 - ((o.man as u128) << d);
            Mag::normalize(v, self.exp, false)
        }
    }

    pub fn mul(self, o: Mag) -> Mag {
        self.mul_dir(o, true)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        self.mul_dir(o, false)
    }

    fn mul_dir(self, o: Mag, up: bool) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::zero();
        }
        Mag::normalize(self.man as u128 * o.man as u128, self.exp + o.exp, up)
    }

    pub fn mul_u64(self, k: u64) -> Mag {
        self.mul(Mag::from_u64_up(k))
    }

    /// Upper bound on self / o. Division by zero yields a huge magnitude.
    pub fn div_up(self, o: Mag) -> Mag {
        self.div_dir(o, true)
    }

    pub fn div_down(self, o: Mag) -> Mag {
        self.div_dir(o, false)
    }

    fn div_dir(self, o: Mag, up: bool) -> Mag {
        if self.is_zero() {
            return Mag::zero();
        }
        if o.is_zero() {
            return Mag::pow2(i64::MAX / 4);
        }
        let num = (self.man as u128) << 64;
        let q = num / o.man as u128;
        let r = num % o.man as u128;
        let q = if up && r != 0 { q + 1 } else { q };
        Mag::normalize(q, self.exp - o.exp - 64, up)
    }

    pub fn sqrt_up(self) -> Mag {
        self.sqrt_dir(true)
    }

    pub fn sqrt_down(self) -> Mag {
        self.sqrt_dir(false)
    }

    fn sqrt_dir(self, up: bool) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.exp.rem_euclid(2) != 0 {
            ((self.man as u128) << 1, self.exp - 1)
        } else {
            (self.man as u128, self.exp)
        };
        let v = m << 64;
        let mut s = isqrt_u128(v);
        if up && s * s != v {
            s += 1;
        }
        Mag::normalize(s, e / 2 - 32, up)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        (self.man as f64) * (self.exp as f64).exp2()
    }

    /// log2 of the magnitude (approximate); negative infinity for zero.
    pub fn log2(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        (self.man as f64).log2() + self.exp as f64
    }

    pub fn to_rational(self) -> Rational {
        let m = BigInt::from(self.man);
        if self.exp >= 0 {
            Rational::from_integer(m << self.exp as usize)
        } else {
            Rational::new(m, BigInt::one() << (-self.exp) as usize)
        }
    }

    pub(crate) fn parts(self) -> (u64, i64) {
        (self.man, self.exp)
    }
}

fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as u128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&other.exp).then(self.man.cmp(&other.man)),
        }
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, e) = self.parts();
        f.write_str(&super::format::format_scientific(&BigInt::from(m), e, 2, true))
    }
}

impl Zero for Mag {
    fn zero() -> Self {
        Mag::zero()
    }
    fn is_zero(&self) -> bool {
        self.man == 0
    }
}

impl std::ops::Add for Mag {
    type Output = Mag;
    fn add(self, o: Mag) -> Mag {
        Mag::add(self, o)
    }
}
