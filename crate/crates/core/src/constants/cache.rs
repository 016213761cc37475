use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::{Lazy, OnceCell};

use crate::ball::{Precision, RealBall};
use crate::error::Result;
use crate::exact::{Integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstKey {
    Pi,
    EulerGamma,
    Sqrt(Integer),
    Log(Rational),
    Zeta(u32),
    Beta(u32),
    Lm3(u32),
    DoubleZeta(u32, u32),
}

type Slot = Arc<OnceCell<Result<RealBall>>>;

static CACHE: Lazy<Mutex<HashMap<(ConstKey, u32), Slot>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Precision bucket: the next power of two number of bits.
pub fn bucket(prec: Precision) -> Precision {
    Precision::new(prec.bits().next_power_of_two())
}

/// Returns the value for `key` computed at the bucket precision covering
/// `prec`. Each (key, bucket) slot is computed at most once; concurrent
/// callers for the same slot wait for the first computation.
pub fn cached<F>(key: ConstKey, prec: Precision, compute: F) -> Result<RealBall>
where
    F: FnOnce(Precision) -> Result<RealBall>,
{
    let b = bucket(prec);
    let slot = {
        let mut map = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        map.entry((key, b.bits())).or_default().clone()
    };
    slot.get_or_init(|| compute(b)).clone()
}
