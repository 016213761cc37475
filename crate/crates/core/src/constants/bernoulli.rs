use std::sync::Mutex;

use num_traits::Zero;

use crate::exact::{Integer, Rational};

static TABLE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli number B_n (with B_1 = -1/2), exact and memoized.
pub fn bernoulli(n: usize) -> Rational {
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from_integer(1.into()));
    }
    while table.len() <= n {
        let m = table.len();
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        let mut c = Integer::from(1);
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(c.clone()) * b;
            }
            c = c * (m - j + 1) / (j + 1);
        }
        table.push(-acc / Rational::from_integer((m as i64 + 1).into()));
    }
    table[n].clone()
}
