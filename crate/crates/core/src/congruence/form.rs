use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SideConstraint {
    XNotDivisibleBy(i64),
    XMinusYDivisibleBy(i64),
}

impl SideConstraint {
    pub fn holds(self, x: i64, y: i64) -> bool {
        match self {
            SideConstraint::XNotDivisibleBy(n) => x % n != 0,
            SideConstraint::XMinusYDivisibleBy(n) => (x - y) % n == 0,
        }
    }
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s >= 0 && s * s == n)
}

/// Every (x, y) with x > 0 and target = alpha x^2 + beta y^2 satisfying the
/// constraints, both signs of y included.
pub fn all_representations(target: i64, alpha: i64, beta: i64, constraints: &[SideConstraint]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut x = 1;
    while alpha * x * x <= target {
        let rest = target - alpha * x * x;
        if rest % beta == 0 {
            if let Some(y) = isqrt(rest / beta) {
                for yy in if y == 0 { vec![0] } else { vec![y, -y] } {
                    if constraints.iter().all(|c| c.holds(x, yy)) {
                        out.push((x, yy));
                    }
                }
            }
        }
        x += 1;
    }
    out
}

/// First representation in search order (smallest x, then y >= 0 before y < 0).
pub fn represent_form(target: i64, alpha: i64, beta: i64, constraints: &[SideConstraint]) -> Option<(i64, i64)> {
    all_representations(target, alpha, beta, constraints).into_iter().next()
}
