//! Exact rational pass rates. All arithmetic stays in integers; rendering to
//! one decimal with round-half-up is the only lossy step.

use serde::{Deserialize, Serialize};

/// `num / den` with `den > 0`, kept unreduced so numerator and denominator
/// remain meaningful counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Option<Rate> {
        if den == 0 {
            None
        } else {
            Some(Rate { num, den })
        }
    }

    /// Percent in tenths, rounded half-up: 27/30 -> 900 (i.e. 90.0%).
    pub fn percent_tenths(&self) -> u64 {
        let scaled = self.num as u128 * 1000;
        let den = self.den as u128;
        let mut tenths = scaled / den;
        if (scaled % den) * 2 >= den {
            tenths += 1;
        }
        tenths as u64
    }

    /// One-decimal percent string: "90.0%".
    pub fn render_percent(&self) -> String {
        let t = self.percent_tenths();
        format!("{}.{}%", t / 10, t % 10)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact comparison: `|self - other| < bound_num / bound_den`.
    pub fn abs_diff_lt(&self, other: &Rate, bound_num: u64, bound_den: u64) -> bool {
        let lhs = self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128;
        let lhs = lhs.unsigned_abs() * bound_den as u128;
        let rhs = bound_num as u128 * self.den as u128 * other.den as u128;
        lhs < rhs
    }

    /// Exact ordering by value, for sorting report rows.
    pub fn cmp_value(&self, other: &Rate) -> std::cmp::Ordering {
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        a.cmp(&b)
    }
}

/// "n/a" for an undefined rate (zero denominator).
pub fn render_opt(rate: &Option<Rate>) -> String {
    match rate {
        Some(r) => r.render_percent(),
        None => "n/a".to_string(),
    }
}
