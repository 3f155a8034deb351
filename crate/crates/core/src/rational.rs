//! Exact rational scalars used throughout the geometry pipeline.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// The scalar type for all exact geometry. Numerators and denominators in
/// this problem domain stay tiny (tile counts, cusp widths, interval
/// endpoints), so a machine-word ratio suffices.
pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Ratio::from_integer(n)
}

pub fn qr(num: i64, den: i64) -> Q {
    Ratio::new(num, den)
}

pub fn q_to_f64(x: Q) -> f64 {
    // Exact for the small numerators/denominators that occur here.
    x.to_f64().unwrap_or_else(|| *x.numer() as f64 / *x.denom() as f64)
}

/// Render a rational as `p/q` (or just `p` when integral).
pub fn fmt_q(x: Q) -> String {
    if x.denom() == &1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse a rational from `p`, `p/q`, or a leading-minus variant.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<i64>().ok().map(q),
        Some((n, d)) => {
            let n = n.trim().parse::<i64>().ok()?;
            let d = d.trim().parse::<i64>().ok()?;
            if d == 0 {
                None
            } else {
                Some(qr(n, d))
            }
        }
    }
}

/// Floor of a rational as an i64.
pub fn q_floor(x: Q) -> i64 {
    x.floor().to_integer()
}

/// True if x is an integer.
pub fn q_is_int(x: Q) -> bool {
    x.denom() == &1
}

/// abs value.
pub fn q_abs(x: Q) -> Q {
    if x.is_negative() {
        -x
    } else {
        x
    }
}

pub fn q_is_zero(x: Q) -> bool {
    x.is_zero()
}
