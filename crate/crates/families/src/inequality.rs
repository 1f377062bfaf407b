use serde::{Deserialize, Serialize};

/// Comparisons against 1 closer than this are treated as undecided.
pub const SLACK: f64 = 1e-9;

/// `(9n)^{1/2} · 2^{n/2} / ((18n + 1)(n + log₂(9n + 1)))`.
pub fn inequality_value(n: usize) -> f64 {
    let n = n as f64;
    (9.0 * n).sqrt() * (n / 2.0).exp2() / ((18.0 * n + 1.0) * (n + (9.0 * n + 1.0).log2()))
}

/// The same quantity evaluated term by term in the log₂ domain.
pub fn log2_inequality_value(n: usize) -> f64 {
    let n = n as f64;
    0.5 * (9.0 * n).log2() + n / 2.0 - (18.0 * n + 1.0).log2() - (n + (9.0 * n + 1.0).log2()).log2()
}

/// Least `n₀ ≥ 6` with the inequality holding for every `n` in `n₀..=scanned_to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub n0: usize,
    pub scanned_to: usize,
}

/// Scans `6..=limit` upward in the linear domain.
pub fn threshold_forward(limit: usize) -> Option<Threshold> {
    let mut last_below = 5;
    for n in 6..=limit {
        let v = inequality_value(n);
        if (v - 1.0).abs() < SLACK {
            return None;
        }
        if v < 1.0 {
            last_below = n;
        }
    }
    (last_below < limit).then_some(Threshold { n0: last_below + 1, scanned_to: limit })
}

/// Scans `limit` down to 6 in the log domain, stopping at the first failure.
pub fn threshold_backward(limit: usize) -> Option<Threshold> {
    let slack = (1.0 + SLACK).log2();
    for n in (6..=limit).rev() {
        let l = log2_inequality_value(n);
        if l.abs() < slack {
            return None;
        }
        if l < 0.0 {
            return (n < limit).then_some(Threshold { n0: n + 1, scanned_to: limit });
        }
    }
    Some(Threshold { n0: 6, scanned_to: limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_six() {
        let v = inequality_value(6);
        assert!((v - 0.04578).abs() < 1e-4, "{v}");
    }

    #[test]
    fn both_orders_agree() {
        let f = threshold_forward(200).unwrap();
        let b = threshold_backward(200).unwrap();
        assert_eq!(f.n0, b.n0);
        assert_eq!(f.n0, 19);
        assert!(inequality_value(18) < 1.0 && inequality_value(19) >= 1.0);
    }

    #[test]
    fn monotone_and_growing() {
        for n in 6..200 {
            assert!(inequality_value(n + 1) > inequality_value(n));
            assert!((inequality_value(n).log2() - log2_inequality_value(n)).abs() < 1e-9);
        }
        let ratio = |n| inequality_value(n + 1) / inequality_value(n);
        assert!(ratio(14) < 1.3);
        for n in 15..200 {
            assert!(ratio(n) > 1.3 && ratio(n + 1) > ratio(n));
        }
    }
}
