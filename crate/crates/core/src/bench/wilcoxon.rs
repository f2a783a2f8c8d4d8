use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Below this many non-zero differences the exact null distribution is
/// used; at or above it, the normal approximation with tie correction.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WilcoxonResult {
    /// Non-zero differences.
    pub n: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// Two-sided p-value.
    pub p_value: f64,
}

/// Paired two-sided Wilcoxon signed-rank test on `a - b`. Zero differences
/// are dropped; tied magnitudes receive average ranks.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::usage(format!(
            "paired samples of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 6 {
        return Err(Error::usage(format!(
            "signed-rank test needs at least 6 pairs, got {}",
            a.len()
        )));
    }
    let mut diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            n,
            w_plus: 0.0,
            w_minus: 0.0,
            p_value: 1.0,
        });
    }
    diffs.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).expect("finite differences"));

    // Doubled average ranks keep tied ranks integral.
    let mut doubled = vec![0u64; n];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut k = i;
        while k + 1 < n && diffs[k + 1].abs() == diffs[i].abs() {
            k += 1;
        }
        let t = (k - i + 1) as f64;
        tie_term += t * t * t - t;
        for r in doubled.iter_mut().take(k + 1).skip(i) {
            *r = (i + 1 + k + 1) as u64;
        }
        i = k + 1;
    }
    let plus2: u64 = diffs
        .iter()
        .zip(&doubled)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let total2: u64 = doubled.iter().sum();
    let w_plus = plus2 as f64 / 2.0;
    let w_minus = (total2 - plus2) as f64 / 2.0;

    let p_value = if n < EXACT_LIMIT {
        exact_p(&doubled, plus2)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
        if var <= 0.0 {
            1.0
        } else {
            let z = (w_plus - mean) / var.sqrt();
            erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
        }
    };
    Ok(WilcoxonResult {
        n,
        w_plus,
        w_minus,
        p_value,
    })
}

/// Two-sided exact p-value by counting all `2^n` sign assignments.
fn exact_p(doubled: &[u64], observed: u64) -> f64 {
    let total: u64 = doubled.iter().sum();
    let mut counts = vec![0.0f64; total as usize + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in doubled {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let all: f64 = counts.iter().sum();
    let lower: f64 = counts[..=observed as usize].iter().sum::<f64>() / all;
    let upper: f64 = counts[observed as usize..].iter().sum::<f64>() / all;
    (2.0 * lower.min(upper)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(negative: &[usize], n: usize) -> Vec<f64> {
        (1..=n)
            .map(|k| if negative.contains(&k) { -(k as f64) } else { k as f64 })
            .collect()
    }

    #[test]
    fn identical_samples() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let r = wilcoxon_signed_rank(&a, &a).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.n, 0);
    }

    #[test]
    fn input_checks() {
        assert!(wilcoxon_signed_rank(&[1.0; 5], &[0.0; 5]).is_err());
        assert!(wilcoxon_signed_rank(&[1.0; 6], &[0.0; 7]).is_err());
    }

    // Reference p-values below come from scipy.stats.wilcoxon 1.15
    // (zero_method="wilcox", correction=False).

    #[test]
    fn exact_matches_reference() {
        let d = [1.5, -0.5, 2.5, 3.5, -4.5, 5.5, 6.5, 7.5, -8.5, 9.5];
        let r = wilcoxon_signed_rank(&d, &[0.0; 10]).unwrap();
        assert_eq!(r.w_minus, 15.0);
        assert!((r.p_value - 0.232421875).abs() < 1e-12);
        let seven: Vec<f64> = (1..=7).map(f64::from).collect();
        assert!((wilcoxon_signed_rank(&seven, &[0.0; 7]).unwrap().p_value - 0.015625).abs() < 1e-12);
    }

    #[test]
    fn critical_value_n10() {
        // Tabulated two-sided critical value at alpha = 0.05, n = 10 is 8.
        for neg in [&[8][..], &[1, 7], &[3, 5]] {
            let r = wilcoxon_signed_rank(&signs(neg, 10), &[0.0; 10]).unwrap();
            assert_eq!(r.w_minus, 8.0);
            assert!((r.p_value - 0.048828125).abs() < 1e-12);
            assert!(r.p_value < 0.05);
        }
        for neg in [&[9][..], &[1, 8]] {
            let r = wilcoxon_signed_rank(&signs(neg, 10), &[0.0; 10]).unwrap();
            assert_eq!(r.w_minus, 9.0);
            assert!((r.p_value - 0.064453125).abs() < 1e-12);
            assert!(r.p_value > 0.05);
        }
    }

    #[test]
    fn normal_approximation_with_ties() {
        let a = [
            2.0, -2.6, 0.4, -0.6, -0.5, -0.2, -2.0, -0.2, -0.9, 3.3, 0.2, -0.4, -0.3, -0.7, -1.1, -0.4, 0.5, -0.2, 1.0,
            -0.2, 0.0, 1.5, 0.5, -0.5, -0.2, 0.5, 1.9, -0.3, -0.2, 1.0,
        ];
        let b = [
            2.6, -2.6, -0.8, -1.5, -0.9, -1.2, 0.5, -1.5, -0.2, 4.7, -0.4, -1.4, -0.2, 0.1, -1.4, -0.6, -1.2, -1.2,
            0.5, -1.6, -0.1, 2.1, -0.4, -1.4, -0.3, 1.0, 1.4, 1.9, -1.2, 0.2,
        ];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.n, 29);
        assert_eq!(r.w_plus.min(r.w_minus), 141.5);
        assert!((r.p_value - 0.10016876014348801).abs() < 1e-9, "{}", r.p_value);

        let mut c: Vec<f64> = (1..=22).map(f64::from).collect();
        c[18] = -19.0;
        let r = wilcoxon_signed_rank(&c, &[0.0; 22]).unwrap();
        assert!((r.p_value - 0.0004829168093193103).abs() < 1e-12);
    }

    #[test]
    fn constant_shift_is_highly_significant() {
        let b: Vec<f64> = (0..50).map(|i| i as f64 / 8.0).collect();
        let a: Vec<f64> = b.iter().map(|x| x + 0.5).collect();
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert!(r.p_value < 0.001);
        assert!((r.p_value - 1.5374597944280347e-12).abs() < 1e-15);
    }
}
