use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates<S: Scalar>(a: &[S], b: &[S]) -> Result<bool> {
    check_lengths(a, b)?;
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return Ok(false);
        }
        strict |= x < y;
    }
    Ok(strict)
}

/// Dominance with differences inside the scalar's merge tolerance treated
/// as equality.
pub fn dominates_approx<S: Scalar>(a: &[S], b: &[S]) -> Result<bool> {
    check_lengths(a, b)?;
    let mut strict = false;
    for (&x, &y) in a.iter().zip(b) {
        if crate::scalar::approx_eq(x, y) {
            continue;
        }
        if x > y {
            return Ok(false);
        }
        strict = true;
    }
    Ok(strict)
}

fn check_lengths<S>(a: &[S], b: &[S]) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "cost vectors of different lengths ({} vs {})",
            a.len(),
            b.len()
        )))
    }
}

/// Indices of the vectors not dominated by any other.
pub fn pareto_filter<S: Scalar>(vectors: &[Vec<S>]) -> Result<Vec<usize>> {
    filter(vectors, dominates)
}

pub fn pareto_filter_approx<S: Scalar>(vectors: &[Vec<S>]) -> Result<Vec<usize>> {
    filter(vectors, dominates_approx)
}

fn filter<S: Scalar>(vectors: &[Vec<S>], dom: fn(&[S], &[S]) -> Result<bool>) -> Result<Vec<usize>> {
    let mut keep = Vec::new();
    'outer: for (i, v) in vectors.iter().enumerate() {
        for (k, w) in vectors.iter().enumerate() {
            if k != i && dom(w, v)? {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    Ok(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_cases() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!dominates(&[2.0, 1.0], &[1.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(dominates(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn approx_ignores_noise() {
        let a = [1.0 + 1e-13, 2.0];
        let b = [1.0, 2.0];
        assert!(dominates(&b, &a).unwrap());
        assert!(!dominates_approx(&b, &a).unwrap());
        assert!(dominates_approx(&[1.0, 1.0], &[1.0, 1.5]).unwrap());
    }

    #[test]
    fn filters() {
        assert_eq!(pareto_filter(&[vec![5.0, 5.0]]).unwrap(), vec![0]);
        let trio = vec![vec![1.0, 3.0], vec![3.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(pareto_filter(&trio).unwrap(), vec![0, 1, 2]);
        assert_eq!(pareto_filter(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap(), vec![0]);
        assert_eq!(pareto_filter(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap(), vec![0, 1]);
    }

    fn vec3() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(0i64..4, 3)
    }

    proptest! {
        #[test]
        fn irreflexive_and_transitive(a in vec3(), b in vec3(), c in vec3()) {
            let f = |v: &Vec<i64>| v.iter().map(|&x| x as f64).collect::<Vec<f64>>();
            let (a, b, c) = (f(&a), f(&b), f(&c));
            prop_assert!(!dominates(&a, &a).unwrap());
            if dominates(&a, &b).unwrap() && dominates(&b, &c).unwrap() {
                prop_assert!(dominates(&a, &c).unwrap());
            }
            if dominates(&a, &b).unwrap() {
                prop_assert!(!dominates(&b, &a).unwrap());
            }
        }
    }
}
