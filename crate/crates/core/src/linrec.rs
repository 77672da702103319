//! Fibonacci and Lucas numbers and the bounded square scans behind the
//! `n = 5` case analysis.
//!
//! The scans only confirm the known classifications up to a bound; the
//! solver treats the full classifications as imported facts.

use num_traits::{One, Zero};

use crate::arith::{as_square, Int};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibLucasPair {
    pub k: u64,
    pub fib: Int,
    pub lucas: Int,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    Fibonacci,
    Lucas,
}

/// `(F_k, F_{k+1})` by fast doubling.
fn fib_pair(k: u64) -> (Int, Int) {
    if k == 0 {
        return (Int::zero(), Int::one());
    }
    let (a, b) = fib_pair(k / 2);
    let c = &a * (&b * 2u8 - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

pub fn fib_lucas(k: u64) -> FibLucasPair {
    let (f, f_next) = fib_pair(k);
    let lucas = f_next * 2u8 - &f;
    FibLucasPair { k, fib: f, lucas }
}

pub fn fibonacci(k: u64) -> Int {
    fib_pair(k).0
}

pub fn lucas(k: u64) -> Int {
    fib_lucas(k).lucas
}

/// First `len` terms of a sequence, built by the recurrence.
pub fn terms(kind: SequenceKind, len: usize) -> Vec<Int> {
    let (mut a, mut b) = match kind {
        SequenceKind::Fibonacci => (Int::zero(), Int::one()),
        SequenceKind::Lucas => (Int::from(2), Int::one()),
    };
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let next = &a + &b;
        out.push(std::mem::replace(&mut a, std::mem::replace(&mut b, next)));
    }
    out
}

/// Indices `k <= bound` whose term is a perfect square.
pub fn square_scan(kind: SequenceKind, bound: u64) -> Vec<u64> {
    terms(kind, bound as usize + 1)
        .iter()
        .enumerate()
        .filter(|(_, t)| as_square(t).is_some())
        .map(|(k, _)| k as u64)
        .collect()
}

/// Indices `m <= bound` with `5 F_m` a perfect square.
pub fn five_fib_square_scan(bound: u64) -> Vec<u64> {
    terms(SequenceKind::Fibonacci, bound as usize + 1)
        .iter()
        .enumerate()
        .filter(|(_, f)| as_square(&(*f * 5u8)).is_some())
        .map(|(m, _)| m as u64)
        .collect()
}

/// Pairs `(k, eps)` with `3 <= k <= bound` and `F_k + F_{k+2 eps}` a square.
pub fn adjacent_sum_square_scan(bound: u64) -> Vec<(u64, i8)> {
    let fib = terms(SequenceKind::Fibonacci, bound as usize + 3);
    let mut out = Vec::new();
    for k in 3..=bound {
        for eps in [-1i8, 1] {
            let other = if eps > 0 { k + 2 } else { k - 2 };
            if as_square(&(&fib[k as usize] + &fib[other as usize])).is_some() {
                out.push((k, eps));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn fib_lucas_examples() {
        assert_eq!(fib_lucas(12).fib, int(144));
        assert_eq!(fib_lucas(3).lucas, int(4));
        let zero = fib_lucas(0);
        assert_eq!((zero.fib, zero.lucas), (int(0), int(2)));
        assert_eq!(fib_lucas(1).lucas, int(1));
    }

    #[test]
    fn doubling_matches_recurrence() {
        let f = terms(SequenceKind::Fibonacci, 301);
        let l = terms(SequenceKind::Lucas, 301);
        for k in 0..=300u64 {
            let pair = fib_lucas(k);
            assert_eq!(pair.fib, f[k as usize]);
            assert_eq!(pair.lucas, l[k as usize]);
        }
    }

    #[test]
    fn scan_examples() {
        assert_eq!(square_scan(SequenceKind::Fibonacci, 200), vec![0, 1, 2, 12]);
        assert_eq!(square_scan(SequenceKind::Lucas, 200), vec![1, 3]);
        assert_eq!(square_scan(SequenceKind::Fibonacci, 2), vec![0, 1, 2]);
        assert_eq!(five_fib_square_scan(200), vec![0, 5]);
        assert_eq!(five_fib_square_scan(4), vec![0]);
        assert_eq!(five_fib_square_scan(5), vec![0, 5]);
        assert_eq!(adjacent_sum_square_scan(200), vec![(4, -1)]);
        assert_eq!(adjacent_sum_square_scan(4), vec![(4, -1)]);
        assert!(adjacent_sum_square_scan(3).is_empty());
    }

    #[test]
    fn catalan_and_lucas_identities() {
        let f = terms(SequenceKind::Fibonacci, 302);
        let l = terms(SequenceKind::Lucas, 302);
        for k in 1..=300usize {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(&f[k + 1] * &f[k - 1] - &f[k] * &f[k], sign);
            assert_eq!(l[k], &f[k - 1] + &f[k + 1]);
        }
    }

    #[test]
    fn case_analysis_identities() {
        let f = terms(SequenceKind::Fibonacci, 303);
        let l = terms(SequenceKind::Lucas, 303);
        for k in 2..=300usize {
            for eps in [-1i64, 1] {
                let back = (k as i64 - 2 * eps) as usize;
                let mid = (k as i64 - eps) as usize;
                assert_eq!(&l[k] + &l[back], &f[mid] * 5u8, "k={k} eps={eps}");
                if k >= 3 {
                    let fwd = (k as i64 + 2 * eps) as usize;
                    assert_eq!(&f[k] * 4u8 - &f[back], &f[k] + &f[fwd], "k={k} eps={eps}");
                }
            }
        }
    }
}
