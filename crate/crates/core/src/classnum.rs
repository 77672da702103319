//! Class numbers of imaginary quadratic fields by counting reduced forms.

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::is_squarefree;
use crate::error::ClassNumberError;

/// Largest `a` accepted; keeps `b^2 - D` inside `i64` during enumeration.
pub const MAX_A: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassNumberResult {
    pub a: u64,
    /// Field discriminant: `-a` when `a = 3 mod 4`, else `-4a`.
    pub discriminant: i64,
    pub h: u64,
}

pub fn field_discriminant(a: u64) -> i64 {
    if a % 4 == 3 {
        -(a as i64)
    } else {
        -4 * a as i64
    }
}

/// `h(-a)` for square-free `a >= 1`.
pub fn class_number(a: u64) -> Result<ClassNumberResult, ClassNumberError> {
    if a == 0 {
        return Err(ClassNumberError::Zero);
    }
    if a > MAX_A {
        return Err(ClassNumberError::TooLarge(a.into()));
    }
    if !is_squarefree(a) {
        return Err(ClassNumberError::NotSquarefree(a));
    }
    let d = field_discriminant(a);
    Ok(ClassNumberResult {
        a,
        discriminant: d,
        h: count_reduced_forms(d),
    })
}

/// Number of reduced primitive forms of negative discriminant `d`.
pub(crate) fn count_reduced_forms(d: i64) -> u64 {
    let abs_d = -d;
    let mut count = 0;
    let mut a: i64 = 1;
    // reduced forms have 3a^2 <= |d|
    while 3 * a * a <= abs_d {
        let mut b = -a + (a + d).rem_euclid(2);
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let boundary = b.abs() == a || a == c;
                if c >= a && !(boundary && b < 0) && a.gcd(&b).gcd(&c) == 1 {
                    count += 1;
                }
            }
            b += 2;
        }
        a += 1;
    }
    count
}

/// All square-free `a <= bound` with `h(-a) = h_target`, ascending.
pub fn tally_class_numbers(h_target: u64, bound: u64) -> Vec<u64> {
    (1..=bound.min(MAX_A))
        .into_par_iter()
        .filter(|&a| is_squarefree(a))
        .filter(|&a| count_reduced_forms(field_discriminant(a)) == h_target)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime_u;

    // b outer, a inner: an enumeration independent of `count_reduced_forms`.
    fn count_b_outer(d: i64) -> u64 {
        let abs_d = -d;
        let mut count = 0;
        let b_max = ((abs_d / 3) as f64).sqrt() as i64 + 1;
        for b in -b_max..=b_max {
            for a in 1..=abs_d {
                if 3 * a * a > abs_d {
                    break;
                }
                if b.abs() > a || (b * b - d) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - d) / (4 * a);
                if c < a || a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                if (b.abs() == a || a == c) && b < 0 {
                    continue;
                }
                count += 1;
            }
        }
        count
    }

    #[test]
    fn examples() {
        assert_eq!(class_number(7).unwrap().h, 1);
        assert_eq!(class_number(163).unwrap().h, 1);
        let five = class_number(5).unwrap();
        assert_eq!(five.h, 2);
        assert_eq!(five.discriminant, -20);
        assert_eq!(class_number(23).unwrap().h, 3);
        assert_eq!(class_number(1).unwrap().h, 1);
        assert_eq!(class_number(2).unwrap().h, 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(class_number(12), Err(ClassNumberError::NotSquarefree(12)));
        assert_eq!(class_number(0), Err(ClassNumberError::Zero));
    }

    #[test]
    fn two_enumeration_orders_agree() {
        for a in (1..=2000).filter(|&a| is_squarefree(a)) {
            let d = field_discriminant(a);
            assert_eq!(count_reduced_forms(d), count_b_outer(d), "a = {a}");
        }
    }

    #[test]
    fn class_number_one_primes() {
        let one: Vec<u64> = (3..=10_000)
            .filter(|&p| p % 4 == 3 && is_prime_u(p))
            .filter(|&p| class_number(p).unwrap().h == 1)
            .collect();
        assert_eq!(one, vec![3, 7, 11, 19, 43, 67, 163]);
    }

    #[test]
    fn class_number_below_a() {
        for a in (5..=10_000).filter(|&a| is_squarefree(a)) {
            assert!(class_number(a).unwrap().h < a, "a = {a}");
        }
    }

    #[test]
    fn tally_small() {
        assert_eq!(tally_class_numbers(1, 200), vec![1, 2, 3, 7, 11, 19, 43, 67, 163]);
        assert_eq!(tally_class_numbers(2, 100), vec![5, 6, 10, 13, 15, 22, 35, 37, 51, 58, 91]);
    }
}
