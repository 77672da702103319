//! Arbitrary-precision integer helpers shared by the rest of the crate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

/// Scalar type for every equation quantity.
pub type Int = BigInt;

/// `sign * base^exponent` with `base` an odd prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub base: Int,
    pub exponent: u32,
    pub sign: i8,
}

impl PrimePower {
    pub fn value(&self) -> Int {
        let m = self.base.pow(self.exponent);
        if self.sign < 0 {
            -m
        } else {
            m
        }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        if self.exponent == 1 {
            write!(f, "{s}{}", self.base)
        } else {
            write!(f, "{s}{}^{}", self.base, self.exponent)
        }
    }
}

/// Effort limits for [`factor_bounded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over all d <= this bound.
    pub trial_limit: u64,
    /// Total iterations allowed across all Pollard rho attempts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_iterations: 2_000_000,
        }
    }
}

/// Prime to multiplicity, ascending.
pub type Factorization = BTreeMap<Int, u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorOutcome {
    Complete(Factorization),
    Unknown,
}

impl FactorOutcome {
    pub fn complete(self) -> Option<Factorization> {
        match self {
            FactorOutcome::Complete(f) => Some(f),
            FactorOutcome::Unknown => None,
        }
    }
}

pub fn isqrt(n: &Int) -> Result<Int, ArithError> {
    if n.is_negative() {
        return Err(ArithError::Negative(n.clone()));
    }
    Ok(n.sqrt())
}

/// Nonnegative square root of `n` when `n` is a perfect square.
pub fn as_square(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    // squares are 0, 1, 4 or 9 mod 16
    let low = (n & BigInt::from(15u8)).to_u8().unwrap_or(0);
    if !matches!(low, 0 | 1 | 4 | 9) {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Integer k-th root of a nonnegative value, when exact.
pub fn exact_root(n: &Int, k: u32) -> Option<Int> {
    if n.is_negative() || k == 0 {
        return None;
    }
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Largest `k` such that `|n|` is a perfect k-th power; 1 for |n| <= 1.
pub fn max_perfect_power(n: &Int) -> u32 {
    let m = n.abs();
    if m <= Int::one() {
        return 1;
    }
    let bits = m.bits() as u32;
    (2..=bits)
        .rev()
        .find(|&k| exact_root(&m, k).is_some())
        .unwrap_or(1)
}

pub fn binomial(n: u32, k: u32) -> Result<Int, ArithError> {
    if k > n {
        return Err(ArithError::BinomialRange { n, k });
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

const SMALL_PRIMES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    // These twelve bases are deterministic for every n < 2^64.
    'witness: for &a in &SMALL_PRIMES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_big(n: &BigUint) -> bool {
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return *n == BigUint::from(p);
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of `|n|`. Exact below 2^64; forty Miller-Rabin rounds above.
pub fn is_prime(n: &Int) -> bool {
    let m = n.magnitude();
    match m.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime_big(m),
    }
}

pub fn is_prime_u(n: u64) -> bool {
    is_prime_u64(n)
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// Represents `n` as `±q^r` with `q` an odd prime, if possible.
///
/// Exact: tries every exponent `r` with an exact integer root and tests
/// the root for primality, so no factoring is involved.
pub fn odd_prime_power(n: &Int) -> Option<PrimePower> {
    let m = n.abs();
    if m <= Int::one() || m.is_even() {
        return None;
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let bits = m.bits() as u32;
    (1..=bits).rev().find_map(|r| {
        let q = exact_root(&m, r)?;
        (q > Int::one() && is_prime(&q)).then_some(PrimePower {
            base: q,
            exponent: r,
            sign,
        })
    })
}

fn pollard_brent(n: &BigUint, seed: u64, iterations: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    let c = BigUint::from(seed);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u8 + (seed % 7) as u8);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = one.clone();
    let mut g = one.clone();
    let mut r: u64 = 1;
    const BLOCK: u64 = 64;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            let steps = BLOCK.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            if *iterations < steps {
                return None;
            }
            *iterations -= steps;
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g != one {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

fn split_into(n: BigUint, out: &mut Factorization, iterations: &mut u64) -> bool {
    if n.is_one() {
        return true;
    }
    if is_prime_big(&n) {
        *out.entry(Int::from(n)).or_insert(0) += 1;
        return true;
    }
    let r = n.sqrt();
    if &r * &r == n {
        let mut sub = Factorization::new();
        if !split_into(r, &mut sub, iterations) {
            return false;
        }
        for (p, e) in sub {
            *out.entry(p).or_insert(0) += 2 * e;
        }
        return true;
    }
    for seed in 1..=20u64 {
        if *iterations == 0 {
            return false;
        }
        if let Some(d) = pollard_brent(&n, seed, iterations) {
            let other = &n / &d;
            return split_into(d, out, iterations) && split_into(other, out, iterations);
        }
    }
    false
}

/// Complete factorization of `n >= 1` within `budget`, or `Unknown`.
pub fn factor_bounded(n: &Int, budget: FactorBudget) -> Result<FactorOutcome, ArithError> {
    if n.sign() != Sign::Plus {
        return Err(ArithError::NonPositive(n.clone()));
    }
    let mut rest = n.magnitude().clone();
    let mut out = Factorization::new();
    let mut d: u64 = 2;
    while d <= budget.trial_limit {
        if BigUint::from(d) * d > rest {
            break;
        }
        while (&rest % d).is_zero() {
            rest /= d;
            *out.entry(Int::from(d)).or_insert(0) += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok(FactorOutcome::Complete(out));
    }
    if BigUint::from(d) * d > rest {
        *out.entry(Int::from(rest)).or_insert(0) += 1;
        return Ok(FactorOutcome::Complete(out));
    }
    let mut iterations = budget.rho_iterations;
    if split_into(rest, &mut out, &mut iterations) {
        Ok(FactorOutcome::Complete(out))
    } else {
        Ok(FactorOutcome::Unknown)
    }
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: &Int, budget: FactorBudget) -> Result<Int, ArithError> {
    match factor_bounded(n, budget)? {
        FactorOutcome::Complete(f) => Ok(f.keys().product()),
        FactorOutcome::Unknown => Err(ArithError::BudgetExceeded(n.clone())),
    }
}

/// `base^exp mod m` for a possibly negative base, result in `[0, m)`.
pub fn mod_pow_signed(base: &Int, exp: u32, m: u64) -> u64 {
    let mm = Int::from(m);
    let b = base.mod_floor(&mm);
    b.modpow(&Int::from(exp), &mm).to_u64().unwrap_or(0)
}
