//! Lehmer pairs `alpha = (v sqrt(p) + u i) / 2`, their Lehmer numbers and
//! primitive divisors, and the named defective classes for `n = 7, 13`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, factor_bounded, FactorBudget, FactorOutcome, Int};
use crate::error::LehmerError;

/// `(A + B sqrt(-p)) / 2` with `A = B (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfElem {
    pub a: Int,
    pub b: Int,
    pub p: Int,
}

impl HalfElem {
    pub fn new(a: Int, b: Int, p: Int) -> Result<Self, LehmerError> {
        if a.is_odd() != b.is_odd() {
            return Err(LehmerError::ParityMismatch);
        }
        Ok(HalfElem { a, b, p })
    }

    pub fn mul(&self, other: &HalfElem) -> Result<HalfElem, LehmerError> {
        debug_assert_eq!(self.p, other.p);
        let re = &self.a * &other.a - &self.p * &self.b * &other.b;
        let im = &self.a * &other.b + &self.b * &other.a;
        let two = Int::from(2);
        if re.is_odd() || im.is_odd() {
            return Err(LehmerError::NotIntegral { divisor: two });
        }
        HalfElem::new(re / 2, im / 2, self.p.clone())
    }

    /// `(A^2 + p B^2) / 4`, the norm.
    pub fn norm(&self) -> Int {
        (&self.a * &self.a + &self.p * &self.b * &self.b) / 4
    }
}

/// `((u + v sqrt(-p)) / 2)^n` by binary exponentiation.
pub fn half_power(u: &Int, v: &Int, p: &Int, n: u32) -> Result<HalfElem, LehmerError> {
    if n == 0 {
        return Err(LehmerError::BadExponent(n));
    }
    let base = HalfElem::new(u.clone(), v.clone(), p.clone())?;
    let mut acc: Option<HalfElem> = None;
    let mut square = base;
    let mut e = n;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => square.clone(),
                Some(x) => x.mul(&square)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        square = square.mul(&square)?;
    }
    Ok(acc.expect("n >= 1"))
}

/// `sum_{r} C(n, 2r) u^{n-2r-1} (-p)^r v^{2r}`, so that
/// `2^{n-1} A = u * S` for `A` the real part of [`half_power`].
pub fn real_part_sum(u: &Int, v: &Int, p: &Int, n: u32) -> Result<Int, LehmerError> {
    if n.is_multiple_of(2) {
        return Err(LehmerError::BadExponent(n));
    }
    let neg_p = -p;
    let v2 = v * v;
    let mut sum = Int::zero();
    for r in 0..=(n - 1) / 2 {
        let c = binomial(n, 2 * r).expect("2r <= n");
        sum += c * u.pow(n - 2 * r - 1) * neg_p.pow(r) * v2.pow(r);
    }
    Ok(sum)
}

/// Parameters of the Lehmer pair `((v sqrt(p) + u i)/2, conjugate)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LehmerParams {
    pub u: Int,
    pub v: Int,
    pub p: Int,
}

impl LehmerParams {
    pub fn new(u: impl Into<Int>, v: impl Into<Int>, p: impl Into<Int>) -> Result<Self, LehmerError> {
        let (u, v, p) = (u.into(), v.into(), p.into());
        if u.is_even() || v.is_even() {
            return Err(LehmerError::EvenParameter);
        }
        Ok(LehmerParams { u, v, p })
    }

    /// `((alpha + beta)^2, (alpha - beta)^2) = (p v^2, -u^2)`.
    pub fn signature(&self) -> Signature {
        Signature::new(&self.p * &self.v * &self.v, -(&self.u * &self.u))
    }

    /// `alpha * beta = (p v^2 + u^2) / 4`.
    pub fn norm(&self) -> Int {
        (&self.p * &self.v * &self.v + &self.u * &self.u) / 4
    }
}

/// `|(alpha^n - beta^n) / (alpha - beta)|` for odd `n`.
pub fn lehmer_number_abs(params: &LehmerParams, n: u32) -> Result<Int, LehmerError> {
    let s = real_part_sum(&params.u, &params.v, &params.p, n)?;
    let divisor = Int::one() << (n - 1);
    let (q, r) = s.div_rem(&divisor);
    if !r.is_zero() {
        return Err(LehmerError::NotIntegral { divisor });
    }
    Ok(q.abs())
}

/// Unordered pair `{(alpha + beta)^2, (alpha - beta)^2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    lo: Int,
    hi: Int,
}

impl Signature {
    pub fn new(x: Int, y: Int) -> Self {
        if x <= y {
            Signature { lo: x, hi: y }
        } else {
            Signature { lo: y, hi: x }
        }
    }

    pub fn parts(&self) -> (&Int, &Int) {
        (&self.lo, &self.hi)
    }

    fn negated(&self) -> Signature {
        Signature::new(-&self.lo, -&self.hi)
    }
}

/// Equal as unordered pairs, possibly after negating both components.
pub fn is_equivalent(a: &Signature, b: &Signature) -> bool {
    a == b || *a == b.negated()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectiveClass {
    pub n: u32,
    pub signature: Signature,
    pub description: &'static str,
}

/// The defective classes named explicitly for `n = 7` and `n = 13`.
pub fn named_defective_pairs(n: u32) -> Result<Vec<DefectiveClass>, LehmerError> {
    let class = |d: i64, description| DefectiveClass {
        n,
        signature: Signature::new(Int::one(), Int::from(-d)),
        description,
    };
    match n {
        7 => Ok(vec![
            class(7, "((1 - sqrt(-7))/2, (1 + sqrt(-7))/2)"),
            class(19, "((1 - sqrt(-19))/2, (1 + sqrt(-19))/2)"),
        ]),
        13 => Ok(vec![class(7, "((1 - sqrt(-7))/2, (1 + sqrt(-7))/2)")]),
        _ => Err(LehmerError::NoNamedClasses(n)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitiveDivisor {
    /// A prime factor of the n-th term that is primitive.
    Yes(Int),
    No,
    Unknown,
}

/// Primitive divisor test against the odd-index terms `m < n` and the
/// discriminant `p v^2 u^2`.
pub fn has_primitive_divisor(
    params: &LehmerParams,
    n: u32,
    budget: FactorBudget,
) -> Result<PrimitiveDivisor, LehmerError> {
    if params.u.gcd(&params.v) != Int::one() {
        return Err(LehmerError::NotCoprime);
    }
    let term = lehmer_number_abs(params, n)?;
    if term.is_one() {
        return Ok(PrimitiveDivisor::No);
    }
    let factors = match factor_bounded(&term, budget).expect("term is positive") {
        FactorOutcome::Complete(f) => f,
        FactorOutcome::Unknown => return Ok(PrimitiveDivisor::Unknown),
    };
    let disc = &params.p * &params.v * &params.v * &params.u * &params.u;
    let earlier = (1..n)
        .step_by(2)
        .map(|m| lehmer_number_abs(params, m))
        .collect::<Result<Vec<_>, _>>()?;
    let primitive = factors.into_keys().find(|q| {
        !(&disc % q).is_zero() && earlier.iter().all(|t| !(t % q).is_zero())
    });
    Ok(match primitive {
        Some(q) => PrimitiveDivisor::Yes(q),
        None => PrimitiveDivisor::No,
    })
}
