use thiserror::Error;

use crate::arith::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("expected a nonnegative integer, got {0}")]
    Negative(Int),
    #[error("expected a positive integer, got {0}")]
    NonPositive(Int),
    #[error("binomial({n}, {k}) requires k <= n")]
    BinomialRange { n: u32, k: u32 },
    #[error("factoring budget exhausted for {0}")]
    BudgetExceeded(Int),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassNumberError {
    #[error("a must be at least 1")]
    Zero,
    #[error("{0} is not square-free")]
    NotSquarefree(u64),
    #[error("{0} is too large for form enumeration")]
    TooLarge(Int),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("D = {0} must be a positive non-square")]
    BadDiscriminant(Int),
    #[error("N = {0} is not one of 1, -1, 4, -4")]
    UnsupportedConstant(i64),
    #[error("{u}^2 - {d}*{v}^2 != {n}")]
    NotOnForm { u: Int, v: Int, d: Int, n: i64 },
    #[error("u^2 - {d}*v^2 = {n} has no solutions")]
    NoSolution { d: Int, n: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LehmerError {
    #[error("u and v must have the same parity")]
    ParityMismatch,
    #[error("exponent {0} must be odd and positive")]
    BadExponent(u32),
    #[error("u and v must both be odd")]
    EvenParameter,
    #[error("u and v must be coprime")]
    NotCoprime,
    #[error("the value is not divisible by {divisor}; p must be 3 mod 4 for odd u, v")]
    NotIntegral { divisor: Int },
    #[error("no named defective classes for n = {0}")]
    NoNamedClasses(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("a must be a positive odd integer, got {0}")]
    BadA(Int),
    #[error("b must be odd, got {0}")]
    EvenB(Int),
    #[error("gcd(a, b) must be 1, got a = {a}, b = {b}")]
    NotCoprime { a: Int, b: Int },
    #[error("l must be at least 1")]
    ZeroL,
    #[error("n must be an odd prime, got {0}")]
    BadN(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: expected 6 or 7 columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: cannot parse {field} from {text:?}")]
    Parse {
        line: usize,
        field: &'static str,
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("{0}")]
    Instance(#[from] InstanceError),
    #[error("a*x^2 + b^(2l) != 4*y^n")]
    EquationFails,
    #[error("gcd(x, y) = {0}, expected 1")]
    NotCoprime(Int),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("p = {0} is not in {{7, 11, 19, 43, 67, 163}}")]
    NotSpecial(Int),
    #[error("no case analysis for n = {0}; expected 3, 5, 7 or 13")]
    UnsupportedN(u32),
}
