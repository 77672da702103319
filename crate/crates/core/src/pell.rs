//! Solving `u^2 - D v^2 = N` for `N` in {1, -1, 4, -4} by continued
//! fractions, plus the parametrized solutions of `7v^2 - 3u^2 = 4`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{as_square, Int};
use crate::error::PellError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellForm {
    d: Int,
    n: i64,
}

impl PellForm {
    pub fn new(d: impl Into<Int>, n: i64) -> Result<Self, PellError> {
        let d = d.into();
        if !d.is_positive() || as_square(&d).is_some() {
            return Err(PellError::BadDiscriminant(d));
        }
        if !matches!(n, 1 | -1 | 4 | -4) {
            return Err(PellError::UnsupportedConstant(n));
        }
        Ok(PellForm { d, n })
    }

    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn eval(&self, u: &Int, v: &Int) -> Int {
        u * u - &self.d * v * v
    }

    pub fn contains(&self, u: &Int, v: &Int) -> bool {
        self.eval(u, v) == Int::from(self.n)
    }
}

/// A point on a [`PellForm`]; the constructor checks the form identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    u: Int,
    v: Int,
    form: PellForm,
    index: u64,
}

impl PellSolution {
    pub fn new(u: Int, v: Int, form: PellForm, index: u64) -> Result<Self, PellError> {
        if !form.contains(&u, &v) {
            return Err(PellError::NotOnForm {
                u,
                v,
                d: form.d.clone(),
                n: form.n,
            });
        }
        Ok(PellSolution { u, v, form, index })
    }

    pub fn u(&self) -> &Int {
        &self.u
    }

    pub fn v(&self) -> &Int {
        &self.v
    }

    pub fn form(&self) -> &PellForm {
        &self.form
    }

    /// Number of generator steps from the fundamental solution (which is 1).
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_odd(&self) -> bool {
        self.u.is_odd() && self.v.is_odd()
    }
}

/// Simple continued fraction of `sqrt(D)`: `(a0, period)`.
pub fn cf_expansion(d: &Int) -> Result<(Int, Vec<Int>), PellError> {
    if !d.is_positive() || as_square(d).is_some() {
        return Err(PellError::BadDiscriminant(d.clone()));
    }
    let a0 = d.sqrt();
    let two_a0 = &a0 * 2u8;
    let mut m = Int::zero();
    let mut q = Int::one();
    let mut a = a0.clone();
    let mut period = Vec::new();
    loop {
        m = &q * &a - m;
        q = (d - &m * &m) / q;
        a = (&a0 + &m) / &q;
        period.push(a.clone());
        if a == two_a0 {
            break;
        }
    }
    Ok((a0, period))
}

/// Convergents `p/q` of `sqrt(D)` in order, endless.
struct Convergents {
    a0: Int,
    period: Vec<Int>,
    pos: Option<usize>,
    p: (Int, Int),
    q: (Int, Int),
}

impl Convergents {
    fn new(d: &Int) -> Result<Self, PellError> {
        let (a0, period) = cf_expansion(d)?;
        Ok(Convergents {
            a0,
            period,
            pos: None,
            p: (Int::one(), Int::zero()),
            q: (Int::zero(), Int::one()),
        })
    }
}

impl Iterator for Convergents {
    type Item = (Int, Int);

    fn next(&mut self) -> Option<(Int, Int)> {
        let a = match self.pos {
            None => {
                self.pos = Some(0);
                self.a0.clone()
            }
            Some(i) => {
                self.pos = Some((i + 1) % self.period.len());
                self.period[i].clone()
            }
        };
        let p = &a * &self.p.0 + &self.p.1;
        let q = &a * &self.q.0 + &self.q.1;
        self.p.1 = std::mem::replace(&mut self.p.0, p.clone());
        self.q.1 = std::mem::replace(&mut self.q.0, q.clone());
        Some((p, q))
    }
}

fn fundamental_unit(d: &Int) -> Result<(Int, Int), PellError> {
    let one = Int::one();
    let conv = Convergents::new(d)?;
    for (p, q) in conv {
        if &p * &p - d * &q * &q == one {
            return Ok((p, q));
        }
    }
    unreachable!("convergent stream is endless")
}

/// Smallest solution with `v > 0`, `u > 0`; `None` if the form has none.
///
/// A primitive solution with `|N| < sqrt(D)` is always a convergent of
/// `sqrt(D)`, and a non-primitive solution of `N = ±4` is twice a
/// solution of `N = ±1`, so convergents up to `2 y1` cover everything;
/// `(x1, y1)` is the fundamental solution of `N = 1`. Small `D` falls back
/// to direct search over the same range.
pub fn fundamental_solution(form: &PellForm) -> Option<PellSolution> {
    let d = form.d();
    let target = Int::from(form.n);
    let (_, y1) = fundamental_unit(d).expect("validated form");
    let limit = &y1 * 2u8;
    let best = if *d > Int::from(form.n * form.n) {
        let quarter = (form.n.abs() == 4).then(|| Int::from(form.n / 4));
        let mut found: Option<(Int, Int)> = None;
        for (p, q) in Convergents::new(d).expect("validated form") {
            if q > limit || found.as_ref().is_some_and(|(_, v)| q >= *v) {
                break;
            }
            let value = &p * &p - d * &q * &q;
            if value == target {
                found = Some((p, q));
                break;
            }
            if quarter.as_ref() == Some(&value) {
                let doubled = (&p * 2u8, &q * 2u8);
                if found.as_ref().is_none_or(|(_, v)| doubled.1 < *v) {
                    found = Some(doubled);
                }
            }
        }
        found
    } else {
        let mut v = Int::one();
        let mut found = None;
        while v <= limit {
            if let Some(u) = as_square(&(d * &v * &v + &target)) {
                if !u.is_zero() {
                    found = Some((u, v));
                    break;
                }
            }
            v += 1;
        }
        found
    };
    best.map(|(u, v)| PellSolution::new(u, v, form.clone(), 1).expect("checked on form"))
}

/// The unit used to step along a form's solutions: `(x, y, halve)`.
/// For `N = ±1` this is the fundamental solution of `N = 1`; for `N = ±4`
/// the fundamental solution of `N = 4`, multiplied in doubled coordinates.
fn step_unit(form: &PellForm) -> (Int, Int, bool) {
    if form.n.abs() == 1 {
        let (x, y) = fundamental_unit(form.d()).expect("validated form");
        (x, y, false)
    } else {
        let four = PellForm::new(form.d.clone(), 4).expect("validated form");
        let s = fundamental_solution(&four).expect("N = 4 always solvable");
        (s.u, s.v, true)
    }
}

/// The next solution in the same class.
pub fn next_solution(s: &PellSolution) -> PellSolution {
    let (x, y, halve) = step_unit(&s.form);
    compose(s, &x, &y, halve)
}

fn compose(s: &PellSolution, x: &Int, y: &Int, halve: bool) -> PellSolution {
    let d = s.form.d();
    let mut u = &s.u * x + d * &s.v * y;
    let mut v = &s.u * y + &s.v * x;
    if halve {
        debug_assert!(u.is_even() && v.is_even());
        u /= 2;
        v /= 2;
    }
    PellSolution::new(u, v, s.form.clone(), s.index + 1).expect("composition preserves the form")
}

/// Iterator over the fundamental solution and its successors.
pub struct SolutionIter {
    next: Option<PellSolution>,
    unit: (Int, Int, bool),
}

impl Iterator for SolutionIter {
    type Item = PellSolution;

    fn next(&mut self) -> Option<PellSolution> {
        let current = self.next.take()?;
        let (x, y, halve) = &self.unit;
        self.next = Some(compose(&current, x, y, *halve));
        Some(current)
    }
}

pub fn solutions(form: &PellForm) -> SolutionIter {
    SolutionIter {
        next: fundamental_solution(form),
        unit: step_unit(form),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSolutions {
    pub solutions: Vec<PellSolution>,
    /// True when fewer than requested were found within the scan limit.
    pub exhausted: bool,
}

/// First `count` solutions with `u` and `v` both odd, scanning at most
/// `10 * count` successive solutions.
pub fn odd_solutions(form: &PellForm, count: usize) -> Result<OddSolutions, PellError> {
    if fundamental_solution(form).is_none() {
        return Err(PellError::NoSolution {
            d: form.d.clone(),
            n: form.n,
        });
    }
    let solutions: Vec<PellSolution> = solutions(form)
        .take(count.saturating_mul(10))
        .filter(PellSolution::is_odd)
        .take(count)
        .collect();
    Ok(OddSolutions {
        exhausted: solutions.len() < count,
        solutions,
    })
}

/// Which of the three parametrizations of `7v^2 - 3u^2 = 4` a pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form734Branch {
    /// `(v, u) = (s + 3r, s + 7r)`
    Plus,
    /// `(v, u) = (-s + 3r, s - 7r)`
    Minus,
    /// `(v, u) = (4s + 18r, 6s + 28r)`, always even.
    Even,
}

impl Form734Branch {
    pub fn apply(self, s: &Int, r: &Int) -> (Int, Int) {
        match self {
            Form734Branch::Plus => (s + r * 3u8, s + r * 7u8),
            Form734Branch::Minus => (r * 3u8 - s, s - r * 7u8),
            Form734Branch::Even => (s * 4u8 + r * 18u8, s * 6u8 + r * 28u8),
        }
    }
}

pub fn on_form734(v: &Int, u: &Int) -> bool {
    v * v * 7u8 - u * u * 3u8 == Int::from(4)
}

/// Solutions `(s, r)` of `s^2 - 21 r^2 = 1` starting from `(1, 0)`.
pub fn unit21_solutions() -> impl Iterator<Item = (Int, Int)> {
    let form = PellForm::new(21, 1).expect("valid form");
    let (x, y) = fundamental_unit(form.d()).expect("valid form");
    std::iter::successors(Some((Int::one(), Int::zero())), move |(s, r)| {
        Some((s * &x + r * &y * 21u8, s * &y + r * &x))
    })
}

/// First `count` solutions `(v, u)` of `7v^2 - 3u^2 = 4`, as absolute
/// values sorted by `v`, from the two odd parametrizations. The even
/// parametrization is evaluated too and discarded by the parity filter.
pub fn form734_solutions(count: usize) -> Vec<(Int, Int)> {
    let mut out: Vec<(Int, Int)> = Vec::new();
    // each (s, r) adds at least one new pair, and pairs grow with the index
    for (s, r) in unit21_solutions().take(count + 1) {
        for branch in [Form734Branch::Plus, Form734Branch::Minus, Form734Branch::Even] {
            let (v, u) = branch.apply(&s, &r);
            assert!(on_form734(&v, &u), "parametrization left the form");
            if !(v.is_odd() && u.is_odd()) {
                continue;
            }
            let pair = (v.abs(), u.abs());
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out.sort();
    out.truncate(count);
    out
}
