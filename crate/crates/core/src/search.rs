//! Exhaustive search over `y` and verification of known solution tuples.

use std::fmt;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{as_square, is_prime_u, mod_pow_signed, odd_prime_power, Int, PrimePower};
use crate::error::{CorpusError, InstanceError, TupleError};
use crate::solver::ProblemInstance;

/// A verified solution of `a x^2 + b^(2l) = 4 y^n` with `gcd(x, y) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionTuple {
    pub a: Int,
    pub x: Int,
    pub y: Int,
    pub b: Int,
    pub l: u32,
    pub n: u32,
}

pub fn equation_holds(a: &Int, x: &Int, y: &Int, b: &Int, l: u32, n: u32) -> bool {
    a * x * x + b.pow(2 * l) == y.pow(n) * 4u8
}

impl SolutionTuple {
    pub fn new(a: Int, x: Int, y: Int, b: Int, l: u32, n: u32) -> Result<Self, TupleError> {
        ProblemInstance::new(a.clone(), b.clone(), l, n)?;
        if !equation_holds(&a, &x, &y, &b, l, n) {
            return Err(TupleError::EquationFails);
        }
        let g = x.gcd(&y);
        if !g.is_one() {
            return Err(TupleError::NotCoprime(g));
        }
        Ok(SolutionTuple { a, x, y, b, l, n })
    }

    /// Same tuple with `x >= 0` and `b > 0`.
    pub fn canonical(&self) -> SolutionTuple {
        SolutionTuple {
            x: self.x.abs(),
            b: self.b.abs(),
            ..self.clone()
        }
    }

    /// `2^(n-1) b^l mod a`.
    pub fn residue(&self) -> u64 {
        congruence_residue(&self.a, &self.b, self.l, self.n)
    }
}

impl fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {}, {})",
            self.a, self.x, self.y, self.b, self.l, self.n
        )
    }
}

/// `2^(n-1) b^l mod a` in `[0, a)`.
pub fn congruence_residue(a: &Int, b: &Int, l: u32, n: u32) -> u64 {
    let m: u64 = a.try_into().expect("modulus fits in u64");
    let two = mod_pow_signed(&Int::from(2), n - 1, m) as u128;
    let bl = mod_pow_signed(b, l, m) as u128;
    ((two * bl) % m as u128) as u64
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub instance: ProblemInstance,
    pub y_max: u64,
    pub solutions: Vec<SolutionTuple>,
    pub elapsed: Duration,
    pub partitions: usize,
}

fn scan_chunk(inst: &ProblemInstance, b2l: &Int, lo: u64, hi: u64) -> Vec<SolutionTuple> {
    let a = inst.a();
    let mut out = Vec::new();
    for y in lo..=hi {
        let y = Int::from(y);
        let t = y.pow(inst.n()) * 4u8 - b2l;
        if !t.is_positive() {
            continue;
        }
        let (q, r) = t.div_rem(a);
        if !r.is_zero() {
            continue;
        }
        if let Some(x) = as_square(&q) {
            if x.gcd(&y).is_one() {
                out.push(SolutionTuple {
                    a: a.clone(),
                    x,
                    y,
                    b: inst.b().clone(),
                    l: inst.l(),
                    n: inst.n(),
                });
            }
        }
    }
    out
}

/// All coprime solutions with `1 <= y <= y_max`, ascending in `y`.
///
/// The range is cut into `partitions` contiguous chunks that run on the
/// current rayon pool; results are concatenated in chunk order, so the
/// output does not depend on the partition count or on scheduling.
pub fn brute_force(inst: &ProblemInstance, y_max: u64, partitions: usize) -> SearchReport {
    let start = Instant::now();
    let partitions = partitions.clamp(1, y_max.max(1) as usize);
    let b2l = inst.b().pow(2 * inst.l());
    let chunk = y_max.div_ceil(partitions as u64).max(1);
    let solutions = (0..partitions as u64)
        .into_par_iter()
        .map(|i| {
            let lo = i * chunk + 1;
            let hi = ((i + 1) * chunk).min(y_max);
            if lo > hi {
                Vec::new()
            } else {
                scan_chunk(inst, &b2l, lo, hi)
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    SearchReport {
        instance: inst.clone(),
        y_max,
        solutions,
        elapsed: start.elapsed(),
        partitions,
    }
}

/// What a corpus line claims about its tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// `2^(n-1) b^l = ±1 (mod a)` for one sign of `b`.
    Congruent,
    /// `b` composite and `2^(n-1) b^l != ±1 (mod a)`.
    Composite,
}

impl Expectation {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "congruent" => Some(Expectation::Congruent),
            "composite" => Some(Expectation::Composite),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Expectation::Congruent => "congruent",
            Expectation::Composite => "composite",
        }
    }
}

/// One corpus line, unvalidated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub line: usize,
    pub a: Int,
    pub x: Int,
    pub y: Int,
    pub b: Int,
    pub l: u32,
    pub n: u32,
    pub expect: Option<Expectation>,
}

impl CorpusEntry {
    pub fn new(a: i64, x: i64, y: i64, b: i64, l: u32, n: u32) -> Self {
        CorpusEntry {
            line: 0,
            a: a.into(),
            x: x.into(),
            y: y.into(),
            b: b.into(),
            l,
            n,
            expect: None,
        }
    }

    pub fn expecting(mut self, e: Expectation) -> Self {
        self.expect = Some(e);
        self
    }
}

/// Parses the corpus TSV: columns `a x y b l n [expect]`, `#` comments.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split_whitespace().collect();
        if !(6..=7).contains(&cols.len()) {
            return Err(CorpusError::ColumnCount { line, found: cols.len() });
        }
        let big = |idx: usize, field: &'static str| {
            cols[idx].parse::<Int>().map_err(|_| CorpusError::Parse {
                line,
                field,
                text: cols[idx].to_string(),
            })
        };
        let small = |idx: usize, field: &'static str| {
            cols[idx].parse::<u32>().map_err(|_| CorpusError::Parse {
                line,
                field,
                text: cols[idx].to_string(),
            })
        };
        let expect = match cols.get(6) {
            None => None,
            Some(s) => Some(Expectation::parse(s).ok_or_else(|| CorpusError::Parse {
                line,
                field: "expect",
                text: s.to_string(),
            })?),
        };
        out.push(CorpusEntry {
            line,
            a: big(0, "a")?,
            x: big(1, "x")?,
            y: big(2, "y")?,
            b: big(3, "b")?,
            l: small(4, "l")?,
            n: small(5, "n")?,
            expect,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BKind {
    PrimePower(PrimePower),
    Composite,
    Unit,
}

#[derive(Debug, Clone)]
pub struct CorpusCheck {
    pub entry: CorpusEntry,
    pub equation_holds: bool,
    /// Residues of `2^(n-1) b^l` and `2^(n-1) (-b)^l` modulo `a`.
    pub residues: Option<(u64, u64)>,
    pub congruent_pm1: bool,
    pub b_kind: BKind,
    pub failures: Vec<String>,
}

impl CorpusCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_entry(entry: &CorpusEntry) -> CorpusCheck {
    let mut failures = Vec::new();
    if let Err(e) = ProblemInstance::new(entry.a.clone(), entry.b.clone(), entry.l, entry.n) {
        failures.push(e.to_string());
    }
    let holds = entry.n > 0
        && equation_holds(&entry.a, &entry.x, &entry.y, &entry.b, entry.l, entry.n);
    if !holds {
        failures.push("equation does not hold".to_string());
    }
    if !entry.x.gcd(&entry.y).is_one() {
        failures.push(format!("gcd(x, y) = {}", entry.x.gcd(&entry.y)));
    }
    let residues = (entry.a.is_positive() && entry.n > 0 && entry.a.bits() <= 63).then(|| {
        (
            congruence_residue(&entry.a, &entry.b, entry.l, entry.n),
            congruence_residue(&entry.a, &-&entry.b, entry.l, entry.n),
        )
    });
    let congruent_pm1 = residues.is_some_and(|(r1, r2)| {
        let a: u64 = (&entry.a).try_into().unwrap_or(0);
        [r1, r2].iter().any(|&r| r == 1 % a || r == a - 1)
    });
    let b_kind = match odd_prime_power(&entry.b) {
        Some(pp) => BKind::PrimePower(pp),
        None if entry.b.abs().is_one() => BKind::Unit,
        None => BKind::Composite,
    };
    match entry.expect {
        Some(Expectation::Congruent) => {
            if !congruent_pm1 {
                failures.push("expected 2^(n-1) b^l = ±1 (mod a)".to_string());
            }
        }
        Some(Expectation::Composite) => {
            if congruent_pm1 {
                failures.push("expected 2^(n-1) b^l != ±1 (mod a)".to_string());
            }
            if b_kind != BKind::Composite {
                failures.push("expected b to have two distinct prime factors".to_string());
            }
        }
        None => {}
    }
    CorpusCheck {
        entry: entry.clone(),
        equation_holds: holds,
        residues,
        congruent_pm1,
        b_kind,
        failures,
    }
}

/// Checks every entry; failures are collected, never raised.
pub fn verify_corpus(entries: &[CorpusEntry]) -> Vec<CorpusCheck> {
    entries.iter().map(check_entry).collect()
}

/// The ten congruent and four composite-`b` tuples used as reference data.
pub fn reference_corpus() -> Vec<CorpusEntry> {
    use Expectation::{Composite, Congruent};
    let big = |a: i64, x: &str, y: i64, b: &str, n: u32, e| CorpusEntry {
        line: 0,
        a: a.into(),
        x: x.parse().expect("literal"),
        y: y.into(),
        b: b.parse().expect("literal"),
        l: 1,
        n,
        expect: Some(e),
    };
    vec![
        big(7, "1", 2, "11", 5, Congruent),
        big(11, "1", 3, "31", 5, Congruent),
        big(7, "7", 2, "13", 7, Congruent),
        big(19, "1", 5, "559", 7, Congruent),
        big(11, "253", 3, "67", 11, Congruent),
        big(19, "2531", 5, "8579", 11, Congruent),
        big(7, "1", 2, "181", 13, Congruent),
        big(11, "1801", 3, "21929", 17, Congruent),
        big(7, "457", 2, "797", 19, Congruent),
        big(7, "967", 2, "5197", 23, Congruent),
        big(7, "103820535541", 4, "10341108537", 37, Composite),
        big(7, "4865", 46, "1320267", 7, Composite),
        big(19, "315003", 49, "909715", 7, Composite),
        big(19, "581072253", 49, "3037108805", 11, Composite),
    ]
}

/// Validates the instance fields before a search.
pub fn search_instance(a: Int, b: Int, l: u32, n: u32) -> Result<ProblemInstance, InstanceError> {
    ProblemInstance::new(a, b, l, n)
}

/// Smallest odd prime not below `n`; used for sweeps over exponents.
pub fn next_odd_prime(n: u32) -> u32 {
    (n.max(3)..).find(|&m| m % 2 == 1 && is_prime_u(m as u64)).expect("primes are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    fn inst(a: i64, b: i64, l: u32, n: u32) -> ProblemInstance {
        ProblemInstance::new(int(a), int(b), l, n).unwrap()
    }

    #[test]
    fn tuple_validation() {
        assert!(SolutionTuple::new(int(7), int(1), int(2), int(11), 1, 5).is_ok());
        assert_eq!(
            SolutionTuple::new(int(7), int(1), int(2), int(13), 1, 5),
            Err(TupleError::EquationFails)
        );
        assert!(matches!(
            SolutionTuple::new(int(7), int(1), int(2), int(11), 1, 4),
            Err(TupleError::Instance(InstanceError::BadN(4)))
        ));
        let t = SolutionTuple::new(int(7), int(-1), int(2), int(-11), 1, 5).unwrap();
        assert_eq!(t.canonical().x, int(1));
        assert_eq!(t.canonical().b, int(11));
    }

    #[test]
    fn brute_force_examples() {
        let r = brute_force(&inst(7, 11, 1, 5), 10, 1);
        let found: Vec<_> = r.solutions.iter().map(|s| (s.x.clone(), s.y.clone())).collect();
        assert_eq!(found, vec![(int(1), int(2))]);
        let r = brute_force(&inst(19, 8579, 1, 11), 10, 3);
        let found: Vec<_> = r.solutions.iter().map(|s| (s.x.clone(), s.y.clone())).collect();
        assert_eq!(found, vec![(int(2531), int(5))]);
        let r = brute_force(&inst(11, 3, 1, 7), 100_000, 4);
        assert!(r.solutions.is_empty());
    }

    #[test]
    fn families_show_up_in_search() {
        // 7*17^2 + 5^2 = 4*8^3 and 7*5^2 + 3^4 = 4*4^3
        let r = brute_force(&inst(7, 5, 1, 3), 50, 2);
        assert!(r.solutions.iter().any(|s| s.x == int(17) && s.y == int(8)));
        let r = brute_force(&inst(7, 3, 2, 3), 50, 2);
        assert!(r.solutions.iter().any(|s| s.x == int(5) && s.y == int(4)));
    }

    #[test]
    fn partitioning_is_invisible() {
        let i = inst(7, 13, 1, 3);
        let base = brute_force(&i, 3000, 1).solutions;
        for k in [2, 3, 7, 64, 5000] {
            assert_eq!(brute_force(&i, 3000, k).solutions, base, "k = {k}");
        }
    }

    #[test]
    fn parse_corpus_lines() {
        let text = "# comment\n7\t1\t2\t11\t1\t5\tcongruent\n\n7 1 2 11 1 4\n";
        let entries = parse_corpus(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].expect, Some(Expectation::Congruent));
        assert_eq!(entries[1].line, 4);
        assert!(matches!(
            parse_corpus("7 1 2 11 1"),
            Err(CorpusError::ColumnCount { line: 1, found: 5 })
        ));
        assert!(matches!(
            parse_corpus("7 1 2 eleven 1 5"),
            Err(CorpusError::Parse { field: "b", .. })
        ));
        assert!(parse_corpus("7 1 2 11 1 5 maybe").is_err());
    }

    #[test]
    fn corpus_examples() {
        let ok = check_entry(&CorpusEntry::new(7, 7, 2, 13, 1, 7));
        assert!(ok.passed());
        assert!(ok.congruent_pm1);
        assert!(matches!(ok.b_kind, BKind::PrimePower(_)));
        let comp = check_entry(&CorpusEntry::new(7, 4865, 46, 1_320_267, 1, 7));
        assert!(comp.passed());
        assert!(!comp.congruent_pm1);
        assert_eq!(comp.b_kind, BKind::Composite);
        let bad = check_entry(&CorpusEntry::new(7, 1, 2, 11, 1, 4));
        assert!(!bad.passed());
        let wrong = check_entry(&CorpusEntry::new(7, 4865, 46, 1_320_267, 1, 7).expecting(Expectation::Congruent));
        assert_eq!(wrong.failures.len(), 1);
    }

    #[test]
    fn reference_corpus_verifies() {
        let checks = verify_corpus(&reference_corpus());
        assert_eq!(checks.len(), 14);
        for c in &checks {
            assert!(c.passed(), "{:?}", c.failures);
        }
    }

    #[test]
    fn residues() {
        assert_eq!(congruence_residue(&int(7), &int(11), 1, 5), 1);
        assert_eq!(congruence_residue(&int(11), &int(3), 1, 7), 5);
        assert_eq!(congruence_residue(&int(23), &int(5), 1, 7), 21);
        assert_eq!(next_odd_prime(4), 5);
        assert_eq!(next_odd_prime(1), 3);
    }
}
