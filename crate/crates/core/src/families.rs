//! The six infinite families of solutions of `7x^2 + (b^l)^2 = 4y^3`.
//!
//! Every member comes from odd `(u, v)` through
//! `((u + v sqrt(-7)) / 2)^3 = (b^l + x sqrt(-7)) / 2`, i.e.
//! `x = (3u^2 v - 7v^3)/4`, `y = (u^2 + 7v^2)/4`, `b^l = (u^3 - 21uv^2)/4`.
//! The families differ in where `(u, v)` comes from.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::{max_perfect_power, odd_prime_power, Int, PrimePower};
use crate::pell::{self, Form734Branch, PellForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// Odd solutions of `u^2 - 21v^2 = 4`.
    F1,
    /// `7v^2 - 3u^2 = 4`, `(v, u) = (s + 3r, s + 7r)`.
    F2,
    /// `7v^2 - 3u^2 = 4`, `(v, u) = (-s + 3r, s - 7r)`.
    F3,
    /// `7v^2 - 3t^2 = 4` with `u = 3t`, plus branch.
    F4,
    /// `7v^2 - 3t^2 = 4` with `u = 3t`, minus branch.
    F5,
    /// Odd solutions of `u^2 - 21t^2 = 4` with `v = 3t`.
    F6,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::F1,
        FamilyId::F2,
        FamilyId::F3,
        FamilyId::F4,
        FamilyId::F5,
        FamilyId::F6,
    ];

    pub fn source_equation(self) -> &'static str {
        match self {
            FamilyId::F1 => "u^2 - 21v^2 = 4",
            FamilyId::F2 | FamilyId::F3 => "7v^2 - 3u^2 = 4",
            FamilyId::F4 | FamilyId::F5 => "7v^2 - 3t^2 = 4, u = 3t",
            FamilyId::F6 => "u^2 - 21t^2 = 4, v = 3t",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FamilyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family {s:?}; expected F1..F6"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub id: FamilyId,
    /// 1-based position within the family.
    pub index: usize,
    /// Index of the underlying Pell solution (generator steps).
    pub source_index: u64,
    pub u: Int,
    pub v: Int,
    pub x: Int,
    pub y: Int,
    /// The value `b^l`.
    pub blpow: Int,
    /// `4 b^l mod 7`.
    pub congruence_residue: u8,
    /// `gcd(x, y) == 1`.
    pub coprime: bool,
    /// `b^l` as `±q^r` when it is an odd prime power.
    pub prime_power: Option<PrimePower>,
    /// Largest `l` with `|b^l|` a perfect l-th power.
    pub max_l: u32,
}

impl FamilyMember {
    fn from_uv(id: FamilyId, index: usize, source_index: u64, u: Int, v: Int) -> Self {
        assert!(u.is_odd() && v.is_odd(), "family parameters must be odd");
        let u2 = &u * &u;
        let v2 = &v * &v;
        let x: Int = (&u2 * &v * 3u8 - &v2 * &v * 7u8) / 4;
        let y: Int = (&u2 + &v2 * 7u8) / 4;
        let blpow: Int = (&u2 * &u - &u * &v2 * 21u8) / 4;
        assert_eq!(
            &x * &x * 7u8 + &blpow * &blpow,
            y.pow(3) * 4u8,
            "{id} member {index} fails the equation"
        );
        let congruence_residue = (&blpow * 4u8).mod_floor(&Int::from(7)).to_u8().unwrap_or(0);
        FamilyMember {
            id,
            index,
            source_index,
            coprime: x.gcd(&y).is_one(),
            prime_power: odd_prime_power(&blpow),
            max_l: max_perfect_power(&blpow),
            u,
            v,
            x,
            y,
            blpow,
            congruence_residue,
        }
    }

    /// `4 b^l = ±1 (mod 7)`.
    pub fn congruent_pm1(&self) -> bool {
        matches!(self.congruence_residue, 1 | 6)
    }

    /// All four `(x, b^l)` sign combinations; the equation is even in both.
    pub fn sign_variants(&self) -> [(Int, Int); 4] {
        [
            (self.x.clone(), self.blpow.clone()),
            (-&self.x, self.blpow.clone()),
            (self.x.clone(), -&self.blpow),
            (-&self.x, -&self.blpow),
        ]
    }
}

/// `(source_index, u, v)` for a family, in order.
fn sources(id: FamilyId) -> Box<dyn Iterator<Item = (u64, Int, Int)>> {
    let form734 = |branch: Form734Branch, scale: u8| {
        Box::new(pell::unit21_solutions().enumerate().map(move |(t, (s, r))| {
            let (v, w) = branch.apply(&s, &r);
            (t as u64, w * scale, v)
        })) as Box<dyn Iterator<Item = _>>
    };
    let odd21 = |scale_v: u8| {
        let form = PellForm::new(21, 4).expect("valid form");
        Box::new(
            pell::solutions(&form)
                .filter(|s| s.is_odd())
                .map(move |s| (s.index(), s.u().clone(), s.v() * scale_v)),
        ) as Box<dyn Iterator<Item = _>>
    };
    match id {
        FamilyId::F1 => odd21(1),
        FamilyId::F2 => form734(Form734Branch::Plus, 1),
        FamilyId::F3 => form734(Form734Branch::Minus, 1),
        FamilyId::F4 => form734(Form734Branch::Plus, 3),
        FamilyId::F5 => form734(Form734Branch::Minus, 3),
        FamilyId::F6 => odd21(3),
    }
}

/// Lazy member stream of one family.
pub fn members(id: FamilyId) -> impl Iterator<Item = FamilyMember> {
    sources(id)
        .enumerate()
        .map(move |(i, (t, u, v))| FamilyMember::from_uv(id, i + 1, t, u, v))
}

pub fn generate(id: FamilyId, count: usize) -> Vec<FamilyMember> {
    members(id).take(count).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member { id: FamilyId, index: usize },
    NotMember,
    /// The budget ran out before every family passed `|value|`.
    Exhausted,
}

/// Finds `±value` among the `b^l` values, scanning each family in order of
/// increasing `|b^l|` and at most `budget` members per family.
pub fn is_member(value: &Int, budget: usize) -> Membership {
    let target = value.abs();
    let mut exhausted = false;
    for id in FamilyId::ALL {
        let mut passed = false;
        for m in members(id).take(budget) {
            let size = m.blpow.abs();
            if size == target {
                return Membership::Member { id, index: m.index };
            }
            if size > target {
                passed = true;
                break;
            }
        }
        exhausted |= !passed;
    }
    if exhausted {
        Membership::Exhausted
    } else {
        Membership::NotMember
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn f1_examples() {
        let m = generate(FamilyId::F1, 2);
        assert_eq!((m[0].u.clone(), m[0].v.clone()), (int(5), int(1)));
        assert_eq!((m[0].x.clone(), m[0].y.clone(), m[0].blpow.clone()), (int(17), int(8), int(5)));
        assert_eq!((m[1].x.clone(), m[1].y.clone(), m[1].blpow.clone()), (int(1765), int(176), int(23)));
        assert_eq!(m[1].prime_power.as_ref().map(|p| p.base.clone()), Some(int(23)));
    }

    #[test]
    fn f2_example() {
        let m = generate(FamilyId::F2, 2);
        assert_eq!((m[1].v.clone(), m[1].u.clone()), (int(91), int(139)));
        assert_eq!(m[1].x.abs(), int(91));
        assert_eq!(m[1].y, int(19322));
        assert_eq!(m[1].blpow.abs(), int(5_371_655));
    }

    #[test]
    fn sign_variants_all_solve() {
        for id in FamilyId::ALL {
            for m in generate(id, 3) {
                for (x, b) in m.sign_variants() {
                    assert_eq!(&x * &x * 7u8 + &b * &b, m.y.pow(3) * 4u8);
                }
            }
        }
    }

    // Expanded polynomial forms in (s, r) of s^2 - 21 r^2 = 1, with the
    // b^l coefficient of the first family taken as -63 s^2 r.
    fn expanded(id: FamilyId, s: &Int, r: &Int) -> (Int, Int, Int) {
        let (s2, s3, r2, r3) = (s * s, s * s * s, r * r, r * r * r);
        let c = |k: i64| Int::from(k);
        match id {
            FamilyId::F2 => (
                c(-3) * r * &s2 + c(63) * &r3 + c(21) * s * &r2 - &s3,
                c(2) * &s2 + c(14) * s * r + c(28) * &r2,
                c(-5) * &s3 - c(63) * &s2 * r - c(231) * s * &r2 - c(245) * &r3,
            ),
            FamilyId::F3 => (
                c(-3) * &s2 * r + &s3 - c(21) * s * &r2 + c(63) * &r3,
                c(2) * &s2 - c(14) * s * r + c(28) * &r2,
                c(-5) * &s3 + c(63) * &s2 * r - c(231) * s * &r2 + c(245) * &r3,
            ),
            FamilyId::F4 => (
                c(567) * s * &r2 + c(99) * r * &s2 + c(5) * &s3 + c(945) * &r3,
                c(4) * &s2 + c(42) * s * r + c(126) * &r2,
                c(-9) * &s3 - c(63) * &s2 * r + c(189) * s * &r2 + c(1323) * &r3,
            ),
            FamilyId::F5 => (
                c(-567) * s * &r2 + c(99) * r * &s2 - c(5) * &s3 + c(945) * &r3,
                c(4) * &s2 - c(42) * s * r + c(126) * &r2,
                c(-9) * &s3 + c(63) * &s2 * r + c(189) * s * &r2 - c(1323) * &r3,
            ),
            _ => unreachable!(),
        }
    }

    #[test]
    fn expanded_polynomials_agree() {
        for id in [FamilyId::F2, FamilyId::F3, FamilyId::F4, FamilyId::F5] {
            let sr: Vec<_> = pell::unit21_solutions().take(8).collect();
            for (m, (s, r)) in generate(id, 8).iter().zip(&sr) {
                let (x, y, b) = expanded(id, s, r);
                assert_eq!(y, m.y, "{id} y");
                assert_eq!(x.abs(), m.x.abs(), "{id} x");
                assert_eq!(b.abs(), m.blpow.abs(), "{id} b^l");
            }
        }
    }

    #[test]
    fn membership() {
        assert_eq!(is_member(&int(5), 50), Membership::Member { id: FamilyId::F1, index: 1 });
        assert_eq!(is_member(&int(-23), 50), Membership::Member { id: FamilyId::F1, index: 2 });
        // 9 = 3^2 from (v, u) = (1, 3): 7*5^2 + 9^2 = 4*4^3
        assert_eq!(is_member(&int(9), 50), Membership::Member { id: FamilyId::F4, index: 1 });
        assert_eq!(is_member(&int(7), 50), Membership::NotMember);
        assert_eq!(is_member(&int(11), 50), Membership::NotMember);
        assert_eq!(is_member(&int(1_000_001), 1), Membership::Exhausted);
    }

    #[test]
    fn family_ids_parse() {
        assert_eq!("f4".parse::<FamilyId>(), Ok(FamilyId::F4));
        assert!("F7".parse::<FamilyId>().is_err());
    }
}
