//! JSON views of core types. Integers are emitted as decimal strings so the
//! output never contains floats and survives any JSON reader.

use serde_json::{json, Value};

use lln_core::arith::{Int, PrimePower};
use lln_core::families::{FamilyMember, Membership};
use lln_core::search::{BKind, CorpusCheck, SearchReport, SolutionTuple};
use lln_core::solver::{
    verify_certificate, Certificate, ConditionReport, Domain, Outcome, ProblemInstance,
    ResidueContradiction, Subcase, Verdict,
};

pub fn int(n: &Int) -> Value {
    Value::String(n.to_string())
}

pub fn prime_power(pp: &Option<PrimePower>) -> Value {
    match pp {
        Some(pp) => json!({
            "base": int(&pp.base),
            "exponent": pp.exponent,
            "sign": pp.sign,
        }),
        None => Value::Null,
    }
}

pub fn instance(inst: &ProblemInstance) -> Value {
    json!({
        "a": int(inst.a()),
        "b": int(inst.b()),
        "l": inst.l(),
        "n": inst.n(),
    })
}

pub fn tuple(t: &SolutionTuple) -> Value {
    json!({
        "a": int(&t.a),
        "x": int(&t.x),
        "y": int(&t.y),
        "b": int(&t.b),
        "l": t.l,
        "n": t.n,
    })
}

pub fn conditions(r: &ConditionReport) -> Value {
    json!({
        "a_mod4": r.a_mod4,
        "is_squarefree": r.is_squarefree,
        "b_prime_power": prime_power(&r.b_prime_power),
        "congruence_residue": r.residue,
        "congruence_residue_neg_b": r.residue_neg,
        "congruence_ok": r.congruence_ok,
        "gcd_n_b_ok": r.gcd_n_b_ok,
        "h": r.h,
        "gcd_n_h_ok": r.gcd_n_h_ok,
        "a_in_special_set": r.a_in_special_set,
    })
}

fn contradiction(rc: &ResidueContradiction) -> Value {
    json!({
        "modulus": rc.modulus,
        "domain": match rc.domain {
            Domain::Odd => "odd",
            Domain::All => "all",
        },
        "left": rc.left.to_string(),
        "right": rc.right.to_string(),
        "left_residues": rc.left_set.iter().collect::<Vec<_>>(),
        "right_residues": rc.right_set.iter().collect::<Vec<_>>(),
    })
}

pub fn certificate(c: &Certificate) -> Value {
    let mut v = match c {
        Certificate::TheoremCitation { theorem, .. } => json!({ "theorem": theorem.to_string() }),
        Certificate::ResidueContradiction(rc) => contradiction(rc),
        Certificate::Mod4Reduction { a } => json!({ "a": int(a) }),
    };
    v["kind"] = json!(c.kind());
    v["verified"] = json!(verify_certificate(c));
    v
}

pub fn subcase(s: &Subcase) -> Value {
    let outcome = match &s.outcome {
        Outcome::Contradiction(rc) => {
            let mut v = contradiction(rc);
            v["kind"] = json!("Contradiction");
            v
        }
        Outcome::Family { equation, families } => json!({
            "kind": "Family",
            "equation": equation,
            "families": families.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        }),
        Outcome::Sporadic(ts) => json!({
            "kind": "Sporadic",
            "tuples": ts.iter().map(tuple).collect::<Vec<_>>(),
        }),
        Outcome::Rejected(r) => json!({ "kind": "Rejected", "reason": r.to_string() }),
    };
    json!({ "label": s.label, "detail": s.detail, "outcome": outcome })
}

pub fn membership(m: &Membership) -> Value {
    match m {
        Membership::Member { id, index } => {
            json!({ "kind": "Member", "family": id.to_string(), "index": index })
        }
        Membership::NotMember => json!({ "kind": "NotMember" }),
        Membership::Exhausted => json!({ "kind": "Exhausted" }),
    }
}

pub fn verdict(v: &Verdict) -> Value {
    let details = match v {
        Verdict::NoSolution { evidence, .. } => {
            json!({ "evidence": evidence.iter().map(subcase).collect::<Vec<_>>() })
        }
        Verdict::FamilyCase { families, screening } => json!({
            "families": families.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "screening": membership(screening),
        }),
        Verdict::SporadicExcluded { tuples, .. } => json!({
            "tuples": tuples
                .iter()
                .map(|(t, r)| json!({ "tuple": tuple(t), "residue": r }))
                .collect::<Vec<_>>(),
        }),
        Verdict::Undecided { reasons } => json!({
            "reasons": reasons.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }),
    };
    json!({
        "kind": v.kind(),
        "certificate": v.certificate().map(certificate).unwrap_or(Value::Null),
        "details": details,
    })
}

pub fn member(m: &FamilyMember) -> Value {
    json!({
        "family": m.id.to_string(),
        "index": m.index,
        "source_index": m.source_index,
        "u": int(&m.u),
        "v": int(&m.v),
        "x": int(&m.x),
        "y": int(&m.y),
        "blpow": int(&m.blpow),
        "congruence_residue": m.congruence_residue,
        "coprime": m.coprime,
        "prime_power": prime_power(&m.prime_power),
        "max_l": m.max_l,
    })
}

pub fn search_report(r: &SearchReport) -> Value {
    json!({
        "instance": instance(&r.instance),
        "y_max": r.y_max,
        "partitions": r.partitions,
        "elapsed_ms": r.elapsed.as_millis() as u64,
        "solutions": r.solutions.iter().map(tuple).collect::<Vec<_>>(),
    })
}

pub fn b_kind(k: &BKind) -> String {
    match k {
        BKind::PrimePower(pp) => format!("prime power {pp}"),
        BKind::Composite => "composite".to_string(),
        BKind::Unit => "unit".to_string(),
    }
}

pub fn corpus_check(c: &CorpusCheck) -> Value {
    let e = &c.entry;
    json!({
        "line": e.line,
        "entry": {
            "a": int(&e.a),
            "x": int(&e.x),
            "y": int(&e.y),
            "b": int(&e.b),
            "l": e.l,
            "n": e.n,
        },
        "expect": e.expect.map(|x| x.as_str()),
        "equation_holds": c.equation_holds,
        "residues": c.residues.map(|(r, s)| vec![r, s]),
        "congruent_pm1": c.congruent_pm1,
        "b_kind": b_kind(&c.b_kind),
        "passed": c.passed(),
        "failures": c.failures,
    })
}
