use num_bigint::BigInt;
use welschinger::assembly::ChiEntry;
use welschinger::tables::RelativeEntry;
use welschinger::{
    check_congruence, check_sign_law, chi, chi_polynomial, lower_bound_report, Calculator, CuratedTable, Engine,
    Error, FInvariants, GeometryKind, RelativeInvariants, Strategy,
};

use GeometryKind::{EllipsoidQuadric2 as Q2, EllipsoidQuadric3 as Q3, ProjectivePlane as P2};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn chi_examples() {
    assert_eq!(chi(P2, 5, 0).unwrap().value, big(64));
    assert_eq!(chi(P2, 8, 1).unwrap().value, big(-280576));
    assert_eq!(chi(Q2, 4, 3).unwrap().value, big(320));
    assert_eq!(chi(Q3, 10, 1).unwrap().value, big(-896));
    assert_eq!(chi(P2, 4, 1).unwrap().value, big(0));
}

#[test]
fn low_degree_values_match_classical_counts() {
    // one line through two points, one conic through five; the cubic
    // invariants with r real points among eight are r.
    for r in [0, 2] {
        assert_eq!(chi(P2, 1, r).unwrap().value, big(1));
    }
    for r in [1, 3, 5] {
        assert_eq!(chi(P2, 2, r).unwrap().value, big(1));
    }
    for r in [0, 2, 4, 6, 8] {
        assert_eq!(chi(P2, 3, r).unwrap().value, big(r as i64), "r = {r}");
    }
    for r in [1, 3] {
        assert_eq!(chi(Q2, 1, r).unwrap().value, big(1));
    }
}

#[test]
fn polynomial_examples() {
    let p = chi_polynomial(Q2, 2, 7);
    let got: Vec<(u32, BigInt)> = p.coefficients.keys().map(|&r| (r, p.get(r).unwrap().clone())).collect();
    assert_eq!(got, vec![(1, big(0)), (3, big(2)), (5, big(4)), (7, big(6))]);

    let p = chi_polynomial(P2, 6, 3);
    assert_eq!(p.coefficients.len(), 2);
    assert_eq!(p.get(1), Some(&big(1024)));
    assert_eq!(p.get(3), Some(&big(1536)));

    let p = chi_polynomial(P2, 7, 2);
    assert_eq!(p.get(0), Some(&big(-14336)));
    assert_eq!(p.get(2), Some(&big(11776)));
}

#[test]
fn polynomial_flags_unavailable_entries() {
    let p = chi_polynomial(P2, 8, 23);
    assert!(p.coefficients.keys().all(|r| r % 2 == 1));
    assert_eq!(p.get(1), Some(&big(-280576)));
    assert!(matches!(p.coefficients.get(&23), Some(ChiEntry::Unavailable { .. })));
}

#[test]
fn congruence_examples() {
    let rep = check_congruence(P2, 7, 0, &big(-14336));
    let powers: Vec<u32> = rep.clauses.iter().map(|c| c.power_of_two).collect();
    assert!(powers.contains(&9) && powers.contains(&10));
    assert!(rep.pass());
    let rep = check_congruence(Q3, 10, 1, &big(-896));
    assert_eq!(rep.clauses.len(), 1);
    assert_eq!(rep.clauses[0].power_of_two, 6);
    assert!(rep.pass());
    let rep = check_congruence(Q2, 5, 1, &big(26880));
    assert!(rep.clauses.iter().any(|c| c.power_of_two == 8));
    assert!(rep.pass());
    // 2^9 · 7 meets the first clause but not the 2^10 one
    assert!(!check_congruence(P2, 7, 0, &big(-3584)).pass());
}

#[test]
fn sign_law_examples() {
    assert!(check_sign_law(P2, 7, 0, &big(-14336)).pass());
    assert!(check_sign_law(Q2, 4, 1, &big(-256)).pass());
    assert!(check_sign_law(Q3, 6, 1, &big(0)).pass());
    assert!(!check_sign_law(P2, 7, 0, &big(14336)).pass());
    assert!(check_sign_law(P2, 6, 3, &big(-1)).clauses.is_empty());
}

#[test]
fn lower_bounds() {
    assert_eq!(lower_bound_report(P2, 6, 1).unwrap().abs_lower_bound, big(1024));
    assert_eq!(lower_bound_report(P2, 4, 1).unwrap().abs_lower_bound, big(0));
    let q = lower_bound_report(Q3, 2, 1).unwrap();
    assert_eq!(q.abs_lower_bound, big(1));
    assert_eq!(q.chi, big(-1));
}

#[test]
fn sequential_and_parallel_ledgers_agree() {
    let seq = Calculator::default().with_strategy(Strategy::Sequential);
    let par = Calculator::default().with_strategy(Strategy::Parallel);
    for (g, d, r) in [(P2, 8, 1), (P2, 7, 2), (Q2, 5, 1), (Q3, 10, 1)] {
        let a = seq.chi(g, d, r).unwrap();
        let b = par.chi(g, d, r).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.ledger_is_consistent());
    }
}

#[test]
fn inadmissible_pairs_are_rejected() {
    assert!(matches!(chi(P2, 6, 2), Err(Error::InadmissiblePair { .. })));
    assert!(matches!(chi(Q2, 2, 2), Err(Error::InadmissiblePair { .. })));
    assert!(matches!(chi(Q3, 10, 2), Err(Error::InadmissiblePair { .. })));
}

#[test]
fn missing_relative_value_names_the_tree() {
    let entries: Vec<RelativeEntry> = CuratedTable::builtin()
        .entries()
        .into_iter()
        .filter(|(k, _, _)| k.to_string() != "N_4^{e+3f}(0, e1+e2)")
        .map(|(k, v, q)| RelativeEntry {
            n: k.class.n,
            a: k.class.a,
            b: k.class.b,
            alpha: k.alpha.clone(),
            beta: k.beta.clone(),
            value: v.try_into().unwrap(),
            source_quote: q.to_string(),
        })
        .collect();
    let table = CuratedTable::from_entries(entries).unwrap();
    let calc = Calculator::new(RelativeInvariants::new(table.clone(), Engine::Table), FInvariants::default(), Strategy::Sequential);
    let err = calc.chi(P2, 8, 1).unwrap_err();
    assert!(err.is_missing_key());
    assert!(matches!(err, Error::InTree { .. }));
    assert!(err.to_string().contains("N_4^{e+3f}(0, e1+e2)"));

    // the recursion engine fills the gap
    let calc = Calculator::new(RelativeInvariants::new(table, Engine::Recursion), FInvariants::default(), Strategy::Sequential);
    assert_eq!(calc.chi(P2, 8, 1).unwrap().value, big(-280576));
}

#[test]
fn json_uses_strings_beyond_64_bits() {
    let v = welschinger::trees::json_integer(&(BigInt::from(i64::MAX) * 4));
    assert!(v.is_string());
    assert_eq!(welschinger::trees::json_integer(&big(-896)), serde_json::json!(-896));
}
