use num_bigint::BigUint;

use super::forms::{bkkl_classify, FormTag};
use super::{ConditionEntry, ConditionReport, Witness};
use crate::arith::{is_prime_u64, Factorization, Natural, PrimePower};

fn prime_or_prime_square(m: u64) -> bool {
    if is_prime_u64(m) {
        return true;
    }
    let r = m.isqrt();
    r * r == m && is_prime_u64(r)
}

fn first_where(parts: &[PrimePower], pred: impl Fn(&PrimePower) -> bool) -> Option<&PrimePower> {
    parts.iter().find(|pp| pred(pp))
}

/// Evaluates every published necessary condition on `f`. Conditions that
/// only apply to one residue form are `NotApplicable` outside it.
pub fn literature_conditions(f: &Factorization) -> ConditionReport {
    let n = f.value();
    let mut report = ConditionReport::new(&n);
    let parts = f.parts();
    let odd = f.odd_parts();
    let out = &mut report.entries;

    out.push(ConditionEntry::check(
        "editorial.even",
        f.is_even(),
        Witness::PrimePower {
            prime: "2".into(),
            exponent: f.two_exponent(),
        },
        "n must be even",
    ));
    out.push(ConditionEntry::check(
        "editorial.four_prime_factors",
        f.omega() >= 4,
        Witness::count(f.omega()),
        "omega(n) >= 4",
    ));
    let square = first_where(parts, |pp| pp.exponent >= 2);
    out.push(match square {
        Some(pp) => ConditionEntry::check("editorial.not_squarefree", true, Witness::prime_power(pp), "some exponent >= 2"),
        None => ConditionEntry::check("editorial.not_squarefree", false, Witness::integer(&n), "n is squarefree"),
    });
    let simple = first_where(parts, |pp| pp.exponent == 1);
    out.push(match simple {
        Some(pp) => ConditionEntry::check("editorial.not_squarefull", true, Witness::prime_power(pp), "some exponent is 1"),
        None => ConditionEntry::check("editorial.not_squarefull", false, Witness::integer(&n), "n is squarefull"),
    });
    out.push(ConditionEntry::check(
        "editorial.greater_than_1e9",
        n > BigUint::from(1_000_000_000u64),
        Witness::integer(&n),
        "n > 10^9",
    ));
    let three_mod_four = first_where(parts, |pp| pp.exponent % 4 == 3);
    out.push(match three_mod_four {
        Some(pp) => ConditionEntry::check(
            "editorial.no_exponent_3_mod_4",
            false,
            Witness::prime_power(pp),
            "exponent = 3 (mod 4)",
        ),
        None => ConditionEntry::check(
            "editorial.no_exponent_3_mod_4",
            true,
            Witness::Exponents {
                values: parts.iter().map(|pp| pp.exponent).collect(),
            },
            "no exponent = 3 (mod 4)",
        ),
    });

    let form = bkkl_classify(f);
    out.push(ConditionEntry::check(
        "bkkl.form",
        form.tag != FormTag::Neither,
        Witness::primes(form.p1.iter().chain(form.p2.iter())),
        match form.tag {
            FormTag::A => "form (a)".to_string(),
            FormTag::B => "form (b)".to_string(),
            FormTag::Neither => format!("neither form: {}", form.note.as_deref().unwrap_or("")),
        },
    ));
    out.push(ConditionEntry::check(
        "bkkl.omega_at_least_5",
        f.omega() >= 5,
        Witness::count(f.omega()),
        "omega(n) >= 5",
    ));
    let fourth = first_where(parts, |pp| pp.exponent >= 4);
    out.push(match fourth {
        Some(pp) => ConditionEntry::check("bkkl.not_fourth_power_free", true, Witness::prime_power(pp), "p^4 | n"),
        None => ConditionEntry::check("bkkl.not_fourth_power_free", false, Witness::integer(&n), "n is fourth power free"),
    });

    let odd_fourth = first_where(odd, |pp| pp.exponent >= 4);
    out.push(match odd_fourth {
        Some(pp) => ConditionEntry::check("bdz.odd_fourth_power", true, Witness::prime_power(pp), "p^4 | n for an odd p"),
        None => ConditionEntry::check(
            "bdz.odd_fourth_power",
            false,
            Witness::integer(&n),
            "no odd prime to the fourth power",
        ),
    });
    out.push(bdz_p1_bound(f, &form));

    if let (FormTag::A, Some(p1)) = (form.tag, form.p1.as_ref()) {
        out.extend(form_a_checks(f, p1));
    } else {
        for id in [
            "ct.divisible_by_3",
            "ct.two_odd_fourth_powers",
            "ct.p1_bound",
            "ct.at_most_two_above_p1",
            "ct.two_exponents_equal_2",
            "ct.exponent_2_when_10p2_ge_p1",
        ] {
            out.push(ConditionEntry::not_applicable(id, "applies to form (a) only"));
        }
    }

    let good: Vec<u32> = parts
        .iter()
        .map(|pp| pp.exponent)
        .filter(|&e| prime_or_prime_square(u64::from(e) + 1))
        .collect();
    out.push(ConditionEntry::check(
        "ct.half_prime_or_prime_square",
        2 * good.len() >= parts.len(),
        Witness::Exponents {
            values: parts.iter().map(|pp| pp.exponent).collect(),
        },
        format!("{} of {} values e_i + 1 are primes or prime squares", good.len(), parts.len()),
    ));

    let mut odd_exps: Vec<u32> = odd.iter().map(|pp| pp.exponent).collect();
    odd_exps.sort_unstable();
    out.push(ConditionEntry::check(
        "tz.excluded_shape",
        odd_exps != [1, 1, 4, 4],
        Witness::Exponents { values: odd_exps },
        "n is not 2^e0 * p1 * p2 * p3^4 * p4^4",
    ));
    report
}

fn bdz_p1_bound(f: &Factorization, form: &super::FormClass) -> ConditionEntry {
    const ID: &str = "bdz.p1_bound";
    let Some(p1) = form.p1.as_ref() else {
        return ConditionEntry::not_applicable(ID, "neither form");
    };
    let witness = Witness::primes([p1]);
    match form.tag {
        FormTag::A => ConditionEntry::check(ID, *p1 >= BigUint::from(43u32), witness, "form (a): p1 >= 43"),
        FormTag::B => {
            let p2 = form.p2.as_ref().expect("form (b) has two primes");
            if f.exponent_of(p2) > 1 {
                ConditionEntry::check(ID, *p1 >= BigUint::from(173u32), witness, "form (b), e2 > e1 = 1: p1 >= 173")
            } else {
                ConditionEntry::not_applicable(ID, "form (b) with e1 = e2 = 1")
            }
        }
        FormTag::Neither => unreachable!("p1 is set only for forms (a) and (b)"),
    }
}

fn form_a_checks(f: &Factorization, p1: &Natural) -> Vec<ConditionEntry> {
    let odd = f.odd_parts();
    let three = BigUint::from(3u32);
    let mut out = Vec::new();
    out.push(ConditionEntry::check(
        "ct.divisible_by_3",
        f.exponent_of(&three) > 0,
        Witness::PrimePower {
            prime: "3".into(),
            exponent: f.exponent_of(&three),
        },
        "3 | n",
    ));
    let fourths: Vec<&Natural> = odd.iter().filter(|pp| pp.exponent >= 4).map(|pp| &pp.prime).collect();
    out.push(ConditionEntry::check(
        "ct.two_odd_fourth_powers",
        fourths.len() >= 2,
        Witness::primes(fourths.iter().copied()),
        "at least two odd p with p^4 | n",
    ));
    out.push(ConditionEntry::check(
        "ct.p1_bound",
        *p1 >= BigUint::from(1571u32),
        Witness::primes([p1]),
        "p1 >= 1571",
    ));
    let above: Vec<&Natural> = odd.iter().map(|pp| &pp.prime).filter(|p| *p > p1).collect();
    out.push(ConditionEntry::check(
        "ct.at_most_two_above_p1",
        above.len() <= 2,
        Witness::primes(above.iter().copied()),
        "at most two p_i > p1",
    ));
    let squares: Vec<&Natural> = odd.iter().filter(|pp| pp.exponent == 2).map(|pp| &pp.prime).collect();
    out.push(ConditionEntry::check(
        "ct.two_exponents_equal_2",
        squares.len() >= 2,
        Witness::primes(squares.iter().copied()),
        "e_i = 2 for at least two i",
    ));
    let offender = odd
        .iter()
        .filter(|pp| &pp.prime != p1)
        .find(|pp| BigUint::from(10u32) * &pp.prime * &pp.prime >= *p1 && pp.exponent != 2);
    out.push(match offender {
        Some(pp) => ConditionEntry::check(
            "ct.exponent_2_when_10p2_ge_p1",
            false,
            Witness::prime_power(pp),
            "10 p_i^2 >= p1 but e_i != 2",
        ),
        None => ConditionEntry::check(
            "ct.exponent_2_when_10p2_ge_p1",
            true,
            Witness::primes([p1]),
            "every p_i with 10 p_i^2 >= p1 has e_i = 2",
        ),
    });
    debug_assert_eq!(out.len(), 6);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::Verdict;
    use crate::arith::factorize_u64;

    fn f(pairs: &[(u64, u32)]) -> Factorization {
        Factorization::from_pairs(pairs).unwrap()
    }

    #[test]
    fn known_solution_is_flagged() {
        let r = literature_conditions(&factorize_u64(1782).unwrap());
        assert!(r.known_solution);
        assert!(r.note.starts_with("known solution"));
        assert_eq!(r.verdict("editorial.four_prime_factors"), Some(Verdict::Violated));
        assert_eq!(r.verdict("editorial.even"), Some(Verdict::Holds));
    }

    #[test]
    fn small_value_fails_size_bound() {
        let g = f(&[(2, 1), (3, 2), (5, 2), (7, 2), (11, 2), (13, 1)]);
        assert!(g.value() <= BigUint::from(1_000_000_000u64));
        let r = literature_conditions(&g);
        assert_eq!(r.verdict("editorial.greater_than_1e9"), Some(Verdict::Violated));
        assert!(!r.known_solution);
    }

    #[test]
    fn odd_input_fails_parity() {
        let r = literature_conditions(&f(&[(3, 4), (5, 2)]));
        assert_eq!(r.verdict("editorial.even"), Some(Verdict::Violated));
        assert_eq!(r.verdict("bkkl.form"), Some(Verdict::Violated));
        assert_eq!(r.verdict("ct.p1_bound"), Some(Verdict::NotApplicable));
    }

    #[test]
    fn exponent_three_mod_four_matches_direct_scan() {
        for n in 2u64..5000 {
            let g = factorize_u64(n).unwrap();
            let direct = g.parts().iter().any(|pp| pp.exponent % 4 == 3);
            let r = literature_conditions(&g);
            let v = r.verdict("editorial.no_exponent_3_mod_4").unwrap();
            assert_eq!(v == Verdict::Violated, direct, "n = {n}");
        }
        let r = literature_conditions(&f(&[(2, 3), (3, 4)]));
        assert_eq!(r.verdict("editorial.no_exponent_3_mod_4"), Some(Verdict::Violated));
    }

    #[test]
    fn form_a_candidate_runs_every_check() {
        // 2 * 3^4 * 5^4 * 7^2 * 13^2 * 1571
        let g = f(&[(2, 1), (3, 4), (5, 4), (7, 2), (13, 2), (1571, 1)]);
        let r = literature_conditions(&g);
        assert_eq!(r.verdict("bkkl.form"), Some(Verdict::Holds));
        assert_eq!(r.verdict("ct.divisible_by_3"), Some(Verdict::Holds));
        assert_eq!(r.verdict("ct.two_odd_fourth_powers"), Some(Verdict::Holds));
        assert_eq!(r.verdict("ct.p1_bound"), Some(Verdict::Holds));
        assert_eq!(r.verdict("ct.at_most_two_above_p1"), Some(Verdict::Holds));
        assert_eq!(r.verdict("ct.two_exponents_equal_2"), Some(Verdict::Holds));
        // 10 * 13^2 = 1690 >= 1571 and e = 2; 10 * 5^2 < 1571.
        assert_eq!(r.verdict("ct.exponent_2_when_10p2_ge_p1"), Some(Verdict::Holds));
        assert_eq!(r.verdict("tz.excluded_shape"), Some(Verdict::Holds));
    }

    #[test]
    fn form_a_large_prime_needs_square_exponent() {
        let g = f(&[(2, 1), (3, 4), (5, 4), (13, 4), (1571, 1)]);
        let r = literature_conditions(&g);
        let e = r.entry("ct.exponent_2_when_10p2_ge_p1").unwrap();
        assert_eq!(e.verdict, Verdict::Violated);
        assert_eq!(
            e.witness,
            Witness::PrimePower {
                prime: "13".into(),
                exponent: 4
            }
        );
    }

    #[test]
    fn excluded_shape_is_detected() {
        let r = literature_conditions(&f(&[(2, 2), (3, 4), (5, 4), (7, 1), (11, 1)]));
        assert_eq!(r.verdict("tz.excluded_shape"), Some(Verdict::Violated));
    }

    #[test]
    fn form_b_bound_depends_on_second_exponent() {
        let r = literature_conditions(&f(&[(2, 1), (5, 1), (13, 5)]));
        assert_eq!(r.verdict("bdz.p1_bound"), Some(Verdict::Violated));
        let r = literature_conditions(&f(&[(2, 1), (5, 1), (13, 1)]));
        assert_eq!(r.verdict("bdz.p1_bound"), Some(Verdict::NotApplicable));
    }
}
