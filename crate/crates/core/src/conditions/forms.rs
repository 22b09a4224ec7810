use serde::{Deserialize, Serialize};

use crate::arith::{Factorization, Natural, PrimePower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormTag {
    A,
    B,
    Neither,
}

/// Shape of an even factorization with respect to the two residue forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormClass {
    pub tag: FormTag,
    #[serde(with = "opt_nat")]
    pub p1: Option<Natural>,
    #[serde(with = "opt_nat")]
    pub p2: Option<Natural>,
    pub note: Option<String>,
}

impl FormClass {
    fn neither(note: &str) -> Self {
        FormClass {
            tag: FormTag::Neither,
            p1: None,
            p2: None,
            note: Some(note.to_string()),
        }
    }

    pub fn is_a(&self) -> bool {
        self.tag == FormTag::A
    }
}

fn mod_small(p: &Natural, m: u32) -> u32 {
    (p % m).try_into().expect("residue fits")
}

/// Form A: the only odd prime with odd exponent is `p_1 = 3 (mod 8)` and its
/// exponent is 1. Form B: exactly two odd primes have odd exponent, both
/// primes and both exponents are `1 (mod 4)`, and the smaller exponent is 1;
/// `p_1` is the prime carrying exponent 1 (the smaller prime if both do).
pub fn bkkl_classify(f: &Factorization) -> FormClass {
    if !f.is_even() {
        return FormClass::neither("odd input");
    }
    let odd_exp: Vec<&PrimePower> = f.odd_parts().iter().filter(|pp| pp.exponent % 2 == 1).collect();
    match odd_exp.as_slice() {
        [only] if only.exponent == 1 && mod_small(&only.prime, 8) == 3 => FormClass {
            tag: FormTag::A,
            p1: Some(only.prime.clone()),
            p2: None,
            note: None,
        },
        [a, b]
            if [a, b]
                .iter()
                .all(|pp| mod_small(&pp.prime, 4) == 1 && pp.exponent % 4 == 1)
                && a.exponent.min(b.exponent) == 1 =>
        {
            // `a` precedes `b` in ascending prime order.
            let (first, second) = if a.exponent == 1 { (a, b) } else { (b, a) };
            FormClass {
                tag: FormTag::B,
                p1: Some(first.prime.clone()),
                p2: Some(second.prime.clone()),
                note: None,
            }
        }
        [] => FormClass::neither("no odd prime has odd exponent"),
        _ => FormClass::neither("odd exponents fit neither residue pattern"),
    }
}

mod opt_nat {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(n) => s.serialize_some(&n.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|t| t.parse().map_err(serde::de::Error::custom)).transpose()
    }
}
