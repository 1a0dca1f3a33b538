use std::borrow::Cow;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{BivarPoly, PolyError};

/// Wire form: `{"vars":["x","y"],"terms":[{"e":[i,j],"c":"<decimal>"}]}`,
/// terms in lexicographic exponent order, coefficients as exact decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: [String; 2],
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: [u32; 2],
    pub c: String,
}

impl From<&BivarPoly> for PolyJson {
    fn from(p: &BivarPoly) -> Self {
        PolyJson {
            vars: [p.vars[0].to_string(), p.vars[1].to_string()],
            terms: p
                .terms()
                .map(|((i, j), c)| TermJson {
                    e: [i, j],
                    c: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for BivarPoly {
    type Error = PolyError;

    fn try_from(json: PolyJson) -> Result<Self, PolyError> {
        let [a, b] = json.vars;
        let mut p = BivarPoly::zero([Cow::Owned(a), Cow::Owned(b)]);
        let mut last: Option<[u32; 2]> = None;
        for t in json.terms {
            if last.is_some_and(|l| l >= t.e) {
                return Err(PolyError::Json(format!(
                    "terms not strictly ordered at {:?}",
                    t.e
                )));
            }
            last = Some(t.e);
            let c: BigInt =
                t.c.parse()
                    .map_err(|_| PolyError::Json(format!("bad coefficient {:?}", t.c)))?;
            p.add_term(t.e[0], t.e[1], c);
        }
        Ok(p)
    }
}

impl BivarPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<BivarPoly, PolyError> {
        let json: PolyJson =
            serde_json::from_str(text).map_err(|e| PolyError::Json(e.to_string()))?;
        BivarPoly::try_from(json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn schema_is_exact() {
        let p = BivarPoly::from_terms(
            BivarPoly::zero_in("x", "y").vars().clone(),
            [((0, 1), 1), ((1, 0), 1), ((3, 0), 1), ((2, 0), 1)].map(|(e, c)| (e, BigInt::from(c))),
        );
        assert_eq!(
            p.to_json(),
            r#"{"vars":["x","y"],"terms":[{"e":[0,1],"c":"1"},{"e":[1,0],"c":"1"},{"e":[2,0],"c":"1"},{"e":[3,0],"c":"1"}]}"#
        );
    }

    #[test]
    fn big_coefficients_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = BivarPoly::monomial(BivarPoly::zero_in("q", "v").vars().clone(), 2, 7, big);
        assert_eq!(BivarPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn rejects_unordered_terms_and_bad_numbers() {
        assert!(BivarPoly::from_json(
            r#"{"vars":["x","y"],"terms":[{"e":[1,0],"c":"1"},{"e":[0,1],"c":"1"}]}"#
        )
        .is_err());
        assert!(
            BivarPoly::from_json(r#"{"vars":["x","y"],"terms":[{"e":[1,0],"c":"1.5"}]}"#).is_err()
        );
    }

    proptest! {
        #[test]
        fn round_trip(ts in prop::collection::vec(((0u32..6, 0u32..6), -1000i64..1000), 0..10)) {
            let p = BivarPoly::from_terms(
                BivarPoly::zero_in("u", "v").vars().clone(),
                ts.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            );
            let text = p.to_json();
            let back = BivarPoly::from_json(&text).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
