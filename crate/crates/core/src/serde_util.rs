//! Invariant factors are written as plain JSON numbers when they fit in a
//! `u64` and as decimal strings otherwise.

pub mod biguint_list {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(u64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            match v.to_u64() {
                Some(x) => seq.serialize_element(&x)?,
                None => seq.serialize_element(&v.to_string())?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                Repr::Small(x) => Ok(BigUint::from(x)),
                Repr::Text(t) => t.parse().map_err(D::Error::custom),
            })
            .collect()
    }
}
