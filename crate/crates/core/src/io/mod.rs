//! JSON schemas, exact-value serialization and the on-disk catalog cache.

pub mod serde_q {
    //! Rationals as `"p/q"` strings.
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::numeric::rational::{format_q, parse_q, Q};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(x: &[Q], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(x.iter().map(format_q))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_q(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod nested {
        use super::*;

        pub fn serialize<S: Serializer>(x: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(x.iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
            Vec::<Vec<String>>::deserialize(d)?
                .iter()
                .map(|r| r.iter().map(|s| parse_q(s).map_err(D::Error::custom)).collect())
                .collect()
        }
    }
}

pub mod serde_bigint {
    //! Integers of any size as JSON numbers when they fit in `i64`, else decimal strings.
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

pub mod cache;
pub mod schema;

pub use cache::{CacheError, CacheListing, CacheStatus, CatalogCache, CACHE_ENV};
pub use schema::{
    catalog_from_json, catalog_to_json, ribbon_from_json, ribbon_to_json, triangulation_from_json,
    triangulation_to_json, RunReport, SchemaError, CATALOG_SCHEMA, CONVENTION_VERSION, REPORT_SCHEMA,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QListError {
    #[error("empty side-count list")]
    Empty,
    #[error("invalid side count {0:?}: expected a positive integer")]
    BadEntry(String),
    #[error("side count {0} is below 1")]
    TooSmall(u32),
}

/// Parses `--q` values such as `3,3,3` or `[2, 4, 4, 2]`.
pub fn parse_q_list(s: &str) -> Result<Vec<u32>, QListError> {
    let t = s.trim();
    let t = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
    if t.trim().is_empty() {
        return Err(QListError::Empty);
    }
    t.split(',')
        .map(|p| {
            let p = p.trim();
            let v: u32 = p.parse().map_err(|_| QListError::BadEntry(p.to_string()))?;
            if v < 1 {
                return Err(QListError::TooSmall(v));
            }
            Ok(v)
        })
        .collect()
}

#[cfg(test)]
mod qlist_tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_q_list("3,3,3").unwrap(), vec![3, 3, 3]);
        assert_eq!(parse_q_list(" [2, 4,4 ,2] ").unwrap(), vec![2, 4, 4, 2]);
        assert_eq!(parse_q_list("6").unwrap(), vec![6]);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_q_list(""), Err(QListError::Empty));
        assert_eq!(parse_q_list("[]"), Err(QListError::Empty));
        assert!(matches!(parse_q_list("3,,3"), Err(QListError::BadEntry(_))));
        assert!(matches!(parse_q_list("3,-1"), Err(QListError::BadEntry(_))));
        assert_eq!(parse_q_list("0,3"), Err(QListError::TooSmall(0)));
        assert!(parse_q_list("99999999999").is_err());
    }
}
