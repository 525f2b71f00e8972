//! Data shipped with the crate: two case snapshots and the certificate list.

use crate::action::GeneratorSet;
use crate::certificates::Certificate;
use crate::curves::CurveSystem;
use crate::data_io::{parse_case, parse_certificates};

pub const CASE_145_JSON: &str = include_str!("../../../data/cases/145.json");
pub const CASE_158_JSON: &str = include_str!("../../../data/cases/158.json");
pub const CERTS_145_JSON: &str = include_str!("../../../data/certs/145.json");
pub const CERTS_158_JSON: &str = include_str!("../../../data/certs/158.json");
pub const CORPUS_JSON: &str = include_str!("../../../data/certs/corpus.json");

/// Case ids with bundled curve data.
pub const CASES: [u32; 2] = [145, 158];

pub fn case_json(id: u32) -> Option<&'static str> {
    match id {
        145 => Some(CASE_145_JSON),
        158 => Some(CASE_158_JSON),
        _ => None,
    }
}

pub fn case(id: u32) -> Option<(CurveSystem, GeneratorSet)> {
    case_json(id)
        .map(|text| parse_case(text, &format!("bundled case {id}")).expect("bundled data is valid"))
}

pub fn case_145() -> (CurveSystem, GeneratorSet) {
    case(145).unwrap()
}

pub fn case_158() -> (CurveSystem, GeneratorSet) {
    case(158).unwrap()
}

pub fn certificates(id: u32) -> Vec<Certificate> {
    corpus().into_iter().filter(|c| c.case_id == id).collect()
}

pub fn corpus() -> Vec<Certificate> {
    parse_certificates(CORPUS_JSON, "bundled corpus").expect("bundled corpus is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    fn sha(text: &str) -> String {
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    #[test]
    fn checksums() {
        let got = [
            sha(CASE_145_JSON),
            sha(CASE_158_JSON),
            sha(CERTS_145_JSON),
            sha(CERTS_158_JSON),
            sha(CORPUS_JSON),
        ];
        let want = [
            "cefff9f07464a9eca74bf3fa0b1fb8d5c4b6e60ce9bfa6c40efe9917a59cc652",
            "38a345d13d41b7cf03ca7f514aa38ccd74a40f3801990458dcc61a1f9fb55ce3",
            "585b46fce8b470a468faedf29ea2c81cbcc0b17f51cc7cb1a55a26e593b70ba1",
            "ee6b0b05762bb3b03bc89a828aa0278fae07ac416c103c07708a9a2fac4d39e5",
            "f80e2c54d654541a67b4d80e94e5e66c245a4da54a50d565a22d68d501a40898",
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn split_files_match_corpus() {
        assert_eq!(
            parse_certificates(CERTS_145_JSON, "145").unwrap(),
            certificates(145)
        );
        assert_eq!(
            parse_certificates(CERTS_158_JSON, "158").unwrap(),
            certificates(158)
        );
        assert_eq!(corpus().len(), 155);
    }
}
