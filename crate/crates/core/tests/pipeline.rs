use std::path::PathBuf;

use proptest::prelude::*;

use enriques_nd::data_io::{load_case, load_certificates, load_snapshot, save_snapshot};
use enriques_nd::half_fibers::build_hf_set;
use enriques_nd::solver::{compute_cnd, verify_sequence};
use enriques_nd::{bundled, dot, expand_orbit, EnumerateOptions, RationalClass};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

#[test]
fn files_match_bundled_data() {
    for id in bundled::CASES {
        let (s, g) = load_case(&data(&format!("cases/{id}.json"))).unwrap();
        let (bs, bg) = bundled::case(id).unwrap();
        assert_eq!(s, bs);
        assert_eq!(g, bg);
        let certs = load_certificates(&data(&format!("certs/{id}.json"))).unwrap();
        assert_eq!(certs, bundled::certificates(id));
    }
}

#[test]
fn saved_snapshot_reloads() {
    let snap = load_snapshot(&data("cases/145.json")).unwrap();
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("145-copy.json");
    save_snapshot(&out, &snap).unwrap();
    assert_eq!(load_snapshot(&out).unwrap(), snap);
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        bundled::CASE_145_JSON,
        "canonical writer reproduces the shipped file"
    );
}

#[test]
fn witness_from_expanded_orbit_verifies() {
    let (s, g) = bundled::case_145();
    let s = expand_orbit(&s, &g, 2).unwrap();
    let (_, hf) = build_hf_set(&s, EnumerateOptions::default()).unwrap();
    let res = compute_cnd(&hf).unwrap();
    let classes: Vec<RationalClass> = res
        .witness
        .iter()
        .map(|&i| RationalClass::integral(hf[i].klass))
        .collect();
    assert!(verify_sequence(&classes).passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    // expansion only adds curves, and the curve set stays a valid -2 configuration
    #[test]
    fn expansion_is_monotone(r in 0usize..4) {
        let (s, g) = bundled::case_145();
        let a = expand_orbit(&s, &g, r).unwrap();
        let b = expand_orbit(&s, &g, r + 1).unwrap();
        prop_assert_eq!(&b.curves()[..a.len()], a.curves());
        for (i, u) in b.curves().iter().enumerate() {
            prop_assert_eq!(u.square(), -2);
            for v in &b.curves()[i + 1..] {
                prop_assert!(dot(u, v) >= 0);
            }
        }
    }
}
