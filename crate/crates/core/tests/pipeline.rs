//! End-to-end: JSON instance text through parsing, cohomology, and the
//! verification entry points.

use num_bigint::BigInt;

use sheafcoh::cohom::cohomology_table;
use sheafcoh::instance::{builtin, builtin_names, random_instance, InstanceFile};
use sheafcoh::uct;

#[test]
fn hand_written_instance_end_to_end() {
    // three-element chain with stalks Z/4 -> Z/4 -> Z/2, A = Z/2
    let text = r#"{
        "poset": {
            "elements": ["a", "b", "c"],
            "relations": [[0, 1], [1, 2]]
        },
        "sheaf": {
            "stalks": [
                {"invariant_factors": [4]},
                {"invariant_factors": [4]},
                {"invariant_factors": [2]}
            ],
            "restrictions": [
                {"from": 0, "to": 1, "matrix": [[1]]},
                {"from": 1, "to": 2, "matrix": [[1]]}
            ]
        },
        "coefficients": {"invariant_factors": [2]}
    }"#;
    let file = InstanceFile::parse(text).unwrap();
    let inst = file.build().unwrap();
    // a chain has a minimum, so only H^0 survives: the bottom stalk
    let table = cohomology_table(&inst.poset, &inst.sheaf);
    let h0: &[BigInt] = &table.iter().find(|(r, _)| *r == 0).unwrap().1;
    assert_eq!(h0, &[BigInt::from(4)]);
    assert!(table.iter().all(|(r, fs)| *r == 0 || fs.is_empty()));

    assert!(uct::verify_theorem1_with_coefficients(&inst.poset, &inst.sheaf, &inst.coefficients, "chain").passed());
    assert!(uct::triangle_les(&inst.poset, &inst.sheaf, &inst.coefficients, "chain").report.passed());
    assert!(uct::classical_uct(&inst.poset, &inst.sheaf, &inst.coefficients, "chain").report.passed());
}

#[test]
fn roundtrip_identity_at_scale() {
    for name in builtin_names() {
        let file = builtin(name).unwrap();
        assert_eq!(InstanceFile::parse(&file.to_json()).unwrap(), file);
    }
    for seed in 0..1000u64 {
        let file = random_instance(seed, 6);
        assert_eq!(InstanceFile::parse(&file.to_json()).unwrap(), file, "seed {seed}");
    }
}

#[test]
fn builtin_fixtures_verify_clean() {
    for name in ["pc4", "ss6", "pc4-z4"] {
        let inst = builtin(name).unwrap().build().unwrap();
        let c = inst.perfect.as_ref().unwrap();
        assert!(uct::verify_theorem1(&inst.poset, &inst.sheaf, c, name).passed(), "{name}");
        let map = inst.map.as_ref().unwrap();
        assert!(uct::projection_check(map, &inst.sheaf, c, name).passed(), "{name}");
    }
}
