#![no_main]
//! Byte layout: groupoid selector, level, then one morphism id and one
//! `numerator, denominator` pair per simplex entry.
use inertia_core::catalog;
use inertia_core::config::{decode_phi, encode_phi, realize_point, SimplexPoint};
use libfuzzer_sys::fuzz_target;
use num_rational::BigRational;

const GROUPOIDS: [&str; 3] = ["Z2", "S3", "S3_on_3"];

fuzz_target!(|data: &[u8]| {
    let [which, level, rest @ ..] = data else { return };
    let g = catalog::groupoid(GROUPOIDS[*which as usize % GROUPOIDS.len()]).unwrap();
    let len = *level as usize % 5;
    let (ids, coords) = rest.split_at(len.min(rest.len()));
    let simplex: Vec<usize> = ids.iter().map(|&b| b as usize % (g.num_morphisms() + 1)).collect();
    let coords: Vec<BigRational> = coords
        .chunks_exact(2)
        .take(len)
        .filter(|c| c[1] != 0)
        .map(|c| BigRational::new(c[0].into(), c[1].into()))
        .collect();
    let p = SimplexPoint { simplex, coords };
    if let Ok(c) = decode_phi(&g, &p) {
        assert!(c.validate().is_empty());
        assert_eq!(encode_phi(&c).unwrap(), p);
    }
    if let Ok(c) = realize_point(&g, &p) {
        assert!(c.validate().is_empty());
    }
});
