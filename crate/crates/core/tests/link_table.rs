use num_bigint::BigInt;
use num_rational::BigRational;
use quatbraid::braid::{invariant, phase_magnitude};
use quatbraid::cover::{double_cover_consistent, triple_cover_dim, triple_cover_order};
use quatbraid::links::bundled_link_table;

#[test]
fn magnitude_matches_triple_cover() {
    for entry in bundled_link_table() {
        let value = invariant(&entry.braid().unwrap()).unwrap();
        let v = entry.seifert.as_ref().unwrap();
        let dim = triple_cover_dim(v);
        let pm = phase_magnitude(&value).unwrap_or_else(|| panic!("{}: {value} is not ±2^k up to phase", entry.name));
        println!("{:<13} I = {:<12} dim = {dim} |H1| = {}", entry.name, value.to_string(), triple_cover_order(v));
        assert_eq!(pm.log2_norm_sq as usize, dim, "{}", entry.name);
        assert_eq!(value.norm_sq(), BigRational::from_integer(BigInt::from(1u64 << dim)));
        assert!(double_cover_consistent(v), "{}", entry.name);
    }
}
