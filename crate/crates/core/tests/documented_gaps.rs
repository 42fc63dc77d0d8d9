//! Concrete instances where a stated property does not hold for the
//! definitions as implemented. Each test pins the instance so a change in
//! behaviour is noticed.

use ot_core::cnf::he_iter;
use ot_core::syntax::{parse_exp, parse_seq};
use ot_core::Notation;
use std::cmp::Ordering;

/// An irreducible `ν⃗` whose first entry lies below `he^{(0)}(ξ) = ξ` but
/// at or above the head summand of `ξ` need not satisfy `ν⃗ < ξ`.
#[test]
fn irreducible_below_head_needs_head_summand() {
    let o = Notation::with_n(4).unwrap();
    let nu = parse_seq("[L^(K)*(K), 1]", 4).unwrap();
    let xi = parse_exp("L^(K)*(K)+L^(1)*(K)").unwrap();
    assert!(o.irreducible(nu.entries()));
    let h = he_iter(&xi, 0).unwrap();
    assert_eq!(h, xi);
    assert_eq!(o.cmp_exp(&nu.entries()[0], &h), Ordering::Less);
    assert!(!o.seq_lt(nu.entries(), &xi));

    let below_head = parse_seq("[L^(K)*(1), 1]", 4).unwrap();
    assert!(o.seq_lt(below_head.entries(), &xi));
}

/// For N = 5 the extension rule at the last index can leave a zero
/// between two nonzero entries.
#[test]
fn zero_gap_in_sd_for_n5() {
    let o = Notation::with_n(5).unwrap();
    let xi = parse_seq("[L^(L^(K)*(K))*(K),0,1]", 5).unwrap();
    let d = o.in_sd(xi.entries()).expect("derivable");
    assert_eq!(d.replay(&o).as_deref(), Some(xi.entries()));
    assert!(!o.sd_necessary_conditions(xi.entries()).all());
}
