use std::collections::BTreeMap;

use koszul_core::corpus;
use koszul_core::graded::{build_pair, check_prekoszul, GradedCoring};
use koszul_core::koszul::{build_slice, koszul_verdict, ComplexFlavor};
use koszul_core::{Error, Rationals};

/// `k[x,y,z]` with `Δ^{1,1}` negated on the first basis vector of `C²`.
fn sign_corrupted(n: usize) -> koszul_core::graded::PreKoszulPair<Rationals> {
    let f = Rationals;
    let pair = build_pair(&corpus::polynomial(&f, 3), n).unwrap();
    let mut comult: BTreeMap<_, _> = pair.coring.comult().clone();
    let d11 = comult.get_mut(&(1, 1)).unwrap();
    for r in 0..d11.rows() {
        let v = d11.get(r, 0).clone();
        d11.set(r, 0, -v);
    }
    let c = GradedCoring::from_parts(&f, pair.coring.dims().to_vec(), comult).unwrap();
    pair.with_coring(c)
}

#[test]
fn sign_corrupted_comultiplication_breaks_square_zero() {
    let bad = sign_corrupted(4);
    assert!(check_prekoszul(&bad));
    assert!(!bad.coring.check_coassociativity());
    let mut refused = Vec::new();
    for fl in ComplexFlavor::ALL {
        for m in 0..=4 {
            if let Err(e) = build_slice(&bad, fl, m, true) {
                refused.push((fl, m, e));
            }
        }
    }
    assert!(!refused.is_empty());
    for (_, _, e) in &refused {
        assert!(matches!(e, Error::NotAComplex { .. }), "{e}");
    }
    println!("{:?}", refused.iter().map(|(f, m, _)| (f.key(), *m)).collect::<Vec<_>>());
}

#[test]
fn truncated_coring_witness_is_two_everywhere() {
    let f = Rationals;
    for p in [corpus::polynomial(&f, 2), corpus::polynomial(&f, 3), corpus::exterior(&f, 2)] {
        let pair = build_pair(&p, 4).unwrap();
        let bad = pair.with_coring(pair.coring.truncate_components(1));
        let v = koszul_verdict(&bad, 4).unwrap();
        assert_eq!(v.witness(), Some(2));
        assert_eq!(v.table[2], [false; 6]);
    }
}
