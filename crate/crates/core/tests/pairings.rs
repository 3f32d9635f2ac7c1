use hnc_core::fredholm::{
    bott_projector, dirac_even_pairing, lattice_chern, odd_pairing, AlgebraMatrix, KClass, ModuleName,
};
use hnc_core::algebra::AlgebraElement;

#[test]
fn dirac_trace_agrees_with_lattice_chern() {
    for mass in [1.0, -1.0, 1.5, 3.0, -3.0] {
        let field = bott_projector(32, mass).unwrap();
        let chern = lattice_chern(&field).unwrap();
        let dirac = dirac_even_pairing(&field, 12, 4, 0.1).unwrap();
        assert_eq!(dirac.value, chern.value, "mass {mass}: {dirac:?} vs {chern:?}");
        assert!(dirac.tail_mass < 1e-8);
    }
}

#[test]
fn bott_field_pairs_to_one() {
    let field = bott_projector(16, 1.0).unwrap();
    assert_eq!(lattice_chern(&field).unwrap().value, 1);
    let d = dirac_even_pairing(&field, 24, 4, 0.1).unwrap();
    assert_eq!(d.value, 1);
    assert!(d.spread < 1e-3, "{d:?}");
}

#[test]
fn odd_indices_are_stable_for_every_generator() {
    let expected = [
        (ModuleName::Z1, [1, 0, 0]),
        (ModuleName::Z1prime, [0, 1, 1]),
    ];
    for (module, values) in expected {
        for (class, want) in KClass::ODD.iter().zip(values) {
            let r = odd_pairing(module, &class.quotient_image(), &[32, 64, 128], 1e-8).unwrap();
            assert_eq!(r.value, want, "{module} on {}", class.label());
            assert!(r.index.counts.iter().all(|c| c.kernel as i64 - c.cokernel as i64 == want));
        }
    }
}

#[test]
fn index_is_additive_under_products() {
    let v = AlgebraElement::v();
    let u = AlgebraElement::u();
    for (x, want) in [(v.mul(&v), 2), (v.star().mul(&v.star()).mul(&v.star()), -3), (u.mul(&v), 1)] {
        let r = odd_pairing(ModuleName::Z1prime, &AlgebraMatrix::scalar(x), &[32, 48, 64], 1e-8).unwrap();
        assert_eq!(r.value, want);
    }
}
