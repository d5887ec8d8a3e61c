use socr_core::catalog::five_dimensional_slices;
use socr_core::classify::Reason;
use socr_core::lift::{find_singular_complement, lift_slice, lift_slice_with, LiftOptions};
use socr_core::linalg::eigen_sym3;
use socr_core::spectra::{affine_soc_rep, agreement, Lmi, SpectraOutcome};
use socr_core::verify::{verify, VerifyOptions};
use socr_core::{classify_slice, rng, Provenance, Subspace, SymMat3};

fn quick() -> VerifyOptions {
    VerifyOptions { forward_samples: 1000, backward_samples: 100, forward_tol: 1e-8, ..VerifyOptions::default() }
}

#[test]
fn table_verdicts() {
    for row in five_dimensional_slices() {
        let v = classify_slice(&row.subspace()).unwrap();
        assert_eq!(v.socr, row.expected_socr, "{}", row.name);
        assert_eq!(v.dim_s, 5);
    }
}

#[test]
fn every_table_slice_that_is_representable_lifts() {
    for row in five_dimensional_slices().into_iter().filter(|r| r.expected_socr) {
        let l = row.subspace();
        let cert = lift_slice(&l).unwrap();
        assert!(verify(&cert, &l, &quick()).passed);
    }
}

#[test]
fn lower_right_face_gets_a_face_embedding() {
    let l = Subspace::from_matrices(&[SymMat3::unit(0, 0)]).complement();
    let v = classify_slice(&l).unwrap();
    assert_eq!((v.socr, v.reason, v.dim_s), (true, Reason::DimAtMost4, 3));
    let cert = lift_slice(&l).unwrap();
    assert_eq!(cert.provenance, Provenance::FaceEmbedding);
    assert!(verify(&cert, &l, &quick()).passed);
}

#[test]
fn random_forced_singular_normals_lift() {
    let mut r = rng::stream(17, 0);
    for _ in 0..20 {
        let b = rng::forced_singular(&mut r, 1.5, -0.7);
        let l = Subspace::from_matrices(&[b]).complement();
        let v = classify_slice(&l).unwrap();
        assert!(v.socr);
        let cert = lift_slice_with(&l, &LiftOptions { verify: None }).unwrap();
        let report = verify(&cert, &l, &quick());
        assert!(report.passed, "{}", report.summary());
    }
}

#[test]
fn singular_complements_of_subspaces_through_identity() {
    let mut r = rng::stream(23, 0);
    for k in 0..40 {
        let mut gens = vec![SymMat3::identity()];
        gens.extend((0..k % 4).map(|_| rng::gaussian_sym(&mut r)));
        let l = Subspace::from_matrices(&gens);
        let b = find_singular_complement(&l).unwrap();
        let ev = eigen_sym3(&b).values;
        assert!(ev[1].abs() <= 1e-10 && ev[0] < -1e-8 && ev[2] > 1e-8);
        assert!(l.basis().iter().all(|a| a.dot(&b.svec()).abs() <= 1e-12));
    }
}

#[test]
fn eliptope_representation_agrees_with_the_lmi() {
    let lmi = Lmi::eliptope();
    let SpectraOutcome::Represented(rep) = affine_soc_rep(&lmi).unwrap() else {
        panic!("eliptope should be representable")
    };
    let stats = agreement(&rep, &lmi, 3000, 1, 1.2);
    assert!(stats.passed, "{stats:?}");
}

#[test]
fn spectrahedron_over_sum_normal_slice_is_inapplicable() {
    let row = &five_dimensional_slices()[1];
    let gens = row.subspace().basis_matrices();
    let lmi = Lmi::new(gens[..4].to_vec(), gens[4]);
    assert!(matches!(affine_soc_rep(&lmi).unwrap(), SpectraOutcome::Inapplicable { .. }));
}
