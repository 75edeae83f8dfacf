//! Sweeps over the subalgebra normal forms: exhaustiveness of the
//! two-dimensional classification, invariance of families and parameters
//! under stabilizer conjugation, conjugation soundness, and certificate
//! completeness of the end-to-end classifier.

use rand::Rng;

use e2class::samples;
use e2class::subalgebra::{normal_form_generators, normalize};
use e2class::{
    catalog, classify, label_with_defaults, representative, validate_subalgebra, verify, EtaType,
    Family, Mat2, Subspace, Sym2, Tolerances,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Random element of the connected stabilizer of sigma_eta, optionally times
/// the sign element that the classification is allowed to use.
fn stabilizer_element(eta: EtaType, rng: &mut rand_chacha::ChaCha8Rng, signs: bool) -> Mat2 {
    let base = match eta {
        EtaType::Pos => Mat2::rotation(rng.gen_range(0.0..std::f64::consts::TAU))
            .scale(rng.gen_range(-1.5f64..1.5).exp()),
        EtaType::Null => Mat2::new(
            rng.gen_range(-1.5f64..1.5).exp(),
            0.0,
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-1.5f64..1.5).exp(),
        ),
        EtaType::Neg => Mat2::diag(
            rng.gen_range(-1.5f64..1.5).exp(),
            rng.gen_range(-1.5f64..1.5).exp(),
        ),
    };
    if signs && rng.gen_bool(0.5) {
        let sign = match eta {
            EtaType::Pos | EtaType::Null => Mat2::lambda_reflect(),
            EtaType::Neg => Mat2::rotation(std::f64::consts::FRAC_PI_2),
        };
        sign * base
    } else {
        base
    }
}

#[test]
fn two_dimensional_h0_classification_is_exhaustive() {
    let t = tol();
    let mut rng = samples::rng(51);
    let (i, x, y) = (Mat2::identity(), Mat2::x_gen(), Mat2::y_gen());
    let mut hits = std::collections::HashMap::new();
    for trial in 0..10_000 {
        // Random bracket-closed plane: either contains X or contains I; the
        // measure-zero span{I, X} cell is seeded explicitly.
        let gens = match trial % 10 {
            0 => [i, x],
            n if n < 5 => {
                let a = rng.gen_range(-2.0..2.0);
                let c = rng.gen_range(-2.0..2.0);
                [x, i.scale(a) + y.scale(c)]
            }
            _ => {
                let b = rng.gen_range(-2.0..2.0);
                let c = rng.gen_range(-2.0..2.0);
                [i, x.scale(b) + y.scale(c)]
            }
        };
        // Random basis mixing plus a random inner conjugation keep the
        // sample inside the lower-triangular algebra.
        let m = rng.gen_range(-2.0..2.0);
        let mixed = [
            gens[0] + gens[1].scale(m),
            gens[1].scale(rng.gen_range(0.5..2.0)),
        ];
        let h = stabilizer_element(EtaType::Null, &mut rng, true);
        let alg = match validate_subalgebra(&mixed, &t) {
            Ok(a) if a.dim() == 2 => a.conjugate(&h, &t).unwrap(),
            _ => continue,
        };
        let nf =
            normalize(&alg, EtaType::Null, &t).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        assert!(
            matches!(
                nf.family,
                Family::PlaneLambda | Family::PlaneIY | Family::PlaneIX
            ),
            "trial {trial} produced {:?}",
            nf.family
        );
        *hits.entry(nf.family.as_str()).or_insert(0usize) += 1;
        assert!(
            nf.residual < 1e-8,
            "trial {trial}: residual {}",
            nf.residual
        );
    }
    // All three families actually occur in the sample.
    assert!(hits.len() == 3, "families seen: {hits:?}");
}

#[test]
fn families_and_parameters_survive_stabilizer_conjugation() {
    let t = tol();
    let mut rng = samples::rng(53);
    type Case = (EtaType, Family, Option<f64>);
    let mut cases: Vec<Case> = Vec::new();
    for _ in 0..60 {
        cases.push((EtaType::Pos, Family::RotDil, Some(rng.gen_range(0.0..2.5))));
        cases.push((
            EtaType::Null,
            Family::DiagLambda,
            Some(rng.gen_range(-2.0..2.0)),
        ));
        cases.push((
            EtaType::Null,
            Family::PlaneLambda,
            Some(rng.gen_range(-2.0..2.0)),
        ));
        cases.push((
            EtaType::Neg,
            Family::DiagBeta,
            Some(rng.gen_range(-1.0..1.0)),
        ));
    }
    cases.push((EtaType::Pos, Family::So2, None));
    cases.push((EtaType::Pos, Family::FullH1, None));
    cases.push((EtaType::Null, Family::Shear, None));
    cases.push((EtaType::Null, Family::DilShear, None));
    cases.push((EtaType::Null, Family::Scalar, None));
    cases.push((EtaType::Null, Family::PlaneIY, None));
    cases.push((EtaType::Null, Family::PlaneIX, None));
    cases.push((EtaType::Null, Family::FullH0, None));
    cases.push((EtaType::Neg, Family::FullHneg1, None));

    for (eta, family, param) in cases {
        let gens = normal_form_generators(family, param).unwrap();
        let alg = validate_subalgebra(&gens, &t).unwrap();
        let h = stabilizer_element(eta, &mut rng, true);
        let moved = alg.conjugate(&h, &t).unwrap();
        let nf =
            normalize(&moved, eta, &t).unwrap_or_else(|e| panic!("{family:?} under {h:?}: {e}"));
        assert_eq!(nf.family, family, "conjugation changed the family");
        match (param, nf.param) {
            (Some(p), Some(q)) => assert!(
                (p - q).abs() <= t.param_tol * (1.0 + p.abs()),
                "{family:?}: {p} became {q}"
            ),
            (None, None) => {}
            other => panic!("{family:?}: parameter mismatch {other:?}"),
        }
        assert!(nf.residual < 1e-8);
    }
}

#[test]
fn normalization_conjugators_map_span_onto_normal_form() {
    let t = tol();
    let mut rng = samples::rng(57);
    for trial in 0..1000 {
        // Random family instance, mangled by a random stabilizer element.
        let (eta, family, param): (EtaType, Family, Option<f64>) = match trial % 5 {
            0 => (EtaType::Pos, Family::RotDil, Some(rng.gen_range(0.0..2.0))),
            1 => (
                EtaType::Null,
                Family::DiagLambda,
                Some(rng.gen_range(-2.0..2.0)),
            ),
            2 => (
                EtaType::Null,
                Family::PlaneLambda,
                Some(rng.gen_range(-2.0..2.0)),
            ),
            3 => (
                EtaType::Neg,
                Family::DiagBeta,
                Some(rng.gen_range(-1.0..1.0)),
            ),
            _ => (EtaType::Null, Family::PlaneIY, None),
        };
        let alg = validate_subalgebra(&normal_form_generators(family, param).unwrap(), &t).unwrap();
        let moved = alg
            .conjugate(&stabilizer_element(eta, &mut rng, true), &t)
            .unwrap();
        let nf = normalize(&moved, eta, &t).unwrap();
        let target =
            validate_subalgebra(&normal_form_generators(nf.family, nf.param).unwrap(), &t).unwrap();
        let image = moved.conjugate(&nf.conjugator, &t).unwrap();
        assert!(
            image.distance(&target) < 1e-8,
            "trial {trial}: projector distance {}",
            image.distance(&target)
        );
    }
}

#[test]
fn duality_consistency_of_complements_under_the_action() {
    // ortho_complement(dagger(g, Sigma)) = dagger(tg^-1, Sigma-perp) as spans.
    let t = tol();
    let mut rng = samples::rng(59);
    for _ in 0..500 {
        let sigma = samples::sym2(&mut rng, 2.0);
        if sigma.norm() < 0.1 {
            continue;
        }
        let line = Subspace::line(&sigma, &t).unwrap();
        let g = samples::conjugator(&mut rng, 1e2);
        let lhs = line
            .apply_dagger(&g, &t)
            .unwrap()
            .ortho_complement(&t)
            .unwrap();
        let dual_g = g.inverse(t.det_floor).unwrap().transpose();
        let rhs = line
            .ortho_complement(&t)
            .unwrap()
            .apply_dagger(&dual_g, &t)
            .unwrap();
        assert!(lhs.distance(&rhs) < 1e-9, "distance {}", lhs.distance(&rhs));
    }
}

#[test]
fn certificates_verify_for_random_valid_specs() {
    let t = tol();
    let mut rng = samples::rng(61);
    for trial in 0..1000 {
        let entry = &catalog()[trial % catalog().len()];
        let mut lab = label_with_defaults(entry);
        if let Some(p) = &entry.param {
            let v = match p.name {
                "alpha" => rng.gen_range(0.0..2.0),
                "beta" => rng.gen_range(-1.0..1.0),
                _ => rng.gen_range(-2.0..2.0),
            };
            lab.params.insert(p.name.to_string(), v);
        }
        let spec = representative(&lab, &t)
            .unwrap()
            .conjugate(&samples::conjugator(&mut rng, 1e2), &t)
            .unwrap();
        let (got, cert) = classify(&spec, &t).unwrap();
        let report = verify(&spec, &got, &cert, &t);
        assert!(report.pass, "trial {trial} ({}): {}", got.id, report.detail);
    }
}

#[test]
fn sampled_group_elements_close_under_the_product_law_at_scale() {
    let t = tol();
    let lab = label_with_defaults(
        catalog()
            .iter()
            .find(|e| e.id == e2class::LabelId::new(4, 2))
            .unwrap(),
    );
    let spec = representative(&lab, &t).unwrap();
    let samples = e2class::sample_group(&lab, 1001, 13, &t).unwrap();
    let residual = e2class::classify::closure_residual(&spec, &samples, &t);
    assert!(residual < 1e-9, "closure residual {residual}");
}

#[test]
fn sigma_full_space_complement_is_rejected() {
    let t = tol();
    let full = Subspace::new(
        &[Sym2::identity(), Sym2::sigma_null(), Sym2::sigma_neg()],
        &t,
    )
    .unwrap();
    assert!(full.ortho_complement(&t).is_err());
}

#[test]
fn boundary_parameters_round_trip_under_conjugation() {
    let t = tol();
    let mut rng = samples::rng(67);
    let cases = [
        (e2class::LabelId::new(2, 1), "alpha", 0.0),
        (e2class::LabelId::new(2, 7), "beta", 1.0),
        (e2class::LabelId::new(2, 7), "beta", -1.0),
        (e2class::LabelId::new(3, 12), "beta", 1.0),
        (e2class::LabelId::new(3, 2), "alpha", 0.0),
        (e2class::LabelId::new(2, 3), "lambda", 0.0),
    ];
    for (id, name, value) in cases {
        let entry = catalog().iter().find(|e| e.id == id).unwrap();
        let mut lab = label_with_defaults(entry);
        lab.params.insert(name.to_string(), value);
        let spec = representative(&lab, &t).unwrap();
        for _ in 0..20 {
            let moved = spec
                .conjugate(&samples::conjugator(&mut rng, 1e2), &t)
                .unwrap();
            let (got, cert) = classify(&moved, &t).unwrap();
            assert_eq!(got.id, id, "{id} at {name}={value}");
            let w = got.params.get(name).copied().unwrap();
            assert!((w - value).abs() < 1e-6, "{id}: {name} {value} -> {w}");
            assert!(cert.residual_sigma < 1e-8 && cert.residual_h < 1e-8);
        }
    }
}
