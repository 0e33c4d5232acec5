//! The central claim, tested end to end: the twin-beam/heterodyne channel
//! and the squeezed-pair/homodyne channel produce identical outcome
//! statistics at every stage, with the 50-50 frequency conversion as the
//! dictionary between them.

use proptest::prelude::*;
use twinbeam_core::evolution::{conjugate_generator, evolve_state, PhysicalGenerator};
use twinbeam_core::fock::{
    heterodyne_pdf_projected, lindblad_evolve_fock, suggested_steps, twin_beam_fock_displaced,
    FockState, HeterodyneProjector,
};
use twinbeam_core::gaussian::{squeezed_pair_state, twin_beam_state, TwinBeamSpec};
use twinbeam_core::measurement::{
    equivalence_chain_deviation, heterodyne_distribution, homodyne_distribution,
    product_to_heterodyne,
};
use twinbeam_core::{Mode, Quadrature, C64};

fn generator_set() -> Vec<PhysicalGenerator> {
    vec![
        PhysicalGenerator::loss(1.0, 0.0).unwrap(),
        PhysicalGenerator::loss_with_pia(1.0, 0.0, 0.5).unwrap(),
        PhysicalGenerator::gain(1.0, 0.0).unwrap(),
    ]
}

#[test]
fn chain_holds_on_acceptance_grid() {
    let lambdas = [0.0, 0.3, 0.6];
    let symbols = [C64::new(0.0, 0.0), C64::new(1.0, 1.0), C64::new(2.0, 0.0)];
    let times = [0.0, 0.5, 2.0];
    let mut worst = 0.0_f64;
    for &lambda in &lambdas {
        for &z in &symbols {
            for gen in &generator_set() {
                for &t in &times {
                    let dev = equivalence_chain_deviation(lambda, z, gen, t).unwrap();
                    worst = worst.max(dev.max());
                }
            }
        }
    }
    assert!(worst < 1e-9, "max chain deviation {worst}");
}

#[test]
fn homodyne_product_reproduces_evolved_heterodyne_pointwise() {
    // Route one in the number basis (twin beam, PIA-compensated loss,
    // heterodyne pdf) against route two computed analytically from the
    // squeezed pair, the conjugated generator, and the homodyne product.
    let n_max = 20;
    let lambda = 0.4;
    let z = C64::new(1.0, -0.5);
    let gen = PhysicalGenerator::loss_with_pia(1.0, 0.0, 0.5).unwrap();
    let t = 0.4;

    let fock0 = FockState::Pure(
        twin_beam_fock_displaced(&TwinBeamSpec::symmetric(lambda, z).unwrap(), n_max).unwrap(),
    );
    let steps = suggested_steps(&gen, t, n_max);
    let evolved = FockState::Mixed(lindblad_evolve_fock(&fock0, &gen, t, steps).unwrap());
    let proj = HeterodyneProjector::new(n_max);

    let pair0 = squeezed_pair_state(lambda, z).unwrap();
    let pair_t = evolve_state(&pair0, &conjugate_generator(&gen).unwrap(), t).unwrap();
    let px = homodyne_distribution(&pair_t, Mode::B, Quadrature::X);
    let py = homodyne_distribution(&pair_t, Mode::A, Quadrature::Y);
    let mapped = product_to_heterodyne(&px, &py).unwrap();

    for i in 0..7 {
        for j in 0..7 {
            let w = C64::new(-1.2 + 0.4 * i as f64, -1.2 + 0.4 * j as f64) + z;
            let (p, _) = heterodyne_pdf_projected(&proj, &evolved, w);
            let q = mapped.pdf(w);
            assert!((p - q).abs() < 1e-6, "pdf mismatch at {w}: {p} vs {q}");
        }
    }
}

#[test]
fn asymmetric_split_does_not_change_the_chain_output() {
    // The heterodyne side is split-independent, so routing v ≠ w through
    // the channel leaves the measured statistics identical.
    let gen = PhysicalGenerator::loss(1.0, 0.2).unwrap();
    let t = 0.7;
    let sym = twin_beam_state(&TwinBeamSpec::new(0.5, C64::new(1.0, 0.5), C64::new(1.0, 0.5)).unwrap()).unwrap();
    let asym = twin_beam_state(&TwinBeamSpec::new(0.5, C64::new(2.0, 1.0), C64::new(0.0, 0.0)).unwrap()).unwrap();
    let het_sym = heterodyne_distribution(&evolve_state(&sym, &gen, t).unwrap());
    let het_asym = heterodyne_distribution(&evolve_state(&asym, &gen, t).unwrap());
    assert!((het_sym.mean - het_asym.mean).norm() < 1e-12);
    assert!((het_sym.cov2 - het_asym.cov2).abs().max() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_holds_for_random_parameters(
        lambda in 0.0..0.75f64,
        re in -2.0..2.0f64,
        im in -2.0..2.0f64,
        gamma in 0.0..1.5f64,
        nbar in 0.0..0.8f64,
        k in -0.6..0.6f64,
        t in 0.0..2.0f64,
    ) {
        let gen = PhysicalGenerator::loss_with_pia(gamma, nbar, k).unwrap();
        let dev = equivalence_chain_deviation(lambda, C64::new(re, im), &gen, t).unwrap();
        prop_assert!(dev.max() < 1e-10, "chain deviation {:?}", dev);
    }

    #[test]
    fn heterodyne_variance_is_split_independent(
        lambda in 0.0..0.95f64,
        vr in -2.0..2.0f64,
        vi in -2.0..2.0f64,
        wr in -2.0..2.0f64,
        wi in -2.0..2.0f64,
    ) {
        let st = twin_beam_state(
            &TwinBeamSpec::new(lambda, C64::new(vr, vi), C64::new(wr, wi)).unwrap(),
        ).unwrap();
        let het = heterodyne_distribution(&st);
        let expect = (1.0 - lambda) / (1.0 + lambda);
        prop_assert!(het.is_isotropic(1e-12));
        prop_assert!((het.delta_squared() - expect).abs() < 1e-12);
        // Mean is the encoded symbol regardless of the split.
        let z = C64::new(vr + wr, vi + wi);
        prop_assert!((het.mean - z).norm() < 1e-12);
    }
}
