use cfnet_core::protocol::{run_ghz_transmission, run_transmission, PhotonInput, ProtocolConfig};
use cfnet_core::{BellOutcome, CfGateModel};

#[test]
fn transmission_outcomes_over_seeds() {
    let mut counts = [0u32; 4];
    for seed in 0..400 {
        let cfg = ProtocolConfig {
            seed,
            ..Default::default()
        };
        let r = run_transmission(&cfg).unwrap();
        assert!(r.counterfactual_structure_ok);
        assert!((r.photon_concurrence.unwrap() - 1.0).abs() < 1e-10);
        counts[r.electron_outcome.unwrap().index()] += 1;
    }
    assert_eq!(
        counts[BellOutcome::PhiPlus.index()] + counts[BellOutcome::PhiMinus.index()],
        0
    );
    assert!(counts[0] > 150 && counts[1] > 150);
}

#[test]
fn lossy_gates_abort_and_keep_structure() {
    let cfg = ProtocolConfig {
        photons: [PhotonInput::V, PhotonInput::H],
        gate_model: CfGateModel::new(0.5).unwrap(),
        seed: 0,
    };
    let mut aborted = 0;
    for seed in 0..200 {
        let r = run_transmission(&ProtocolConfig { seed, ..cfg }).unwrap();
        assert!(r.counterfactual_structure_ok);
        aborted += u32::from(r.aborted);
    }
    // 1 - 0.25 expected
    assert!((110..190).contains(&aborted), "{aborted}");
}

#[test]
fn ghz_runs_for_every_party_count() {
    for k in 2..=5 {
        let r = run_ghz_transmission(
            k,
            &ProtocolConfig {
                seed: k as u64,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.counterfactual_structure_ok);
        assert!((r.corrected_fidelity.unwrap() - 1.0).abs() < 1e-9, "k = {k}");
    }
}
