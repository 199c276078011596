mod support;

use hbtfisher_core::fisher::fisher_information;
use hbtfisher_core::{DetectionModel, EventSet, ExperimentConfig, GaussianPsfPair, Routing};

fn quadrature_fisher(d: f64, eta: f64, set: EventSet) -> f64 {
    let cfg = ExperimentConfig::new(
        GaussianPsfPair::new(1.0, d).unwrap(),
        DetectionModel::new(eta, set, Routing::PaperModel).unwrap(),
        1,
    )
    .unwrap();
    fisher_information(&cfg).unwrap().fisher
}

#[test]
fn oracle_intensities_agree_with_library() {
    use hbtfisher_core::event::event_intensities;
    for (x, d, eta) in [(0.0, 0.0, 1.0), (0.3, 1.2, 0.4), (-1.0, 2.0, 0.9)] {
        let lib = event_intensities(
            x,
            &GaussianPsfPair::new(1.0, d).unwrap(),
            &DetectionModel::new(eta, EventSet::ABG, Routing::PaperModel).unwrap(),
        )
        .unwrap();
        let o = support::paper_intensities(x, d, 1.0, eta);
        assert!((lib.p_alpha - o[0]).abs() < 1e-15 && (lib.p_gamma - o[2]).abs() < 1e-15);
    }
}

#[test]
fn well_separated_single_clicks() {
    let oracle = support::binned_fisher(10.0, 1.0, 1.0, false, 1.0, 4000, 1e-4);
    let quad = quadrature_fisher(10.0, 1.0, EventSet::AB);
    assert!((oracle - 1.0).abs() < 0.02, "{oracle}");
    assert!(((quad - oracle) / oracle).abs() < 0.02, "{quad} vs {oracle}");
}

#[test]
fn single_clicks_match_oracle() {
    for (d, eta) in [(1.0, 1.0), (0.5, 0.7), (2.0, 0.4)] {
        let oracle = support::binned_fisher(d, 1.0, eta, false, 1.0, 4000, 1e-4);
        let quad = quadrature_fisher(d, eta, EventSet::AB);
        assert!(((quad - oracle) / oracle).abs() < 5e-3, "d={d} eta={eta}: {quad} vs {oracle}");
    }
}
