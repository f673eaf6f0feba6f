use soestim_core::harness::{build_soe_design, simulate, Figure, ScenarioConfig, Table};
use soestim_core::Error;

fn small(figure: Figure) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::preset(figure);
    cfg.trials = 12;
    cfg.mos_trials = 1000;
    cfg.snr_stop_db = cfg.snr_start_db + 4.0 * cfg.snr_step_db;
    cfg
}

fn values(table: &Table) -> Vec<(String, Vec<f64>)> {
    table
        .columns()
        .iter()
        .filter(|c| c.as_str() != "SNR")
        .map(|c| (c.clone(), table.column(c).unwrap()))
        .collect()
}

#[test]
fn emitted_values_stay_in_range() {
    for number in 2..=6 {
        let figure = Figure::from_number(number).unwrap();
        let cfg = small(figure);
        let max_order = match figure {
            Figure::Soe | Figure::GuidedOmp => build_soe_design(&cfg).unwrap().scheme().max_order(),
            _ => 0,
        };
        let out = simulate(figure, &cfg, Some(1)).unwrap();
        assert_eq!(out.table.snrs(), cfg.snr_grid());
        for (name, col) in values(&out.table) {
            assert_eq!(col.len(), 5);
            for v in col {
                if name.ends_with("_succ") || name.ends_with("_supp") {
                    assert!((0.0..=1.0).contains(&v), "{name} = {v}");
                } else if name == "soe_mean" {
                    assert!(v >= 0.0 && v <= max_order as f64, "{name} = {v}");
                } else {
                    assert!(v >= 0.0 && v.is_finite(), "{name} = {v}");
                }
            }
        }
    }
}

#[test]
fn headers_follow_figure() {
    let cases = [
        (2, "SNR,soe_mean,soe_succ"),
        (3, "SNR,omp_soe_MSE,omp_gauss_MSE_max1,omp_gauss_MSE_max2,soe_succ"),
        (4, "SNR,omp_nosoe_MSE,omp_gauss_MSE_true"),
        (
            5,
            "SNR,vand_rnd_supp,vand_reg_supp,vand_opt_supp,rnd_supp,vand_rnd_MSE,vand_reg_MSE,vand_opt_MSE,rnd_MSE",
        ),
    ];
    for (number, header) in cases {
        let figure = Figure::from_number(number).unwrap();
        let csv = simulate(figure, &small(figure), Some(1)).unwrap().table.to_csv();
        assert_eq!(csv.lines().next(), Some(header));
    }
}

#[test]
fn seed_changes_output_and_repeats_do_not() {
    let cfg = small(Figure::Soe);
    let a = simulate(Figure::Soe, &cfg, Some(2)).unwrap().table.to_csv();
    let b = simulate(Figure::Soe, &cfg, Some(1)).unwrap().table.to_csv();
    assert_eq!(a, b);
    let mut other = cfg.clone();
    other.seed += 1;
    other.snr_start_db = 10.0;
    other.snr_stop_db = 18.0;
    let mut base = cfg;
    base.snr_start_db = 10.0;
    base.snr_stop_db = 18.0;
    let c = simulate(Figure::Soe, &base, Some(1)).unwrap().table.to_csv();
    let d = simulate(Figure::Soe, &other, Some(1)).unwrap().table.to_csv();
    assert_ne!(c, d);
}

#[test]
fn config_text_overrides_preset() {
    let cfg = ScenarioConfig::preset(Figure::Soe)
        .apply_text("# desk run\nN = 64\nm = 48\np = 2\nK = 3\ntrials = 10\n")
        .unwrap();
    assert_eq!((cfg.n, cfg.m, cfg.k, cfg.trials), (64, 48, 3, 10));
    let err = ScenarioConfig::preset(Figure::Soe).apply_text("bogus = 1\n").unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn vandermonde_sweep_requires_structured_supports() {
    let mut cfg = small(Figure::VanderSupport);
    cfg.structured_support = false;
    assert!(matches!(
        simulate(Figure::VanderSupport, &cfg, Some(1)),
        Err(Error::Config(_))
    ));
}
