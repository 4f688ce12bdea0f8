//! Parameter counts of the default fairness network.

use sepnet::data::FairnessSpec;
use sepnet::harness::RunConfig;
use sepnet::net::{NetParams, NetSpec};

#[test]
fn default_fairness_counts() {
    let spec = RunConfig::default().net_spec(FairnessSpec::default().input_dim());
    assert_eq!(spec.input_dim, 5);
    // 5*60+60 + 60*25+25 + 25*1+1
    assert_eq!(spec.trunk_param_count(), 1911);
    // (4*60+60 + 60*120+120) + (4*25+25 + 25*50+50)
    assert_eq!(spec.cond_param_count(), 9045);
    assert_eq!(NetParams::zeros(&spec).unwrap().len(), 10_956);
    // Conditioning outweighs the trunk several times over at this width.
    let overhead = spec.cond_param_count() as f64 / spec.trunk_param_count() as f64;
    assert!((overhead - 4.733).abs() < 1e-3, "{overhead}");
}

#[test]
fn unconditioned_trunk_matches() {
    let spec = NetSpec::with_input(5);
    let plain = spec.unconditioned();
    assert_eq!(plain.param_count(), spec.trunk_param_count());
    assert_eq!(plain.cond_param_count(), 0);
}
