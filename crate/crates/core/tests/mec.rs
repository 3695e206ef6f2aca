mod common;

use common::criteria::mec_instances;

#[test]
fn infeasibility_is_sound_and_witnesses_work() {
    let r = mec_instances(60, 50_000, 21);
    assert!(r.infeasibility.pass, "{}", r.infeasibility.detail);
    assert!(r.witness.pass, "{}", r.witness.detail);
}

#[test]
#[ignore]
fn stress() {
    for seed in 100..110 {
        let r = mec_instances(500, 100_000, seed);
        println!("seed {seed}: {} | {}", r.infeasibility.detail, r.witness.detail);
    }
}
