//! Approximate reachability with a replayable witness schedule.
use bilinear_control::matlie::Vector;
use bilinear_control::model::builtin_corpus;
use bilinear_control::reach::{approx_reach_test, endpoint, SamplerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = builtin_corpus("planar_jd")?;
    let x0 = Vector::from_vec(vec![1.0, 0.0]);
    let sampler = SamplerConfig::default();

    for target in [[0.0, 2.0], [-0.3, 0.4], [5.0, -1.0]] {
        let target = Vector::from_row_slice(&target);
        let r = approx_reach_test(&spec, &x0, &target, 1e-2, 5000, 0, &sampler)?;
        print!(
            "target {:?}: hit {} distance {:.2e}",
            target.as_slice(),
            r.hit,
            r.distance
        );
        if let Some(w) = &r.witness {
            let end = endpoint(&spec, w, &x0, 1e-10)?;
            print!(
                "  replay miss {:.2e}  T = {:.3}",
                (end - &target).norm(),
                w.total_time()
            );
        }
        println!();
    }

    // rotations can't change the norm, so this one has to fail
    let so3 = builtin_corpus("so3")?;
    let e1 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
    let r = approx_reach_test(&so3, &e1, &(&e1 * 2.0), 0.5, 2000, 0, &sampler)?;
    println!("so3 to 2 e1: hit {} closest {:.3}", r.hit, r.distance);
    Ok(())
}
