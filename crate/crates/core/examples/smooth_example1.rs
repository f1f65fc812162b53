//! A smooth planar system where every field except the upward one vanishes
//! on the lower half of the y axis. From (0, -1) one can only leave upwards,
//! and the lower axis is approached but not reached.
use bilinear_control::matlie::Vector;
use bilinear_control::model::{builtin_corpus, example1_phi, ControlSchedule};
use bilinear_control::reach::{
    coverage, sample_attainable, simulate_smooth, CoverageGrid, SamplerConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = builtin_corpus("example1")?;
    println!(
        "phi(0, -1) = {}, phi(0.5, 0.5) = {:.4}",
        example1_phi(0.0, -1.0),
        example1_phi(0.5, 0.5)
    );

    let start = Vector::from_vec(vec![0.0, -1.0]);
    let s = ControlSchedule::attainable([(0, 1.5), (2, 2.0), (1, 20.0), (3, 3.0)]);
    let path = simulate_smooth(&spec, &s, &start, 1e-10)?;
    for (i, x) in path.states.iter().enumerate() {
        println!("  after segment {i}: ({:.4}, {:.4})", x[0], x[1]);
    }

    let cloud = sample_attainable(&spec, &start, 20_000, 0, &SamplerConfig::default())?;
    let closest = cloud
        .points
        .iter()
        .map(|p| (p - Vector::from_vec(vec![0.0, -2.0])).norm())
        .fold(f64::INFINITY, f64::min);
    let grid = CoverageGrid::new(2, 32, 1, 0.5, 2.0, false, 0)?;
    println!("closest sample to (0, -2): {closest:.3}");
    println!(
        "angular coverage of the unit annulus: {:.3}",
        coverage(&cloud, &grid).fraction
    );
    Ok(())
}
