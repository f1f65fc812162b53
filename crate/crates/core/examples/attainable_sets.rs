//! Sampling attainable sets and measuring grid coverage.
//!
//! Compares independent random schedules with the grid-guided explorer on
//! the same budget.
use bilinear_control::matlie::Vector;
use bilinear_control::model::builtin_corpus;
use bilinear_control::reach::{
    coverage, explore_attainable, sample_attainable, CoverageGrid, ExploreConfig, SamplerConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = 20_000;
    let sampler = SamplerConfig::default();
    let grid = CoverageGrid::new(2, 32, 16, 0.1, 10.0, false, 0)?;
    for name in ["planar_jd", "so3", "expanding_pair"] {
        let spec = builtin_corpus(name)?;
        let mut x0 = Vector::zeros(spec.n());
        x0[0] = 1.0;
        // so3 keeps |x| = 1 and expanding_pair never shrinks it, so neither can
        // fill an annulus with several radial bins
        let grid = if spec.n() == 2 {
            grid.clone()
        } else {
            CoverageGrid::default_annulus(spec.n(), false)?
        };

        let plain = sample_attainable(&spec, &x0, budget, 1, &sampler)?;
        let guided = explore_attainable(
            &spec,
            &x0,
            budget,
            1,
            &sampler,
            &grid,
            &ExploreConfig::default(),
        )?;
        let a = coverage(&plain, &grid);
        let b = coverage(&guided.cloud, &grid);
        println!(
            "{name:>15}: independent {:.3} ({} cells)  guided {:.3} ({} cells)",
            a.fraction, a.hit_cells, b.fraction, b.hit_cells
        );
    }

    // every explored point comes with a schedule that reproduces it
    let spec = builtin_corpus("planar_jd")?;
    let x0 = Vector::from_vec(vec![1.0, 0.0]);
    let cloud = explore_attainable(
        &spec,
        &x0,
        2000,
        3,
        &sampler,
        &grid,
        &ExploreConfig::default(),
    )?;
    let last = cloud.cloud.points.len() - 1;
    println!(
        "point {last}: {:.4?} via {} segments",
        cloud.cloud.points[last].as_slice(),
        cloud.schedule(last).segments.len()
    );

    let path = std::env::temp_dir().join("planar_jd_points.csv");
    cloud.cloud.write_csv(std::fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
