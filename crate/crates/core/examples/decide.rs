//! Full controllability decision over the built-in corpus and some random
//! systems.
use bilinear_control::analysis::{decide_controllability, DecideConfig};
use bilinear_control::model::{builtin_corpus, random_system, BUILTIN_NAMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = DecideConfig {
        samples: 500,
        reach_budget: 50_000,
        ..DecideConfig::default()
    };
    let mut specs = Vec::new();
    for name in BUILTIN_NAMES {
        specs.push(builtin_corpus(name)?);
    }
    for seed in 0..3 {
        specs.push(random_system(3, 2, seed)?);
    }
    for spec in &specs {
        let v = decide_controllability(spec, &config)?;
        let cov = v
            .coverage_fraction()
            .map_or("-".to_string(), |f| format!("{f:.3}"));
        println!(
            "{:<20} {:<18} lie dim {:?} coverage {cov}",
            spec.name(),
            v.conclusion.label(),
            v.lie_dim
        );
    }
    Ok(())
}
