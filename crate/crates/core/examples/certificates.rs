//! Certificates of non-controllability.
//!
//! A minimum-rank search looks for a state where the Lie algebra span drops
//! rank; the monotone-norm test checks whether every field pushes |x| the
//! same way.
use bilinear_control::analysis::{min_rank_search, monotone_norm_certificate};
use bilinear_control::model::builtin_corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["so3", "planar_jd", "expanding_pair", "identity_only"] {
        let spec = builtin_corpus(name)?;
        let rank = min_rank_search(&spec, 16, 0)?;
        println!(
            "{name}: min sigma {:.2e} (relative {:.2e}) witness {}",
            rank.min_sigma,
            rank.relative_sigma,
            rank.is_witness(1e-9)
        );
        if rank.is_witness(1e-9) {
            println!("  rank drops at {:.4?}", rank.argmin.as_slice());
        }
        match monotone_norm_certificate(spec.family().unwrap()) {
            Some(cert) => println!("  {}", serde_json::to_string(&cert)?),
            None => println!("  no monotone norm"),
        }
    }
    Ok(())
}
