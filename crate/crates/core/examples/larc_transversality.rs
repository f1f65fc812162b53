//! Pointwise rank checks: the Lie algebra rank condition and transversality
//! to the radial direction, evaluated on a handful of sphere points.
use bilinear_control::analysis::{closure_of, larc_with, transversality_with};
use bilinear_control::matlie::evaluate_at;
use bilinear_control::model::builtin_corpus;
use bilinear_control::sphere::seeded_unit_points;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["so3", "planar_jd", "expanding_pair", "identity_only"] {
        let spec = builtin_corpus(name)?;
        let basis = closure_of(&spec, 1e-9)?;
        println!("{name} (Lie dim {})", basis.dim());
        for x in seeded_unit_points(spec.n(), 3, 7) {
            let larc = larc_with(&basis, &x)?;
            let sv = evaluate_at(&basis, &x)?.singular_values;
            println!(
                "  x = {:>7.3?}  span dim {}  larc {}  transversal {}  sigma {}",
                x.as_slice(),
                larc.dim,
                larc.holds,
                transversality_with(&basis, &x)?,
                sv.iter()
                    .map(|s| format!("{s:.1e}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
    }
    Ok(())
}
