//! Lie algebra generated by a few matrix families.
use bilinear_control::matlie::{bracket, default_depth_cap, lie_closure, so3_generators};
use bilinear_control::model::{hyperbolic_d, rotation_j};
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let j = rotation_j();
    let d = hyperbolic_d();
    let ident = DMatrix::<f64>::identity(2, 2);

    // not in span{J, D}, so the closure is at least 3-dimensional
    println!("[J, D] = {}", bracket(&j, &d)?);

    let families: Vec<(&str, Vec<DMatrix<f64>>)> = vec![
        ("{J}", vec![j.clone()]),
        ("{J, D}", vec![j.clone(), d.clone()]),
        ("{I+J, I+D}", vec![&ident + &j, &ident + &d]),
        ("so(3)", so3_generators().to_vec()),
    ];
    for (name, gens) in families {
        let n = gens[0].nrows();
        let basis = lie_closure(&gens, 1e-9, default_depth_cap(n))?;
        println!(
            "{name:>12}: dim {} depth {} converged {} defect {:.1e}",
            basis.dim(),
            basis.depth(),
            basis.converged(),
            basis.closure_defect()
        );
    }
    Ok(())
}
