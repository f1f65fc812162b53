//! First-return maps of leaves in planar sections of a radial distribution.
use bilinear_control::foliation::{
    arc_family, first_return, phi_constancy, theta_samples, FirstReturnConfig, PlanarSection,
    RadialDistribution,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FirstReturnConfig::default();
    let d = RadialDistribution::radial_graph(3, 0.3)?;

    let theta = theta_samples(3, 1, 5).remove(0);
    let section = PlanarSection::new(theta)?;
    let ret = first_return(&d, &section, &cfg)?;
    println!(
        "one section: |p_theta| = {:.12} winding {:.4} arc length {:.4}",
        ret.scale, ret.winding, ret.arc_length
    );

    let phi = phi_constancy(&d, 32, 0, 1e-6, &cfg)?;
    println!(
        "32 sections: mean {:.12} max deviation {:.1e} constant {} (expected {:.12})",
        phi.mean,
        phi.max_deviation,
        phi.constant,
        (-0.6f64).exp()
    );

    let arcs = arc_family(&d, 8, 0, 33, &cfg)?;
    println!(
        "arcs: endpoint mismatch {:.1e} tangency {:.1e} planarity {:.1e} norms in [{:.3}, {:.3}]",
        arcs.endpoint_mismatch,
        arcs.tangency_residual,
        arcs.planarity_residual,
        arcs.min_norm,
        arcs.max_norm
    );
    Ok(())
}
