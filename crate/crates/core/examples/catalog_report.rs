//! Certifies every catalog model on a default 2-D grid and prints one line
//! per model.

use std::time::Instant;

use svpc::certify::{certify, CertifyOptions};
use svpc::gridfn::{DimKind, GridFunction, GridSpec};
use svpc::models::{catalog, EnergyModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let half: f64 = args.get(1).map_or(Ok(3.0), |s| s.parse())?;
    let count: usize = args.get(2).map_or(Ok(41), |s| s.parse())?;
    let grid = GridSpec::uniform(DimKind::Nu, 2, half, count)?;
    for info in catalog() {
        let model = EnergyModel::with_defaults(info.name, 2)?;
        let phi = GridFunction::build(grid.clone(), |nu| model.phi(nu))?;
        let t = Instant::now();
        let (cert, _) = certify(&phi, &CertifyOptions::for_grid(&grid))?;
        println!(
            "{:<20} {:<12} gap {:<10.4e} tol {:.4} witness {:?} bnd {} nubnd {} lp {:?} beta {:?} rounds {} ({:.2?})",
            info.name,
            cert.verdict.as_str(),
            cert.max_gap,
            cert.certify_tol,
            cert.witness_node,
            cert.boundary_active,
            cert.nu_boundary_active,
            cert.lp_value,
            cert.beta_grid.iter().map(|a| a.half_width).collect::<Vec<_>>(),
            cert.widening_rounds,
            t.elapsed()
        );
    }
    Ok(())
}
