//! Flux boundary data `dv/dn = mu`: does `-ln(v)/mu` still approach the
//! distance? Only numerical evidence; on the disc the exact solution is
//! `I0(mu |x|) / I1(mu)`.

use std::sync::Arc;

use panharmonic::analysis::sweep::{base_mesh, resolve_mesh};
use panharmonic::analysis::{varadhan_error, TargetH};
use panharmonic::geometry::Domain;
use panharmonic::solver::solve_neumann;
use panharmonic::special::neumann_disc_value;

fn main() -> panharmonic::Result<()> {
    println!("unit disc, closed form");
    for mu in [5.0, 10.0, 50.0, 200.0] {
        let v0 = neumann_disc_value(1.0, mu, 0.0)?;
        println!("  mu {mu:>5}: |-ln v(0)/mu - 1| = {:.5}", (-v0.ln() / mu - 1.0).abs());
    }
    for (name, domain) in [("unit disc", Domain::unit_disc()), ("unit square", Domain::unit_square())] {
        println!("{name}, finite elements");
        let (base, _) = base_mesh(&domain, TargetH::Auto, 20.0)?;
        let base = Arc::new(base);
        for mu in [5.0, 10.0, 20.0] {
            let field = solve_neumann(resolve_mesh(&base, &domain, mu)?, mu)?;
            match varadhan_error(&field, &domain) {
                Ok(r) => println!("  mu {mu:>4}: v in [{:.3e}, {:.3}], sup error {:.4}", field.min_value(), field.max_value(), r.sup_error),
                Err(e) => println!("  mu {mu:>4}: {e}"),
            }
        }
    }
    Ok(())
}
