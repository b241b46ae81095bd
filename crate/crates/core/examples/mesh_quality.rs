//! Meshing the three reference domains and refining them uniformly.

use panharmonic::geometry::Domain;
use panharmonic::mesh::{mesh_quality, refine_uniform, triangulate};

fn main() -> panharmonic::Result<()> {
    let domains = [
        ("unit square", Domain::unit_square()),
        ("L-shape", Domain::l_shape()),
        ("unit disc", Domain::unit_disc()),
        ("heptagon", Domain::regular_polygon(7, 1.0)?),
    ];
    for (name, domain) in &domains {
        let mut mesh = triangulate(domain, 0.1)?;
        println!("{name}: {}", domain.describe());
        for level in 0..3 {
            let q = mesh_quality(&mesh);
            println!(
                "  level {level}: {:>6} nodes {:>6} triangles  angles [{:5.1}, {:5.1}] deg  h_max {:.4}  non-obtuse {:.3}",
                mesh.num_nodes(),
                mesh.num_triangles(),
                q.min_angle,
                q.max_angle,
                q.h_max,
                q.nonobtuse_fraction
            );
            mesh = refine_uniform(&mesh, domain)?;
        }
    }
    Ok(())
}
