use super::sparse::CsrMatrix;
use crate::error::Result;
use crate::mesh::Mesh;

/// `K + mu^2 M_L` over all nodes: the P1 stiffness matrix plus the row-sum
/// lumped mass matrix scaled by `mu^2`.
///
/// Each local off-diagonal value is computed once and written to both `(i, j)`
/// and `(j, i)`; since duplicates are summed in triangle order, the assembled
/// matrix is exactly symmetric.
pub fn assemble_operator(mesh: &Mesh, mu: f64) -> Result<CsrMatrix> {
    let mu_sq = mu * mu;
    let mut triplets = Vec::with_capacity(9 * mesh.num_triangles());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let local = local_stiffness(mesh, t);
        let lumped = mesh.signed_area(t) / 3.0;
        for a in 0..3 {
            triplets.push((tri[a], tri[a], local[a][a] + mu_sq * lumped));
            for b in (a + 1)..3 {
                triplets.push((tri[a], tri[b], local[a][b]));
                triplets.push((tri[b], tri[a], local[a][b]));
            }
        }
    }
    CsrMatrix::from_triplets(mesh.num_nodes(), triplets)
}

/// `int grad(phi_a) . grad(phi_b)` on triangle `t`.
pub fn local_stiffness(mesh: &Mesh, t: usize) -> [[f64; 3]; 3] {
    let p = mesh.corners(t);
    let area = mesh.signed_area(t);
    let mut b = [0.0; 3];
    let mut c = [0.0; 3];
    for k in 0..3 {
        let (j, l) = ((k + 1) % 3, (k + 2) % 3);
        b[k] = p[j].x2 - p[l].x2;
        c[k] = p[l].x1 - p[j].x1;
    }
    let mut k_loc = [[0.0; 3]; 3];
    for a in 0..3 {
        for bb in 0..3 {
            k_loc[a][bb] = (b[a] * b[bb] + c[a] * c[bb]) / (4.0 * area);
        }
    }
    k_loc
}

/// `int_boundary phi_i ds` for every node (half of each incident boundary
/// edge length).
pub fn boundary_load(mesh: &Mesh) -> Vec<f64> {
    let mut load = vec![0.0; mesh.num_nodes()];
    for e in &mesh.boundary_edges {
        load[e.nodes[0]] += 0.5 * e.length;
        load[e.nodes[1]] += 0.5 * e.length;
    }
    load
}

/// Lumped nodal masses (one third of the area of every incident triangle).
pub fn lumped_mass(mesh: &Mesh) -> Vec<f64> {
    let mut mass = vec![0.0; mesh.num_nodes()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let m = mesh.signed_area(t) / 3.0;
        for &n in tri {
            mass[n] += m;
        }
    }
    mass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::mesh::triangulate;

    #[test]
    fn stiffness_annihilates_constants() {
        let mesh = triangulate(&Domain::l_shape(), 0.3).unwrap();
        let k = assemble_operator(&mesh, 0.0).unwrap();
        let y = k.mul_vec(&vec![1.0; mesh.num_nodes()]);
        assert!(y.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn mass_rows_sum_to_area() {
        let mesh = triangulate(&Domain::unit_square(), 0.2).unwrap();
        let a = assemble_operator(&mesh, 3.0).unwrap();
        let total: f64 = a.mul_vec(&vec![1.0; mesh.num_nodes()]).iter().sum();
        assert!((total - 9.0).abs() < 1e-12);
        assert!((lumped_mass(&mesh).iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((boundary_load(&mesh).iter().sum::<f64>() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn assembled_operator_is_symmetric() {
        let mesh = triangulate(&Domain::unit_disc(), 0.15).unwrap();
        let a = assemble_operator(&mesh, 7.0).unwrap();
        assert!(a.is_symmetric());
    }
}
