use super::build::SurfaceMesh;
use crate::error::Result;
use std::io::Write;

/// Writes the plain-text simplicial complex described in the README:
/// a header with counts, then cut vertices, quotient edges, triangles
/// and the side identifications.
pub fn write_mesh<W: Write>(mesh: &SurfaceMesh, out: &mut W) -> Result<()> {
    writeln!(out, "# hypertwist surface mesh")?;
    writeln!(out, "level {}", mesh.level)?;
    writeln!(
        out,
        "counts cut_vertices {} vertices {} edges {} triangles {} identifications {}",
        mesh.local_pos.len(),
        mesh.num_vertices(),
        mesh.num_edges(),
        mesh.num_triangles(),
        mesh.vertex_gluing.len()
    )?;
    writeln!(out, "vertices {}", mesh.local_pos.len())?;
    for (k, p) in mesh.local_pos.iter().enumerate() {
        writeln!(out, "{k} {:.17e} {:.17e} {}", p.x(), p.y(), mesh.local_to_vertex[k])?;
    }
    writeln!(out, "edges {}", mesh.num_edges())?;
    for (e, [a, b]) in mesh.edges.iter().enumerate() {
        writeln!(out, "{e} {a} {b} {:.17e}", mesh.edge_len[e])?;
    }
    writeln!(out, "triangles {}", mesh.num_triangles())?;
    for (t, [a, b, c]) in mesh.triangles.iter().enumerate() {
        let e = mesh.tri_local_edges[t].map(|k| {
            let le = &mesh.local_edges[k];
            (le.edge, le.sign)
        });
        writeln!(
            out,
            "{t} {a} {b} {c} {} {} {} {} {} {} {:.17e}",
            e[0].0, e[0].1, e[1].0, e[1].1, e[2].0, e[2].1, mesh.tri_area[t]
        )?;
    }
    writeln!(out, "identifications {}", mesh.vertex_gluing.len())?;
    for (s, v, w) in &mesh.vertex_gluing {
        writeln!(out, "{s} {v} {w}")?;
    }
    Ok(())
}

/// Counts read back from a mesh file header:
/// `(cut_vertices, vertices, edges, triangles, identifications)`.
pub fn read_mesh_counts(text: &str) -> Option<[usize; 5]> {
    let line = text.lines().find(|l| l.starts_with("counts "))?;
    let nums: Vec<usize> = line.split_whitespace().skip(1).skip(1).step_by(2).filter_map(|s| s.parse().ok()).collect();
    nums.try_into().ok()
}
