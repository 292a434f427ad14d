//! Mesh representation and the structured block mesh generator.
//!
//! Vertex coordinates are stored flat, `dim` values per vertex. Cells are
//! grouped into blocks of a single cell type; cell ids are global across
//! blocks in block order. Hex and quad connectivity follows the legacy VTK
//! vertex ordering.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellType {
    Line2,
    Tri3,
    Quad4,
    Tet4,
    Hex8,
}

impl CellType {
    pub fn n_vertices(self) -> usize {
        match self {
            CellType::Line2 => 2,
            CellType::Tri3 => 3,
            CellType::Quad4 => 4,
            CellType::Tet4 => 4,
            CellType::Hex8 => 8,
        }
    }

    /// Topological dimension.
    pub fn dim(self) -> usize {
        match self {
            CellType::Line2 => 1,
            CellType::Tri3 | CellType::Quad4 => 2,
            CellType::Tet4 | CellType::Hex8 => 3,
        }
    }

    pub fn vtk_code(self) -> u32 {
        match self {
            CellType::Line2 => 3,
            CellType::Tri3 => 5,
            CellType::Quad4 => 9,
            CellType::Tet4 => 10,
            CellType::Hex8 => 12,
        }
    }

    pub fn from_vtk_code(code: u32) -> Result<Self> {
        match code {
            3 => Ok(CellType::Line2),
            5 => Ok(CellType::Tri3),
            9 => Ok(CellType::Quad4),
            10 => Ok(CellType::Tet4),
            12 => Ok(CellType::Hex8),
            other => Err(Error::VtkCellType(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellType::Line2 => "line2",
            CellType::Tri3 => "tri3",
            CellType::Quad4 => "quad4",
            CellType::Tet4 => "tet4",
            CellType::Hex8 => "hex8",
        }
    }

    /// Local edges as pairs of local vertex indices.
    pub fn edges(self) -> &'static [(usize, usize)] {
        match self {
            CellType::Line2 => &[(0, 1)],
            CellType::Tri3 => &[(0, 1), (1, 2), (2, 0)],
            CellType::Quad4 => &[(0, 1), (1, 2), (2, 3), (3, 0)],
            CellType::Tet4 => &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
            CellType::Hex8 => &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        }
    }

    /// Facets (codimension-1 boundaries) as local vertex index lists.
    pub fn facets(self) -> &'static [&'static [usize]] {
        match self {
            CellType::Line2 => &[&[0], &[1]],
            CellType::Tri3 => &[&[0, 1], &[1, 2], &[2, 0]],
            CellType::Quad4 => &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
            CellType::Tet4 => &[&[0, 2, 1], &[0, 1, 3], &[1, 2, 3], &[2, 0, 3]],
            CellType::Hex8 => &[
                &[0, 3, 2, 1],
                &[4, 5, 6, 7],
                &[0, 1, 5, 4],
                &[1, 2, 6, 5],
                &[2, 3, 7, 6],
                &[3, 0, 4, 7],
            ],
        }
    }

    /// Quad faces of a hex, for face-interior dofs of tensor-product order-2
    /// bases. Empty for every other cell type.
    pub fn quad_faces(self) -> &'static [&'static [usize]] {
        match self {
            CellType::Hex8 => CellType::Hex8.facets(),
            _ => &[],
        }
    }

    /// True for cell types whose order-2 basis has an interior (centre) node.
    pub fn has_center_node(self) -> bool {
        matches!(self, CellType::Line2 | CellType::Quad4 | CellType::Hex8)
    }
}

#[derive(Debug, Clone)]
pub struct CellBlock {
    pub cell_type: CellType,
    /// Flat connectivity, `n_vertices` entries per cell.
    pub connectivity: Vec<usize>,
}

impl CellBlock {
    pub fn n_cells(&self) -> usize {
        self.connectivity.len() / self.cell_type.n_vertices()
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        let nv = self.cell_type.n_vertices();
        &self.connectivity[i * nv..(i + 1) * nv]
    }
}

/// A boundary facet: canonical (sorted) vertex ids plus the incident cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub cell: usize,
}

#[derive(Debug)]
pub struct Mesh {
    pub dim: usize,
    /// Flat coordinates, `dim` values per vertex.
    pub coords: Vec<f64>,
    pub cell_blocks: Vec<CellBlock>,
    /// Material/group id per cell (global cell order).
    pub cell_group_ids: Vec<i32>,
    boundary: OnceLock<Vec<Facet>>,
}

impl Clone for Mesh {
    fn clone(&self) -> Self {
        Mesh {
            dim: self.dim,
            coords: self.coords.clone(),
            cell_blocks: self.cell_blocks.clone(),
            cell_group_ids: self.cell_group_ids.clone(),
            boundary: OnceLock::new(),
        }
    }
}

impl Mesh {
    pub fn new(
        dim: usize,
        coords: Vec<f64>,
        cell_blocks: Vec<CellBlock>,
        cell_group_ids: Vec<i32>,
    ) -> Result<Self> {
        let mesh = Mesh {
            dim,
            coords,
            cell_blocks,
            cell_group_ids,
            boundary: OnceLock::new(),
        };
        mesh.validate()?;
        Ok(mesh)
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Mesh(format!("unsupported dimension {}", self.dim)));
        }
        if self.coords.len() % self.dim != 0 {
            return Err(Error::Mesh("coordinate array length mismatch".into()));
        }
        let nv = self.n_vertices();
        let n_cells = self.n_cells();
        if self.cell_group_ids.len() != n_cells {
            return Err(Error::Mesh(format!(
                "cell_group_ids length {} does not match cell count {}",
                self.cell_group_ids.len(),
                n_cells
            )));
        }
        for block in &self.cell_blocks {
            if block.cell_type.dim() > self.dim {
                return Err(Error::Mesh(format!(
                    "{} cells in a {}d mesh",
                    block.cell_type.name(),
                    self.dim
                )));
            }
            for ic in 0..block.n_cells() {
                let cell = block.cell(ic);
                for &v in cell {
                    if v >= nv {
                        return Err(Error::Mesh(format!(
                            "connectivity index {} out of range ({} vertices)",
                            v, nv
                        )));
                    }
                }
                let mut seen = cell.to_vec();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != cell.len() {
                    return Err(Error::Mesh(format!(
                        "cell has repeated vertices: {:?}",
                        cell
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn n_cells(&self) -> usize {
        self.cell_blocks.iter().map(|b| b.n_cells()).sum()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Cell type and vertex list for a global cell id.
    pub fn cell(&self, mut id: usize) -> (CellType, &[usize]) {
        for block in &self.cell_blocks {
            let n = block.n_cells();
            if id < n {
                return (block.cell_type, block.cell(id));
            }
            id -= n;
        }
        panic!("cell id out of range");
    }

    /// Global ids of cells whose topological dimension equals the mesh dimension.
    pub fn volume_cells(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut id = 0;
        for block in &self.cell_blocks {
            for _ in 0..block.n_cells() {
                if block.cell_type.dim() == self.dim {
                    out.push(id);
                }
                id += 1;
            }
        }
        out
    }

    pub fn cell_centroid(&self, id: usize) -> Vec<f64> {
        let (_, verts) = self.cell(id);
        let mut c = vec![0.0; self.dim];
        for &v in verts {
            for (ci, xi) in c.iter_mut().zip(self.vertex(v)) {
                *ci += xi;
            }
        }
        for ci in &mut c {
            *ci /= verts.len() as f64;
        }
        c
    }

    /// Axis-aligned bounding box as (min, max) corner coordinates.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for i in 0..self.n_vertices() {
            for (d, &x) in self.vertex(i).iter().enumerate() {
                lo[d] = lo[d].min(x);
                hi[d] = hi[d].max(x);
            }
        }
        (lo, hi)
    }

    /// Facets incident to exactly one volume cell, with sorted vertex ids,
    /// ordered lexicographically.
    pub fn boundary_facets(&self) -> &[Facet] {
        self.boundary.get_or_init(|| {
            let mut counts: std::collections::HashMap<Vec<usize>, (usize, usize)> =
                std::collections::HashMap::new();
            for id in self.volume_cells() {
                let (ct, verts) = self.cell(id);
                for facet in ct.facets() {
                    let mut key: Vec<usize> = facet.iter().map(|&l| verts[l]).collect();
                    key.sort_unstable();
                    let entry = counts.entry(key).or_insert((0, id));
                    entry.0 += 1;
                }
            }
            let mut facets: Vec<Facet> = counts
                .into_iter()
                .filter(|(_, (count, _))| *count == 1)
                .map(|(vertices, (_, cell))| Facet { vertices, cell })
                .collect();
            facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
            facets
        })
    }
}

/// Generates a structured tensor-product mesh (line2/quad4/hex8), axis
/// aligned and centred at `centre`. `shape` counts vertices per axis.
pub fn generate_block_mesh(dims: &[f64], shape: &[usize], centre: &[f64]) -> Result<Mesh> {
    let dim = dims.len();
    if dim == 0 || dim > 3 || shape.len() != dim || centre.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "dims/shape/centre lengths {}/{}/{} must be equal and in 1..=3",
            dims.len(),
            shape.len(),
            centre.len()
        )));
    }
    for (&n, &l) in shape.iter().zip(dims) {
        if n < 2 {
            return Err(Error::Mesh(format!("shape entry {} < 2", n)));
        }
        if l <= 0.0 {
            return Err(Error::Mesh(format!("non-positive block extent {}", l)));
        }
    }

    let n_total: usize = shape.iter().product();
    let mut coords = Vec::with_capacity(n_total * dim);
    // Vertex index varies fastest along the last axis.
    let mut idx = vec![0usize; dim];
    for _ in 0..n_total {
        for d in 0..dim {
            let frac = idx[d] as f64 / (shape[d] - 1) as f64;
            coords.push(centre[d] - 0.5 * dims[d] + frac * dims[d]);
        }
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }

    let stride: Vec<usize> = (0..dim)
        .map(|d| shape[d + 1..].iter().product())
        .collect();
    let vid = |ix: &[usize]| -> usize { ix.iter().zip(&stride).map(|(i, s)| i * s).sum() };

    let cell_type = match dim {
        1 => CellType::Line2,
        2 => CellType::Quad4,
        _ => CellType::Hex8,
    };
    let mut connectivity = Vec::new();
    let cells_shape: Vec<usize> = shape.iter().map(|&n| n - 1).collect();
    let n_cells: usize = cells_shape.iter().product();
    let mut cix = vec![0usize; dim];
    for _ in 0..n_cells {
        match dim {
            1 => {
                connectivity.extend_from_slice(&[vid(&[cix[0]]), vid(&[cix[0] + 1])]);
            }
            2 => {
                let (i, j) = (cix[0], cix[1]);
                connectivity.extend_from_slice(&[
                    vid(&[i, j]),
                    vid(&[i + 1, j]),
                    vid(&[i + 1, j + 1]),
                    vid(&[i, j + 1]),
                ]);
            }
            _ => {
                let (i, j, k) = (cix[0], cix[1], cix[2]);
                connectivity.extend_from_slice(&[
                    vid(&[i, j, k]),
                    vid(&[i + 1, j, k]),
                    vid(&[i + 1, j + 1, k]),
                    vid(&[i, j + 1, k]),
                    vid(&[i, j, k + 1]),
                    vid(&[i + 1, j, k + 1]),
                    vid(&[i + 1, j + 1, k + 1]),
                    vid(&[i, j + 1, k + 1]),
                ]);
            }
        }
        for d in (0..dim).rev() {
            cix[d] += 1;
            if cix[d] < cells_shape[d] {
                break;
            }
            cix[d] = 0;
        }
    }

    Mesh::new(
        dim,
        coords,
        vec![CellBlock {
            cell_type,
            connectivity,
        }],
        vec![0; n_cells],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_1d_three_vertices() {
        let m = generate_block_mesh(&[1.0], &[3], &[0.0]).unwrap();
        assert_eq!(m.n_vertices(), 3);
        assert_eq!(m.n_cells(), 2);
        assert_eq!(m.coords, vec![-0.5, 0.0, 0.5]);
        assert_eq!(m.cell_blocks[0].cell_type, CellType::Line2);
    }

    #[test]
    fn block_2d_single_cell() {
        let m = generate_block_mesh(&[2.0, 2.0], &[2, 2], &[0.0, 0.0]).unwrap();
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.n_cells(), 1);
        for i in 0..4 {
            for &x in m.vertex(i) {
                assert_eq!(x.abs(), 1.0);
            }
        }
    }

    #[test]
    fn block_3d_tensor_grid() {
        // Oracle: enumerate the 3x3x3 tensor grid over [0,1]^3 by hand.
        let m = generate_block_mesh(&[1.0, 1.0, 1.0], &[3, 3, 3], &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(m.n_vertices(), 27);
        assert_eq!(m.n_cells(), 8);
        let mut expected = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    expected.push([i as f64 * 0.5, j as f64 * 0.5, k as f64 * 0.5]);
                }
            }
        }
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(m.vertex(i), &e[..]);
        }
        for &g in &m.cell_group_ids {
            assert_eq!(g, 0);
        }
    }

    #[test]
    fn block_rejects_bad_arguments() {
        assert!(generate_block_mesh(&[1.0, 1.0], &[3], &[0.0, 0.0]).is_err());
        assert!(generate_block_mesh(&[1.0], &[1], &[0.0]).is_err());
        assert!(generate_block_mesh(&[0.0], &[3], &[0.0]).is_err());
    }

    #[test]
    fn boundary_of_single_hex() {
        let m = generate_block_mesh(&[1.0; 3], &[2, 2, 2], &[0.0; 3]).unwrap();
        assert_eq!(m.boundary_facets().len(), 6);
    }

    #[test]
    fn boundary_of_line_mesh() {
        let m = generate_block_mesh(&[1.0], &[3], &[0.0]).unwrap();
        let facets = m.boundary_facets();
        assert_eq!(facets.len(), 2);
        assert_eq!(facets[0].vertices, vec![0]);
        assert_eq!(facets[1].vertices, vec![2]);
    }

    #[test]
    fn boundary_of_2x2x2_block() {
        // Oracle: 8 cubes x 6 faces = 48, minus 12 interior faces counted
        // twice leaves 24 boundary facets.
        let m = generate_block_mesh(&[1.0; 3], &[3, 3, 3], &[0.0; 3]).unwrap();
        assert_eq!(m.boundary_facets().len(), 24);
    }

    #[test]
    fn structured_block_facet_count_property() {
        for shape in [[2usize, 3, 4], [3, 3, 3], [4, 2, 5]] {
            let m = generate_block_mesh(&[1.0; 3], &shape, &[0.0; 3]).unwrap();
            let c: Vec<usize> = shape.iter().map(|&n| n - 1).collect();
            let expected = 2 * (c[0] * c[1] + c[1] * c[2] + c[0] * c[2]);
            assert_eq!(m.boundary_facets().len(), expected);
        }
    }

    #[test]
    fn rejects_duplicate_cell_vertices() {
        let r = Mesh::new(
            1,
            vec![0.0, 1.0],
            vec![CellBlock {
                cell_type: CellType::Line2,
                connectivity: vec![0, 0],
            }],
            vec![0],
        );
        assert!(r.is_err());
    }
}
