//! Barnes-Hut spatial tree (binary tree, quadtree or octree by dimension).
//!
//! The tree is built top-down over a cube covering the points. Every cell
//! owns a contiguous range of the reordered point list, so a cell's mass is
//! the length of its range and its center of mass is the mean over it.

use super::{Layout, SfdpError};

pub const MAX_TREE_DIM: usize = 3;
/// Cells at this depth become leaf buckets even if they hold several points.
pub const MAX_TREE_DEPTH: usize = 64;

#[derive(Clone, Debug)]
pub struct Cell {
    lo: [f64; MAX_TREE_DIM],
    width: f64,
    com: [f64; MAX_TREE_DIM],
    start: usize,
    len: usize,
    first_child: usize,
    child_count: usize,
    depth: usize,
}

impl Cell {
    /// Number of points inside the cell.
    pub fn mass(&self) -> usize {
        self.len
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_leaf(&self) -> bool {
        self.child_count == 0
    }

    pub fn lower_corner(&self) -> [f64; MAX_TREE_DIM] {
        self.lo
    }

    pub fn center_of_mass(&self) -> [f64; MAX_TREE_DIM] {
        self.com
    }

    #[inline]
    pub(crate) fn contains(&self, p: &[f64; MAX_TREE_DIM], dim: usize) -> bool {
        (0..dim).all(|i| p[i] >= self.lo[i] && p[i] <= self.lo[i] + self.width)
    }
}

#[derive(Clone, Debug)]
pub struct SpatialTree {
    dim: usize,
    cells: Vec<Cell>,
    /// Node ids reordered so every cell covers a contiguous range.
    nodes: Vec<usize>,
    /// Positions in the same order as `nodes`, padded to three coordinates.
    positions: Vec<[f64; MAX_TREE_DIM]>,
}

/// Tree over every node of the layout.
pub fn build_spatial_tree(layout: &Layout) -> Result<SpatialTree, SfdpError> {
    let nodes: Vec<usize> = (0..layout.len()).collect();
    SpatialTree::build(layout, &nodes)
}

impl SpatialTree {
    /// Tree over a subset of the layout's nodes.
    pub fn build(layout: &Layout, nodes: &[usize]) -> Result<Self, SfdpError> {
        let dim = layout.dim();
        if dim > MAX_TREE_DIM {
            return Err(SfdpError::UnsupportedDimension(dim));
        }
        let mut positions = Vec::with_capacity(nodes.len());
        for &u in nodes {
            let mut p = [0.0; MAX_TREE_DIM];
            for (i, &x) in layout.position(u).iter().enumerate() {
                if !x.is_finite() {
                    return Err(SfdpError::NonFiniteCoordinate(u));
                }
                p[i] = x;
            }
            positions.push(p);
        }

        let mut lo = [0.0; MAX_TREE_DIM];
        let mut width = 0.0f64;
        if let Some(first) = positions.first() {
            let mut hi = *first;
            lo = *first;
            for p in &positions {
                for i in 0..dim {
                    lo[i] = lo[i].min(p[i]);
                    hi[i] = hi[i].max(p[i]);
                }
            }
            width = (0..dim).map(|i| hi[i] - lo[i]).fold(0.0, f64::max);
        }

        let mut tree = SpatialTree { dim, cells: Vec::new(), nodes: nodes.to_vec(), positions };
        if tree.nodes.is_empty() {
            return Ok(tree);
        }
        let root = tree.make_cell(lo, width, 0, tree.nodes.len(), 0);
        tree.cells.push(root);
        let mut scratch_nodes = Vec::new();
        let mut scratch_pos = Vec::new();
        tree.split(0, &mut scratch_nodes, &mut scratch_pos);
        Ok(tree)
    }

    fn make_cell(&self, lo: [f64; MAX_TREE_DIM], width: f64, start: usize, len: usize, depth: usize) -> Cell {
        let mut com = [0.0; MAX_TREE_DIM];
        for p in &self.positions[start..start + len] {
            for i in 0..self.dim {
                com[i] += p[i];
            }
        }
        for c in com.iter_mut().take(self.dim) {
            *c /= len as f64;
        }
        Cell { lo, width, com, start, len, first_child: 0, child_count: 0, depth }
    }

    fn split(&mut self, cell_idx: usize, scratch_nodes: &mut Vec<usize>, scratch_pos: &mut Vec<[f64; MAX_TREE_DIM]>) {
        let Cell { lo, width, start, len, depth, .. } = self.cells[cell_idx].clone();
        if len <= 1 || depth >= MAX_TREE_DEPTH {
            return;
        }
        let dim = self.dim;
        let half = width / 2.0;
        let orthant = |p: &[f64; MAX_TREE_DIM]| -> usize {
            (0..dim).filter(|&i| p[i] >= lo[i] + half).fold(0, |acc, i| acc | (1 << i))
        };

        // Counting sort of the cell's range by orthant.
        let fanout = 1usize << dim;
        let mut counts = [0usize; 1 << MAX_TREE_DIM];
        for p in &self.positions[start..start + len] {
            counts[orthant(p)] += 1;
        }
        let mut offsets = [0usize; 1 << MAX_TREE_DIM];
        for o in 1..fanout {
            offsets[o] = offsets[o - 1] + counts[o - 1];
        }
        scratch_nodes.clear();
        scratch_nodes.resize(len, 0);
        scratch_pos.clear();
        scratch_pos.resize(len, [0.0; MAX_TREE_DIM]);
        let mut fill = offsets;
        for j in start..start + len {
            let o = orthant(&self.positions[j]);
            scratch_nodes[fill[o]] = self.nodes[j];
            scratch_pos[fill[o]] = self.positions[j];
            fill[o] += 1;
        }
        self.nodes[start..start + len].copy_from_slice(scratch_nodes);
        self.positions[start..start + len].copy_from_slice(scratch_pos);

        let first_child = self.cells.len();
        for o in 0..fanout {
            if counts[o] == 0 {
                continue;
            }
            let mut child_lo = lo;
            for (i, c) in child_lo.iter_mut().enumerate().take(dim) {
                if o & (1 << i) != 0 {
                    *c += half;
                }
            }
            let child = self.make_cell(child_lo, half, start + offsets[o], counts[o], depth + 1);
            self.cells.push(child);
        }
        let child_count = self.cells.len() - first_child;
        self.cells[cell_idx].first_child = first_child;
        self.cells[cell_idx].child_count = child_count;
        for c in first_child..first_child + child_count {
            self.split(c, scratch_nodes, scratch_pos);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn root(&self) -> Option<&Cell> {
        self.cells.first()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, idx: usize) -> &Cell {
        &self.cells[idx]
    }

    /// Indices of the children of cell `idx`.
    pub fn children(&self, idx: usize) -> std::ops::Range<usize> {
        let c = &self.cells[idx];
        c.first_child..c.first_child + c.child_count
    }

    /// Node ids contained in cell `idx`.
    pub fn cell_nodes(&self, idx: usize) -> &[usize] {
        let c = &self.cells[idx];
        &self.nodes[c.start..c.start + c.len]
    }

    pub(crate) fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Node ids and padded positions in the range of cell `idx`.
    pub(crate) fn cell_points(&self, idx: usize) -> (&[usize], &[[f64; MAX_TREE_DIM]]) {
        let c = &self.cells[idx];
        (&self.nodes[c.start..c.start + c.len], &self.positions[c.start..c.start + c.len])
    }
}
