use rayon::prelude::*;

use super::noise::unit_direction;
use super::tree::{SpatialTree, MAX_TREE_DIM};
use super::{ForceLaw, Layout, RepulsionMask, SfdpError, SfdpParams};

/// Coincident pairs are separated by this multiple of `K` when evaluating forces.
pub(crate) const COINCIDENCE_JITTER: f64 = 1e-6;

/// Net repulsive force on every node.
#[derive(Clone, Debug)]
pub struct RepulsionField {
    dim: usize,
    forces: Vec<f64>,
    potential: f64,
    jitter_events: usize,
}

impl RepulsionField {
    pub fn force(&self, u: usize) -> &[f64] {
        &self.forces[u * self.dim..(u + 1) * self.dim]
    }

    /// Row-major forces, `dim` values per node.
    pub fn forces(&self) -> &[f64] {
        &self.forces
    }

    pub fn len(&self) -> usize {
        self.forces.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.forces.is_empty()
    }

    /// Repulsive part of the system energy, summed over unordered pairs
    /// (approximate when a tree was used).
    pub fn potential_energy(&self) -> f64 {
        self.potential
    }

    /// Number of coincident pairs resolved by jitter.
    pub fn jitter_events(&self) -> usize {
        self.jitter_events
    }
}

/// Repulsion on every node from every other node.
///
/// Without a tree the sum is exact. With a tree, a cell of width `w` whose
/// center of mass lies at distance `D` is treated as a single supernode when
/// `w / D < theta` and the cell does not contain the node itself.
pub fn repulsion_field(
    layout: &Layout,
    params: &SfdpParams,
    tree: Option<&SpatialTree>,
) -> Result<RepulsionField, SfdpError> {
    layout.check_finite()?;
    let law = ForceLaw::from_params(params);
    let all: Vec<usize> = (0..layout.len()).collect();
    let group = [(0u8, all)];
    match tree {
        Some(t) => {
            if t.dim() != layout.dim() {
                return Err(SfdpError::DimensionMismatch { expected: layout.dim(), found: t.dim() });
            }
            Ok(field_from_groups(layout, law, params.theta, params.seed, None, &group, Some(std::slice::from_ref(t))))
        }
        None => Ok(field_from_groups(layout, law, params.theta, params.seed, None, &group, None)),
    }
}

/// Repulsion restricted by `mask`, using Barnes-Hut trees when `use_tree`.
pub(crate) fn masked_repulsion(
    layout: &Layout,
    law: ForceLaw,
    theta: f64,
    seed: u64,
    mask: Option<&RepulsionMask>,
    use_tree: bool,
) -> Result<RepulsionField, SfdpError> {
    let groups: Vec<(u8, Vec<usize>)> = match mask {
        None => vec![(0, (0..layout.len()).collect())],
        Some(m) => m.classes().into_iter().map(|c| (c, m.members(c))).collect(),
    };
    let trees = if use_tree {
        Some(groups.iter().map(|(_, nodes)| SpatialTree::build(layout, nodes)).collect::<Result<Vec<_>, _>>()?)
    } else {
        None
    };
    Ok(field_from_groups(layout, law, theta, seed, mask, &groups, trees.as_deref()))
}

fn field_from_groups(
    layout: &Layout,
    law: ForceLaw,
    theta: f64,
    seed: u64,
    mask: Option<&RepulsionMask>,
    groups: &[(u8, Vec<usize>)],
    trees: Option<&[SpatialTree]>,
) -> RepulsionField {
    let dim = layout.dim();
    let n = layout.len();
    let mut forces = vec![0.0; n * dim];
    let mut potentials = vec![0.0; n];
    let mut jitters = vec![0usize; n];
    let ctx = PairContext { law, seed };

    forces.par_chunks_mut(dim).zip(potentials.par_iter_mut()).zip(jitters.par_iter_mut()).enumerate().for_each(
        |(u, ((out, pot), jit))| {
            let xu = layout.position(u);
            for (gi, (class, nodes)) in groups.iter().enumerate() {
                if mask.is_some_and(|m| m.class_of(u) == *class) {
                    continue;
                }
                match trees {
                    Some(trees) => ctx.traverse(&trees[gi], theta, u, xu, out, pot, jit),
                    None => {
                        for &v in nodes {
                            if v != u {
                                ctx.pair(u, v, xu, layout.position(v), out, pot, jit);
                            }
                        }
                    }
                }
            }
        },
    );

    // Sequential reductions keep results independent of the thread count.
    let potential = potentials.iter().sum::<f64>() / 2.0;
    let jitter_events = jitters.iter().sum::<usize>() / 2;
    RepulsionField { dim, forces, potential, jitter_events }
}

struct PairContext {
    law: ForceLaw,
    seed: u64,
}

impl PairContext {
    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn pair(&self, u: usize, v: usize, xu: &[f64], xv: &[f64], out: &mut [f64], pot: &mut f64, jit: &mut usize) {
        let d2: f64 = xu.iter().zip(xv).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 > 0.0 {
            let s = self.law.repulsion_scale(d2);
            for ((o, a), b) in out.iter_mut().zip(xu).zip(xv) {
                *o += s * (a - b);
            }
            *pot += self.law.repulsion_potential(d2);
        } else {
            // Seeded direction, antisymmetric in (u, v).
            let d = COINCIDENCE_JITTER * self.law.k;
            let mut dir = vec![0.0; out.len()];
            unit_direction(self.seed, u.min(v) as u64, u.max(v) as u64, &mut dir);
            let sign = if u < v { 1.0 } else { -1.0 };
            let s = self.law.repulsion_scale(d * d) * d * sign;
            for (o, x) in out.iter_mut().zip(&dir) {
                *o += s * x;
            }
            *pot += self.law.repulsion_potential(d * d);
            *jit += 1;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn traverse(
        &self,
        tree: &SpatialTree,
        theta: f64,
        u: usize,
        xu: &[f64],
        out: &mut [f64],
        pot: &mut f64,
        jit: &mut usize,
    ) {
        let Some(_) = tree.root() else { return };
        let dim = xu.len();
        let mut padded = [0.0; MAX_TREE_DIM];
        padded[..dim].copy_from_slice(xu);
        let theta2 = theta * theta;
        let cells = tree.cells();
        let mut stack = vec![0usize];
        while let Some(c) = stack.pop() {
            let cell = &cells[c];
            if cell.is_leaf() {
                let (nodes, positions) = tree.cell_points(c);
                for (&v, xv) in nodes.iter().zip(positions) {
                    if v != u {
                        self.pair(u, v, xu, &xv[..dim], out, pot, jit);
                    }
                }
                continue;
            }
            let com = cell.center_of_mass();
            let d2: f64 = (0..dim).map(|i| (padded[i] - com[i]) * (padded[i] - com[i])).sum();
            let w = cell.width();
            if d2 > 0.0 && w * w < theta2 * d2 && !cell.contains(&padded, dim) {
                let m = cell.mass() as f64;
                let s = m * self.law.repulsion_scale(d2);
                for i in 0..dim {
                    out[i] += s * (padded[i] - com[i]);
                }
                *pot += m * self.law.repulsion_potential(d2);
            } else {
                stack.extend(tree.children(c));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sfdp::{build_spatial_tree, repulsive_force};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let norm: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        diff / norm
    }

    #[test]
    fn two_nodes_match_point_force_for_any_theta() {
        let layout = Layout::from_points(&[vec![0.2, 0.1], vec![1.5, -0.4]]).unwrap();
        let tree = build_spatial_tree(&layout).unwrap();
        let expected = repulsive_force(layout.position(0), layout.position(1), 0.2, 1.0, 2.0).unwrap();
        for theta in [0.0, 0.5, 1.2, 10.0] {
            let params = SfdpParams { theta, ..Default::default() };
            let field = repulsion_field(&layout, &params, Some(&tree)).unwrap();
            assert!(rel_err(field.force(0), &expected) < 1e-15);
            let back: Vec<f64> = expected.iter().map(|x| -x).collect();
            assert!(rel_err(field.force(1), &back) < 1e-15);
        }
    }

    #[test]
    fn theta_zero_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in 1..=3 {
            let layout = Layout::random_uniform(300, dim, 4.0, &mut rng);
            let params = SfdpParams { theta: 0.0, dim, ..Default::default() };
            let exact = repulsion_field(&layout, &params, None).unwrap();
            let tree = build_spatial_tree(&layout).unwrap();
            let bh = repulsion_field(&layout, &params, Some(&tree)).unwrap();
            for u in 0..layout.len() {
                assert!(rel_err(bh.force(u), exact.force(u)) < 1e-9);
            }
            assert!(((bh.potential_energy() - exact.potential_energy()) / exact.potential_energy()).abs() < 1e-9);
        }
    }

    #[test]
    fn coincident_points_are_jittered_antisymmetrically() {
        let layout = Layout::from_points(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![3.0, 1.0]]).unwrap();
        let params = SfdpParams::default();
        let field = repulsion_field(&layout, &params, None).unwrap();
        assert_eq!(field.jitter_events(), 1);
        assert!(field.forces().iter().all(|x| x.is_finite()));
        // The third node sees both coincident nodes as ordinary sources.
        let f2 = field.force(2);
        assert!((f2[0] - 2.0 * 0.2 / 4.0).abs() < 1e-12);
        let again = repulsion_field(&layout, &params, None).unwrap();
        assert_eq!(field.forces(), again.forces());
    }

    #[test]
    fn masked_field_skips_same_class_pairs() {
        let layout = Layout::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let mask = RepulsionMask::by_class(vec![0, 0, 1]);
        let law = ForceLaw::new(0.2, 1.0, 2.0);
        let field = masked_repulsion(&layout, law, 0.0, 0, Some(&mask), false).unwrap();
        let expected = repulsive_force(&[0.0, 0.0], &[0.0, 2.0], 0.2, 1.0, 2.0).unwrap();
        assert!(rel_err(field.force(0), &expected) < 1e-15);
        let with_tree = masked_repulsion(&layout, law, 0.0, 0, Some(&mask), true).unwrap();
        assert!(rel_err(with_tree.force(2), field.force(2)) < 1e-12);
    }
}
