use rayon::prelude::*;

use super::layout::squared_distance;
use super::repulsion::{masked_repulsion, COINCIDENCE_JITTER};
use super::{ForceLaw, Layout, RepulsionMask, SfdpError, SfdpParams};
use crate::graph::Graph;

/// Energy of a layout: `sum over edges d^3/(3K)` plus, over unordered node
/// pairs, `C K^(1+p) / ((p-1) d^(p-1))`.
///
/// Its negative gradient with respect to a node position is exactly the net
/// force on that node.
pub fn system_energy(g: &Graph, layout: &Layout, params: &SfdpParams) -> Result<f64, SfdpError> {
    system_energy_masked(g, layout, params, None)
}

/// Energy where only pairs allowed by `mask` contribute repulsion.
pub fn system_energy_masked(
    g: &Graph,
    layout: &Layout,
    params: &SfdpParams,
    mask: Option<&RepulsionMask>,
) -> Result<f64, SfdpError> {
    if params.repulsion_exponent == 1.0 {
        return Err(SfdpError::InvalidParam("energy is undefined for p = 1".into()));
    }
    check_sizes(g, layout)?;
    let law = ForceLaw::from_params(params);
    let weights = vec![1.0; g.edge_count()];
    let n = layout.len();
    if let Some((u, v)) = (0..n)
        .into_par_iter()
        .find_map_first(|u| (u + 1..n).find(|&v| layout.position(u) == layout.position(v)).map(|v| (u, v)))
    {
        return Err(SfdpError::Coincident { u, v });
    }
    Ok(exact_energy(g.edges(), &weights, layout, law, mask))
}

/// Exact energy for weighted edges. Coincident pairs are charged as if they
/// sat at the jitter distance, matching the force evaluation.
pub(crate) fn exact_energy(
    edges: &[(usize, usize)],
    weights: &[f64],
    layout: &Layout,
    law: ForceLaw,
    mask: Option<&RepulsionMask>,
) -> f64 {
    let n = layout.len();
    let per_node: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|u| {
            let xu = layout.position(u);
            let mut e = 0.0;
            for v in u + 1..n {
                if mask.is_some_and(|m| !m.repels(u, v)) {
                    continue;
                }
                let mut d2 = squared_distance(xu, layout.position(v));
                if d2 == 0.0 {
                    d2 = (COINCIDENCE_JITTER * law.k).powi(2);
                }
                e += law.repulsion_potential(d2);
            }
            e
        })
        .collect();
    attraction_energy(edges, weights, layout, law) + per_node.iter().sum::<f64>()
}

pub(crate) fn attraction_energy(edges: &[(usize, usize)], weights: &[f64], layout: &Layout, law: ForceLaw) -> f64 {
    edges
        .iter()
        .zip(weights)
        .map(|(&(u, v), w)| w * law.attraction_energy(squared_distance(layout.position(u), layout.position(v))))
        .sum()
}

/// Adds the spring forces of weighted edges to `forces` (row-major).
pub(crate) fn add_attraction(
    edges: &[(usize, usize)],
    weights: &[f64],
    layout: &Layout,
    law: ForceLaw,
    forces: &mut [f64],
) {
    let dim = layout.dim();
    for (&(u, v), w) in edges.iter().zip(weights) {
        let (xu, xv) = (layout.position(u), layout.position(v));
        let s = w * law.attraction_scale(squared_distance(xu, xv));
        for i in 0..dim {
            let f = s * (xv[i] - xu[i]);
            forces[u * dim + i] += f;
            forces[v * dim + i] -= f;
        }
    }
}

/// Exact net force (attraction plus repulsion) on every node, row-major.
pub fn net_force_field(
    g: &Graph,
    layout: &Layout,
    params: &SfdpParams,
    mask: Option<&RepulsionMask>,
) -> Result<Vec<f64>, SfdpError> {
    check_sizes(g, layout)?;
    let law = ForceLaw::from_params(params);
    let field = masked_repulsion(layout, law, 0.0, params.seed, mask, false)?;
    let mut forces = field.forces().to_vec();
    let weights = vec![1.0; g.edge_count()];
    add_attraction(g.edges(), &weights, layout, law, &mut forces);
    Ok(forces)
}

fn check_sizes(g: &Graph, layout: &Layout) -> Result<(), SfdpError> {
    if g.node_count() != layout.len() {
        return Err(SfdpError::SizeMismatch { expected: g.node_count(), found: layout.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use approx::assert_relative_eq;

    fn pair_graph(connected: bool) -> Graph {
        let edges: &[(usize, usize)] = if connected { &[(0, 1)] } else { &[] };
        Graph::unlabeled(GraphKind::Undirected, 2, edges, None).unwrap()
    }

    #[test]
    fn connected_pair_at_unit_distance() {
        // 1/3 + 0.2 / (2 - 1)
        let layout = Layout::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let e = system_energy(&pair_graph(true), &layout, &SfdpParams::default()).unwrap();
        assert_relative_eq!(e, 1.0 / 3.0 + 0.2, epsilon = 1e-15);
    }

    #[test]
    fn far_apart_unconnected_pair_has_vanishing_energy() {
        let g = pair_graph(false);
        let mut last = f64::INFINITY;
        for d in [1e2, 1e4, 1e6, 1e8] {
            let layout = Layout::from_points(&[vec![0.0], vec![d]]).unwrap();
            let e = system_energy(&g, &layout, &SfdpParams { dim: 1, ..Default::default() }).unwrap();
            assert!(e > 0.0 && e < last);
            last = e;
        }
        assert!(last < 1e-8);
    }

    #[test]
    fn errors() {
        let layout = Layout::from_points(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            system_energy(&pair_graph(true), &layout, &SfdpParams::default()),
            Err(SfdpError::Coincident { u: 0, v: 1 })
        ));
        let layout = Layout::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let p1 = SfdpParams { repulsion_exponent: 1.0, ..Default::default() };
        assert!(matches!(system_energy(&pair_graph(true), &layout, &p1), Err(SfdpError::InvalidParam(_))));
    }

    #[test]
    fn net_force_on_balanced_pair_vanishes() {
        let d = 0.2f64.powf(0.25);
        let layout = Layout::from_points(&[vec![0.0, 0.0], vec![d, 0.0]]).unwrap();
        let f = net_force_field(&pair_graph(true), &layout, &SfdpParams::default(), None).unwrap();
        assert!(f.iter().all(|x| x.abs() < 1e-14));
    }
}
