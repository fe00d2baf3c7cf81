use rand::Rng;
use rayon::prelude::*;

use super::SfdpError;

/// Node positions in `R^dim`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    dim: usize,
    coords: Vec<f64>,
}

impl Layout {
    pub fn zeros(node_count: usize, dim: usize) -> Self {
        assert!(dim > 0, "layout dimension must be positive");
        Layout { dim, coords: vec![0.0; node_count * dim] }
    }

    pub fn from_coords(dim: usize, coords: Vec<f64>) -> Result<Self, SfdpError> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(SfdpError::DimensionMismatch { expected: dim, found: coords.len() });
        }
        let layout = Layout { dim, coords };
        layout.check_finite()?;
        Ok(layout)
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self, SfdpError> {
        let dim = points.first().map_or(1, |p| p.len());
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(SfdpError::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Layout::from_coords(dim, coords)
    }

    /// Uniform positions in the box `[0, side)^dim`.
    pub fn random_uniform<R: Rng + ?Sized>(node_count: usize, dim: usize, side: f64, rng: &mut R) -> Self {
        let coords = (0..node_count * dim).map(|_| rng.gen::<f64>() * side).collect();
        Layout { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn position(&self, u: usize) -> &[f64] {
        &self.coords[u * self.dim..(u + 1) * self.dim]
    }

    pub fn position_mut(&mut self, u: usize) -> &mut [f64] {
        &mut self.coords[u * self.dim..(u + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        squared_distance(self.position(u), self.position(v)).sqrt()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            for (ci, x) in c.iter_mut().zip(p) {
                *ci += x;
            }
        }
        let n = self.len().max(1) as f64;
        c.iter_mut().for_each(|x| *x /= n);
        c
    }

    pub fn translate(&mut self, offset: &[f64]) {
        assert_eq!(offset.len(), self.dim);
        for p in self.coords.chunks_exact_mut(self.dim) {
            for (x, o) in p.iter_mut().zip(offset) {
                *x += o;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        self.coords.iter_mut().for_each(|x| *x *= factor);
    }

    /// Largest distance between any two positions (exact, quadratic).
    pub fn max_pairwise_distance(&self) -> f64 {
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map(|u| {
                let pu = self.position(u);
                (u + 1..n).map(|v| squared_distance(pu, self.position(v))).fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
            .sqrt()
    }

    pub fn check_finite(&self) -> Result<(), SfdpError> {
        match self.coords.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(SfdpError::NonFiniteCoordinate(i / self.dim)),
            None => Ok(()),
        }
    }

    /// Bitwise equality of all coordinates.
    pub fn bit_eq(&self, other: &Layout) -> bool {
        self.dim == other.dim
            && self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_helpers() {
        let mut l = Layout::from_points(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![6.0, 8.0]]).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.distance(0, 1), 5.0);
        assert_eq!(l.max_pairwise_distance(), 10.0);
        assert_eq!(l.centroid(), vec![3.0, 4.0]);
        l.translate(&[1.0, 1.0]);
        assert_eq!(l.position(0), &[1.0, 1.0]);
        l.scale(2.0);
        assert_eq!(l.position(2), &[14.0, 18.0]);
    }

    #[test]
    fn rejects_ragged_and_non_finite_input() {
        assert!(Layout::from_points(&[vec![0.0], vec![1.0, 2.0]]).is_err());
        assert!(Layout::from_points(&[vec![f64::NAN, 0.0]]).is_err());
    }
}
