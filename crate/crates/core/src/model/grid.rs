use crate::error::{Error, Result};

/// Uniform cell-centred mesh on `[l1, l2]`.
///
/// Node `i` sits at the midpoint `l1 + (i + 1/2) dx` of cell `i`, and every
/// node carries the same quadrature weight `dx = (l2 - l1) / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    l1: f64,
    l2: f64,
    n: usize,
}

impl Grid {
    pub fn new(l1: f64, l2: f64, n: usize) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be finite, got [{l1}, {l2}]"
            )));
        }
        if l1 >= l2 {
            return Err(Error::InvalidGrid(format!("need l1 < l2, got [{l1}, {l2}]")));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("need at least one node".into()));
        }
        Ok(Grid { l1, l2, n })
    }

    /// Grid on `[-length/2, length/2]`.
    pub fn centered(length: f64, n: usize) -> Result<Self> {
        Self::new(-0.5 * length, 0.5 * length, n)
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.l2 - self.l1
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.l1 + (i as f64 + 0.5) * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Quadrature weights; all equal to `dx`.
    pub fn weights(&self) -> Vec<f64> {
        vec![self.dx(); self.n]
    }

    /// Midpoint-rule integral of nodal values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.dx() * values.iter().sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_interior_and_increasing() {
        let g = Grid::new(-0.2, 0.2, 7).unwrap();
        let x = g.nodes();
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        assert!(x.iter().all(|&v| v > -0.2 && v < 0.2));
        assert!((x[3]).abs() < 1e-16);
    }

    #[test]
    fn weights_sum_to_length_under_refinement() {
        let mut g = Grid::new(-3.7, 11.1, 13).unwrap();
        for _ in 0..8 {
            let s: f64 = g.weights().iter().sum();
            assert!((s - g.length()).abs() <= 1e-12 * g.length());
            g = Grid::new(g.l1(), g.l2(), 2 * g.len()).unwrap();
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(1.0, 1.0, 4).is_err());
        assert!(Grid::new(2.0, 1.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 0).is_err());
        assert!(Grid::new(0.0, f64::NAN, 3).is_err());
    }

    #[test]
    fn single_node_grid() {
        let g = Grid::new(-0.5, 0.5, 1).unwrap();
        assert_eq!(g.nodes(), vec![0.0]);
        assert_eq!(g.dx(), 1.0);
    }
}
