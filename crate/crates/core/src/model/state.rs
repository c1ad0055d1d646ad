use std::ops::Deref;

/// Entries in `(-TOL_POS, 0)` are treated as rounding noise and clamped.
pub const TOL_POS: f64 = 1e-12;

/// Nodal values of `u(t, .)` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub values: Vec<f64>,
    pub time: f64,
}

impl StateVector {
    pub fn new(values: Vec<f64>, time: f64) -> Self {
        StateVector { values, time }
    }

    pub fn zeros(n: usize, time: f64) -> Self {
        StateVector {
            values: vec![0.0; n],
            time,
        }
    }

    pub fn constant(n: usize, c: f64, time: f64) -> Self {
        StateVector {
            values: vec![c; n],
            time,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl Deref for StateVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `max_i |u_i - v_i|`.
pub fn sup_distance(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}
