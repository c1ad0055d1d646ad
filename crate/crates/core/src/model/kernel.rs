use crate::error::{Error, Result};

/// Allowed deviation of a tabulated kernel's mass from one.
pub const TABLE_MASS_TOL: f64 = 1e-6;

/// An even, nonnegative dispersal kernel with unit mass and `J(0) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `J(x) = exp(-|x| / D) / (2 D)`.
    Laplace { scale: f64 },
    Tabulated(TabulatedKernel),
}

/// Samples of `J` at `x_k = k * half_width / (m - 1)`, `k = 0..m`.
///
/// Evaluated by linear interpolation in `|x|` and clipped to zero outside
/// `[-half_width, half_width]`, so the kernel is even by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    samples: Vec<f64>,
    half_width: f64,
    spacing: f64,
    /// `cumulative[k] = ∫_0^{x_k} J`.
    cumulative: Vec<f64>,
}

impl TabulatedKernel {
    pub fn new(samples: Vec<f64>, half_width: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidKernel(
                "a tabulated kernel needs at least two samples".into(),
            ));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidKernel(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if let Some((k, v)) = samples
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidKernel(format!(
                "sample {k} is {v}; samples must be finite and nonnegative"
            )));
        }
        if samples[0] <= 0.0 {
            return Err(Error::InvalidKernel("J(0) must be positive".into()));
        }
        let spacing = half_width / (samples.len() - 1) as f64;
        let mut cumulative = Vec::with_capacity(samples.len());
        cumulative.push(0.0);
        for w in samples.windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + 0.5 * spacing * (w[0] + w[1]));
        }
        let mass = 2.0 * cumulative.last().unwrap();
        if (mass - 1.0).abs() > TABLE_MASS_TOL {
            return Err(Error::InvalidKernel(format!(
                "tabulated kernel mass is {mass}, expected 1 within {TABLE_MASS_TOL:e}"
            )));
        }
        Ok(TabulatedKernel {
            samples,
            half_width,
            spacing,
            cumulative,
        })
    }

    /// Tabulates `f` on `m` uniform samples of `[0, half_width]` and rescales
    /// the table to unit mass.
    pub fn from_fn(f: impl Fn(f64) -> f64, half_width: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidKernel("need at least two samples".into()));
        }
        let h = half_width / (m - 1) as f64;
        let raw: Vec<f64> = (0..m).map(|k| f(k as f64 * h)).collect();
        let half_mass: f64 = raw.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
        if half_mass.is_nan() || half_mass <= 0.0 {
            return Err(Error::InvalidKernel("tabulated function has no mass".into()));
        }
        let scale = 0.5 / half_mass;
        Self::new(raw.into_iter().map(|v| v * scale).collect(), half_width)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        if r > self.half_width {
            return 0.0;
        }
        let pos = r / self.spacing;
        let k = (pos.floor() as usize).min(self.samples.len() - 2);
        let frac = pos - k as f64;
        self.samples[k] + frac * (self.samples[k + 1] - self.samples[k])
    }

    /// `∫_0^r J` for `r >= 0`.
    fn half_integral(&self, r: f64) -> f64 {
        if r >= self.half_width {
            return *self.cumulative.last().unwrap();
        }
        let pos = r / self.spacing;
        let k = (pos.floor() as usize).min(self.samples.len() - 2);
        let s = r - k as f64 * self.spacing;
        let slope = (self.samples[k + 1] - self.samples[k]) / self.spacing;
        self.cumulative[k] + s * self.samples[k] + 0.5 * slope * s * s
    }
}

impl KernelSpec {
    pub fn laplace(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidKernel(format!(
                "Laplace scale must be positive, got {scale}"
            )));
        }
        Ok(KernelSpec::Laplace { scale })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            KernelSpec::Laplace { scale } => (-x.abs() / scale).exp() / (2.0 * scale),
            KernelSpec::Tabulated(t) => t.eval(x),
        }
    }

    /// Characteristic dispersal distance: `D` for Laplace, the half-width for tables.
    pub fn length_scale(&self) -> f64 {
        match self {
            KernelSpec::Laplace { scale } => *scale,
            KernelSpec::Tabulated(t) => t.half_width,
        }
    }

    /// Exact `∫_lo^hi J(x) dx` (the tabulated variant integrates its
    /// piecewise-linear interpolant exactly).
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi < lo {
            return -self.integral(hi, lo);
        }
        match self {
            KernelSpec::Laplace { scale } => {
                if lo >= 0.0 {
                    laplace_tail_between(lo, hi, *scale)
                } else if hi <= 0.0 {
                    laplace_tail_between(-hi, -lo, *scale)
                } else {
                    // straddles zero
                    laplace_tail_between(0.0, -lo, *scale) + laplace_tail_between(0.0, hi, *scale)
                }
            }
            KernelSpec::Tabulated(t) => {
                let g = |x: f64| x.signum() * t.half_integral(x.abs());
                g(hi) - g(lo)
            }
        }
    }
}

/// `∫_lo^hi exp(-x/D)/(2D) dx` for `0 <= lo <= hi`, without cancellation.
fn laplace_tail_between(lo: f64, hi: f64, scale: f64) -> f64 {
    0.5 * (-lo / scale).exp() * (-(-(hi - lo) / scale).exp_m1())
}

/// Mass of the kernel on `[-half_width, half_width]`.
pub fn kernel_mass(kernel: &KernelSpec, half_width: f64) -> Result<f64> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::InvalidKernel(format!(
            "half-width must be positive, got {half_width}"
        )));
    }
    Ok(kernel.integral(-half_width, half_width))
}
