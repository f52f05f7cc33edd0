//! Three-dimensional FFT over `(z, y, x)` row-major blocks, x fastest.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::linalg::C64;

#[derive(Clone)]
pub struct Fft3 {
    shape: [usize; 3],
    fwd: [Arc<dyn Fft<f64>>; 3],
    inv: [Arc<dyn Fft<f64>>; 3],
}

impl std::fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fft3{:?}", self.shape)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `Σ_x e^{-ikx}`
    Forward,
    /// `Σ_k e^{+ikx}`, unnormalized
    Inverse,
}

impl Fft3 {
    /// `shape = [nx, ny, nz]`.
    pub fn new(shape: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = shape.map(|n| planner.plan_fft_forward(n));
        let inv = shape.map(|n| planner.plan_fft_inverse(n));
        Self { shape, fwd, inv }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Transforms one block of `nx*ny*nz` values in place.
    pub fn process(&self, data: &mut [C64], dir: Direction) {
        let [nx, ny, nz] = self.shape;
        assert_eq!(data.len(), nx * ny * nz, "block size does not match FFT shape");
        let plans = match dir {
            Direction::Forward => &self.fwd,
            Direction::Inverse => &self.inv,
        };
        let scratch_len = plans.iter().map(|p| p.get_inplace_scratch_len()).max().unwrap_or(0);
        let mut scratch = vec![C64::new(0.0, 0.0); scratch_len];
        for row in data.chunks_exact_mut(nx) {
            plans[0].process_with_scratch(row, &mut scratch);
        }
        let mut line = vec![C64::new(0.0, 0.0); ny.max(nz)];
        for iz in 0..nz {
            for ix in 0..nx {
                for iy in 0..ny {
                    line[iy] = data[(iz * ny + iy) * nx + ix];
                }
                plans[1].process_with_scratch(&mut line[..ny], &mut scratch);
                for iy in 0..ny {
                    data[(iz * ny + iy) * nx + ix] = line[iy];
                }
            }
        }
        for iy in 0..ny {
            for ix in 0..nx {
                for iz in 0..nz {
                    line[iz] = data[(iz * ny + iy) * nx + ix];
                }
                plans[2].process_with_scratch(&mut line[..nz], &mut scratch);
                for iz in 0..nz {
                    data[(iz * ny + iy) * nx + ix] = line[iz];
                }
            }
        }
    }
}
