//! Position-space `ω̂ = √(m² - Δ)` through the Macdonald kernel
//! `K(r) = -2m² K₂(mr) / ((2π)² r²)`.
//!
//! The bare convolution diverges like `r⁻⁴`, so the kernel acts on the
//! symmetric difference `f(x+r) - f(x)`:
//!
//! ```text
//! ω̂f ≈ m f + h³ Σ'_r K(r) (f(x+r) - f(x)) + ½ (I₂ - C₂) Δf
//! ```
//!
//! The lattice sum misrepresents the second moment of the kernel near the
//! origin; `C₂` is that lattice moment and `I₂` the continuum one, both
//! weighted by `χ(r) = exp(-(r/a)²)` so only the singular core is corrected.
//! `Δ` is a sixth-order periodic difference.

use rayon::prelude::*;

use super::bessel::z2_bessel_k2;
use super::fft3::{Direction, Fft3};
use super::{FieldError, MomentumGrid, PositionField};
use crate::linalg::{pairwise_sum, C64};

const FOUR_PI_SQ: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct KernelOptions {
    /// Truncation radius satisfies `e^{-mR} = tail`.
    pub tail: f64,
    /// Width `a` of the core weight; defaults to `1.5/m`.
    pub core_width: Option<f64>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { tail: 1e-12, core_width: None }
    }
}

/// Precomputed kernel data for one grid.
#[derive(Clone, Debug)]
pub struct OmegaKernel {
    grid: MomentumGrid,
    fft: Fft3,
    /// FFT of the periodized kernel, pre-scaled by `h³ / n³`.
    kernel_hat: Vec<C64>,
    pub radius: f64,
    pub core_width: f64,
    pub c0: f64,
    pub c2: f64,
    pub i2: f64,
}

/// `K(r) r⁴` as a function of `z = m r`.
fn kernel_r4(z: f64) -> f64 {
    -2.0 * z2_bessel_k2(z) / FOUR_PI_SQ
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

impl OmegaKernel {
    pub fn new(grid: &MomentumGrid, opts: &KernelOptions) -> Result<Self, FieldError> {
        let m = grid.mass;
        if !(m > 0.0) {
            return Err(FieldError::NonPositiveMass(m));
        }
        let h = grid.dx(0);
        if (0..3).any(|a| ((grid.dx(a) - h) / h).abs() > 1e-12) {
            return Err(FieldError::NonCubicCells);
        }
        let radius = -opts.tail.ln() / m;
        let a = opts.core_width.unwrap_or(1.5 / m);
        let rmax = (radius / h).floor() as i64;
        let r2max = (radius / h).powi(2);
        // K(r) on every integer |r/h|² inside the radius.
        let table: Vec<f64> = (0..=(r2max as usize))
            .into_par_iter()
            .map(|q| {
                if q == 0 {
                    return 0.0;
                }
                let r = (q as f64).sqrt() * h;
                kernel_r4(m * r) / (r * r * r * r)
            })
            .collect();
        let k_of = |q: i64| table[q as usize];

        let [nx, ny, nz] = grid.n;
        let signed = |i: usize, n: usize| if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
        let images = |base: i64, n: usize| -> Vec<i64> {
            let n = n as i64;
            let lo = (-rmax - base).div_euclid(n) - 1;
            let hi = (rmax - base).div_euclid(n) + 1;
            (lo..=hi).map(|c| base + c * n).filter(|v| v.abs() <= rmax).collect()
        };
        let r2lim = r2max as i64;
        let kper: Vec<f64> = (0..nz)
            .into_par_iter()
            .flat_map_iter(|iz| {
                let lz = images(signed(iz, nz), nz);
                let mut plane = vec![0.0; nx * ny];
                for iy in 0..ny {
                    let ly = images(signed(iy, ny), ny);
                    for ix in 0..nx {
                        let lx = images(signed(ix, nx), nx);
                        let mut acc = 0.0;
                        for &z in &lz {
                            for &y in &ly {
                                let ryz = z * z + y * y;
                                if ryz > r2lim {
                                    continue;
                                }
                                for &x in &lx {
                                    let q = ryz + x * x;
                                    if q > 0 && q <= r2lim {
                                        acc += k_of(q);
                                    }
                                }
                            }
                        }
                        plane[iy * nx + ix] = acc;
                    }
                }
                plane
            })
            .collect();
        let h3 = h * h * h;
        let c0 = pairwise_sum(&kper) * h3;

        // Lattice second moment of the weighted core, independent of the box.
        let cr = ((6.0 * a).min(radius) / h).ceil() as i64;
        let rows: Vec<f64> = (-cr..=cr)
            .into_par_iter()
            .map(|z| {
                let mut acc = 0.0;
                for y in -cr..=cr {
                    for x in -cr..=cr {
                        let q = x * x + y * y + z * z;
                        if q == 0 || q > r2lim {
                            continue;
                        }
                        let r2 = q as f64 * h * h;
                        acc += k_of(q) * (-(r2 / (a * a))).exp() * r2;
                    }
                }
                acc
            })
            .collect();
        let c2 = pairwise_sum(&rows) * h3 / 3.0;
        let i2 = 4.0 * std::f64::consts::PI / 3.0
            * simpson(|r| kernel_r4(m * r) * (-(r / a).powi(2)).exp(), 0.0, 12.0 * a, 24_000);

        let fft = Fft3::new(grid.n);
        let mut kernel_hat: Vec<C64> = kper.iter().map(|&v| C64::new(v, 0.0)).collect();
        fft.process(&mut kernel_hat, Direction::Forward);
        let scale = h3 / grid.len() as f64;
        kernel_hat.iter_mut().for_each(|z| *z *= scale);
        Ok(Self { grid: grid.clone(), fft, kernel_hat, radius, core_width: a, c0, c2, i2 })
    }

    /// Applies the kernel form of `ω̂` to one component block.
    pub fn apply_block(&self, f: &[C64]) -> Vec<C64> {
        let m = self.grid.mass;
        let h = self.grid.dx(0);
        let mut conv = f.to_vec();
        self.fft.process(&mut conv, Direction::Forward);
        conv.iter_mut().zip(&self.kernel_hat).for_each(|(a, b)| *a *= b);
        self.fft.process(&mut conv, Direction::Inverse);
        let lap = laplacian6(&self.grid, f, h);
        let corr = 0.5 * (self.i2 - self.c2);
        f.iter()
            .zip(&conv)
            .zip(&lap)
            .map(|((fv, cv), lv)| fv * (m - self.c0) + cv + lv * corr)
            .collect()
    }

    pub fn apply(&self, field: &PositionField) -> PositionField {
        let n = field.grid.len();
        let data = field.data.par_chunks(n).flat_map_iter(|blk| self.apply_block(blk)).collect();
        PositionField { grid: field.grid.clone(), ncomp: field.ncomp, data }
    }
}

fn laplacian6(grid: &MomentumGrid, f: &[C64], h: f64) -> Vec<C64> {
    const C: [f64; 4] = [-49.0 / 18.0, 1.5, -0.15, 1.0 / 90.0];
    let [nx, ny, nz] = grid.n;
    let idx = |x: usize, y: usize, z: usize| (z * ny + y) * nx + x;
    let wrap = |i: usize, d: i64, n: usize| (i as i64 + d).rem_euclid(n as i64) as usize;
    let inv = 1.0 / (h * h);
    (0..f.len())
        .into_par_iter()
        .map(|p| {
            let [x, y, z] = grid.unravel(p);
            let mut acc = f[p] * (3.0 * C[0]);
            for s in 1..4 {
                let d = s as i64;
                acc += (f[idx(wrap(x, d, nx), y, z)] + f[idx(wrap(x, -d, nx), y, z)]) * C[s];
                acc += (f[idx(x, wrap(y, d, ny), z)] + f[idx(x, wrap(y, -d, ny), z)]) * C[s];
                acc += (f[idx(x, y, wrap(z, d, nz))] + f[idx(x, y, wrap(z, -d, nz))]) * C[s];
            }
            acc * inv
        })
        .collect()
}

/// Kernel realization of `ω̂` with default options.
pub fn apply_omega_kernel(field: &PositionField) -> Result<PositionField, FieldError> {
    Ok(OmegaKernel::new(&field.grid, &KernelOptions::default())?.apply(field))
}
