//! Modified Bessel functions of the second kind, orders 0, 1, 2.
//!
//! Small arguments use the ascending series with the logarithmic term; large
//! arguments use Steed's continued fraction (Temme's CF2 form) at order 0,
//! then the recurrence `K₂ = K₀ + 2K₁ / z`.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;

fn series_k2(z: f64) -> f64 {
    let q = 0.25 * z * z;
    // I₂ and the digamma sum share the factor (z²/4)^k / (k! (k+2)!).
    let mut term = 0.5; // k = 0: 1 / (0! 2!)
    let mut h_k = 0.0; // H_k
    let mut h_k2 = 1.5; // H_{k+2}
    let mut i2_sum = 0.0;
    let mut psi_sum = 0.0;
    let mut k = 0.0;
    loop {
        i2_sum += term;
        psi_sum += term * (h_k + h_k2 - 2.0 * EULER_GAMMA);
        k += 1.0;
        term *= q / (k * (k + 2.0));
        h_k += 1.0 / k;
        h_k2 += 1.0 / (k + 2.0);
        if term < 1e-18 * i2_sum {
            break;
        }
    }
    let i2 = q * i2_sum;
    2.0 / (z * z) - 0.5 - (0.5 * z).ln() * i2 + 0.125 * z * z * psi_sum
}

/// Exponentially scaled `(e^z K₀(z), e^z K₁(z))` for `z > 0` from CF2 at ν = 0.
fn cf2_scaled_k0_k1(z: f64) -> (f64, f64) {
    let nu: f64 = 0.0;
    let mut bi = 2.0 * (1.0 + z);
    let mut di = 1.0 / bi;
    let mut delhi = di;
    let mut hi = di;
    let mut qi = 0.0;
    let mut qip1 = 1.0;
    let mut ai = -(0.25 - nu * nu);
    let a1 = ai;
    let mut ci = -ai;
    let mut bqi = -ai;
    let mut s = 1.0 + bqi * delhi;
    for i in 2..10_000 {
        ai -= 2.0 * (i - 1) as f64;
        ci = -ai * ci / i as f64;
        let tmp = (qi - bi * qip1) / ai;
        qi = qip1;
        qip1 = tmp;
        bqi += ci * qip1;
        bi += 2.0;
        di = 1.0 / (bi + ai * di);
        delhi = (bi * di - 1.0) * delhi;
        hi += delhi;
        let dels = bqi * delhi;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    hi *= -a1;
    let k0 = (std::f64::consts::PI / (2.0 * z)).sqrt() / s;
    let k1 = k0 * (nu + z + 0.5 - hi) / z;
    (k0, k1)
}

/// `K₂(z)` for `z > 0`.
pub fn bessel_k2(z: f64) -> f64 {
    assert!(z > 0.0, "K2 requires a positive argument");
    if z <= SERIES_LIMIT {
        series_k2(z)
    } else {
        let (k0, k1) = cf2_scaled_k0_k1(z);
        (k0 + 2.0 * k1 / z) * (-z).exp()
    }
}

/// `z² K₂(z)`, finite at the origin where it equals 2.
pub fn z2_bessel_k2(z: f64) -> f64 {
    if z == 0.0 {
        return 2.0;
    }
    if z < 1e-4 {
        // 2 - z²/2 + O(z⁴ ln z)
        return 2.0 - 0.5 * z * z;
    }
    z * z * bessel_k2(z)
}

/// `K₀(z)` and `K₁(z)` for `z > 2` (continued-fraction branch only).
pub fn bessel_k0_k1_large(z: f64) -> (f64, f64) {
    assert!(z > SERIES_LIMIT, "continued fraction branch needs z > 2");
    let (k0, k1) = cf2_scaled_k0_k1(z);
    let e = (-z).exp();
    (k0 * e, k1 * e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Tabulated K₂ values.
        let table = [
            (0.5, 7.550_183_551_240_869),
            (1.0, 1.624_838_898_635_177_5),
            (2.0, 0.253_759_754_566_055_9),
            (5.0, 0.005_308_943_712_223_46),
        ];
        for (z, k) in table {
            let got = bessel_k2(z);
            assert!(((got - k) / k).abs() < 1e-13, "z={z}: {got} vs {k}");
        }
    }

    #[test]
    fn branches_agree_near_switch() {
        let below = series_k2(2.0);
        let above = {
            let (k0, k1) = cf2_scaled_k0_k1(2.0);
            (k0 + 2.0 * k1 / 2.0) * (-2.0f64).exp()
        };
        assert!(((below - above) / below).abs() < 1e-13);
    }

    #[test]
    fn small_argument_limit() {
        for z in [1e-6, 1e-4, 1e-3, 1e-2] {
            assert!((z2_bessel_k2(z) / 2.0 - 1.0).abs() < z);
        }
        assert_eq!(z2_bessel_k2(0.0), 2.0);
    }
}
