//! Demagnetization factors of a rectangular prism.
//!
//! Closed-form expression for the magnetometric demagnetization factor of a
//! uniformly magnetized rectangular prism (Aharoni, J. Appl. Phys. 83, 3432).
//! The three diagonal factors are obtained by permuting the edge lengths.

use crate::error::MeslError;
use crate::magnet::MagnetSpec;
use crate::Real;

/// Diagonal demagnetization tensor of a rectangular prism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemagFactors<R> {
    pub nxx: R,
    pub nyy: R,
    pub nzz: R,
}

impl<R: Real> DemagFactors<R> {
    pub fn sum(&self) -> R {
        self.nxx + self.nyy + self.nzz
    }
}

/// Demagnetization factor along the axis of length `lc` for a prism with
/// cross-section `la × lb`.
fn prism_factor<R: Real>(la: R, lb: R, lc: R) -> R {
    let two = R::real(2.0);
    let three = R::real(3.0);
    // Semi-axes, as in Aharoni's formula.
    let a = la / two;
    let b = lb / two;
    let c = lc / two;

    let r_abc = (a * a + b * b + c * c).sqrt();
    let r_ab = (a * a + b * b).sqrt();
    let r_bc = (b * b + c * c).sqrt();
    let r_ac = (a * a + c * c).sqrt();

    let mut t = (b * b - c * c) / (two * b * c) * ((r_abc - a) / (r_abc + a)).ln();
    t = t + (a * a - c * c) / (two * a * c) * ((r_abc - b) / (r_abc + b)).ln();
    t = t + b / (two * c) * ((r_ab + a) / (r_ab - a)).ln();
    t = t + a / (two * c) * ((r_ab + b) / (r_ab - b)).ln();
    t = t + c / (two * a) * ((r_bc - b) / (r_bc + b)).ln();
    t = t + c / (two * b) * ((r_ac - a) / (r_ac + a)).ln();
    t = t + two * (a * b).atan2(c * r_abc);
    t = t + (a * a * a + b * b * b - two * c * c * c) / (three * a * b * c);
    t = t + (a * a + b * b - two * c * c) / (three * a * b * c) * r_abc;
    t = t + c / (a * b) * (r_ac + r_bc);
    let cubes = r_ab * r_ab * r_ab + r_bc * r_bc * r_bc + r_ac * r_ac * r_ac;
    t = t - cubes / (three * a * b * c);
    t / R::real(std::f64::consts::PI)
}

/// Demagnetization factors for a prism with edge lengths `(lx, ly, lz)`.
pub fn demag_factors_for<R: Real>(lx: R, ly: R, lz: R) -> Result<DemagFactors<R>, MeslError> {
    if lx <= R::zero() || ly <= R::zero() || lz <= R::zero() || !(lx * ly * lz).is_finite() {
        return Err(MeslError::InvalidGeometry(format!(
            "prism dimensions must be positive and finite, got ({lx}, {ly}, {lz})"
        )));
    }
    Ok(DemagFactors {
        nxx: prism_factor(ly, lz, lx),
        nyy: prism_factor(lz, lx, ly),
        nzz: prism_factor(lx, ly, lz),
    })
}

/// Demagnetization factors for a magnet's geometry.
pub fn demag_factors<R: Real>(spec: &MagnetSpec<R>) -> Result<DemagFactors<R>, MeslError> {
    demag_factors_for(spec.length_x, spec.width_y, spec.thickness_z)
}
