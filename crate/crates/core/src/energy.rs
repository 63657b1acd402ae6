//! Complex energies, their region classification, and the branch of the
//! square root used throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Regions of the complex energy plane. The kernel of the resolvent takes a
/// different closed form in each of the three off-axis regions; the real axis
/// is kept separate because the resolvent is not defined there.
///
/// Purely imaginary energies (Re E = 0, Im E != 0) are assigned to
/// `UpperHalf`/`LowerHalf` by the sign of the imaginary part; the kernel
/// formulas for those regions extend continuously onto that axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// Re E < 0, Im E != 0
    NegRe,
    /// Re E >= 0, Im E > 0
    UpperHalf,
    /// Re E >= 0, Im E < 0
    LowerHalf,
    /// E real, E > 0
    PositiveAxis,
    /// E real, E < 0
    NegativeAxis,
    /// E = 0
    Origin,
}

/// A complex energy together with its region. Classification happens once at
/// construction and is total: every finite complex number lands in exactly
/// one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    value: Complex64,
    region: Region,
}

impl ComplexEnergy {
    pub fn new(value: Complex64) -> Self {
        let region = if value.im != 0.0 {
            if value.re < 0.0 {
                Region::NegRe
            } else if value.im > 0.0 {
                Region::UpperHalf
            } else {
                Region::LowerHalf
            }
        } else if value.re > 0.0 {
            Region::PositiveAxis
        } else if value.re < 0.0 {
            Region::NegativeAxis
        } else {
            Region::Origin
        };
        Self { value, region }
    }

    pub fn real(e: f64) -> Self {
        Self::new(Complex64::new(e, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn conj(&self) -> Self {
        Self::new(self.value.conj())
    }

    /// True when the energy sits on the imaginary axis (Re E = 0, Im E != 0),
    /// where the region formulas are a continuous extension rather than one
    /// of the three off-axis regions proper.
    pub fn on_imaginary_axis(&self) -> bool {
        self.value.re == 0.0 && self.value.im != 0.0
    }

    pub fn is_off_real_axis(&self) -> bool {
        self.value.im != 0.0
    }
}

impl From<Complex64> for ComplexEnergy {
    fn from(value: Complex64) -> Self {
        Self::new(value)
    }
}

/// The branch of the square root fixed once for the whole library: arguments
/// are taken in (-pi, pi], images in (-pi/2, pi/2]. Negative real input maps
/// to the positive imaginary axis; the cut runs along the negative real axis.
///
/// A `-0.0` imaginary part is normalized to `+0.0` first so that negative
/// reals always sit on the upper side of the cut.
pub fn branch_sqrt(e: Complex64) -> Complex64 {
    let e = if e.im == 0.0 {
        Complex64::new(e.re, 0.0)
    } else {
        e
    };
    e.sqrt()
}
