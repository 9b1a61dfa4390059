//! Target regions for the subordination checks and signed membership margins.
//!
//! Every test returns a margin that is positive strictly inside the region and
//! negative outside; `inside` is exactly `margin > 0`.

use std::f64::consts::E;
use std::fmt;

use crate::error::DomainError;
use crate::hypergeom::Complex;

/// Radius `1 - 1/e` of the disk about 1 contained in `exp(𝔻)`.
pub const EXP_DISK_RADIUS: f64 = 1.0 - 1.0 / E;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    pub margin: f64,
}

impl Membership {
    fn from_margin(margin: f64) -> Self {
        Self {
            inside: margin > 0.0,
            margin,
        }
    }
}

/// `|x - 1| < 1 - 1/e`
pub fn in_exp_disk(x: Complex) -> Membership {
    Membership::from_margin(EXP_DISK_RADIUS - (x - 1.0).norm())
}

/// Exact membership in `exp(𝔻) = { x : |Log x| < 1 }` (principal branch).
pub fn in_exp_image(x: Complex) -> Result<Membership, DomainError> {
    if x == Complex::new(0.0, 0.0) {
        return Err(DomainError::ZeroArgument);
    }
    Ok(Membership::from_margin(1.0 - x.ln().norm()))
}

/// `(C, D)` with `-1 <= D < C <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JanowskiPair {
    c: f64,
    d: f64,
}

impl JanowskiPair {
    pub fn new(c: f64, d: f64) -> Result<Self, DomainError> {
        if !(c.is_finite() && d.is_finite() && -1.0 <= d && d < c && c <= 1.0) {
            return Err(DomainError::InvalidPair { c, d });
        }
        Ok(Self { c, d })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Image of `z` under the Möbius map of the given convention.
    pub fn map(&self, z: Complex, convention: JanowskiConvention) -> Complex {
        let d = match convention {
            JanowskiConvention::Plus => self.d,
            JanowskiConvention::Minus => -self.d,
        };
        (1.0 + self.c * z) / (1.0 + d * z)
    }
}

/// Sign in the denominator of the Janowski map.
///
/// `Plus` is `(1+Cz)/(1+Dz)`, `Minus` is `(1+Cz)/(1-Dz)`. The two images
/// differ unless `D = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JanowskiConvention {
    #[default]
    Plus,
    Minus,
}

impl fmt::Display for JanowskiConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JanowskiConvention::Plus => "(1+Cz)/(1+Dz)",
            JanowskiConvention::Minus => "(1+Cz)/(1-Dz)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionDescriptor {
    Disk {
        center: Complex,
        radius: f64,
    },
    /// `{ x : Re x > boundary_re }`
    HalfPlane {
        boundary_re: f64,
    },
}

impl RegionDescriptor {
    pub fn membership(&self, x: Complex) -> Membership {
        match *self {
            RegionDescriptor::Disk { center, radius } => {
                Membership::from_margin(radius - (x - center).norm())
            }
            RegionDescriptor::HalfPlane { boundary_re } => {
                Membership::from_margin(x.re - boundary_re)
            }
        }
    }

    /// Unsigned distance from `x` to the region boundary.
    pub fn boundary_distance(&self, x: Complex) -> f64 {
        self.membership(x).margin.abs()
    }
}

/// Image of `𝔻` under `(1+Cz)/(1+Dz)`.
pub fn janowski_region(j: &JanowskiPair) -> RegionDescriptor {
    janowski_region_for(j, JanowskiConvention::Plus)
}

/// Image of `𝔻` under the map of `convention`.
///
/// Under `Minus` the pair `D = -C` collapses the map to the constant 1 and
/// the returned disk has radius 0.
pub fn janowski_region_for(j: &JanowskiPair, convention: JanowskiConvention) -> RegionDescriptor {
    let (c, d) = match convention {
        JanowskiConvention::Plus => (j.c, j.d),
        JanowskiConvention::Minus => (j.c, -j.d),
    };
    if d == -1.0 {
        RegionDescriptor::HalfPlane {
            boundary_re: (1.0 - c) / 2.0,
        }
    } else if d == 1.0 {
        // (1+Cz)/(1+z): pole at z = -1, image Re > (1+C)/2
        RegionDescriptor::HalfPlane {
            boundary_re: (1.0 + c) / 2.0,
        }
    } else {
        let denom = 1.0 - d * d;
        RegionDescriptor::Disk {
            center: Complex::new((1.0 - c * d) / denom, 0.0),
            radius: (c - d).abs() / denom,
        }
    }
}

/// Membership in the `(1+Cz)/(1+Dz)` image.
pub fn in_janowski(x: Complex, j: &JanowskiPair) -> Membership {
    janowski_region(j).membership(x)
}
