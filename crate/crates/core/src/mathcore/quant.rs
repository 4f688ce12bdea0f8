use super::PreferenceRay;
use crate::{Error, Result};

/// Uniform binning of `[lo, hi]` into `tau` bins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantSpec {
    lo: f64,
    hi: f64,
    tau: u32,
}

impl QuantSpec {
    pub fn new(lo: f64, hi: f64, tau: u32) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("quantizer range ({lo}, {hi}) must satisfy lo < hi")));
        }
        if tau == 0 {
            return Err(Error::invalid("quantizer needs at least one bin"));
        }
        Ok(QuantSpec { lo, hi, tau })
    }

    /// Bins of `width` covering `[lo, hi]`; the width must divide the range.
    pub fn with_width(lo: f64, hi: f64, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::invalid(format!("bin width must be positive, got {width}")));
        }
        let bins = (hi - lo) / width;
        let tau = bins.round();
        if (bins - tau).abs() > 1e-9 || tau < 1.0 {
            return Err(Error::invalid(format!(
                "bin width {width} does not divide the range ({lo}, {hi})"
            )));
        }
        Self::new(lo, hi, tau as u32)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / f64::from(self.tau)
    }

    pub fn center(&self, k: u32) -> f64 {
        // (2k+1)/(2 tau) keeps centers like 0.35 exactly representable-nearest.
        self.lo + (self.hi - self.lo) * f64::from(2 * k + 1) / f64::from(2 * self.tau)
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.tau).map(|k| self.center(k)).collect()
    }
}

/// Center of the bin containing `x`; values outside the range clamp to the
/// nearest boundary bin.
pub fn quantize(x: f64, spec: &QuantSpec) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("cannot quantize non-finite value {x}")));
    }
    let pos = ((x - spec.lo) / spec.width()).floor();
    let k = pos.clamp(0.0, f64::from(spec.tau - 1)) as u32;
    Ok(spec.center(k))
}

/// Quantize `r1` on the `tau` grid over `[0, 1]` and set `r2 = 1 - r1`.
pub fn quantize_ray(ray: PreferenceRay, tau: u32) -> Result<PreferenceRay> {
    let spec = QuantSpec::new(0.0, 1.0, tau)?;
    let r1 = quantize(ray.r1(), &spec)?;
    PreferenceRay::from_first(r1)
}
