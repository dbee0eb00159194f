// All transcendental calls go through libm so that std and no_std builds
// produce bit-identical paths.

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[inline]
pub(crate) fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// Running sum carried as an unevaluated pair `hi + lo` (Neumaier); products
/// enter exactly through `fma`.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    hi: f64,
    lo: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let s = self.hi + x;
        self.lo += if abs(self.hi) >= abs(x) {
            (self.hi - s) + x
        } else {
            (x - s) + self.hi
        };
        self.hi = s;
    }

    /// Adds `a·b` with its rounding error.
    #[inline]
    pub(crate) fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p);
        self.lo += libm::fma(a, b, -p);
    }

    /// Adds `a·(hi + lo)` of another accumulator.
    #[inline]
    pub(crate) fn add_scaled(&mut self, a: f64, other: Compensated) {
        self.add_product(a, other.hi);
        self.lo += a * other.lo;
    }

    #[inline]
    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }
}
