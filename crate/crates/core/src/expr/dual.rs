use core::ops::{Add, Div, Mul, Neg, Sub};

/// A value paired with its derivative with respect to `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualValue {
    pub value: f64,
    pub deriv: f64,
}

impl DualValue {
    pub const fn new(value: f64, deriv: f64) -> Self {
        Self { value, deriv }
    }

    pub const fn constant(value: f64) -> Self {
        Self { value, deriv: 0.0 }
    }

    /// The independent variable at `x`.
    pub const fn variable(x: f64) -> Self {
        Self { value: x, deriv: 1.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.deriv.is_finite()
    }
}

impl Add for DualValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl Sub for DualValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl Mul for DualValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.value * rhs.value, self.deriv * rhs.value + self.value * rhs.deriv)
    }
}

/// Quotient rule; the caller rejects a zero denominator.
impl Div for DualValue {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let value = self.value / rhs.value;
        Self::new(value, (self.deriv - value * rhs.deriv) / rhs.value)
    }
}

impl Neg for DualValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.deriv)
    }
}
