use std::fmt;

use num_complex::Complex64;

/// Which concrete category a scalar type lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarModel {
    /// Complex numbers at double precision: finite-dimensional Hilbert spaces.
    Complex,
    /// Booleans with `or`/`and`: sets and relations.
    Boolean,
    /// A quantale other than the booleans, identified by name.
    Quantale(&'static str),
}

impl ScalarModel {
    /// Name used in serialized documents, e.g. `complex` or `quantale:unit-interval`.
    pub fn name(&self) -> String {
        match self {
            ScalarModel::Complex => "complex".to_owned(),
            ScalarModel::Boolean => "boolean".to_owned(),
            ScalarModel::Quantale(q) => format!("quantale:{q}"),
        }
    }
}

impl fmt::Display for ScalarModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Scalars of a dagger compact category of matrices.
///
/// Addition is the sum (or join), multiplication the product, and `conj` the
/// involution used by the dagger. Exact models compare with `==`; the complex
/// model compares with a tolerance.
pub trait Scalar: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// True when equality is decided exactly rather than up to tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn conj(self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Distance used for residuals. Exact models return 0 or 1.
    fn distance(self, other: Self) -> f64;

    fn model() -> ScalarModel;

    /// The scalar `z` with `z·z·d = 1` in this model, used to normalise the
    /// matrix algebra on a `d`-dimensional space. In models where
    /// `1 + 1 = 1` this is always `1`.
    fn dimension_normaliser(d: usize) -> Self;

    /// The value as a complex number, in the complex model only.
    fn to_complex(self) -> Option<Complex64> {
        None
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }
    fn model() -> ScalarModel {
        ScalarModel::Complex
    }
    fn dimension_normaliser(d: usize) -> Self {
        Complex64::new(1.0 / (d as f64).sqrt(), 0.0)
    }
    fn to_complex(self) -> Option<Complex64> {
        Some(self)
    }
}

impl Scalar for bool {
    const EXACT: bool = true;

    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(self, rhs: Self) -> Self {
        self | rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self & rhs
    }
    fn conj(self) -> Self {
        self
    }
    fn distance(self, other: Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
    fn model() -> ScalarModel {
        ScalarModel::Boolean
    }
    fn dimension_normaliser(_d: usize) -> Self {
        true
    }
}
