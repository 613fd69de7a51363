use serde::Serialize;

use super::{BifurcateError, DeformationFamily};
use crate::jetcalc::{substitute_curve, Monomial, ParamPoly, TruncatedSeries, UniSeries};

/// Closed-form data for the deformed critical branch of `H = ψ_d + (λy, 0)`.
///
/// Dividing `−J(H)` by `x` leaves the quadratic `a y² + b y + c` in `y` with
/// `a = 9d x`, `b = 6x − 4`, `c = 3λx`; the branch through the origin is the
/// root `y = 2c / (−b + √Δ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HBranchSeries {
    /// `−J(H) = 3x²(λ + 2y + 3d y²) − 4xy`.
    pub critical_polynomial: TruncatedSeries,
    /// `[a, b, c]` as series in `x`.
    pub quadratic: [UniSeries; 3],
    pub discriminant: UniSeries,
    pub sqrt_discriminant: UniSeries,
    /// `y(x)` with coefficients in `λ` and `d`.
    pub branch: UniSeries,
}

impl HBranchSeries {
    /// `a y² + b y + c` along the branch; zero through the working order.
    pub fn residual(&self) -> UniSeries {
        let [a, b, c] = &self.quadratic;
        let y = &self.branch;
        &(&(&(a * y) * y) + &(b * y)) + c
    }

    /// `J(H)` along `(x, y(x))`, computed from the germ itself.
    pub fn jacobian_residual(&self) -> Result<UniSeries, BifurcateError> {
        let x = UniSeries::var(self.branch.order());
        Ok(substitute_curve(&self.critical_polynomial, &x, &self.branch)?)
    }
}

pub fn h_branch_series(delta: &ParamPoly, order: u32) -> Result<HBranchSeries, BifurcateError> {
    if delta.is_zero() {
        return Err(BifurcateError::DegenerateDelta);
    }
    let germ = DeformationFamily::h_family(order + 2, delta.clone()).generic();
    let jac = germ.jacobian_determinant();
    let critical = -&jac.truncate(jac.exact_to());
    let quotient = critical
        .div_monomial(Monomial::new(1, 0))
        .ok_or_else(|| BifurcateError::Unexpected("critical polynomial is not divisible by x".into()))?;
    // Coefficients of y^0, y^1, y^2 as series in x.
    let slice = |k: u32| {
        let coeffs = (0..=order).map(|i| quotient.coeff(i, k)).collect();
        UniSeries::from_coeffs(order, coeffs)
    };
    let (c, b, a) = (slice(0), slice(1), slice(2));
    if quotient.terms().any(|(m, _)| m.y > 2) {
        return Err(BifurcateError::Unexpected("critical polynomial is not quadratic in y".into()));
    }
    let four = ParamPoly::from_int(4);
    let discriminant = &(&b * &b) - &(&(&a * &c).scale(&four));
    let sqrt_discriminant = discriminant.sqrt()?;
    let denominator = &sqrt_discriminant - &b;
    let branch = (&c * &denominator.recip()?).scale(&ParamPoly::from_int(2));
    Ok(HBranchSeries {
        critical_polynomial: critical.with_order(order),
        quadratic: [a, b, c],
        discriminant,
        sqrt_discriminant,
        branch,
    })
}
