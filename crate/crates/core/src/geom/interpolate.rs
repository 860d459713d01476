use num_bigint::BigInt;

use crate::arith::{rational_int, Rational};
use crate::error::{Error, Result};
use crate::poly::{forward_differences, IVPoly};

/// Fits the polynomial of degree at most `dim` through the counts at
/// `g = 1..=dim+1`, then checks it against the count at `g = dim+2`.
pub fn ehrhart_interpolate<F>(mut counter: F, dim: usize) -> Result<IVPoly>
where
    F: FnMut(i64) -> Result<BigInt>,
{
    let mut diffs: Vec<Rational> = (1..=dim as i64 + 1)
        .map(|g| counter(g).map(rational_int))
        .collect::<Result<_>>()?;
    forward_differences(&mut diffs);
    let poly = IVPoly::from_binomial_basis(&diffs);
    let at = dim as i64 + 2;
    let counted = rational_int(counter(at)?);
    let predicted = poly.eval_int(at);
    if predicted != counted {
        return Err(Error::NotPolynomial {
            degree: dim,
            at,
            predicted: predicted.to_string(),
            counted: counted.to_string(),
        });
    }
    Ok(poly)
}
