use num_bigint::BigInt;
use num_rational::BigRational;

use super::SolveError;

/// The three-prisoner light-on expectation
/// `(1 + 1/(a+b+c)) (2(a²b + b²c + c²a + ab² + bc² + ca²) + 3abc + a + b + c)`.
pub fn closed_form_t3(a: u64, b: u64, c: u64) -> Result<BigRational, SolveError> {
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let sum = &a + &b + &c;
    if sum == BigInt::from(0) {
        return Err(SolveError::ZeroTokens);
    }
    let cyclic =
        &a * &a * &b + &b * &b * &c + &c * &c * &a + &a * &b * &b + &b * &c * &c + &c * &a * &a;
    let bracket = BigInt::from(2) * cyclic + BigInt::from(3) * &a * &b * &c + &sum;
    let factor = BigRational::new(&sum + BigInt::from(1), sum);
    Ok(factor * BigRational::from_integer(bracket))
}
