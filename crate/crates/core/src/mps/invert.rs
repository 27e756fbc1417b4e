//! Compositional inversion of maps `z -> q(z)` with `q_i = z_i (1 + ...)`.

use num_traits::One;

use super::{Monomial, Series, SeriesError};

/// Given `q_i(z) = z_i u_i(z)` with `u_i(0) = 1`, returns `z(q)` with
/// `q(z(q)) = q` to the common truncation degree `D`.
///
/// Fixed-point iteration `z_i <- q_i / u_i(z)`: starting from `z = q`, each
/// round makes one more degree exact, so at most `D` rounds are needed.
pub fn invert_map(q: &[Series]) -> Result<Vec<Series>, SeriesError> {
    let d = q.len();
    if d == 0 {
        return Err(SeriesError::ZeroDimension);
    }
    let degree = q[0].degree();
    for (i, qi) in q.iter().enumerate() {
        if qi.dim() != d || qi.degree() != degree {
            return Err(SeriesError::ShapeMismatch(d, degree, qi.dim(), qi.degree()));
        }
        if degree == 0 {
            continue;
        }
        let mut lead = vec![0; d];
        lead[i] = 1;
        if !qi.coeff(&lead).is_one() {
            return Err(SeriesError::NotNormalized(i));
        }
        if qi.terms().any(|(m, _)| m.exponents()[i] == 0) {
            return Err(SeriesError::NotNormalized(i));
        }
    }
    if degree == 0 {
        return Ok(q.to_vec());
    }

    // 1/u_i, known exactly to degree D-1
    let inv_units = q
        .iter()
        .enumerate()
        .map(|(i, qi)| {
            let mut unit = Series::zero(d, degree - 1);
            for (m, c) in qi.terms() {
                let mut e = m.exponents().to_vec();
                e[i] -= 1;
                unit.terms.insert(Monomial::new(e), c.clone());
            }
            unit.reciprocal()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut z: Vec<Series> = (0..d).map(|i| Series::variable(d, degree, i)).collect();
    for _ in 0..degree {
        let lowered: Vec<Series> = z.iter().map(|zi| zi.truncate(degree - 1)).collect();
        let next = inv_units
            .iter()
            .enumerate()
            .map(|(i, v)| Ok(v.compose(&lowered)?.shift_up(i)))
            .collect::<Result<Vec<_>, SeriesError>>()?;
        if next == z {
            break;
        }
        z = next;
    }
    Ok(z)
}

/// `q(z(q)) - q`, zero when `z` inverts `q`.
pub fn round_trip_defect(q: &[Series], z: &[Series]) -> Result<Vec<Series>, SeriesError> {
    q.iter()
        .enumerate()
        .map(|(i, qi)| {
            let back = qi.compose(z)?;
            Ok(&back - &Series::variable(qi.dim(), qi.degree(), i))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn is_identity(q: &[Series], z: &[Series]) -> bool {
        round_trip_defect(q, z)
            .map(|v| v.iter().all(Series::is_zero))
            .unwrap_or(false)
    }

    #[test]
    fn identity_map_inverts_to_itself() {
        let q: Vec<_> = (0..2).map(|i| Series::variable(2, 5, i)).collect();
        assert_eq!(invert_map(&q).unwrap(), q);
    }

    #[test]
    fn one_variable_round_trip() {
        // q = z (1 + z); inverse z = q - q^2 + 2 q^3 - 5 q^4 + ... (Catalan, signed)
        let z = Series::variable(1, 5, 0);
        let q = &z + &z.pow(2);
        let inv = invert_map(std::slice::from_ref(&q)).unwrap();
        let expected = [0, 1, -1, 2, -5, 14];
        for (e, &c) in expected.iter().enumerate() {
            assert_eq!(inv[0].coeff(&[e as u32]), rat(c, 1));
        }
        assert!(is_identity(&[q], &inv));
    }

    #[test]
    fn two_variable_round_trip() {
        let (w, z) = (Series::variable(2, 6, 0), Series::variable(2, 6, 1));
        let q1 = &w + &(&(&w * &z).scale_int(3) + &w.pow(2));
        let q2 = &z + &(&(&z * &z).scale(&rat(1, 2)) + &(&w * &z));
        let inv = invert_map(&[q1.clone(), q2.clone()]).unwrap();
        assert!(is_identity(&[q1, q2], &inv));
    }

    #[test]
    fn rejects_unnormalized_input() {
        let z = Series::variable(1, 3, 0);
        let q = z.scale_int(2);
        assert_eq!(invert_map(&[q]), Err(SeriesError::NotNormalized(0)));
        let q = &z + &Series::one(1, 3);
        assert_eq!(invert_map(&[q]), Err(SeriesError::NotNormalized(0)));
    }
}
