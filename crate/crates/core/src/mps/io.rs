//! Coefficient exchange format: `{d, D, terms: [{m, num, den}]}` with terms
//! in graded-lexicographic order and integers as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTerm {
    pub m: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub d: usize,
    #[serde(rename = "D")]
    pub degree: u32,
    pub terms: Vec<CoefficientTerm>,
}

impl From<&Series> for CoefficientFile {
    fn from(s: &Series) -> Self {
        CoefficientFile {
            d: s.dim(),
            degree: s.degree(),
            terms: s
                .terms()
                .map(|(m, c)| CoefficientTerm {
                    m: m.exponents().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&CoefficientFile> for Series {
    type Error = SeriesError;

    fn try_from(file: &CoefficientFile) -> Result<Self, Self::Error> {
        let terms = file
            .terms
            .iter()
            .map(|t| {
                let bad = || SeriesError::BadCoefficient(format!("{}/{}", t.num, t.den));
                let num: BigInt = t.num.parse().map_err(|_| bad())?;
                let den: BigInt = t.den.parse().map_err(|_| bad())?;
                if den == BigInt::from(0) {
                    return Err(bad());
                }
                Ok((t.m.clone(), BigRational::new(num, den)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Series::from_terms(file.d, file.degree, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn round_trip_and_order() {
        let s = Series::from_terms(
            2,
            2,
            [(vec![0, 2], rat(-1, 3)), (vec![1, 0], rat(5, 1)), (vec![0, 0], rat(1, 1))],
        )
        .unwrap();
        let file = CoefficientFile::from(&s);
        let order: Vec<_> = file.terms.iter().map(|t| t.m.clone()).collect();
        assert_eq!(order, vec![vec![0, 0], vec![1, 0], vec![0, 2]]);
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"D\":2"));
        assert!(text.contains("\"num\":\"-1\",\"den\":\"3\""));
        let back: CoefficientFile = serde_json::from_str(&text).unwrap();
        assert_eq!(Series::try_from(&back).unwrap(), s);
    }
}
