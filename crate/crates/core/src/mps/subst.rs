//! Variable specialization: `z_i = z_j` and weighted rules `z_i = M z_j^N`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarRule {
    Keep,
    /// `z_i = z_target`.
    Equate(usize),
    /// `z_i = factor * z_target^power`.
    Weighted {
        factor: BigInt,
        power: u32,
        target: usize,
    },
}

/// One rule per variable (0-based). Variables left as [`VarRule::Keep`]
/// survive and become the variables of the specialized series, in their
/// original order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    rules: Vec<VarRule>,
}

/// Image of one original variable: `factor * y_target^power`, where
/// `target` indexes the surviving variables.
#[derive(Debug, Clone)]
struct Image {
    factor: BigInt,
    power: u32,
    target: usize,
}

impl Substitution {
    pub fn identity(dim: usize) -> Self {
        Substitution {
            rules: vec![VarRule::Keep; dim],
        }
    }

    pub fn new(rules: Vec<VarRule>) -> Result<Self, SeriesError> {
        let s = Substitution { rules };
        s.resolve()?;
        Ok(s)
    }

    /// Sets the rule for variable `i`, rejecting a second assignment.
    pub fn assign(&mut self, i: usize, rule: VarRule) -> Result<(), SeriesError> {
        if i >= self.rules.len() {
            return Err(SeriesError::BadSubstitution(format!(
                "variable z{} out of range (d={})",
                i + 1,
                self.rules.len()
            )));
        }
        if self.rules[i] != VarRule::Keep {
            return Err(SeriesError::BadSubstitution(format!(
                "z{} assigned twice",
                i + 1
            )));
        }
        self.rules[i] = rule;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[VarRule] {
        &self.rules
    }

    pub fn is_identity(&self) -> bool {
        self.rules.iter().all(|r| *r == VarRule::Keep)
    }

    /// Original indices of the surviving variables.
    pub fn survivors(&self) -> Vec<usize> {
        (0..self.rules.len())
            .filter(|&i| self.rules[i] == VarRule::Keep)
            .collect()
    }

    /// Parses comma-separated rules such as `z1=z2` or `z1=2*z2^3`
    /// (1-based variable names).
    pub fn parse(dim: usize, text: &str) -> Result<Self, SeriesError> {
        let mut sub = Substitution::identity(dim);
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part
                .split_once('=')
                .ok_or_else(|| SeriesError::BadSubstitution(format!("missing '=' in {part:?}")))?;
            let i = parse_var(lhs.trim())?;
            let rule = parse_rhs(rhs.trim())?;
            sub.assign(i, rule)?;
        }
        sub.resolve()?;
        Ok(sub)
    }

    fn resolve(&self) -> Result<Vec<Image>, SeriesError> {
        let d = self.rules.len();
        for rule in &self.rules {
            match rule {
                VarRule::Keep => {}
                VarRule::Equate(t) | VarRule::Weighted { target: t, .. } if *t >= d => {
                    return Err(SeriesError::BadSubstitution(format!(
                        "target z{} out of range (d={d})",
                        t + 1
                    )))
                }
                VarRule::Weighted { factor, power, .. } => {
                    if factor.is_zero() {
                        return Err(SeriesError::BadSubstitution("factor M must be nonzero".into()));
                    }
                    if *power == 0 {
                        return Err(SeriesError::BadSubstitution("power N must be >= 1".into()));
                    }
                }
                VarRule::Equate(_) => {}
            }
        }
        let survivors = self.survivors();
        if survivors.is_empty() {
            // every variable rewritten means the rules must loop somewhere
            let start = (0..d).find(|&i| self.rules[i] != VarRule::Keep).unwrap_or(0);
            return Err(SeriesError::CyclicSubstitution(start + 1));
        }
        let position: BTreeMap<usize, usize> =
            survivors.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        (0..d)
            .map(|i| {
                let mut factor = BigInt::one();
                let mut power = 1u32;
                let mut current = i;
                let mut steps = 0;
                loop {
                    let (m, n, next) = match &self.rules[current] {
                        VarRule::Keep => {
                            return Ok(Image {
                                factor,
                                power,
                                target: position[&current],
                            })
                        }
                        VarRule::Equate(t) => (BigInt::one(), 1u32, *t),
                        VarRule::Weighted {
                            factor: m,
                            power: n,
                            target,
                        } => (m.clone(), *n, *target),
                    };
                    // z_i = f * x^e with x = m * y^n  gives  f * m^e * y^{n e}
                    factor *= m.pow(power);
                    power *= n;
                    current = next;
                    steps += 1;
                    if steps > d {
                        return Err(SeriesError::CyclicSubstitution(i + 1));
                    }
                }
            })
            .collect()
    }
}

fn parse_var(s: &str) -> Result<usize, SeriesError> {
    let idx = s
        .strip_prefix('z')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| SeriesError::BadSubstitution(format!("bad variable name {s:?}")))?;
    Ok(idx - 1)
}

fn parse_rhs(s: &str) -> Result<VarRule, SeriesError> {
    let (factor, rest) = match s.split_once('*') {
        Some((m, rest)) => (
            m.trim()
                .parse::<BigInt>()
                .map_err(|_| SeriesError::BadSubstitution(format!("bad factor in {s:?}")))?,
            rest.trim(),
        ),
        None => (BigInt::one(), s),
    };
    let (var, power) = match rest.split_once('^') {
        Some((v, n)) => (
            v.trim(),
            n.trim()
                .parse::<u32>()
                .map_err(|_| SeriesError::BadSubstitution(format!("bad power in {s:?}")))?,
        ),
        None => (rest, 1),
    };
    let target = parse_var(var)?;
    if factor.is_one() && power == 1 {
        Ok(VarRule::Equate(target))
    } else {
        Ok(VarRule::Weighted {
            factor,
            power,
            target,
        })
    }
}

impl FromStr for VarRule {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rhs(s)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, rule) in self.rules.iter().enumerate() {
            let rhs = match rule {
                VarRule::Keep => continue,
                VarRule::Equate(t) => format!("z{}", t + 1),
                VarRule::Weighted {
                    factor,
                    power,
                    target,
                } => {
                    let mut t = String::new();
                    if !factor.is_one() {
                        t.push_str(&format!("{factor}*"));
                    }
                    t.push_str(&format!("z{}", target + 1));
                    if *power != 1 {
                        t.push_str(&format!("^{power}"));
                    }
                    t
                }
            };
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "z{}={rhs}", i + 1)?;
        }
        Ok(())
    }
}

impl Series {
    /// Image of the series under a substitution, as a series in the
    /// surviving variables truncated at the same degree. Exact to that
    /// degree because no rule lowers total degree.
    pub fn specialize(&self, sub: &Substitution) -> Result<Series, SeriesError> {
        if sub.dim() != self.dim {
            return Err(SeriesError::BadSubstitution(format!(
                "substitution has {} variables, series has {}",
                sub.dim(),
                self.dim
            )));
        }
        let images = sub.resolve()?;
        let new_dim = sub.survivors().len();
        let mut out = Series::zero(new_dim, self.degree);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_dim];
            let mut coeff = BigInt::one();
            for (e, img) in m.0.iter().zip(&images) {
                exps[img.target] += e * img.power;
                coeff *= img.factor.pow(*e);
            }
            let mono = Monomial(exps);
            if mono.degree() > self.degree {
                continue;
            }
            Series::accumulate(&mut out.terms, mono, c * BigRational::from_integer(coeff));
        }
        Ok(out)
    }
}
