//! The GKZ-type series `F_N`, `G_{L,N}`, `G_{i,N}`, canonical coordinates,
//! mirror-type maps, the differential operators `𝓛_{i,N}`, and a small
//! catalog of worked examples.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{b_product, harmonic_at, MultiIndex};
use crate::mps::{monomials_up_to, Monomial, Series, SeriesError, Substitution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkzError {
    #[error("spec needs d >= 1 and at least one vector N^(j)")]
    Empty,
    #[error("vector {0} has {1} entries, expected d = {2}")]
    Dimension(String, usize, usize),
    #[error("vector {0} has a negative entry")]
    Negative(String),
    #[error("k = {0} does not match the {1} vectors given")]
    CountMismatch(usize, usize),
    #[error("this operation needs a vector L")]
    MissingL,
    #[error("variable index {0} out of range for d = {1}")]
    IndexOutOfRange(usize, usize),
    #[error("L = {0} is not admissible: no N^(j) dominates it")]
    Inadmissible(String),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("cannot parse spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The data `(d, N^(1), ..., N^(k), L?)` of one problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkzSpec {
    d: usize,
    n: Vec<MultiIndex>,
    l: Option<MultiIndex>,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    d: usize,
    k: usize,
    #[serde(rename = "N")]
    n: Vec<Vec<i64>>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    l: Option<Vec<i64>>,
}

impl GkzSpec {
    pub fn new(d: usize, n: Vec<MultiIndex>, l: Option<MultiIndex>) -> Result<Self, GkzError> {
        if d == 0 || n.is_empty() {
            return Err(GkzError::Empty);
        }
        for v in n.iter().chain(l.iter()) {
            if v.dim() != d {
                return Err(GkzError::Dimension(v.to_string(), v.dim(), d));
            }
            if !v.is_nonneg() {
                return Err(GkzError::Negative(v.to_string()));
            }
        }
        Ok(GkzSpec { d, n, l })
    }

    /// Shorthand taking plain vectors; `d` is the length of the first one.
    pub fn from_vecs(n: &[&[i64]]) -> Result<Self, GkzError> {
        let d = n.first().map_or(0, |v| v.len());
        if d == 0 {
            return Err(GkzError::Empty);
        }
        GkzSpec::new(d, n.iter().map(|v| MultiIndex::new(v.to_vec())).collect(), None)
    }

    pub fn with_l(&self, l: MultiIndex) -> Result<Self, GkzError> {
        GkzSpec::new(self.d, self.n.clone(), Some(l))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.n.len()
    }

    pub fn n_list(&self) -> &[MultiIndex] {
        &self.n
    }

    pub fn l(&self) -> Option<&MultiIndex> {
        self.l.as_ref()
    }

    /// `B_N(m)`, zero when some `m_i < 0`.
    pub fn b(&self, m: &MultiIndex) -> BigInt {
        b_product(&self.n, m)
    }

    /// `0 <= L <= N^(j)` for some `j`.
    pub fn is_admissible(&self, l: &MultiIndex) -> bool {
        l.dim() == self.d && l.is_nonneg() && self.n.iter().any(|v| v.dominates(l))
    }

    pub fn require_admissible(&self, l: &MultiIndex) -> Result<(), GkzError> {
        if self.is_admissible(l) {
            Ok(())
        } else {
            Err(GkzError::Inadmissible(l.to_string()))
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GkzError> {
        let f: SpecFile = serde_json::from_str(text).map_err(|e| GkzError::Parse(e.to_string()))?;
        if f.k != f.n.len() {
            return Err(GkzError::CountMismatch(f.k, f.n.len()));
        }
        let n = f
            .n
            .into_iter()
            .map(|v| {
                if v.is_empty() {
                    Err(GkzError::Empty)
                } else {
                    Ok(MultiIndex::new(v))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let l = match f.l {
            Some(v) if v.is_empty() => return Err(GkzError::Empty),
            Some(v) => Some(MultiIndex::new(v)),
            None => None,
        };
        GkzSpec::new(f.d, n, l)
    }

    pub fn to_json(&self) -> String {
        let f = SpecFile {
            d: self.d,
            k: self.n.len(),
            n: self.n.iter().map(|v| v.as_slice().to_vec()).collect(),
            l: self.l.as_ref().map(|v| v.as_slice().to_vec()),
        };
        serde_json::to_string(&f).expect("spec serializes")
    }

    /// Inline form such as `N=((2,1))` or `N=((1,1),(2,2));L=(1,0)`.
    pub fn parse_inline(text: &str) -> Result<Self, GkzError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let n_text = field(&compact, "N=").ok_or_else(|| GkzError::Parse("missing N=".into()))?;
        let inner = n_text
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| GkzError::Parse(format!("bad vector list {n_text:?}")))?;
        let n = split_tuples(inner)?
            .into_iter()
            .map(parse_tuple)
            .collect::<Result<Vec<_>, _>>()?;
        let l = field(&compact, "L=").map(parse_tuple).transpose()?;
        let d = n.first().map_or(0, |v| v.len());
        if d == 0 {
            return Err(GkzError::Empty);
        }
        GkzSpec::new(
            d,
            n.into_iter().map(MultiIndex::new).collect(),
            l.map(MultiIndex::new),
        )
    }
}

impl fmt::Display for GkzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("N=(")?;
        for (j, v) in self.n.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")?;
        if let Some(l) = &self.l {
            write!(f, ";L={l}")?;
        }
        Ok(())
    }
}

// `key` starts a balanced parenthesized group; returns that group.
fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let start = text.find(key)? + key.len();
    let rest = &text[start..];
    let mut depth = 0i32;
    for (idx, c) in rest.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&rest[..=idx]);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_tuples(inner: &str) -> Result<Vec<&str>, GkzError> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (idx, c) in inner.char_indices() {
        match c {
            '(' => {
                if depth == 0 {
                    start = idx;
                }
                depth += 1;
            }
            ')' => {
                depth -= 1;
                if depth == 0 {
                    out.push(&inner[start..=idx]);
                }
            }
            ',' if depth == 0 => {}
            _ if depth == 0 => return Err(GkzError::Parse(format!("unexpected {c:?}"))),
            _ => {}
        }
    }
    if depth != 0 || out.is_empty() {
        return Err(GkzError::Parse(format!("unbalanced vector list {inner:?}")));
    }
    Ok(out)
}

fn parse_tuple(text: &str) -> Result<Vec<i64>, GkzError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| GkzError::Parse(format!("bad vector {text:?}")))?;
    inner
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| GkzError::Parse(format!("bad entry {s:?}"))))
        .collect()
}

fn to_index(m: &Monomial) -> MultiIndex {
    MultiIndex::new(m.to_i64())
}

/// Evaluates `f` at every monomial of degree `<= degree`, in parallel.
fn build_with<F>(d: usize, degree: u32, f: F) -> Series
where
    F: Fn(&MultiIndex) -> BigRational + Sync,
{
    let entries: Vec<(Vec<u32>, BigRational)> = monomials_up_to(d, degree)
        .into_par_iter()
        .map(|m| {
            let c = f(&to_index(&m));
            (m.exponents().to_vec(), c)
        })
        .collect();
    Series::from_terms(d, degree, entries).expect("monomials are in range")
}

/// `F_N = Σ B_N(m) z^m`.
pub fn build_f(spec: &GkzSpec, degree: u32) -> Series {
    build_with(spec.d, degree, |m| BigRational::from_integer(spec.b(m)))
}

/// `G_{L,N} = Σ H_{L·m} B_N(m) z^m` for the given `L`.
pub fn build_g_at(spec: &GkzSpec, l: &MultiIndex, degree: u32) -> Result<Series, GkzError> {
    if l.dim() != spec.d {
        return Err(GkzError::Dimension(l.to_string(), l.dim(), spec.d));
    }
    if !l.is_nonneg() {
        return Err(GkzError::Negative(l.to_string()));
    }
    Ok(build_with(spec.d, degree, |m| {
        harmonic_at(l.dot(m)) * BigRational::from_integer(spec.b(m))
    }))
}

/// `G_{L,N}` for the spec's own `L`.
pub fn build_g_l(spec: &GkzSpec, degree: u32) -> Result<Series, GkzError> {
    let l = spec.l.as_ref().ok_or(GkzError::MissingL)?;
    build_g_at(spec, l, degree)
}

/// `G_{i,N} = Σ (Σ_j N_i^(j) H_{N^(j)·m} − H_{m_i} Σ_j N_i^(j)) B_N(m) z^m`,
/// with `i` 0-based.
pub fn build_g_i(spec: &GkzSpec, i: usize, degree: u32) -> Result<Series, GkzError> {
    if i >= spec.d {
        return Err(GkzError::IndexOutOfRange(i, spec.d));
    }
    let weight: i64 = spec.n.iter().map(|v| v[i]).sum();
    Ok(build_with(spec.d, degree, |m| {
        let mut h = -harmonic_at(m[i]) * BigRational::from_integer(BigInt::from(weight));
        for v in &spec.n {
            if v[i] != 0 {
                h += harmonic_at(v.dot(m)) * BigRational::from_integer(BigInt::from(v[i]));
            }
        }
        h * BigRational::from_integer(spec.b(m))
    }))
}

/// Integer combination `G_{i,N} = Σ c_L G_{L,N}`: the vectors `N^(j)` with
/// weight `N_i^(j)` (merged when repeated, first appearance order), then
/// `e_i` with weight `−Σ_j N_i^(j)`. Zero weights are omitted.
pub fn decompose_gi(spec: &GkzSpec, i: usize) -> Result<Vec<(i64, MultiIndex)>, GkzError> {
    if i >= spec.d {
        return Err(GkzError::IndexOutOfRange(i, spec.d));
    }
    let mut out: Vec<(i64, MultiIndex)> = Vec::new();
    let mut push = |c: i64, l: MultiIndex| match out.iter_mut().find(|(_, x)| *x == l) {
        Some(entry) => entry.0 += c,
        None => out.push((c, l)),
    };
    let mut weight = 0;
    for v in &spec.n {
        push(v[i], v.clone());
        weight += v[i];
    }
    push(-weight, MultiIndex::unit(spec.d, i));
    out.retain(|(c, _)| *c != 0);
    Ok(out)
}

fn exp_quotient(g: &Series, f: &Series) -> Result<Series, GkzError> {
    Ok(g.checked_div(f)?.exp()?)
}

/// `q_{i,N} = z_i exp(G_{i,N}/F_N)`, truncated at total degree `degree`.
pub fn canonical_coordinate(spec: &GkzSpec, i: usize, degree: u32) -> Result<Series, GkzError> {
    if i >= spec.d {
        return Err(GkzError::IndexOutOfRange(i, spec.d));
    }
    if degree == 0 {
        return Ok(Series::zero(spec.d, 0));
    }
    let inner = degree - 1;
    let e = exp_quotient(&build_g_i(spec, i, inner)?, &build_f(spec, inner))?;
    Ok(e.shift_up(i))
}

/// `q_{L,N} = exp(G_{L,N}/F_N)`.
pub fn mirror_type_map(spec: &GkzSpec, l: &MultiIndex, degree: u32) -> Result<Series, GkzError> {
    exp_quotient(&build_g_at(spec, l, degree)?, &build_f(spec, degree))
}

/// A linear form `Σ_ℓ coeffs_ℓ θ_ℓ + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: MultiIndex,
    pub constant: i64,
}

/// `𝓛_{i,N} = θ_i^T − z_i Π_j Π_{r=1..N_i^(j)} (Σ_ℓ N_ℓ^(j) θ_ℓ + r)` with
/// `T = Σ_j N_i^(j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkzOperator {
    pub index: usize,
    pub dim: usize,
    pub theta_power: u32,
    pub factors: Vec<LinearForm>,
}

pub fn gkz_operator(spec: &GkzSpec, i: usize) -> Result<GkzOperator, GkzError> {
    if i >= spec.d {
        return Err(GkzError::IndexOutOfRange(i, spec.d));
    }
    let mut factors = Vec::new();
    for v in &spec.n {
        for r in 1..=v[i] {
            factors.push(LinearForm {
                coeffs: v.clone(),
                constant: r,
            });
        }
    }
    Ok(GkzOperator {
        index: i,
        dim: spec.d,
        theta_power: spec.n.iter().map(|v| v[i] as u32).sum(),
        factors,
    })
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, &c) in self.coeffs.as_slice().iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}")?;
            }
            write!(f, "θ{}", l + 1)?;
        }
        if first {
            write!(f, "{}", self.constant)
        } else {
            write!(f, "+{}", self.constant)
        }
    }
}

impl fmt::Display for GkzOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.theta_power {
            0 => f.write_str("1")?,
            1 => write!(f, "θ{}", self.index + 1)?,
            t => write!(f, "θ{}^{}", self.index + 1, t)?,
        }
        write!(f, " - z{}", self.index + 1)?;
        for form in &self.factors {
            write!(f, "({form})")?;
        }
        Ok(())
    }
}

/// The two-variable spec behind `𝒜_{α,β}`: `α−β` copies of `(1,1)` and
/// `β` copies of `(2,1)`.
pub fn apery_spec(alpha: u32, beta: u32) -> Result<GkzSpec, GkzError> {
    if alpha == 0 || beta > alpha {
        return Err(GkzError::BadParameters(format!(
            "need 0 <= beta <= alpha and alpha >= 1, got ({alpha}, {beta})"
        )));
    }
    let mut n = vec![MultiIndex::new(vec![1, 1]); (alpha - beta) as usize];
    n.extend(vec![MultiIndex::new(vec![2, 1]); beta as usize]);
    GkzSpec::new(2, n, None)
}

/// `𝒜_{α,β}`, `ℬ_{α,β}` and every `ℬ_{L,α,β}` with `L <= (2,1)`.
#[derive(Debug, Clone)]
pub struct AperySeries {
    pub a: Series,
    pub b: Series,
    pub b_l: Vec<(MultiIndex, Series)>,
}

pub fn apery_series(alpha: u32, beta: u32, degree: u32) -> Result<AperySeries, GkzError> {
    let spec = apery_spec(alpha, beta)?;
    let diag = diagonal();
    let a = build_f(&spec, degree).specialize(&diag)?;
    let b = build_g_i(&spec, 1, degree)?.specialize(&diag)?;
    let b_l = MultiIndex::up_to(&MultiIndex::new(vec![2, 1]))
        .map(|l| {
            let s = build_g_at(&spec, &l, degree)?.specialize(&diag)?;
            Ok((l, s))
        })
        .collect::<Result<Vec<_>, GkzError>>()?;
    Ok(AperySeries { a, b, b_l })
}

fn diagonal() -> Substitution {
    Substitution::parse(2, "z1=z2").expect("static substitution")
}

pub const CATALOG: [&str; 4] = ["bvs-33", "bvs-33-diagonal", "apery-zeta2", "apery-zeta3"];

pub fn example_catalog(name: &str) -> Result<(GkzSpec, Option<Substitution>), GkzError> {
    match name {
        "bvs-33" => Ok((GkzSpec::from_vecs(&[&[3, 3]])?, None)),
        "bvs-33-diagonal" => Ok((GkzSpec::from_vecs(&[&[3, 3]])?, Some(diagonal()))),
        "apery-zeta2" => Ok((apery_spec(2, 1)?, Some(diagonal()))),
        "apery-zeta3" => Ok((apery_spec(2, 2)?, Some(diagonal()))),
        other => Err(GkzError::UnknownExample(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn bvs() -> GkzSpec {
        GkzSpec::from_vecs(&[&[3, 3]]).unwrap()
    }

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn spec_validation() {
        assert!(GkzSpec::new(2, vec![mi(&[1])], None).is_err());
        assert!(GkzSpec::new(1, vec![mi(&[-1])], None).is_err());
        assert!(GkzSpec::new(1, vec![], None).is_err());
        let s = bvs();
        assert!(s.is_admissible(&mi(&[3, 0])));
        assert!(!s.is_admissible(&mi(&[4, 0])));
    }

    #[test]
    fn spec_formats() {
        let s = GkzSpec::parse_inline("N=((1,1),(2,2)); L=(1,0)").unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.l(), Some(&mi(&[1, 0])));
        let t = GkzSpec::from_json(&s.to_json()).unwrap();
        assert_eq!(s, t);
        let one = GkzSpec::parse_inline("N=((2,))").unwrap();
        assert_eq!(one.d(), 1);
        assert!(GkzSpec::from_json(r#"{"d":2,"k":2,"N":[[3,3]]}"#).is_err());
        assert!(GkzSpec::parse_inline("N=(2,1)").is_err());
    }

    #[test]
    fn f_examples() {
        let f = build_f(&bvs(), 3);
        assert_eq!(f.coeff(&[1, 1]), rat(720, 1));
        assert_eq!(f.coeff(&[0, 0]), rat(1, 1));
        let f = build_f(&GkzSpec::from_vecs(&[&[1, 1]]).unwrap(), 4);
        assert_eq!(f.coeff(&[2, 2]), rat(6, 1));
        assert_eq!(f.coeff(&[3, 1]), rat(4, 1));
    }

    #[test]
    fn g_examples() {
        let g = build_g_at(&bvs(), &mi(&[3, 3]), 2).unwrap();
        assert_eq!(g.coeff(&[1, 0]), rat(11, 1));
        assert_eq!(g.coeff(&[0, 0]), rat(0, 1));
        let g = build_g_at(&bvs(), &mi(&[1, 0]), 2).unwrap();
        assert_eq!(g.coeff(&[1, 0]), rat(6, 1));
        let gi = build_g_i(&bvs(), 0, 2).unwrap();
        assert_eq!(gi.coeff(&[1, 0]), rat(15, 1));
        assert_eq!(gi.coeff(&[0, 1]), rat(33, 1));
        assert!(build_g_i(&bvs(), 2, 2).is_err());
        assert_eq!(build_g_l(&bvs(), 2), Err(GkzError::MissingL));
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose_gi(&bvs(), 0).unwrap(),
            vec![(3, mi(&[3, 3])), (-3, mi(&[1, 0]))]
        );
        let s = GkzSpec::from_vecs(&[&[2, 0], &[1, 0]]).unwrap();
        assert!(decompose_gi(&s, 1).unwrap().is_empty());
        let s = GkzSpec::from_vecs(&[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(
            decompose_gi(&s, 0).unwrap(),
            vec![(-1, mi(&[1, 0])), (1, mi(&[1, 2]))]
        );
        let s = GkzSpec::from_vecs(&[&[1, 0], &[1, 0]]).unwrap();
        assert!(decompose_gi(&s, 0).unwrap().is_empty());
    }

    #[test]
    fn canonical_coordinate_low_terms() {
        let q = canonical_coordinate(&bvs(), 0, 2).unwrap();
        assert_eq!(q.coeff(&[1, 0]), rat(1, 1));
        assert_eq!(q.coeff(&[2, 0]), rat(15, 1));
        assert_eq!(q.coeff(&[1, 1]), rat(33, 1));
        assert_eq!(q.len(), 3);
    }

    #[test]
    fn mirror_map_negative_control() {
        let s = GkzSpec::from_vecs(&[&[1]]).unwrap();
        let q = mirror_type_map(&s, &mi(&[2]), 3).unwrap();
        assert_eq!(q.coeff(&[1]), rat(3, 2));
        let one = mirror_type_map(&bvs(), &mi(&[0, 0]), 4).unwrap();
        assert_eq!(one, Series::one(2, 4));
    }

    #[test]
    fn operator_shape() {
        let op = gkz_operator(&bvs(), 0).unwrap();
        assert_eq!(op.theta_power, 3);
        assert_eq!(op.factors.len(), 3);
        assert_eq!(
            op.to_string(),
            "θ1^3 - z1(3θ1+3θ2+1)(3θ1+3θ2+2)(3θ1+3θ2+3)"
        );
        let op = gkz_operator(&GkzSpec::from_vecs(&[&[1]]).unwrap(), 0).unwrap();
        assert_eq!(op.to_string(), "θ1 - z1(θ1+1)");
    }

    #[test]
    fn catalog_lookup() {
        let (s, sub) = example_catalog("bvs-33").unwrap();
        assert_eq!(s.d(), 2);
        assert!(sub.is_none());
        let (_, sub) = example_catalog("bvs-33-diagonal").unwrap();
        assert_eq!(sub.unwrap().to_string(), "z1=z2");
        assert!(matches!(
            example_catalog("nonexistent"),
            Err(GkzError::UnknownExample(_))
        ));
        assert!(apery_spec(0, 0).is_err());
        assert!(apery_spec(1, 2).is_err());
    }
}
